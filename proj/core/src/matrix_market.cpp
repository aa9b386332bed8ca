#include <istream>
#include <ostream>
#include <sstream>

#include "smoothsc/solvers.hpp"

namespace smoothsc {

namespace {

template <class T>
void write_mm(std::ostream& out, const CsrMatrix<T>& A, const char* field) {
  out << "%%MatrixMarket matrix coordinate " << field << " general\n";
  out << A.rows() << " " << A.cols() << " " << A.nnz() << "\n";
  out.precision(17);
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t k = A.row_begin(i); k < A.row_end(i); ++k) {
      out << i + 1 << " " << A.col(k) + 1 << " ";
      if constexpr (std::is_same_v<T, complex>)
        out << A.val(k).real() << " " << A.val(k).imag() << "\n";
      else
        out << A.val(k) << "\n";
    }
}

}  // namespace

void write_matrix_market(std::ostream& out, const CsrMatrix<double>& A) { write_mm(out, A, "real"); }
void write_matrix_market(std::ostream& out, const CsrMatrix<complex>& A) { write_mm(out, A, "complex"); }

CsrMatrix<double> read_matrix_market(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("%%MatrixMarket", 0) != 0)
    throw std::runtime_error("matrix market: missing banner");
  std::istringstream banner(line);
  std::string tag, object, format, field, symmetry;
  banner >> tag >> object >> format >> field >> symmetry;
  if (object != "matrix" || format != "coordinate" || (field != "real" && field != "integer"))
    throw std::runtime_error("matrix market: only real coordinate matrices are supported");
  const bool symmetric = symmetry == "symmetric";
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '%') break;
  std::istringstream dims(line);
  std::size_t nr = 0, nc = 0, nnz = 0;
  if (!(dims >> nr >> nc >> nnz)) throw std::runtime_error("matrix market: malformed size line");
  TripletBuilder<double> b(nr, nc);
  for (std::size_t k = 0; k < nnz; ++k) {
    long long i = 0, j = 0;
    double v = 0.0;
    if (!(in >> i >> j >> v)) throw std::runtime_error("matrix market: truncated entries");
    b.add(static_cast<int>(i - 1), static_cast<int>(j - 1), v);
    if (symmetric && i != j) b.add(static_cast<int>(j - 1), static_cast<int>(i - 1), v);
  }
  return b.build();
}

}  // namespace smoothsc
