#include <Eigen/Cholesky>
#include <random>
#include <sstream>

#include "doctest.h"
#include "smoothsc/operator.hpp"
#include "smoothsc/solvers.hpp"
#include "test_util.hpp"

using namespace smoothsc;
using test::laplace_1d;
using test::random_spd;
using test::random_vector;

TEST_CASE("sparse matrix-vector products") {
  TripletBuilder<double> b(2, 3);
  b.add(0, 0, 1.0);
  b.add(0, 2, 2.0);
  b.add(1, 1, 3.0);
  b.add(0, 2, 1.0);  // duplicates are summed
  const CsrMatrix<double> A = b.build();
  CHECK(A.nnz() == 3);
  CHECK(A(0, 2) == 3.0);
  CHECK(A(1, 0) == 0.0);
  const Vector<double> y = A * Vector<double>{1, 2, 3};
  CHECK(y == Vector<double>{10, 6});
  CHECK(A.transpose_multiply(Vector<double>{1, 1}) == Vector<double>{1, 3, 3});
  const Vector<double> two{1, 2}, three{1, 2, 3};
  CHECK_THROWS_AS(A * two, DimensionError);
  CHECK_THROWS_AS(A.transpose_multiply(three), DimensionError);

  const CsrMatrix<double> I = CsrMatrix<double>::identity(4);
  const Vector<double> v{1, -2, 3, -4};
  CHECK(I * v == v);
  TripletBuilder<double> bad(2, 2);
  bad.add(2, 0, 1.0);
  CHECK_THROWS_AS(bad.build(), DimensionError);
}

TEST_CASE("transpose is consistent with transpose_multiply and dense") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-1, 1);
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(7, 5);
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 5; ++j)
      if ((i * 5 + j) % 3 == 0) D(i, j) = u(rng);
  const CsrMatrix<double> A = CsrMatrix<double>::from_dense(D);
  CHECK((A.to_dense() - D).norm() == 0.0);
  CHECK((A.transpose().to_dense() - D.transpose()).norm() == 0.0);
  const Vector<double> x = random_vector(7, rng);
  const Vector<double> a = A.transpose_multiply(x), b = A.transpose() * x;
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-15));
  const Eigen::MatrixXd P = multiply(A.transpose(), A).to_dense();
  CHECK((P - D.transpose() * D).norm() < 1e-13);
}

TEST_CASE("triangular solves") {
  // [[2,1],[1,2]]: lower part [[2,0],[1,2]] x = (2, 5) gives (1, 2).
  const CsrMatrix<double> A = CsrMatrix<double>::from_dense((Eigen::MatrixXd(2, 2) << 2, 1, 1, 2).finished());
  const Vector<double> lo = tri_solve(A, TriPart::lower_incl_diag, {2, 5});
  CHECK(lo[0] == doctest::Approx(1.0));
  CHECK(lo[1] == doctest::Approx(2.0));
  // Upper part [[2,1],[0,2]] x = (4, 4) gives (1, 2).
  const Vector<double> up = tri_solve(A, TriPart::upper_incl_diag, {4, 4});
  CHECK(up[0] == doctest::Approx(1.0));
  CHECK(up[1] == doctest::Approx(2.0));
  const CsrMatrix<double> Z = CsrMatrix<double>::from_dense((Eigen::MatrixXd(2, 2) << 1, 0, 1, 0).finished());
  CHECK_THROWS_AS(tri_solve(Z, TriPart::lower_incl_diag, {1, 1}), ZeroPivotError);
}

TEST_CASE("exact_solve") {
  const Vector<double> x = exact_solve(laplace_1d(3), {1, 1, 1});
  CHECK(x[0] == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(x[1] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(x[2] == doctest::Approx(1.5).epsilon(1e-12));
  std::mt19937_64 rng(43);
  const CsrMatrix<double> A = random_spd(40, rng);
  const Vector<double> b = random_vector(40, rng);
  const Eigen::VectorXd ref = A.to_dense().llt().solve(Eigen::Map<const Eigen::VectorXd>(b.data(), 40));
  const Vector<double> y = exact_solve(A, b);
  for (int i = 0; i < 40; ++i) CHECK(y[i] == doctest::Approx(ref[i]).epsilon(1e-10));
  CHECK(norm2(exact_solve(A, Vector<double>(40, 0.0))) == 0.0);
  // Complex symmetric system.
  Eigen::MatrixXcd C = A.to_dense().cast<complex>();
  for (int i = 0; i < 40; ++i) C(i, i) += complex(0, 3);
  const CsrMatrix<complex> Ac = CsrMatrix<complex>::from_dense(C);
  Vector<complex> bc(40);
  for (int i = 0; i < 40; ++i) bc[i] = complex(b[i], -b[i]);
  const Vector<complex> xc = exact_solve(Ac, bc);
  CHECK(norm2(bc - Ac * xc) <= 1e-11 * norm2(bc));
}

TEST_CASE("lambda_max by power iteration") {
  const CsrMatrix<double> A = laplace_1d(20);
  SUBCASE("S = A^{-1} gives 1") {
    const auto inv = inverse_operator(A);
    CHECK(lambda_max(inv, A, 20).lambda == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("S = D^{-1} gives 1 - cos(20 pi / 21)") {
    const JacobiOperator<double> J(A);
    const LambdaMaxResult r = lambda_max(J, A, 4000, 7);
    CHECK(r.lambda == doctest::Approx(1.0 - std::cos(20 * 3.14159265358979323846 / 21)).epsilon(1e-6));
    CHECK(r.history.size() == 4000);
    // Rayleigh quotients of a symmetric iteration increase monotonically.
    for (std::size_t i = 1; i < r.history.size(); ++i) CHECK(r.history[i] >= r.history[i - 1] - 1e-12);
  }
  SUBCASE("seeded runs are reproducible") {
    const JacobiOperator<double> J(A, 0.5);
    CHECK(lambda_max(J, A, 30, 9).lambda == lambda_max(J, A, 30, 9).lambda);
  }
}

TEST_CASE("Matrix Market round trip") {
  std::mt19937_64 rng(47);
  const CsrMatrix<double> A = random_spd(12, rng);
  std::stringstream ss;
  write_matrix_market(ss, A);
  CHECK(ss.str().rfind("%%MatrixMarket matrix coordinate real general", 0) == 0);
  const CsrMatrix<double> B = read_matrix_market(ss);
  CHECK(B.rows() == 12);
  CHECK(B.nnz() == A.nnz());
  CHECK((A.to_dense() - B.to_dense()).norm() == 0.0);
  std::istringstream bad("not a matrix\n");
  CHECK_THROWS(read_matrix_market(bad));
}

TEST_CASE("Jacobi operator rejects zero diagonals") {
  const CsrMatrix<double> Z = CsrMatrix<double>::from_dense((Eigen::MatrixXd(2, 2) << 0, 1, 1, 1).finished());
  CHECK_THROWS_AS(JacobiOperator<double>{Z}, ZeroPivotError);
}
