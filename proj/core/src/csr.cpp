#include "smoothsc/csr.hpp"

namespace smoothsc {

template class CsrMatrix<double>;
template class CsrMatrix<complex>;
template class TripletBuilder<double>;
template class TripletBuilder<complex>;

}  // namespace smoothsc
