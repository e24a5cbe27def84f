#include "risopt/types.hpp"

namespace risopt {

double hermitian_deviation(const CMatrix& a) {
  if (a.rows() != a.cols()) {
    throw ValidationError("hermitian_deviation: matrix is not square");
  }
  const double scale = a.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  const double dev = (a - a.adjoint()).cwiseAbs().maxCoeff();
  return dev / scale;
}

bool is_hermitian(const CMatrix& a, double rel_tol) {
  return a.rows() == a.cols() && hermitian_deviation(a) <= rel_tol;
}

CMatrix hermitize(const CMatrix& a) { return 0.5 * (a + a.adjoint()); }

}  // namespace risopt
