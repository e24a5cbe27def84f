#pragma once

#include "risopt/types.hpp"

namespace risopt {

/// Top eigenpair of a square matrix. The eigenvector has unit 2-norm and its
/// largest-magnitude entry is rotated to be real non-negative, so repeated
/// runs return the same representative. `degenerate` is set when the top
/// eigenvalue is separated from the runner-up by less than 1e-10 relative.
struct EigenPair {
  double value = 0.0;
  CVector vector;
  bool degenerate = false;
};

/// Algebraically largest eigenpair of a Hermitian matrix. Rejects inputs
/// whose Hermitian deviation exceeds 1e-10 relative.
EigenPair hermitian_max_eigenpair(const CMatrix& a);

/// Eigenpair of largest real part for a general square matrix. Falls back to
/// power iteration (cap 10000, tolerance 1e-12) if the dense solver fails;
/// exceeding the cap raises NumericalError with the iteration count.
EigenPair general_max_eigenpair(const CMatrix& a);

struct Rank1Factors {
  double gain = 0.0;  // the single non-zero singular value
  CVector left;       // unit norm
  CVector right;      // unit norm
};

/// Factors a numerically rank-1 matrix as gain * left * right^H. Inputs with
/// sigma2/sigma1 > 1e-8 are rejected with the offending ratio in the message.
Rank1Factors rank1_svd(const CMatrix& m);

/// (q + w w^H)^{-1} from the cached inverse of a Hermitian positive definite
/// q (Sherman-Morrison). Raises NumericalError if 1 + w^H q^{-1} w <= 0.
CMatrix smw_inverse(const CMatrix& q_inv, const CVector& w);

struct ReducedEigResult {
  CVector x_star;      // unit-norm top eigenvector of alpha*I_N + c b c^H
  double lambda = 0.0;
  bool degenerate = false;
};

/// Top eigenpair of the N x N matrix alpha*I_N + c b c^H computed through the
/// K x K matrix alpha*I_K + b c^H c (K < N): if y is its top eigenvector then
/// c y is an eigenvector of the full matrix with the same eigenvalue.
ReducedEigResult reduced_max_eigvec(double alpha, const CMatrix& b, const CMatrix& c);

}  // namespace risopt
