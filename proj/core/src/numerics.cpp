#include "risopt/numerics.hpp"

#include <limits>
#include <string>

namespace risopt {
namespace {

constexpr double kHermitianTol = 1e-10;
constexpr double kRankTol = 1e-8;
constexpr double kDegenerateGap = 1e-10;
constexpr int kPowerIterationCap = 10000;
constexpr double kPowerIterationTol = 1e-12;

void require_square(const CMatrix& a, const char* who) {
  if (a.rows() != a.cols() || a.rows() < 1) {
    throw ValidationError(std::string(who) + ": expected a non-empty square matrix, got " +
                          std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
}

/// Rotates v so its largest-magnitude entry is real non-negative.
void apply_phase_convention(CVector& v) {
  Eigen::Index idx = 0;
  v.cwiseAbs().maxCoeff(&idx);
  const Complex pivot = v[idx];
  const double mag = std::abs(pivot);
  if (mag > 0.0) v *= std::conj(pivot) / mag;
}

bool gap_is_degenerate(double top, double second, double scale) {
  return (top - second) < kDegenerateGap * std::max(scale, 1e-300);
}

EigenPair power_iteration_top(const CMatrix& a) {
  const Eigen::Index k = a.rows();
  CVector v = CVector::Ones(k);
  for (Eigen::Index i = 0; i < k; ++i) v[i] += Complex(0.01 * static_cast<double>(i + 1), 0.0);
  v.normalize();
  const double scale = std::max(a.norm(), 1e-300);
  double lambda = 0.0;
  for (int it = 0; it < kPowerIterationCap; ++it) {
    CVector av = a * v;
    lambda = std::real(v.dot(av));
    if ((av - lambda * v).norm() <= kPowerIterationTol * scale) {
      apply_phase_convention(v);
      return EigenPair{lambda, v, false};
    }
    const double n = av.norm();
    if (n == 0.0) throw NumericalError("power iteration hit the zero vector");
    v = av / n;
  }
  throw NumericalError("power iteration did not converge within " +
                       std::to_string(kPowerIterationCap) + " iterations");
}

}  // namespace

EigenPair hermitian_max_eigenpair(const CMatrix& a) {
  require_square(a, "hermitian_max_eigenpair");
  const double dev = hermitian_deviation(a);
  if (dev > kHermitianTol) {
    throw ValidationError("hermitian_max_eigenpair: matrix is not Hermitian (relative deviation " +
                          std::to_string(dev) + ")");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitize(a));
  if (es.info() != Eigen::Success) {
    throw NumericalError("hermitian_max_eigenpair: eigendecomposition failed");
  }
  const Eigen::Index k = a.rows();
  const auto& vals = es.eigenvalues();  // ascending
  EigenPair out;
  out.value = vals[k - 1];
  out.vector = es.eigenvectors().col(k - 1);
  apply_phase_convention(out.vector);
  out.vector.normalize();
  if (k >= 2) {
    const double scale = std::max(std::abs(vals[k - 1]), std::abs(vals[0]));
    out.degenerate = gap_is_degenerate(vals[k - 1], vals[k - 2], scale);
  }
  return out;
}

EigenPair general_max_eigenpair(const CMatrix& a) {
  require_square(a, "general_max_eigenpair");
  Eigen::ComplexEigenSolver<CMatrix> es(a, /*computeEigenvectors=*/true);
  if (es.info() != Eigen::Success) {
    return power_iteration_top(a);
  }
  const auto& vals = es.eigenvalues();
  const Eigen::Index k = a.rows();
  Eigen::Index best = 0;
  double second = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 1; i < k; ++i) {
    if (vals[i].real() > vals[best].real()) {
      second = vals[best].real();
      best = i;
    } else {
      second = std::max(second, vals[i].real());
    }
  }
  EigenPair out;
  out.value = vals[best].real();
  out.vector = es.eigenvectors().col(best);
  apply_phase_convention(out.vector);
  out.vector.normalize();
  if (k >= 2) {
    out.degenerate = gap_is_degenerate(out.value, second, vals.cwiseAbs().maxCoeff());
  }
  return out;
}

Rank1Factors rank1_svd(const CMatrix& m) {
  if (m.rows() < 1 || m.cols() < 1) {
    throw ValidationError("rank1_svd: empty matrix");
  }
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  const double s1 = s[0];
  if (s1 <= 0.0) {
    throw ValidationError("rank1_svd: zero matrix has no rank-1 factorization");
  }
  if (s.size() > 1 && s[1] > kRankTol * s1) {
    throw ValidationError("rank1_svd: matrix is not rank 1 (sigma2/sigma1 = " +
                          std::to_string(s[1] / s1) + ")");
  }
  Rank1Factors out;
  out.gain = s1;
  out.left = svd.matrixU().col(0);
  out.right = svd.matrixV().col(0);
  // Rotate u1 to the standard representative; the same factor applied to v1
  // leaves u1 v1^H unchanged.
  Eigen::Index idx = 0;
  out.left.cwiseAbs().maxCoeff(&idx);
  const Complex pivot = out.left[idx];
  const double mag = std::abs(pivot);
  if (mag > 0.0) {
    const Complex rot = std::conj(pivot) / mag;
    out.left *= rot;
    out.right *= rot;
  }
  return out;
}

CMatrix smw_inverse(const CMatrix& q_inv, const CVector& w) {
  require_square(q_inv, "smw_inverse");
  if (w.size() != q_inv.rows()) {
    throw ValidationError("smw_inverse: w length does not match the matrix dimension");
  }
  const CVector qw = q_inv * w;
  const double denom = 1.0 + std::real(w.dot(qw));
  if (denom <= 0.0) {
    throw NumericalError("smw_inverse: 1 + w^H Q^{-1} w = " + std::to_string(denom) +
                         " is not positive; Q is not positive definite");
  }
  CMatrix out = q_inv - (qw * qw.adjoint()) / denom;
  return hermitize(out);
}

ReducedEigResult reduced_max_eigvec(double alpha, const CMatrix& b, const CMatrix& c) {
  require_square(b, "reduced_max_eigvec");
  const Eigen::Index k = b.rows();
  const Eigen::Index n = c.rows();
  if (c.cols() != k) {
    throw ValidationError("reduced_max_eigvec: c must be N x K with K matching b");
  }
  if (k >= n) {
    throw ValidationError("reduced_max_eigvec: reduction requires K < N");
  }
  if (alpha < 0.0) {
    throw ValidationError("reduced_max_eigvec: alpha must be non-negative");
  }
  CMatrix reduced = b * (c.adjoint() * c);
  reduced.diagonal().array() += alpha;
  const EigenPair pair = is_hermitian(reduced, kHermitianTol)
                             ? hermitian_max_eigenpair(reduced)
                             : general_max_eigenpair(reduced);
  ReducedEigResult out;
  out.lambda = pair.value;
  out.degenerate = pair.degenerate;
  // The phase convention is carried by y; rotating C y again would lose it.
  out.x_star = c * pair.vector;
  const double nrm = out.x_star.norm();
  if (nrm > 0.0) {
    out.x_star /= nrm;
  } else {
    out.degenerate = true;
  }
  return out;
}

}  // namespace risopt
