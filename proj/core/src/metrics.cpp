#include "risopt/metrics.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace risopt {
namespace {

constexpr double kLog2E = 1.4426950408889634074;  // 1/ln(2)

void require_noise(double sigma2) {
  if (!(sigma2 > 0.0)) throw ValidationError("noise power sigma2 must be positive");
}

CMatrix gram(const CMatrix& h) { return hermitize(h.adjoint() * h); }

}  // namespace

const char* metric_name(MetricKind kind) {
  switch (kind) {
    case MetricKind::SumRate: return "SumRate";
    case MetricKind::ZfRate: return "ZfRate";
    case MetricKind::MmseRate: return "MmseRate";
    case MetricKind::MseTot: return "MseTot";
  }
  return "?";
}

double sum_rate(const CMatrix& h, double sigma2) {
  require_noise(sigma2);
  const Eigen::Index k = h.cols();
  CMatrix a = gram(h);
  a.diagonal().array() += sigma2;
  const Eigen::LLT<CMatrix> llt(a);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("sum_rate: sigma2 I + H^H H is not positive definite");
  }
  double log_det = 0.0;
  const auto& l = llt.matrixLLT();
  for (Eigen::Index i = 0; i < k; ++i) log_det += 2.0 * std::log(std::real(l(i, i)));
  return kLog2E * log_det - static_cast<double>(k) * std::log2(sigma2);
}

double zf_rate(const CMatrix& h, double sigma2) {
  require_noise(sigma2);
  if (h.rows() < h.cols()) {
    throw RankDeficiencyError("zf_rate: fewer receive antennas than streams",
                              std::numeric_limits<double>::infinity());
  }
  const CMatrix g = gram(h);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(g);
  if (es.info() != Eigen::Success) {
    throw NumericalError("zf_rate: eigendecomposition of H^H H failed");
  }
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  const double cond = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  if (!(lo > 0.0) || cond > kZfConditionLimit) {
    throw RankDeficiencyError("zf_rate: H^H H condition number " + std::to_string(cond) +
                                  " exceeds " + std::to_string(kZfConditionLimit),
                              cond);
  }
  const CMatrix inv = es.eigenvectors() *
                      es.eigenvalues().cwiseInverse().asDiagonal() *
                      es.eigenvectors().adjoint();
  double rate = 0.0;
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    rate += std::log2(1.0 + 1.0 / (sigma2 * std::real(inv(i, i))));
  }
  return rate;
}

double mmse_rate(const CMatrix& h, double sigma2) {
  require_noise(sigma2);
  CMatrix a = gram(h);
  a.diagonal().array() += sigma2;
  const CMatrix inv = a.llt().solve(CMatrix::Identity(a.rows(), a.cols()));
  double rate = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    rate += std::log2(1.0 / (sigma2 * std::real(inv(i, i))));
  }
  return rate;
}

double mse_tot(const CMatrix& h, double sigma2) {
  require_noise(sigma2);
  CMatrix a = gram(h);
  a.diagonal().array() += sigma2;
  const CMatrix inv = a.llt().solve(CMatrix::Identity(a.rows(), a.cols()));
  return sigma2 * std::real(inv.trace());
}

double direct_metric(MetricKind kind, const CMatrix& h, double sigma2) {
  switch (kind) {
    case MetricKind::SumRate: return sum_rate(h, sigma2);
    case MetricKind::ZfRate: return zf_rate(h, sigma2);
    case MetricKind::MmseRate: return mmse_rate(h, sigma2);
    case MetricKind::MseTot: return mse_tot(h, sigma2);
  }
  throw ValidationError("direct_metric: unknown metric kind");
}

}  // namespace risopt
