#include "risopt/separation.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace risopt {
namespace {

constexpr double kLog2E = 1.4426950408889634074;

double log2_det_pd(const Eigen::LLT<CMatrix>& llt) {
  double log_det = 0.0;
  const auto& l = llt.matrixLLT();
  for (Eigen::Index i = 0; i < l.rows(); ++i) log_det += 2.0 * std::log(std::real(l(i, i)));
  return kLog2E * log_det;
}

}  // namespace

SeparatedChannel separate(const ChannelRealization& real, double sigma2, bool force_los) {
  if (!(sigma2 > 0.0)) throw ValidationError("separate: sigma2 must be positive");
  if (!real.pure_los && !force_los) {
    throw ValidationError(
        "channel separation requires rank-1 H_br; pass force_los to design on the LOS part");
  }
  const Eigen::Index m = real.h_d.rows();
  if (real.a_b.size() != m || real.a_r.size() != real.h_ru.rows()) {
    throw ValidationError("separate: steering vector dimensions do not match the channels");
  }

  SeparatedChannel sep;
  sep.sigma2 = sigma2;
  sep.a_r = real.a_r;
  sep.forced_los = force_los && !real.pure_los;

  const double inv_m = 1.0 / static_cast<double>(m);
  const CMatrix proj =
      CMatrix::Identity(m, m) - inv_m * (real.a_b * real.a_b.adjoint());
  sep.q_zf = hermitize(real.h_d.adjoint() * proj * real.h_d);
  sep.q_sum = sep.q_zf;
  sep.q_sum.diagonal().array() += sigma2;

  sep.w1 = real.h_d.adjoint() * real.a_b / std::sqrt(static_cast<double>(m));
  sep.a1 = std::sqrt(static_cast<double>(m) * real.beta_br) *
           (real.a_r.conjugate().asDiagonal() * real.h_ru);

  const Eigen::Index k = sep.q_sum.rows();
  const Eigen::LLT<CMatrix> llt(sep.q_sum);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("separate: Q_sum is not positive definite");
  }
  sep.p_sum = hermitize(llt.solve(CMatrix::Identity(k, k)));
  sep.log2_det_q_sum = log2_det_pd(llt);
  sep.trace_p_sum = std::real(sep.p_sum.trace());

  Eigen::SelfAdjointEigenSolver<CMatrix> es(sep.q_zf);
  if (es.info() != Eigen::Success) {
    throw NumericalError("separate: eigendecomposition of Q_zf failed");
  }
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  sep.zf_condition = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  sep.zf_invertible = lo > 0.0 && sep.zf_condition <= kZfConditionLimit;
  if (sep.zf_invertible) {
    sep.p_zf = hermitize(es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() *
                         es.eigenvectors().adjoint());
  }
  return sep;
}

CVector w_of_phases(const SeparatedChannel& sep, const PhaseVector& x) {
  if (x.size() != sep.n()) {
    throw ValidationError("w_of_phases: phase vector length does not match N");
  }
  CVector xc(sep.n());
  if (x.is_discrete()) {
    for (int i = 0; i < sep.n(); ++i) {
      xc[i] = std::conj(sep.a_r[i]) * std::polar(1.0, -x.phase(i));
    }
  } else {
    for (int i = 0; i < sep.n(); ++i) {
      xc[i] = std::polar(1.0, -x.phase(i));
    }
  }
  return sep.w1 + sep.a1.adjoint() * xc;
}

double separated_metric_from_w(MetricKind kind, const SeparatedChannel& sep, const CVector& w) {
  const Eigen::Index k = sep.q_sum.rows();
  switch (kind) {
    case MetricKind::SumRate: {
      const CVector pw = sep.p_sum * w;
      const double quad = 1.0 + std::real(w.dot(pw));
      return sep.log2_det_q_sum + std::log2(quad) -
             static_cast<double>(k) * std::log2(sep.sigma2);
    }
    case MetricKind::MmseRate: {
      const CVector pw = sep.p_sum * w;
      const double denom = 1.0 + std::real(w.dot(pw));
      double rate = 0.0;
      for (Eigen::Index i = 0; i < k; ++i) {
        const double s_ii = std::real(sep.p_sum(i, i)) - std::norm(pw[i]) / denom;
        rate += std::log2(1.0 / (sep.sigma2 * s_ii));
      }
      return rate;
    }
    case MetricKind::ZfRate: {
      if (!sep.zf_invertible) {
        throw RankDeficiencyError("separated ZF rate: Q_zf condition number " +
                                      std::to_string(sep.zf_condition) + " exceeds " +
                                      std::to_string(kZfConditionLimit),
                                  sep.zf_condition);
      }
      const CVector pw = sep.p_zf * w;
      const double denom = 1.0 + std::real(w.dot(pw));
      double rate = 0.0;
      for (Eigen::Index i = 0; i < k; ++i) {
        const double s_ii = std::real(sep.p_zf(i, i)) - std::norm(pw[i]) / denom;
        rate += std::log2(1.0 + 1.0 / (sep.sigma2 * s_ii));
      }
      return rate;
    }
    case MetricKind::MseTot: {
      const CVector pw = sep.p_sum * w;
      const double denom = 1.0 + std::real(w.dot(pw));
      return sep.sigma2 * (sep.trace_p_sum - pw.squaredNorm() / denom);
    }
  }
  throw ValidationError("separated_metric: unknown metric kind");
}

double separated_metric(MetricKind kind, const SeparatedChannel& sep, const PhaseVector& x) {
  return separated_metric_from_w(kind, sep, w_of_phases(sep, x));
}

}  // namespace risopt
