#pragma once

#include "risopt/channel.hpp"
#include "risopt/metrics.hpp"
#include "risopt/phase.hpp"
#include "risopt/types.hpp"

namespace risopt {

/// Everything the four metrics need once the rank-1 RIS-BS link has been
/// separated out of the global channel: the phase-independent K x K matrices
/// and the pieces of the phase-dependent w vector. Inverses, the log
/// determinant, and the trace are cached here once per realization so each
/// phase evaluation costs O(NK) for w plus O(K^2) for the metric.
struct SeparatedChannel {
  CVector w1;     ///< H_d^H a_b / sqrt(M)
  CMatrix a1;     ///< sqrt(M beta_br) Diag(a_r^H) H_ru, N x K
  CVector a_r;    ///< departure steering, for the discrete phase offset
  CMatrix q_sum;  ///< sigma2 I + H_d^H (I - a_b a_b^H / M) H_d
  CMatrix q_zf;   ///< q_sum - sigma2 I
  double sigma2 = 0.0;

  CMatrix p_sum;  ///< q_sum^{-1}
  CMatrix p_zf;   ///< q_zf^{-1}, valid only when zf_invertible
  bool zf_invertible = false;
  double zf_condition = 0.0;
  double log2_det_q_sum = 0.0;
  double trace_p_sum = 0.0;
  bool forced_los = false;  ///< separation was applied to the LOS part of a scattered H_br

  int n() const { return static_cast<int>(a1.rows()); }
  int k() const { return static_cast<int>(a1.cols()); }
};

/// Builds the separated form of a realization. Requires a pure-LOS H_br;
/// with force_los the LOS part sqrt(beta_br) a_b a_r^H is used instead, for
/// robustness runs where the design assumption is deliberately violated.
SeparatedChannel separate(const ChannelRealization& real, double sigma2, bool force_los = false);

/// w = w1 + A1^H x for the given phases. Continuous phases are the physical
/// ones (x_n = e^{-j phi_n}); discrete phases follow the Diag(a_r) Gamma
/// offset convention, which reduces to w = w1 + sqrt(M beta_br) H_ru^H e^{-j gamma}.
CVector w_of_phases(const SeparatedChannel& sep, const PhaseVector& x);

/// Metric value through the separated form; equals the direct metric on the
/// global channel whenever the realization was pure LOS.
double separated_metric(MetricKind kind, const SeparatedChannel& sep, const PhaseVector& x);

/// Hot path: metric from an already-computed w.
double separated_metric_from_w(MetricKind kind, const SeparatedChannel& sep, const CVector& w);

}  // namespace risopt
