#pragma once

#include "risopt/types.hpp"

namespace risopt {

enum class MetricKind { SumRate, ZfRate, MmseRate, MseTot };

/// False only for MseTot, which is minimized.
constexpr bool is_maximization(MetricKind kind) { return kind != MetricKind::MseTot; }

const char* metric_name(MetricKind kind);

/// Condition-number ceiling past which the ZF combiner is reported as rank
/// deficient instead of evaluated.
inline constexpr double kZfConditionLimit = 1e12;

/// log2 det(I + H^H H / sigma2), in bits/s/Hz.
double sum_rate(const CMatrix& h, double sigma2);

/// sum_k log2(1 + 1/(sigma2 [(H^H H)^{-1}]_kk)). Raises RankDeficiencyError
/// when H^H H is singular beyond kZfConditionLimit.
double zf_rate(const CMatrix& h, double sigma2);

/// sum_k log2(1 / (sigma2 [(sigma2 I + H^H H)^{-1}]_kk)).
double mmse_rate(const CMatrix& h, double sigma2);

/// Total MMSE symbol-estimation error sigma2 * tr((sigma2 I + H^H H)^{-1}),
/// with unit symbol power. Lies in (0, K].
double mse_tot(const CMatrix& h, double sigma2);

double direct_metric(MetricKind kind, const CMatrix& h, double sigma2);

}  // namespace risopt
