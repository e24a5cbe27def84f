#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "risopt/channel.hpp"
#include "risopt/metrics.hpp"
#include "risopt/optimizers.hpp"

namespace risopt {

enum class Method {
  Random,
  MaxRSum,
  MinMseTot,
  MuiqSum,
  MuiqZf,
  MuiqMmse,
  BaselineSum,
  BaselineZf,
  BaselineMmse,
  BaselineMse,
};

inline constexpr Method kAllMethods[] = {
    Method::Random,      Method::MaxRSum,     Method::MinMseTot,
    Method::MuiqSum,     Method::MuiqZf,      Method::MuiqMmse,
    Method::BaselineSum, Method::BaselineZf,  Method::BaselineMmse,
    Method::BaselineMse,
};

const char* method_name(Method m);
std::optional<Method> parse_method(std::string_view name);

/// Metric each method is designed against (nullopt for Random).
std::optional<MetricKind> target_metric(Method m);

/// One Monte Carlo sweep: the cross product of RIS grids, user counts and
/// RIS-BS K-factors, every method run on shared per-trial realizations.
struct SweepSpec {
  std::vector<std::pair<int, int>> n_grid = {{4, 4}, {8, 4}, {8, 8}, {16, 8}};
  std::vector<int> k_list = {2, 5};
  std::vector<double> kappa_br_list = {std::numeric_limits<double>::infinity(), 1.0};
  std::vector<Method> methods = {Method::Random,  Method::MaxRSum, Method::MinMseTot,
                                 Method::MuiqSum, Method::MuiqZf,  Method::MuiqMmse};
  int trials = 200;
  int bits = 1;
  int repeats = 1;
  std::uint64_t seed = 1;
  int baseline_restarts = 20;
  int threads = 0;  ///< 0 = hardware concurrency

  void validate() const;
};

enum TrialFlag : unsigned {
  kTrialZfRankDeficient = 1u << 8,
  kTrialDesignFailed = 1u << 9,
};

/// One (trial, method, metric) measurement. `value` is always evaluated on
/// the full global channel at the designed phases; `design_objective` is the
/// optimizer's internal (separated) objective, NaN for Random.
struct TrialResult {
  int trial = 0;
  int n = 0;
  int k = 0;
  double kappa_br = 0.0;
  Method method = Method::Random;
  MetricKind metric = MetricKind::SumRate;
  double value = 0.0;
  long evaluations = 0;
  unsigned flags = 0;
  bool failed = false;
  double design_objective = 0.0;
};

/// Runs the sweep. Trials are scheduled across threads; per-trial substreams
/// make the result list independent of the schedule. Within a trial every
/// method sees the identical realization.
std::vector<TrialResult> run_sweep(const SystemConfig& cfg, const SweepSpec& spec);

struct SummaryRow {
  int n = 0;
  int k = 0;
  double kappa_br = 0.0;
  Method method = Method::Random;
  MetricKind metric = MetricKind::SumRate;
  double mean = 0.0;
  double stderr_mean = 0.0;
  long trials = 0;
  long failures = 0;
};

/// Per (N, K, kappa_br, method, metric): mean and standard error over
/// non-failed trials, in sweep order. Failed trials are counted, not dropped
/// silently.
std::vector<SummaryRow> aggregate(const std::vector<TrialResult>& results);

/// Header: N,K,kappa_br,method,metric,mean,stderr,trials,failures.
/// Floating-point values carry 12 significant digits; infinite kappa_br is
/// written as "inf".
void write_csv(const std::vector<SummaryRow>& rows, std::ostream& os);

/// %.12g formatting used across all emitted numbers.
std::string format_double(double v);

}  // namespace risopt
