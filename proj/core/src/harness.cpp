#include "risopt/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>
#include <thread>
#include <tuple>

#include "risopt/separation.hpp"

namespace risopt {
namespace {

constexpr MetricKind kAllMetrics[] = {MetricKind::SumRate, MetricKind::ZfRate,
                                      MetricKind::MmseRate, MetricKind::MseTot};

struct Cell {
  int n_y;
  int n_z;
  int k;
  double kappa_br;
};

OptimizerResult design_phases(Method m, const SeparatedChannel& sep, const SweepSpec& spec,
                              bool tie_accept, RandomStream& rng) {
  switch (m) {
    case Method::Random: {
      OptimizerResult out;
      out.phases = random_phases(sep.n(), rng);
      return out;
    }
    case Method::MaxRSum:
      return closed_form_sum_rate(sep);
    case Method::MinMseTot:
      return closed_form_mse_tot(sep);
    case Method::MuiqSum:
      return muiq(MetricKind::SumRate, sep, spec.bits, spec.repeats, tie_accept);
    case Method::MuiqZf:
      return muiq(MetricKind::ZfRate, sep, spec.bits, spec.repeats, tie_accept);
    case Method::MuiqMmse:
      return muiq(MetricKind::MmseRate, sep, spec.bits, spec.repeats, tie_accept);
    case Method::BaselineSum:
      return projected_ascent_baseline(MetricKind::SumRate, sep, spec.baseline_restarts, rng);
    case Method::BaselineZf:
      return projected_ascent_baseline(MetricKind::ZfRate, sep, spec.baseline_restarts, rng);
    case Method::BaselineMmse:
      return projected_ascent_baseline(MetricKind::MmseRate, sep, spec.baseline_restarts, rng);
    case Method::BaselineMse:
      return projected_ascent_baseline(MetricKind::MseTot, sep, spec.baseline_restarts, rng);
  }
  throw ValidationError("design_phases: unknown method");
}

}  // namespace

const char* method_name(Method m) {
  switch (m) {
    case Method::Random: return "Random";
    case Method::MaxRSum: return "MaxRSum";
    case Method::MinMseTot: return "MinMseTot";
    case Method::MuiqSum: return "MuiqSum";
    case Method::MuiqZf: return "MuiqZf";
    case Method::MuiqMmse: return "MuiqMmse";
    case Method::BaselineSum: return "BaselineSum";
    case Method::BaselineZf: return "BaselineZf";
    case Method::BaselineMmse: return "BaselineMmse";
    case Method::BaselineMse: return "BaselineMse";
  }
  return "?";
}

std::optional<Method> parse_method(std::string_view name) {
  for (Method m : kAllMethods) {
    if (name == method_name(m)) return m;
  }
  return std::nullopt;
}

std::optional<MetricKind> target_metric(Method m) {
  switch (m) {
    case Method::Random: return std::nullopt;
    case Method::MaxRSum: return MetricKind::SumRate;
    case Method::MinMseTot: return MetricKind::MseTot;
    case Method::MuiqSum: return MetricKind::SumRate;
    case Method::MuiqZf: return MetricKind::ZfRate;
    case Method::MuiqMmse: return MetricKind::MmseRate;
    case Method::BaselineSum: return MetricKind::SumRate;
    case Method::BaselineZf: return MetricKind::ZfRate;
    case Method::BaselineMmse: return MetricKind::MmseRate;
    case Method::BaselineMse: return MetricKind::MseTot;
  }
  return std::nullopt;
}

void SweepSpec::validate() const {
  if (trials < 1) throw ValidationError("sweep: trials must be >= 1");
  if (n_grid.empty()) throw ValidationError("sweep: n_grid must be non-empty");
  if (k_list.empty()) throw ValidationError("sweep: k_list must be non-empty");
  if (kappa_br_list.empty()) throw ValidationError("sweep: kappa_br_list must be non-empty");
  if (methods.empty()) throw ValidationError("sweep: methods must be non-empty");
  if (bits < 1) throw ValidationError("sweep: b must be >= 1");
  if (repeats < 1) throw ValidationError("sweep: L must be >= 1");
  if (baseline_restarts < 1) throw ValidationError("sweep: restarts must be >= 1");
  for (auto [ny, nz] : n_grid) {
    if (ny < 1 || nz < 1) throw ValidationError("sweep: RIS grid entries must be >= 1");
  }
  for (int k : k_list) {
    if (k < 1) throw ValidationError("sweep: user counts must be >= 1");
  }
  for (double kap : kappa_br_list) {
    if (!(kap > 0.0)) throw ValidationError("sweep: kappa_br values must be positive");
  }
}

std::vector<TrialResult> run_sweep(const SystemConfig& cfg, const SweepSpec& spec) {
  spec.validate();
  std::vector<Cell> cells;
  for (auto [ny, nz] : spec.n_grid) {
    for (int k : spec.k_list) {
      for (double kap : spec.kappa_br_list) {
        cells.push_back(Cell{ny, nz, k, kap});
      }
    }
  }
  // Config errors must surface before any trial runs.
  for (const Cell& cell : cells) {
    SystemConfig c = cfg;
    c.n_y = cell.n_y;
    c.n_z = cell.n_z;
    c.k = cell.k;
    c.kappa_br = cell.kappa_br;
    c.bits = spec.bits;
    c.repeats = spec.repeats;
    c.validate();
  }

  const std::size_t rows_per_trial = spec.methods.size() * std::size(kAllMetrics);
  const std::size_t work_items = cells.size() * static_cast<std::size_t>(spec.trials);
  std::vector<TrialResult> results(work_items * rows_per_trial);

  const auto run_trial = [&](std::size_t item) {
    const std::size_t cell_id = item / spec.trials;
    const int trial = static_cast<int>(item % spec.trials);
    const Cell& cell = cells[cell_id];
    SystemConfig c = cfg;
    c.n_y = cell.n_y;
    c.n_z = cell.n_z;
    c.k = cell.k;
    c.kappa_br = cell.kappa_br;
    c.bits = spec.bits;
    c.repeats = spec.repeats;

    RandomStream real_rng = RandomStream::derive(spec.seed, cell_id, trial, 0);
    const ChannelRealization real = generate_realization(c, real_rng);
    const double sigma2 = c.noise_power();
    const SeparatedChannel sep = separate(real, sigma2, /*force_los=*/!real.pure_los);

    TrialResult* row = &results[item * rows_per_trial];
    for (std::size_t mi = 0; mi < spec.methods.size(); ++mi) {
      const Method method = spec.methods[mi];
      RandomStream method_rng = RandomStream::derive(spec.seed, cell_id, trial, 1 + mi);

      TrialResult base;
      base.trial = trial;
      base.n = c.n();
      base.k = c.k;
      base.kappa_br = c.kappa_br;
      base.method = method;
      base.design_objective = std::numeric_limits<double>::quiet_NaN();

      OptimizerResult design;
      bool design_ok = true;
      try {
        design = design_phases(method, sep, spec, c.muiq_tie_accept, method_rng);
        base.evaluations = design.evaluations;
        base.flags = design.flags;
        if (method != Method::Random) base.design_objective = design.objective;
      } catch (const RankDeficiencyError&) {
        design_ok = false;
      }

      for (MetricKind metric : kAllMetrics) {
        TrialResult r = base;
        r.metric = metric;
        if (!design_ok) {
          r.failed = true;
          r.flags |= kTrialDesignFailed;
          r.value = std::numeric_limits<double>::quiet_NaN();
        } else {
          try {
            r.value = direct_metric(metric, global_channel(real, design.phases), sigma2);
          } catch (const RankDeficiencyError&) {
            r.failed = true;
            r.flags |= kTrialZfRankDeficient;
            r.value = std::numeric_limits<double>::quiet_NaN();
          }
        }
        *row++ = r;
      }
    }
  };

  int threads = spec.threads > 0 ? spec.threads
                                 : static_cast<int>(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;
  if (static_cast<std::size_t>(threads) > work_items) threads = static_cast<int>(work_items);

  if (threads == 1) {
    for (std::size_t item = 0; item < work_items; ++item) run_trial(item);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          while (true) {
            const std::size_t item = next.fetch_add(1);
            if (item >= work_items) break;
            run_trial(item);
          }
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& err : errors) {
      if (err) std::rethrow_exception(err);
    }
  }
  return results;
}

std::vector<SummaryRow> aggregate(const std::vector<TrialResult>& results) {
  if (results.empty()) throw ValidationError("aggregate: empty result stream");
  using Key = std::tuple<int, int, double, int, int>;
  struct Acc {
    double sum = 0.0;
    double sum_sq = 0.0;
    long count = 0;
    long failures = 0;
    std::size_t first_seen = 0;
  };
  std::map<Key, Acc> acc;
  std::size_t order = 0;
  for (const TrialResult& r : results) {
    const Key key{r.n, r.k, r.kappa_br, static_cast<int>(r.method), static_cast<int>(r.metric)};
    auto [it, inserted] = acc.try_emplace(key);
    if (inserted) it->second.first_seen = order;
    ++order;
    if (r.failed) {
      ++it->second.failures;
    } else {
      it->second.sum += r.value;
      it->second.sum_sq += r.value * r.value;
      ++it->second.count;
    }
  }
  std::vector<std::pair<std::size_t, SummaryRow>> rows;
  rows.reserve(acc.size());
  for (const auto& [key, a] : acc) {
    SummaryRow row;
    row.n = std::get<0>(key);
    row.k = std::get<1>(key);
    row.kappa_br = std::get<2>(key);
    row.method = static_cast<Method>(std::get<3>(key));
    row.metric = static_cast<MetricKind>(std::get<4>(key));
    row.trials = a.count;
    row.failures = a.failures;
    if (a.count > 0) {
      row.mean = a.sum / static_cast<double>(a.count);
      if (a.count > 1) {
        const double var =
            std::max(0.0, (a.sum_sq - a.sum * a.sum / static_cast<double>(a.count)) /
                              static_cast<double>(a.count - 1));
        row.stderr_mean = std::sqrt(var / static_cast<double>(a.count));
      }
    } else {
      row.mean = std::numeric_limits<double>::quiet_NaN();
    }
    rows.emplace_back(a.first_seen, row);
  }
  std::sort(rows.begin(), rows.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<SummaryRow> out;
  out.reserve(rows.size());
  for (auto& [_, row] : rows) out.push_back(row);
  return out;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void write_csv(const std::vector<SummaryRow>& rows, std::ostream& os) {
  os << "N,K,kappa_br,method,metric,mean,stderr,trials,failures\n";
  for (const SummaryRow& r : rows) {
    os << r.n << ',' << r.k << ','
       << (std::isinf(r.kappa_br) ? "inf" : format_double(r.kappa_br)) << ','
       << method_name(r.method) << ',' << metric_name(r.metric) << ','
       << format_double(r.mean) << ',' << format_double(r.stderr_mean) << ','
       << r.trials << ',' << r.failures << '\n';
  }
}

}  // namespace risopt
