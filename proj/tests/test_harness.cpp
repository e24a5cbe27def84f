#include <doctest.h>

#include <cmath>
#include <sstream>

#include "risopt/config.hpp"
#include "risopt/harness.hpp"

using namespace risopt;

namespace {

SystemConfig desk_system() {
  SystemConfig cfg;
  cfg.m_y = 4;
  cfg.m_z = 4;
  return cfg;
}

SweepSpec tiny_sweep() {
  SweepSpec spec;
  spec.n_grid = {{2, 2}};
  spec.k_list = {2};
  spec.kappa_br_list = {std::numeric_limits<double>::infinity()};
  spec.methods = {Method::Random, Method::MaxRSum};
  spec.trials = 1;
  spec.seed = 9;
  spec.threads = 1;
  return spec;
}

}  // namespace

TEST_CASE("run_sweep emits methods x metrics rows per trial") {
  const std::vector<TrialResult> rows = run_sweep(desk_system(), tiny_sweep());
  CHECK(rows.size() == 2 * 4);
  for (const TrialResult& r : rows) {
    CHECK(r.n == 4);
    CHECK(r.k == 2);
    CHECK(std::isfinite(r.value));
    CHECK_FALSE(r.failed);
  }
}

TEST_CASE("run_sweep is deterministic: identical CSV bytes for identical seeds") {
  SweepSpec spec = tiny_sweep();
  spec.trials = 5;
  spec.methods = {Method::Random, Method::MaxRSum, Method::MinMseTot, Method::MuiqMmse};

  std::ostringstream a, b;
  write_csv(aggregate(run_sweep(desk_system(), spec)), a);
  spec.threads = 2;  // scheduling must not matter
  write_csv(aggregate(run_sweep(desk_system(), spec)), b);
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("N,K,kappa_br,method,metric,mean,stderr,trials,failures\n", 0) == 0);
}

TEST_CASE("run_sweep shares the realization across methods within a trial") {
  // Random rows must be unaffected by which other methods run: the
  // realization and the per-method streams depend only on (seed, cell, trial).
  SweepSpec only_random = tiny_sweep();
  only_random.methods = {Method::Random};
  only_random.trials = 3;
  SweepSpec both = tiny_sweep();
  both.methods = {Method::Random, Method::MaxRSum, Method::MuiqSum};
  both.trials = 3;

  const auto rows_a = run_sweep(desk_system(), only_random);
  const auto rows_b = run_sweep(desk_system(), both);
  for (const TrialResult& ra : rows_a) {
    bool found = false;
    for (const TrialResult& rb : rows_b) {
      if (rb.method == Method::Random && rb.trial == ra.trial && rb.metric == ra.metric) {
        CHECK(rb.value == ra.value);
        found = true;
      }
    }
    CHECK(found);
  }
}

TEST_CASE("run_sweep: optimizer objective matches the full-channel metric on pure LOS") {
  SweepSpec spec = tiny_sweep();
  spec.n_grid = {{4, 4}};
  spec.methods = {Method::MaxRSum, Method::MinMseTot, Method::MuiqZf, Method::MuiqMmse};
  spec.trials = 10;
  const auto rows = run_sweep(desk_system(), spec);
  int checked = 0;
  for (const TrialResult& r : rows) {
    const auto target = target_metric(r.method);
    REQUIRE(target.has_value());
    if (r.metric != *target || r.failed) continue;
    CHECK(r.value == doctest::Approx(r.design_objective).epsilon(1e-8));
    ++checked;
  }
  CHECK(checked == 4 * 10);
}

TEST_CASE("run_sweep labels forced separation under a scattered RIS-BS channel") {
  SweepSpec spec = tiny_sweep();
  spec.kappa_br_list = {1.0};
  spec.methods = {Method::MaxRSum};
  const auto rows = run_sweep(desk_system(), spec);
  for (const TrialResult& r : rows) {
    CHECK((r.flags & kFlagForcedSeparation) != 0);
    CHECK(std::isfinite(r.value));
  }
}

TEST_CASE("run_sweep records design failures instead of dropping trials") {
  // M = 1 zeroes the projector, so Q_zf is singular and both the MuiqZf
  // design and every ZF evaluation fail; the rows must say so.
  SystemConfig cfg;
  cfg.m_y = 1;
  cfg.m_z = 1;
  SweepSpec spec = tiny_sweep();
  spec.methods = {Method::MuiqZf, Method::MaxRSum};
  const auto rows = run_sweep(cfg, spec);
  int design_failures = 0, zf_failures = 0, fine = 0;
  for (const TrialResult& r : rows) {
    if (r.method == Method::MuiqZf) {
      CHECK(r.failed);
      CHECK((r.flags & kTrialDesignFailed) != 0);
      ++design_failures;
    } else if (r.metric == MetricKind::ZfRate) {
      CHECK(r.failed);
      CHECK((r.flags & kTrialZfRankDeficient) != 0);
      ++zf_failures;
    } else {
      CHECK_FALSE(r.failed);
      CHECK(std::isfinite(r.value));
      ++fine;
    }
  }
  CHECK(design_failures == 4);
  CHECK(zf_failures == 1);
  CHECK(fine == 3);
}

TEST_CASE("aggregate: single trial and two-value cells") {
  TrialResult a;
  a.n = 4;
  a.k = 2;
  a.kappa_br = 1.0;
  a.method = Method::Random;
  a.metric = MetricKind::SumRate;
  a.value = 1.0;
  TrialResult b = a;
  b.trial = 1;
  b.value = 3.0;

  const auto single = aggregate({a});
  CHECK(single.size() == 1);
  CHECK(single[0].mean == 1.0);
  CHECK(single[0].stderr_mean == 0.0);
  CHECK(single[0].trials == 1);

  const auto pair = aggregate({a, b});
  CHECK(pair[0].mean == doctest::Approx(2.0));
  CHECK(pair[0].stderr_mean == doctest::Approx(1.0));
}

TEST_CASE("aggregate stderr matches its definition on a large cell") {
  RandomStream rng(500);
  std::vector<TrialResult> rows;
  double sum = 0.0, sum_sq = 0.0;
  const int n = 500;
  for (int i = 0; i < n; ++i) {
    TrialResult r;
    r.trial = i;
    r.method = Method::Random;
    r.metric = MetricKind::SumRate;
    r.value = rng.normal(5.0, 2.0);
    sum += r.value;
    sum_sq += r.value * r.value;
    rows.push_back(r);
  }
  const double mean = sum / n;
  const double sample_var = (sum_sq - n * mean * mean) / (n - 1);
  const auto agg = aggregate(rows);
  CHECK(agg[0].stderr_mean ==
        doctest::Approx(std::sqrt(sample_var / n)).epsilon(1e-12));
}

TEST_CASE("aggregate counts failures separately and keeps other metrics") {
  TrialResult ok;
  ok.method = Method::MuiqZf;
  ok.metric = MetricKind::ZfRate;
  ok.value = 2.0;
  TrialResult bad = ok;
  bad.trial = 1;
  bad.failed = true;
  bad.flags = kTrialZfRankDeficient;
  bad.value = std::numeric_limits<double>::quiet_NaN();
  const auto agg = aggregate({ok, bad});
  CHECK(agg[0].trials == 1);
  CHECK(agg[0].failures == 1);
  CHECK(agg[0].mean == 2.0);
}

TEST_CASE("csv formatting: 12 significant digits and inf kappa") {
  SummaryRow row;
  row.n = 16;
  row.k = 2;
  row.kappa_br = std::numeric_limits<double>::infinity();
  row.method = Method::MaxRSum;
  row.metric = MetricKind::SumRate;
  row.mean = 1.0 / 3.0;
  row.stderr_mean = 0.25;
  row.trials = 7;
  std::ostringstream os;
  write_csv({row}, os);
  CHECK(os.str() ==
        "N,K,kappa_br,method,metric,mean,stderr,trials,failures\n"
        "16,2,inf,MaxRSum,SumRate,0.333333333333,0.25,7,0\n");
}

TEST_CASE("mean SumRate ordering: closed form beats random over paired trials") {
  SystemConfig cfg = desk_system();
  SweepSpec spec;
  spec.n_grid = {{8, 8}};
  spec.k_list = {2};
  spec.kappa_br_list = {std::numeric_limits<double>::infinity()};
  spec.methods = {Method::Random, Method::MaxRSum};
  spec.trials = 50;
  spec.seed = 77;
  const auto agg = aggregate(run_sweep(cfg, spec));
  double random_mean = 0.0, designed_mean = 0.0;
  for (const SummaryRow& row : agg) {
    if (row.metric != MetricKind::SumRate) continue;
    if (row.method == Method::Random) random_mean = row.mean;
    if (row.method == Method::MaxRSum) designed_mean = row.mean;
  }
  CHECK(designed_mean > random_mean);
}

TEST_CASE("config parsing: defaults, overrides, lists and errors") {
  const RunConfig def = parse_config("");
  CHECK(def.system.m() == 32);
  CHECK(def.system.p_ref_db == -30.0);
  CHECK(def.system.gamma_ru == doctest::Approx(2.8));
  CHECK(def.system.noise_dbm == -80.0);
  CHECK(def.system.d_br == 51.0);
  CHECK(def.system.c_d == 20);
  CHECK(def.system.s_br == 16);
  CHECK(std::isinf(def.system.kappa_br));
  CHECK(def.system.d_b == 0.5);
  CHECK(def.system.d_r == doctest::Approx(0.2));

  const RunConfig cfg = parse_config(
      "# comment\n"
      "M_y = 4\n"
      "M_z = 4\n"
      "kappa_br = inf\n"
      "b = 3\n"
      "L = 2\n"
      "seed = 42\n"
      "n_grid = 4x4, 8x8\n"
      "k_list = 2, 5\n"
      "kappa_br_list = inf, 1\n"
      "methods = Random, MaxRSum, MuiqZf\n"
      "trials = 17\n");
  CHECK(cfg.system.m() == 16);
  CHECK(cfg.sweep.bits == 3);
  CHECK(cfg.sweep.repeats == 2);
  CHECK(cfg.sweep.seed == 42);
  CHECK(cfg.sweep.n_grid.size() == 2);
  CHECK(cfg.sweep.n_grid[1] == std::pair{8, 8});
  CHECK(cfg.sweep.k_list == std::vector<int>{2, 5});
  CHECK(std::isinf(cfg.sweep.kappa_br_list[0]));
  CHECK(cfg.sweep.methods.size() == 3);
  CHECK(cfg.sweep.trials == 17);

  CHECK_THROWS_AS(parse_config("unknown_key = 3\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("M_y\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("methods = NotAMethod\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("trials = many\n"), ValidationError);
}

TEST_CASE("method names round-trip") {
  for (Method m : kAllMethods) {
    const auto parsed = parse_method(method_name(m));
    REQUIRE(parsed.has_value());
    CHECK(*parsed == m);
  }
  CHECK_FALSE(parse_method("Bogus").has_value());
}
