// Command-line front end: `run` executes a Monte Carlo sweep and writes the
// summary CSV, `single` dumps one trial for inspection, `validate` runs a
// built-in battery of invariant and oracle checks.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "risopt/config.hpp"
#include "risopt/harness.hpp"
#include "risopt/numerics.hpp"
#include "risopt/separation.hpp"

namespace {

using namespace risopt;

struct CommonArgs {
  std::string config_path;
  std::string methods;
  std::int64_t seed = -1;
  int trials = -1;
  int threads = -1;
};

RunConfig resolve_config(const CommonArgs& args) {
  RunConfig cfg;
  if (!args.config_path.empty()) cfg = load_config_file(args.config_path);
  if (args.seed >= 0) {
    cfg.system.seed = static_cast<std::uint64_t>(args.seed);
    cfg.sweep.seed = cfg.system.seed;
  }
  if (args.trials >= 1) cfg.sweep.trials = args.trials;
  if (args.threads >= 1) cfg.sweep.threads = args.threads;
  if (!args.methods.empty()) {
    cfg.sweep.methods.clear();
    std::stringstream ss(args.methods);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto begin = item.find_first_not_of(" \t");
      if (begin == std::string::npos) continue;
      const auto end = item.find_last_not_of(" \t");
      const std::string name = item.substr(begin, end - begin + 1);
      const auto m = parse_method(name);
      if (!m) throw ValidationError("unknown method '" + name + "'");
      cfg.sweep.methods.push_back(*m);
    }
    if (cfg.sweep.methods.empty()) throw ValidationError("--methods resolved to an empty list");
  }
  return cfg;
}

int cmd_run(const CommonArgs& args, const std::string& out_path) {
  const RunConfig cfg = resolve_config(args);
  const std::vector<TrialResult> results = run_sweep(cfg.system, cfg.sweep);
  const std::vector<SummaryRow> summary = aggregate(results);
  if (out_path.empty()) {
    write_csv(summary, std::cout);
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw ValidationError("cannot open output file '" + out_path + "'");
    write_csv(summary, out);
    std::cerr << "wrote " << summary.size() << " summary rows to " << out_path << "\n";
  }
  return 0;
}

void print_vector(const char* label, const CVector& v) {
  std::cout << label << " [" << v.size() << "]\n";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    std::cout << "  " << format_double(std::real(v[i])) << (std::imag(v[i]) < 0 ? " - " : " + ")
              << format_double(std::abs(std::imag(v[i]))) << "j";
    if (i % 4 == 3 || i == v.size() - 1) std::cout << "\n";
  }
}

void print_matrix(const char* label, const CMatrix& m) {
  std::cout << label << " [" << m.rows() << "x" << m.cols() << "]\n";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    std::cout << " ";
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      std::cout << " (" << format_double(std::real(m(r, c))) << ","
                << format_double(std::imag(m(r, c))) << ")";
    }
    std::cout << "\n";
  }
}

int cmd_single(const CommonArgs& args) {
  const RunConfig cfg = resolve_config(args);
  SystemConfig sys = cfg.system;
  sys.validate();
  const double sigma2 = sys.noise_power();

  RandomStream rng = RandomStream::derive(cfg.sweep.seed, 0, 0, 0);
  const UserDrop drop = drop_users(sys, rng);
  UserChannels users = gen_user_channels(sys, drop, rng);
  RisBsChannel ris = gen_ris_bs_channel(sys, rng);
  ChannelRealization real;
  real.h_d = std::move(users.h_d);
  real.h_ru = std::move(users.h_ru);
  real.h_br = std::move(ris.h_br);
  real.a_b = std::move(ris.a_b);
  real.a_r = std::move(ris.a_r);
  real.beta_br = ris.beta_br;
  real.pure_los = ris.pure_los;

  std::cout << "single trial, seed " << cfg.sweep.seed << "\n";
  std::cout << "M=" << sys.m() << " N=" << sys.n() << " K=" << sys.k
            << " kappa_br=" << (std::isinf(sys.kappa_br) ? "inf" : format_double(sys.kappa_br))
            << " sigma2=" << format_double(sigma2) << " beta_br=" << format_double(real.beta_br)
            << (real.pure_los ? " (pure LOS)" : " (scattered)") << "\n";
  for (int k = 0; k < sys.k; ++k) {
    std::cout << "user " << k << ": pos(" << format_double(drop.positions[k][0]) << ", "
              << format_double(drop.positions[k][1]) << ") d_bs=" << format_double(drop.dist_bs[k])
              << " d_ris=" << format_double(drop.dist_ris[k]) << "\n";
  }

  const SeparatedChannel sep = separate(real, sigma2, !real.pure_los);
  print_matrix("Q_sum", sep.q_sum);
  print_matrix("Q_zf", sep.q_zf);
  print_vector("w1", sep.w1);

  for (std::size_t mi = 0; mi < cfg.sweep.methods.size(); ++mi) {
    const Method method = cfg.sweep.methods[mi];
    RandomStream mrng = RandomStream::derive(cfg.sweep.seed, 0, 0, 1 + mi);
    OptimizerResult design;
    std::cout << "\n== " << method_name(method) << " ==\n";
    try {
      switch (method) {
        case Method::Random:
          design.phases = random_phases(sys.n(), mrng);
          break;
        case Method::MaxRSum:
          design = closed_form_sum_rate(sep);
          break;
        case Method::MinMseTot:
          design = closed_form_mse_tot(sep);
          break;
        case Method::MuiqSum:
          design = muiq(MetricKind::SumRate, sep, sys.bits, sys.repeats, sys.muiq_tie_accept);
          break;
        case Method::MuiqZf:
          design = muiq(MetricKind::ZfRate, sep, sys.bits, sys.repeats, sys.muiq_tie_accept);
          break;
        case Method::MuiqMmse:
          design = muiq(MetricKind::MmseRate, sep, sys.bits, sys.repeats, sys.muiq_tie_accept);
          break;
        case Method::BaselineSum:
          design = projected_ascent_baseline(MetricKind::SumRate, sep,
                                             cfg.sweep.baseline_restarts, mrng);
          break;
        case Method::BaselineZf:
          design = projected_ascent_baseline(MetricKind::ZfRate, sep,
                                             cfg.sweep.baseline_restarts, mrng);
          break;
        case Method::BaselineMmse:
          design = projected_ascent_baseline(MetricKind::MmseRate, sep,
                                             cfg.sweep.baseline_restarts, mrng);
          break;
        case Method::BaselineMse:
          design = projected_ascent_baseline(MetricKind::MseTot, sep,
                                             cfg.sweep.baseline_restarts, mrng);
          break;
      }
    } catch (const RankDeficiencyError& e) {
      std::cout << "design failed: " << e.what() << "\n";
      continue;
    }

    const PhaseVector physical =
        design.phases.is_discrete() ? design.phases.to_physical(real.a_r) : design.phases;
    std::cout << "phases";
    if (design.phases.is_discrete()) std::cout << " (grid indices resolved against a_r)";
    std::cout << ":\n ";
    for (int i = 0; i < physical.size(); ++i) {
      std::cout << " " << format_double(physical.phase(i));
      if (i % 8 == 7) std::cout << "\n ";
    }
    std::cout << "\n";
    print_vector("w", w_of_phases(sep, design.phases));
    if (method != Method::Random) {
      std::cout << "design objective: " << format_double(design.objective) << " ("
                << design.evaluations << " evaluations, flags " << design.flags << ")\n";
    }
    const CMatrix h = global_channel(real, design.phases);
    for (MetricKind kind : {MetricKind::SumRate, MetricKind::ZfRate, MetricKind::MmseRate,
                            MetricKind::MseTot}) {
      std::cout << metric_name(kind) << " = ";
      try {
        std::cout << format_double(direct_metric(kind, h, sigma2)) << "\n";
      } catch (const RankDeficiencyError& e) {
        std::cout << "rank deficient (" << format_double(e.condition) << ")\n";
      }
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// validate: a self-contained battery of invariant and oracle checks.
// ---------------------------------------------------------------------------

struct Validator {
  int failures = 0;
  void check(const std::string& name, bool ok, const std::string& detail = "") {
    std::cout << (ok ? "PASS" : "FAIL") << "  " << name;
    if (!detail.empty()) std::cout << "  [" << detail << "]";
    std::cout << "\n";
    if (!ok) ++failures;
  }
};

CMatrix random_complex(RandomStream& rng, int r, int c) {
  CMatrix m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = Complex(rng.normal(), rng.normal());
  return m;
}

int cmd_validate(std::uint64_t seed) {
  Validator v;
  RandomStream rng(seed);
  const double inf = std::numeric_limits<double>::infinity();

  SystemConfig sys;
  sys.m_y = 4;
  sys.m_z = 4;
  sys.n_y = 4;
  sys.n_z = 4;
  sys.k = 2;
  sys.c_d = sys.s_d = sys.c_ru = sys.s_ru = 4;
  const double sigma2 = sys.noise_power();

  {
    double worst = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
      const ChannelRealization real = generate_realization(sys, rng);
      const SeparatedChannel sep = separate(real, sigma2);
      const PhaseVector phases = random_phases(sys.n(), rng);
      const CMatrix h = global_channel(real, phases);
      for (MetricKind kind : {MetricKind::SumRate, MetricKind::ZfRate, MetricKind::MmseRate,
                              MetricKind::MseTot}) {
        const double direct = direct_metric(kind, h, sigma2);
        const double separated = separated_metric(kind, sep, phases);
        worst = std::max(worst, std::abs(separated - direct) / std::max(1e-300, std::abs(direct)));
      }
    }
    v.check("separation: all four metrics match direct evaluation (rel err < 1e-8)",
            worst < 1e-8, "worst " + format_double(worst));
  }

  {
    double worst = 0.0;
    for (int k = 2; k <= 6; ++k) {
      const CMatrix a = random_complex(rng, k, k);
      const CMatrix q = CMatrix(a * a.adjoint()) + 0.1 * CMatrix::Identity(k, k);
      CVector w(k);
      for (int i = 0; i < k; ++i) w[i] = Complex(rng.normal(), rng.normal());
      const CMatrix s = smw_inverse(q.inverse(), w);
      worst = std::max(worst,
                       (s * (q + w * w.adjoint()) - CMatrix::Identity(k, k)).norm());
      const Complex det_l = CMatrix(q + w * w.adjoint()).determinant();
      const Complex det_r = q.determinant() * (1.0 + w.dot(q.inverse() * w));
      worst = std::max(worst, std::abs(det_l - det_r) / std::abs(det_l));
    }
    v.check("rank-1 update: inversion and determinant lemmas (err < 1e-8)", worst < 1e-8,
            "worst " + format_double(worst));
  }

  {
    const ChannelRealization real = generate_realization(sys, rng);
    const CMatrix proj = CMatrix::Identity(sys.m(), sys.m()) -
                         (real.a_b * real.a_b.adjoint()) / double(sys.m());
    v.check("projector idempotence", (proj * proj - proj).norm() < 1e-12);
  }

  {
    double worst = 0.0;
    for (int rep = 0; rep < 10; ++rep) {
      const CMatrix raw = random_complex(rng, 4, 4);
      const CMatrix a = 0.5 * (raw + raw.adjoint());
      const EigenPair p = hermitian_max_eigenpair(a);
      worst = std::max(worst, (a * p.vector - p.value * p.vector).norm() / a.norm());
    }
    v.check("hermitian eigenpair residual < 1e-8", worst < 1e-8, "worst " + format_double(worst));
  }

  {
    bool ok = true;
    std::string detail;
    const ChannelRealization real = generate_realization(sys, rng);
    const SeparatedChannel sep = separate(real, sigma2);
    const OptimizerResult mu = muiq(MetricKind::MmseRate, sep, 2, 1);
    ok = ok && (mu.evaluations == static_cast<long>(sys.n()) * 4);
    for (std::size_t i = 1; i < mu.trace.size(); ++i) {
      ok = ok && mu.trace[i] >= mu.trace[i - 1];
    }
    detail = std::to_string(mu.evaluations) + " evaluations";
    v.check("muiq: exact evaluation count and monotone trace", ok, detail);
  }

  {
    SystemConfig tiny = sys;
    tiny.n_y = 2;
    tiny.n_z = 2;
    const ChannelRealization real = generate_realization(tiny, rng);
    const SeparatedChannel sep = separate(real, sigma2);
    const OptimizerResult bf = brute_force_discrete(MetricKind::MmseRate, sep, 2);
    const OptimizerResult mu = muiq(MetricKind::MmseRate, sep, 2, 1);
    v.check("muiq bounded by the brute-force optimum",
            mu.objective <= bf.objective + 1e-12 && mu.objective >= mu.trace.front() - 1e-12,
            "muiq " + format_double(mu.objective) + " vs brute " + format_double(bf.objective));
  }

  {
    double worst = 0.0;
    for (int rep = 0; rep < 10; ++rep) {
      const ChannelRealization real = generate_realization(sys, rng);
      const SeparatedChannel sep = separate(real, sigma2);
      const double nu = std::real(sep.w1.dot(sep.p_sum * sep.w1)) / sys.n();
      const ReducedEigResult red = reduced_max_eigvec(nu, sep.p_sum, sep.a1);
      CMatrix z = sep.a1 * sep.p_sum * sep.a1.adjoint();
      z.diagonal().array() += nu;
      Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitize(z));
      const double direct = es.eigenvalues().maxCoeff();
      worst = std::max(worst, std::abs(red.lambda - direct) / std::abs(direct));
    }
    v.check("reduced eigenvector route matches the N x N eigenvalue (rel err < 1e-9)",
            worst < 1e-9, "worst " + format_double(worst));
  }

  {
    SweepSpec spec;
    spec.n_grid = {{4, 4}};
    spec.k_list = {2};
    spec.kappa_br_list = {inf};
    spec.methods = {Method::Random, Method::MaxRSum, Method::MinMseTot};
    spec.trials = 3;
    spec.seed = seed;
    std::ostringstream a, b;
    write_csv(aggregate(run_sweep(sys, spec)), a);
    spec.threads = 2;
    write_csv(aggregate(run_sweep(sys, spec)), b);
    v.check("determinism: identical CSV bytes across runs and thread counts", a.str() == b.str());
  }

  {
    // quadratic-dominance diagnostic, reported only
    std::string report;
    for (const auto& [ny, nz] : {std::pair{4, 4}, std::pair{8, 8}}) {
      SystemConfig big = sys;
      big.n_y = ny;
      big.n_z = nz;
      double acc = 0.0;
      const int reps = 5;
      for (int rep = 0; rep < reps; ++rep) {
        const ChannelRealization real = generate_realization(big, rng);
        const SeparatedChannel sep = separate(real, sigma2);
        const OptimizerResult res = closed_form_sum_rate(sep);
        CVector x(big.n());
        for (int i = 0; i < big.n(); ++i) x[i] = std::polar(1.0, -res.phases.phase(i));
        const double cross = std::abs(2.0 * std::real(x.dot(sep.a1 * (sep.p_sum * sep.w1))));
        const CVector a1x = sep.a1.adjoint() * x;
        acc += cross / std::real(a1x.dot(sep.p_sum * a1x));
      }
      report += " N=" + std::to_string(ny * nz) + ": " + format_double(acc / reps);
    }
    v.check("quadratic-dominance ratio (diagnostic, smaller is stronger)", true, report);
  }

  std::cout << (v.failures == 0 ? "all checks passed" : std::to_string(v.failures) + " check(s) failed")
            << "\n";
  return v.failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RIS phase-design simulator: channel separation, discrete and closed-form"
               " optimizers, Monte Carlo sweeps"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string out_path;

  CLI::App* run = app.add_subcommand("run", "execute a Monte Carlo sweep and emit CSV");
  run->add_option("--config", args.config_path, "configuration file (flat key = value)");
  run->add_option("--seed", args.seed, "override the RNG seed");
  run->add_option("--out", out_path, "output CSV path (default: stdout)");
  run->add_option("--methods", args.methods, "comma-separated method list");
  run->add_option("--trials", args.trials, "override the trial count");
  run->add_option("--threads", args.threads, "worker thread count");

  CLI::App* validate = app.add_subcommand("validate", "run the invariant/oracle self-checks");
  std::int64_t validate_seed = 1;
  validate->add_option("--seed", validate_seed, "seed for the randomized checks");

  CLI::App* single = app.add_subcommand("single", "one trial: dump w, Q, phases and metrics");
  single->add_option("--config", args.config_path, "configuration file");
  single->add_option("--seed", args.seed, "override the RNG seed");
  single->add_option("--methods", args.methods, "comma-separated method list");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(args, out_path);
    if (single->parsed()) return cmd_single(args);
    if (validate->parsed()) return cmd_validate(static_cast<std::uint64_t>(validate_seed));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
