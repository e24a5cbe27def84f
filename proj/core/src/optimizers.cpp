#include "risopt/optimizers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "risopt/numerics.hpp"

namespace risopt {
namespace {

constexpr double kFdStep = 1e-6;         // rad
constexpr double kAscentTol = 1e-10;
constexpr int kAscentMaxIters = 500;
constexpr double kInitialStep = 0.5;     // rad, along the normalized gradient
constexpr double kMinStep = 1e-12;

bool improves(MetricKind kind, double candidate, double incumbent) {
  return is_maximization(kind) ? candidate > incumbent : candidate < incumbent;
}

/// Phases of -x entrywise, i.e. the physical phases whose coefficient vector
/// e^{-j phi} matches x.
RVector phases_from_x(const CVector& x) {
  RVector out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = wrap_angle(-std::arg(x[i]));
  return out;
}

unsigned separation_flags(const SeparatedChannel& sep) {
  return sep.forced_los ? kFlagForcedSeparation : 0u;
}

OptimizerResult no_ris_result(MetricKind kind, const SeparatedChannel& sep) {
  OptimizerResult out;
  out.phases = PhaseVector::zeros(sep.n());
  out.flags |= kFlagNoRisTerm | separation_flags(sep);
  out.objective = separated_metric(kind, sep, out.phases);
  out.evaluations = 1;
  return out;
}

}  // namespace

OptimizerResult muiq(MetricKind kind, const SeparatedChannel& sep, int bits, int repeats,
                     bool tie_accept) {
  if (bits < 1) throw ValidationError("muiq: bits must be >= 1");
  if (repeats < 1) throw ValidationError("muiq: repeats must be >= 1");
  const int n = sep.n();
  const int grid = 1 << bits;

  // w-domain coefficient per grid index: conj(a_r_n) e^{-j gamma_m}; the
  // steering factor cancels Diag(a_r^H) inside A1, so the sweep updates
  // w = w1 + sqrt(M beta_br) H_ru^H e^{-j gamma}.
  std::vector<Complex> grid_coef(grid);
  for (int m = 0; m < grid; ++m) {
    grid_coef[m] = std::polar(1.0, -PhaseVector::grid_phase(m, bits));
  }
  const CVector a_r_conj = sep.a_r.conjugate();

  std::vector<int> idx(n, 0);
  CVector xc(n);
  const auto eval = [&](const std::vector<int>& ix) {
    for (int i = 0; i < n; ++i) xc[i] = a_r_conj[i] * grid_coef[ix[i]];
    return separated_metric_from_w(kind, sep, sep.w1 + sep.a1.adjoint() * xc);
  };

  OptimizerResult out;
  out.flags |= separation_flags(sep);
  double incumbent = eval(idx);
  out.trace.push_back(incumbent);
  for (int r = 0; r < repeats; ++r) {
    for (int i = 0; i < n; ++i) {
      const int keep = idx[i];
      int chosen = keep;
      for (int m = 0; m < grid; ++m) {
        idx[i] = m;
        const double v = eval(idx);
        ++out.evaluations;
        if (improves(kind, v, incumbent) || (tie_accept && v == incumbent)) {
          incumbent = v;
          chosen = m;
          out.trace.push_back(v);
        }
      }
      idx[i] = chosen;
    }
  }
  out.phases = PhaseVector::discrete(std::move(idx), bits);
  out.objective = separated_metric(kind, sep, out.phases);
  return out;
}

OptimizerResult closed_form_sum_rate(const SeparatedChannel& sep) {
  if (sep.a1.norm() == 0.0) return no_ris_result(MetricKind::SumRate, sep);
  const double nu =
      std::real(sep.w1.dot(sep.p_sum * sep.w1)) / static_cast<double>(sep.n());
  const ReducedEigResult red = reduced_max_eigvec(nu, sep.p_sum, sep.a1);
  OptimizerResult out;
  out.flags |= separation_flags(sep);
  if (red.degenerate) out.flags |= kFlagDegenerateEig;
  out.phases = PhaseVector::continuous(phases_from_x(red.x_star));
  out.objective = separated_metric(MetricKind::SumRate, sep, out.phases);
  out.evaluations = 1;
  return out;
}

OptimizerResult closed_form_mse_tot(const SeparatedChannel& sep) {
  if (sep.a1.norm() == 0.0) return no_ris_result(MetricKind::MseTot, sep);
  const Eigen::Index k = sep.q_sum.rows();
  const double n = static_cast<double>(sep.n());
  const CVector pw1 = sep.p_sum * sep.w1;
  const double alpha1 = pw1.squaredNorm() / n;
  const double alpha2 = (1.0 + std::real(sep.w1.dot(pw1))) / n;
  const CMatrix gram_a1 = hermitize(sep.a1.adjoint() * sep.a1);

  OptimizerResult out;
  out.flags |= separation_flags(sep);
  CMatrix reduced;
  if (alpha1 > 0.0) {
    const CMatrix lhs = alpha2 * sep.q_sum + gram_a1;  // alpha2 P^{-1} + A1^H A1
    const CMatrix z3 =
        lhs.llt().solve((alpha2 / alpha1) * sep.p_sum - CMatrix::Identity(k, k));
    reduced = CMatrix::Identity(k, k) + z3 * gram_a1;
  } else {
    // w1 = 0: maximize the plain quotient (x^H A1 P^2 A1^H x) /
    // (x^H (A1 P A1^H + I/N) x), reduced the same way.
    const CMatrix lhs = sep.q_sum / n + gram_a1;
    reduced = lhs.llt().solve(sep.p_sum * gram_a1);
    out.flags |= kFlagRayleighFallback;
  }
  const EigenPair pair = general_max_eigenpair(reduced);
  if (pair.degenerate) out.flags |= kFlagDegenerateEig;
  const CVector x_star = sep.a1 * pair.vector;
  if (x_star.norm() == 0.0) {
    out.phases = PhaseVector::zeros(sep.n());
    out.flags |= kFlagDegenerateEig;
  } else {
    out.phases = PhaseVector::continuous(phases_from_x(x_star));
  }
  out.objective = separated_metric(MetricKind::MseTot, sep, out.phases);
  out.evaluations = 1;
  return out;
}

PhaseVector random_phases(int n, RandomStream& rng) {
  if (n < 0) throw ValidationError("random_phases: negative length");
  RVector phases(n);
  for (int i = 0; i < n; ++i) phases[i] = rng.uniform(0.0, kTwoPi);
  return PhaseVector::continuous(std::move(phases));
}

OptimizerResult projected_ascent_baseline(MetricKind kind, const SeparatedChannel& sep,
                                          int restarts, RandomStream& rng) {
  if (restarts < 1) throw ValidationError("projected_ascent_baseline: restarts must be >= 1");
  const int n = sep.n();
  const double sign = is_maximization(kind) ? 1.0 : -1.0;
  long evals = 0;

  const auto coeffs_of = [&](const RVector& ph) {
    CVector x(n);
    for (int i = 0; i < n; ++i) x[i] = std::polar(1.0, -ph[i]);
    return x;
  };
  const auto value_at = [&](const RVector& ph) {
    ++evals;
    return sign * separated_metric_from_w(kind, sep, sep.w1 + sep.a1.adjoint() * coeffs_of(ph));
  };

  std::vector<RVector> starts;
  starts.push_back(kind == MetricKind::SumRate ? closed_form_sum_rate(sep).phases.phases()
                                               : closed_form_mse_tot(sep).phases.phases());
  for (int r = 0; r < restarts; ++r) starts.push_back(random_phases(n, rng).phases());

  RVector best_phases = starts.front();
  double best = -std::numeric_limits<double>::infinity();

  RVector grad(n);
  for (const RVector& start : starts) {
    RVector ph = start;
    CVector w = sep.w1 + sep.a1.adjoint() * coeffs_of(ph);
    double f = sign * separated_metric_from_w(kind, sep, w);
    ++evals;
    for (int iter = 0; iter < kAscentMaxIters; ++iter) {
      // Central differences; perturbing one phase shifts w by a rank-1 term.
      for (int i = 0; i < n; ++i) {
        const Complex base = std::polar(1.0, -ph[i]);
        const CVector col = sep.a1.row(i).adjoint();
        const CVector w_plus = w + col * (std::polar(1.0, -(ph[i] + kFdStep)) - base);
        const CVector w_minus = w + col * (std::polar(1.0, -(ph[i] - kFdStep)) - base);
        const double f_plus = sign * separated_metric_from_w(kind, sep, w_plus);
        const double f_minus = sign * separated_metric_from_w(kind, sep, w_minus);
        evals += 2;
        grad[i] = (f_plus - f_minus) / (2.0 * kFdStep);
      }
      const double gnorm = grad.norm();
      if (gnorm == 0.0) break;

      double step = kInitialStep;
      double improvement = 0.0;
      bool moved = false;
      while (step >= kMinStep) {
        const RVector cand = ph + (step / gnorm) * grad;
        const double fc = value_at(cand);
        if (fc > f) {
          improvement = fc - f;
          ph = cand;
          f = fc;
          w = sep.w1 + sep.a1.adjoint() * coeffs_of(ph);
          moved = true;
          break;
        }
        step *= 0.5;
      }
      if (!moved || improvement < kAscentTol) break;
    }
    if (f > best) {
      best = f;
      best_phases = ph;
    }
  }

  OptimizerResult out;
  out.flags |= separation_flags(sep);
  out.phases = PhaseVector::continuous(std::move(best_phases));
  out.objective = separated_metric(kind, sep, out.phases);
  out.evaluations = evals;
  return out;
}

OptimizerResult brute_force_discrete(MetricKind kind, const SeparatedChannel& sep, int bits) {
  if (bits < 1) throw ValidationError("brute_force_discrete: bits must be >= 1");
  const int n = sep.n();
  if (static_cast<long>(bits) * n > 20) {
    throw ValidationError("brute_force_discrete: 2^(b*N) with b*N = " +
                          std::to_string(static_cast<long>(bits) * n) +
                          " exceeds the 2^20 enumeration guard");
  }
  const int grid = 1 << bits;
  std::vector<Complex> grid_coef(grid);
  for (int m = 0; m < grid; ++m) {
    grid_coef[m] = std::polar(1.0, -PhaseVector::grid_phase(m, bits));
  }
  const CVector a_r_conj = sep.a_r.conjugate();

  std::vector<int> idx(n, 0);
  std::vector<int> best_idx = idx;
  CVector xc(n);
  const auto eval = [&]() {
    for (int i = 0; i < n; ++i) xc[i] = a_r_conj[i] * grid_coef[idx[i]];
    return separated_metric_from_w(kind, sep, sep.w1 + sep.a1.adjoint() * xc);
  };

  OptimizerResult out;
  out.flags |= separation_flags(sep);
  double best = eval();
  out.evaluations = 1;
  out.trace.push_back(best);
  // Odometer with the last element fastest enumerates index vectors in
  // lexicographic order, so the first optimum seen is the lowest one.
  while (true) {
    int pos = n - 1;
    while (pos >= 0 && idx[pos] == grid - 1) {
      idx[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++idx[pos];
    const double v = eval();
    ++out.evaluations;
    if (improves(kind, v, best)) {
      best = v;
      best_idx = idx;
      out.trace.push_back(v);
    }
  }
  out.phases = PhaseVector::discrete(std::move(best_idx), bits);
  out.objective = separated_metric(kind, sep, out.phases);
  return out;
}

}  // namespace risopt
