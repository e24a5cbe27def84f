#pragma once

#include <vector>

#include "risopt/phase.hpp"
#include "risopt/rng.hpp"
#include "risopt/separation.hpp"

namespace risopt {

enum ResultFlag : unsigned {
  kFlagDegenerateEig = 1u << 0,   ///< top eigenvalue gap below threshold; any maximizer accepted
  kFlagForcedSeparation = 1u << 1,
  kFlagRayleighFallback = 1u << 2,  ///< MSE solution used the w1 = 0 Rayleigh-quotient route
  kFlagNoRisTerm = 1u << 3,         ///< A1 = 0, phases have no effect
};

struct OptimizerResult {
  PhaseVector phases;
  double objective = 0.0;   ///< separated metric recomputed at `phases`
  long evaluations = 0;     ///< metric evaluations performed
  std::vector<double> trace;  ///< accepted objective values, monotone in the metric's direction
  unsigned flags = 0;
};

/// Alternating per-element search over the 2^b phase grid (discrete phases),
/// starting from the all-ones coefficient vector and sweeping elements in
/// order for `repeats` rounds. Candidates are accepted on strict improvement;
/// with tie_accept, exact ties are accepted too (the literal ">=" rule).
/// Performs exactly repeats * N * 2^b metric evaluations.
OptimizerResult muiq(MetricKind kind, const SeparatedChannel& sep, int bits, int repeats,
                     bool tie_accept = false);

/// Closed-form continuous phases for the sum rate: the top eigenvector of
/// nu I_K + P A1^H A1 mapped through A1 and projected entrywise onto the unit
/// circle.
OptimizerResult closed_form_sum_rate(const SeparatedChannel& sep);

/// Closed-form continuous phases minimizing the total MMSE error: the top
/// eigenvector of I_K + Z3 A1^H A1 mapped through A1 and projected entrywise
/// onto the unit circle. Falls back to the plain Rayleigh-quotient reduction
/// when w1 = 0.
OptimizerResult closed_form_mse_tot(const SeparatedChannel& sep);

/// N i.i.d. phases uniform on [0, 2*pi).
PhaseVector random_phases(int n, RandomStream& rng);

/// Multi-restart gradient ascent (descent for MseTot) on the phase
/// parameters of the exact separated metric. Gradients by central finite
/// differences (step 1e-6 rad) with backtracking line search; each start runs
/// until the improvement drops below 1e-10 or 500 iterations. Starts are
/// `restarts` random vectors plus the matching closed-form solution.
OptimizerResult projected_ascent_baseline(MetricKind kind, const SeparatedChannel& sep,
                                          int restarts, RandomStream& rng);

/// Exhaustive search over all 2^(b*N) grid combinations, enumerated in
/// lexicographic index order; ties keep the first (lowest) combination.
/// Guarded against b*N > 20.
OptimizerResult brute_force_discrete(MetricKind kind, const SeparatedChannel& sep, int bits);

}  // namespace risopt
