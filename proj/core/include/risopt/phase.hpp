#pragma once

#include <vector>

#include "risopt/types.hpp"

namespace risopt {

/// One phase per RIS element.
///
/// Continuous vectors store the physical phase of each reflection coefficient
/// (the diagonal of the RIS matrix is e^{j phase}). Discrete vectors store
/// grid indices m into {2*pi*m / 2^b}; their physical phase additionally
/// absorbs the angle of the RIS departure steering vector, i.e. the RIS
/// matrix is Diag(a_r) * Diag(e^{j gamma}). Use to_physical() to resolve the
/// offset.
class PhaseVector {
 public:
  PhaseVector() = default;

  static PhaseVector continuous(RVector phases) {
    PhaseVector out;
    out.phases_ = std::move(phases);
    for (Eigen::Index i = 0; i < out.phases_.size(); ++i) {
      out.phases_[i] = wrap_angle(out.phases_[i]);
    }
    return out;
  }

  static PhaseVector zeros(int n) { return continuous(RVector::Zero(n)); }

  static PhaseVector discrete(std::vector<int> indices, int bits) {
    if (bits < 1 || bits > 30) {
      throw ValidationError("PhaseVector: quantization bits must be in [1, 30]");
    }
    const int grid = 1 << bits;
    for (int m : indices) {
      if (m < 0 || m >= grid) {
        throw ValidationError("PhaseVector: grid index out of range for " +
                              std::to_string(bits) + " bits");
      }
    }
    PhaseVector out;
    out.bits_ = bits;
    out.indices_ = std::move(indices);
    out.phases_.resize(static_cast<Eigen::Index>(out.indices_.size()));
    for (std::size_t i = 0; i < out.indices_.size(); ++i) {
      out.phases_[static_cast<Eigen::Index>(i)] = grid_phase(out.indices_[i], bits);
    }
    return out;
  }

  static double grid_phase(int index, int bits) {
    return (kTwoPi * index) / static_cast<double>(1 << bits);
  }

  bool is_discrete() const { return bits_ > 0; }
  int bits() const { return bits_; }
  int size() const { return static_cast<int>(phases_.size()); }
  double phase(int i) const { return phases_[i]; }
  const RVector& phases() const { return phases_; }
  const std::vector<int>& indices() const { return indices_; }

  /// e^{j phase} per element. For discrete vectors these are the grid
  /// coefficients, not the physical ones; see to_physical().
  CVector coefficients() const {
    CVector out(phases_.size());
    for (Eigen::Index i = 0; i < phases_.size(); ++i) {
      out[i] = std::polar(1.0, phases_[i]);
    }
    return out;
  }

  /// Continuous vector of physical phases. Discrete vectors pick up the
  /// departure-steering offset: phi_n = wrap(angle(a_r_n) + gamma_n).
  PhaseVector to_physical(const CVector& a_r) const {
    if (!is_discrete()) return *this;
    if (a_r.size() != phases_.size()) {
      throw ValidationError("PhaseVector::to_physical: steering vector length mismatch");
    }
    RVector phys(phases_.size());
    for (Eigen::Index i = 0; i < phases_.size(); ++i) {
      phys[i] = wrap_angle(std::arg(a_r[i]) + phases_[i]);
    }
    return continuous(std::move(phys));
  }

 private:
  RVector phases_;
  std::vector<int> indices_;
  int bits_ = 0;
};

}  // namespace risopt
