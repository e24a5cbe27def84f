#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace risopt {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Bad input detected at a contract boundary.
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A computation left its numerically meaningful regime.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Matrix inversion requested past the conditioning threshold.
struct RankDeficiencyError : NumericalError {
  RankDeficiencyError(const std::string& what, double condition)
      : NumericalError(what), condition(condition) {}
  double condition;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }

/// Wraps an angle into [0, 2*pi).
inline double wrap_angle(double phi) {
  const double w = std::fmod(phi, kTwoPi);
  return w < 0.0 ? w + kTwoPi : w;
}

/// max_ij |a_ij - conj(a_ji)| relative to max_ij |a_ij|. Zero matrices count
/// as Hermitian.
double hermitian_deviation(const CMatrix& a);

bool is_hermitian(const CMatrix& a, double rel_tol = 1e-10);

/// (a + a^H) / 2.
CMatrix hermitize(const CMatrix& a);

}  // namespace risopt
