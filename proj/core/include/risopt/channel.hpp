#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <vector>

#include "risopt/phase.hpp"
#include "risopt/rng.hpp"
#include "risopt/types.hpp"

namespace risopt {

/// Scattered-cluster angle statistics for one link. Azimuth cluster centers
/// are Normal(mu, var); subray azimuth deviations and all elevation draws are
/// Laplacian with standard deviation sqrt(var). All values in degrees.
struct AngleSpread {
  double mu_az_central = 0.0;
  double var_az_central = 31.64;
  double var_az_subray = 24.25;
  double var_el_central = 6.12;
  double var_el_subray = 1.84;
};

/// Every scalar parameter of a simulation run.
struct SystemConfig {
  int m_y = 8;  ///< BS antenna columns; M = m_y * m_z
  int m_z = 4;
  int n_y = 8;  ///< RIS element columns; N = n_y * n_z
  int n_z = 8;
  int k = 2;    ///< number of single-antenna users

  double d_b = 0.5;  ///< BS element spacing, wavelengths
  double d_r = 0.2;  ///< RIS element spacing, wavelengths

  double p_ref_db = -30.0;  ///< path loss at 1 m
  double gamma_d = 3.5;     ///< UE-BS path-loss exponent
  double gamma_ru = 2.8;    ///< UE-RIS path-loss exponent
  double noise_dbm = -80.0;
  double d_br = 51.0;  ///< RIS-BS distance, m
  double cell_radius = 70.0;
  double exclusion_radius = 5.0;

  double kappa_d = 1.0;
  double kappa_ru = 1.0;
  double kappa_br = std::numeric_limits<double>::infinity();

  int c_d = 20;  ///< clusters / subrays per cluster, per link
  int s_d = 20;
  int c_ru = 20;
  int s_ru = 20;
  int c_br = 3;
  int s_br = 16;

  AngleSpread spread_d{0.0, 31.64, 24.25, 6.12, 1.84};
  AngleSpread spread_ru{0.0, 31.64, 24.25, 6.12, 1.84};
  AngleSpread spread_br{0.0, 14.4, 6.24, 1.9, 1.37};

  int bits = 1;     ///< phase quantization bits b
  int repeats = 1;  ///< MUIQ sweep repeats L
  bool muiq_tie_accept = false;
  std::uint64_t seed = 1;

  int m() const { return m_y * m_z; }
  int n() const { return n_y * n_z; }
  double noise_power() const { return dbm_to_watts(noise_dbm); }
  double path_loss_ref() const { return db_to_linear(p_ref_db); }

  /// Throws ValidationError on any out-of-domain field.
  void validate() const;
};

enum class ArrayKind { Bs, Ris };

/// Steering vector of the vertical uniform rectangular array at the BS or the
/// RIS: the Kronecker product a_y(theta, phi) (x) a_z(theta), with the
/// y-index as the slow (outer) index. All entries have unit modulus.
CVector steering_vector(ArrayKind kind, double theta, double phi, const SystemConfig& cfg);

/// User positions for one drop. BS at the origin, RIS at (d_br, 0).
struct UserDrop {
  std::vector<std::array<double, 2>> positions;
  RVector dist_bs;
  RVector dist_ris;
};

/// Uniform positions over the cell disk, rejection-sampled against the
/// exclusion disks around both the BS and the RIS.
UserDrop drop_users(const SystemConfig& cfg, RandomStream& rng);

struct UserChannels {
  CMatrix h_d;   ///< M x K
  CMatrix h_ru;  ///< N x K
  RVector theta_d, phi_d;  ///< LOS angles actually drawn (diagnostics)
  RVector theta_ru, phi_ru;
};

/// Ray-based UE-BS and UE-RIS channels: a LOS steering column per user plus
/// clustered scattered rays, split by the Ricean factor of each link.
UserChannels gen_user_channels(const SystemConfig& cfg, const UserDrop& drop, RandomStream& rng);

struct RisBsChannel {
  CMatrix h_br;  ///< M x N
  CVector a_b;   ///< arrival steering at the BS
  CVector a_r;   ///< departure steering at the RIS
  double beta_br = 0.0;
  bool pure_los = false;
};

/// RIS-BS channel. kappa_br = inf gives the rank-1 pure-LOS outer product
/// with beta_br = d_br^-2; finite kappa_br adds scattered rays and rescales
/// the link gain to d_br^-2 / eta^2. kappa_br = 0 is rejected.
RisBsChannel gen_ris_bs_channel(const SystemConfig& cfg, RandomStream& rng);

struct ChannelRealization {
  CMatrix h_d;
  CMatrix h_ru;
  CMatrix h_br;
  CVector a_b;
  CVector a_r;
  double beta_br = 0.0;
  bool pure_los = false;
};

/// One drop plus all three channels from a single stream.
ChannelRealization generate_realization(const SystemConfig& cfg, RandomStream& rng);

/// H = H_d + H_br * Diag(coefficients) * H_ru. Discrete phase vectors are
/// resolved to physical phases against a_r first.
CMatrix global_channel(const ChannelRealization& real, const PhaseVector& phi);

}  // namespace risopt
