#include "risopt/channel.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace risopt {
namespace {

struct RiceSplit {
  double eta;   // LOS amplitude factor
  double zeta;  // scattered amplitude factor
};

RiceSplit rice_split(double kappa) {
  if (std::isinf(kappa)) return {1.0, 0.0};
  return {std::sqrt(kappa / (1.0 + kappa)), std::sqrt(1.0 / (1.0 + kappa))};
}

struct ClusterAngles {
  double theta_c;
  double phi_c;
};

/// Central angles for one cluster. Elevation is Laplacian about broadside
/// (pi/2); azimuth is Normal about the tabulated mean.
ClusterAngles draw_cluster_center(const AngleSpread& sp, RandomStream& rng) {
  ClusterAngles out;
  out.theta_c = kPi / 2.0 + rng.laplacian(0.0, deg_to_rad(std::sqrt(sp.var_el_central)));
  out.phi_c = rng.normal(deg_to_rad(sp.mu_az_central), deg_to_rad(std::sqrt(sp.var_az_central)));
  return out;
}

ClusterAngles draw_subray(const ClusterAngles& center, const AngleSpread& sp, RandomStream& rng) {
  ClusterAngles out;
  out.theta_c = center.theta_c + rng.laplacian(0.0, deg_to_rad(std::sqrt(sp.var_el_subray)));
  out.phi_c = center.phi_c + rng.laplacian(0.0, deg_to_rad(std::sqrt(sp.var_az_subray)));
  return out;
}

/// One user column of a ray-based MISO link: eta*sqrt(gain)*a(LOS) plus
/// zeta * sum_{c,s} sqrt(gain/(C*S)) e^{j psi} a(theta_cs, phi_cs).
void fill_user_link(ArrayKind kind, double kappa, double gamma, int clusters, int subrays,
                    const AngleSpread& spread, const RVector& dist, const SystemConfig& cfg,
                    RandomStream& rng, CMatrix& h, RVector& theta_los, RVector& phi_los) {
  const auto [eta, zeta] = rice_split(kappa);
  for (int k = 0; k < cfg.k; ++k) {
    const double theta = rng.uniform(0.0, kPi);
    const double phi = rng.uniform(-kPi / 2.0, kPi / 2.0);
    theta_los[k] = theta;
    phi_los[k] = phi;
    const double gain = cfg.path_loss_ref() * std::pow(dist[k], -gamma);
    CVector col = (eta * std::sqrt(gain)) * steering_vector(kind, theta, phi, cfg);
    if (zeta > 0.0) {
      const double ray_amp = std::sqrt(gain / (clusters * subrays));
      for (int c = 0; c < clusters; ++c) {
        const ClusterAngles center = draw_cluster_center(spread, rng);
        for (int s = 0; s < subrays; ++s) {
          const ClusterAngles ray = draw_subray(center, spread, rng);
          const double psi = rng.uniform(0.0, kTwoPi);
          col += (zeta * ray_amp * std::polar(1.0, psi)) *
                 steering_vector(kind, ray.theta_c, ray.phi_c, cfg);
        }
      }
    }
    h.col(k) = col;
  }
}

}  // namespace

void SystemConfig::validate() const {
  auto positive_count = [](int v, const char* name) {
    if (v < 1) throw ValidationError(std::string(name) + " must be >= 1");
  };
  positive_count(m_y, "M_y");
  positive_count(m_z, "M_z");
  positive_count(n_y, "N_y");
  positive_count(n_z, "N_z");
  positive_count(k, "K");
  positive_count(c_d, "C_d");
  positive_count(s_d, "S_d");
  positive_count(c_ru, "C_ru");
  positive_count(s_ru, "S_ru");
  positive_count(c_br, "C_br");
  positive_count(s_br, "S_br");
  positive_count(bits, "b");
  positive_count(repeats, "L");
  if (d_b <= 0.0 || d_r <= 0.0) throw ValidationError("element spacings must be positive");
  if (d_br <= 0.0) throw ValidationError("d_br must be positive");
  if (!(cell_radius > exclusion_radius) || !(exclusion_radius > 0.0)) {
    throw ValidationError("require cell_radius > exclusion_radius > 0");
  }
  if (kappa_d < 0.0 || kappa_ru < 0.0 || kappa_br < 0.0) {
    throw ValidationError("Ricean K-factors must be non-negative");
  }
}

CVector steering_vector(ArrayKind kind, double theta, double phi, const SystemConfig& cfg) {
  const int ny = kind == ArrayKind::Bs ? cfg.m_y : cfg.n_y;
  const int nz = kind == ArrayKind::Bs ? cfg.m_z : cfg.n_z;
  const double spacing = kind == ArrayKind::Bs ? cfg.d_b : cfg.d_r;
  const double ramp_y = kTwoPi * spacing * std::sin(theta) * std::sin(phi);
  const double ramp_z = kTwoPi * spacing * std::cos(theta);
  CVector out(static_cast<Eigen::Index>(ny) * nz);
  for (int iy = 0; iy < ny; ++iy) {
    for (int iz = 0; iz < nz; ++iz) {
      out[static_cast<Eigen::Index>(iy) * nz + iz] = std::polar(1.0, iy * ramp_y + iz * ramp_z);
    }
  }
  return out;
}

UserDrop drop_users(const SystemConfig& cfg, RandomStream& rng) {
  if (!(cfg.cell_radius > cfg.exclusion_radius)) {
    throw ValidationError("drop_users: cell_radius must exceed exclusion_radius");
  }
  UserDrop out;
  out.positions.resize(cfg.k);
  out.dist_bs.resize(cfg.k);
  out.dist_ris.resize(cfg.k);
  for (int k = 0; k < cfg.k; ++k) {
    double x = 0.0, y = 0.0, db = 0.0, dr = 0.0;
    do {
      const double r = cfg.cell_radius * std::sqrt(rng.uniform());
      const double ang = rng.uniform(0.0, kTwoPi);
      x = r * std::cos(ang);
      y = r * std::sin(ang);
      db = std::hypot(x, y);
      dr = std::hypot(x - cfg.d_br, y);
    } while (db < cfg.exclusion_radius || dr < cfg.exclusion_radius);
    out.positions[k] = {x, y};
    out.dist_bs[k] = db;
    out.dist_ris[k] = dr;
  }
  return out;
}

UserChannels gen_user_channels(const SystemConfig& cfg, const UserDrop& drop, RandomStream& rng) {
  if (static_cast<int>(drop.positions.size()) != cfg.k) {
    throw ValidationError("gen_user_channels: drop size does not match K");
  }
  UserChannels out;
  out.h_d = CMatrix::Zero(cfg.m(), cfg.k);
  out.h_ru = CMatrix::Zero(cfg.n(), cfg.k);
  out.theta_d.resize(cfg.k);
  out.phi_d.resize(cfg.k);
  out.theta_ru.resize(cfg.k);
  out.phi_ru.resize(cfg.k);
  fill_user_link(ArrayKind::Bs, cfg.kappa_d, cfg.gamma_d, cfg.c_d, cfg.s_d, cfg.spread_d,
                 drop.dist_bs, cfg, rng, out.h_d, out.theta_d, out.phi_d);
  fill_user_link(ArrayKind::Ris, cfg.kappa_ru, cfg.gamma_ru, cfg.c_ru, cfg.s_ru, cfg.spread_ru,
                 drop.dist_ris, cfg, rng, out.h_ru, out.theta_ru, out.phi_ru);
  return out;
}

RisBsChannel gen_ris_bs_channel(const SystemConfig& cfg, RandomStream& rng) {
  if (!(cfg.kappa_br > 0.0)) {
    throw ValidationError("gen_ris_bs_channel: kappa_br must be positive (a LOS component is assumed)");
  }
  const double theta_dep = rng.uniform(deg_to_rad(70.0), deg_to_rad(90.0));
  const double phi_dep = rng.uniform(deg_to_rad(-30.0), deg_to_rad(30.0));
  const double theta_arr = kPi - theta_dep;
  const double phi_arr = rng.uniform(deg_to_rad(-30.0), deg_to_rad(30.0));

  RisBsChannel out;
  out.a_b = steering_vector(ArrayKind::Bs, theta_arr, phi_arr, cfg);
  out.a_r = steering_vector(ArrayKind::Ris, theta_dep, phi_dep, cfg);

  if (std::isinf(cfg.kappa_br)) {
    out.beta_br = 1.0 / (cfg.d_br * cfg.d_br);
    out.h_br = std::sqrt(out.beta_br) * (out.a_b * out.a_r.adjoint());
    out.pure_los = true;
    return out;
  }

  const auto [eta, zeta] = rice_split(cfg.kappa_br);
  out.beta_br = 1.0 / (cfg.d_br * cfg.d_br) / (eta * eta);
  out.h_br = (eta * std::sqrt(out.beta_br)) * (out.a_b * out.a_r.adjoint());
  out.pure_los = false;

  const double ray_amp = std::sqrt(out.beta_br / (cfg.c_br * cfg.s_br));
  for (int c = 0; c < cfg.c_br; ++c) {
    const ClusterAngles arr_center = draw_cluster_center(cfg.spread_br, rng);
    const ClusterAngles dep_center = draw_cluster_center(cfg.spread_br, rng);
    for (int s = 0; s < cfg.s_br; ++s) {
      const ClusterAngles arr = draw_subray(arr_center, cfg.spread_br, rng);
      const ClusterAngles dep = draw_subray(dep_center, cfg.spread_br, rng);
      const double psi = rng.uniform(0.0, kTwoPi);
      out.h_br += (zeta * ray_amp * std::polar(1.0, psi)) *
                  (steering_vector(ArrayKind::Bs, arr.theta_c, arr.phi_c, cfg) *
                   steering_vector(ArrayKind::Ris, dep.theta_c, dep.phi_c, cfg).adjoint());
    }
  }
  return out;
}

ChannelRealization generate_realization(const SystemConfig& cfg, RandomStream& rng) {
  cfg.validate();
  const UserDrop drop = drop_users(cfg, rng);
  UserChannels users = gen_user_channels(cfg, drop, rng);
  RisBsChannel ris = gen_ris_bs_channel(cfg, rng);
  ChannelRealization out;
  out.h_d = std::move(users.h_d);
  out.h_ru = std::move(users.h_ru);
  out.h_br = std::move(ris.h_br);
  out.a_b = std::move(ris.a_b);
  out.a_r = std::move(ris.a_r);
  out.beta_br = ris.beta_br;
  out.pure_los = ris.pure_los;
  return out;
}

CMatrix global_channel(const ChannelRealization& real, const PhaseVector& phi) {
  if (phi.size() != real.h_ru.rows() || real.h_br.cols() != real.h_ru.rows() ||
      real.h_br.rows() != real.h_d.rows()) {
    throw ValidationError("global_channel: dimension mismatch between phases and channels");
  }
  const CVector coeff =
      (phi.is_discrete() ? phi.to_physical(real.a_r) : phi).coefficients();
  return real.h_d + real.h_br * coeff.asDiagonal() * real.h_ru;
}

}  // namespace risopt
