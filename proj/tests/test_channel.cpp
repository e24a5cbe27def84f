#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "risopt/channel.hpp"
#include "risopt/numerics.hpp"

using namespace risopt;

namespace {

SystemConfig desk_config() {
  SystemConfig cfg;
  cfg.m_y = 4;
  cfg.m_z = 4;
  cfg.n_y = 4;
  cfg.n_z = 4;
  cfg.k = 2;
  return cfg;
}

}  // namespace

TEST_CASE("steering_vector: broadside gives all ones") {
  SystemConfig cfg = desk_config();
  const CVector a = steering_vector(ArrayKind::Bs, kPi / 2.0, 0.0, cfg);
  CHECK(a.size() == cfg.m());
  CHECK((a - CVector::Ones(cfg.m())).norm() < 1e-12);
}

TEST_CASE("steering_vector: 2x1 BS array at endfire azimuth") {
  SystemConfig cfg;
  cfg.m_y = 2;
  cfg.m_z = 1;
  cfg.d_b = 0.5;
  const CVector a = steering_vector(ArrayKind::Bs, kPi / 2.0, kPi / 2.0, cfg);
  CHECK(std::abs(a[0] - Complex(1.0, 0.0)) < 1e-12);
  CHECK(std::abs(a[1] - Complex(-1.0, 0.0)) < 1e-12);
}

TEST_CASE("steering_vector: 2x2 RIS Kronecker ordering, hand-evaluated") {
  // theta = 0, phi = 0: a_y = (1, 1) since sin(theta) = 0; a_z = (1, e^{j0.4pi})
  // since cos(theta) = 1 and d_r = 0.2. a_y (x) a_z with y as the outer index
  // interleaves the z ramp: (1, e^{j0.4pi}, 1, e^{j0.4pi}).
  SystemConfig cfg;
  cfg.n_y = 2;
  cfg.n_z = 2;
  cfg.d_r = 0.2;
  const CVector a = steering_vector(ArrayKind::Ris, 0.0, 0.0, cfg);
  const Complex ramp = std::polar(1.0, 0.4 * kPi);
  CHECK(std::abs(a[0] - Complex(1.0, 0.0)) < 1e-12);
  CHECK(std::abs(a[1] - ramp) < 1e-12);
  CHECK(std::abs(a[2] - Complex(1.0, 0.0)) < 1e-12);
  CHECK(std::abs(a[3] - ramp) < 1e-12);
}

TEST_CASE("steering_vector entries always have unit modulus") {
  SystemConfig cfg = desk_config();
  RandomStream rng(11);
  for (int rep = 0; rep < 50; ++rep) {
    const double theta = rng.uniform(0.0, kPi);
    const double phi = rng.uniform(-kPi / 2.0, kPi / 2.0);
    for (ArrayKind kind : {ArrayKind::Bs, ArrayKind::Ris}) {
      const CVector a = steering_vector(kind, theta, phi, cfg);
      for (Eigen::Index i = 0; i < a.size(); ++i) {
        CHECK(std::abs(std::abs(a[i]) - 1.0) < 1e-12);
      }
    }
  }
}

TEST_CASE("drop_users respects both exclusion radii and the cell boundary") {
  SystemConfig cfg = desk_config();
  cfg.k = 4;
  RandomStream rng(22);
  double min_ris = 1e9;
  for (int rep = 0; rep < 10000 / cfg.k; ++rep) {
    const UserDrop drop = drop_users(cfg, rng);
    for (int k = 0; k < cfg.k; ++k) {
      CHECK(drop.dist_bs[k] >= cfg.exclusion_radius);
      CHECK(drop.dist_bs[k] <= cfg.cell_radius + 1e-12);
      min_ris = std::min(min_ris, drop.dist_ris[k]);
    }
  }
  CHECK(min_ris >= cfg.exclusion_radius);
}

TEST_CASE("drop_users is deterministic under a fixed seed") {
  SystemConfig cfg = desk_config();
  RandomStream a(7), b(7);
  const UserDrop da = drop_users(cfg, a);
  const UserDrop db = drop_users(cfg, b);
  for (int k = 0; k < cfg.k; ++k) {
    CHECK(da.positions[k][0] == db.positions[k][0]);
    CHECK(da.positions[k][1] == db.positions[k][1]);
  }
}

TEST_CASE("gen_user_channels: pure-LOS limit reduces to a scaled steering column") {
  SystemConfig cfg = desk_config();
  cfg.kappa_d = std::numeric_limits<double>::infinity();
  RandomStream rng(33);
  const UserDrop drop = drop_users(cfg, rng);
  const UserChannels uc = gen_user_channels(cfg, drop, rng);
  for (int k = 0; k < cfg.k; ++k) {
    const double gain = cfg.path_loss_ref() * std::pow(drop.dist_bs[k], -cfg.gamma_d);
    const CVector expected =
        std::sqrt(gain) * steering_vector(ArrayKind::Bs, uc.theta_d[k], uc.phi_d[k], cfg);
    CHECK((uc.h_d.col(k) - expected).norm() <= 1e-12 * expected.norm());
  }
}

TEST_CASE("gen_user_channels: kappa = 1 column power matches M * B_kk in expectation") {
  SystemConfig cfg;
  cfg.m_y = 4;
  cfg.m_z = 2;
  cfg.n_y = 2;
  cfg.n_z = 2;
  cfg.k = 1;
  cfg.kappa_d = 1.0;
  RandomStream rng(44);
  const UserDrop drop = drop_users(cfg, rng);
  const double expected = cfg.m() * cfg.path_loss_ref() * std::pow(drop.dist_bs[0], -cfg.gamma_d);
  double acc = 0.0;
  const int reps = 10000;
  for (int rep = 0; rep < reps; ++rep) {
    const UserChannels uc = gen_user_channels(cfg, drop, rng);
    acc += uc.h_d.col(0).squaredNorm();
  }
  CHECK(acc / reps == doctest::Approx(expected).epsilon(0.03));
}

TEST_CASE("path gain matches the tabulated reference point") {
  // P = -30 dB, d = 10 m, gamma = 3.5 -> 10^-3 * 10^-3.5
  const double gain = db_to_linear(-30.0) * std::pow(10.0, -3.5);
  CHECK(gain == doctest::Approx(std::pow(10.0, -6.5)).epsilon(1e-12));
}

TEST_CASE("gen_ris_bs_channel: pure LOS gain, rank and factorization") {
  SystemConfig cfg = desk_config();
  RandomStream rng(55);
  const RisBsChannel ris = gen_ris_bs_channel(cfg, rng);
  CHECK(ris.pure_los);
  CHECK(ris.beta_br == doctest::Approx(1.0 / (51.0 * 51.0)).epsilon(1e-12));

  Eigen::JacobiSVD<CMatrix> svd(ris.h_br);
  CHECK(svd.singularValues()[1] <= 1e-12 * svd.singularValues()[0]);

  // sqrt(M N beta) u1 v1^H with u1 = a_b / sqrt(M), v1 = a_r / sqrt(N)
  const Rank1Factors f = rank1_svd(ris.h_br);
  const double m = static_cast<double>(cfg.m());
  const double n = static_cast<double>(cfg.n());
  CHECK(f.gain == doctest::Approx(std::sqrt(m * n * ris.beta_br)).epsilon(1e-9));
  CHECK(oracles::alignment(f.left, ris.a_b) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(oracles::alignment(f.right, ris.a_r) == doctest::Approx(1.0).epsilon(1e-9));
  const CMatrix rebuilt = std::sqrt(ris.beta_br) * (ris.a_b * ris.a_r.adjoint());
  CHECK((ris.h_br - rebuilt).norm() <= 1e-10 * ris.h_br.norm());
}

TEST_CASE("gen_ris_bs_channel: kappa = 1 splits power evenly between LOS and scatter") {
  SystemConfig cfg;
  cfg.m_y = 2;
  cfg.m_z = 2;
  cfg.n_y = 2;
  cfg.n_z = 2;
  cfg.kappa_br = 1.0;
  RandomStream rng(66);
  double los_acc = 0.0, sc_acc = 0.0;
  const int reps = 10000;
  for (int rep = 0; rep < reps; ++rep) {
    const RisBsChannel ris = gen_ris_bs_channel(cfg, rng);
    const double eta = std::sqrt(0.5);
    const CMatrix los = (eta * std::sqrt(ris.beta_br)) * (ris.a_b * ris.a_r.adjoint());
    los_acc += los.squaredNorm();
    sc_acc += (ris.h_br - los).squaredNorm();
  }
  CHECK(sc_acc / los_acc == doctest::Approx(1.0).epsilon(0.10));
}

TEST_CASE("gen_ris_bs_channel rejects kappa_br = 0") {
  SystemConfig cfg = desk_config();
  cfg.kappa_br = 0.0;
  RandomStream rng(77);
  CHECK_THROWS_AS(gen_ris_bs_channel(cfg, rng), ValidationError);
}

TEST_CASE("rice power split is a partition of unity") {
  for (double kappa : {0.0, 0.3, 1.0, 7.5, 1e6}) {
    const double eta2 = kappa / (1.0 + kappa);
    const double zeta2 = 1.0 / (1.0 + kappa);
    CHECK(eta2 + zeta2 == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("global_channel: degenerate and scalar cases") {
  RandomStream rng(88);
  ChannelRealization real = oracles::random_realization(rng, 2, 2, 2, 1.0);
  real.h_br.setZero();
  const PhaseVector phases = PhaseVector::zeros(4);
  CHECK((global_channel(real, phases) - real.h_d).norm() == 0.0);

  // N = 1 with coefficient 1: H = H_d + H_br H_ru
  ChannelRealization one = oracles::random_realization(rng, 1, 1, 2, 1.0);
  const CMatrix h = global_channel(one, PhaseVector::zeros(1));
  const CMatrix expected = one.h_d + one.h_br * one.h_ru;
  CHECK((h - expected).norm() <= 1e-12 * expected.norm());
}

TEST_CASE("global_channel matches the triple-loop oracle") {
  RandomStream rng(99);
  const ChannelRealization real = oracles::random_realization(rng, 4, 2, 3, 1.0);
  RandomStream prng(100);
  RVector ph(8);
  for (int i = 0; i < 8; ++i) ph[i] = prng.uniform(0.0, kTwoPi);
  const PhaseVector phases = PhaseVector::continuous(ph);
  const CMatrix h = global_channel(real, phases);
  const CMatrix oracle =
      oracles::triple_product(real.h_d, real.h_br, phases.coefficients(), real.h_ru);
  CHECK((h - oracle).norm() <= 1e-12 * oracle.norm());
}

TEST_CASE("global_channel validates dimensions") {
  RandomStream rng(111);
  const ChannelRealization real = oracles::random_realization(rng, 2, 2, 2, 1.0);
  CHECK_THROWS_AS(global_channel(real, PhaseVector::zeros(5)), ValidationError);
}

TEST_CASE("realizations are bit-identical under a fixed seed") {
  SystemConfig cfg = desk_config();
  cfg.kappa_br = 1.0;
  RandomStream a(123), b(123);
  const ChannelRealization ra = generate_realization(cfg, a);
  const ChannelRealization rb = generate_realization(cfg, b);
  CHECK(ra.h_d == rb.h_d);
  CHECK(ra.h_ru == rb.h_ru);
  CHECK(ra.h_br == rb.h_br);
  CHECK(ra.beta_br == rb.beta_br);
}

TEST_CASE("discrete phase vectors live on the grid and resolve the a_r offset") {
  const PhaseVector d = PhaseVector::discrete({0, 1, 2, 3}, 2);
  CHECK(d.is_discrete());
  for (int i = 0; i < 4; ++i) {
    CHECK(d.phase(i) == PhaseVector::grid_phase(i, 2));
  }
  CHECK_THROWS_AS(PhaseVector::discrete({4}, 2), ValidationError);

  CVector a_r(4);
  RandomStream rng(17);
  for (int i = 0; i < 4; ++i) a_r[i] = std::polar(1.0, rng.uniform(0.0, kTwoPi));
  const PhaseVector phys = d.to_physical(a_r);
  CHECK(!phys.is_discrete());
  for (int i = 0; i < 4; ++i) {
    CHECK(phys.phase(i) ==
          doctest::Approx(wrap_angle(std::arg(a_r[i]) + d.phase(i))).epsilon(1e-12));
  }
}
