#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ionjch/dynamics.hpp"
#include "ionjch/errors.hpp"
#include "ionjch/spin_ops.hpp"
#include "ionjch/superexchange.hpp"
#include "ionjch/units.hpp"

using namespace ionjch;

namespace {

SiteDrive site(double gx, double gy, double delta) { return homogeneous_site(DriveParams::from_detuning(gx, gy, delta)); }

// Second-order effective matrix computed by brute force: dense diagonalisation of the
// full two-site H_JC in the whole sector and explicit sums over every eigenstate
// that the hopping reaches from the product manifold.
Eigen::MatrixXd brute_second_order(const SiteDrive& sj, const SiteDrive& sk, double tx, double ty, Manifold kind) {
  const int n = excitations_per_site(kind);
  const int d = spin_dim(kind);
  const SectorBasis basis(2, 2 * n);
  const Eigen::MatrixXd h0 = build_hjc(basis, std::vector<SiteDrive>{sj, sk}).to_dense().real();
  Eigen::MatrixXd t(2, 2), u(2, 2);
  t << 0, tx, tx, 0;
  u << 0, ty, ty, 0;
  const Eigen::MatrixXd hb = build_hb(basis, geometry_from_hopping(t, u)).to_dense().real();
  const std::vector<LocalManifold> sites{local_manifold(kind, sj), local_manifold(kind, sk)};
  Eigen::MatrixXd p(basis.dim(), d * d);
  Eigen::VectorXd e(d * d);
  for (int r = 0; r < d; ++r)
    for (int s = 0; s < d; ++s) {
      p.col(r * d + s) = dressed_product_state({r, s}, sites, basis).real();
      e(r * d + s) = sites[0].energies(r) + sites[1].energies(s);
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h0);
  const Eigen::MatrixXd amp = es.eigenvectors().transpose() * (hb * p);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d * d, d * d);
  for (Eigen::Index chi = 0; chi < amp.rows(); ++chi) {
    if (amp.row(chi).cwiseAbs().maxCoeff() < 1e-12) continue;
    for (int a = 0; a < d * d; ++a)
      for (int b = 0; b < d * d; ++b) {
        const double ec = es.eigenvalues()(chi);
        m(a, b) += amp(chi, a) * amp(chi, b) * 0.5 * (1.0 / (e(a) - ec) + 1.0 / (e(b) - ec));
      }
  }
  return m;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST(Manifold, Basics) {
  EXPECT_EQ(manifold_for(1), Manifold::spin_half);
  EXPECT_EQ(manifold_for(2), Manifold::spin_one);
  EXPECT_THROW(manifold_for(3), std::invalid_argument);
  EXPECT_EQ(spin_dim(Manifold::spin_one), 3);
  EXPECT_EQ(label_species_counts(Manifold::spin_one, 1), std::make_pair(1, 1));
}

TEST(Manifold, VectorsMatchClosedFormDressedStates) {
  for (const double delta : {-1.7, 0.0, 0.4}) {
    const auto drive = DriveParams::from_detuning(1.1, 1.6, delta, 0.3);
    const auto spectra = single_site_spectra(drive);
    for (const auto kind : {Manifold::spin_half, Manifold::spin_one}) {
      const auto lm = local_manifold(kind, homogeneous_site(drive));
      std::vector<const DressedState*> closed;
      if (kind == Manifold::spin_half) {
        closed = {&spectra.one.up, &spectra.one.down};
        EXPECT_NEAR(lm.energies(0), spectra.one.E_minus_x, 1e-12);
        EXPECT_NEAR(lm.energies(1), spectra.one.E_minus_y, 1e-12);
      } else {
        closed = {&spectra.two.plus, &spectra.two.zero, &spectra.two.minus};
        EXPECT_NEAR(lm.energies(0), spectra.two.E_1, 1e-12);
        EXPECT_NEAR(lm.energies(1), spectra.two.E_0, 1e-12);
        EXPECT_NEAR(lm.energies(2), spectra.two.E_m1, 1e-12);
      }
      for (std::size_t m = 0; m < closed.size(); ++m) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(lm.site_basis.size()));
        for (const auto& c : *closed[m]) {
          const auto it = std::find(lm.site_basis.begin(), lm.site_basis.end(), c.state);
          ASSERT_NE(it, lm.site_basis.end());
          v(it - lm.site_basis.begin()) = c.amplitude;
        }
        EXPECT_LT((lm.vectors.col(static_cast<Eigen::Index>(m)) - v).cwiseAbs().maxCoeff(), 1e-12);
      }
    }
  }
}

TEST(PairMatrix, NoHoppingLeavesZerothOrderOnly) {
  const auto m = pair_effective_matrix(site(1.0, 1.3, -0.2), site(1.0, 1.3, -0.2), 0.0, 0.0, Manifold::spin_one);
  EXPECT_EQ(m.second.cwiseAbs().maxCoeff(), 0.0);
  const Eigen::MatrixXd off = m.full() - Eigen::MatrixXd(m.full().diagonal().asDiagonal());
  EXPECT_EQ(off.cwiseAbs().maxCoeff(), 0.0);
}

TEST(PairMatrix, MatchesBruteForceResolvent) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> g(0.8, 1.5), d(-0.6, 0.6), t(0.005, 0.04);
  for (const auto kind : {Manifold::spin_half, Manifold::spin_one}) {
    for (int trial = 0; trial < 6; ++trial) {
      const double gx = g(rng), gy = g(rng), delta = d(rng);
      SiteDrive sj = site(gx, gy, delta), sk = sj;
      sk.Delta_x += 0.01;
      sk.Delta_y -= 0.02;
      const double tx = t(rng), ty = t(rng);
      const auto m = pair_effective_matrix(sj, sk, tx, ty, kind);
      const Eigen::MatrixXd oracle = brute_second_order(sj, sk, tx, ty, kind);
      EXPECT_LT((m.second - oracle).cwiseAbs().maxCoeff(), 1e-10 * oracle.cwiseAbs().maxCoeff());
      EXPECT_LT(m.hermiticity_residual, 1e-10 * m.second.cwiseAbs().maxCoeff());
    }
  }
}

TEST(PairMatrix, DegenerateIntermediateThrows) {
  EXPECT_THROW(pair_effective_matrix(site(0.0, 0.0, 0.0), site(0.0, 0.0, 0.0), 0.1, 0.1, Manifold::spin_half),
               NumericalError);
}

TEST(PairMatrix, QuadraticScalingInHopping) {
  const auto sj = site(1.0, 1.2, -0.3);
  for (const auto kind : {Manifold::spin_half, Manifold::spin_one}) {
    const auto a = pair_effective_matrix(sj, sj, 0.02, 0.03, kind);
    const auto b = pair_effective_matrix(sj, sj, 0.01, 0.015, kind);
    EXPECT_LT((a.second - 4.0 * b.second).cwiseAbs().maxCoeff(), 1e-10 * a.second.cwiseAbs().maxCoeff());
  }
}

TEST(SpinHalfCouplings, ResonantClosedFormsAgreeWithEngine) {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> g(0.5, 2.0), frac(0.001, 0.05);
  for (int trial = 0; trial < 20; ++trial) {
    const double gx = g(rng), gy = g(rng);
    const double tx = frac(rng) * std::min(gx, gy), ty = frac(rng) * std::min(gx, gy);
    const auto m = pair_effective_matrix(site(gx, gy, 0.0), site(gx, gy, 0.0), tx, ty, Manifold::spin_half);
    const auto p = extract_spin_half(m);
    const auto a = spin_half_analytic(gx, gy, tx, ty);
    EXPECT_NEAR(m.second(1, 2), 2.0 * a.K_xy, 1e-8 * std::abs(2.0 * a.K_xy));
    EXPECT_LT(rel(p.K_xy, a.K_xy), 1e-8);
    EXPECT_LT(rel(p.K_z, a.K_z), 1e-8);
    EXPECT_LT(rel(p.h_j, a.h), 1e-8);
    EXPECT_LT(rel(p.h_k, a.h), 1e-8);
    EXPECT_LT(p.fit_residual, 1e-12 * m.second.cwiseAbs().maxCoeff());
  }
}

TEST(SpinHalfCouplings, EqualCouplingLimit) {
  const double g = 1.7, tx = 0.03, ty = 0.05;
  const auto a = spin_half_analytic(g, g, tx, ty);
  EXPECT_NEAR(a.K_xy, -9.0 * tx * ty / (16.0 * g), 1e-15);
  EXPECT_NEAR(a.K_z, -9.0 * (tx * tx + ty * ty) / (32.0 * g), 1e-15);
  EXPECT_NEAR(a.h, -0.625 * (tx * tx - ty * ty) / g, 1e-15);
  const auto iso = spin_half_analytic(g, g, tx, tx);
  EXPECT_NEAR(iso.K_z / iso.K_xy, 1.0, 1e-14);
  EXPECT_THROW(spin_half_analytic(0.0, g, tx, ty), std::invalid_argument);
}

TEST(SpinHalfCouplings, FieldVanishesOnlyForEqualCouplings) {
  const double t = 0.04;
  EXPECT_EQ(spin_half_analytic(1.0, 1.0, t, t).h, 0.0);
  EXPECT_NE(spin_half_analytic(1.0, 1.2, t, t).h, 0.0);
  const double r = spin_half_analytic(1.0, 1.2, t, t).h / spin_half_analytic(1.0, 1.5, t, t).h;
  EXPECT_NEAR(r, (1.0 - 1.0 / 1.2) / (1.0 - 1.0 / 1.5), 1e-14);
}

TEST(SpinHalfCouplings, ExchangeXYSymmetry) {
  const double gx = 1.0, gy = 1.4, tx = 0.02, ty = 0.035, delta = -0.25;
  const auto a = extract_spin_half(pair_effective_matrix(site(gx, gy, delta), site(gx, gy, delta), tx, ty, Manifold::spin_half));
  const auto b = extract_spin_half(pair_effective_matrix(site(gy, gx, delta), site(gy, gx, delta), ty, tx, Manifold::spin_half));
  EXPECT_LT(rel(b.K_xy, a.K_xy), 1e-10);
  EXPECT_LT(rel(b.K_z, a.K_z), 1e-10);
  EXPECT_LT(rel(b.h_j, -a.h_j), 1e-10);
  const auto aa = spin_half_analytic(gx, gy, tx, ty), ab = spin_half_analytic(gy, gx, ty, tx);
  EXPECT_LT(rel(ab.K_xy, aa.K_xy), 1e-14);
  EXPECT_LT(rel(ab.K_z, aa.K_z), 1e-14);
  EXPECT_LT(rel(ab.h, -aa.h), 1e-14);
}

TEST(SpinHalfModel, AnalyticModelMatchesEngineOnCrystal) {
  const auto geom = dipolar_chain_geometry(4, 0.05, 0.08);
  auto drive = DriveParams::from_detuning(2.0, 2.3, 0.0);
  drive.homogeneous = true;
  const auto num = spin_half_model(geom, drive);
  const auto ana = spin_half_analytic_model(geom, drive);
  EXPECT_LT((num.K_xy - ana.K_xy).cwiseAbs().maxCoeff(), 1e-8 * ana.K_xy.cwiseAbs().maxCoeff());
  EXPECT_LT((num.K_z - ana.K_z).cwiseAbs().maxCoeff(), 1e-8 * ana.K_z.cwiseAbs().maxCoeff());
  EXPECT_LT((num.total_field() - ana.total_field()).cwiseAbs().maxCoeff(), 1e-8 * ana.H_field.cwiseAbs().maxCoeff());
}

TEST(SpinHalfModel, HamiltonianConservesMagnetisation) {
  const auto geom = dipolar_chain_geometry(4, 0.05, 0.08);
  const auto h = build_spin_hamiltonian(spin_half_model(geom, DriveParams::from_detuning(1.0, 1.2, -0.4)));
  EXPECT_LT(h.hermiticity_error(), 1e-15);
  EXPECT_LT(commutator_max_abs(h, total_sz(SpinSpace(4, 2))), 1e-13);
}

TEST(SpinHalfModel, IsingProductStateIsEigenstate) {
  SpinHalfModel m;
  m.K_xy = Eigen::MatrixXd::Zero(2, 2);
  m.K_z = (Eigen::MatrixXd(2, 2) << 0, 0.3, 0.3, 0).finished();
  m.H_field = Eigen::Vector2d(0.1, -0.05);
  m.E0_split = Eigen::Vector2d(0.02, 0.02);
  const auto h = build_spin_hamiltonian(m);
  const Eigen::VectorXcd ud = spin_product_state({0, 1}, Manifold::spin_half);
  const Eigen::VectorXcd hv = h.apply(ud);
  const double expect = -0.3 + (0.1 + 0.02) - (-0.05 + 0.02);
  EXPECT_LT((hv - expect * ud).norm(), 1e-15);
}

TEST(SpinOneCouplings, ResonantIsotropicClosedForms) {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> g(0.5, 2.0), frac(0.001, 0.03);
  for (int trial = 0; trial < 10; ++trial) {
    const double gg = g(rng), tx = frac(rng) * gg, ty = frac(rng) * gg;
    const auto m = pair_effective_matrix(site(gg, gg, 0.0), site(gg, gg, 0.0), tx, ty, Manifold::spin_one);
    const auto p = extract_spin_one(m);
    const auto a = spin_one_isotropic_analytic(gg, tx, ty);
    EXPECT_LT(rel(p.J_xy, a.J_xy), 1e-6);
    EXPECT_LT(rel(p.J_z, a.J_z), 1e-6);
    EXPECT_LT(rel(p.B_j, a.B), 1e-6);
    EXPECT_LT(rel(p.B_k, a.B), 1e-6);
    const double scale = m.second.cwiseAbs().maxCoeff();
    EXPECT_LT(std::abs(p.T1 - p.T0), 1e-12 * scale);
    EXPECT_LT(std::abs(p.Tm1 - p.T0), 1e-12 * scale);
    EXPECT_LT(std::abs(p.v_p1) + std::abs(p.v_m1), 1e-12 * scale);
    EXPECT_LT(p.fit_residual, kAnsatzResidualLimit);
  }
}

TEST(SpinOneCouplings, IsotropicClosedFormProperties) {
  const auto a = spin_one_isotropic_analytic(kTwoPi * 34.0, kTwoPi * 0.1, kTwoPi * 0.17);
  // -123 sqrt(2)/7 * 0.1 * 0.17 / 34 kHz
  EXPECT_NEAR(a.J_xy / kTwoPi * 1e3, -12.4, 0.05);
  EXPECT_EQ(spin_one_isotropic_analytic(1.0, 0.02, 0.02).B, 0.0);
  for (const auto& [tx, ty] : {std::pair{0.01, 0.02}, {0.03, 0.03}, {0.05, 0.001}}) {
    const auto b = spin_one_isotropic_analytic(1.0, tx, ty);
    EXPECT_NEAR(b.J_z / b.J_xy, (tx * tx + ty * ty) / (2.0 * tx * ty), 1e-12 * b.J_z / b.J_xy);
    EXPECT_GE(b.J_z / b.J_xy, 1.0 - 1e-15);
  }
  EXPECT_THROW(spin_one_isotropic_analytic(0.0, 0.1, 0.1), std::invalid_argument);
}

TEST(SpinOneCouplings, UnequalCouplingsGiveSingleIonAnisotropy) {
  const auto spectra = single_site_spectra(DriveParams::from_detuning(1.0, 1.1, 0.0));
  EXPECT_GT(std::abs((spectra.two.E_1 - spectra.two.E_0) - (spectra.two.E_0 - spectra.two.E_m1)), 1e-4);
  const auto geom = dipolar_chain_geometry(2, 0.01, 0.017);
  const auto model = spin_one_general(geom, DriveParams::from_detuning(1.0, 1.1, 0.0));
  EXPECT_GT(std::abs(model.D_field(0)), 1e-4);
  EXPECT_FALSE(model.outside_ansatz);
  const auto iso = spin_one_general(geom, DriveParams::from_detuning(1.0, 1.0, 0.0));
  EXPECT_LT(std::abs(iso.v_p1(0, 1)) + std::abs(iso.v_m1(0, 1)), 1e-12 * std::abs(iso.J_xy(0, 1)));
}

TEST(SpinOneCouplings, FitReconstructsPairMatrix) {
  const auto m = pair_effective_matrix(site(1.0, 1.25, -0.2), site(1.0, 1.25, -0.2), 0.02, 0.03, Manifold::spin_one);
  const auto p = extract_spin_one(m);
  EXPECT_LT((spin_one_pair_matrix(p) - m.second).cwiseAbs().maxCoeff(), 1e-10 * m.second.cwiseAbs().maxCoeff());
  EXPECT_THROW(extract_spin_half(m), std::invalid_argument);
}

TEST(SpinOneModel, HamiltonianConservesMagnetisation) {
  const auto geom = dipolar_chain_geometry(3, 0.02, 0.03);
  const auto model = spin_one_general(geom, DriveParams::from_detuning(1.0, 1.2, -0.1));
  const auto h = build_spin_hamiltonian(model);
  EXPECT_LT(h.hermiticity_error(), 1e-14);
  EXPECT_LT(commutator_max_abs(h, total_sz(SpinSpace(3, 3))), 1e-13);
}

TEST(SpinOneModel, EffectiveSpectrumMatchesPairMatrix) {
  const SiteDrive s = site(1.0, 1.3, 0.1);
  const auto geom = dipolar_chain_geometry(2, 0.02, 0.025);
  auto drive = DriveParams::from_detuning(1.0, 1.3, 0.1);
  const auto model = spin_one_general(geom, drive);
  const Eigen::MatrixXd h = build_spin_hamiltonian(model).to_dense().real();
  const Eigen::MatrixXd m = pair_effective_matrix(s, s, 0.02, 0.025, Manifold::spin_one).full();
  EXPECT_LT((h - m).cwiseAbs().maxCoeff(), 1e-12 * m.cwiseAbs().maxCoeff());
}
