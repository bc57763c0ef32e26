#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <random>
#include <sstream>

#include "ionjch/dynamics.hpp"
#include "ionjch/errors.hpp"
#include "ionjch/spin_ops.hpp"
#include "ionjch/units.hpp"

using namespace ionjch;

namespace {

SpinHalfModel flip_flop_model(double k) {
  SpinHalfModel m;
  m.K_xy = (Eigen::MatrixXd(2, 2) << 0, k, k, 0).finished();
  m.K_z = Eigen::MatrixXd::Zero(2, 2);
  m.H_field = Eigen::VectorXd::Zero(2);
  m.E0_split = Eigen::VectorXd::Zero(2);
  return m;
}

std::vector<TrackedState> spin_half_pairs() {
  std::vector<TrackedState> t;
  for (const auto& l : std::vector<SpinLabels>{{0, 0}, {0, 1}, {1, 0}, {1, 1}})
    t.push_back({format_spin_labels(l, Manifold::spin_half), spin_product_state(l, Manifold::spin_half)});
  return t;
}

SparseOperator random_hermitian(std::size_t dim, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> val;
  std::uniform_int_distribution<std::size_t> pick(0, dim - 1);
  std::vector<Entry> e;
  for (std::size_t i = 0; i < dim; ++i) e.push_back({i, i, val(rng)});
  for (std::size_t n = 0; n < 4 * dim; ++n) {
    const std::size_t r = pick(rng), c = pick(rng);
    const cplx v(0.3 * val(rng), 0.3 * val(rng));
    e.push_back({r, c, v});
    e.push_back({c, r, std::conj(v)});
  }
  return SparseOperator::from_triplets(dim, e);
}

CrystalGeometry three_ion_crystal() {
  TrapConfig trap;
  trap.n_ions = 3;
  trap.nu_z_khz = 120.0;
  trap.aspect_x = 100.0 / 1.8;
  trap.aspect_y = 100.0;
  return build_geometry(trap);
}

DriveParams three_ion_drive() {
  auto d = DriveParams::from_detuning(khz_to_angular(19.0), khz_to_angular(20.0), khz_to_angular(-0.22));
  d.homogeneous = true;
  return d;
}

std::size_t label_index(const EvolutionResult& r, const std::string& l) {
  return static_cast<std::size_t>(std::find(r.labels.begin(), r.labels.end(), l) - r.labels.begin());
}

}  // namespace

TEST(Labels, ParseAndFormat) {
  EXPECT_EQ(parse_spin_labels("udu", Manifold::spin_half), (SpinLabels{0, 1, 0}));
  EXPECT_EQ(parse_spin_labels("u,d", Manifold::spin_half), (SpinLabels{0, 1}));
  EXPECT_EQ(parse_spin_labels("1,-1", Manifold::spin_one), (SpinLabels{0, 2}));
  EXPECT_EQ(parse_spin_labels("+1 0 -1", Manifold::spin_one), (SpinLabels{0, 1, 2}));
  EXPECT_EQ(parse_spin_labels("pm", Manifold::spin_one), (SpinLabels{0, 2}));
  EXPECT_EQ(format_spin_labels({0, 1, 2}, Manifold::spin_one), "p0m");
  EXPECT_EQ(format_spin_labels({1, 1, 0}, Manifold::spin_half), "ddu");
  EXPECT_THROW(parse_spin_labels("uxd", Manifold::spin_half), std::invalid_argument);
  EXPECT_THROW(parse_spin_labels("2", Manifold::spin_one), std::invalid_argument);
  EXPECT_THROW(parse_spin_labels("", Manifold::spin_one), std::invalid_argument);
}

TEST(Labels, Magnetisation) {
  EXPECT_EQ(twice_magnetisation({0, 1, 0}, Manifold::spin_half), 1);
  EXPECT_EQ(twice_magnetisation({0, 2}, Manifold::spin_one), 0);
  const auto same = same_magnetisation_labels(3, Manifold::spin_half, 1);
  EXPECT_EQ(same, (std::vector<SpinLabels>{{0, 0, 1}, {0, 1, 0}, {1, 0, 0}}));
  EXPECT_EQ(same_magnetisation_labels(2, Manifold::spin_one, 0).size(), 3u);
}

TEST(DressedStates, ResonantSingleSite) {
  const auto geom = dipolar_chain_geometry(1, 0.0, 0.0);
  const auto drive = DriveParams::from_detuning(1.0, 1.3, 0.0);
  const SectorBasis b(1, 1);
  const auto up = dressed_product_state({0}, geom, drive, b);
  const auto down = dressed_product_state({1}, geom, drive, b);
  const std::vector<SiteState> g10{{Level::g, 1, 0}}, e1{{Level::e1, 0, 0}};
  EXPECT_NEAR(up(static_cast<Eigen::Index>(*b.index_of(g10))).real(), 1.0 / std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(up(static_cast<Eigen::Index>(*b.index_of(e1))).real(), -1.0 / std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(up.norm(), 1.0, 1e-14);
  EXPECT_LT(std::abs(up.dot(down)), 1e-15);
}

TEST(DressedStates, ProductNormAndSectorCheck) {
  const auto geom = three_ion_crystal();
  const auto drive = three_ion_drive();
  const SectorBasis b(3, 3);
  for (const auto& l : same_magnetisation_labels(3, Manifold::spin_half, 1))
    EXPECT_NEAR(dressed_product_state(l, geom, drive, b).norm(), 1.0, 1e-14);
  EXPECT_THROW(dressed_product_state({0, 1}, geom, drive, b), std::invalid_argument);
}

TEST(Evolve, InitialPopulationsAreOverlaps) {
  const auto h = random_hermitian(20, 1);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Random(20);
  psi.normalize();
  std::vector<TrackedState> tr;
  for (int i = 0; i < 3; ++i) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(20);
    v(i) = 1.0;
    tr.push_back({std::to_string(i), v});
  }
  const std::vector<double> t{0.0, 0.5};
  const auto r = evolve(h, psi, t, tr);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(r.populations[i][0], std::norm(psi(i)), 1e-15);
}

TEST(Evolve, DiagonalHamiltonianKeepsPopulations) {
  SpinHalfModel m = flip_flop_model(0.0);
  m.K_z(0, 1) = m.K_z(1, 0) = 0.7;
  m.H_field = Eigen::Vector2d(0.2, -0.1);
  const auto h = build_spin_hamiltonian(m);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Constant(4, 0.5);
  const auto times = uniform_times(10.0, 50);
  const auto tr = spin_half_pairs();
  const auto r = evolve(h, psi, times, tr);
  for (const auto& p : r.populations)
    for (double v : p) EXPECT_NEAR(v, 0.25, 1e-13);
}

TEST(Evolve, FlipFlopRabiOscillation) {
  const double k = 0.37;
  const auto h = build_spin_hamiltonian(flip_flop_model(k));
  const auto times = uniform_times(3.0, 200);
  const auto tr = spin_half_pairs();
  const auto r = evolve(h, spin_product_state({0, 1}, Manifold::spin_half), times, tr);
  for (std::size_t i = 0; i < times.size(); ++i) EXPECT_NEAR(r.populations[2][i], std::pow(std::sin(2.0 * k * times[i]), 2), 1e-12);
  const std::vector<double> half{0.0, std::numbers::pi / (4.0 * k)};
  EXPECT_NEAR(evolve(h, spin_product_state({0, 1}, Manifold::spin_half), half, tr).populations[2][1], 1.0, 1e-12);
  const auto period = dominant_period(h, spin_product_state({0, 1}, Manifold::spin_half), tr);
  ASSERT_TRUE(period.has_value());
  EXPECT_NEAR(*period, std::numbers::pi / (2.0 * k), 1e-10);
}

TEST(Evolve, KrylovAgreesWithDense) {
  const auto h = random_hermitian(300, 2);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(300);
  psi(0) = psi(1) = std::sqrt(0.5);
  std::vector<TrackedState> tr;
  for (int i = 0; i < 5; ++i) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(300);
    v(i) = 1.0;
    tr.push_back({std::to_string(i), v});
  }
  const auto times = uniform_times(4.0, 40);
  EvolveOptions dense, krylov;
  dense.method = Propagator::dense;
  krylov.method = Propagator::krylov;
  const auto a = evolve(h, psi, times, tr, dense);
  const auto b = evolve(h, psi, times, tr, krylov);
  EXPECT_EQ(a.used, Propagator::dense);
  EXPECT_EQ(b.used, Propagator::krylov);
  for (std::size_t l = 0; l < tr.size(); ++l)
    for (std::size_t i = 0; i < times.size(); ++i) EXPECT_NEAR(a.populations[l][i], b.populations[l][i], 1e-8);
  EXPECT_LT(b.norm_drift, 1e-9);
  EXPECT_LT(b.energy_drift, 1e-8);
}

TEST(Evolve, RejectsNonHermitian) {
  const auto h = SparseOperator::from_triplets(2, {{0, 1, 1.0}});
  const std::vector<double> t{0.0, 1.0};
  EXPECT_THROW(evolve(h, Eigen::VectorXcd::Unit(2, 0), t, {}), NumericalError);
  EXPECT_THROW(uniform_times(1.0, 0), std::invalid_argument);
}

TEST(Comparison, DecoupledSitesAreStatic) {
  const auto geom = dipolar_chain_geometry(2, 0.0, 0.0);
  const auto drive = DriveParams::from_detuning(1.0, 1.2, -0.1);
  ComparisonOptions opts;
  opts.n_steps = 20;
  const auto r = compare_full_vs_effective(geom, drive, Manifold::spin_half, {0, 1}, opts);
  EXPECT_FALSE(r.period_ms.has_value());
  EXPECT_DOUBLE_EQ(r.t_final_ms, opts.fallback_t_final_ms);
  EXPECT_LT(r.max_deviation, 1e-12);
  for (const auto& p : r.full.populations)
    for (double v : p) EXPECT_NEAR(v, p.front(), 1e-12);
}

TEST(Comparison, ThreeIonSuperexchange) {
  const auto geom = three_ion_crystal();
  const auto r = compare_full_vs_effective(geom, three_ion_drive(), Manifold::spin_half, {0, 1, 0});
  EXPECT_EQ(r.full_dim, 262u);
  ASSERT_TRUE(r.period_ms.has_value());
  EXPECT_EQ(r.full.times.size(), 401u);
  const auto uud = label_index(r.full, "uud"), duu = label_index(r.full, "duu");
  ASSERT_LT(uud, r.labels.size());
  ASSERT_LT(duu, r.labels.size());
  double peak = 0.0;
  for (std::size_t i = 0; i < r.full.times.size(); ++i) {
    EXPECT_NEAR(r.full.populations[uud][i], r.full.populations[duu][i], 1e-9);
    peak = std::max(peak, r.full.populations[uud][i]);
  }
  EXPECT_GT(peak, 0.1);
  EXPECT_LE(r.max_deviation, 0.1);
  EXPECT_LT(r.full.norm_drift, 1e-9);
  EXPECT_LT(r.effective.norm_drift, 1e-9);
  EXPECT_LT(r.full.energy_drift, 1e-8);
}

TEST(Comparison, JointOffsetInvariance) {
  const auto geom = three_ion_crystal();
  auto a = three_ion_drive();
  auto b = a;
  b.Delta += khz_to_angular(5.0);
  b.omega0 += khz_to_angular(5.0);
  ComparisonOptions opts;
  opts.t_final_ms = 5.0;
  opts.n_steps = 50;
  const auto ra = compare_full_vs_effective(geom, a, Manifold::spin_half, {0, 1, 0}, opts);
  const auto rb = compare_full_vs_effective(geom, b, Manifold::spin_half, {0, 1, 0}, opts);
  for (std::size_t l = 0; l < ra.labels.size(); ++l)
    for (std::size_t i = 0; i < ra.full.times.size(); ++i) {
      EXPECT_NEAR(ra.full.populations[l][i], rb.full.populations[l][i], 1e-9);
      EXPECT_NEAR(ra.effective.populations[l][i], rb.effective.populations[l][i], 1e-9);
    }
}

TEST(Comparison, WritersEmitExpectedColumns) {
  const auto geom = dipolar_chain_geometry(2, 0.02, 0.03);
  ComparisonOptions opts;
  opts.n_steps = 4;
  const auto r = compare_full_vs_effective(geom, DriveParams::from_detuning(1.0, 1.2, 0.0), Manifold::spin_half, {0, 1}, opts);
  std::ostringstream csv, pop, rep;
  write_comparison_csv(csv, r);
  write_populations_csv(pop, r.full);
  write_comparison_report(rep, r);
  const std::string c = csv.str(), q = pop.str();
  EXPECT_EQ(c.substr(0, c.find('\n')), "t_ms,full_ud,full_du,eff_ud,eff_du");
  EXPECT_EQ(q.substr(0, q.find('\n')), "t_ms,ud,du");
  EXPECT_EQ(std::count(c.begin(), c.end(), '\n'), 6);
  EXPECT_NE(rep.str().find("max_abs_deviation = "), std::string::npos);
  EXPECT_THROW(compare_full_vs_effective(geom, DriveParams::from_detuning(1.0, 1.2, 0.0), Manifold::spin_half, {0}, opts),
               std::invalid_argument);
}

TEST(Comparison, ThreadCountDoesNotChangeResults) {
  const auto geom = dipolar_chain_geometry(3, 0.03, 0.05);
  const auto drive = DriveParams::from_detuning(1.0, 1.2, -0.1);
  ComparisonOptions opts;
  opts.n_steps = 20;
  ::setenv("IONJCH_THREADS", "1", 1);
  const auto serial = compare_full_vs_effective(geom, drive, Manifold::spin_half, {0, 1, 0}, opts);
  ::setenv("IONJCH_THREADS", "4", 1);
  EXPECT_EQ(configured_threads(), 4);
  const auto threaded = compare_full_vs_effective(geom, drive, Manifold::spin_half, {0, 1, 0}, opts);
  ::unsetenv("IONJCH_THREADS");
  EXPECT_EQ(configured_threads(), 1);
  EXPECT_EQ(serial.full.populations, threaded.full.populations);
  EXPECT_EQ(serial.effective.populations, threaded.effective.populations);
}
