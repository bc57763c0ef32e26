#include "ionjch/jchv.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ionjch {

namespace {

// atan(2g / (d + sqrt(d^2 + 4g^2))) written to stay accurate for either sign of d
// and to return pi/2 for g = 0, d < 0 (the lower state is then atomic).
double mixing_angle(double two_g, double d) {
  const double root = std::sqrt(d * d + two_g * two_g);
  return d >= 0.0 ? std::atan2(two_g, d + root) : std::atan2(root - d, two_g);
}

}  // namespace

SingleSiteSpectra single_site_spectra(const DriveParams& drive) {
  const double D = drive.Delta;
  const double d = drive.delta();
  const double gx = drive.g_x, gy = drive.g_y;
  SingleSiteSpectra s;

  auto& one = s.one;
  const double rx = std::sqrt(d * d / 4.0 + gx * gx);
  const double ry = std::sqrt(d * d / 4.0 + gy * gy);
  one.E_minus_x = D + d / 2.0 - rx;
  one.E_plus_x = D + d / 2.0 + rx;
  one.E_minus_y = D + d / 2.0 - ry;
  one.E_plus_y = D + d / 2.0 + ry;
  one.theta_x = mixing_angle(2.0 * gx, d);
  one.theta_y = mixing_angle(2.0 * gy, d);
  one.up = {{{Level::g, 1, 0}, std::cos(one.theta_x)}, {{Level::e1, 0, 0}, -std::sin(one.theta_x)}};
  one.down = {{{Level::g, 0, 1}, std::cos(one.theta_y)}, {{Level::e2, 0, 0}, -std::sin(one.theta_y)}};

  auto& two = s.two;
  const double gxy = std::sqrt(gx * gx + gy * gy);
  two.E_1 = 2.0 * D + d / 2.0 - std::sqrt(2.0 * gx * gx + d * d / 4.0);
  two.E_0 = 2.0 * D + d / 2.0 - std::sqrt(gxy * gxy + d * d / 4.0);
  two.E_m1 = 2.0 * D + d / 2.0 - std::sqrt(2.0 * gy * gy + d * d / 4.0);
  // Same functional form as theta with g -> sqrt(2) g (resp. sqrt(gx^2 + gy^2)).
  two.theta2_x = mixing_angle(2.0 * std::sqrt(2.0) * gx, d);
  two.theta2_y = mixing_angle(2.0 * std::sqrt(2.0) * gy, d);
  two.phi = mixing_angle(2.0 * gxy, d);
  two.zeta = (gx == 0.0 && gy == 0.0) ? std::numbers::pi / 4.0 : std::atan2(gx, gy);
  two.plus = {{{Level::g, 2, 0}, std::cos(two.theta2_x)}, {{Level::e1, 1, 0}, -std::sin(two.theta2_x)}};
  two.zero = {{{Level::g, 1, 1}, std::cos(two.phi)},
              {{Level::e1, 0, 1}, -std::sin(two.phi) * std::sin(two.zeta)},
              {{Level::e2, 1, 0}, -std::sin(two.phi) * std::cos(two.zeta)}};
  two.minus = {{{Level::g, 0, 2}, std::cos(two.theta2_y)}, {{Level::e2, 0, 1}, -std::sin(two.theta2_y)}};
  return s;
}

std::array<double, 3> particle_hole_gaps(const DriveParams& drive) {
  const auto s = single_site_spectra(drive);
  const double ref = 2.0 * s.one.E_minus_y;
  return {s.two.E_1 - ref, s.two.E_0 - ref, s.two.E_m1 - ref};
}

SiteDrive homogeneous_site(const DriveParams& drive) {
  return {drive.Delta, drive.Delta, drive.omega0, drive.g_x, drive.g_y};
}

std::vector<SiteDrive> site_drives(const CrystalGeometry& geometry, const DriveParams& drive) {
  const auto det = local_detunings(geometry, drive);
  std::vector<SiteDrive> out;
  for (int j = 0; j < geometry.n_sites(); ++j) {
    out.push_back({det.x(j), det.y(j), drive.omega0, drive.g_x, drive.g_y});
  }
  return out;
}

SparseOperator build_hjc(const SectorBasis& basis, const std::vector<SiteDrive>& sites) {
  if (static_cast<int>(sites.size()) != basis.n_sites()) {
    throw std::invalid_argument("build_hjc: " + std::to_string(sites.size()) + " site drives for a " +
                                std::to_string(basis.n_sites()) + "-site basis");
  }
  std::vector<Entry> entries;
  std::vector<SiteState> work(static_cast<std::size_t>(basis.n_sites()));
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    const auto config = basis.state(i);
    double diag = 0.0;
    for (int j = 0; j < basis.n_sites(); ++j) {
      const SiteState s = config[j];
      const SiteDrive& p = sites[j];
      diag += p.Delta_x * s.n_x + p.Delta_y * s.n_y + (s.level == Level::g ? 0.0 : p.omega0);
      if (s.level != Level::g) continue;
      // (g, n_x, n_y) couples to (e1, n_x - 1, n_y) and (e2, n_x, n_y - 1).
      for (const bool x : {true, false}) {
        const int n = x ? s.n_x : s.n_y;
        const double g = x ? p.g_x : p.g_y;
        if (n == 0 || g == 0.0) continue;
        std::copy(config.begin(), config.end(), work.begin());
        work[j] = x ? SiteState{Level::e1, s.n_x - 1, s.n_y} : SiteState{Level::e2, s.n_x, s.n_y - 1};
        const auto target = basis.index_of(work);
        if (!target) throw std::logic_error("build_hjc: state outside the sector");
        const double amp = g * std::sqrt(double(n));
        entries.push_back({*target, i, amp});
        entries.push_back({i, *target, amp});
      }
    }
    entries.push_back({i, i, diag});
  }
  return SparseOperator::from_triplets(basis.dim(), std::move(entries));
}

SparseOperator build_hjc(const SectorBasis& basis, const CrystalGeometry& geometry, const DriveParams& drive) {
  if (geometry.n_sites() != basis.n_sites()) {
    throw std::invalid_argument("build_hjc: geometry has " + std::to_string(geometry.n_sites()) +
                                " sites, basis has " + std::to_string(basis.n_sites()));
  }
  return build_hjc(basis, site_drives(geometry, drive));
}

SparseOperator build_hb(const SectorBasis& basis, const CrystalGeometry& geometry) {
  if (geometry.n_sites() != basis.n_sites()) {
    throw std::invalid_argument("build_hb: geometry/basis site count mismatch");
  }
  std::vector<Entry> entries;
  for (int j = 0; j < basis.n_sites(); ++j) {
    for (int k = j + 1; k < basis.n_sites(); ++k) {
      for (const Species b : {Species::x, Species::y}) {
        const double t = b == Species::x ? geometry.t_x(j, k) : geometry.t_y(j, k);
        if (t == 0.0) continue;
        const SparseOperator hop = build_hop_operator(basis, j, k, b);
        for (const auto& e : hop.entries()) {
          entries.push_back({e.row, e.col, t * e.value});
        }
      }
    }
  }
  return SparseOperator::from_triplets(basis.dim(), std::move(entries));
}

SparseOperator build_jchv(const SectorBasis& basis, const CrystalGeometry& geometry, const DriveParams& drive) {
  return build_hjc(basis, geometry, drive) + build_hb(basis, geometry);
}

Eigen::MatrixXd site_hamiltonian(int n, const SiteDrive& site) {
  const SectorBasis basis(1, n);
  return build_hjc(basis, std::vector<SiteDrive>{site}).to_dense().real();
}

}  // namespace ionjch
