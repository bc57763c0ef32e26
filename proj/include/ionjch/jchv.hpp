#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "ionjch/crystal.hpp"
#include "ionjch/fock.hpp"
#include "ionjch/params.hpp"
#include "ionjch/sparse_operator.hpp"

namespace ionjch {

struct DressedComponent {
  SiteState state;
  double amplitude = 0.0;
};
using DressedState = std::vector<DressedComponent>;

/// One excitation per site: E_{+-,b} = Delta + delta/2 +- sqrt(delta^2/4 + g_b^2), and
/// |up> = |->_x = cos(theta_x)|g,1,0> - sin(theta_x)|e1,0,0>, |down> = |->_y likewise.
struct PolaritonSpectrum1 {
  double E_minus_x = 0.0, E_plus_x = 0.0, E_minus_y = 0.0, E_plus_y = 0.0;
  double theta_x = 0.0, theta_y = 0.0;
  DressedState up, down;
};

/// Two excitations per site: the three lowest states |1>, |0>, |-1> and their energies.
struct PolaritonSpectrum2 {
  double E_1 = 0.0, E_0 = 0.0, E_m1 = 0.0;
  double theta2_x = 0.0, theta2_y = 0.0, phi = 0.0, zeta = 0.0;
  DressedState plus, zero, minus;
};

struct SingleSiteSpectra {
  PolaritonSpectrum1 one;
  PolaritonSpectrum2 two;
};

/// Closed-form single-site spectra in the homogeneous limit.
SingleSiteSpectra single_site_spectra(const DriveParams& drive);

/// U_s = E_s - 2 E_{-,y} for s = 1, 0, -1: cost of moving one excitation between
/// two unit-filled sites.
std::array<double, 3> particle_hole_gaps(const DriveParams& drive);

/// Local JC parameters of one ion.
struct SiteDrive {
  double Delta_x = 0.0;
  double Delta_y = 0.0;
  double omega0 = 0.0;
  double g_x = 0.0;
  double g_y = 0.0;
};

SiteDrive homogeneous_site(const DriveParams& drive);
std::vector<SiteDrive> site_drives(const CrystalGeometry& geometry, const DriveParams& drive);

/// sum_j [sum_b Delta_{b,j} n_{b,j} + omega0 (P_e1 + P_e2) + g_x jc_x(j) + g_y jc_y(j)].
SparseOperator build_hjc(const SectorBasis& basis, const CrystalGeometry& geometry, const DriveParams& drive);
SparseOperator build_hjc(const SectorBasis& basis, const std::vector<SiteDrive>& sites);

/// sum_{j<k} sum_b t^b_{j,k} (a_{b,j}^dag a_{b,k} + h.c.).
SparseOperator build_hb(const SectorBasis& basis, const CrystalGeometry& geometry);

/// H_JC + H_b.
SparseOperator build_jchv(const SectorBasis& basis, const CrystalGeometry& geometry, const DriveParams& drive);

/// Dense single-site H_JC on the n-excitation site states (ordering of site_states(n)).
Eigen::MatrixXd site_hamiltonian(int n, const SiteDrive& site);

}  // namespace ionjch
