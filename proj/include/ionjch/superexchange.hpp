#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ionjch/crystal.hpp"
#include "ionjch/fock.hpp"
#include "ionjch/jchv.hpp"
#include "ionjch/params.hpp"
#include "ionjch/sparse_operator.hpp"

namespace ionjch {

/// Value = polariton excitations per site.
enum class Manifold { spin_half = 1, spin_one = 2 };

int excitations_per_site(Manifold m);
int spin_dim(Manifold m);
Manifold manifold_for(int n_excitations);

/// Low-energy manifold of one site. Column m of `vectors` is the lowest H_JC
/// eigenvector in the (N_x, N_y) block of spin label m, signed so that its pure
/// phonon component is positive. Labels: (up, down) or (+1, 0, -1).
struct LocalManifold {
  Manifold kind = Manifold::spin_half;
  std::vector<SiteState> site_basis;
  Eigen::MatrixXd vectors;
  Eigen::VectorXd energies;
};

LocalManifold local_manifold(Manifold kind, const SiteDrive& site);

/// Per-species (N_x, N_y) of spin label m.
std::pair<int, int> label_species_counts(Manifold kind, int label_index);

/// Effective 2-site matrix on the product manifold of sites j and k, index r*d + s with
/// r on j. `zeroth` is the diagonal H_JC part, `second` the second-order hopping part.
struct PairEffectiveMatrix {
  Manifold kind = Manifold::spin_half;
  int j = 0, k = 1;
  Eigen::MatrixXd zeroth;
  Eigen::MatrixXd second;
  double hermiticity_residual = 0.0;  // max |second - second^T| before symmetrising
  double min_denominator = 0.0;       // smallest |E - E_chi| among contributing terms
  Eigen::MatrixXd full() const { return zeroth + second; }
};

struct PairOptions {
  double degeneracy_tolerance = 1e-9;  // relative to g_max
};

PairEffectiveMatrix pair_effective_matrix(int j, int k, const CrystalGeometry& geometry, const DriveParams& drive,
                                          Manifold kind, const PairOptions& opts = {});
PairEffectiveMatrix pair_effective_matrix(const SiteDrive& sj, const SiteDrive& sk, double t_x, double t_y,
                                          Manifold kind, const PairOptions& opts = {});

// ---------------------------------------------------------------------------
// spin-1/2

struct SpinHalfPair {
  double K_xy = 0.0, K_z = 0.0;
  double h_j = 0.0, h_k = 0.0;  // pair contribution to the sigma^z field on each site
  double constant = 0.0;
  double fit_residual = 0.0;  // max |second - ansatz|
};

SpinHalfPair extract_spin_half(const PairEffectiveMatrix& m);

struct SpinHalfModel {
  Eigen::MatrixXd K_xy, K_z;  // symmetric, zero diagonal
  Eigen::VectorXd H_field;    // hopping-induced fields
  Eigen::VectorXd E0_split;   // (E_up - E_down)/2 per site
  double energy_offset = 0.0;
  double max_fit_residual = 0.0;

  int n_sites() const { return static_cast<int>(H_field.size()); }
  Eigen::VectorXd total_field() const { return H_field + E0_split; }
};

SpinHalfModel spin_half_model(const CrystalGeometry& geometry, const DriveParams& drive, const PairOptions& opts = {});

/// Resonant closed forms; `h` is the contribution of one pair to H_j and to H_k.
struct SpinHalfAnalytic {
  double K_xy = 0.0, K_z = 0.0, h = 0.0;
};
SpinHalfAnalytic spin_half_analytic(double g_x, double g_y, double t_x, double t_y);

/// Closed-form model with homogeneous site energies; valid at zero detuning.
SpinHalfModel spin_half_analytic_model(const CrystalGeometry& geometry, const DriveParams& drive);

// ---------------------------------------------------------------------------
// spin-1

struct SpinOnePair {
  double T1 = 0.0, Tm1 = 0.0, T0 = 0.0, T0_alt = 0.0;
  Eigen::Matrix3d T_diag = Eigen::Matrix3d::Zero();  // (a, b) -> index (1 - a, 1 - b)
  double J_xy = 0.0, J_z = 0.0, V = 0.0;
  double W_jk = 0.0;  // S^z_j (S^z_k)^2
  double W_kj = 0.0;  // (S^z_j)^2 S^z_k
  double v_p1 = 0.0, v_m1 = 0.0;
  double B_j = 0.0, B_k = 0.0, D_j = 0.0, D_k = 0.0;
  double constant = 0.0;
  double fit_residual = 0.0;  // relative to max |second|
};

inline constexpr double kAnsatzResidualLimit = 1e-6;

SpinOnePair extract_spin_one(const PairEffectiveMatrix& m);
/// Dense 9x9 two-site Hamiltonian of the fitted pair terms (including constant).
Eigen::MatrixXd spin_one_pair_matrix(const SpinOnePair& p);

struct SpinOneModel {
  Eigen::MatrixXd J_xy, J_z, V, v_p1, v_m1;  // symmetric
  Eigen::MatrixXd W;                          // W(j,k): S^z_j (S^z_k)^2
  Eigen::VectorXd D_field, B_field;
  double energy_offset = 0.0;
  double max_fit_residual = 0.0;
  bool outside_ansatz = false;

  int n_sites() const { return static_cast<int>(D_field.size()); }
};

SpinOneModel spin_one_general(const CrystalGeometry& geometry, const DriveParams& drive, const PairOptions& opts = {});

/// Equal-coupling resonant closed forms.
struct SpinOneAnalytic {
  double J_xy = 0.0, J_z = 0.0, B = 0.0;
};
SpinOneAnalytic spin_one_isotropic_analytic(double g, double t_x, double t_y);

SparseOperator build_spin_hamiltonian(const SpinHalfModel& model);
SparseOperator build_spin_hamiltonian(const SpinOneModel& model);

/// Worker threads for pair loops, from IONJCH_THREADS (default 1).
int configured_threads();

}  // namespace ionjch
