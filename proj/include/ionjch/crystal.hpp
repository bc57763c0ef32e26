#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <span>
#include <vector>

#include "ionjch/params.hpp"

namespace ionjch {

struct EquilibriumOptions {
  double tolerance = 1e-12;  // max |force residual|
  int max_iterations = 200;
};

/// Dimensionless equilibrium positions u_j (units of l = (e^2 / m omega_z^2)^{1/3}),
/// ascending. Solves u_m = sum_{k<m} (u_m-u_k)^-2 - sum_{k>m} (u_k-u_m)^-2 with a
/// damped Newton iteration; throws NumericalError if the residual stalls.
std::vector<double> equilibrium_positions(int n_ions, const EquilibriumOptions& opts = {});

/// Largest absolute force-balance residual at the given positions.
double force_residual(std::span<const double> u);

struct HoppingMatrices {
  Eigen::MatrixXd t_x;  // rad/ms, symmetric, zero diagonal
  Eigen::MatrixXd t_y;
};

/// t^beta_{j,k} = (omega_z^2 / 2 omega_beta) |u_j - u_k|^-3.
HoppingMatrices hopping_matrix(std::span<const double> u, const TrapConfig& trap);

struct OnsiteShifts {
  Eigen::VectorXd dw_x;  // delta omega_{x,j} = -sum_{k != j} t^x_{j,k}
  Eigen::VectorXd dw_y;
};

OnsiteShifts onsite_shifts(const Eigen::MatrixXd& t_x, const Eigen::MatrixXd& t_y);

struct CrystalGeometry {
  std::vector<double> u;
  Eigen::MatrixXd t_x, t_y;
  Eigen::VectorXd dw_x, dw_y;

  int n_sites() const { return static_cast<int>(t_x.rows()); }
};

CrystalGeometry build_geometry(const TrapConfig& trap);

/// Geometry from explicit hopping matrices (positions left empty); shifts follow
/// the same sum rule as a real crystal.
CrystalGeometry geometry_from_hopping(Eigen::MatrixXd t_x, Eigen::MatrixXd t_y);

/// Equally spaced dipolar chain, t_{j,k} = t / |j-k|^3.
CrystalGeometry dipolar_chain_geometry(int n_sites, double t_x_nn, double t_y_nn);

/// Dispatches on the config: explicit hopping override or trap crystal.
CrystalGeometry geometry_for(const SimulationConfig& cfg);

struct LocalDetunings {
  Eigen::VectorXd x;  // Delta_{x,j}
  Eigen::VectorXd y;
};

/// Delta_{beta,j} = Delta + dw_{beta,j} - dw_{beta,ref}; all equal to Delta when
/// drive.homogeneous is set.
LocalDetunings local_detunings(const CrystalGeometry& geometry, const DriveParams& drive);

/// Columns j,k,u_j,t_x_khz,t_y_khz,dw_x_khz,dw_y_khz; one row per ion j, with k the
/// (zero-based) row ion whose hopping t_{k,j} is listed.
void write_geometry_csv(std::ostream& os, const CrystalGeometry& geometry, int row_ion);

}  // namespace ionjch
