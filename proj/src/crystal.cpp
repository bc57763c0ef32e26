#include "ionjch/crystal.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "ionjch/errors.hpp"
#include "ionjch/output.hpp"
#include "ionjch/units.hpp"

namespace ionjch {

namespace {

Eigen::VectorXd force(const Eigen::VectorXd& u) {
  const Eigen::Index n = u.size();
  Eigen::VectorXd f = u;
  for (Eigen::Index m = 0; m < n; ++m) {
    for (Eigen::Index k = 0; k < n; ++k) {
      if (k == m) continue;
      const double d = u(m) - u(k);
      f(m) -= (d > 0 ? 1.0 : -1.0) / (d * d);
    }
  }
  return f;
}

Eigen::MatrixXd jacobian(const Eigen::VectorXd& u) {
  const Eigen::Index n = u.size();
  Eigen::MatrixXd jac = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index m = 0; m < n; ++m) {
    for (Eigen::Index k = 0; k < n; ++k) {
      if (k == m) continue;
      const double c = 2.0 / std::pow(std::abs(u(m) - u(k)), 3);
      jac(m, m) += c;
      jac(m, k) -= c;
    }
  }
  return jac;
}

bool strictly_ascending(const Eigen::VectorXd& u) {
  for (Eigen::Index i = 1; i < u.size(); ++i) {
    if (!(u(i) > u(i - 1))) return false;
  }
  return true;
}

}  // namespace

double force_residual(std::span<const double> u) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(u.size()));
  for (std::size_t i = 0; i < u.size(); ++i) v(static_cast<Eigen::Index>(i)) = u[i];
  return u.empty() ? 0.0 : force(v).cwiseAbs().maxCoeff();
}

std::vector<double> equilibrium_positions(int n_ions, const EquilibriumOptions& opts) {
  if (n_ions < 1) throw ConfigError(ConfigErrorKind::kOutOfRange, "n_ions must be >= 1");
  if (n_ions == 1) return {0.0};

  const Eigen::Index n = n_ions;
  const double half_width = 1.1 * std::pow(static_cast<double>(n_ions), 0.56);
  Eigen::VectorXd u = Eigen::VectorXd::LinSpaced(n, -half_width, half_width);

  Eigen::VectorXd f = force(u);
  double residual = f.cwiseAbs().maxCoeff();
  for (int it = 0; it < opts.max_iterations && residual >= opts.tolerance; ++it) {
    const Eigen::VectorXd step = jacobian(u).partialPivLu().solve(-f);
    double scale = 1.0;
    bool improved = false;
    for (int halvings = 0; halvings < 40; ++halvings, scale *= 0.5) {
      Eigen::VectorXd trial = u + scale * step;
      if (!strictly_ascending(trial)) continue;
      Eigen::VectorXd ft = force(trial);
      const double rt = ft.cwiseAbs().maxCoeff();
      if (rt < residual) {
        u = std::move(trial);
        f = std::move(ft);
        residual = rt;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  if (!(residual < opts.tolerance)) {
    throw NumericalError("equilibrium_positions: no convergence for N=" + std::to_string(n_ions) +
                         ", residual " + std::to_string(residual));
  }
  // Symmetrize about the trap centre; removes round-off asymmetry.
  Eigen::VectorXd sym = 0.5 * (u - u.reverse());
  if (force(sym).cwiseAbs().maxCoeff() <= residual) u = sym;
  return {u.data(), u.data() + n};
}

HoppingMatrices hopping_matrix(std::span<const double> u, const TrapConfig& trap) {
  const auto n = static_cast<Eigen::Index>(u.size());
  const double wz = trap.omega_z();
  const double cx = wz * wz / (2.0 * trap.omega_x());
  const double cy = wz * wz / (2.0 * trap.omega_y());
  HoppingMatrices h{Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n)};
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = j + 1; k < n; ++k) {
      const double d = std::abs(u[j] - u[k]);
      if (d == 0.0) {
        throw NumericalError("hopping_matrix: coincident ions " + std::to_string(j + 1) + " and " +
                             std::to_string(k + 1));
      }
      const double inv3 = 1.0 / (d * d * d);
      h.t_x(j, k) = h.t_x(k, j) = cx * inv3;
      h.t_y(j, k) = h.t_y(k, j) = cy * inv3;
    }
  }
  return h;
}

OnsiteShifts onsite_shifts(const Eigen::MatrixXd& t_x, const Eigen::MatrixXd& t_y) {
  // Diagonals are zero, so the full row sum equals the off-diagonal sum.
  return {-t_x.rowwise().sum(), -t_y.rowwise().sum()};
}

CrystalGeometry geometry_from_hopping(Eigen::MatrixXd t_x, Eigen::MatrixXd t_y) {
  if (t_x.rows() != t_x.cols() || t_x.rows() != t_y.rows() || t_y.rows() != t_y.cols()) {
    throw ConfigError(ConfigErrorKind::kInvalidValue, "hopping matrices must be square and equal-sized");
  }
  t_x.diagonal().setZero();
  t_y.diagonal().setZero();
  CrystalGeometry g;
  auto shifts = onsite_shifts(t_x, t_y);
  g.t_x = std::move(t_x);
  g.t_y = std::move(t_y);
  g.dw_x = std::move(shifts.dw_x);
  g.dw_y = std::move(shifts.dw_y);
  return g;
}

CrystalGeometry build_geometry(const TrapConfig& trap) {
  trap.validate();
  auto u = equilibrium_positions(trap.n_ions);
  auto h = hopping_matrix(u, trap);
  CrystalGeometry g = geometry_from_hopping(std::move(h.t_x), std::move(h.t_y));
  g.u = std::move(u);
  return g;
}

CrystalGeometry dipolar_chain_geometry(int n_sites, double t_x_nn, double t_y_nn) {
  Eigen::MatrixXd tx = Eigen::MatrixXd::Zero(n_sites, n_sites);
  Eigen::MatrixXd ty = Eigen::MatrixXd::Zero(n_sites, n_sites);
  for (int j = 0; j < n_sites; ++j) {
    for (int k = 0; k < n_sites; ++k) {
      if (j == k) continue;
      const double d = std::abs(j - k);
      tx(j, k) = t_x_nn / (d * d * d);
      ty(j, k) = t_y_nn / (d * d * d);
    }
  }
  return geometry_from_hopping(std::move(tx), std::move(ty));
}

CrystalGeometry geometry_for(const SimulationConfig& cfg) {
  if (cfg.has_hopping_override()) {
    return dipolar_chain_geometry(cfg.trap.n_ions, *cfg.t_x_override, *cfg.t_y_override);
  }
  return build_geometry(cfg.trap);
}

LocalDetunings local_detunings(const CrystalGeometry& geometry, const DriveParams& drive) {
  const Eigen::Index n = geometry.n_sites();
  if (drive.reference_ion < 0 || drive.reference_ion >= n) {
    throw ConfigError(ConfigErrorKind::kOutOfRange,
                      "reference_ion " + std::to_string(drive.reference_ion + 1) + " outside [1, " +
                          std::to_string(n) + "]");
  }
  LocalDetunings d{Eigen::VectorXd::Constant(n, drive.Delta), Eigen::VectorXd::Constant(n, drive.Delta)};
  if (!drive.homogeneous) {
    d.x.array() += geometry.dw_x.array() - geometry.dw_x(drive.reference_ion);
    d.y.array() += geometry.dw_y.array() - geometry.dw_y(drive.reference_ion);
  }
  return d;
}

void write_geometry_csv(std::ostream& os, const CrystalGeometry& geometry, int row_ion) {
  const int n = geometry.n_sites();
  if (row_ion < 0 || row_ion >= n) {
    throw ConfigError(ConfigErrorKind::kOutOfRange, "row ion outside the crystal");
  }
  os << "j,k,u_j,t_x_khz,t_y_khz,dw_x_khz,dw_y_khz\n";
  for (int j = 0; j < n; ++j) {
    const double u = geometry.u.empty() ? static_cast<double>(j) : geometry.u[j];
    os << (j + 1) << ',' << (row_ion + 1) << ',' << fmt_num(u) << ','
       << fmt_num(angular_to_khz(geometry.t_x(row_ion, j))) << ','
       << fmt_num(angular_to_khz(geometry.t_y(row_ion, j))) << ','
       << fmt_num(angular_to_khz(geometry.dw_x(j))) << ',' << fmt_num(angular_to_khz(geometry.dw_y(j)))
       << '\n';
  }
}

}  // namespace ionjch
