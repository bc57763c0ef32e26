#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ionjch/crystal.hpp"
#include "ionjch/fock.hpp"
#include "ionjch/params.hpp"
#include "ionjch/sparse_operator.hpp"
#include "ionjch/superexchange.hpp"

namespace ionjch {

/// Spin labels are local manifold indices per site (0 = up / +1).
using SpinLabels = std::vector<int>;

/// Accepts "udu" or "u,d,u" (also the arrows) for spin-1/2 and "1,-1", "+1 -1" or
/// "pm" (p, 0, m) for spin-1.
SpinLabels parse_spin_labels(std::string_view text, Manifold kind);
/// "udu" for spin-1/2, "p0m" style for spin-1 (CSV-safe).
std::string format_spin_labels(const SpinLabels& labels, Manifold kind);
/// Sum of S^z over sites, in units of 1/2.
int twice_magnetisation(const SpinLabels& labels, Manifold kind);
/// All product labels with the same magnetisation, in spin-space index order.
std::vector<SpinLabels> same_magnetisation_labels(int n_sites, Manifold kind, int twice_mz);

/// Normalised product of single-site dressed states expanded in the sector basis.
Eigen::VectorXcd dressed_product_state(const SpinLabels& labels, const std::vector<LocalManifold>& sites,
                                       const SectorBasis& basis);
Eigen::VectorXcd dressed_product_state(const SpinLabels& labels, const CrystalGeometry& geometry,
                                       const DriveParams& drive, const SectorBasis& basis);
Eigen::VectorXcd spin_product_state(const SpinLabels& labels, Manifold kind);

struct TrackedState {
  std::string label;
  Eigen::VectorXcd vector;
};

enum class Propagator { automatic, dense, krylov };

struct EvolveOptions {
  Propagator method = Propagator::automatic;
  std::size_t dense_threshold = 2000;
  int krylov_dim = 30;
  double local_tolerance = 1e-9;
  double hermiticity_tolerance = 1e-10;
};

struct EvolutionResult {
  std::vector<double> times;  // ms
  std::vector<std::string> labels;
  std::vector<std::vector<double>> populations;  // [label][time]
  double norm_drift = 0.0;    // max |<psi|psi> - 1|
  double energy_drift = 0.0;  // max |<H>(t) - <H>(0)| / max(|<H>(0)|, 1)
  Propagator used = Propagator::dense;
};

EvolutionResult evolve(const SparseOperator& h, const Eigen::VectorXcd& psi0, std::span<const double> times,
                       std::span<const TrackedState> tracked, const EvolveOptions& opts = {});

/// 2 pi / (dominant Bohr frequency seen by the tracked populations); nullopt if static.
std::optional<double> dominant_period(const SparseOperator& h, const Eigen::VectorXcd& psi0,
                                      std::span<const TrackedState> tracked);

std::vector<double> uniform_times(double t_final, int n_steps);

struct ComparisonOptions {
  std::optional<double> t_final_ms;
  int n_steps = 400;
  double window_periods = 2.0;
  double fallback_t_final_ms = 1.0;
  std::optional<std::vector<SpinLabels>> tracked;
  std::size_t max_dim = SectorBasis::kDefaultMaxDim;
  EvolveOptions evolve;
};

struct ComparisonReport {
  Manifold kind = Manifold::spin_half;
  std::vector<std::string> labels;
  std::vector<double> max_abs_deviation;  // per label
  std::vector<double> l2_deviation;       // per label, rms over the time grid
  double max_deviation = 0.0;
  std::optional<double> period_ms;
  double t_final_ms = 0.0;
  std::size_t full_dim = 0;
  double fit_residual = 0.0;
  EvolutionResult full, effective;
};

ComparisonReport compare_full_vs_effective(const CrystalGeometry& geometry, const DriveParams& drive, Manifold kind,
                                           const SpinLabels& initial, const ComparisonOptions& opts = {});

/// Columns t_ms then one per label.
void write_populations_csv(std::ostream& os, const EvolutionResult& r);
/// Columns t_ms, full_<label>..., eff_<label>...
void write_comparison_csv(std::ostream& os, const ComparisonReport& r);
/// Flat key = value block.
void write_comparison_report(std::ostream& os, const ComparisonReport& r);

}  // namespace ionjch
