#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ionjch {

struct TrapConfig {
  int n_ions = 1;
  double nu_z_khz = 0.0;  // axial trap frequency, linear kHz
  double aspect_x = 0.0;  // omega_x / omega_z
  double aspect_y = 0.0;  // omega_y / omega_z
  std::optional<double> ion_mass_amu;

  double omega_z() const;
  double omega_x() const;
  double omega_y() const;

  /// Throws ConfigError on a non-positive frequency, aspect ratio <= 1 or n_ions < 1.
  void validate() const;
};

/// Drive parameters of the rotating-frame JCHv Hamiltonian, all in rad/ms.
/// Only Delta and omega0 are stored; the detuning delta = omega0 - Delta is derived.
struct DriveParams {
  double g_x = 0.0;
  double g_y = 0.0;
  double Delta = 0.0;   // effective phonon frequency
  double omega0 = 0.0;  // effective spin frequency
  int reference_ion = 0;  // zero-based; fixes the homogeneous shift of Delta_{beta,j}
  bool homogeneous = false;  // force Delta_{beta,j} = Delta on every site

  double delta() const { return omega0 - Delta; }
  double g_max() const;

  static DriveParams from_detuning(double g_x, double g_y, double delta, double Delta = 0.0);

  void validate() const;
};

struct LaserParams {
  double rabi_x = 0.0;  // rad/ms
  double rabi_y = 0.0;
  double ld_x = 0.0;  // Lamb-Dicke parameters
  double ld_y = 0.0;

  void validate() const;
  /// Lamb-Dicke parameters above 0.3 are accepted but flagged.
  std::vector<std::string> warnings() const;
};

struct GradientParams {
  double gradient_t_per_m = 0.0;  // b
  double mu1_bohr = 0.0;          // |g> <-> |e1> dipole element, Bohr magnetons
  double mu2_bohr = 0.0;
  // Drive frequencies are carried for the manifest only.
  double nu1_khz = 0.0;
  double nu2_khz = 0.0;
};

struct CouplingPair {
  double g_x = 0.0;
  double g_y = 0.0;
};

/// g_beta = eta_beta * Omega_beta.
CouplingPair couplings_from_laser(const LaserParams& p);

/// g_x = -b mu1 / sqrt(2 m omega_x), g_y = -b mu2 / sqrt(2 m omega_y) (hbar = 1),
/// evaluated in SI and returned in rad/ms with the sign preserved.
CouplingPair couplings_from_gradient(const GradientParams& p, const TrapConfig& trap);

struct SimulationConfig {
  TrapConfig trap;
  DriveParams drive;
  std::optional<LaserParams> laser;
  std::optional<GradientParams> gradient;
  // Direct nearest-neighbour hopping override, rad/ms; t_{j,k} = t / |j-k|^3.
  std::optional<double> t_x_override;
  std::optional<double> t_y_override;
  int n_excitations = 1;  // per site: 1 -> spin-1/2, 2 -> spin-1
  std::optional<double> t_final_ms;
  int n_steps = 400;
  std::string initial_state;
  std::size_t max_dim = 2'000'000;

  std::vector<std::pair<std::string, std::string>> entries;  // config echo, file order
  std::vector<std::string> warnings;

  bool has_hopping_override() const { return t_x_override.has_value(); }
};

SimulationConfig parse_config(std::string_view text);
SimulationConfig load_config(const std::filesystem::path& path);

/// Flat key = value pairs; '#' starts a comment.
std::vector<std::pair<std::string, std::string>> parse_key_values(std::string_view text);

/// Accepts a plain decimal or a quotient "a/b".
double parse_number(std::string_view key, std::string_view value);

}  // namespace ionjch
