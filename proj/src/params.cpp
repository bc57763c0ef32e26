#include "ionjch/params.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "ionjch/errors.hpp"
#include "ionjch/units.hpp"

namespace ionjch {

const char* to_string(ConfigErrorKind kind) {
  switch (kind) {
    case ConfigErrorKind::kMalformed: return "malformed config";
    case ConfigErrorKind::kMissingKey: return "missing key";
    case ConfigErrorKind::kNonPositiveFrequency: return "non-positive frequency";
    case ConfigErrorKind::kInvalidAspectRatio: return "aspect ratio must exceed 1";
    case ConfigErrorKind::kOutOfRange: return "value out of range";
    case ConfigErrorKind::kInvalidValue: return "invalid value";
  }
  return "config error";
}

double TrapConfig::omega_z() const { return khz_to_angular(nu_z_khz); }
double TrapConfig::omega_x() const { return aspect_x * omega_z(); }
double TrapConfig::omega_y() const { return aspect_y * omega_z(); }

void TrapConfig::validate() const {
  if (n_ions < 1) {
    throw ConfigError(ConfigErrorKind::kOutOfRange, "n_ions must be >= 1");
  }
  if (!(nu_z_khz > 0.0)) {
    throw ConfigError(ConfigErrorKind::kNonPositiveFrequency, "nu_z_khz");
  }
  if (!(aspect_x > 1.0)) {
    throw ConfigError(ConfigErrorKind::kInvalidAspectRatio, "aspect_x");
  }
  if (!(aspect_y > 1.0)) {
    throw ConfigError(ConfigErrorKind::kInvalidAspectRatio, "aspect_y");
  }
  if (ion_mass_amu && !(*ion_mass_amu > 0.0)) {
    throw ConfigError(ConfigErrorKind::kOutOfRange, "ion_mass_amu must be positive");
  }
}

double DriveParams::g_max() const { return std::max(std::abs(g_x), std::abs(g_y)); }

DriveParams DriveParams::from_detuning(double g_x, double g_y, double delta, double Delta) {
  DriveParams d;
  d.g_x = g_x;
  d.g_y = g_y;
  d.Delta = Delta;
  d.omega0 = Delta + delta;
  return d;
}

void DriveParams::validate() const {
  if (g_x < 0.0 || g_y < 0.0 || !std::isfinite(g_x) || !std::isfinite(g_y)) {
    throw ConfigError(ConfigErrorKind::kOutOfRange, "spin-phonon couplings must be finite and >= 0");
  }
  if (!std::isfinite(Delta) || !std::isfinite(omega0)) {
    throw ConfigError(ConfigErrorKind::kInvalidValue, "Delta and omega0 must be finite");
  }
  if (reference_ion < 0) {
    throw ConfigError(ConfigErrorKind::kOutOfRange, "reference_ion");
  }
}

void LaserParams::validate() const {
  if (rabi_x < 0.0 || rabi_y < 0.0) {
    throw ConfigError(ConfigErrorKind::kOutOfRange, "Rabi frequencies must be >= 0");
  }
  if (ld_x < 0.0 || ld_y < 0.0) {
    throw ConfigError(ConfigErrorKind::kOutOfRange, "Lamb-Dicke parameters must be >= 0");
  }
}

std::vector<std::string> LaserParams::warnings() const {
  std::vector<std::string> out;
  if (ld_x > 0.3) out.push_back("ld_x > 0.3: Lamb-Dicke expansion questionable");
  if (ld_y > 0.3) out.push_back("ld_y > 0.3: Lamb-Dicke expansion questionable");
  return out;
}

CouplingPair couplings_from_laser(const LaserParams& p) {
  p.validate();
  return {p.ld_x * p.rabi_x, p.ld_y * p.rabi_y};
}

namespace {

constexpr double kHbar = 1.054571817e-34;        // J s
constexpr double kBohrMagneton = 9.2740100783e-24;  // J/T
constexpr double kAtomicMassUnit = 1.66053906660e-27;  // kg

// g = -b mu x0 / hbar with x0 = sqrt(hbar / (2 m omega)); result in rad/ms.
double gradient_coupling(double b, double mu_bohr, double mass_kg, double omega_rad_per_ms) {
  const double omega_si = omega_rad_per_ms * 1e3;
  const double x0 = std::sqrt(kHbar / (2.0 * mass_kg * omega_si));
  return -b * mu_bohr * kBohrMagneton * x0 / kHbar * 1e-3;
}

}  // namespace

CouplingPair couplings_from_gradient(const GradientParams& p, const TrapConfig& trap) {
  if (!trap.ion_mass_amu) {
    throw ConfigError(ConfigErrorKind::kMissingKey, "ion_mass_amu (required by gradient couplings)");
  }
  const double m = *trap.ion_mass_amu * kAtomicMassUnit;
  CouplingPair g{gradient_coupling(p.gradient_t_per_m, p.mu1_bohr, m, trap.omega_x()),
                 gradient_coupling(p.gradient_t_per_m, p.mu2_bohr, m, trap.omega_y())};
  if (!std::isfinite(g.g_x) || !std::isfinite(g.g_y)) {
    throw ConfigError(ConfigErrorKind::kInvalidValue, "gradient couplings are not finite");
  }
  return g;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_plain(std::string_view key, std::string_view s) {
  s = trim(s);
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || s.empty()) {
    throw ConfigError(ConfigErrorKind::kMalformed,
                      std::string(key) + ": not a number: '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

double parse_number(std::string_view key, std::string_view value) {
  value = trim(value);
  if (const auto slash = value.find('/'); slash != std::string_view::npos) {
    const double num = parse_plain(key, value.substr(0, slash));
    const double den = parse_plain(key, value.substr(slash + 1));
    if (den == 0.0) {
      throw ConfigError(ConfigErrorKind::kMalformed, std::string(key) + ": division by zero");
    }
    return num / den;
  }
  return parse_plain(key, value);
}

std::vector<std::pair<std::string, std::string>> parse_key_values(std::string_view text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(ConfigErrorKind::kMalformed,
                        "line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) {
      throw ConfigError(ConfigErrorKind::kMalformed, "line " + std::to_string(line_no) + ": empty key");
    }
    for (const auto& [k, v] : out) {
      if (k == key) throw ConfigError(ConfigErrorKind::kMalformed, "duplicate key '" + key + "'");
    }
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

namespace {

class KeyReader {
 public:
  explicit KeyReader(const std::vector<std::pair<std::string, std::string>>& kv) {
    for (const auto& [k, v] : kv) values_.emplace(k, v);
  }

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  std::optional<double> number(const std::string& key) {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    used_.push_back(key);
    return parse_number(key, it->second);
  }

  double required_number(const std::string& key) {
    auto v = number(key);
    if (!v) throw ConfigError(ConfigErrorKind::kMissingKey, key);
    return *v;
  }

  std::optional<long> integer(const std::string& key) {
    auto v = number(key);
    if (!v) return std::nullopt;
    if (std::floor(*v) != *v) {
      throw ConfigError(ConfigErrorKind::kInvalidValue, key + " must be an integer");
    }
    return static_cast<long>(*v);
  }

  std::optional<std::string> text(const std::string& key) {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    used_.push_back(key);
    return it->second;
  }

  std::optional<bool> flag(const std::string& key) {
    auto t = text(key);
    if (!t) return std::nullopt;
    if (*t == "true" || *t == "1" || *t == "yes") return true;
    if (*t == "false" || *t == "0" || *t == "no") return false;
    throw ConfigError(ConfigErrorKind::kInvalidValue, key + " must be true or false");
  }

  void reject_unknown() const {
    for (const auto& [k, v] : values_) {
      if (std::find(used_.begin(), used_.end(), k) == used_.end()) {
        throw ConfigError(ConfigErrorKind::kInvalidValue, "unknown key '" + k + "'");
      }
    }
  }

 private:
  std::map<std::string, std::string> values_;
  std::vector<std::string> used_;
};

void require_positive_frequency(const std::string& key, std::optional<double> v) {
  if (v && !(*v > 0.0)) throw ConfigError(ConfigErrorKind::kNonPositiveFrequency, key);
}

}  // namespace

SimulationConfig parse_config(std::string_view text) {
  SimulationConfig cfg;
  cfg.entries = parse_key_values(text);
  KeyReader r(cfg.entries);

  const auto n_ions = r.integer("n_ions");
  if (!n_ions) throw ConfigError(ConfigErrorKind::kMissingKey, "n_ions");
  cfg.trap.n_ions = static_cast<int>(*n_ions);

  if (auto tx = r.number("t_x_khz")) cfg.t_x_override = khz_to_angular(*tx);
  if (auto ty = r.number("t_y_khz")) cfg.t_y_override = khz_to_angular(*ty);
  if (cfg.t_x_override.has_value() != cfg.t_y_override.has_value()) {
    throw ConfigError(ConfigErrorKind::kMissingKey, "t_x_khz and t_y_khz must be given together");
  }
  if (cfg.t_x_override && (*cfg.t_x_override < 0.0 || *cfg.t_y_override < 0.0)) {
    throw ConfigError(ConfigErrorKind::kOutOfRange, "hopping override must be >= 0");
  }

  // Trap keys may be omitted only when the hopping is given explicitly.
  const bool need_trap = !cfg.has_hopping_override();
  auto trap_number = [&](const std::string& key) -> std::optional<double> {
    if (need_trap) return r.required_number(key);
    return r.number(key);
  };
  const auto nu_z = trap_number("nu_z_khz");
  const auto ax = trap_number("aspect_x");
  const auto ay = trap_number("aspect_y");
  require_positive_frequency("nu_z_khz", nu_z);
  cfg.trap.nu_z_khz = nu_z.value_or(1.0);
  cfg.trap.aspect_x = ax.value_or(2.0);
  cfg.trap.aspect_y = ay.value_or(2.0);
  cfg.trap.ion_mass_amu = r.number("ion_mass_amu");
  cfg.trap.validate();

  // Optional coupling helpers.
  const bool has_laser = r.has("rabi_x_khz") || r.has("rabi_y_khz") || r.has("ld_x") || r.has("ld_y");
  if (has_laser) {
    LaserParams lp;
    lp.rabi_x = khz_to_angular(r.required_number("rabi_x_khz"));
    lp.rabi_y = khz_to_angular(r.required_number("rabi_y_khz"));
    lp.ld_x = r.required_number("ld_x");
    lp.ld_y = r.required_number("ld_y");
    lp.validate();
    for (auto& w : lp.warnings()) cfg.warnings.push_back(std::move(w));
    cfg.laser = lp;
  }
  const bool has_gradient = r.has("gradient_t_per_m") || r.has("mu1_bohr") || r.has("mu2_bohr");
  if (has_gradient) {
    GradientParams gp;
    gp.gradient_t_per_m = r.required_number("gradient_t_per_m");
    gp.mu1_bohr = r.required_number("mu1_bohr");
    gp.mu2_bohr = r.required_number("mu2_bohr");
    gp.nu1_khz = r.number("nu1_khz").value_or(0.0);
    gp.nu2_khz = r.number("nu2_khz").value_or(0.0);
    cfg.gradient = gp;
  }
  if (has_laser && has_gradient) {
    throw ConfigError(ConfigErrorKind::kInvalidValue, "laser and gradient couplings are exclusive");
  }

  const auto gx = r.number("g_x_khz");
  const auto gy = r.number("g_y_khz");
  if (gx.has_value() != gy.has_value()) {
    throw ConfigError(ConfigErrorKind::kMissingKey, gx ? "g_y_khz" : "g_x_khz");
  }
  if (gx) {
    if (has_laser || has_gradient) {
      throw ConfigError(ConfigErrorKind::kInvalidValue,
                        "g_x_khz/g_y_khz conflict with laser or gradient parameters");
    }
    cfg.drive.g_x = khz_to_angular(*gx);
    cfg.drive.g_y = khz_to_angular(*gy);
  } else if (cfg.laser) {
    const auto g = couplings_from_laser(*cfg.laser);
    cfg.drive.g_x = g.g_x;
    cfg.drive.g_y = g.g_y;
  } else if (cfg.gradient) {
    // The JC block only depends on |g|; a global sign is a phase convention of |e_a>.
    const auto g = couplings_from_gradient(*cfg.gradient, cfg.trap);
    cfg.drive.g_x = std::abs(g.g_x);
    cfg.drive.g_y = std::abs(g.g_y);
  } else {
    throw ConfigError(ConfigErrorKind::kMissingKey, "g_x_khz");
  }

  const auto delta = r.number("delta_khz");
  const auto Delta = r.number("Delta_khz");
  const auto omega0 = r.number("omega0_khz");
  const int given = int(delta.has_value()) + int(Delta.has_value()) + int(omega0.has_value());
  if (given == 0 || (given == 1 && !delta)) {
    throw ConfigError(ConfigErrorKind::kMissingKey, "delta_khz (or Delta_khz and omega0_khz)");
  }
  if (Delta && omega0) {
    cfg.drive.Delta = khz_to_angular(*Delta);
    cfg.drive.omega0 = khz_to_angular(*omega0);
    if (delta && std::abs(*delta - (*omega0 - *Delta)) > 1e-9 * std::max(1.0, std::abs(*delta))) {
      throw ConfigError(ConfigErrorKind::kInvalidValue, "delta_khz != omega0_khz - Delta_khz");
    }
  } else if (Delta) {
    cfg.drive.Delta = khz_to_angular(*Delta);
    cfg.drive.omega0 = khz_to_angular(*Delta + *delta);
  } else if (omega0) {
    cfg.drive.omega0 = khz_to_angular(*omega0);
    cfg.drive.Delta = khz_to_angular(*omega0 - *delta);
  } else {
    cfg.drive.Delta = 0.0;
    cfg.drive.omega0 = khz_to_angular(*delta);
  }

  if (auto ref = r.integer("reference_ion")) {
    if (*ref < 1 || *ref > cfg.trap.n_ions) {
      throw ConfigError(ConfigErrorKind::kOutOfRange, "reference_ion must lie in [1, n_ions]");
    }
    cfg.drive.reference_ion = static_cast<int>(*ref - 1);
  }
  cfg.drive.homogeneous = r.flag("homogeneous").value_or(false);
  cfg.drive.validate();

  if (auto n = r.integer("n_excitations")) {
    if (*n < 1 || *n > 2) {
      throw ConfigError(ConfigErrorKind::kOutOfRange, "n_excitations must be 1 (spin-1/2) or 2 (spin-1)");
    }
    cfg.n_excitations = static_cast<int>(*n);
  }
  if (auto tf = r.number("t_final_ms")) {
    if (!(*tf > 0.0)) throw ConfigError(ConfigErrorKind::kOutOfRange, "t_final_ms must be positive");
    cfg.t_final_ms = *tf;
  }
  if (auto ns = r.integer("n_steps")) {
    if (*ns < 1) throw ConfigError(ConfigErrorKind::kOutOfRange, "n_steps must be >= 1");
    cfg.n_steps = static_cast<int>(*ns);
  }
  if (auto md = r.integer("max_dim")) {
    if (*md < 1) throw ConfigError(ConfigErrorKind::kOutOfRange, "max_dim must be >= 1");
    cfg.max_dim = static_cast<std::size_t>(*md);
  }
  cfg.initial_state = r.text("initial_state").value_or("");

  r.reject_unknown();
  return cfg;
}

SimulationConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(ConfigErrorKind::kMalformed, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace ionjch
