#include "commands.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <utility>

#include "ionjch/crystal.hpp"
#include "ionjch/dynamics.hpp"
#include "ionjch/errors.hpp"
#include "ionjch/jchv.hpp"
#include "ionjch/output.hpp"
#include "ionjch/superexchange.hpp"
#include "ionjch/units.hpp"
#include "ionjch/version.hpp"

namespace fs = std::filesystem;

namespace ionjch::cli {

std::vector<double> Sweep::values() const {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(n == 1 ? start : start + (stop - start) * i / (n - 1));
  return v;
}

Sweep parse_sweep(std::string_view text) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  if (parts.size() != 4 || parts[0].empty())
    throw ConfigError(ConfigErrorKind::kMalformed, "--sweep expects KEY:START:STOP:N, got '" + std::string(text) + "'");
  Sweep s;
  s.key = parts[0];
  s.start = parse_number("--sweep start", parts[1]);
  s.stop = parse_number("--sweep stop", parts[2]);
  const double n = parse_number("--sweep N", parts[3]);
  if (n < 1 || n != std::floor(n) || n > 1e6) throw ConfigError(ConfigErrorKind::kOutOfRange, "--sweep N must be a positive integer");
  s.n = static_cast<int>(n);
  return s;
}

SimulationConfig with_value(const SimulationConfig& base, const std::string& key, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  std::ostringstream text;
  bool found = false;
  for (const auto& [k, v] : base.entries) {
    // delta is derived from omega0 - Delta; drop omega0 so the swept value wins.
    if (key == "delta_khz" && k == "omega0_khz") continue;
    if (k == key) {
      text << k << " = " << buf << '\n';
      found = true;
    } else {
      text << k << " = " << v << '\n';
    }
  }
  if (!found) text << key << " = " << buf << '\n';
  return parse_config(text.str());
}

namespace {

class RunManifest {
 public:
  RunManifest(std::string command, std::string config_path, const SimulationConfig& cfg)
      : command_(std::move(command)), config_path_(std::move(config_path)), entries_(cfg.entries),
        warnings_(cfg.warnings), start_(std::chrono::steady_clock::now()) {}

  void add_output(const fs::path& p) { outputs_.push_back(p.string()); }
  void add_value(std::string key, std::string value) { values_.emplace_back(std::move(key), std::move(value)); }
  void add_value(std::string key, double value) { add_value(std::move(key), fmt_num(value)); }

  void write(const fs::path& dir) const {
    std::ofstream os(dir / "manifest.txt");
    os << "command = " << command_ << '\n';
    os << "version = " << kVersion << '\n';
    os << "config = " << config_path_ << '\n';
    for (const auto& [k, v] : entries_) os << "config." << k << " = " << v << '\n';
    for (std::size_t i = 0; i < outputs_.size(); ++i) os << "output." << i << " = " << outputs_[i] << '\n';
    os << "output." << outputs_.size() << " = " << (dir / "manifest.txt").string() << '\n';
    for (const auto& [k, v] : values_) os << k << " = " << v << '\n';
    for (const auto& w : warnings_) os << "warning = " << w << '\n';
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", wall);
    os << "wall_time_s = " << buf << '\n';
  }

 private:
  std::string command_;
  std::string config_path_;
  std::vector<std::pair<std::string, std::string>> entries_;
  std::vector<std::string> warnings_;
  std::vector<std::string> outputs_;
  std::vector<std::pair<std::string, std::string>> values_;
  std::chrono::steady_clock::time_point start_;
};

struct Context {
  std::string config_path;
  fs::path out_dir;
  std::optional<Sweep> sweep;
  bool svg = false;
  std::string model = "effective";
  int row_ion = 1;
  std::ostream* out = nullptr;
};

std::ofstream open_output(const fs::path& p, RunManifest& manifest) {
  std::ofstream os(p);
  if (!os) throw ConfigError(ConfigErrorKind::kInvalidValue, "cannot write " + p.string());
  manifest.add_output(p);
  return os;
}

void maybe_svg(const Context& ctx, RunManifest& manifest, const std::string& name, const LineChart& chart) {
  if (!ctx.svg) return;
  auto os = open_output(ctx.out_dir / name, manifest);
  write_svg(os, chart);
}

double khz(double angular) { return angular_to_khz(angular); }

bool resonant_uniform(const CrystalGeometry& geometry, const DriveParams& drive) {
  if (std::abs(drive.delta()) > 1e-12 * std::max(drive.g_max(), 1.0)) return false;
  const auto det = local_detunings(geometry, drive);
  const double tol = 1e-12 * std::max(drive.g_max(), 1.0);
  return ((det.x.array() - drive.Delta).abs().maxCoeff() <= tol) && ((det.y.array() - drive.Delta).abs().maxCoeff() <= tol);
}

double rel_diff(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s > 0.0 ? std::abs(a - b) / s : 0.0;
}

// ---------------------------------------------------------------------------

int cmd_crystal(const Context& ctx, const SimulationConfig& cfg) {
  RunManifest manifest("crystal", ctx.config_path, cfg);
  const auto geometry = geometry_for(cfg);
  if (ctx.row_ion < 1 || ctx.row_ion > geometry.n_sites())
    throw ConfigError(ConfigErrorKind::kOutOfRange, "--row-ion outside the crystal");
  {
    auto os = open_output(ctx.out_dir / "crystal.csv", manifest);
    write_geometry_csv(os, geometry, ctx.row_ion - 1);
  }
  if (!geometry.u.empty()) manifest.add_value("force_residual", force_residual(geometry.u));
  LineChart chart{"On-site phonon shifts", geometry.u.empty() ? "site" : "u_j", "shift (kHz)", {}, {}};
  Series sx{"dw_x", {}}, sy{"dw_y", {}};
  for (int j = 0; j < geometry.n_sites(); ++j) {
    chart.x.push_back(geometry.u.empty() ? j + 1.0 : geometry.u[j]);
    sx.y.push_back(khz(geometry.dw_x(j)));
    sy.y.push_back(khz(geometry.dw_y(j)));
  }
  chart.series = {sx, sy};
  maybe_svg(ctx, manifest, "crystal.svg", chart);
  manifest.write(ctx.out_dir);
  *ctx.out << "crystal: " << geometry.n_sites() << " ions written to " << (ctx.out_dir / "crystal.csv").string() << '\n';
  return kExitOk;
}

int cmd_spectrum(const Context& ctx, const SimulationConfig& cfg) {
  RunManifest manifest("spectrum", ctx.config_path, cfg);
  const DriveParams& base = cfg.drive;
  const double gx_khz = khz(base.g_x);
  if (!(gx_khz > 0.0)) throw ConfigError(ConfigErrorKind::kNonPositiveFrequency, "g_x_khz");
  Sweep sweep{"delta_khz", -10.0 * gx_khz, 10.0 * gx_khz, 201};
  if (ctx.sweep) {
    if (ctx.sweep->key != "delta_khz") throw ConfigError(ConfigErrorKind::kInvalidValue, "spectrum sweeps delta_khz only");
    sweep = *ctx.sweep;
  }
  manifest.add_value("sweep", sweep.key + ":" + fmt_num(sweep.start) + ":" + fmt_num(sweep.stop) + ":" + std::to_string(sweep.n));
  LineChart chart{"Polariton splitting and particle-hole gaps", "delta / g_x", "energy / g_x", {}, {}};
  Series split{"E-x - E-y", {}}, u1{"U_1", {}}, u0{"U_0", {}}, um1{"U_-1", {}};
  auto os = open_output(ctx.out_dir / "spectrum.csv", manifest);
  os << "delta_khz,split_khz,U1_khz,U0_khz,Um1_khz,delta_over_gx,split_over_gx,U1_over_gx,U0_over_gx,Um1_over_gx\n";
  for (double d_khz : sweep.values()) {
    const auto drive = DriveParams::from_detuning(base.g_x, base.g_y, khz_to_angular(d_khz), base.Delta);
    const auto s = single_site_spectra(drive).one;
    const double sp = khz(s.E_minus_x - s.E_minus_y);
    const auto u = particle_hole_gaps(drive);
    const double vals[5] = {d_khz, sp, khz(u[0]), khz(u[1]), khz(u[2])};
    for (int i = 0; i < 5; ++i) os << (i ? "," : "") << fmt_num(vals[i]);
    for (int i = 0; i < 5; ++i) os << ',' << fmt_num(vals[i] / gx_khz);
    os << '\n';
    chart.x.push_back(d_khz / gx_khz);
    split.y.push_back(sp / gx_khz);
    u1.y.push_back(vals[2] / gx_khz);
    u0.y.push_back(vals[3] / gx_khz);
    um1.y.push_back(vals[4] / gx_khz);
  }
  os.close();
  chart.series = {split, u1, u0, um1};
  maybe_svg(ctx, manifest, "spectrum.svg", chart);
  manifest.write(ctx.out_dir);
  *ctx.out << "spectrum: " << sweep.n << " points written to " << (ctx.out_dir / "spectrum.csv").string() << '\n';
  return kExitOk;
}

struct PairRow {
  int j, k;
  double xy, z, w_jk, w_kj, v, v_p1, v_m1;
};

struct SiteRow {
  int j;
  double field, hop_field, d;
};

// Tables for either manifold, in kHz.
void coupling_tables(const CrystalGeometry& geometry, const DriveParams& drive, Manifold kind, std::vector<PairRow>& pairs,
                     std::vector<SiteRow>& sites, double& fit_residual) {
  const int n = geometry.n_sites();
  pairs.clear();
  sites.clear();
  if (kind == Manifold::spin_half) {
    const auto m = spin_half_model(geometry, drive);
    fit_residual = m.max_fit_residual;
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k) pairs.push_back({j, k, khz(m.K_xy(j, k)), khz(m.K_z(j, k)), 0, 0, 0, 0, 0});
    for (int j = 0; j < n; ++j) sites.push_back({j, khz(m.total_field()(j)), khz(m.H_field(j)), 0.0});
  } else {
    const auto m = spin_one_general(geometry, drive);
    fit_residual = m.max_fit_residual;
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        pairs.push_back({j, k, khz(m.J_xy(j, k)), khz(m.J_z(j, k)), khz(m.W(j, k)), khz(m.W(k, j)), khz(m.V(j, k)),
                         khz(m.v_p1(j, k)), khz(m.v_m1(j, k))});
    const auto drives = site_drives(geometry, drive);
    for (int j = 0; j < n; ++j) {
      const auto e = local_manifold(Manifold::spin_one, drives[j]).energies;
      sites.push_back({j, khz(m.B_field(j)), khz(m.B_field(j) - 0.5 * (e(0) - e(2))), khz(m.D_field(j))});
    }
  }
}

double ratio(double z, double xy) { return xy != 0.0 ? z / xy : std::nan(""); }

int cmd_couplings(const Context& ctx, const SimulationConfig& cfg) {
  RunManifest manifest("couplings", ctx.config_path, cfg);
  const Manifold kind = manifold_for(cfg.n_excitations);
  const auto geometry = geometry_for(cfg);
  const int n = geometry.n_sites();
  if (n < 2) throw ConfigError(ConfigErrorKind::kOutOfRange, "couplings need at least 2 ions");

  std::vector<PairRow> pairs;
  std::vector<SiteRow> sites;
  double fit = 0.0;
  coupling_tables(geometry, cfg.drive, kind, pairs, sites, fit);
  manifest.add_value("manifold", kind == Manifold::spin_half ? "spin-1/2" : "spin-1");
  manifest.add_value("ansatz_fit_residual", fit);
  {
    auto os = open_output(ctx.out_dir / "couplings.csv", manifest);
    os << "# manifold " << (kind == Manifold::spin_half ? "spin-1/2" : "spin-1") << '\n';
    os << "# ansatz_fit_residual " << fmt_num(fit) << '\n';
    os << "j,k,xy_khz,z_khz,lambda,W_jk_khz,W_kj_khz,V_khz,v_p1_khz,v_m1_khz\n";
    for (const auto& p : pairs) {
      os << p.j + 1 << ',' << p.k + 1 << ',' << fmt_num(p.xy) << ',' << fmt_num(p.z) << ',' << fmt_num(ratio(p.z, p.xy))
         << ',' << fmt_num(p.w_jk) << ',' << fmt_num(p.w_kj) << ',' << fmt_num(p.v) << ',' << fmt_num(p.v_p1) << ','
         << fmt_num(p.v_m1) << '\n';
    }
  }
  {
    auto os = open_output(ctx.out_dir / "fields.csv", manifest);
    os << "j,field_khz,hop_field_khz,D_khz\n";
    for (const auto& s : sites)
      os << s.j + 1 << ',' << fmt_num(s.field) << ',' << fmt_num(s.hop_field) << ',' << fmt_num(s.d) << '\n';
  }

  // Closed forms apply only at resonance with uniform local detunings.
  if (resonant_uniform(geometry, cfg.drive)) {
    double worst = 0.0;
    if (kind == Manifold::spin_half) {
      const auto a = spin_half_analytic_model(geometry, cfg.drive);
      const auto m = spin_half_model(geometry, cfg.drive);
      worst = std::max({(a.K_xy - m.K_xy).cwiseAbs().maxCoeff() / std::max(m.K_xy.cwiseAbs().maxCoeff(), 1e-300),
                        (a.K_z - m.K_z).cwiseAbs().maxCoeff() / std::max(m.K_z.cwiseAbs().maxCoeff(), 1e-300),
                        (a.H_field - m.H_field).cwiseAbs().maxCoeff() / std::max(m.H_field.cwiseAbs().maxCoeff(), 1e-300)});
      manifest.add_value("analytic_vs_numeric_residual", worst);
    } else if (cfg.drive.g_x == cfg.drive.g_y) {
      for (const auto& p : pairs) {
        const auto a = spin_one_isotropic_analytic(cfg.drive.g_x, geometry.t_x(p.j, p.k), geometry.t_y(p.j, p.k));
        worst = std::max({worst, rel_diff(khz(a.J_xy), p.xy), rel_diff(khz(a.J_z), p.z)});
      }
      for (const auto& s : sites) {
        double b = 0.0;
        for (int k = 0; k < n; ++k)
          if (k != s.j) b += spin_one_isotropic_analytic(cfg.drive.g_x, geometry.t_x(s.j, k), geometry.t_y(s.j, k)).B;
        worst = std::max(worst, rel_diff(khz(b), s.hop_field));
      }
      manifest.add_value("analytic_vs_numeric_residual", worst);
    }
  }

  if (ctx.sweep) {
    const auto& sw = *ctx.sweep;
    LineChart chart{"Exchange anisotropy of pair (1,2)", sw.key, "lambda = z / xy", {}, {}};
    Series lam{"lambda_12", {}};
    auto os = open_output(ctx.out_dir / "lambda_sweep.csv", manifest);
    os << sw.key << ",xy_khz,z_khz,lambda\n";
    for (double v : sw.values()) {
      const auto c = with_value(cfg, sw.key, v);
      const auto g = geometry_for(c);
      if (g.n_sites() < 2) throw ConfigError(ConfigErrorKind::kOutOfRange, "couplings need at least 2 ions");
      std::vector<PairRow> pr;
      std::vector<SiteRow> sr;
      double f = 0.0;
      try {
        coupling_tables(g, c.drive, manifold_for(c.n_excitations), pr, sr, f);
      } catch (const NumericalError& e) {
        throw NumericalError(std::string(e.what()) + " at " + sw.key + " = " + fmt_num(v) +
                             " (delta_khz = " + fmt_num(khz(c.drive.delta())) + ")");
      }
      os << fmt_num(v) << ',' << fmt_num(pr[0].xy) << ',' << fmt_num(pr[0].z) << ',' << fmt_num(ratio(pr[0].z, pr[0].xy))
         << '\n';
      chart.x.push_back(v);
      lam.y.push_back(ratio(pr[0].z, pr[0].xy));
    }
    os.close();
    chart.series = {lam};
    maybe_svg(ctx, manifest, "lambda_sweep.svg", chart);
  }
  manifest.write(ctx.out_dir);
  *ctx.out << "couplings: " << pairs.size() << " pairs written to " << (ctx.out_dir / "couplings.csv").string() << '\n';
  return kExitOk;
}

SpinLabels initial_labels(const SimulationConfig& cfg, Manifold kind, int n_sites) {
  if (cfg.initial_state.empty()) throw ConfigError(ConfigErrorKind::kMissingKey, "initial_state");
  SpinLabels l;
  try {
    l = parse_spin_labels(cfg.initial_state, kind);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(ConfigErrorKind::kInvalidValue, e.what());
  }
  if (static_cast<int>(l.size()) != n_sites)
    throw ConfigError(ConfigErrorKind::kInvalidValue, "initial_state has " + std::to_string(l.size()) + " sites, crystal has " +
                                                          std::to_string(n_sites));
  return l;
}

LineChart population_chart(const std::string& title, const EvolutionResult& r, const std::string& prefix) {
  LineChart chart{title, "t (ms)", "population", r.times, {}};
  for (std::size_t l = 0; l < r.labels.size(); ++l) chart.series.push_back({prefix + r.labels[l], r.populations[l]});
  return chart;
}

int cmd_evolve(const Context& ctx, const SimulationConfig& cfg) {
  RunManifest manifest("evolve", ctx.config_path, cfg);
  if (ctx.model != "full" && ctx.model != "effective")
    throw ConfigError(ConfigErrorKind::kInvalidValue, "--model must be full or effective");
  const Manifold kind = manifold_for(cfg.n_excitations);
  const auto geometry = geometry_for(cfg);
  const int n = geometry.n_sites();
  const auto initial = initial_labels(cfg, kind, n);
  const auto labels = same_magnetisation_labels(n, kind, twice_magnetisation(initial, kind));

  SparseOperator h_eff = kind == Manifold::spin_half ? build_spin_hamiltonian(spin_half_model(geometry, cfg.drive))
                                                     : build_spin_hamiltonian(spin_one_general(geometry, cfg.drive));
  std::vector<TrackedState> eff_tracked;
  for (const auto& l : labels) eff_tracked.push_back({format_spin_labels(l, kind), spin_product_state(l, kind)});
  const auto eff0 = spin_product_state(initial, kind);

  double t_final = 0.0;
  if (cfg.t_final_ms) {
    t_final = *cfg.t_final_ms;
  } else {
    const auto period = dominant_period(h_eff, eff0, eff_tracked);
    t_final = period ? 2.0 * *period : 1.0;
    manifest.add_value("period_ms", period ? fmt_num(*period) : std::string("none"));
  }
  const auto times = uniform_times(t_final, cfg.n_steps);

  EvolutionResult r;
  if (ctx.model == "effective") {
    r = evolve(h_eff, eff0, times, eff_tracked);
    manifest.add_value("dim", static_cast<double>(h_eff.dim()));
  } else {
    const SectorBasis basis(n, n * excitations_per_site(kind), cfg.max_dim);
    const auto h = build_jchv(basis, geometry, cfg.drive);
    std::vector<LocalManifold> sites;
    for (const auto& sd : site_drives(geometry, cfg.drive)) sites.push_back(local_manifold(kind, sd));
    std::vector<TrackedState> tracked;
    for (const auto& l : labels) tracked.push_back({format_spin_labels(l, kind), dressed_product_state(l, sites, basis)});
    r = evolve(h, dressed_product_state(initial, sites, basis), times, tracked);
    manifest.add_value("dim", static_cast<double>(basis.dim()));
  }
  manifest.add_value("model", ctx.model);
  manifest.add_value("propagator", r.used == Propagator::dense ? "dense" : "krylov");
  manifest.add_value("t_final_ms", t_final);
  manifest.add_value("norm_drift", r.norm_drift);
  manifest.add_value("energy_drift", r.energy_drift);
  {
    auto os = open_output(ctx.out_dir / "populations.csv", manifest);
    write_populations_csv(os, r);
  }
  maybe_svg(ctx, manifest, "populations.svg", population_chart("Populations (" + ctx.model + ")", r, ""));
  manifest.write(ctx.out_dir);
  *ctx.out << "evolve: " << r.times.size() << " times, norm drift " << fmt_num(r.norm_drift) << '\n';
  return kExitOk;
}

int cmd_compare(const Context& ctx, const SimulationConfig& cfg) {
  RunManifest manifest("compare", ctx.config_path, cfg);
  const Manifold kind = manifold_for(cfg.n_excitations);
  const auto geometry = geometry_for(cfg);
  const auto initial = initial_labels(cfg, kind, geometry.n_sites());
  ComparisonOptions opts;
  opts.t_final_ms = cfg.t_final_ms;
  opts.n_steps = cfg.n_steps;
  opts.max_dim = cfg.max_dim;
  const auto rep = compare_full_vs_effective(geometry, cfg.drive, kind, initial, opts);
  {
    auto os = open_output(ctx.out_dir / "comparison.csv", manifest);
    write_comparison_csv(os, rep);
  }
  {
    auto os = open_output(ctx.out_dir / "report.txt", manifest);
    write_comparison_report(os, rep);
  }
  if (ctx.svg) {
    LineChart chart = population_chart("Full (solid) vs effective", rep.full, "full ");
    for (std::size_t l = 0; l < rep.labels.size(); ++l)
      chart.series.push_back({"eff " + rep.labels[l], rep.effective.populations[l]});
    maybe_svg(ctx, manifest, "comparison.svg", chart);
  }
  manifest.add_value("max_abs_deviation", rep.max_deviation);
  manifest.add_value("ansatz_fit_residual", rep.fit_residual);
  manifest.write(ctx.out_dir);
  *ctx.out << "compare: max |P_full - P_eff| = " << fmt_num(rep.max_deviation) << " over " << fmt_num(rep.t_final_ms)
           << " ms\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Trapped-ion JCHv simulator and superexchange spin models"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  Context ctx;
  ctx.out = &out;
  std::string out_dir = ".";
  std::string sweep_text;

  using Handler = std::function<int(const Context&, const SimulationConfig&)>;
  std::vector<std::pair<CLI::App*, Handler>> commands;
  auto add = [&](const char* name, const char* help, Handler h) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", ctx.config_path, "Config file (key = value)")->required();
    sub->add_option("--out", out_dir, "Output directory");
    sub->add_option("--sweep", sweep_text, "KEY:START:STOP:N");
    sub->add_flag("--svg", ctx.svg, "Also write SVG charts");
    commands.emplace_back(sub, std::move(h));
    return sub;
  };
  add("crystal", "Equilibrium positions, hopping and on-site shifts", cmd_crystal)
      ->add_option("--row-ion", ctx.row_ion, "1-based ion whose hopping row is listed");
  add("spectrum", "Polariton splitting and particle-hole gaps versus detuning", cmd_spectrum);
  add("couplings", "Effective spin coupling tables", cmd_couplings);
  add("evolve", "Time evolution of the full or effective model", cmd_evolve)
      ->add_option("--model", ctx.model, "full | effective");
  add("compare", "Full versus effective dynamics", cmd_compare);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    ctx.out_dir = out_dir;
    if (!sweep_text.empty()) ctx.sweep = parse_sweep(sweep_text);
    const auto cfg = load_config(ctx.config_path);
    std::error_code ec;
    fs::create_directories(ctx.out_dir, ec);
    if (ec) throw ConfigError(ConfigErrorKind::kInvalidValue, "cannot create " + out_dir + ": " + ec.message());
    for (const auto& w : cfg.warnings) err << "warning: " << w << '\n';
    for (const auto& [sub, handler] : commands)
      if (sub->parsed()) return handler(ctx, cfg);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitConfig;
}

}  // namespace ionjch::cli
