#include "ionjch/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <map>
#include <ostream>
#include <stdexcept>

#include "ionjch/errors.hpp"
#include "ionjch/jchv.hpp"
#include "ionjch/output.hpp"
#include "ionjch/spin_ops.hpp"
#include "ionjch/units.hpp"

namespace ionjch {

namespace {

std::string replace_all(std::string s, std::string_view from, std::string_view to) {
  for (std::size_t pos = 0; (pos = s.find(from, pos)) != std::string::npos; pos += to.size())
    s.replace(pos, from.size(), to);
  return s;
}

bool is_separator(char c) { return c == ',' || c == ' ' || c == '\t' || c == '|' || c == '<' || c == '>'; }

}  // namespace

SpinLabels parse_spin_labels(std::string_view text, Manifold kind) {
  SpinLabels out;
  if (kind == Manifold::spin_half) {
    std::string s = replace_all(replace_all(std::string(text), "↑", "u"), "↓", "d");
    for (char c : s) {
      if (is_separator(c)) continue;
      if (c == 'u' || c == 'U') out.push_back(0);
      else if (c == 'd' || c == 'D') out.push_back(1);
      else throw std::invalid_argument("bad spin-1/2 label '" + std::string(text) + "': use u/d");
    }
  } else {
    for (std::size_t i = 0; i < text.size(); ++i) {
      const char c = text[i];
      if (is_separator(c)) continue;
      if (c == 'p') { out.push_back(0); continue; }
      if (c == 'z') { out.push_back(1); continue; }
      if (c == 'm') { out.push_back(2); continue; }
      int sign = 1;
      std::size_t p = i;
      if (c == '+' || c == '-') {
        sign = c == '-' ? -1 : 1;
        ++p;
      }
      if (p >= text.size() || (text[p] != '0' && text[p] != '1'))
        throw std::invalid_argument("bad spin-1 label '" + std::string(text) + "': use 1, 0, -1");
      const int m = sign * (text[p] - '0');
      out.push_back(1 - m);
      i = p;
    }
  }
  if (out.empty()) throw std::invalid_argument("empty spin label");
  return out;
}

std::string format_spin_labels(const SpinLabels& labels, Manifold kind) {
  static constexpr char half[] = {'u', 'd'};
  static constexpr char one[] = {'p', '0', 'm'};
  std::string s;
  for (int l : labels) s += kind == Manifold::spin_half ? half[l] : one[l];
  return s;
}

int twice_magnetisation(const SpinLabels& labels, Manifold kind) {
  const int d = spin_dim(kind);
  int m = 0;
  for (int l : labels) m += d - 1 - 2 * l;
  return m;
}

std::vector<SpinLabels> same_magnetisation_labels(int n_sites, Manifold kind, int twice_mz) {
  const SpinSpace space(n_sites, spin_dim(kind));
  std::vector<SpinLabels> out;
  SpinLabels l(static_cast<std::size_t>(n_sites));
  for (std::size_t i = 0; i < space.dim(); ++i) {
    for (int j = 0; j < n_sites; ++j) l[j] = space.local(i, j);
    if (twice_magnetisation(l, kind) == twice_mz) out.push_back(l);
  }
  return out;
}

Eigen::VectorXcd dressed_product_state(const SpinLabels& labels, const std::vector<LocalManifold>& sites,
                                       const SectorBasis& basis) {
  const int n = basis.n_sites();
  if (static_cast<int>(labels.size()) != n || static_cast<int>(sites.size()) != n)
    throw std::invalid_argument("dressed_product_state: label count does not match site count");
  int total = 0;
  for (const auto& s : sites) total += excitations_per_site(s.kind);
  if (total != basis.n_total())
    throw std::invalid_argument("dressed_product_state: labels carry " + std::to_string(total) +
                                " excitations, sector has " + std::to_string(basis.n_total()));
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.dim()));
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    const auto st = basis.state(i);
    double amp = 1.0;
    for (int j = 0; j < n && amp != 0.0; ++j) {
      const auto& sb = sites[j].site_basis;
      auto it = std::lower_bound(sb.begin(), sb.end(), st[j]);
      if (it == sb.end() || *it != st[j]) {
        amp = 0.0;
        break;
      }
      amp *= sites[j].vectors(it - sb.begin(), labels[j]);
    }
    psi(static_cast<Eigen::Index>(i)) = amp;
  }
  return psi / psi.norm();
}

Eigen::VectorXcd dressed_product_state(const SpinLabels& labels, const CrystalGeometry& geometry,
                                       const DriveParams& drive, const SectorBasis& basis) {
  const Manifold kind = manifold_for(basis.n_total() / std::max(basis.n_sites(), 1));
  std::vector<LocalManifold> sites;
  for (const auto& sd : site_drives(geometry, drive)) sites.push_back(local_manifold(kind, sd));
  return dressed_product_state(labels, sites, basis);
}

Eigen::VectorXcd spin_product_state(const SpinLabels& labels, Manifold kind) {
  const SpinSpace space(static_cast<int>(labels.size()), spin_dim(kind));
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(space.dim()));
  v(static_cast<Eigen::Index>(space.index_of(labels))) = 1.0;
  return v;
}

std::vector<double> uniform_times(double t_final, int n_steps) {
  if (n_steps < 1 || !(t_final >= 0.0)) throw std::invalid_argument("uniform_times: bad grid");
  std::vector<double> t(static_cast<std::size_t>(n_steps) + 1);
  for (int i = 0; i <= n_steps; ++i) t[i] = t_final * i / n_steps;
  return t;
}

// ---------------------------------------------------------------------------

namespace {

using SpMat = Eigen::SparseMatrix<cplx>;

/// Lanczos basis of psi; the exponential for any step length reuses it.
struct KrylovBasis {
  Eigen::MatrixXcd v;
  Eigen::VectorXd evals;
  Eigen::MatrixXd evecs;
  double beta_last = 0.0;
  double nrm = 0.0;

  KrylovBasis(const SpMat& h, const Eigen::VectorXcd& psi, int m_max) {
    nrm = psi.norm();
    const auto n = psi.size();
    const int m = static_cast<int>(std::min<Eigen::Index>(m_max, n));
    v.resize(n, m);
    std::vector<double> alpha, beta;
    v.col(0) = psi / nrm;
    int k = 0;
    for (; k < m; ++k) {
      Eigen::VectorXcd w = h * v.col(k);
      alpha.push_back(v.col(k).dot(w).real());
      w -= alpha.back() * v.col(k);
      if (k > 0) w -= beta.back() * v.col(k - 1);
      // Full reorthogonalisation, repeated only when cancellation was severe.
      for (int pass = 0; pass < 2; ++pass) {
        const double before = w.norm();
        const Eigen::VectorXcd overlap = v.leftCols(k + 1).adjoint() * w;
        w.noalias() -= v.leftCols(k + 1) * overlap;
        if (w.norm() > 0.7 * before) break;
      }
      const double b = w.norm();
      if (k + 1 == m || b < 1e-13 * std::max(1.0, std::abs(alpha.back()))) {
        beta_last = (k + 1 == m) ? b : 0.0;
        ++k;
        break;
      }
      beta.push_back(b);
      v.col(k + 1) = w / b;
    }
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k, k);
    for (int i = 0; i < k; ++i) t(i, i) = alpha[i];
    for (int i = 0; i + 1 < k; ++i) t(i, i + 1) = t(i + 1, i) = beta[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    evals = es.eigenvalues();
    evecs = es.eigenvectors();
    v.conservativeResize(Eigen::NoChange, k);
  }

  /// exp(-i H dt) psi; `err` receives the a-posteriori local error estimate.
  Eigen::VectorXcd propagate(double dt, double& err) const {
    const auto k = evals.size();
    Eigen::VectorXcd c(k);
    for (Eigen::Index i = 0; i < k; ++i) c(i) = std::exp(cplx(0.0, -evals(i) * dt)) * evecs(0, i);
    const Eigen::VectorXcd y = evecs.cast<cplx>() * c;
    err = beta_last * std::abs(y(k - 1)) * nrm;
    return nrm * (v * y);
  }
};

}  // namespace

EvolutionResult evolve(const SparseOperator& h, const Eigen::VectorXcd& psi0, std::span<const double> times,
                       std::span<const TrackedState> tracked, const EvolveOptions& opts) {
  if (static_cast<std::size_t>(psi0.size()) != h.dim()) throw std::invalid_argument("evolve: state/operator size");
  const double herm = h.hermiticity_error();
  if (herm > opts.hermiticity_tolerance)
    throw NumericalError("evolve: Hamiltonian is not Hermitian (max |H - H^dag| = " + fmt_num(herm) + ")");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < 0.0 || (i > 0 && times[i] < times[i - 1]))
      throw std::invalid_argument("evolve: times must be ascending from 0");
  }
  for (const auto& t : tracked)
    if (static_cast<std::size_t>(t.vector.size()) != h.dim()) throw std::invalid_argument("evolve: tracked size");

  EvolutionResult r;
  r.times.assign(times.begin(), times.end());
  for (const auto& t : tracked) r.labels.push_back(t.label);
  r.populations.assign(tracked.size(), std::vector<double>(times.size(), 0.0));

  const SpMat hs = h.to_eigen();
  const double e0 = psi0.dot(hs * psi0).real();
  const double e_scale = std::max(std::abs(e0), 1.0);
  auto record = [&](std::size_t ti, const Eigen::VectorXcd& psi) {
    for (std::size_t l = 0; l < tracked.size(); ++l) r.populations[l][ti] = std::norm(tracked[l].vector.dot(psi));
    r.norm_drift = std::max(r.norm_drift, std::abs(psi.squaredNorm() - 1.0));
    r.energy_drift = std::max(r.energy_drift, std::abs(psi.dot(hs * psi).real() - e0) / e_scale);
  };

  const bool dense = opts.method == Propagator::dense ||
                     (opts.method == Propagator::automatic && h.dim() < opts.dense_threshold);
  r.used = dense ? Propagator::dense : Propagator::krylov;
  if (dense) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.to_dense());
    if (es.info() != Eigen::Success) throw NumericalError("evolve: eigendecomposition failed");
    const Eigen::VectorXcd c0 = es.eigenvectors().adjoint() * psi0;
    for (std::size_t ti = 0; ti < times.size(); ++ti) {
      Eigen::VectorXcd c = c0;
      for (Eigen::Index i = 0; i < c.size(); ++i) c(i) *= std::exp(cplx(0.0, -es.eigenvalues()(i) * times[ti]));
      record(ti, es.eigenvectors() * c);
    }
    return r;
  }

  Eigen::VectorXcd psi = psi0;
  double t_now = 0.0;
  double dt_try = times.empty() ? 0.0 : std::max(times.back(), 1e-300);
  for (std::size_t ti = 0; ti < times.size(); ++ti) {
    while (t_now < times[ti]) {
      const double remaining = times[ti] - t_now;
      double dt = std::min(dt_try, remaining);
      const KrylovBasis kb(hs, psi, opts.krylov_dim);
      for (;;) {
        double err = 0.0;
        Eigen::VectorXcd next = kb.propagate(dt, err);
        if (err <= opts.local_tolerance) {
          psi = std::move(next);
          t_now = (dt == remaining) ? times[ti] : t_now + dt;
          dt_try = err < opts.local_tolerance / 16.0 ? 2.0 * dt : dt;
          break;
        }
        dt *= 0.5;
        if (dt < 1e-14 * std::max(times.back(), 1.0)) throw NumericalError("evolve: Krylov step size underflow");
      }
    }
    record(ti, psi);
  }
  return r;
}

std::optional<double> dominant_period(const SparseOperator& h, const Eigen::VectorXcd& psi0,
                                      std::span<const TrackedState> tracked) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.to_dense());
  const Eigen::VectorXd& e = es.eigenvalues();
  const Eigen::VectorXcd a = es.eigenvectors().adjoint() * psi0;
  const double e_scale = std::max(e.cwiseAbs().maxCoeff(), 1e-300);
  double best_weight = 0.0;
  double best_omega = 0.0;
  for (const auto& t : tracked) {
    const Eigen::VectorXcd b = es.eigenvectors().adjoint() * t.vector;
    std::vector<std::pair<double, double>> lines;  // (omega, amplitude)
    for (Eigen::Index i = 0; i < e.size(); ++i) {
      const double ci = std::abs(a(i) * b(i));
      if (ci < 1e-12) continue;
      for (Eigen::Index j = i + 1; j < e.size(); ++j) {
        const double cj = std::abs(a(j) * b(j));
        const double omega = std::abs(e(i) - e(j));
        if (cj < 1e-12 || omega < 1e-12 * e_scale) continue;
        lines.emplace_back(omega, 2.0 * ci * cj);
      }
    }
    std::sort(lines.begin(), lines.end());
    for (std::size_t i = 0; i < lines.size();) {
      double w = 0.0;
      std::size_t j = i;
      for (; j < lines.size() && lines[j].first - lines[i].first <= 1e-9 * lines[i].first; ++j) w += lines[j].second;
      if (w > best_weight * (1.0 + 1e-12)) {
        best_weight = w;
        best_omega = lines[i].first;
      }
      i = j;
    }
  }
  if (best_omega <= 0.0) return std::nullopt;
  return kTwoPi / best_omega;
}

ComparisonReport compare_full_vs_effective(const CrystalGeometry& geometry, const DriveParams& drive, Manifold kind,
                                           const SpinLabels& initial, const ComparisonOptions& opts) {
  const int n = geometry.n_sites();
  if (static_cast<int>(initial.size()) != n)
    throw std::invalid_argument("initial state has " + std::to_string(initial.size()) + " labels for " +
                                std::to_string(n) + " sites");
  for (int l : initial)
    if (l < 0 || l >= spin_dim(kind)) throw std::invalid_argument("initial label outside the manifold");

  ComparisonReport rep;
  rep.kind = kind;
  const auto label_sets =
      opts.tracked ? *opts.tracked : same_magnetisation_labels(n, kind, twice_magnetisation(initial, kind));

  // Effective model.
  SparseOperator h_eff;
  if (kind == Manifold::spin_half) {
    const auto model = spin_half_model(geometry, drive);
    rep.fit_residual = model.max_fit_residual;
    h_eff = build_spin_hamiltonian(model);
  } else {
    const auto model = spin_one_general(geometry, drive);
    rep.fit_residual = model.max_fit_residual;
    h_eff = build_spin_hamiltonian(model);
  }
  std::vector<TrackedState> eff_tracked;
  for (const auto& l : label_sets) eff_tracked.push_back({format_spin_labels(l, kind), spin_product_state(l, kind)});
  const Eigen::VectorXcd eff0 = spin_product_state(initial, kind);

  // Full model.
  const SectorBasis basis(n, n * excitations_per_site(kind), opts.max_dim);
  rep.full_dim = basis.dim();
  const SparseOperator h_full = build_jchv(basis, geometry, drive);
  std::vector<LocalManifold> sites;
  for (const auto& sd : site_drives(geometry, drive)) sites.push_back(local_manifold(kind, sd));
  std::vector<TrackedState> full_tracked;
  for (const auto& l : label_sets)
    full_tracked.push_back({format_spin_labels(l, kind), dressed_product_state(l, sites, basis)});
  const Eigen::VectorXcd full0 = dressed_product_state(initial, sites, basis);

  if (opts.t_final_ms) {
    rep.t_final_ms = *opts.t_final_ms;
  } else {
    rep.period_ms = dominant_period(h_eff, eff0, eff_tracked);
    rep.t_final_ms = rep.period_ms ? opts.window_periods * *rep.period_ms : opts.fallback_t_final_ms;
  }
  const auto times = uniform_times(rep.t_final_ms, opts.n_steps);

  if (configured_threads() > 1) {
    auto fut = std::async(std::launch::async, [&] { return evolve(h_full, full0, times, full_tracked, opts.evolve); });
    rep.effective = evolve(h_eff, eff0, times, eff_tracked, opts.evolve);
    rep.full = fut.get();
  } else {
    rep.full = evolve(h_full, full0, times, full_tracked, opts.evolve);
    rep.effective = evolve(h_eff, eff0, times, eff_tracked, opts.evolve);
  }

  rep.labels = rep.full.labels;
  for (std::size_t l = 0; l < rep.labels.size(); ++l) {
    double mx = 0.0, sq = 0.0;
    for (std::size_t t = 0; t < times.size(); ++t) {
      const double d = std::abs(rep.full.populations[l][t] - rep.effective.populations[l][t]);
      mx = std::max(mx, d);
      sq += d * d;
    }
    rep.max_abs_deviation.push_back(mx);
    rep.l2_deviation.push_back(std::sqrt(sq / static_cast<double>(times.size())));
    rep.max_deviation = std::max(rep.max_deviation, mx);
  }
  return rep;
}

void write_populations_csv(std::ostream& os, const EvolutionResult& r) {
  os << "t_ms";
  for (const auto& l : r.labels) os << ',' << l;
  os << '\n';
  for (std::size_t t = 0; t < r.times.size(); ++t) {
    os << fmt_num(r.times[t]);
    for (const auto& p : r.populations) os << ',' << fmt_num(p[t]);
    os << '\n';
  }
}

void write_comparison_csv(std::ostream& os, const ComparisonReport& r) {
  os << "t_ms";
  for (const auto& l : r.labels) os << ",full_" << l;
  for (const auto& l : r.labels) os << ",eff_" << l;
  os << '\n';
  for (std::size_t t = 0; t < r.full.times.size(); ++t) {
    os << fmt_num(r.full.times[t]);
    for (const auto& p : r.full.populations) os << ',' << fmt_num(p[t]);
    for (const auto& p : r.effective.populations) os << ',' << fmt_num(p[t]);
    os << '\n';
  }
}

void write_comparison_report(std::ostream& os, const ComparisonReport& r) {
  os << "manifold = " << (r.kind == Manifold::spin_half ? "spin-1/2" : "spin-1") << '\n';
  os << "full_dim = " << r.full_dim << '\n';
  os << "t_final_ms = " << fmt_num(r.t_final_ms) << '\n';
  os << "period_ms = " << (r.period_ms ? fmt_num(*r.period_ms) : std::string("none")) << '\n';
  os << "n_times = " << r.full.times.size() << '\n';
  os << "max_abs_deviation = " << fmt_num(r.max_deviation) << '\n';
  for (std::size_t l = 0; l < r.labels.size(); ++l) {
    os << "max_abs_deviation." << r.labels[l] << " = " << fmt_num(r.max_abs_deviation[l]) << '\n';
    os << "l2_deviation." << r.labels[l] << " = " << fmt_num(r.l2_deviation[l]) << '\n';
  }
  os << "norm_drift.full = " << fmt_num(r.full.norm_drift) << '\n';
  os << "norm_drift.effective = " << fmt_num(r.effective.norm_drift) << '\n';
  os << "energy_drift.full = " << fmt_num(r.full.energy_drift) << '\n';
  os << "energy_drift.effective = " << fmt_num(r.effective.energy_drift) << '\n';
  os << "ansatz_fit_residual = " << fmt_num(r.fit_residual) << '\n';
}

}  // namespace ionjch
