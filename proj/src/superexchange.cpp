#include "ionjch/superexchange.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "ionjch/errors.hpp"
#include "ionjch/spin_ops.hpp"

namespace ionjch {

int excitations_per_site(Manifold m) { return static_cast<int>(m); }
int spin_dim(Manifold m) { return m == Manifold::spin_half ? 2 : 3; }

Manifold manifold_for(int n_excitations) {
  if (n_excitations == 1) return Manifold::spin_half;
  if (n_excitations == 2) return Manifold::spin_one;
  throw std::invalid_argument("only 1 or 2 excitations per site map to a spin model");
}

std::pair<int, int> label_species_counts(Manifold kind, int label_index) {
  if (kind == Manifold::spin_half) {
    if (label_index == 0) return {1, 0};
    if (label_index == 1) return {0, 1};
  } else if (label_index >= 0 && label_index < 3) {
    return {2 - label_index, label_index};
  }
  throw std::out_of_range("label index outside manifold");
}

namespace {

int species_count(const SiteState& s, Species b) {
  if (b == Species::x) return s.n_x + (s.level == Level::e1 ? 1 : 0);
  return s.n_y + (s.level == Level::e2 ? 1 : 0);
}

std::size_t site_index(const std::vector<SiteState>& states, const SiteState& s) {
  auto it = std::lower_bound(states.begin(), states.end(), s);
  if (it == states.end() || *it != s) throw std::logic_error("site state not in basis");
  return static_cast<std::size_t>(it - states.begin());
}

/// Dense matrix of a_b from site_states(n) to site_states(n - 1).
Eigen::MatrixXd annihilator(int n, Species b) {
  const auto from = site_states(n);
  const auto to = site_states(n - 1);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(to.size()), static_cast<Eigen::Index>(from.size()));
  for (std::size_t c = 0; c < from.size(); ++c) {
    SiteState s = from[c];
    int& occ = (b == Species::x) ? s.n_x : s.n_y;
    if (occ == 0) continue;
    const double amp = std::sqrt(static_cast<double>(occ));
    --occ;
    a(static_cast<Eigen::Index>(site_index(to, s)), static_cast<Eigen::Index>(c)) = amp;
  }
  return a;
}

struct SiteData {
  LocalManifold manifold;
  Eigen::VectorXd e_plus, e_minus;  // (n+1)- and (n-1)-excitation spectra
  // Projected ladder amplitudes: up[b](p, r) = <p_{n+1}| a_b^dag |r>, down[b](q, r) = <q_{n-1}| a_b |r>.
  Eigen::MatrixXd up[2], down[2];
};

SiteData site_data(Manifold kind, const SiteDrive& drive) {
  SiteData d;
  d.manifold = local_manifold(kind, drive);
  const int n = excitations_per_site(kind);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> plus(site_hamiltonian(n + 1, drive));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> minus(site_hamiltonian(n - 1, drive));
  d.e_plus = plus.eigenvalues();
  d.e_minus = minus.eigenvalues();
  for (int b = 0; b < 2; ++b) {
    const Species sp = b == 0 ? Species::x : Species::y;
    d.up[b] = plus.eigenvectors().transpose() * annihilator(n + 1, sp).transpose() * d.manifold.vectors;
    d.down[b] = minus.eigenvectors().transpose() * annihilator(n, sp) * d.manifold.vectors;
  }
  return d;
}

PairEffectiveMatrix pair_from_sites(const SiteData& sj, const SiteData& sk, double t_x, double t_y, double g_max,
                                    const PairOptions& opts) {
  const int m = static_cast<int>(sj.manifold.energies.size());
  const int dim = m * m;
  PairEffectiveMatrix out;
  out.kind = sj.manifold.kind;
  out.zeroth = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::VectorXd e(dim);
  for (int r = 0; r < m; ++r)
    for (int s = 0; s < m; ++s) e(r * m + s) = sj.manifold.energies(r) + sk.manifold.energies(s);
  out.zeroth.diagonal() = e;

  Eigen::MatrixXd second = Eigen::MatrixXd::Zero(dim, dim);
  const double t[2] = {t_x, t_y};
  const double tol = opts.degeneracy_tolerance * (g_max > 0.0 ? g_max : 1.0);
  double min_den = std::numeric_limits<double>::infinity();

  // plus_site gains an excitation, minus_site loses one; `plus_is_j` fixes which of
  // r (site j) and s (site k) belongs to each.
  auto accumulate = [&](const SiteData& plus_site, const SiteData& minus_site, bool plus_is_j) {
    const auto np = plus_site.e_plus.size();
    const auto nm = minus_site.e_minus.size();
    Eigen::MatrixXd amp = Eigen::MatrixXd::Zero(np * nm, dim);
    Eigen::VectorXd e_chi(np * nm);
    for (Eigen::Index p = 0; p < np; ++p)
      for (Eigen::Index q = 0; q < nm; ++q) e_chi(p * nm + q) = plus_site.e_plus(p) + minus_site.e_minus(q);
    for (int b = 0; b < 2; ++b) {
      if (t[b] == 0.0) continue;
      for (int r = 0; r < m; ++r) {
        for (int s = 0; s < m; ++s) {
          const int lp = plus_is_j ? r : s;
          const int lm = plus_is_j ? s : r;
          for (Eigen::Index p = 0; p < np; ++p) {
            const double up = plus_site.up[b](p, lp);
            if (up == 0.0) continue;
            for (Eigen::Index q = 0; q < nm; ++q)
              amp(p * nm + q, r * m + s) += t[b] * up * minus_site.down[b](q, lm);
          }
        }
      }
    }
    const double amp_floor = 1e-14 * std::max(amp.cwiseAbs().maxCoeff(), 1e-300);
    for (Eigen::Index chi = 0; chi < amp.rows(); ++chi) {
      for (int a = 0; a < dim; ++a) {
        if (std::abs(amp(chi, a)) <= amp_floor) continue;
        const double den = e(a) - e_chi(chi);
        if (std::abs(den) < tol) {
          std::ostringstream msg;
          msg << "degenerate intermediate state: |E - E_chi| = " << std::abs(den) << " below " << tol;
          throw NumericalError(msg.str());
        }
        min_den = std::min(min_den, std::abs(den));
      }
    }
    for (int a = 0; a < dim; ++a) {
      for (int c = 0; c < dim; ++c) {
        double sum = 0.0;
        for (Eigen::Index chi = 0; chi < amp.rows(); ++chi) {
          const double num = amp(chi, a) * amp(chi, c);
          if (num == 0.0) continue;
          sum += num * 0.5 * (1.0 / (e(a) - e_chi(chi)) + 1.0 / (e(c) - e_chi(chi)));
        }
        second(a, c) += sum;
      }
    }
  };
  accumulate(sj, sk, true);
  accumulate(sk, sj, false);

  out.hermiticity_residual = (second - second.transpose()).cwiseAbs().maxCoeff();
  out.second = 0.5 * (second + second.transpose());
  out.min_denominator = min_den;
  return out;
}

template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  const auto workers = static_cast<std::size_t>(std::min<int>(configured_threads(), static_cast<int>(count)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

struct PairJob {
  int j, k;
};

std::vector<PairJob> coupled_pairs(const CrystalGeometry& g) {
  std::vector<PairJob> jobs;
  for (int j = 0; j < g.n_sites(); ++j)
    for (int k = j + 1; k < g.n_sites(); ++k)
      if (g.t_x(j, k) != 0.0 || g.t_y(j, k) != 0.0) jobs.push_back({j, k});
  return jobs;
}

std::vector<SiteData> all_site_data(Manifold kind, const CrystalGeometry& geometry, const DriveParams& drive) {
  const auto drives = site_drives(geometry, drive);
  std::vector<SiteData> out(drives.size());
  parallel_for(drives.size(), [&](std::size_t i) { out[i] = site_data(kind, drives[i]); });
  return out;
}

}  // namespace

int configured_threads() {
  const char* env = std::getenv("IONJCH_THREADS");
  if (env == nullptr || *env == '\0') return 1;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == env || v < 1) return 1;
  return static_cast<int>(std::min<long>(v, 256));
}

LocalManifold local_manifold(Manifold kind, const SiteDrive& site) {
  const int n = excitations_per_site(kind);
  const int m = spin_dim(kind);
  LocalManifold out;
  out.kind = kind;
  out.site_basis = site_states(n);
  const Eigen::MatrixXd h = site_hamiltonian(n, site);
  const auto dn = static_cast<Eigen::Index>(out.site_basis.size());
  out.vectors = Eigen::MatrixXd::Zero(dn, m);
  out.energies = Eigen::VectorXd::Zero(m);
  for (int label = 0; label < m; ++label) {
    const auto [nx, ny] = label_species_counts(kind, label);
    std::vector<Eigen::Index> block;
    Eigen::Index phonon = -1;
    for (Eigen::Index i = 0; i < dn; ++i) {
      const SiteState& s = out.site_basis[static_cast<std::size_t>(i)];
      if (species_count(s, Species::x) != nx || species_count(s, Species::y) != ny) continue;
      if (s.level == Level::g) phonon = static_cast<Eigen::Index>(block.size());
      block.push_back(i);
    }
    const auto nb = static_cast<Eigen::Index>(block.size());
    Eigen::MatrixXd hb(nb, nb);
    for (Eigen::Index a = 0; a < nb; ++a)
      for (Eigen::Index b = 0; b < nb; ++b) hb(a, b) = h(block[a], block[b]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hb);
    Eigen::VectorXd v = es.eigenvectors().col(0);
    if (std::abs(v(phonon)) > 1e-12) {
      if (v(phonon) < 0.0) v = -v;
    } else {
      // Pure atomic limit: excited components carry the minus sign.
      for (Eigen::Index a = 0; a < nb; ++a) {
        if (std::abs(v(a)) > 1e-12) {
          if (v(a) > 0.0) v = -v;
          break;
        }
      }
    }
    for (Eigen::Index a = 0; a < nb; ++a) out.vectors(block[a], label) = v(a);
    out.energies(label) = es.eigenvalues()(0);
  }
  return out;
}

PairEffectiveMatrix pair_effective_matrix(const SiteDrive& sj, const SiteDrive& sk, double t_x, double t_y,
                                          Manifold kind, const PairOptions& opts) {
  const double g_max = std::max({std::abs(sj.g_x), std::abs(sj.g_y), std::abs(sk.g_x), std::abs(sk.g_y)});
  return pair_from_sites(site_data(kind, sj), site_data(kind, sk), t_x, t_y, g_max, opts);
}

PairEffectiveMatrix pair_effective_matrix(int j, int k, const CrystalGeometry& geometry, const DriveParams& drive,
                                          Manifold kind, const PairOptions& opts) {
  if (j == k || j < 0 || k < 0 || j >= geometry.n_sites() || k >= geometry.n_sites())
    throw std::out_of_range("pair_effective_matrix: bad site pair");
  const auto drives = site_drives(geometry, drive);
  auto out = pair_effective_matrix(drives[j], drives[k], geometry.t_x(j, k), geometry.t_y(j, k), kind, opts);
  out.j = j;
  out.k = k;
  return out;
}

// ---------------------------------------------------------------------------

SpinHalfPair extract_spin_half(const PairEffectiveMatrix& pm) {
  if (pm.kind != Manifold::spin_half) throw std::invalid_argument("extract_spin_half: wrong manifold");
  const Eigen::MatrixXd& M = pm.second;
  enum { uu = 0, ud = 1, du = 2, dd = 3 };
  SpinHalfPair p;
  p.K_xy = 0.5 * M(ud, du);
  p.K_z = 0.25 * (M(uu, uu) + M(dd, dd) - M(ud, ud) - M(du, du));
  p.h_j = 0.25 * (M(uu, uu) - M(dd, dd) + M(ud, ud) - M(du, du));
  p.h_k = 0.25 * (M(uu, uu) - M(dd, dd) - M(ud, ud) + M(du, du));
  p.constant = 0.25 * (M(uu, uu) + M(dd, dd) + M(ud, ud) + M(du, du));

  Eigen::MatrixXd fit = Eigen::MatrixXd::Zero(4, 4);
  const double sz[2] = {1.0, -1.0};
  for (int r = 0; r < 2; ++r)
    for (int s = 0; s < 2; ++s) fit(r * 2 + s, r * 2 + s) = p.constant + p.K_z * sz[r] * sz[s] + p.h_j * sz[r] + p.h_k * sz[s];
  fit(ud, du) = fit(du, ud) = 2.0 * p.K_xy;
  p.fit_residual = (M - fit).cwiseAbs().maxCoeff();
  return p;
}

SpinHalfModel spin_half_model(const CrystalGeometry& geometry, const DriveParams& drive, const PairOptions& opts) {
  const int n = geometry.n_sites();
  const auto sites = all_site_data(Manifold::spin_half, geometry, drive);
  SpinHalfModel model;
  model.K_xy = Eigen::MatrixXd::Zero(n, n);
  model.K_z = Eigen::MatrixXd::Zero(n, n);
  model.H_field = Eigen::VectorXd::Zero(n);
  model.E0_split = Eigen::VectorXd::Zero(n);
  for (int j = 0; j < n; ++j) {
    const auto& e = sites[j].manifold.energies;
    model.E0_split(j) = 0.5 * (e(0) - e(1));
    model.energy_offset += 0.5 * (e(0) + e(1));
  }
  const auto jobs = coupled_pairs(geometry);
  std::vector<SpinHalfPair> pairs(jobs.size());
  const double g_max = drive.g_max();
  parallel_for(jobs.size(), [&](std::size_t i) {
    const auto [j, k] = jobs[i];
    pairs[i] = extract_spin_half(pair_from_sites(sites[j], sites[k], geometry.t_x(j, k), geometry.t_y(j, k), g_max, opts));
  });
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto [j, k] = jobs[i];
    const auto& p = pairs[i];
    model.K_xy(j, k) = model.K_xy(k, j) = p.K_xy;
    model.K_z(j, k) = model.K_z(k, j) = p.K_z;
    model.H_field(j) += p.h_j;
    model.H_field(k) += p.h_k;
    model.energy_offset += p.constant;
    model.max_fit_residual = std::max(model.max_fit_residual, p.fit_residual);
  }
  return model;
}

SpinHalfAnalytic spin_half_analytic(double g_x, double g_y, double t_x, double t_y) {
  if (!(g_x > 0.0) || !(g_y > 0.0)) throw std::invalid_argument("spin_half_analytic: couplings must be positive");
  const double tz = g_x / g_y;  // tan(zeta)
  const double cz = g_y / g_x;
  SpinHalfAnalytic a;
  a.K_xy = -t_x * t_y * (2.0 * (tz + cz) + 5.0) / (8.0 * g_y * (1.0 + tz));
  a.K_z = (t_x * t_x * (tz - 6.0 * cz - 4.0) + t_y * t_y * (cz - 6.0 * tz - 4.0)) / (16.0 * g_y * (1.0 + tz));
  a.h = -0.625 * (t_x * t_x / g_x - t_y * t_y / g_y);
  return a;
}

SpinHalfModel spin_half_analytic_model(const CrystalGeometry& geometry, const DriveParams& drive) {
  const int n = geometry.n_sites();
  const auto spectra = single_site_spectra(drive);
  SpinHalfModel model;
  model.K_xy = Eigen::MatrixXd::Zero(n, n);
  model.K_z = Eigen::MatrixXd::Zero(n, n);
  model.H_field = Eigen::VectorXd::Zero(n);
  model.E0_split = Eigen::VectorXd::Constant(n, 0.5 * (spectra.one.E_minus_x - spectra.one.E_minus_y));
  model.energy_offset = 0.5 * n * (spectra.one.E_minus_x + spectra.one.E_minus_y);
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      const auto a = spin_half_analytic(drive.g_x, drive.g_y, geometry.t_x(j, k), geometry.t_y(j, k));
      model.K_xy(j, k) = model.K_xy(k, j) = a.K_xy;
      model.K_z(j, k) = model.K_z(k, j) = a.K_z;
      model.H_field(j) += a.h;
      model.H_field(k) += a.h;
    }
  }
  return model;
}

// ---------------------------------------------------------------------------

namespace {
// Spin-1 label m in {1, 0, -1} to local index.
constexpr int li(int m) { return 1 - m; }
constexpr int pi(int a, int b) { return li(a) * 3 + li(b); }
}  // namespace

SpinOnePair extract_spin_one(const PairEffectiveMatrix& pm) {
  if (pm.kind != Manifold::spin_one) throw std::invalid_argument("extract_spin_one: wrong manifold");
  const Eigen::MatrixXd& M = pm.second;
  SpinOnePair p;
  p.T1 = M(pi(1, 0), pi(0, 1));
  p.Tm1 = M(pi(-1, 0), pi(0, -1));
  p.T0 = M(pi(1, -1), pi(0, 0));
  p.T0_alt = M(pi(-1, 1), pi(0, 0));
  const double t0 = 0.5 * (p.T0 + p.T0_alt);
  p.J_xy = t0;
  p.v_p1 = 0.5 * (p.T1 - t0);
  p.v_m1 = 0.5 * (p.Tm1 - t0);

  for (int a = -1; a <= 1; ++a)
    for (int b = -1; b <= 1; ++b) p.T_diag(li(a), li(b)) = M(pi(a, b), pi(a, b));
  auto f = [&](int a, int b) { return p.T_diag(li(a), li(b)); };
  p.constant = f(0, 0);
  p.B_j = 0.5 * (f(1, 0) - f(-1, 0));
  p.D_j = 0.5 * (f(1, 0) + f(-1, 0)) - p.constant;
  p.B_k = 0.5 * (f(0, 1) - f(0, -1));
  p.D_k = 0.5 * (f(0, 1) + f(0, -1)) - p.constant;
  auto g = [&](int a, int b) { return f(a, b) - p.constant - p.B_j * a - p.B_k * b - p.D_j - p.D_k; };
  const double g11 = g(1, 1), g1m = g(1, -1), gm1 = g(-1, 1), gmm = g(-1, -1);
  p.J_z = 0.25 * (g11 - g1m - gm1 + gmm);
  p.W_jk = 0.25 * (g11 + g1m - gm1 - gmm);
  p.W_kj = 0.25 * (g11 - g1m + gm1 - gmm);
  p.V = 0.25 * (g11 + g1m + gm1 + gmm);

  const double scale = M.cwiseAbs().maxCoeff();
  const double diff = (M - spin_one_pair_matrix(p)).cwiseAbs().maxCoeff();
  p.fit_residual = scale > 0.0 ? diff / scale : diff;
  return p;
}

namespace {

void add_spin_one_pair(TermAccumulator& acc, int j, int k, double J_xy, double J_z, double W_jk, double W_kj,
                       double V, double v_p1, double v_m1) {
  using namespace spin_one;
  const Eigen::MatrixXcd z = sz(), z2 = sz() * sz(), p = splus(), m = sminus();
  acc.add_two(j, p, k, m, 0.5 * J_xy);
  acc.add_two(j, m, k, p, 0.5 * J_xy);
  acc.add_two(j, z, k, z, J_z);
  acc.add_two(j, z, k, z2, W_jk);
  acc.add_two(j, z2, k, z, W_kj);
  acc.add_two(j, z2, k, z2, V);
  // v1 (Sz S+ (x) S- Sz + h.c.), v-1 (Sz S- (x) S+ Sz + h.c.)
  const Eigen::MatrixXcd zp = z * p, zm = z * m, mz = m * z, pz = p * z;
  acc.add_two(j, zp, k, mz, v_p1);
  acc.add_two(j, mz, k, zp, v_p1);
  acc.add_two(j, zm, k, pz, v_m1);
  acc.add_two(j, pz, k, zm, v_m1);
}

}  // namespace

Eigen::MatrixXd spin_one_pair_matrix(const SpinOnePair& p) {
  const SpinSpace space(2, 3);
  TermAccumulator acc(space);
  const Eigen::MatrixXcd z = spin_one::sz(), z2 = z * z;
  add_spin_one_pair(acc, 0, 1, p.J_xy, p.J_z, p.W_jk, p.W_kj, p.V, p.v_p1, p.v_m1);
  acc.add_one(0, z, p.B_j);
  acc.add_one(0, z2, p.D_j);
  acc.add_one(1, z, p.B_k);
  acc.add_one(1, z2, p.D_k);
  acc.add_constant(p.constant);
  return acc.build().to_dense().real();
}

SpinOneModel spin_one_general(const CrystalGeometry& geometry, const DriveParams& drive, const PairOptions& opts) {
  const int n = geometry.n_sites();
  const auto sites = all_site_data(Manifold::spin_one, geometry, drive);
  SpinOneModel model;
  for (auto* mat : {&model.J_xy, &model.J_z, &model.V, &model.v_p1, &model.v_m1, &model.W})
    *mat = Eigen::MatrixXd::Zero(n, n);
  model.D_field = Eigen::VectorXd::Zero(n);
  model.B_field = Eigen::VectorXd::Zero(n);
  for (int j = 0; j < n; ++j) {
    const auto& e = sites[j].manifold.energies;  // (E_1, E_0, E_-1)
    model.D_field(j) = 0.5 * (e(0) + e(2) - 2.0 * e(1));
    model.B_field(j) = 0.5 * (e(0) - e(2));
    model.energy_offset += e(1);
  }
  const auto jobs = coupled_pairs(geometry);
  std::vector<SpinOnePair> pairs(jobs.size());
  const double g_max = drive.g_max();
  parallel_for(jobs.size(), [&](std::size_t i) {
    const auto [j, k] = jobs[i];
    pairs[i] = extract_spin_one(pair_from_sites(sites[j], sites[k], geometry.t_x(j, k), geometry.t_y(j, k), g_max, opts));
  });
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto [j, k] = jobs[i];
    const auto& p = pairs[i];
    model.J_xy(j, k) = model.J_xy(k, j) = p.J_xy;
    model.J_z(j, k) = model.J_z(k, j) = p.J_z;
    model.V(j, k) = model.V(k, j) = p.V;
    model.v_p1(j, k) = model.v_p1(k, j) = p.v_p1;
    model.v_m1(j, k) = model.v_m1(k, j) = p.v_m1;
    model.W(j, k) = p.W_jk;
    model.W(k, j) = p.W_kj;
    model.D_field(j) += p.D_j;
    model.D_field(k) += p.D_k;
    model.B_field(j) += p.B_j;
    model.B_field(k) += p.B_k;
    model.energy_offset += p.constant;
    model.max_fit_residual = std::max(model.max_fit_residual, p.fit_residual);
  }
  model.outside_ansatz = model.max_fit_residual > kAnsatzResidualLimit;
  return model;
}

SpinOneAnalytic spin_one_isotropic_analytic(double g, double t_x, double t_y) {
  if (!(g > 0.0)) throw std::invalid_argument("spin_one_isotropic_analytic: coupling must be positive");
  const double s2 = std::sqrt(2.0);
  SpinOneAnalytic a;
  a.J_xy = -123.0 * s2 / (7.0 * g) * t_x * t_y;
  a.J_z = -123.0 / (7.0 * s2 * g) * (t_x * t_x + t_y * t_y);
  a.B = -53.0 / (2.0 * s2 * g) * (t_x * t_x - t_y * t_y);
  return a;
}

SparseOperator build_spin_hamiltonian(const SpinHalfModel& model) {
  using namespace spin_half;
  const int n = model.n_sites();
  const SpinSpace space(n, 2);
  TermAccumulator acc(space);
  const Eigen::MatrixXcd x = sigma_x(), y = sigma_y(), z = sigma_z();
  const Eigen::VectorXd field = model.total_field();
  for (int j = 0; j < n; ++j) {
    acc.add_one(j, z, field(j));
    for (int k = j + 1; k < n; ++k) {
      acc.add_two(j, x, k, x, model.K_xy(j, k));
      acc.add_two(j, y, k, y, model.K_xy(j, k));
      acc.add_two(j, z, k, z, model.K_z(j, k));
    }
  }
  acc.add_constant(model.energy_offset);
  return acc.build();
}

SparseOperator build_spin_hamiltonian(const SpinOneModel& model) {
  const int n = model.n_sites();
  const SpinSpace space(n, 3);
  TermAccumulator acc(space);
  const Eigen::MatrixXcd z = spin_one::sz(), z2 = z * z;
  for (int j = 0; j < n; ++j) {
    acc.add_one(j, z, model.B_field(j));
    acc.add_one(j, z2, model.D_field(j));
    for (int k = j + 1; k < n; ++k)
      add_spin_one_pair(acc, j, k, model.J_xy(j, k), model.J_z(j, k), model.W(j, k), model.W(k, j), model.V(j, k),
                        model.v_p1(j, k), model.v_m1(j, k));
  }
  acc.add_constant(model.energy_offset);
  return acc.build();
}

}  // namespace ionjch
