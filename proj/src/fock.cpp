#include "ionjch/fock.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ionjch/errors.hpp"

namespace ionjch {

std::string to_string(const SiteState& s) {
  static constexpr const char* kNames[] = {"g", "e1", "e2"};
  return std::string("(") + kNames[static_cast<int>(s.level)] + "," + std::to_string(s.n_x) + "," +
         std::to_string(s.n_y) + ")";
}

std::vector<SiteState> site_states(int n) {
  std::vector<SiteState> out;
  if (n < 0) return out;
  for (Level level : {Level::g, Level::e1, Level::e2}) {
    const int phonons = n - (level == Level::g ? 0 : 1);
    for (int nx = 0; nx <= phonons; ++nx) out.push_back({level, nx, phonons - nx});
  }
  return out;
}

std::size_t sector_dimension(int n_sites, int n_total) {
  if (n_sites < 1 || n_total < 0) return 0;
  // ways[m] = number of configurations of the sites processed so far holding m excitations.
  std::vector<double> ways(static_cast<std::size_t>(n_total) + 1, 0.0);
  ways[0] = 1.0;
  for (int s = 0; s < n_sites; ++s) {
    std::vector<double> next(ways.size(), 0.0);
    for (int m = 0; m <= n_total; ++m) {
      if (ways[m] == 0.0) continue;
      for (int n = 0; m + n <= n_total; ++n) next[m + n] += ways[m] * (3.0 * n + 1.0);
    }
    ways = std::move(next);
  }
  const double d = ways[n_total];
  return d > 1e18 ? static_cast<std::size_t>(-1) : static_cast<std::size_t>(d);
}

namespace {

void enumerate_into(std::vector<SiteState>& out, std::vector<SiteState>& current, int site, int n_sites,
                    int remaining) {
  if (site == n_sites - 1) {
    for (const auto& s : site_states(remaining)) {
      current[site] = s;
      out.insert(out.end(), current.begin(), current.end());
    }
    return;
  }
  // Site-major lexicographic order: iterate (level, n_x, n_y) over all site
  // excitations at once so the outer loop runs in SiteState order.
  for (Level level : {Level::g, Level::e1, Level::e2}) {
    const int base = level == Level::g ? 0 : 1;
    for (int nx = 0; nx + base <= remaining; ++nx) {
      for (int ny = 0; nx + ny + base <= remaining; ++ny) {
        current[site] = {level, nx, ny};
        enumerate_into(out, current, site + 1, n_sites, remaining - (nx + ny + base));
      }
    }
  }
}

}  // namespace

SectorBasis::SectorBasis(int n_sites, int n_total, std::size_t max_dim) : n_sites_(n_sites), n_total_(n_total) {
  if (n_sites < 1) throw ConfigError(ConfigErrorKind::kOutOfRange, "n_sites must be >= 1");
  if (n_total < 0) throw ConfigError(ConfigErrorKind::kOutOfRange, "n_total must be >= 0");
  const std::size_t dim = sector_dimension(n_sites, n_total);
  if (dim > max_dim) {
    throw NumericalError("sector dimension " + std::to_string(dim) + " exceeds cap " + std::to_string(max_dim));
  }
  states_.reserve(dim * static_cast<std::size_t>(n_sites));
  std::vector<SiteState> current(static_cast<std::size_t>(n_sites));
  enumerate_into(states_, current, 0, n_sites, n_total);
}

std::optional<std::size_t> SectorBasis::index_of(std::span<const SiteState> config) const {
  if (config.size() != static_cast<std::size_t>(n_sites_)) return std::nullopt;
  std::size_t lo = 0, hi = dim();
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    const auto s = state(mid);
    const auto cmp = std::lexicographical_compare_three_way(s.begin(), s.end(), config.begin(), config.end());
    if (cmp == 0) return mid;
    if (cmp < 0) lo = mid + 1;
    else hi = mid;
  }
  return std::nullopt;
}

SectorBasis enumerate_sector(int n_sites, int n_total, std::size_t max_dim) {
  return SectorBasis(n_sites, n_total, max_dim);
}

namespace {

void check_site(const SectorBasis& basis, int site) {
  if (site < 0 || site >= basis.n_sites()) {
    throw std::out_of_range("site index " + std::to_string(site) + " outside the basis");
  }
}

std::size_t lookup(const SectorBasis& basis, std::span<const SiteState> config) {
  auto idx = basis.index_of(config);
  if (!idx) throw std::logic_error("operator maps a basis state outside the sector");
  return *idx;
}

}  // namespace

SparseOperator build_site_operator(const SectorBasis& basis, int site, SiteOpKind kind) {
  check_site(basis, site);
  std::vector<Entry> entries;
  std::vector<SiteState> work(static_cast<std::size_t>(basis.n_sites()));
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    const auto config = basis.state(i);
    const SiteState s = config[site];
    switch (kind) {
      case SiteOpKind::num_x:
        if (s.n_x) entries.push_back({i, i, double(s.n_x)});
        break;
      case SiteOpKind::num_y:
        if (s.n_y) entries.push_back({i, i, double(s.n_y)});
        break;
      case SiteOpKind::proj_e1:
        if (s.level == Level::e1) entries.push_back({i, i, 1.0});
        break;
      case SiteOpKind::proj_e2:
        if (s.level == Level::e2) entries.push_back({i, i, 1.0});
        break;
      case SiteOpKind::jc_x:
      case SiteOpKind::jc_y: {
        // Lower triangle: a_b|e><g| sends (g, n) -> (e, n-1) with amplitude sqrt(n);
        // the conjugate entry is added alongside.
        const bool x = kind == SiteOpKind::jc_x;
        const int n = x ? s.n_x : s.n_y;
        if (s.level != Level::g || n == 0) break;
        std::copy(config.begin(), config.end(), work.begin());
        work[site] = x ? SiteState{Level::e1, s.n_x - 1, s.n_y} : SiteState{Level::e2, s.n_x, s.n_y - 1};
        const std::size_t j = lookup(basis, work);
        const double amp = std::sqrt(double(n));
        entries.push_back({j, i, amp});
        entries.push_back({i, j, amp});
        break;
      }
    }
  }
  return SparseOperator::from_triplets(basis.dim(), std::move(entries));
}

SparseOperator build_hop_operator(const SectorBasis& basis, int j, int k, Species species) {
  check_site(basis, j);
  check_site(basis, k);
  if (j == k) throw std::invalid_argument("build_hop_operator: j == k");
  const bool x = species == Species::x;
  std::vector<Entry> entries;
  std::vector<SiteState> work(static_cast<std::size_t>(basis.n_sites()));
  // a_j^dag a_k moves one phonon k -> j; the hermitian partner is its transpose.
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    const auto config = basis.state(i);
    int& src_n = x ? work[k].n_x : work[k].n_y;
    std::copy(config.begin(), config.end(), work.begin());
    const int nk = src_n;
    if (nk == 0) continue;
    int& dst_n = x ? work[j].n_x : work[j].n_y;
    const int nj = dst_n;
    src_n = nk - 1;
    dst_n = nj + 1;
    const std::size_t target = lookup(basis, work);
    const double amp = std::sqrt(double(nk) * double(nj + 1));
    entries.push_back({target, i, amp});
    entries.push_back({i, target, amp});
  }
  return SparseOperator::from_triplets(basis.dim(), std::move(entries));
}

SparseOperator site_excitation_operator(const SectorBasis& basis, int site) {
  check_site(basis, site);
  std::vector<Entry> entries;
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    const int n = basis.state(i)[site].excitations();
    if (n) entries.push_back({i, i, double(n)});
  }
  return SparseOperator::from_triplets(basis.dim(), std::move(entries));
}

SparseOperator total_excitation_operator(const SectorBasis& basis) {
  std::vector<Entry> entries;
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    int n = 0;
    for (const auto& s : basis.state(i)) n += s.excitations();
    if (n) entries.push_back({i, i, double(n)});
  }
  return SparseOperator::from_triplets(basis.dim(), std::move(entries));
}

}  // namespace ionjch
