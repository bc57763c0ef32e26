#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ionjch/sparse_operator.hpp"

namespace ionjch {

enum class Level : std::uint8_t { g = 0, e1 = 1, e2 = 2 };

/// One ion: internal level plus x and y local-phonon occupations.
struct SiteState {
  Level level = Level::g;
  int n_x = 0;
  int n_y = 0;

  int excitations() const { return n_x + n_y + (level == Level::g ? 0 : 1); }
  // Lexicographic: level (g < e1 < e2), then n_x, then n_y.
  auto operator<=>(const SiteState&) const = default;
};

std::string to_string(const SiteState& s);

/// All single-site states carrying exactly n excitations, in lexicographic order;
/// there are 3n + 1 of them.
std::vector<SiteState> site_states(int n);

/// Number of many-body configurations in the sector, without enumerating it.
std::size_t sector_dimension(int n_sites, int n_total);

/// Fixed-N basis. States are ordered lexicographically, site-major, which makes the
/// ordinal lookup a binary search.
class SectorBasis {
 public:
  static constexpr std::size_t kDefaultMaxDim = 2'000'000;

  SectorBasis(int n_sites, int n_total, std::size_t max_dim = kDefaultMaxDim);

  int n_sites() const { return n_sites_; }
  int n_total() const { return n_total_; }
  std::size_t dim() const { return states_.size() / static_cast<std::size_t>(n_sites_); }

  std::span<const SiteState> state(std::size_t i) const {
    return {states_.data() + i * static_cast<std::size_t>(n_sites_), static_cast<std::size_t>(n_sites_)};
  }

  std::optional<std::size_t> index_of(std::span<const SiteState> config) const;

 private:
  int n_sites_;
  int n_total_;
  std::vector<SiteState> states_;  // dim * n_sites, row-major
};

/// Throws NumericalError when the sector dimension exceeds max_dim.
SectorBasis enumerate_sector(int n_sites, int n_total, std::size_t max_dim = SectorBasis::kDefaultMaxDim);

enum class SiteOpKind { num_x, num_y, proj_e1, proj_e2, jc_x, jc_y };
enum class Species { x, y };

/// num_x, num_y, |e1><e1|, |e2><e2|, a_x|e1><g| + h.c., a_y|e2><g| + h.c. on one site.
SparseOperator build_site_operator(const SectorBasis& basis, int site, SiteOpKind kind);

/// a_{b,j}^dag a_{b,k} + a_{b,j} a_{b,k}^dag.
SparseOperator build_hop_operator(const SectorBasis& basis, int j, int k, Species species);

/// N_j = n_x + n_y + P_e1 + P_e2 on one site.
SparseOperator site_excitation_operator(const SectorBasis& basis, int site);
/// N = sum_j N_j.
SparseOperator total_excitation_operator(const SectorBasis& basis);

}  // namespace ionjch
