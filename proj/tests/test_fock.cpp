#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "ionjch/errors.hpp"
#include "ionjch/fock.hpp"

using namespace ionjch;

namespace {

// All configurations with per-site states drawn from every level and occupation up
// to n_total, filtered by total excitation count.
std::vector<std::vector<SiteState>> brute_force_sector(int n_sites, int n_total) {
  std::vector<SiteState> all;
  for (int lv = 0; lv < 3; ++lv)
    for (int nx = 0; nx <= n_total; ++nx)
      for (int ny = 0; ny <= n_total; ++ny) all.push_back({static_cast<Level>(lv), nx, ny});
  std::vector<std::vector<SiteState>> out;
  std::vector<std::size_t> idx(static_cast<std::size_t>(n_sites), 0);
  for (;;) {
    std::vector<SiteState> cfg;
    int total = 0;
    for (auto i : idx) {
      cfg.push_back(all[i]);
      total += all[i].excitations();
    }
    if (total == n_total) out.push_back(cfg);
    int pos = n_sites - 1;
    while (pos >= 0 && ++idx[pos] == all.size()) idx[pos--] = 0;
    if (pos < 0) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t ix(const SectorBasis& b, std::vector<SiteState> cfg) {
  auto i = b.index_of(cfg);
  EXPECT_TRUE(i.has_value());
  return i.value_or(0);
}

}  // namespace

TEST(SiteStates, OneExcitation) {
  const auto s = site_states(1);
  ASSERT_EQ(s.size(), 4u);
  const std::vector<SiteState> expect{{Level::g, 0, 1}, {Level::g, 1, 0}, {Level::e1, 0, 0}, {Level::e2, 0, 0}};
  EXPECT_EQ(s, expect);
}

TEST(SiteStates, CountIsThreeNPlusOne) {
  for (int n = 0; n <= 6; ++n) {
    const auto s = site_states(n);
    EXPECT_EQ(s.size(), static_cast<std::size_t>(3 * n + 1));
    for (const auto& st : s) EXPECT_EQ(st.excitations(), n);
    EXPECT_TRUE(std::is_sorted(s.begin(), s.end()));
  }
}

TEST(Sector, MatchesBruteForce) {
  for (int sites = 1; sites <= 3; ++sites) {
    for (int n = 0; n <= 4; ++n) {
      const auto oracle = brute_force_sector(sites, n);
      const SectorBasis b(sites, n);
      ASSERT_EQ(b.dim(), oracle.size()) << sites << " sites, " << n;
      EXPECT_EQ(sector_dimension(sites, n), oracle.size());
      for (std::size_t i = 0; i < b.dim(); ++i) {
        const auto st = b.state(i);
        EXPECT_TRUE(std::equal(st.begin(), st.end(), oracle[i].begin()));
        EXPECT_EQ(b.index_of(st), i);
      }
    }
  }
}

TEST(Sector, ThreeSitesThreeExcitations) {
  EXPECT_EQ(sector_dimension(3, 3), 262u);
  EXPECT_EQ(SectorBasis(1, 2).dim(), 7u);
}

TEST(Sector, CapEnforced) {
  EXPECT_THROW(SectorBasis(4, 4, 100), NumericalError);
  EXPECT_THROW(enumerate_sector(3, 3, 261), NumericalError);
  EXPECT_EQ(enumerate_sector(3, 3, 262).dim(), 262u);
}

TEST(Sector, ForeignConfigurationNotFound) {
  const SectorBasis b(2, 2);
  const std::vector<SiteState> wrong{{Level::g, 1, 0}, {Level::g, 0, 0}};
  EXPECT_FALSE(b.index_of(wrong).has_value());
}

TEST(SiteOperators, NumberAndProjectors) {
  const SectorBasis b(1, 2);
  const auto nx = build_site_operator(b, 0, SiteOpKind::num_x);
  EXPECT_TRUE(nx.is_diagonal());
  const auto i = ix(b, {{Level::g, 1, 1}});
  EXPECT_DOUBLE_EQ(nx.element(i, i).real(), 1.0);
  const auto j = ix(b, {{Level::e1, 1, 0}});
  EXPECT_DOUBLE_EQ(build_site_operator(b, 0, SiteOpKind::proj_e1).element(j, j).real(), 1.0);
  EXPECT_DOUBLE_EQ(build_site_operator(b, 0, SiteOpKind::proj_e2).element(j, j).real(), 0.0);
}

TEST(SiteOperators, JaynesCummingsElements) {
  const SectorBasis b1(1, 1), b2(1, 2);
  const auto jc1 = build_site_operator(b1, 0, SiteOpKind::jc_x);
  EXPECT_DOUBLE_EQ(jc1.element(ix(b1, {{Level::e1, 0, 0}}), ix(b1, {{Level::g, 1, 0}})).real(), 1.0);
  const auto jc2 = build_site_operator(b2, 0, SiteOpKind::jc_x);
  EXPECT_DOUBLE_EQ(jc2.element(ix(b2, {{Level::e1, 1, 0}}), ix(b2, {{Level::g, 2, 0}})).real(), std::sqrt(2.0));
  EXPECT_EQ(jc2.hermiticity_error(), 0.0);
  // jc_y has no element touching |e1,0,0>.
  const auto jcy = build_site_operator(b1, 0, SiteOpKind::jc_y);
  const auto e1 = ix(b1, {{Level::e1, 0, 0}});
  for (const auto& e : jcy.entries()) {
    EXPECT_NE(e.row, e1);
    EXPECT_NE(e.col, e1);
  }
}

TEST(Hopping, SinglePhononMoves) {
  const SectorBasis b(2, 1);
  const auto h = build_hop_operator(b, 0, 1, Species::x);
  const auto from = ix(b, {{Level::g, 1, 0}, {Level::g, 0, 0}});
  const auto to = ix(b, {{Level::g, 0, 0}, {Level::g, 1, 0}});
  EXPECT_DOUBLE_EQ(h.element(to, from).real(), 1.0);
  EXPECT_DOUBLE_EQ(h.element(from, to).real(), 1.0);
}

TEST(Hopping, BosonicFactor) {
  const SectorBasis b(2, 2);
  const auto h = build_hop_operator(b, 0, 1, Species::x);
  const auto from = ix(b, {{Level::g, 2, 0}, {Level::g, 0, 0}});
  const auto to = ix(b, {{Level::g, 1, 0}, {Level::g, 1, 0}});
  EXPECT_DOUBLE_EQ(h.element(to, from).real(), std::sqrt(2.0));
}

TEST(Hopping, SpeciesIndependenceAndConservation) {
  const SectorBasis b(3, 3);
  const auto h = build_hop_operator(b, 0, 2, Species::x);
  for (const auto& e : h.entries()) {
    const auto r = b.state(e.row), c = b.state(e.col);
    for (int j = 0; j < 3; ++j) {
      EXPECT_EQ(r[j].n_y, c[j].n_y);
      EXPECT_EQ(r[j].level, c[j].level);
    }
  }
  EXPECT_EQ(h.hermiticity_error(), 0.0);
  EXPECT_LT(commutator_max_abs(h, total_excitation_operator(b)), 1e-13);
  EXPECT_GT(commutator_max_abs(h, site_excitation_operator(b, 0)), 0.5);
  EXPECT_THROW(build_hop_operator(b, 1, 1, Species::y), std::invalid_argument);
}

TEST(ExcitationOperators, TotalIsSectorConstant) {
  const SectorBasis b(3, 2);
  const auto n = total_excitation_operator(b);
  for (std::size_t i = 0; i < b.dim(); ++i) EXPECT_DOUBLE_EQ(n.element(i, i).real(), 2.0);
  auto sum = site_excitation_operator(b, 0);
  sum += site_excitation_operator(b, 1);
  sum += site_excitation_operator(b, 2);
  EXPECT_EQ((sum - n).max_abs(), 0.0);
}
