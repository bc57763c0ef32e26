#include "ionjch/spin_ops.hpp"

#include <cmath>
#include <stdexcept>

namespace ionjch {

SpinSpace::SpinSpace(int n_sites, int local_dim) : n_sites_(n_sites), d_(local_dim), dim_(1) {
  if (n_sites < 1 || local_dim < 2) throw std::invalid_argument("SpinSpace: bad shape");
  stride_.assign(static_cast<std::size_t>(n_sites), 1);
  for (int j = n_sites - 1; j >= 0; --j) {
    stride_[j] = dim_;
    dim_ *= static_cast<std::size_t>(local_dim);
  }
}

int SpinSpace::local(std::size_t index, int site) const {
  return static_cast<int>((index / stride_[site]) % static_cast<std::size_t>(d_));
}

std::size_t SpinSpace::with_local(std::size_t index, int site, int value) const {
  const int old = local(index, site);
  return index + (static_cast<std::size_t>(value) - static_cast<std::size_t>(old)) * stride_[site];
}

std::size_t SpinSpace::index_of(const std::vector<int>& locals) const {
  if (static_cast<int>(locals.size()) != n_sites_) throw std::invalid_argument("SpinSpace::index_of: size");
  std::size_t idx = 0;
  for (int j = 0; j < n_sites_; ++j) {
    if (locals[j] < 0 || locals[j] >= d_) throw std::out_of_range("SpinSpace::index_of: local state");
    idx += static_cast<std::size_t>(locals[j]) * stride_[j];
  }
  return idx;
}

namespace spin_half {
Eigen::Matrix2cd sigma_x() { return (Eigen::Matrix2cd() << 0, 1, 1, 0).finished(); }
Eigen::Matrix2cd sigma_y() {
  return (Eigen::Matrix2cd() << 0, cplx(0, -1), cplx(0, 1), 0).finished();
}
Eigen::Matrix2cd sigma_z() { return (Eigen::Matrix2cd() << 1, 0, 0, -1).finished(); }
}  // namespace spin_half

namespace spin_one {
Eigen::Matrix3cd sz() { return Eigen::Vector3cd(1, 0, -1).asDiagonal(); }
Eigen::Matrix3cd splus() {
  Eigen::Matrix3cd m = Eigen::Matrix3cd::Zero();
  m(0, 1) = m(1, 2) = std::sqrt(2.0);
  return m;
}
Eigen::Matrix3cd sminus() { return splus().adjoint(); }
Eigen::Matrix3cd sx() { return 0.5 * (splus() + sminus()); }
Eigen::Matrix3cd sy() { return cplx(0, 0.5) * (sminus() - splus()); }
Eigen::Matrix3cd hubbard(int a, int b) {
  if (std::abs(a) > 1 || std::abs(b) > 1) throw std::out_of_range("hubbard: label outside {1,0,-1}");
  Eigen::Matrix3cd m = Eigen::Matrix3cd::Zero();
  m(1 - a, 1 - b) = 1.0;
  return m;
}
}  // namespace spin_one

void TermAccumulator::add_one(int j, const Eigen::MatrixXcd& a, cplx coeff) {
  if (coeff == cplx(0.0)) return;
  const int d = space_.local_dim();
  for (std::size_t i = 0; i < space_.dim(); ++i) {
    const int c = space_.local(i, j);
    for (int r = 0; r < d; ++r) {
      const cplx v = a(r, c);
      if (v == cplx(0.0)) continue;
      entries_.push_back({space_.with_local(i, j, r), i, coeff * v});
    }
  }
}

void TermAccumulator::add_two(int j, const Eigen::MatrixXcd& a, int k, const Eigen::MatrixXcd& b, cplx coeff) {
  if (j == k) throw std::invalid_argument("two_site_term: j == k");
  if (coeff == cplx(0.0)) return;
  const int d = space_.local_dim();
  for (std::size_t i = 0; i < space_.dim(); ++i) {
    const int cj = space_.local(i, j);
    const int ck = space_.local(i, k);
    for (int rj = 0; rj < d; ++rj) {
      const cplx va = a(rj, cj);
      if (va == cplx(0.0)) continue;
      const std::size_t partial = space_.with_local(i, j, rj);
      for (int rk = 0; rk < d; ++rk) {
        const cplx vb = b(rk, ck);
        if (vb == cplx(0.0)) continue;
        entries_.push_back({space_.with_local(partial, k, rk), i, coeff * va * vb});
      }
    }
  }
}

void TermAccumulator::add_constant(double c) {
  if (c == 0.0) return;
  for (std::size_t i = 0; i < space_.dim(); ++i) entries_.push_back({i, i, c});
}

SparseOperator TermAccumulator::build() const { return SparseOperator::from_triplets(space_.dim(), entries_); }

SparseOperator one_site_term(const SpinSpace& space, int j, const Eigen::MatrixXcd& a, cplx coeff) {
  TermAccumulator acc(space);
  acc.add_one(j, a, coeff);
  return acc.build();
}

SparseOperator two_site_term(const SpinSpace& space, int j, const Eigen::MatrixXcd& a, int k,
                             const Eigen::MatrixXcd& b, cplx coeff) {
  TermAccumulator acc(space);
  acc.add_two(j, a, k, b, coeff);
  return acc.build();
}

SparseOperator total_sz(const SpinSpace& space) {
  const int d = space.local_dim();
  Eigen::MatrixXcd sz = Eigen::MatrixXcd::Zero(d, d);
  for (int m = 0; m < d; ++m) sz(m, m) = 0.5 * (d - 1 - 2 * m);
  TermAccumulator acc(space);
  for (int j = 0; j < space.n_sites(); ++j) acc.add_one(j, sz, 1.0);
  return acc.build();
}

}  // namespace ionjch
