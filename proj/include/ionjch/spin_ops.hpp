#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "ionjch/sparse_operator.hpp"

namespace ionjch {

/// Tensor-product space of n_sites spins with local dimension d. Site 0 is the
/// most significant digit of the index; local index 0 is the highest S^z.
class SpinSpace {
 public:
  SpinSpace(int n_sites, int local_dim);

  int n_sites() const { return n_sites_; }
  int local_dim() const { return d_; }
  std::size_t dim() const { return dim_; }

  int local(std::size_t index, int site) const;
  std::size_t with_local(std::size_t index, int site, int value) const;
  std::size_t index_of(const std::vector<int>& locals) const;

 private:
  int n_sites_;
  int d_;
  std::size_t dim_;
  std::vector<std::size_t> stride_;
};

namespace spin_half {
// Basis order (up, down).
Eigen::Matrix2cd sigma_x();
Eigen::Matrix2cd sigma_y();
Eigen::Matrix2cd sigma_z();
}  // namespace spin_half

namespace spin_one {
// Basis order (+1, 0, -1).
Eigen::Matrix3cd sz();
Eigen::Matrix3cd splus();
Eigen::Matrix3cd sminus();
Eigen::Matrix3cd sx();
Eigen::Matrix3cd sy();
/// Hubbard operator X^{ab} = |a><b| for a, b in {+1, 0, -1}.
Eigen::Matrix3cd hubbard(int a, int b);
}  // namespace spin_one

/// coeff * A_j as an operator on the full space.
SparseOperator one_site_term(const SpinSpace& space, int j, const Eigen::MatrixXcd& a, cplx coeff = 1.0);
/// coeff * A_j B_k, j != k.
SparseOperator two_site_term(const SpinSpace& space, int j, const Eigen::MatrixXcd& a, int k,
                             const Eigen::MatrixXcd& b, cplx coeff = 1.0);

/// sum_j S^z_j with S^z = diag(d-1, d-3, ..., 1-d)/2.
SparseOperator total_sz(const SpinSpace& space);

/// Accumulates terms and merges once at the end.
class TermAccumulator {
 public:
  explicit TermAccumulator(const SpinSpace& space) : space_(space) {}
  void add_one(int j, const Eigen::MatrixXcd& a, cplx coeff);
  void add_two(int j, const Eigen::MatrixXcd& a, int k, const Eigen::MatrixXcd& b, cplx coeff);
  void add_constant(double c);
  SparseOperator build() const;

 private:
  const SpinSpace& space_;
  std::vector<Entry> entries_;
};

}  // namespace ionjch
