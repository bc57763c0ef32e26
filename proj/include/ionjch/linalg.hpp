#pragma once

#include <Eigen/Dense>
#include <cstddef>

#include "ionjch/sparse_operator.hpp"

namespace ionjch {

struct EigenPairs {
  Eigen::VectorXd values;    // ascending
  Eigen::MatrixXcd vectors;  // columns
};

inline constexpr std::size_t kDenseEigenThreshold = 2000;

EigenPairs dense_eigensystem(const SparseOperator& h);

/// Lowest k eigenpairs of a Hermitian operator by Lanczos with full
/// reorthogonalisation and locking; each pair is found in the complement of the
/// previously converged ones, so degenerate levels are resolved.
EigenPairs lanczos_lowest(const SparseOperator& h, int k, double tol = 1e-11, int max_krylov = 120);

/// Dense below the threshold, Lanczos above.
EigenPairs lowest_eigenpairs(const SparseOperator& h, int k, std::size_t dense_threshold = kDenseEigenThreshold);

}  // namespace ionjch
