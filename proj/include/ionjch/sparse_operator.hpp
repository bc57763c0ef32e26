#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <complex>
#include <cstddef>
#include <iosfwd>
#include <vector>

namespace ionjch {

using cplx = std::complex<double>;

struct Entry {
  std::size_t row = 0;
  std::size_t col = 0;
  cplx value;
};

/// Coordinate-list operator. Entries are kept sorted row-major, merged, and free of
/// values with magnitude below kDropTolerance.
class SparseOperator {
 public:
  static constexpr double kDropTolerance = 1e-15;

  SparseOperator() = default;
  explicit SparseOperator(std::size_t dim) : dim_(dim) {}

  static SparseOperator from_triplets(std::size_t dim, std::vector<Entry> entries);
  static SparseOperator identity(std::size_t dim);

  std::size_t dim() const { return dim_; }
  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t nnz() const { return entries_.size(); }

  cplx element(std::size_t row, std::size_t col) const;
  double max_abs() const;
  bool is_diagonal() const;
  /// max |A - A^dagger| over all entries.
  double hermiticity_error() const;

  SparseOperator adjoint() const;
  Eigen::SparseMatrix<cplx> to_eigen() const;
  Eigen::MatrixXcd to_dense() const;
  Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const;

  SparseOperator& operator+=(const SparseOperator& other);
  SparseOperator& operator*=(cplx s);

 private:
  std::size_t dim_ = 0;
  std::vector<Entry> entries_;
};

SparseOperator operator+(SparseOperator a, const SparseOperator& b);
SparseOperator operator-(SparseOperator a, const SparseOperator& b);
SparseOperator operator*(cplx s, SparseOperator a);
SparseOperator operator*(const SparseOperator& a, const SparseOperator& b);

/// max |[A, B]| entry.
double commutator_max_abs(const SparseOperator& a, const SparseOperator& b);

/// Text dump: "# dim N" header then one "row col re im" line per entry.
void write_triplets(std::ostream& os, const SparseOperator& op);
SparseOperator read_triplets(std::istream& is);

}  // namespace ionjch
