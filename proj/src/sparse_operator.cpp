#include "ionjch/sparse_operator.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace ionjch {

SparseOperator SparseOperator::from_triplets(std::size_t dim, std::vector<Entry> entries) {
  for (const auto& e : entries) {
    if (e.row >= dim || e.col >= dim) throw std::out_of_range("SparseOperator: entry outside dim");
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  SparseOperator op(dim);
  op.entries_.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size();) {
    Entry merged = entries[i];
    std::size_t j = i + 1;
    for (; j < entries.size() && entries[j].row == merged.row && entries[j].col == merged.col; ++j) {
      merged.value += entries[j].value;
    }
    if (std::abs(merged.value) >= kDropTolerance) op.entries_.push_back(merged);
    i = j;
  }
  return op;
}

SparseOperator SparseOperator::identity(std::size_t dim) {
  std::vector<Entry> e;
  e.reserve(dim);
  for (std::size_t i = 0; i < dim; ++i) e.push_back({i, i, 1.0});
  return from_triplets(dim, std::move(e));
}

cplx SparseOperator::element(std::size_t row, std::size_t col) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), std::pair{row, col},
                             [](const Entry& e, const std::pair<std::size_t, std::size_t>& key) {
                               return e.row != key.first ? e.row < key.first : e.col < key.second;
                             });
  if (it != entries_.end() && it->row == row && it->col == col) return it->value;
  return 0.0;
}

double SparseOperator::max_abs() const {
  double m = 0.0;
  for (const auto& e : entries_) m = std::max(m, std::abs(e.value));
  return m;
}

bool SparseOperator::is_diagonal() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const Entry& e) { return e.row == e.col; });
}

double SparseOperator::hermiticity_error() const { return (*this - adjoint()).max_abs(); }

SparseOperator SparseOperator::adjoint() const {
  std::vector<Entry> e;
  e.reserve(entries_.size());
  for (const auto& x : entries_) e.push_back({x.col, x.row, std::conj(x.value)});
  return from_triplets(dim_, std::move(e));
}

Eigen::SparseMatrix<cplx> SparseOperator::to_eigen() const {
  std::vector<Eigen::Triplet<cplx>> t;
  t.reserve(entries_.size());
  for (const auto& e : entries_) {
    t.emplace_back(static_cast<int>(e.row), static_cast<int>(e.col), e.value);
  }
  Eigen::SparseMatrix<cplx> m(static_cast<Eigen::Index>(dim_), static_cast<Eigen::Index>(dim_));
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

Eigen::MatrixXcd SparseOperator::to_dense() const {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim_), static_cast<Eigen::Index>(dim_));
  for (const auto& e : entries_) m(static_cast<Eigen::Index>(e.row), static_cast<Eigen::Index>(e.col)) = e.value;
  return m;
}

Eigen::VectorXcd SparseOperator::apply(const Eigen::VectorXcd& v) const {
  if (static_cast<std::size_t>(v.size()) != dim_) throw std::invalid_argument("SparseOperator::apply: size");
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(v.size());
  for (const auto& e : entries_) {
    out(static_cast<Eigen::Index>(e.row)) += e.value * v(static_cast<Eigen::Index>(e.col));
  }
  return out;
}

SparseOperator& SparseOperator::operator+=(const SparseOperator& other) {
  if (other.dim_ != dim_) throw std::invalid_argument("SparseOperator: dimension mismatch");
  std::vector<Entry> e = entries_;
  e.insert(e.end(), other.entries_.begin(), other.entries_.end());
  *this = from_triplets(dim_, std::move(e));
  return *this;
}

SparseOperator& SparseOperator::operator*=(cplx s) {
  std::vector<Entry> e = entries_;
  for (auto& x : e) x.value *= s;
  *this = from_triplets(dim_, std::move(e));
  return *this;
}

SparseOperator operator+(SparseOperator a, const SparseOperator& b) { return a += b; }
SparseOperator operator-(SparseOperator a, const SparseOperator& b) { return a += (-1.0 * b); }
SparseOperator operator*(cplx s, SparseOperator a) { return a *= s; }

SparseOperator operator*(const SparseOperator& a, const SparseOperator& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("SparseOperator: dimension mismatch");
  const Eigen::SparseMatrix<cplx> p = a.to_eigen() * b.to_eigen();
  std::vector<Entry> e;
  e.reserve(static_cast<std::size_t>(p.nonZeros()));
  for (int k = 0; k < p.outerSize(); ++k) {
    for (Eigen::SparseMatrix<cplx>::InnerIterator it(p, k); it; ++it) {
      e.push_back({static_cast<std::size_t>(it.row()), static_cast<std::size_t>(it.col()), it.value()});
    }
  }
  return SparseOperator::from_triplets(a.dim(), std::move(e));
}

double commutator_max_abs(const SparseOperator& a, const SparseOperator& b) {
  return (a * b - b * a).max_abs();
}

void write_triplets(std::ostream& os, const SparseOperator& op) {
  os << "# dim " << op.dim() << '\n';
  char buf[96];
  for (const auto& e : op.entries()) {
    std::snprintf(buf, sizeof(buf), "%zu %zu %.17g %.17g\n", e.row, e.col, e.value.real(), e.value.imag());
    os << buf;
  }
}

SparseOperator read_triplets(std::istream& is) {
  std::string line;
  std::size_t dim = 0;
  bool have_dim = false;
  std::vector<Entry> entries;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    if (line[0] == '#') {
      std::string hash, key;
      ls >> hash >> key;
      if (key == "dim" && (ls >> dim)) have_dim = true;
      continue;
    }
    Entry e;
    double re = 0.0, im = 0.0;
    if (!(ls >> e.row >> e.col >> re >> im)) throw std::runtime_error("read_triplets: bad line '" + line + "'");
    e.value = {re, im};
    entries.push_back(e);
  }
  if (!have_dim) throw std::runtime_error("read_triplets: missing '# dim' header");
  return SparseOperator::from_triplets(dim, std::move(entries));
}

}  // namespace ionjch
