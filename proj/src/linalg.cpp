#include "ionjch/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "ionjch/errors.hpp"

namespace ionjch {

EigenPairs dense_eigensystem(const SparseOperator& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.to_dense());
  if (es.info() != Eigen::Success) throw NumericalError("dense eigensolver failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

namespace {

void project_out(Eigen::VectorXcd& v, const std::vector<Eigen::VectorXcd>& basis) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& b : basis) v -= b * b.dot(v);
  }
}

}  // namespace

EigenPairs lanczos_lowest(const SparseOperator& h, int k, double tol, int max_krylov) {
  const auto n = static_cast<Eigen::Index>(h.dim());
  if (k < 1 || k > n) throw std::invalid_argument("lanczos_lowest: bad k");
  const auto hm = h.to_eigen();
  const double scale = std::max(h.max_abs(), 1e-300);

  std::mt19937_64 rng(12345);
  std::normal_distribution<double> normal;
  std::vector<Eigen::VectorXcd> locked;
  std::vector<double> values;

  for (int target = 0; target < k; ++target) {
    Eigen::VectorXcd start(n);
    for (Eigen::Index i = 0; i < n; ++i) start(i) = {normal(rng), normal(rng)};
    project_out(start, locked);
    start.normalize();

    bool converged = false;
    double ritz_value = 0.0;
    Eigen::VectorXcd ritz_vector = start;
    for (int restart = 0; restart < 200 && !converged; ++restart) {
      const int m_max = static_cast<int>(std::min<Eigen::Index>(max_krylov, n - static_cast<Eigen::Index>(locked.size())));
      std::vector<Eigen::VectorXcd> q{ritz_vector};
      std::vector<double> alpha, beta;
      for (int j = 0; j < m_max; ++j) {
        Eigen::VectorXcd w = hm * q[j];
        alpha.push_back(q[j].dot(w).real());
        // Full reorthogonalisation against the Krylov basis and locked vectors.
        for (int pass = 0; pass < 2; ++pass) {
          for (const auto& qi : q) w -= qi * qi.dot(w);
        }
        project_out(w, locked);
        const double b = w.norm();
        const int m = j + 1;
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
        for (int i = 0; i < m; ++i) {
          t(i, i) = alpha[i];
          if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[i];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
        const double residual = b * std::abs(es.eigenvectors()(m - 1, 0));
        if (residual < tol * scale || b < 1e-14 * scale || j + 1 == m_max) {
          ritz_value = es.eigenvalues()(0);
          ritz_vector = Eigen::VectorXcd::Zero(n);
          for (int i = 0; i < m; ++i) ritz_vector += es.eigenvectors()(i, 0) * q[i];
          project_out(ritz_vector, locked);
          ritz_vector.normalize();
          converged = residual < tol * scale || b < 1e-14 * scale;
          break;
        }
        beta.push_back(b);
        q.push_back(w / b);
      }
    }
    if (!converged) throw NumericalError("lanczos_lowest: no convergence");
    locked.push_back(ritz_vector);
    values.push_back(ritz_value);
  }

  std::vector<int> order(values.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return values[a] < values[b]; });
  EigenPairs out{Eigen::VectorXd(k), Eigen::MatrixXcd(n, k)};
  for (int i = 0; i < k; ++i) {
    out.values(i) = values[order[i]];
    out.vectors.col(i) = locked[order[i]];
  }
  return out;
}

EigenPairs lowest_eigenpairs(const SparseOperator& h, int k, std::size_t dense_threshold) {
  if (h.dim() < dense_threshold) {
    auto all = dense_eigensystem(h);
    return {all.values.head(k), all.vectors.leftCols(k)};
  }
  return lanczos_lowest(h, k);
}

}  // namespace ionjch
