#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "error.hpp"
#include "multiindex.hpp"

namespace homolevel {

/// Dense symmetric matrix whose rows and columns are indexed by a monomial basis.
class SymMatrixView {
public:
  SymMatrixView(MonomialBasis basis, Eigen::MatrixXd m) : basis_(std::move(basis)), m_(std::move(m)) {
    const auto s = static_cast<Eigen::Index>(basis_.size());
    if (m_.rows() != s || m_.cols() != s) throw InputError("matrix size does not match basis size");
    m_ = 0.5 * (m_ + m_.transpose()).eval();
  }

  const MonomialBasis& basis() const { return basis_; }
  const Eigen::MatrixXd& matrix() const { return m_; }
  std::size_t size() const { return basis_.size(); }
  double operator()(std::size_t i, std::size_t j) const {
    return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

  Eigen::VectorXd eigenvalues() const { return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m_, Eigen::EigenvaluesOnly).eigenvalues(); }

  double min_eigenvalue() const { return size() == 0 ? 0.0 : eigenvalues()(0); }

  /// Spectral norm ||M||_2.
  double norm2() const {
    if (size() == 0) return 0.0;
    const auto ev = eigenvalues();
    return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
  }

  /// PSD up to float noise: smallest eigenvalue >= -rel_tol * ||M||_2.
  bool is_psd(double rel_tol = 1e-8) const {
    if (size() == 0) return true;
    const auto ev = eigenvalues();
    const double nrm = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
    return ev(0) >= -rel_tol * nrm;
  }

private:
  MonomialBasis basis_;
  Eigen::MatrixXd m_;
};

/// Lawson-Hanson active-set solution of min ||A x - b||_2 subject to x >= 0.
inline Eigen::VectorXd nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, int max_iter = 0) {
  const Eigen::Index n = A.cols();
  if (A.rows() != b.size()) throw InputError("nnls: dimension mismatch");
  if (max_iter <= 0) max_iter = 3 * static_cast<int>(n) + 30;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  std::vector<bool> passive(static_cast<std::size_t>(n), false);
  const double tol = 1e-12 * std::max(1.0, A.cwiseAbs().maxCoeff()) * std::max(1.0, b.cwiseAbs().maxCoeff());

  auto solve_passive = [&](Eigen::VectorXd& z) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = 0; j < n; ++j)
      if (passive[static_cast<std::size_t>(j)]) idx.push_back(j);
    z.setZero(n);
    if (idx.empty()) return;
    Eigen::MatrixXd Ap(A.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t c = 0; c < idx.size(); ++c) Ap.col(static_cast<Eigen::Index>(c)) = A.col(idx[c]);
    const Eigen::VectorXd zp = Ap.completeOrthogonalDecomposition().solve(b);
    for (std::size_t c = 0; c < idx.size(); ++c) z(idx[c]) = zp(static_cast<Eigen::Index>(c));
  };

  for (int outer = 0; outer < max_iter; ++outer) {
    const Eigen::VectorXd w = A.transpose() * (b - A * x);
    Eigen::Index best = -1;
    double wmax = tol;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!passive[static_cast<std::size_t>(j)] && w(j) > wmax) {
        wmax = w(j);
        best = j;
      }
    }
    if (best < 0) break;
    passive[static_cast<std::size_t>(best)] = true;
    Eigen::VectorXd z;
    for (int inner = 0; inner <= n; ++inner) {
      solve_passive(z);
      bool feasible = true;
      for (Eigen::Index j = 0; j < n; ++j)
        if (passive[static_cast<std::size_t>(j)] && z(j) <= 0.0) feasible = false;
      if (feasible) break;
      double alpha = 1.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)] && z(j) <= 0.0) alpha = std::min(alpha, x(j) / (x(j) - z(j)));
      }
      x += alpha * (z - x);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)] && std::abs(x(j)) <= 1e-14) {
          passive[static_cast<std::size_t>(j)] = false;
          x(j) = 0.0;
        }
      }
    }
    x = z.cwiseMax(0.0);
  }
  return x;
}

} // namespace homolevel
