#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "error.hpp"
#include "integrate.hpp"
#include "linalg.hpp"
#include "multiindex.hpp"
#include "phf.hpp"
#include "polynomial.hpp"

namespace homolevel {

/// g(x) = k v_d(x)^T Sigma v_d(x), with v_d the degree-d monomials and
/// k = n / (2 d l(d)). For d = 1 this is the Gaussian exponent x^T Sigma x / 2.
class SigmaForm {
public:
  SigmaForm(int d, int n, const Eigen::MatrixXd& sigma) : d_(d), n_(n), sigma_(MonomialBasis::pure(n, d), sigma) {
    if (d < 1 || n < 1) throw InputError("SigmaForm needs d >= 1 and n >= 1");
    if (!(sigma_.min_eigenvalue() > 0.0)) throw NumericalError(Failure::not_positive_definite, "Sigma is not positive definite");
    k_ = static_cast<double>(n) / (2.0 * d * static_cast<double>(ell(n, d)));
  }

  static SigmaForm identity(int d, int n) {
    const auto l = static_cast<Eigen::Index>(ell(n, d));
    return SigmaForm(d, n, Eigen::MatrixXd::Identity(l, l));
  }

  int d() const { return d_; }
  int n() const { return n_; }
  double k_const() const { return k_; }
  const SymMatrixView& sigma() const { return sigma_; }
  const MonomialBasis& basis() const { return sigma_.basis(); }

  /// The degree-2d exponent as a polynomial.
  HomoPoly form() const {
    const auto& B = basis();
    const auto P = MonomialBasis::pure(n_, 2 * d_);
    std::vector<double> c(P.size(), 0.0);
    for (std::size_t i = 0; i < B.size(); ++i)
      for (std::size_t j = 0; j < B.size(); ++j) c[P.index_of(B[i] + B[j])] += k_ * sigma_(i, j);
    return HomoPoly::from_coefficients(P, c);
  }

  /// log det Sigma from the eigenvalues.
  double log_det() const {
    double s = 0.0;
    for (double ev : sigma_.eigenvalues()) s += std::log(ev);
    return s;
  }

private:
  int d_, n_;
  SymMatrixView sigma_;
  double k_ = 0.0;
};

struct GaussLikeEval {
  double theta = 0.0;
  double integral = 0.0;  ///< integral of exp(-g)
  SymMatrixView M;        ///< d-moment matrix of the normalised density
  double trace_identity_residual = 0.0; ///< |<M, Sigma> - l(d)|
};

/// theta_d(Sigma) and M_d(Sigma) from one quadrature pass over all degree-2d moments.
inline GaussLikeEval gausslike_eval(const SigmaForm& sf, const QuadratureConfig& cfg = {}) {
  const auto& B = sf.basis();
  const auto P = MonomialBasis::pure(sf.n(), 2 * sf.d());
  std::vector<Multiindex> exps{Multiindex::zero(sf.n())};
  for (const auto& a : P.elements()) exps.push_back(a);
  const auto est = exp_moments(Phf::polynomial(sf.form()), exps, cfg);
  const double Z = est[0].value;
  const auto l = static_cast<Eigen::Index>(B.size());
  Eigen::MatrixXd M(l, l);
  for (Eigen::Index i = 0; i < l; ++i)
    for (Eigen::Index j = 0; j < l; ++j)
      M(i, j) = est[1 + P.index_of(B[static_cast<std::size_t>(i)] + B[static_cast<std::size_t>(j)])].value / Z;
  GaussLikeEval out{std::exp(sf.k_const() * sf.log_det()) * Z, Z, SymMatrixView(B, M), 0.0};
  out.trace_identity_residual = std::abs(out.M.matrix().cwiseProduct(sf.sigma().matrix()).sum() - static_cast<double>(l));
  return out;
}

/// theta_d(Sigma) = det(Sigma)^k * integral exp(-k v^T Sigma v).
inline double theta_d(const SigmaForm& sf, const QuadratureConfig& cfg = {}) {
  const double Z = nongauss_integral(Phf::constant(sf.n()), Phf::polynomial(sf.form()), cfg).value;
  return std::exp(sf.k_const() * sf.log_det()) * Z;
}

inline SymMatrixView dmoment_matrix(const SigmaForm& sf, const QuadratureConfig& cfg = {}) { return gausslike_eval(sf, cfg).M; }

/// d theta / d Sigma_ij treating the entries as independent: k theta (Sigma^{-1} - M).
/// A symmetric perturbation of an off-diagonal pair picks up twice the entry.
inline Eigen::MatrixXd theta_gradient(const SigmaForm& sf, const QuadratureConfig& cfg = {}) {
  const auto ev = gausslike_eval(sf, cfg);
  const Eigen::MatrixXd& S = sf.sigma().matrix();
  const Eigen::MatrixXd Sinv = S.llt().solve(Eigen::MatrixXd::Identity(S.rows(), S.cols()));
  return sf.k_const() * ev.theta * (Sinv - ev.M.matrix());
}

struct CriticalResult {
  SigmaForm sigma;
  double residual = 0.0;  ///< ||M(Sigma) - Sigma^{-1}||_F / ||Sigma^{-1}||_F
  int iterations = 0;     ///< moment-matrix evaluations
  bool converged = false;
  double theta = 0.0;
};

/// Damped fixed point Sigma <- (1 - tau) Sigma + tau M(Sigma)^{-1}. tau starts at 1 and
/// halves whenever a step loses positive definiteness or increases the residual.
/// Non-convergence is reported, not thrown.
inline CriticalResult find_critical_sigma(int d, int n, const SigmaForm& init, int max_iters = 200,
                                          const QuadratureConfig& cfg = {}, double tol = 1e-5) {
  if (init.d() != d || init.n() != n) throw InputError("initial Sigma does not match d and n");
  if (max_iters < 1) throw InputError("max_iters must be >= 1");
  auto residual_of = [&](const SigmaForm& sf, GaussLikeEval& ev) {
    ev = gausslike_eval(sf, cfg);
    const Eigen::MatrixXd& S = sf.sigma().matrix();
    const Eigen::MatrixXd Sinv = S.llt().solve(Eigen::MatrixXd::Identity(S.rows(), S.cols()));
    return (ev.M.matrix() - Sinv).norm() / Sinv.norm();
  };
  SigmaForm cur = init;
  GaussLikeEval ev{0.0, 0.0, init.sigma(), 0.0};
  double res = residual_of(cur, ev);
  int it = 1;
  double tau = 1.0;
  while (res > tol && it < max_iters && tau > 1e-8) {
    const Eigen::MatrixXd& S = cur.sigma().matrix();
    const Eigen::MatrixXd Minv = ev.M.matrix().llt().solve(Eigen::MatrixXd::Identity(S.rows(), S.cols()));
    Eigen::MatrixXd next = (1.0 - tau) * S + tau * Minv;
    next = 0.5 * (next + next.transpose()).eval();
    try {
      SigmaForm cand(d, n, next);
      GaussLikeEval cev{0.0, 0.0, init.sigma(), 0.0};
      const double cres = residual_of(cand, cev);
      ++it;
      if (cres < res) {
        cur = std::move(cand);
        ev = std::move(cev);
        res = cres;
      } else {
        tau *= 0.5;
      }
    } catch (const NumericalError& e) {
      if (e.kind() != Failure::not_positive_definite) throw;
      tau *= 0.5;
    }
  }
  return CriticalResult{cur, res, it, res <= tol, ev.theta};
}

} // namespace homolevel
