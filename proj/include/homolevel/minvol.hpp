#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "error.hpp"
#include "integrate.hpp"
#include "linalg.hpp"
#include "moments.hpp"
#include "multiindex.hpp"
#include "phf.hpp"
#include "polynomial.hpp"

namespace homolevel {

/// Find g of degree 2d minimising the integral of exp(-g) subject to g <= 1 on K.
struct MinVolProblem {
  int n = 0;
  int two_d = 2;
  BodyK K;
  std::optional<MomentSeq> z;  ///< Lebesgue moments of K (inner hierarchy)
  std::vector<Polynomial> u_list; ///< inequalities u_j >= 0 describing K (outer hierarchy)

  MinVolProblem(BodyK body, int two_d_) : n(body.dim()), two_d(two_d_), K(std::move(body)), u_list(K.u_list()) {
    if (two_d < 2 || two_d % 2 != 0) throw InputError("two_d must be an even integer >= 2");
  }

  int d() const { return two_d / 2; }
  MonomialBasis coefficient_basis() const { return MonomialBasis::pure(n, two_d); }

  /// Moments up to `degree`, computing (or extending) them when needed.
  const MomentSeq& moments(int degree) {
    if (!z || z->max_degree() < degree) z = lebesgue_moments(K, degree);
    return *z;
  }
};

struct MinVolOptions {
  double nu0 = 1.0;
  double nu_factor = 4.0;
  double gap_tol = 1e-6;       ///< stop once (barrier degree)/nu < gap_tol
  double newton_tol = 1e-10;   ///< centring: decrement^2 / 2 below this
  int max_newton = 200;        ///< Newton steps per centring stage
  double coeff_wall = 1e6;     ///< |g_alpha| < wall, enforced by a log barrier
};

/// F(g) = integral of exp(-g); +inf when g is not coercive on the sphere nodes.
inline double objective_F(const HomoPoly& g, const QuadratureConfig& cfg = {}) {
  const Phf ph = Phf::polynomial(g);
  if (check_sublevel_bounded(ph, 64).verdict != BoundednessReport::Verdict::bounded) return std::numeric_limits<double>::infinity();
  try {
    return nongauss_integral(Phf::constant(g.dim()), ph, cfg).value;
  } catch (const NumericalError& e) {
    if (e.kind() == Failure::not_coercive) return std::numeric_limits<double>::infinity();
    throw;
  }
}

/// dF/dg_alpha = -integral of x^alpha exp(-g), alpha over the pure basis of degree deg g.
inline std::vector<double> objective_grad(const HomoPoly& g, const QuadratureConfig& cfg = {}) {
  const auto basis = MonomialBasis::pure(g.dim(), g.degree());
  const auto est = exp_moments(Phf::polynomial(g), basis.elements(), cfg);
  std::vector<double> out(basis.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = -est[i].value;
  return out;
}

/// d^2F/dg_alpha dg_beta = integral of x^{alpha+beta} exp(-g).
inline SymMatrixView objective_hess(const HomoPoly& g, const QuadratureConfig& cfg = {}) {
  const auto basis = MonomialBasis::pure(g.dim(), g.degree());
  const auto quad = MonomialBasis::pure(g.dim(), 2 * g.degree());
  const auto est = exp_moments(Phf::polynomial(g), quad.elements(), cfg);
  const auto L = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd H(L, L);
  for (Eigen::Index i = 0; i < L; ++i)
    for (Eigen::Index j = i; j < L; ++j)
      H(i, j) = H(j, i) = est[quad.index_of(basis[static_cast<std::size_t>(i)] + basis[static_cast<std::size_t>(j)])].value;
  return SymMatrixView(basis, std::move(H));
}

namespace detail {

/// F, its gradient and Hessian in the coefficients of g from one quadrature pass.
/// Returns false when g is not coercive.
struct FDerivs {
  double F = 0.0;
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;
};

class FEvaluator {
public:
  FEvaluator(int n, int two_d, const QuadratureConfig& cfg)
      : n_(n), basis_(MonomialBasis::pure(n, two_d)), quad_(MonomialBasis::pure(n, 2 * two_d)), cfg_(cfg) {
    exps_.push_back(Multiindex::zero(n));
    for (const auto& a : basis_.elements()) exps_.push_back(a);
    for (const auto& a : quad_.elements()) exps_.push_back(a);
    const auto L = basis_.size();
    pair_.resize(L * L);
    for (std::size_t i = 0; i < L; ++i)
      for (std::size_t j = 0; j < L; ++j) pair_[i * L + j] = 1 + L + quad_.index_of(basis_[i] + basis_[j]);
  }

  const MonomialBasis& basis() const { return basis_; }

  HomoPoly poly(const Eigen::VectorXd& c) const {
    return HomoPoly::from_coefficients(basis_, std::span<const double>(c.data(), static_cast<std::size_t>(c.size())));
  }

  std::optional<double> value(const Eigen::VectorXd& c) const {
    try {
      return nongauss_integral(Phf::constant(n_), Phf::polynomial(poly(c)), cfg_).value;
    } catch (const NumericalError& e) {
      if (e.kind() == Failure::not_coercive) return std::nullopt;
      throw;
    }
  }

  std::optional<FDerivs> derivs(const Eigen::VectorXd& c) const {
    std::vector<IntegralEstimate> m;
    try {
      m = exp_moments(Phf::polynomial(poly(c)), exps_, cfg_);
    } catch (const NumericalError& e) {
      if (e.kind() == Failure::not_coercive) return std::nullopt;
      throw;
    }
    const auto L = static_cast<Eigen::Index>(basis_.size());
    FDerivs r;
    r.F = m[0].value;
    r.grad.resize(L);
    r.hess.resize(L, L);
    for (Eigen::Index i = 0; i < L; ++i) {
      r.grad(i) = -m[1 + static_cast<std::size_t>(i)].value;
      for (Eigen::Index j = 0; j < L; ++j)
        r.hess(i, j) = m[pair_[static_cast<std::size_t>(i * L + j)]].value;
    }
    return r;
  }

private:
  int n_;
  MonomialBasis basis_, quad_;
  QuadratureConfig cfg_;
  std::vector<Multiindex> exps_;
  std::vector<std::size_t> pair_;
};

inline void check_solver_inputs(const MinVolProblem& prob, int k, const QuadratureConfig& cfg) {
  if (prob.n > 3) throw InputError("the minimum-volume solvers support n <= 3");
  if (k < prob.d()) throw InputError("relaxation order k must be >= d = two_d/2");
  if (cfg.method != Method::sphere_product_gauss)
    throw InputError("the minimum-volume solvers need deterministic quadrature (sphere-product-gauss)");
}

/// Coefficient wall -sum log(W^2 - c^2): value, gradient and diagonal Hessian.
inline std::optional<double> wall_value(const Eigen::VectorXd& c, double W) {
  double v = 0.0;
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    const double s = W * W - c(i) * c(i);
    if (!(s > 0.0)) return std::nullopt;
    v -= std::log(s);
  }
  return v;
}

inline void wall_add_derivs(const Eigen::VectorXd& c, double W, Eigen::VectorXd& grad, Eigen::MatrixXd& hess, Eigen::Index offset = 0) {
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    const double s = W * W - c(i) * c(i);
    grad(offset + i) += 2.0 * c(i) / s;
    hess(offset + i, offset + i) += 2.0 * (W * W + c(i) * c(i)) / (s * s);
  }
}

// Decrement below which an Armijo test on phi is decided by rounding alone.
inline double rounding_floor(double phi) { return 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(phi)); }

inline std::optional<double> logdet_pd(const Eigen::MatrixXd& S) {
  Eigen::LLT<Eigen::MatrixXd> llt(S);
  if (llt.info() != Eigen::Success) return std::nullopt;
  const Eigen::MatrixXd& L = llt.matrixLLT();
  double v = 0.0;
  for (Eigen::Index i = 0; i < L.rows(); ++i) {
    if (!(L(i, i) > 0.0)) return std::nullopt;
    v += 2.0 * std::log(L(i, i));
  }
  return v;
}

/// Slater point g0 = ||x||^{2d} / M with M = 2 max_K ||x||^{2d}.
inline Eigen::VectorXd slater_start(const MinVolProblem& prob, const MonomialBasis& basis) {
  const double M = 2.0 * std::pow(prob.K.max_norm(), prob.two_d);
  const HomoPoly g0 = HomoPoly::norm_power(prob.n, prob.d()) * (1.0 / M);
  const auto c = g0.coefficients(basis);
  return Eigen::Map<const Eigen::VectorXd>(c.data(), static_cast<Eigen::Index>(c.size()));
}

} // namespace detail

/// Dual certificate of the inner relaxation: Delta = (1/nu) S^{-1} with
/// S = M_k(1 - g, z), and sigma*(x) = v_k(x)^T Delta v_k(x).
struct KktCertificate {
  SymMatrixView Delta;
  Polynomial sigma;
  double delta_min_eigenvalue = 0.0;
  double complementarity_gap = 0.0; ///< <Delta, S> = s(k)/nu at the centre
  double gradient_residual = 0.0;   ///< max_alpha |m_alpha - <Delta, M_k(x^alpha z)>|
  double rho_identity_gap = 0.0;    ///< |rho - (2d/n) integral sigma* dmu| / rho
  double sigma_mass = 0.0;          ///< integral sigma* dmu = <Delta, M_k(z)>
};

struct InnerResult {
  double rho = 0.0;
  double vol = 0.0;
  HomoPoly g;
  std::vector<double> coefficients;
  KktCertificate cert;
  int iterations = 0; ///< total Newton steps
  int stages = 0;     ///< barrier parameter updates
  double nu = 0.0;
  bool wall_hit = false;
};

/// Inner relaxation of order k: minimise F(g) subject to M_k(1 - g, z) PSD, by
/// path following on nu F(g) - log det M_k(1 - g, z).
inline InnerResult solve_inner(MinVolProblem& prob, int k, const QuadratureConfig& cfg = {}, const MinVolOptions& opt = {}) {
  detail::check_solver_inputs(prob, k, cfg);
  const int n = prob.n;
  const MomentSeq& z = prob.moments(2 * k + prob.two_d);
  const detail::FEvaluator fe(n, prob.two_d, cfg);
  const MonomialBasis& P = fe.basis();
  const auto L = static_cast<Eigen::Index>(P.size());

  const Eigen::MatrixXd A0 = moment_matrix(z, k).matrix();
  std::vector<Eigen::MatrixXd> A;
  for (const auto& a : P.elements()) A.push_back(localizing_matrix(Polynomial::monomial(a), z, k).matrix());
  const auto s = static_cast<double>(A0.rows());
  auto S_of = [&](const Eigen::VectorXd& c) {
    Eigen::MatrixXd S = A0;
    for (Eigen::Index i = 0; i < L; ++i) S -= c(i) * A[static_cast<std::size_t>(i)];
    return S;
  };

  Eigen::VectorXd c = detail::slater_start(prob, P);
  if (!detail::logdet_pd(S_of(c)) || !fe.value(c))
    throw NumericalError(Failure::infeasible_start, "the start ||x||^2d / M is not strictly feasible for M_k(1-g, z)");

  const double W = opt.coeff_wall;
  double nu = opt.nu0;
  int iterations = 0, stages = 0;
  auto phi = [&](const Eigen::VectorXd& x) -> std::optional<double> {
    const auto ld = detail::logdet_pd(S_of(x));
    if (!ld) return std::nullopt;
    const auto wall = detail::wall_value(x, W);
    if (!wall) return std::nullopt;
    const auto F = fe.value(x);
    if (!F) return std::nullopt;
    return nu * *F - *ld + *wall;
  };

  for (;;) {
    int steps = 0, polish = 0;
    for (;; ++steps) {
      if (steps >= opt.max_newton) throw NumericalError(Failure::newton_stall, "centring did not converge at nu = " + std::to_string(nu));
      const auto D = fe.derivs(c);
      if (!D) throw NumericalError(Failure::not_coercive, "iterate left the coercive cone");
      const Eigen::MatrixXd Sinv = S_of(c).llt().solve(Eigen::MatrixXd::Identity(A0.rows(), A0.cols()));
      Eigen::VectorXd grad = nu * D->grad;
      Eigen::MatrixXd hess = nu * D->hess;
      std::vector<Eigen::MatrixXd> SA(static_cast<std::size_t>(L));
      for (Eigen::Index i = 0; i < L; ++i) {
        SA[static_cast<std::size_t>(i)] = Sinv * A[static_cast<std::size_t>(i)];
        grad(i) += SA[static_cast<std::size_t>(i)].trace();
      }
      for (Eigen::Index i = 0; i < L; ++i)
        for (Eigen::Index j = i; j < L; ++j)
          hess(i, j) = hess(j, i) = hess(i, j) + (SA[static_cast<std::size_t>(i)] * SA[static_cast<std::size_t>(j)]).trace();
      detail::wall_add_derivs(c, W, grad, hess);

      const Eigen::VectorXd dx = -hess.ldlt().solve(grad);
      const double lambda2 = -grad.dot(dx);
      if (!(lambda2 >= 0.0)) throw NumericalError(Failure::newton_stall, "Newton direction is not a descent direction");
      const double f0 = *phi(c);
      if (lambda2 / 2.0 <= opt.newton_tol) break;
      if (lambda2 / 2.0 <= detail::rounding_floor(f0)) {
        // Armijo is blind here; undamped steps still converge quadratically
        if (++polish > 3 || !phi(c + dx)) break;
        c += dx;
        ++iterations;
        continue;
      }
      double t = 1.0;
      for (;;) {
        const Eigen::VectorXd xt = c + t * dx;
        const auto ft = phi(xt);
        if (ft && *ft <= f0 - 0.25 * t * lambda2) {
          c = xt;
          break;
        }
        t *= 0.5;
        if (t < 1e-14) {
          if (lambda2 < 1e-6) goto centred; // rounding floor reached
          throw NumericalError(Failure::newton_stall, "line search failed at nu = " + std::to_string(nu));
        }
      }
      ++iterations;
    }
  centred:
    ++stages;
    if (s / nu < opt.gap_tol) break;
    nu *= opt.nu_factor;
  }

  // certificate
  const Eigen::MatrixXd S = S_of(c);
  const Eigen::MatrixXd Delta = S.llt().solve(Eigen::MatrixXd::Identity(S.rows(), S.cols())) / nu;
  const auto D = fe.derivs(c);
  KktCertificate cert{SymMatrixView(MonomialBasis::up_to(n, k), Delta), Polynomial(n)};
  const MonomialBasis& Bk = cert.Delta.basis();
  for (std::size_t i = 0; i < Bk.size(); ++i)
    for (std::size_t j = 0; j < Bk.size(); ++j)
      cert.sigma.add_term(Bk[i] + Bk[j], Delta(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
  cert.delta_min_eigenvalue = cert.Delta.min_eigenvalue();
  cert.complementarity_gap = (Delta.cwiseProduct(S)).sum();
  for (Eigen::Index i = 0; i < L; ++i) {
    const double r = std::abs(-D->grad(i) - Delta.cwiseProduct(A[static_cast<std::size_t>(i)]).sum());
    cert.gradient_residual = std::max(cert.gradient_residual, r);
  }
  cert.sigma_mass = Delta.cwiseProduct(A0).sum();

  const double rho = D->F;
  cert.rho_identity_gap = std::abs(rho - 2.0 * prob.d() / n * cert.sigma_mass) / rho;
  return InnerResult{rho,
                     rho / std::tgamma(1.0 + static_cast<double>(n) / prob.two_d),
                     fe.poly(c),
                     std::vector<double>(c.data(), c.data() + c.size()),
                     std::move(cert),
                     iterations,
                     stages,
                     nu,
                     c.cwiseAbs().maxCoeff() >= 0.5 * W};
}

/// Gram matrices of 1 - g = sum_j u_j v^T X_j v (u_0 = 1).
struct GramBlocks {
  std::vector<SymMatrixView> X;
  std::vector<Polynomial> u; ///< multiplier polynomials, u[0] = 1
  double equality_residual = 0.0;
  double min_eigenvalue = 0.0;
};

struct OuterResult {
  double rho_prime = 0.0;
  double vol = 0.0;
  HomoPoly g;
  std::vector<double> coefficients;
  GramBlocks blocks;
  int iterations = 0;
  int stages = 0;
  double nu = 0.0;
  bool wall_hit = false;
};

/// Outer relaxation of order k: minimise F(g) subject to 1 - g in the truncated
/// quadratic module, written with Gram matrices X_j PSD and the coefficient
/// equalities of 1 - g = sum_j u_j sigma_j. Solved by a primal log-barrier on the
/// X_j with equality-constrained Newton steps (infeasible start).
inline OuterResult solve_outer(MinVolProblem& prob, int k, const QuadratureConfig& cfg = {}, const MinVolOptions& opt = {}) {
  detail::check_solver_inputs(prob, k, cfg);
  const int n = prob.n;
  const detail::FEvaluator fe(n, prob.two_d, cfg);
  const MonomialBasis& P = fe.basis();
  const auto L = static_cast<Eigen::Index>(P.size());

  struct Block {
    Polynomial u;
    MonomialBasis basis;
    Eigen::Index offset;
    std::vector<std::pair<int, int>> entries; // upper-triangular (p, q)
  };
  std::vector<Block> blocks;
  Eigen::Index nvar = L;
  std::vector<Polynomial> us{Polynomial::constant(n, 1.0)};
  for (const auto& u : prob.u_list) us.push_back(u);
  for (const auto& u : us) {
    const int deg = u.is_zero() ? 0 : u.degree();
    const int v = (deg + 1) / 2;
    if (v > k) continue;
    Block b{u, MonomialBasis::up_to(n, k - v), nvar, {}};
    const int sb = static_cast<int>(b.basis.size());
    for (int p = 0; p < sb; ++p)
      for (int q = p; q < sb; ++q) b.entries.emplace_back(p, q);
    nvar += static_cast<Eigen::Index>(b.entries.size());
    blocks.push_back(std::move(b));
  }

  const MonomialBasis rows = MonomialBasis::up_to(n, 2 * k);
  const auto R = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd Aeq = Eigen::MatrixXd::Zero(R, nvar);
  Eigen::VectorXd beq = Eigen::VectorXd::Zero(R);
  beq(0) = 1.0;
  for (Eigen::Index i = 0; i < L; ++i) Aeq(static_cast<Eigen::Index>(rows.index_of(P[static_cast<std::size_t>(i)])), i) = 1.0;
  for (const auto& b : blocks) {
    for (std::size_t e = 0; e < b.entries.size(); ++e) {
      const auto [p, q] = b.entries[e];
      const double mult = p == q ? 1.0 : 2.0;
      for (const auto& [delta, uc] : b.u.terms()) {
        const Multiindex gam = b.basis[static_cast<std::size_t>(p)] + b.basis[static_cast<std::size_t>(q)] + delta;
        Aeq(static_cast<Eigen::Index>(rows.index_of(gam)), b.offset + static_cast<Eigen::Index>(e)) += mult * uc;
      }
    }
  }

  auto unpack = [&](const Eigen::VectorXd& x, const Block& b) {
    const auto sb = static_cast<Eigen::Index>(b.basis.size());
    Eigen::MatrixXd X(sb, sb);
    for (std::size_t e = 0; e < b.entries.size(); ++e) {
      const auto [p, q] = b.entries[e];
      X(p, q) = X(q, p) = x(b.offset + static_cast<Eigen::Index>(e));
    }
    return X;
  };

  Eigen::VectorXd x = Eigen::VectorXd::Zero(nvar);
  x.head(L) = detail::slater_start(prob, P);
  for (const auto& b : blocks)
    for (std::size_t e = 0; e < b.entries.size(); ++e)
      if (b.entries[e].first == b.entries[e].second) x(b.offset + static_cast<Eigen::Index>(e)) = 1.0;
  Eigen::VectorXd w = Eigen::VectorXd::Zero(R);
  double theta = 0.0;
  for (const auto& b : blocks) theta += static_cast<double>(b.basis.size());

  const double W = opt.coeff_wall;
  double nu = opt.nu0;
  auto phi = [&](const Eigen::VectorXd& v) -> std::optional<double> {
    const auto wall = detail::wall_value(v.head(L), W);
    if (!wall) return std::nullopt;
    double f = *wall;
    for (const auto& b : blocks) {
      const auto ld = detail::logdet_pd(unpack(v, b));
      if (!ld) return std::nullopt;
      f -= *ld;
    }
    const auto F = fe.value(v.head(L));
    if (!F) return std::nullopt;
    return f + nu * *F;
  };

  int iterations = 0, stages = 0;
  const double feas_tol = 1e-11, snap_tol = 1e-6;
  const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> Aeq_pinv(Aeq);
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr_t(Aeq.transpose());
  const Eigen::MatrixXd Nsp = qr_t.householderQ() * Eigen::MatrixXd::Identity(nvar, nvar).rightCols(nvar - qr_t.rank());
  for (;;) {
    int steps = 0;
    for (;; ++steps) {
      if (steps >= opt.max_newton) throw NumericalError(Failure::no_progress, "centring did not converge at nu = " + std::to_string(nu));
      Eigen::VectorXd rpri = Aeq * x - beq;
      if (rpri.cwiseAbs().maxCoeff() <= snap_tol) {
        // rounding drift of the KKT solve: snap back by the minimum-norm correction
        const Eigen::VectorXd xs = x - Aeq_pinv.solve(rpri);
        if (phi(xs)) {
          x = xs;
          rpri = Aeq * x - beq;
        }
      }
      const auto D = fe.derivs(x.head(L));
      if (!D) throw NumericalError(Failure::not_coercive, "iterate left the coercive cone");
      Eigen::VectorXd grad = Eigen::VectorXd::Zero(nvar);
      Eigen::MatrixXd H = Eigen::MatrixXd::Zero(nvar, nvar);
      grad.head(L) = nu * D->grad;
      H.topLeftCorner(L, L) = nu * D->hess;
      detail::wall_add_derivs(x.head(L), W, grad, H);
      for (const auto& b : blocks) {
        const Eigen::MatrixXd X = unpack(x, b);
        const Eigen::MatrixXd Wi = X.llt().solve(Eigen::MatrixXd::Identity(X.rows(), X.cols()));
        const auto ne = b.entries.size();
        for (std::size_t e = 0; e < ne; ++e) {
          const auto [p, q] = b.entries[e];
          grad(b.offset + static_cast<Eigen::Index>(e)) -= p == q ? Wi(p, p) : 2.0 * Wi(p, q);
          for (std::size_t f = e; f < ne; ++f) {
            const auto [r, t] = b.entries[f];
            // tr(W E_pq W E_rt), E_pq = e_p e_q^T + e_q e_p^T (single term when p == q)
            double h = 0.0;
            const int pe[2][2] = {{p, q}, {q, p}};
            const int pf[2][2] = {{r, t}, {t, r}};
            for (int a = 0; a < (p == q ? 1 : 2); ++a)
              for (int c = 0; c < (r == t ? 1 : 2); ++c) h += Wi(pe[a][1], pf[c][0]) * Wi(pf[c][1], pe[a][0]);
            const Eigen::Index ie = b.offset + static_cast<Eigen::Index>(e), jf = b.offset + static_cast<Eigen::Index>(f);
            H(ie, jf) += h;
            if (f != e) H(jf, ie) += h;
          }
        }
      }
      const bool feasible = rpri.cwiseAbs().maxCoeff() <= feas_tol;
      if (feasible) {
        // reduced Newton step in the null space of the equalities; far better
        // conditioned than the full KKT system once nu is large
        const Eigen::VectorXd gz = Nsp.transpose() * grad;
        const Eigen::MatrixXd Hz = Nsp.transpose() * H * Nsp;
        const Eigen::VectorXd dz = -Hz.ldlt().solve(gz);
        const double lambda2 = -gz.dot(dz);
        if (!(lambda2 >= 0.0)) throw NumericalError(Failure::no_progress, "reduced Newton direction is not a descent direction");
        const double f0 = *phi(x);
        if (lambda2 / 2.0 <= std::max(opt.newton_tol, detail::rounding_floor(f0))) break;
        const Eigen::VectorXd dx = Nsp * dz;
        double t = 1.0;
        for (;;) {
          const Eigen::VectorXd xt = x + t * dx;
          const auto ft = phi(xt);
          if (ft && *ft <= f0 - 0.25 * t * lambda2) {
            x = xt;
            break;
          }
          t *= 0.5;
          if (t < 1e-14) {
            if (lambda2 < 1e-6) goto centred;
            throw NumericalError(Failure::no_progress, "line search failed at nu = " + std::to_string(nu));
          }
        }
        ++iterations;
        continue;
      }
      Eigen::MatrixXd KKT = Eigen::MatrixXd::Zero(nvar + R, nvar + R);
      KKT.topLeftCorner(nvar, nvar) = H;
      KKT.topRightCorner(nvar, R) = Aeq.transpose();
      KKT.bottomLeftCorner(R, nvar) = Aeq;
      Eigen::VectorXd rhs(nvar + R);
      rhs.head(nvar) = -(grad + Aeq.transpose() * w);
      rhs.tail(R) = -rpri;
      const Eigen::VectorXd sol = KKT.partialPivLu().solve(rhs);
      const Eigen::VectorXd dx = sol.head(nvar);
      const Eigen::VectorXd dw = sol.tail(R);

      {
        // infeasible start: backtrack on the norm of the KKT residual
        auto resid = [&](const Eigen::VectorXd& xv, const Eigen::VectorXd& wv) -> std::optional<double> {
          if (!phi(xv)) return std::nullopt;
          const auto Dv = fe.derivs(xv.head(L));
          if (!Dv) return std::nullopt;
          Eigen::VectorXd gv = Eigen::VectorXd::Zero(nvar);
          gv.head(L) = nu * Dv->grad;
          Eigen::MatrixXd dummy = Eigen::MatrixXd::Zero(nvar, nvar);
          detail::wall_add_derivs(xv.head(L), W, gv, dummy);
          for (const auto& b : blocks) {
            const Eigen::MatrixXd X = unpack(xv, b);
            const Eigen::MatrixXd Wi = X.llt().solve(Eigen::MatrixXd::Identity(X.rows(), X.cols()));
            for (std::size_t e = 0; e < b.entries.size(); ++e) {
              const auto [p, q] = b.entries[e];
              gv(b.offset + static_cast<Eigen::Index>(e)) -= p == q ? Wi(p, p) : 2.0 * Wi(p, q);
            }
          }
          Eigen::VectorXd r(nvar + R);
          r.head(nvar) = gv + Aeq.transpose() * wv;
          r.tail(R) = Aeq * xv - beq;
          return r.norm();
        };
        const double r0 = *resid(x, w);
        double t = 1.0;
        for (;;) {
          const auto rt = resid(x + t * dx, w + t * dw);
          if (rt && *rt <= (1.0 - 0.01 * t) * r0) {
            x += t * dx;
            w += t * dw;
            break;
          }
          t *= 0.5;
          if (t < 1e-14) throw NumericalError(Failure::no_progress, "could not reach the Gram equalities");
        }
      }
      ++iterations;
    }
  centred:
    ++stages;
    if (theta / nu < opt.gap_tol) break;
    nu *= opt.nu_factor;
  }

  const Eigen::VectorXd c = x.head(L);
  GramBlocks gb;
  gb.equality_residual = (Aeq * x - beq).cwiseAbs().maxCoeff();
  gb.min_eigenvalue = std::numeric_limits<double>::infinity();
  for (const auto& b : blocks) {
    gb.X.emplace_back(b.basis, unpack(x, b));
    gb.u.push_back(b.u);
    gb.min_eigenvalue = std::min(gb.min_eigenvalue, gb.X.back().min_eigenvalue());
  }
  const double rho_prime = *fe.value(c);
  return OuterResult{rho_prime,
                     rho_prime / std::tgamma(1.0 + static_cast<double>(n) / prob.two_d),
                     fe.poly(c),
                     std::vector<double>(c.data(), c.data() + c.size()),
                     std::move(gb),
                     iterations,
                     stages,
                     nu,
                     c.cwiseAbs().maxCoeff() >= 0.5 * W};
}

/// Optimality diagnostics for a candidate g: contact points {x in K : g(x) = 1},
/// nonnegative weights on them matching the degree-2d moments of exp(-g), and
/// the complementarity <1 - g, mu>.
struct KktDiagnostic {
  double max_g_on_K = 0.0;
  std::vector<std::vector<double>> contact_points;
  std::size_t contact_count = 0;
  std::size_t caratheodory_bound = 0; ///< C(n+2d-1, 2d) + 1
  bool continuum = false;             ///< more contact clusters than the bound: a contact curve/surface
  std::vector<double> weights;
  double moment_residual = 0.0;       ///< max_alpha |sum_i w_i x_i^alpha - m_alpha| / max_alpha |m_alpha|
  double complementarity_gap = 0.0;   ///< sum_i w_i (1 - g(x_i)), or <Delta, S> with a certificate
};

namespace detail {

/// Grid points of K (about `per_dim` per coordinate of its bounding box).
inline std::vector<std::vector<double>> body_grid(const BodyK& K, int per_dim) {
  const int n = K.dim();
  std::vector<double> lo(static_cast<std::size_t>(n)), hi(lo.size());
  if (K.kind() == BodyK::Kind::box) {
    lo = K.lo();
    hi = K.hi();
  } else if (K.kind() == BodyK::Kind::simplex) {
    for (int i = 0; i < n; ++i) {
      lo[static_cast<std::size_t>(i)] = std::numeric_limits<double>::infinity();
      hi[static_cast<std::size_t>(i)] = -lo[static_cast<std::size_t>(i)];
      for (const auto& v : K.vertices()) {
        lo[static_cast<std::size_t>(i)] = std::min(lo[static_cast<std::size_t>(i)], v[static_cast<std::size_t>(i)]);
        hi[static_cast<std::size_t>(i)] = std::max(hi[static_cast<std::size_t>(i)], v[static_cast<std::size_t>(i)]);
      }
    }
  } else {
    for (int i = 0; i < n; ++i) {
      lo[static_cast<std::size_t>(i)] = K.center()[static_cast<std::size_t>(i)] - K.radius();
      hi[static_cast<std::size_t>(i)] = K.center()[static_cast<std::size_t>(i)] + K.radius();
    }
  }
  std::vector<std::vector<double>> pts;
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  for (;;) {
    std::vector<double> x(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const auto ii = static_cast<std::size_t>(i);
      x[ii] = lo[ii] + (hi[ii] - lo[ii]) * idx[ii] / (per_dim - 1);
    }
    if (K.contains(x, 1e-12)) pts.push_back(std::move(x));
    int i = 0;
    while (i < n && ++idx[static_cast<std::size_t>(i)] == per_dim) idx[static_cast<std::size_t>(i++)] = 0;
    if (i == n) break;
  }
  return pts;
}

/// Compass search maximising g inside K.
inline std::vector<double> ascend_in_K(const HomoPoly& g, const BodyK& K, std::vector<double> x, double step) {
  const int n = K.dim();
  double gx = g(x);
  while (step > 1e-12) {
    bool moved = false;
    for (int i = 0; i < n && !moved; ++i) {
      for (double sgn : {1.0, -1.0}) {
        auto y = x;
        y[static_cast<std::size_t>(i)] += sgn * step;
        if (!K.contains(y)) continue;
        const double gy = g(y);
        if (gy > gx) {
          x = std::move(y);
          gx = gy;
          moved = true;
          break;
        }
      }
    }
    if (!moved) step *= 0.5;
  }
  return x;
}

} // namespace detail

inline KktDiagnostic kkt_check(const HomoPoly& g, const MinVolProblem& prob, const QuadratureConfig& cfg = {},
                               const KktCertificate* cert = nullptr, double contact_tol = 1e-6) {
  if (g.dim() != prob.n || g.degree() != prob.two_d) throw InputError("candidate g does not match the problem");
  const int n = prob.n;
  KktDiagnostic out;
  out.caratheodory_bound = static_cast<std::size_t>(binomial(n + prob.two_d - 1, prob.two_d)) + 1;

  const int per_dim = n == 1 ? 2001 : n == 2 ? 201 : 41;
  const auto grid = detail::body_grid(prob.K, per_dim);
  std::vector<double> gv(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) gv[i] = g(grid[i]);
  const double scale = prob.K.max_norm();
  const double h = 2.0 * scale / (per_dim - 1);

  // thin out near-maximal grid points, then polish each by local ascent
  std::vector<std::size_t> order(grid.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return gv[a] > gv[b]; });
  const double gmax_grid = gv[order.front()];
  std::vector<std::vector<double>> seeds;
  for (std::size_t i : order) {
    if (gv[i] < gmax_grid - 0.05 * std::abs(gmax_grid) - 1e-12 || seeds.size() >= 400) break;
    bool near = false;
    for (const auto& s : seeds) {
      double d2 = 0.0;
      for (int j = 0; j < n; ++j) d2 += std::pow(s[static_cast<std::size_t>(j)] - grid[i][static_cast<std::size_t>(j)], 2);
      if (d2 < 9.0 * h * h) near = true;
    }
    if (!near) seeds.push_back(grid[i]);
  }
  out.max_g_on_K = gmax_grid;
  std::vector<std::vector<double>> polished;
  for (const auto& s : seeds) {
    auto x = detail::ascend_in_K(g, prob.K, s, h);
    out.max_g_on_K = std::max(out.max_g_on_K, g(x));
    if (std::abs(g(x) - 1.0) > contact_tol) continue;
    bool dup = false;
    for (const auto& p : polished) {
      double d2 = 0.0;
      for (int j = 0; j < n; ++j) d2 += std::pow(p[static_cast<std::size_t>(j)] - x[static_cast<std::size_t>(j)], 2);
      if (d2 < 1e-6 * scale * scale) dup = true;
    }
    if (!dup) polished.push_back(std::move(x));
  }
  out.contact_points = polished;
  out.contact_count = polished.size();
  out.continuum = out.contact_count > out.caratheodory_bound;

  // nonnegative weights on the contact points matching the 2d-moments of exp(-g)
  const MonomialBasis P = prob.coefficient_basis();
  const auto mom = exp_moments(Phf::polynomial(g), P.elements(), cfg);
  Eigen::VectorXd m(static_cast<Eigen::Index>(P.size()));
  for (std::size_t a = 0; a < P.size(); ++a) m(static_cast<Eigen::Index>(a)) = mom[a].value;
  const double mscale = m.cwiseAbs().maxCoeff();
  if (polished.empty()) {
    out.moment_residual = 1.0;
  } else {
    Eigen::MatrixXd V(static_cast<Eigen::Index>(P.size()), static_cast<Eigen::Index>(polished.size()));
    for (std::size_t i = 0; i < polished.size(); ++i)
      for (std::size_t a = 0; a < P.size(); ++a)
        V(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(i)) = P[a].monomial(polished[i]);
    // weights are not unique when contacts outnumber moments; prefer the
    // minimum-norm fit (symmetric on symmetric contact sets) when it is nonnegative
    Eigen::VectorXd wts = V.completeOrthogonalDecomposition().solve(m);
    if (wts.minCoeff() < 0.0) wts = nnls(V, m);
    out.weights.assign(wts.data(), wts.data() + wts.size());
    out.moment_residual = (V * wts - m).cwiseAbs().maxCoeff() / mscale;
    for (std::size_t i = 0; i < polished.size(); ++i) out.complementarity_gap += wts(static_cast<Eigen::Index>(i)) * (1.0 - g(polished[i]));
  }
  if (cert) out.complementarity_gap = cert->complementarity_gap;
  return out;
}

} // namespace homolevel
