#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "error.hpp"
#include "linalg.hpp"
#include "multiindex.hpp"
#include "parallel.hpp"
#include "polynomial.hpp"
#include "quadrature.hpp"

namespace homolevel {

/// Compact set K with nonempty interior.
class BodyK {
public:
  enum class Kind { box, ball, simplex, semialgebraic };

  static BodyK box(std::vector<double> lo, std::vector<double> hi) {
    if (lo.empty() || lo.size() != hi.size()) throw InputError("box needs matching nonempty lo/hi");
    for (std::size_t i = 0; i < lo.size(); ++i)
      if (!(lo[i] < hi[i])) throw InputError("box needs lo < hi in every coordinate");
    BodyK k(Kind::box, static_cast<int>(lo.size()));
    k.lo_ = std::move(lo);
    k.hi_ = std::move(hi);
    return k;
  }

  static BodyK ball(std::vector<double> center, double radius) {
    if (center.empty()) throw InputError("ball needs a center");
    if (!(radius > 0.0)) throw InputError("ball radius must be > 0");
    BodyK k(Kind::ball, static_cast<int>(center.size()));
    k.center_ = std::move(center);
    k.radius_ = radius;
    return k;
  }

  static BodyK simplex(std::vector<std::vector<double>> vertices) {
    if (vertices.size() < 2) throw InputError("simplex needs n+1 vertices");
    const int n = static_cast<int>(vertices.size()) - 1;
    for (const auto& v : vertices)
      if (static_cast<int>(v.size()) != n) throw InputError("simplex needs n+1 vertices in R^n");
    BodyK k(Kind::simplex, n);
    k.vertices_ = std::move(vertices);
    if (std::abs(k.edge_matrix().determinant()) < 1e-12) throw InputError("simplex vertices are affinely dependent");
    return k;
  }

  /// {x : u_j(x) >= 0 for all j}. One constraint must be M - ||x||^2.
  static BodyK semialgebraic(int n, std::vector<Polynomial> constraints) {
    if (n < 1) throw InputError("dimension must be >= 1");
    BodyK k(Kind::semialgebraic, n);
    for (const auto& u : constraints)
      if (u.dim() != n) throw InputError("constraint dimension mismatch");
    k.constraints_ = std::move(constraints);
    bool found = false;
    for (const auto& u : k.constraints_) {
      if (const auto m = ball_radius_squared(u)) {
        found = true;
        k.radius_ = std::sqrt(*m);
        k.center_.assign(static_cast<std::size_t>(n), 0.0);
      }
    }
    if (!found) throw InputError("semialgebraic body needs a ball constraint M - ||x||^2 >= 0");
    return k;
  }

  Kind kind() const { return kind_; }
  int dim() const { return n_; }
  const std::vector<double>& lo() const { return lo_; }
  const std::vector<double>& hi() const { return hi_; }
  const std::vector<double>& center() const { return center_; }
  double radius() const { return radius_; }
  const std::vector<std::vector<double>>& vertices() const { return vertices_; }
  const std::vector<Polynomial>& constraints() const { return constraints_; }

  bool contains(std::span<const double> x, double slack = 0.0) const {
    switch (kind_) {
    case Kind::box:
      for (int i = 0; i < n_; ++i)
        if (x[i] < lo_[i] - slack || x[i] > hi_[i] + slack) return false;
      return true;
    case Kind::ball: {
      double r2 = 0.0;
      for (int i = 0; i < n_; ++i) r2 += (x[i] - center_[i]) * (x[i] - center_[i]);
      return std::sqrt(r2) <= radius_ + slack;
    }
    case Kind::simplex: {
      const auto b = barycentric(x);
      return std::all_of(b.begin(), b.end(), [&](double t) { return t >= -slack; });
    }
    case Kind::semialgebraic:
      return std::all_of(constraints_.begin(), constraints_.end(), [&](const Polynomial& u) { return u(x) >= -slack; });
    }
    return false;
  }

  /// max over K of ||x||.
  double max_norm() const {
    switch (kind_) {
    case Kind::box: {
      double s = 0.0;
      for (int i = 0; i < n_; ++i) s += std::max(lo_[i] * lo_[i], hi_[i] * hi_[i]);
      return std::sqrt(s);
    }
    case Kind::ball: {
      double s = 0.0;
      for (double c : center_) s += c * c;
      return std::sqrt(s) + radius_;
    }
    case Kind::simplex: {
      double m = 0.0;
      for (const auto& v : vertices_) {
        double s = 0.0;
        for (double c : v) s += c * c;
        m = std::max(m, std::sqrt(s));
      }
      return m;
    }
    case Kind::semialgebraic: return radius_;
    }
    return 0.0;
  }

  /// Defining inequalities u_j >= 0 used by the outer hierarchy. Box and simplex
  /// lists end with the Archimedean ball M - ||x||^2; a ball centred off the
  /// origin also gets one.
  std::vector<Polynomial> u_list() const {
    std::vector<Polynomial> out;
    const Polynomial one = Polynomial::constant(n_, 1.0);
    auto coord = [&](int i) {
      std::vector<int> e(static_cast<std::size_t>(n_), 0);
      e[static_cast<std::size_t>(i)] = 1;
      return Polynomial::monomial(Multiindex(e));
    };
    auto archimedean = [&] {
      const double m = max_norm();
      return Polynomial::constant(n_, m * m) - Polynomial::norm_squared(n_);
    };
    switch (kind_) {
    case Kind::box:
      for (int i = 0; i < n_; ++i) {
        const auto ii = static_cast<std::size_t>(i);
        out.push_back((coord(i) - one * lo_[ii]) * (one * hi_[ii] - coord(i)));
      }
      out.push_back(archimedean());
      break;
    case Kind::ball: {
      Polynomial r = one * (radius_ * radius_);
      bool centered = true;
      for (int i = 0; i < n_; ++i) {
        const Polynomial t = coord(i) - one * center_[static_cast<std::size_t>(i)];
        r = r - t * t;
        if (center_[static_cast<std::size_t>(i)] != 0.0) centered = false;
      }
      out.push_back(r);
      if (!centered) out.push_back(archimedean());
      break;
    }
    case Kind::simplex: {
      // barycentric coordinates are affine functions of x
      const Eigen::MatrixXd inv = edge_matrix().inverse();
      Polynomial sum_rest = Polynomial(n_);
      for (int j = 0; j < n_; ++j) {
        Polynomial lam = Polynomial(n_);
        double c = 0.0;
        for (int i = 0; i < n_; ++i) {
          lam = lam + coord(i) * inv(j, i);
          c -= inv(j, i) * vertices_[0][static_cast<std::size_t>(i)];
        }
        lam = lam + one * c;
        out.push_back(lam);
        sum_rest = sum_rest + lam;
      }
      out.insert(out.begin(), one - sum_rest);
      out.push_back(archimedean());
      break;
    }
    case Kind::semialgebraic: out = constraints_; break;
    }
    return out;
  }

  /// Barycentric coordinates (simplex only).
  std::vector<double> barycentric(std::span<const double> x) const {
    Eigen::VectorXd r(n_);
    for (int i = 0; i < n_; ++i) r(i) = x[i] - vertices_[0][static_cast<std::size_t>(i)];
    const Eigen::VectorXd t = edge_matrix().partialPivLu().solve(r);
    std::vector<double> b(static_cast<std::size_t>(n_) + 1);
    b[0] = 1.0 - t.sum();
    for (int i = 0; i < n_; ++i) b[static_cast<std::size_t>(i) + 1] = t(i);
    return b;
  }

  /// Columns v_i - v_0.
  Eigen::MatrixXd edge_matrix() const {
    Eigen::MatrixXd a(n_, n_);
    for (int j = 0; j < n_; ++j)
      for (int i = 0; i < n_; ++i)
        a(i, j) = vertices_[static_cast<std::size_t>(j) + 1][static_cast<std::size_t>(i)] - vertices_[0][static_cast<std::size_t>(i)];
    return a;
  }

  /// M when u = M - sum x_i^2 exactly, M > 0.
  static std::optional<double> ball_radius_squared(const Polynomial& u) {
    const int n = u.dim();
    double m = 0.0;
    int squares = 0;
    for (const auto& [a, c] : u.terms()) {
      if (a.total() == 0) {
        m = c;
      } else if (a.total() == 2 && c == -1.0 && std::count(a.exps().begin(), a.exps().end(), 2) == 1) {
        ++squares;
      } else {
        return std::nullopt;
      }
    }
    if (squares != n || !(m > 0.0)) return std::nullopt;
    return m;
  }

private:
  BodyK(Kind kind, int n) : kind_(kind), n_(n) {}

  Kind kind_;
  int n_;
  std::vector<double> lo_, hi_, center_;
  double radius_ = 0.0;
  std::vector<std::vector<double>> vertices_;
  std::vector<Polynomial> constraints_;
};

inline const char* body_kind_name(BodyK::Kind k) {
  switch (k) {
  case BodyK::Kind::box: return "box";
  case BodyK::Kind::ball: return "ball";
  case BodyK::Kind::simplex: return "simplex";
  case BodyK::Kind::semialgebraic: return "semialgebraic";
  }
  return "?";
}

/// Moments z_alpha = integral of x^alpha dmu for all |alpha| <= max_degree,
/// stored densely in graded-lex order.
class MomentSeq {
public:
  enum class Provenance { analytic, monte_carlo };
  static constexpr int max_supported_degree = 12;

  MomentSeq(int n, int max_degree, std::vector<double> vals, Provenance prov = Provenance::analytic,
            std::uint64_t seed = 0, std::size_t samples = 0, std::vector<double> std_errors = {})
      : basis_(MonomialBasis::up_to(n, max_degree)), vals_(std::move(vals)), prov_(prov), seed_(seed), samples_(samples),
        std_errors_(std::move(std_errors)) {
    if (max_degree < 0 || max_degree > max_supported_degree) throw InputError("moment degree must be in [0, 12]");
    if (vals_.size() != basis_.size()) throw InputError("moment vector size mismatch");
    if (!(vals_[0] > 0.0)) throw InputError("zeroth moment must be positive");
    if (std_errors_.empty()) std_errors_.assign(vals_.size(), 0.0);
  }

  int dim() const { return basis_.dim(); }
  int max_degree() const { return basis_.max_degree(); }
  const MonomialBasis& basis() const { return basis_; }
  const std::vector<double>& values() const { return vals_; }
  const std::vector<double>& std_errors() const { return std_errors_; }
  Provenance provenance() const { return prov_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t samples() const { return samples_; }

  double operator[](const Multiindex& a) const {
    const std::size_t i = basis_.index_of(a);
    if (i == MonomialBasis::npos) throw InputError("moment " + a.str() + " beyond stored degree");
    return vals_[i];
  }
  double std_error(const Multiindex& a) const { return std_errors_[basis_.index_of(a)]; }

private:
  MonomialBasis basis_;
  std::vector<double> vals_;
  Provenance prov_;
  std::uint64_t seed_;
  std::size_t samples_;
  std::vector<double> std_errors_;
};

namespace detail {

inline double factorial(int k) { return std::tgamma(k + 1.0); }

/// integral over the unit ball B^n of u^gamma.
inline double unit_ball_moment(const Multiindex& g) {
  if (g.has_odd()) return 0.0;
  const int n = g.dim();
  double p = 1.0;
  for (int i = 0; i < n; ++i) p *= std::tgamma((g[i] + 1) / 2.0);
  const int t = g.total();
  return 2.0 * p / std::tgamma((t + n) / 2.0) / (t + n);
}

/// Integral of x^alpha over K for the analytic bodies.
inline double analytic_moment(const BodyK& K, const Multiindex& a) {
  const int n = K.dim();
  switch (K.kind()) {
  case BodyK::Kind::box: {
    double p = 1.0;
    for (int i = 0; i < n; ++i) {
      const double lo = K.lo()[static_cast<std::size_t>(i)], hi = K.hi()[static_cast<std::size_t>(i)];
      p *= (std::pow(hi, a[i] + 1) - std::pow(lo, a[i] + 1)) / (a[i] + 1);
    }
    return p;
  }
  case BodyK::Kind::ball: {
    // x = c + R u: expand prod (c_i + R u_i)^{a_i}
    const double R = K.radius();
    Polynomial p = Polynomial::constant(n, 1.0);
    for (int i = 0; i < n; ++i) {
      std::vector<int> e(static_cast<std::size_t>(n), 0);
      e[static_cast<std::size_t>(i)] = 1;
      const Polynomial lin = Polynomial::constant(n, K.center()[static_cast<std::size_t>(i)]) + Polynomial::monomial(Multiindex(e), R);
      for (int k = 0; k < a[i]; ++k) p = p * lin;
    }
    double s = 0.0;
    for (const auto& [g, c] : p.terms()) s += c * unit_ball_moment(g);
    return s * std::pow(R, n);
  }
  case BodyK::Kind::simplex: {
    // x = v0 + E t over the standard simplex; integral of t^g = prod g_i! / (|g|+n)!
    const Eigen::MatrixXd E = K.edge_matrix();
    const double jac = std::abs(E.determinant());
    Polynomial p = Polynomial::constant(n, 1.0);
    for (int i = 0; i < n; ++i) {
      Polynomial lin = Polynomial::constant(n, K.vertices()[0][static_cast<std::size_t>(i)]);
      for (int j = 0; j < n; ++j) {
        std::vector<int> e(static_cast<std::size_t>(n), 0);
        e[static_cast<std::size_t>(j)] = 1;
        if (E(i, j) != 0.0) lin = lin + Polynomial::monomial(Multiindex(e), E(i, j));
      }
      for (int k = 0; k < a[i]; ++k) p = p * lin;
    }
    double s = 0.0;
    for (const auto& [g, c] : p.terms()) {
      double f = 1.0;
      for (int i = 0; i < n; ++i) f *= factorial(g[i]);
      s += c * f / factorial(g.total() + n);
    }
    return s * jac;
  }
  case BodyK::Kind::semialgebraic: break;
  }
  throw InputError("no closed-form moments for this body");
}

} // namespace detail

/// Lebesgue moments of K up to `max_degree`: closed forms for box, ball and
/// simplex; rejection sampling in the Archimedean ball for semialgebraic K.
inline MomentSeq lebesgue_moments(const BodyK& K, int max_degree, std::uint64_t seed = 20240607,
                                  std::size_t samples = 1'000'000) {
  if (max_degree < 0 || max_degree > MomentSeq::max_supported_degree) throw InputError("moment degree must be in [0, 12]");
  const int n = K.dim();
  const MonomialBasis basis = MonomialBasis::up_to(n, max_degree);
  std::vector<double> vals(basis.size());
  if (K.kind() != BodyK::Kind::semialgebraic) {
    parallel_for(basis.size(), [&](std::size_t i) { vals[i] = detail::analytic_moment(K, basis[i]); }, 8);
    return MomentSeq(n, max_degree, std::move(vals));
  }
  if (samples < 2) throw InputError("need at least 2 samples");
  const double R = K.radius();
  const double ball_vol = std::pow(R, n) * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(1.0 + 0.5 * n);
  const std::size_t m = basis.size();
  const CounterRng rng(seed);
  const auto stride = static_cast<std::uint64_t>(n + 1);
  auto sums = chunked_sum(samples, 2 * m, [&](std::size_t i, double* acc) {
    std::vector<double> x(static_cast<std::size_t>(n));
    double r2 = 0.0;
    for (int j = 0; j < n; ++j) {
      x[static_cast<std::size_t>(j)] = rng.normal(i * stride + static_cast<std::uint64_t>(j));
      r2 += x[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
    }
    // uniform in the ball: direction times R U^{1/n}; the radius counter is one
    // that normal() never consumes
    const double rad = R * std::pow(rng.uniform(2 * (i * stride + static_cast<std::uint64_t>(n))), 1.0 / n) / std::sqrt(r2);
    for (double& v : x) v *= rad;
    if (!K.contains(x)) return;
    std::vector<std::vector<double>> pw(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(max_degree) + 1, 1.0));
    for (int j = 0; j < n; ++j)
      for (int e = 1; e <= max_degree; ++e) pw[static_cast<std::size_t>(j)][static_cast<std::size_t>(e)] = pw[static_cast<std::size_t>(j)][static_cast<std::size_t>(e) - 1] * x[static_cast<std::size_t>(j)];
    for (std::size_t k = 0; k < m; ++k) {
      double v = 1.0;
      for (int j = 0; j < n; ++j) v *= pw[static_cast<std::size_t>(j)][static_cast<std::size_t>(basis[k][j])];
      acc[k] += v;
      acc[m + k] += v * v;
    }
  });
  std::vector<double> se(m);
  const auto N = static_cast<double>(samples);
  for (std::size_t k = 0; k < m; ++k) {
    const double mean = sums[k] / N;
    const double var = std::max(0.0, sums[m + k] / N - mean * mean);
    vals[k] = ball_vol * mean;
    se[k] = ball_vol * std::sqrt(var / (N - 1.0));
  }
  if (!(vals[0] > 0.0)) throw InputError("no sample landed in K; the body may have empty interior");
  return MomentSeq(n, max_degree, std::move(vals), MomentSeq::Provenance::monte_carlo, seed, samples, std::move(se));
}

/// M_k(y)[alpha, beta] = y_{alpha+beta}, |alpha|, |beta| <= k.
inline SymMatrixView moment_matrix(const MomentSeq& y, int k) {
  if (k < 0 || y.max_degree() < 2 * k) throw InputError("moment matrix of order k needs moments up to degree 2k");
  const MonomialBasis b = MonomialBasis::up_to(y.dim(), k);
  const auto s = static_cast<Eigen::Index>(b.size());
  Eigen::MatrixXd m(s, s);
  for (Eigen::Index i = 0; i < s; ++i)
    for (Eigen::Index j = i; j < s; ++j) m(i, j) = m(j, i) = y[b[static_cast<std::size_t>(i)] + b[static_cast<std::size_t>(j)]];
  return SymMatrixView(b, std::move(m));
}

/// M_k(p, z)[alpha, beta] = sum_gamma p_gamma z_{alpha+beta+gamma}.
inline SymMatrixView localizing_matrix(const Polynomial& p, const MomentSeq& z, int k) {
  if (p.dim() != z.dim()) throw InputError("polynomial and moments have different dimensions");
  const int dp = p.is_zero() ? 0 : p.degree();
  if (k < 0 || z.max_degree() < 2 * k + dp)
    throw InputError("localizing matrix of order " + std::to_string(k) + " needs moments up to degree " + std::to_string(2 * k + dp));
  const MonomialBasis b = MonomialBasis::up_to(z.dim(), k);
  const auto s = static_cast<Eigen::Index>(b.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(s, s);
  for (Eigen::Index i = 0; i < s; ++i) {
    for (Eigen::Index j = i; j < s; ++j) {
      const Multiindex ab = b[static_cast<std::size_t>(i)] + b[static_cast<std::size_t>(j)];
      double v = 0.0;
      for (const auto& [g, c] : p.terms()) v += c * z[ab + g];
      m(i, j) = m(j, i) = v;
    }
  }
  return SymMatrixView(b, std::move(m));
}

} // namespace homolevel
