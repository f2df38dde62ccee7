#pragma once

#include <cmath>
#include <map>
#include <span>
#include <vector>

#include "error.hpp"
#include "multiindex.hpp"

namespace homolevel {

/// Sparse real polynomial in n variables, terms kept in graded-lex order.
/// Zero coefficients are never stored.
class Polynomial {
public:
  using Terms = std::map<Multiindex, double, GradedLexLess>;

  Polynomial() = default;
  explicit Polynomial(int n) : n_(n) {
    if (n < 1) throw InputError("polynomial dimension must be >= 1");
  }
  Polynomial(int n, const Terms& terms) : Polynomial(n) {
    for (const auto& [a, c] : terms) add_term(a, c);
  }

  static Polynomial constant(int n, double c) {
    Polynomial p(n);
    p.add_term(Multiindex::zero(n), c);
    return p;
  }
  static Polynomial monomial(const Multiindex& a, double c = 1.0) {
    Polynomial p(a.dim());
    p.add_term(a, c);
    return p;
  }
  /// sum_i x_i^2
  static Polynomial norm_squared(int n) {
    Polynomial p(n);
    for (int i = 0; i < n; ++i) {
      std::vector<int> e(static_cast<std::size_t>(n), 0);
      e[static_cast<std::size_t>(i)] = 2;
      p.add_term(Multiindex(e), 1.0);
    }
    return p;
  }

  int dim() const { return n_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  int degree() const {
    int d = 0;
    for (const auto& [a, c] : terms_) d = std::max(d, a.total());
    return d;
  }

  double coeff(const Multiindex& a) const {
    auto it = terms_.find(a);
    return it == terms_.end() ? 0.0 : it->second;
  }

  void add_term(const Multiindex& a, double c) {
    if (a.dim() != n_) throw InputError("term dimension does not match polynomial dimension");
    if (!std::isfinite(c)) throw InputError("non-finite coefficient");
    if (c == 0.0) return;
    auto [it, inserted] = terms_.emplace(a, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0.0) terms_.erase(it);
    }
  }

  double operator()(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != n_) throw InputError("point dimension does not match polynomial dimension");
    double v = 0.0;
    for (const auto& [a, c] : terms_) v += c * a.monomial(x);
    return v;
  }

  std::vector<double> gradient(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != n_) throw InputError("point dimension does not match polynomial dimension");
    std::vector<double> g(static_cast<std::size_t>(n_), 0.0);
    for (const auto& [a, c] : terms_) {
      for (int i = 0; i < n_; ++i) {
        const int ei = a[i];
        if (ei == 0) continue;
        double v = c * ei;
        for (int j = 0; j < n_; ++j) {
          const int e = j == i ? ei - 1 : a[j];
          for (int t = 0; t < e; ++t) v *= x[static_cast<std::size_t>(j)];
        }
        g[static_cast<std::size_t>(i)] += v;
      }
    }
    return g;
  }

  Polynomial operator+(const Polynomial& o) const {
    check_same_dim(o);
    Polynomial r = *this;
    for (const auto& [a, c] : o.terms_) r.add_term(a, c);
    return r;
  }
  Polynomial operator-(const Polynomial& o) const { return *this + o * -1.0; }
  Polynomial operator*(double s) const {
    Polynomial r(n_);
    if (s == 0.0) return r;
    for (const auto& [a, c] : terms_) r.add_term(a, c * s);
    return r;
  }
  Polynomial operator*(const Polynomial& o) const {
    check_same_dim(o);
    Polynomial r(n_);
    for (const auto& [a, ca] : terms_)
      for (const auto& [b, cb] : o.terms_) r.add_term(a + b, ca * cb);
    return r;
  }

  bool operator==(const Polynomial& o) const { return n_ == o.n_ && terms_ == o.terms_; }

private:
  void check_same_dim(const Polynomial& o) const {
    if (o.n_ != n_) throw InputError("polynomial dimension mismatch");
  }

  int n_ = 1;
  Terms terms_;
};

/// Homogeneous polynomial of degree >= 1. Homogeneity is structural: every stored
/// exponent has total equal to the degree.
class HomoPoly {
public:
  HomoPoly(int n, int degree) : poly_(n), degree_(degree) {
    if (degree < 1) throw InputError("homogeneous polynomial degree must be >= 1");
  }
  HomoPoly(int n, int degree, const Polynomial::Terms& terms) : HomoPoly(n, degree) {
    for (const auto& [a, c] : terms) add_term(a, c);
  }
  explicit HomoPoly(const Polynomial& p) : HomoPoly(p.dim(), p.degree()) {
    for (const auto& [a, c] : p.terms()) add_term(a, c);
  }

  static HomoPoly monomial(const Multiindex& a, double c = 1.0) {
    HomoPoly p(a.dim(), a.total());
    p.add_term(a, c);
    return p;
  }
  /// (sum_i x_i^2)^m
  static HomoPoly norm_power(int n, int m) {
    Polynomial r = Polynomial::constant(n, 1.0);
    const Polynomial sq = Polynomial::norm_squared(n);
    for (int i = 0; i < m; ++i) r = r * sq;
    return HomoPoly(r);
  }
  /// Polynomial with coefficient vector `c` over the pure basis of its degree.
  static HomoPoly from_coefficients(const MonomialBasis& pure_basis, std::span<const double> c) {
    if (!pure_basis.is_pure()) throw InputError("coefficient basis must be pure");
    if (c.size() != pure_basis.size()) throw InputError("coefficient vector size mismatch");
    HomoPoly p(pure_basis.dim(), pure_basis.max_degree());
    for (std::size_t i = 0; i < c.size(); ++i) p.add_term(pure_basis[i], c[i]);
    return p;
  }

  int dim() const { return poly_.dim(); }
  int degree() const { return degree_; }
  const Polynomial::Terms& terms() const { return poly_.terms(); }
  const Polynomial& as_polynomial() const { return poly_; }
  double coeff(const Multiindex& a) const { return poly_.coeff(a); }

  void add_term(const Multiindex& a, double c) {
    if (a.total() != degree_) throw InputError("term " + a.str() + " has total degree " + std::to_string(a.total()) +
                                               ", expected " + std::to_string(degree_));
    poly_.add_term(a, c);
  }

  std::vector<double> coefficients(const MonomialBasis& pure_basis) const {
    if (!pure_basis.is_pure() || pure_basis.max_degree() != degree_ || pure_basis.dim() != dim())
      throw InputError("basis does not match polynomial degree/dimension");
    std::vector<double> c(pure_basis.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = poly_.coeff(pure_basis[i]);
    return c;
  }

  double operator()(std::span<const double> x) const { return poly_(x); }
  std::vector<double> gradient(std::span<const double> x) const { return poly_.gradient(x); }

  HomoPoly operator+(const HomoPoly& o) const {
    if (o.degree_ != degree_) throw InputError("adding homogeneous polynomials of different degree");
    return HomoPoly(poly_ + o.poly_, degree_);
  }
  HomoPoly operator*(double s) const { return HomoPoly(poly_ * s, degree_); }

  bool operator==(const HomoPoly& o) const { return degree_ == o.degree_ && poly_ == o.poly_; }

private:
  HomoPoly(Polynomial p, int degree) : poly_(std::move(p)), degree_(degree) {}

  Polynomial poly_;
  int degree_;
};

/// Evaluates p at x; throws InputError on dimension mismatch.
inline double eval_poly(const HomoPoly& p, std::span<const double> x) { return p(x); }

/// Exact gradient of p at x.
inline std::vector<double> grad_poly(const HomoPoly& p, std::span<const double> x) { return p.gradient(x); }

} // namespace homolevel
