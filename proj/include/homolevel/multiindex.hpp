#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"

namespace homolevel {

/// Exponent vector alpha of the monomial x^alpha.
class Multiindex {
public:
  Multiindex() = default;
  explicit Multiindex(std::vector<int> exps) : exps_(std::move(exps)) {
    for (int e : exps_) {
      if (e < 0) throw InputError("negative exponent in multi-index");
    }
  }
  Multiindex(std::initializer_list<int> exps) : Multiindex(std::vector<int>(exps)) {}

  static Multiindex zero(int n) { return Multiindex(std::vector<int>(static_cast<std::size_t>(n), 0)); }

  int dim() const { return static_cast<int>(exps_.size()); }
  int total() const { return std::accumulate(exps_.begin(), exps_.end(), 0); }
  int operator[](int i) const { return exps_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& exps() const { return exps_; }

  bool has_odd() const {
    return std::any_of(exps_.begin(), exps_.end(), [](int e) { return e % 2 != 0; });
  }

  Multiindex operator+(const Multiindex& o) const {
    if (o.dim() != dim()) throw InputError("multi-index dimension mismatch");
    std::vector<int> r(exps_);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += o.exps_[i];
    return Multiindex(std::move(r));
  }

  /// x^alpha, with 0^0 = 1.
  double monomial(std::span<const double> x) const {
    double v = 1.0;
    for (std::size_t i = 0; i < exps_.size(); ++i) {
      const double xi = x[i];
      for (int e = 0; e < exps_[i]; ++e) v *= xi;
    }
    return v;
  }

  std::string str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < exps_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(exps_[i]);
    }
    return s + ")";
  }

  auto operator<=>(const Multiindex&) const = default;
  bool operator==(const Multiindex&) const = default;

private:
  std::vector<int> exps_;
};

/// Graded-lexicographic order: lower total degree first, then lexicographically
/// larger exponent of x1 first (x1^2 < x1 x2 < x2^2).
struct GradedLexLess {
  bool operator()(const Multiindex& a, const Multiindex& b) const {
    const int ta = a.total(), tb = b.total();
    if (ta != tb) return ta < tb;
    return a.exps() > b.exps();
  }
};

namespace detail {

inline void enumerate_exact(int n, int total, std::vector<int>& cur, int pos, std::vector<Multiindex>& out) {
  if (pos == n - 1) {
    cur[static_cast<std::size_t>(pos)] = total;
    out.emplace_back(cur);
    return;
  }
  for (int e = total; e >= 0; --e) {
    cur[static_cast<std::size_t>(pos)] = e;
    enumerate_exact(n, total - e, cur, pos + 1, out);
  }
}

} // namespace detail

/// All exponents of total degree exactly `total`, graded-lex order.
inline std::vector<Multiindex> exponents_of_degree(int n, int total) {
  if (n < 1) throw InputError("dimension must be >= 1");
  std::vector<Multiindex> out;
  std::vector<int> cur(static_cast<std::size_t>(n), 0);
  detail::enumerate_exact(n, total, cur, 0, out);
  return out;
}

inline std::uint64_t binomial(int a, int b) {
  if (b < 0 || b > a) return 0;
  b = std::min(b, a - b);
  std::uint64_t r = 1;
  for (int i = 1; i <= b; ++i) r = r * static_cast<std::uint64_t>(a - b + i) / static_cast<std::uint64_t>(i);
  return r;
}

/// Number of monomials of degree exactly d in n variables.
inline std::size_t ell(int n, int d) { return static_cast<std::size_t>(binomial(n + d - 1, d)); }

/// Number of monomials of degree at most k in n variables.
inline std::size_t s_dim(int n, int k) { return static_cast<std::size_t>(binomial(n + k, n)); }

/// Graded-lex list of monomials, either all of degree <= k or ("pure") all of degree == k,
/// with O(log N) index lookup.
class MonomialBasis {
public:
  MonomialBasis() = default;

  static MonomialBasis up_to(int n, int k) { return MonomialBasis(n, k, false); }
  static MonomialBasis pure(int n, int k) { return MonomialBasis(n, k, true); }

  int dim() const { return n_; }
  int max_degree() const { return k_; }
  bool is_pure() const { return pure_; }
  std::size_t size() const { return elems_.size(); }
  const Multiindex& operator[](std::size_t i) const { return elems_[i]; }
  const std::vector<Multiindex>& elements() const { return elems_; }
  auto begin() const { return elems_.begin(); }
  auto end() const { return elems_.end(); }

  /// Position of alpha, or npos when absent.
  std::size_t index_of(const Multiindex& a) const {
    auto it = index_.find(a);
    return it == index_.end() ? npos : it->second;
  }
  bool contains(const Multiindex& a) const { return index_of(a) != npos; }

  /// v(x): values of every basis monomial at x.
  std::vector<double> evaluate(std::span<const double> x) const {
    std::vector<double> v(elems_.size());
    for (std::size_t i = 0; i < elems_.size(); ++i) v[i] = elems_[i].monomial(x);
    return v;
  }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
  MonomialBasis(int n, int k, bool pure) : n_(n), k_(k), pure_(pure) {
    if (n < 1) throw InputError("dimension must be >= 1");
    if (k < 0) throw InputError("basis degree must be >= 0");
    for (int t = pure ? k : 0; t <= k; ++t) {
      auto layer = exponents_of_degree(n, t);
      elems_.insert(elems_.end(), layer.begin(), layer.end());
    }
    for (std::size_t i = 0; i < elems_.size(); ++i) index_.emplace(elems_[i], i);
  }

  int n_ = 0;
  int k_ = 0;
  bool pure_ = false;
  std::vector<Multiindex> elems_;
  std::map<Multiindex, std::size_t> index_;
};

} // namespace homolevel
