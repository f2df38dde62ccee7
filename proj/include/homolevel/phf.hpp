#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"
#include "parallel.hpp"
#include "polynomial.hpp"

namespace homolevel {

/// A positively homogeneous function R^n -> R u {+inf} with a declared real degree.
///
/// Handles are immutable and cheap to copy (shared state). Polynomial, max-of and
/// norm-power kinds are homogeneous by construction; custom closures are checked
/// statistically when built.
class Phf {
public:
  enum class Kind { polynomial, max_of, norm_power, custom };
  using Fn = std::function<double(std::span<const double>)>;

  static Phf polynomial(HomoPoly p) {
    auto s = std::make_shared<State>();
    s->n = p.dim();
    s->degree = p.degree();
    s->kind = Kind::polynomial;
    s->poly = std::move(p);
    return Phf(std::move(s));
  }

  /// psi = max_k g_k. All children must share dimension and degree.
  static Phf max_of(std::vector<Phf> children) {
    if (children.empty()) throw InputError("max-of needs at least one child");
    auto s = std::make_shared<State>();
    s->n = children.front().dim();
    s->degree = children.front().degree();
    for (const auto& c : children) {
      if (c.dim() != s->n) throw InputError("max-of children have different dimensions");
      if (c.degree() != s->degree) throw InputError("max-of children have mixed degrees");
    }
    s->kind = Kind::max_of;
    s->children = std::move(children);
    return Phf(std::move(s));
  }

  /// scale * ||x||_2^power. power = 0 gives the constant `scale`.
  static Phf norm_power(int n, double power, double scale = 1.0) {
    if (n < 1) throw InputError("dimension must be >= 1");
    auto s = std::make_shared<State>();
    s->n = n;
    s->degree = power;
    s->kind = Kind::norm_power;
    s->scale = scale;
    return Phf(std::move(s));
  }

  static Phf constant(int n, double c = 1.0) { return norm_power(n, 0.0, c); }

  /// Arbitrary closure with a declared degree; homogeneity is spot-checked at
  /// 20 random (x, lambda) pairs and InputError is thrown on violation.
  static Phf custom(int n, double degree, Fn fn, std::uint64_t check_seed = 0x9f1c3u) {
    if (n < 1) throw InputError("dimension must be >= 1");
    auto s = std::make_shared<State>();
    s->n = n;
    s->degree = degree;
    s->kind = Kind::custom;
    s->fn = std::move(fn);
    Phf h(std::move(s));
    h.check_homogeneity(20, check_seed, 1e-8);
    return h;
  }

  int dim() const { return s_->n; }
  double degree() const { return s_->degree; }
  Kind kind() const { return s_->kind; }
  const HomoPoly* poly() const { return s_->poly ? &*s_->poly : nullptr; }
  const std::vector<Phf>& children() const { return s_->children; }
  /// Multiplier of a norm-power PHF.
  double norm_scale() const { return s_->scale; }

  double operator()(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != s_->n) throw InputError("point dimension does not match PHF dimension");
    return eval_unchecked(x);
  }

  /// s * g, same kind where possible.
  Phf scaled(double factor) const {
    if (!(factor > 0.0)) throw InputError("scale factor must be positive");
    switch (s_->kind) {
    case Kind::polynomial: return polynomial(*s_->poly * factor);
    case Kind::norm_power: return norm_power(s_->n, s_->degree, s_->scale * factor);
    case Kind::max_of: {
      std::vector<Phf> ch;
      for (const auto& c : s_->children) ch.push_back(c.scaled(factor));
      return max_of(std::move(ch));
    }
    case Kind::custom: {
      auto self = *this;
      auto s = std::make_shared<State>(*s_);
      s->fn = [self, factor](std::span<const double> x) { return factor * self.eval_unchecked(x); };
      return Phf(std::move(s));
    }
    }
    return *this;
  }

  /// x -> g(c x). Equal to c^degree * g for every kind; custom closures are
  /// composed literally.
  Phf argument_scaled(double c) const {
    if (!(c > 0.0)) throw InputError("argument scale must be positive");
    if (s_->kind != Kind::custom) return scaled(std::pow(c, s_->degree));
    auto self = *this;
    auto s = std::make_shared<State>(*s_);
    s->fn = [self, c](std::span<const double> x) {
      std::vector<double> y(x.begin(), x.end());
      for (double& v : y) v *= c;
      return self.eval_unchecked(y);
    };
    return Phf(std::move(s));
  }

  /// Max relative violation of g(l x) = l^d g(x) over `trials` random pairs;
  /// throws InputError when above `tol`.
  double check_homogeneity(int trials, std::uint64_t seed, double tol) const {
    CounterRng rng(seed);
    std::uint64_t ctr = 0;
    double worst = 0.0;
    std::vector<double> x(static_cast<std::size_t>(s_->n)), lx(x.size());
    for (int t = 0; t < trials; ++t) {
      for (auto& v : x) v = 4.0 * rng.uniform(ctr++) - 2.0;
      const double lam = 0.05 + 9.95 * rng.uniform(ctr++);
      for (std::size_t i = 0; i < x.size(); ++i) lx[i] = lam * x[i];
      const double a = eval_unchecked(lx);
      const double b = std::pow(lam, s_->degree) * eval_unchecked(x);
      if (std::isinf(a) && std::isinf(b) && (a > 0) == (b > 0)) continue;
      const double err = std::abs(a - b) / (1.0 + std::abs(b));
      if (!(err <= tol)) {
        throw InputError("function is not positively homogeneous of degree " + std::to_string(s_->degree) +
                         " (relative violation " + std::to_string(err) + ")");
      }
      worst = std::max(worst, err);
    }
    return worst;
  }

private:
  struct State {
    int n = 1;
    double degree = 0.0;
    Kind kind = Kind::custom;
    std::optional<HomoPoly> poly;
    std::vector<Phf> children;
    double scale = 1.0;
    Fn fn;
  };

  explicit Phf(std::shared_ptr<const State> s) : s_(std::move(s)) {}

  double eval_unchecked(std::span<const double> x) const {
    switch (s_->kind) {
    case Kind::polynomial: return (*s_->poly)(x);
    case Kind::norm_power: {
      double r2 = 0.0;
      for (double v : x) r2 += v * v;
      if (s_->degree == 0.0) return s_->scale;
      return s_->scale * std::pow(r2, 0.5 * s_->degree);
    }
    case Kind::max_of: {
      double m = -std::numeric_limits<double>::infinity();
      for (const auto& c : s_->children) m = std::max(m, c.eval_unchecked(x));
      return m;
    }
    case Kind::custom: return s_->fn(x);
    }
    return std::numeric_limits<double>::quiet_NaN();
  }

  std::shared_ptr<const State> s_;
};

/// Outcome of the sampled membership test for the cone of PHFs with bounded sublevel set.
struct BoundednessReport {
  enum class Verdict { bounded, unbounded, indeterminate };
  Verdict verdict = Verdict::indeterminate;
  double min_value = 0.0;
  std::vector<double> witness; ///< unit direction achieving the sampled minimum
};

inline const char* verdict_name(BoundednessReport::Verdict v) {
  switch (v) {
  case BoundednessReport::Verdict::bounded: return "bounded";
  case BoundednessReport::Verdict::unbounded: return "unbounded";
  case BoundednessReport::Verdict::indeterminate: return "indeterminate";
  }
  return "?";
}

/// Deterministic unit directions used for sampled sphere tests: the two points of
/// S^0 for n=1, equispaced angles for n=2, signed axes plus seeded Gaussian
/// directions otherwise.
inline std::vector<std::vector<double>> sample_sphere_directions(int n, int samples, std::uint64_t seed = 17) {
  std::vector<std::vector<double>> dirs;
  if (n == 1) return {{1.0}, {-1.0}};
  if (n == 2) {
    for (int i = 0; i < samples; ++i) {
      const double t = 2.0 * std::numbers::pi * i / samples;
      dirs.push_back({std::cos(t), std::sin(t)});
    }
    return dirs;
  }
  for (int i = 0; i < n && static_cast<int>(dirs.size()) < samples; ++i) {
    for (double sgn : {1.0, -1.0}) {
      std::vector<double> e(static_cast<std::size_t>(n), 0.0);
      e[static_cast<std::size_t>(i)] = sgn;
      dirs.push_back(e);
    }
  }
  CounterRng rng(seed);
  std::uint64_t ctr = 0;
  while (static_cast<int>(dirs.size()) < samples) {
    std::vector<double> v(static_cast<std::size_t>(n));
    double r2 = 0.0;
    for (auto& x : v) {
      x = rng.normal(ctr++);
      r2 += x * x;
    }
    const double r = std::sqrt(r2);
    for (auto& x : v) x /= r;
    dirs.push_back(std::move(v));
  }
  return dirs;
}

/// Samples g on the unit sphere. A direction with g <= -1e-9 proves the ray stays
/// in {g <= 1} (unbounded); a sampled minimum > 1e-9 is reported bounded;
/// anything in between is indeterminate.
inline BoundednessReport check_sublevel_bounded(const Phf& g, int sphere_samples) {
  if (sphere_samples < 1) throw InputError("sphere_samples must be >= 1");
  if (g.degree() == 0.0) throw InputError("a PHF with bounded sublevel set cannot have degree 0");
  constexpr double tol = 1e-9;
  BoundednessReport rep;
  rep.min_value = std::numeric_limits<double>::infinity();
  for (const auto& th : sample_sphere_directions(g.dim(), sphere_samples)) {
    const double v = g(th);
    if (v < rep.min_value || rep.witness.empty()) {
      rep.min_value = v;
      rep.witness = th;
    }
  }
  if (g.degree() < 0.0) {
    // g -> 0 along every ray: the sublevel set {g <= 1} contains a neighbourhood of infinity.
    rep.verdict = BoundednessReport::Verdict::unbounded;
  } else if (rep.min_value > tol) {
    rep.verdict = BoundednessReport::Verdict::bounded;
  } else if (rep.min_value >= -tol) {
    rep.verdict = BoundednessReport::Verdict::indeterminate;
  } else {
    rep.verdict = BoundednessReport::Verdict::unbounded;
  }
  return rep;
}

} // namespace homolevel
