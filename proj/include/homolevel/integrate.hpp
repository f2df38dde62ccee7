#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"
#include "multiindex.hpp"
#include "parallel.hpp"
#include "phf.hpp"
#include "quadrature.hpp"

namespace homolevel {

enum class Method { sphere_product_gauss, monte_carlo };

inline const char* method_name(Method m) {
  return m == Method::sphere_product_gauss ? "sphere-product-gauss" : "monte-carlo";
}

inline Method parse_method(const std::string& s) {
  if (s == "sphere-product-gauss" || s == "gauss") return Method::sphere_product_gauss;
  if (s == "monte-carlo" || s == "mc") return Method::monte_carlo;
  throw InputError("unknown quadrature method '" + s + "'");
}

/// `nodes` is the angular node count per dimension (deterministic rule) or the
/// sample count (Monte Carlo).
struct QuadratureConfig {
  Method method = Method::sphere_product_gauss;
  int nodes = 256;
  std::uint64_t seed = 20240607;
  double tol = 1e-8;

  void validate() const {
    if (nodes < 2) throw InputError("quadrature nodes must be >= 2");
    if (!(tol > 0.0)) throw InputError("quadrature tol must be > 0");
  }
};

struct IntegralEstimate {
  double value = 0.0;
  double std_error = 0.0; ///< zero for deterministic quadrature
  long long nodes_used = 0;
};

/// Integration nodes on S^{n-1}: the tensor rule, or uniform random directions
/// (normalised Gaussian vectors from a counter-based stream) with equal weights.
inline SphereRule sphere_nodes(int n, const QuadratureConfig& cfg) {
  cfg.validate();
  if (cfg.method == Method::sphere_product_gauss) return sphere_product_rule(n, cfg.nodes);
  SphereRule r;
  r.n = n;
  const auto count = static_cast<std::size_t>(cfg.nodes);
  r.dirs.resize(count * static_cast<std::size_t>(n));
  r.weights.assign(count, sphere_area(n) / static_cast<double>(count));
  const CounterRng rng(cfg.seed);
  parallel_for(count, [&](std::size_t i) {
    double* v = r.dirs.data() + i * static_cast<std::size_t>(n);
    double r2 = 0.0;
    for (int j = 0; j < n; ++j) {
      v[j] = rng.normal(i * static_cast<std::uint64_t>(n) + static_cast<std::uint64_t>(j));
      r2 += v[j] * v[j];
    }
    const double inv = 1.0 / std::sqrt(r2);
    for (int j = 0; j < n; ++j) v[j] *= inv;
  });
  return r;
}

namespace detail {

/// Evaluates g on every sphere node and rejects functions that are not strictly
/// positive on the sphere: g(theta) < 1e-12 * max g raises NotCoercive.
inline std::vector<double> coercive_values(const Phf& g, const SphereRule& rule) {
  std::vector<double> gv(rule.size());
  const int n = rule.n;
  parallel_for(rule.size(), [&](std::size_t i) { gv[i] = g(std::span<const double>(rule.dir(i), static_cast<std::size_t>(n))); });
  double gmax = 0.0;
  for (double v : gv)
    if (std::isfinite(v)) gmax = std::max(gmax, v);
  for (std::size_t i = 0; i < gv.size(); ++i) {
    const double v = gv[i];
    if (std::isnan(v) || v < 1e-12 * gmax || v <= 0.0) {
      throw NumericalError(Failure::not_coercive,
                           "g(theta) = " + std::to_string(v) + " on the unit sphere; the integral of exp(-g) diverges");
    }
  }
  return gv;
}

/// Weighted sums over sphere nodes of `width` node functions
/// f(theta, g(theta), out). Monte Carlo rules also report standard errors.
template <class F>
std::vector<IntegralEstimate> sphere_sum(const Phf& g, const QuadratureConfig& cfg, std::size_t width, F&& f) {
  const SphereRule rule = sphere_nodes(g.dim(), cfg);
  const std::vector<double> gv = coercive_values(g, rule);
  const int n = rule.n;
  const bool mc = cfg.method == Method::monte_carlo;
  const std::size_t acc_width = mc ? 2 * width : width;
  auto sums = chunked_sum(rule.size(), acc_width, [&](std::size_t i, double* acc) {
    double buf[64];
    std::vector<double> big;
    double* out = buf;
    if (width > 64) {
      big.resize(width);
      out = big.data();
    }
    f(std::span<const double>(rule.dir(i), static_cast<std::size_t>(n)), gv[i], out);
    const double w = rule.weights[i];
    for (std::size_t k = 0; k < width; ++k) {
      acc[k] += w * out[k];
      if (mc) acc[width + k] += w * w * out[k] * out[k];
    }
  });
  std::vector<IntegralEstimate> est(width);
  const auto N = static_cast<double>(rule.size());
  for (std::size_t k = 0; k < width; ++k) {
    est[k].value = sums[k];
    est[k].nodes_used = static_cast<long long>(rule.size());
    if (mc) {
      // sums[width+k] = sum (A f_i / N)^2 with A the sphere area
      const double mean_sq = sums[width + k] * N;
      const double var = std::max(0.0, mean_sq - sums[k] * sums[k]);
      est[k].std_error = std::sqrt(var / std::max(1.0, N - 1.0));
    }
  }
  return est;
}

inline void check_pair(const Phf& h, const Phf& g) {
  if (h.dim() != g.dim()) throw InputError("h and g have different dimensions");
  if (g.degree() == 0.0) throw InputError("g must have nonzero degree");
  if (g.degree() < 0.0)
    throw NumericalError(Failure::radial_divergence, "g has negative degree; exp(-g) does not decay along rays");
  if (g.dim() + h.degree() <= 0.0)
    throw NumericalError(Failure::radial_divergence, "n + p <= 0: the radial integral diverges at the origin");
}

} // namespace detail

/// Integral over R^n of h exp(-g), reduced to the sphere:
///   Gamma((n+p)/d) / d * integral over S^{n-1} of h(theta) g(theta)^{-(n+p)/d}.
inline IntegralEstimate nongauss_integral(const Phf& h, const Phf& g, const QuadratureConfig& cfg = {}) {
  detail::check_pair(h, g);
  const double d = g.degree();
  const double s = (g.dim() + h.degree()) / d;
  auto est = detail::sphere_sum(g, cfg, 1, [&](std::span<const double> th, double gth, double* out) {
    const double hv = h(th);
    out[0] = hv == 0.0 ? 0.0 : hv * std::pow(gth, -s);
  });
  const double c = std::tgamma(s) / d;
  est[0].value *= c;
  est[0].std_error *= c;
  return est[0];
}

/// Integrals of x^gamma exp(-g) for every listed exponent, all from one pass over
/// the sphere nodes.
inline std::vector<IntegralEstimate> exp_moments(const Phf& g, std::span<const Multiindex> exps,
                                                 const QuadratureConfig& cfg = {}) {
  if (g.degree() <= 0.0) throw NumericalError(Failure::radial_divergence, "g must have positive degree");
  const int n = g.dim();
  const double d = g.degree();
  std::vector<double> powers(exps.size()), scale(exps.size());
  for (std::size_t j = 0; j < exps.size(); ++j) {
    if (exps[j].dim() != n) throw InputError("moment exponent dimension mismatch");
    powers[j] = (n + exps[j].total()) / d;
    scale[j] = std::tgamma(powers[j]) / d;
  }
  auto est = detail::sphere_sum(g, cfg, exps.size(), [&](std::span<const double> th, double gth, double* out) {
    const double lg = std::log(gth);
    for (std::size_t j = 0; j < exps.size(); ++j) out[j] = exps[j].monomial(th) * std::exp(-powers[j] * lg);
  });
  for (std::size_t j = 0; j < exps.size(); ++j) {
    est[j].value *= scale[j];
    est[j].std_error *= scale[j];
  }
  return est;
}

/// Direct integral of h over {g <= y}: for every sphere direction the radial
/// integral of r^{n+p-1} h(theta) over [0, (y/g(theta))^{1/d}] is done by
/// Gauss-Legendre, with no Gamma-function shortcut.
inline IntegralEstimate sublevel_integral_direct(const Phf& h, const Phf& g, double y, const QuadratureConfig& cfg = {}) {
  detail::check_pair(h, g);
  if (!(y > 0.0)) throw InputError("sublevel value y must be > 0");
  const double d = g.degree();
  const double e = g.dim() + h.degree() - 1.0;
  static const GaussLegendre gl = gauss_legendre(40);
  auto est = detail::sphere_sum(g, cfg, 1, [&](std::span<const double> th, double gth, double* out) {
    const double hv = h(th);
    if (hv == 0.0) {
      out[0] = 0.0;
      return;
    }
    const double R = std::pow(y / gth, 1.0 / d);
    double acc = 0.0;
    for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
      const double r = 0.5 * R * (gl.nodes[q] + 1.0);
      acc += gl.weights[q] * std::pow(r, e);
    }
    out[0] = hv * 0.5 * R * acc;
  });
  return est[0];
}

/// Monte Carlo estimate of the integral of 1{g <= y} h over the box
/// [-a, a]^n, with a the caller-supplied half width; `cfg.nodes` samples.
inline IntegralEstimate mc_indicator_integral(const Phf& h, const Phf& g, double y, double box_halfwidth,
                                              const QuadratureConfig& cfg = {}) {
  cfg.validate();
  if (h.dim() != g.dim()) throw InputError("h and g have different dimensions");
  if (!(box_halfwidth > 0.0)) throw InputError("box half width must be > 0");
  const int n = g.dim();
  const auto N = static_cast<std::size_t>(cfg.nodes);
  const CounterRng rng(cfg.seed);
  auto sums = chunked_sum(N, 2, [&](std::size_t i, double* acc) {
    double x[16];
    std::vector<double> big;
    double* p = x;
    if (n > 16) {
      big.resize(static_cast<std::size_t>(n));
      p = big.data();
    }
    for (int j = 0; j < n; ++j)
      p[j] = box_halfwidth * (2.0 * rng.uniform(i * static_cast<std::uint64_t>(n) + static_cast<std::uint64_t>(j)) - 1.0);
    const std::span<const double> xs(p, static_cast<std::size_t>(n));
    if (g(xs) <= y) {
      const double v = h(xs);
      acc[0] += v;
      acc[1] += v * v;
    }
  });
  const double vol = std::pow(2.0 * box_halfwidth, n);
  const double mean = sums[0] / static_cast<double>(N);
  const double var = std::max(0.0, sums[1] / static_cast<double>(N) - mean * mean);
  IntegralEstimate est;
  est.value = vol * mean;
  est.std_error = vol * std::sqrt(var / std::max(1.0, static_cast<double>(N) - 1.0));
  est.nodes_used = static_cast<long long>(N);
  return est;
}

} // namespace homolevel
