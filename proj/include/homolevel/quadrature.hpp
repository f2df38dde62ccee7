#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "error.hpp"

namespace homolevel {

struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1] (Newton iteration on P_n from the
/// Chebyshev-like initial guesses).
inline GaussLegendre gauss_legendre(int n) {
  if (n < 1) throw InputError("Gauss-Legendre order must be >= 1");
  GaussLegendre r;
  r.nodes.resize(static_cast<std::size_t>(n));
  r.weights.resize(static_cast<std::size_t>(n));
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) <= 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - z * z) * pp * pp);
    r.nodes[static_cast<std::size_t>(i)] = -z;
    r.nodes[static_cast<std::size_t>(n - 1 - i)] = z;
    r.weights[static_cast<std::size_t>(i)] = w;
    r.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  return r;
}

/// Surface area of the unit sphere S^{n-1}.
inline double sphere_area(int n) { return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n); }

/// Deterministic tensor-product rule on S^{n-1}, n <= 4: flat directions array
/// (n doubles per node) with surface weights summing to |S^{n-1}|.
///
/// n=1: the two points +-1. n=2: trapezoid in the azimuth with `nodes` points.
/// n=3: Gauss-Legendre in cos(polar) with nodes/2 points times the azimuth rule.
/// n=4: Gauss-Chebyshev (second kind) in cos of the first polar angle and
/// Gauss-Legendre in cos of the second, both with nodes/2 points, times the
/// azimuth rule.
struct SphereRule {
  int n = 0;
  std::vector<double> dirs;
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
  const double* dir(std::size_t i) const { return dirs.data() + i * static_cast<std::size_t>(n); }
};

inline SphereRule sphere_product_rule(int n, int nodes) {
  if (nodes < 2) throw InputError("quadrature needs at least 2 nodes");
  if (n < 1 || n > 4) throw InputError("sphere-product-gauss supports 1 <= n <= 4; use monte-carlo");
  SphereRule r;
  r.n = n;
  const double two_pi = 2.0 * std::numbers::pi;
  if (n == 1) {
    r.dirs = {1.0, -1.0};
    r.weights = {1.0, 1.0};
    return r;
  }
  const int n_az = nodes;
  const int n_pol = std::max(2, nodes / 2);
  std::vector<double> az_c(static_cast<std::size_t>(n_az)), az_s(az_c.size());
  for (int j = 0; j < n_az; ++j) {
    const double phi = two_pi * j / n_az;
    az_c[static_cast<std::size_t>(j)] = std::cos(phi);
    az_s[static_cast<std::size_t>(j)] = std::sin(phi);
  }
  const double w_az = two_pi / n_az;
  if (n == 2) {
    for (int j = 0; j < n_az; ++j) {
      r.dirs.push_back(az_c[static_cast<std::size_t>(j)]);
      r.dirs.push_back(az_s[static_cast<std::size_t>(j)]);
      r.weights.push_back(w_az);
    }
    return r;
  }
  const GaussLegendre gl = gauss_legendre(n_pol);
  if (n == 3) {
    for (int i = 0; i < n_pol; ++i) {
      const double t = gl.nodes[static_cast<std::size_t>(i)];
      const double st = std::sqrt(std::max(0.0, 1.0 - t * t));
      for (int j = 0; j < n_az; ++j) {
        r.dirs.push_back(st * az_c[static_cast<std::size_t>(j)]);
        r.dirs.push_back(st * az_s[static_cast<std::size_t>(j)]);
        r.dirs.push_back(t);
        r.weights.push_back(gl.weights[static_cast<std::size_t>(i)] * w_az);
      }
    }
    return r;
  }
  // n == 4: x = (t, s cos b, s sin b cos c, s sin b sin c) with t = cos a,
  // s = sqrt(1 - t^2); dS = s dt sin b db dc. The t rule is Gauss-Chebyshev of
  // the second kind (weight sqrt(1 - t^2)), the cos b rule Gauss-Legendre.
  for (int i = 1; i <= n_pol; ++i) {
    const double a = std::numbers::pi * i / (n_pol + 1);
    const double ca = std::cos(a), sa = std::sin(a);
    const double wa = std::numbers::pi / (n_pol + 1) * sa * sa;
    for (int k = 0; k < n_pol; ++k) {
      const double cb = gl.nodes[static_cast<std::size_t>(k)];
      const double sb = std::sqrt(std::max(0.0, 1.0 - cb * cb));
      const double wb = gl.weights[static_cast<std::size_t>(k)];
      for (int j = 0; j < n_az; ++j) {
        r.dirs.push_back(ca);
        r.dirs.push_back(sa * cb);
        r.dirs.push_back(sa * sb * az_c[static_cast<std::size_t>(j)]);
        r.dirs.push_back(sa * sb * az_s[static_cast<std::size_t>(j)]);
        r.weights.push_back(wa * wb * w_az);
      }
    }
  }
  return r;
}

} // namespace homolevel
