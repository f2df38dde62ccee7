#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "error.hpp"
#include "integrate.hpp"
#include "parallel.hpp"
#include "phf.hpp"

namespace homolevel {

/// sup over r > 0 of r a - r^d b, for d > 1 and q = d/(d-1).
/// Zero when a <= 0 or b = +inf; +inf when a > 0 and b <= 0.
inline double radial_sup(double a, double b, double d) {
  if (!(a > 0.0) || std::isinf(b)) return 0.0;
  if (!(b > 0.0)) return std::numeric_limits<double>::infinity();
  const double q = d / (d - 1.0);
  return (d - 1.0) / d * std::pow(a, q) * std::pow(d * b, 1.0 - q);
}

/// Directions of the sphere on a structured grid: N angles for n=2,
/// N x N (polar midpoints, azimuth) for n=3, {+1, -1} for n=1.
class SphereGrid {
public:
  SphereGrid(int n, int size) : n_(n), size_(size) {
    if (n < 1 || n > 3) throw InputError("conjugation supports n <= 3");
    if (n > 1 && size < 8) throw InputError("grid size must be at least 8");
    if (n == 1) {
      dirs_ = {{1.0}, {-1.0}};
    } else if (n == 2) {
      for (int j = 0; j < size; ++j) dirs_.push_back(point(angle_of(j)));
    } else {
      for (int i = 0; i < size; ++i)
        for (int j = 0; j < size; ++j) dirs_.push_back(point(polar_of(i), azimuth_of(j)));
    }
  }

  int dim() const { return n_; }
  int size_param() const { return size_; }
  std::size_t size() const { return dirs_.size(); }
  const std::vector<double>& operator[](std::size_t i) const { return dirs_[i]; }
  const std::vector<std::vector<double>>& directions() const { return dirs_; }

  double angle_of(int j) const { return 2.0 * std::numbers::pi * j / size_; }
  double polar_of(int i) const { return std::numbers::pi * (i + 0.5) / size_; }
  double azimuth_of(int j) const { return 2.0 * std::numbers::pi * j / size_; }

  static std::vector<double> point(double phi) { return {std::cos(phi), std::sin(phi)}; }
  static std::vector<double> point(double theta, double phi) {
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
  }

  /// Index of the grid direction closest (in angle coordinates) to unit u.
  std::size_t nearest(std::span<const double> u) const {
    if (n_ == 1) return u[0] >= 0.0 ? 0 : 1;
    const double two_pi = 2.0 * std::numbers::pi;
    if (n_ == 2) {
      double phi = std::atan2(u[1], u[0]);
      if (phi < 0) phi += two_pi;
      return static_cast<std::size_t>(static_cast<int>(std::lround(phi / two_pi * size_)) % size_);
    }
    const double theta = std::acos(std::clamp(u[2], -1.0, 1.0));
    double phi = std::atan2(u[1], u[0]);
    if (phi < 0) phi += two_pi;
    const int i = std::clamp(static_cast<int>(theta / std::numbers::pi * size_), 0, size_ - 1);
    const int j = static_cast<int>(std::lround(phi / two_pi * size_)) % size_;
    return static_cast<std::size_t>(i * size_ + j);
  }

private:
  int n_, size_;
  std::vector<std::vector<double>> dirs_;
};

/// g* on a grid of unit directions; q-homogeneous extension to all of R^n.
class ConjugateTable {
public:
  ConjugateTable(const Phf& g, double d, int grid_size) : g_(g), d_(d), grid_(g.dim(), grid_size) {
    if (!(d > 1.0)) throw InputError("conjugation needs degree d > 1");
    q_ = d / (d - 1.0);
    gvals_.resize(grid_.size());
    for (std::size_t t = 0; t < grid_.size(); ++t) gvals_[t] = g(grid_[t]);
    values_.resize(grid_.size());
    argmax_.resize(grid_.size());
    parallel_for(
        grid_.size(),
        [&](std::size_t i) {
          const auto best = grid_scan(grid_[i], best_grid_theta(grid_[i]));
          argmax_[i] = best;
          values_[i] = refine(grid_[i], best);
        },
        16);
    for (double v : values_)
      if (std::isinf(v)) ++infinite_;
  }

  int dim() const { return grid_.dim(); }
  double degree_d() const { return d_; }
  double degree_q() const { return q_; }
  const SphereGrid& sphere_grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  /// Number of grid directions where the sup is +inf.
  std::size_t infinite_directions() const { return infinite_; }

  /// g*(u) = |u|^q g*(u/|u|); the direction value starts from the argmax of the
  /// nearest tabulated direction and is refined locally.
  double operator()(std::span<const double> u) const {
    double r2 = 0.0;
    for (double v : u) r2 += v * v;
    if (r2 == 0.0) return 0.0;
    const double r = std::sqrt(r2);
    std::vector<double> e(u.begin(), u.end());
    for (double& v : e) v /= r;
    const std::size_t j = grid_.nearest(e);
    const double val = refine(e, grid_scan(e, argmax_[j]));
    return std::isinf(val) ? val : std::pow(r, q_) * val;
  }

  /// g* as a PHF of degree q.
  Phf phf() const {
    const ConjugateTable self = *this;
    return Phf::custom(dim(), q_, [self](std::span<const double> u) { return self(u); });
  }

private:
  double objective(std::span<const double> u, std::span<const double> theta, double gtheta) const {
    double a = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) a += u[i] * theta[i];
    return radial_sup(a, gtheta, d_);
  }

  double objective_at(std::span<const double> u, const std::vector<double>& theta) const {
    return objective(u, theta, g_(theta));
  }

  std::size_t best_grid_theta(std::span<const double> u) const {
    std::size_t best = 0;
    double bv = -1.0;
    for (std::size_t t = 0; t < grid_.size(); ++t) {
      const double v = objective(u, grid_[t], gvals_[t]);
      if (v > bv) {
        bv = v;
        best = t;
      }
    }
    return best;
  }

  // Hill climb on the grid from `start` through neighbouring directions.
  std::size_t grid_scan(std::span<const double> u, std::size_t start) const {
    const int n = grid_.dim();
    if (n == 1) return best_grid_theta(u);
    const int N = grid_.size_param();
    std::size_t cur = start;
    double cv = objective(u, grid_[cur], gvals_[cur]);
    for (int guard = 0; guard < 4 * N; ++guard) {
      std::size_t best = cur;
      double bv = cv;
      auto consider = [&](std::size_t t) {
        const double v = objective(u, grid_[t], gvals_[t]);
        if (v > bv) {
          bv = v;
          best = t;
        }
      };
      if (n == 2) {
        const int j = static_cast<int>(cur);
        for (int s = -2; s <= 2; ++s) consider(static_cast<std::size_t>(((j + s) % N + N) % N));
      } else {
        const int i = static_cast<int>(cur) / N, j = static_cast<int>(cur) % N;
        for (int di = -1; di <= 1; ++di)
          for (int dj = -1; dj <= 1; ++dj) {
            int ii = i + di, jj = j + dj;
            if (ii < 0 || ii >= N) {
              // crossing a pole flips the azimuth by half a turn
              ii = ii < 0 ? 0 : N - 1;
              jj += N / 2;
            }
            consider(static_cast<std::size_t>(ii * N + ((jj % N) + N) % N));
          }
      }
      if (best == cur) break;
      cur = best;
      cv = bv;
    }
    // a flat zero objective carries no information: fall back to the full scan
    if (!(cv > 0.0)) return best_grid_theta(u);
    return cur;
  }

  double refine(std::span<const double> u, std::size_t seed) const {
    const int n = grid_.dim();
    const double base = objective(u, grid_[seed], gvals_[seed]);
    if (n == 1 || std::isinf(base) || !(base > 0.0)) return base;
    const int N = grid_.size_param();
    if (n == 2) {
      const double h = 2.0 * std::numbers::pi / N;
      const double phi0 = grid_.angle_of(static_cast<int>(seed));
      auto neg = [&](double phi) { return -objective_at(u, SphereGrid::point(phi)); };
      const auto r = boost::math::tools::brent_find_minima(neg, phi0 - 1.5 * h, phi0 + 1.5 * h, 52);
      return std::max(base, -r.second);
    }
    // n = 3: compass search in (polar, azimuth)
    double th = grid_.polar_of(static_cast<int>(seed) / N), ph = grid_.azimuth_of(static_cast<int>(seed) % N);
    double best = base, step = std::numbers::pi / N;
    while (step > 1e-11) {
      bool moved = false;
      for (auto [dt, dp] : {std::pair{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}}) {
        const double t2 = th + dt * step, p2 = ph + dp * step;
        const double v = objective_at(u, SphereGrid::point(t2, p2));
        if (v > best) {
          best = v;
          th = t2;
          ph = p2;
          moved = true;
          break;
        }
      }
      if (!moved) step *= 0.5;
    }
    return best;
  }

  Phf g_;
  double d_, q_ = 0.0;
  SphereGrid grid_;
  std::vector<double> gvals_, values_;
  std::vector<std::size_t> argmax_;
  std::size_t infinite_ = 0;
};

/// Default grid: 720 directions for n=2, 64^2 for n=3.
inline int default_conjugate_grid(int n) { return n == 3 ? 64 : 720; }

/// Midpoint convexity of g on `trials` random pairs in [-2, 2]^n; throws on violation.
inline void check_convexity(const Phf& g, int trials = 200, std::uint64_t seed = 0xc0417u) {
  CounterRng rng(seed);
  std::uint64_t ctr = 0;
  const auto n = static_cast<std::size_t>(g.dim());
  std::vector<double> x(n), y(n), m(n);
  for (int t = 0; t < trials; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = 4.0 * rng.uniform(ctr++) - 2.0;
      y[i] = 4.0 * rng.uniform(ctr++) - 2.0;
      m[i] = 0.5 * (x[i] + y[i]);
    }
    const double gx = g(x), gy = g(y);
    if (std::isinf(gx) || std::isinf(gy)) continue;
    const double mid = 0.5 * (gx + gy), gm = g(m);
    if (gm > mid + 1e-9 * (1.0 + std::abs(mid)))
      throw NumericalError(Failure::convexity_check, "g is not convex: midpoint value exceeds the chord");
  }
}

/// Legendre-Fenchel conjugate of a convex degree-d PHF.
inline ConjugateTable conjugate_phf(const Phf& g, double d, int grid_size = 0) {
  if (!(d > 1.0)) throw InputError("conjugation needs degree d > 1");
  if (std::abs(g.degree() - d) > 1e-12) throw InputError("declared degree does not match the PHF");
  check_convexity(g);
  return ConjugateTable(g, d, grid_size > 0 ? grid_size : default_conjugate_grid(g.dim()));
}

struct PolarVolumeReport {
  double volume = 0.0;
  double std_error = 0.0;
  double q = 0.0;
  double integral = 0.0;           ///< integral of exp(-g*)
  std::size_t infinite_directions = 0; ///< grid directions with g* = +inf, left out of the quadrature
};

/// vol(G°) for G = {g <= 1/d}: G° = {g* <= 1/q}, so vol = integral exp(-g*) / (q^{n/q} Gamma(1 + n/q)).
inline PolarVolumeReport polar_volume(const Phf& g, double d, const QuadratureConfig& cfg = {}, int grid_size = 0) {
  if (check_sublevel_bounded(g, 256).verdict == BoundednessReport::Verdict::unbounded)
    throw InputError("G = {g <= 1/d} is unbounded");
  const ConjugateTable tab = conjugate_phf(g, d, grid_size);
  const double n = g.dim(), q = tab.degree_q();
  const auto est = nongauss_integral(Phf::constant(g.dim()), tab.phf(), cfg);
  const double c = 1.0 / (std::pow(q, n / q) * std::tgamma(1.0 + n / q));
  return {est.value * c, est.std_error * c, q, est.value, tab.infinite_directions()};
}

} // namespace homolevel
