#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "error.hpp"
#include "integrate.hpp"
#include "phf.hpp"
#include "quadrature.hpp"
#include "special.hpp"

namespace homolevel {

/// Value of a sublevel-set integral together with the Gamma bookkeeping
///   value = y^{(n+p)/d} / Gamma(1 + (n+p)/d) * nongauss.
struct SublevelReport {
  double value = 0.0;
  double std_error = 0.0;
  long long nodes_used = 0;
  double exponent = 0.0;     ///< (n+p)/d
  double gamma_factor = 0.0; ///< 1 / Gamma(1 + (n+p)/d)
  double y_factor = 0.0;     ///< y^{(n+p)/d}
  double nongauss = 0.0;     ///< integral of h exp(-g) over R^n
};

/// Integral of h over {g <= y} through the integral of h exp(-g).
inline SublevelReport integrate_h_on_sublevel(const Phf& h, const Phf& g, double y, const QuadratureConfig& cfg = {}) {
  if (!(y > 0.0)) throw InputError("sublevel value y must be > 0");
  const IntegralEstimate ng = nongauss_integral(h, g, cfg);
  SublevelReport r;
  r.exponent = (g.dim() + h.degree()) / g.degree();
  r.gamma_factor = 1.0 / std::tgamma(1.0 + r.exponent);
  r.y_factor = std::pow(y, r.exponent);
  r.nongauss = ng.value;
  r.value = r.y_factor * r.gamma_factor * ng.value;
  r.std_error = r.y_factor * r.gamma_factor * ng.std_error;
  r.nodes_used = ng.nodes_used;
  return r;
}

/// vol{g <= y} = y^{n/d} / Gamma(1 + n/d) * integral of exp(-g).
inline SublevelReport volume_sublevel(const Phf& g, double y, const QuadratureConfig& cfg = {}) {
  return integrate_h_on_sublevel(Phf::constant(g.dim()), g, y, cfg);
}

/// Volume of {g_k <= y for all k} through psi = max_k g_k.
inline SublevelReport volume_intersection(const std::vector<Phf>& gs, double y, const QuadratureConfig& cfg = {}) {
  return volume_sublevel(Phf::max_of(gs), y, cfg);
}

/// Handles g~_k(x) = g_k(z_k^{-1/d} x), so that {g~_k <= 1} = {g_k <= z_k}.
inline std::vector<Phf> rescale_to_unit(const std::vector<Phf>& gs, const std::vector<double>& z) {
  if (gs.size() != z.size()) throw InputError("one level per function is required");
  std::vector<Phf> out;
  out.reserve(gs.size());
  for (std::size_t k = 0; k < gs.size(); ++k) {
    if (!(z[k] > 0.0)) throw InputError("levels must be strictly positive");
    out.push_back(gs[k].argument_scaled(std::pow(z[k], -1.0 / gs[k].degree())));
  }
  return out;
}

struct MomentRelation {
  double lhs = 0.0; ///< integral of x^alpha exp(-g) over R^n
  double rhs = 0.0; ///< Gamma(1 + (n+|alpha|)/d) * integral of x^alpha over {g <= 1}
  double rel_residual = 0.0;
};

/// Moment of exp(-g) dx computed two ways; `lhs` is the returned moment.
inline MomentRelation moment_via_sublevel(const Multiindex& alpha, const HomoPoly& g, const QuadratureConfig& cfg = {}) {
  if (alpha.dim() != g.dim()) throw InputError("exponent dimension mismatch");
  const Phf gh = Phf::polynomial(g);
  const Phf h = alpha.total() == 0 ? Phf::constant(g.dim()) : Phf::polynomial(HomoPoly::monomial(alpha));
  MomentRelation m;
  m.lhs = nongauss_integral(h, gh, cfg).value;
  const double s = (g.dim() + alpha.total()) / static_cast<double>(g.degree());
  m.rhs = std::tgamma(1.0 + s) * sublevel_integral_direct(h, gh, 1.0, cfg).value;
  m.rel_residual = std::abs(m.lhs - m.rhs) / (1.0 + std::abs(m.rhs));
  return m;
}

struct IdentityReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double rel_residual = 0.0;
  bool pass = false;
  /// Only for the sublevel Euler identity: right-hand side with the constant
  /// 1/Gamma((n+p)/d) instead of d/((n+p+d) Gamma((n+p)/d)).
  std::optional<double> printed_rhs;
  std::optional<double> printed_rel_residual;
};

namespace detail {

inline double rel_residual(double lhs, double rhs) { return std::abs(lhs - rhs) / (1.0 + std::abs(rhs)); }

/// Sphere sum of h(theta) * integral_0^R r^{n+p-1} xi(g(theta) r^d) dr with
/// R = (t_max / g(theta))^{1/d}; the radial integral is composite Gauss-Legendre
/// in r. For t_max = inf the radial range is cut where g(theta) r^d = 120.
inline double radial_weighted_integral(const Phf& h, const Phf& g, const std::function<double(double)>& xi, double t_max,
                                       const QuadratureConfig& cfg) {
  check_pair(h, g);
  const double d = g.degree();
  const double e = g.dim() + h.degree() - 1.0;
  const double t_hi = std::isinf(t_max) ? 120.0 : t_max;
  constexpr int panels = 16;
  static const GaussLegendre gl = gauss_legendre(24);
  auto est = sphere_sum(g, cfg, 1, [&](std::span<const double> th, double gth, double* out) {
    const double hv = h(th);
    if (hv == 0.0) {
      out[0] = 0.0;
      return;
    }
    const double R = std::pow(t_hi / gth, 1.0 / d);
    const double w = R / panels;
    double acc = 0.0;
    for (int k = 0; k < panels; ++k) {
      for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
        const double r = w * (k + 0.5 * (gl.nodes[q] + 1.0));
        acc += gl.weights[q] * std::pow(r, e) * xi(gth * std::pow(r, d));
      }
    }
    out[0] = hv * 0.5 * w * acc;
  });
  return est[0].value;
}

} // namespace detail

/// Checks the four radial identities for (g, h) at level y:
///   euler:            integral g h e^{-g}       = (n+p)/d * integral h e^{-g}
///   sublevel_euler:   integral_{g<=1} g h       = d/((n+p+d) Gamma((n+p)/d)) * integral h e^{-g}
///   incomplete_gamma: integral_{g<=y} e^{-g} / integral e^{-g} = P(n/d, y)
///   exp_growth:       integral_{g<=y} e^{g}     = integral e^{-g} / Gamma(n/d) * integral_0^y e^z z^{n/d-1} dz
/// Left sides come from direct radial quadrature, right sides from the closed-form
/// constants times nongauss_integral.
inline std::vector<IdentityReport> identity_suite(const Phf& g, const Phf& h, double y, const QuadratureConfig& cfg = {},
                                                  double tol = 1e-6) {
  if (!(y > 0.0)) throw InputError("sublevel value y must be > 0");
  const double n = g.dim();
  const double d = g.degree();
  const double p = h.degree();
  const double s = (n + p) / d;
  const double inf = std::numeric_limits<double>::infinity();
  const Phf one = Phf::constant(g.dim());
  const double int_h = nongauss_integral(h, g, cfg).value;
  const double int_1 = nongauss_integral(one, g, cfg).value;

  std::vector<IdentityReport> out;
  auto push = [&](std::string name, double lhs, double rhs) {
    IdentityReport r;
    r.name = std::move(name);
    r.lhs = lhs;
    r.rhs = rhs;
    r.rel_residual = detail::rel_residual(lhs, rhs);
    r.pass = r.rel_residual <= tol;
    out.push_back(std::move(r));
    return &out.back();
  };

  push("euler", detail::radial_weighted_integral(h, g, [](double t) { return t * std::exp(-t); }, inf, cfg), s * int_h);

  const double lhs20 = detail::radial_weighted_integral(h, g, [](double t) { return t; }, 1.0, cfg);
  IdentityReport* r20 = push("sublevel_euler", lhs20, d / ((n + p + d) * std::tgamma(s)) * int_h);
  r20->printed_rhs = int_h / std::tgamma(s);
  r20->printed_rel_residual = detail::rel_residual(lhs20, *r20->printed_rhs);

  const double lhs21 = detail::radial_weighted_integral(one, g, [](double t) { return std::exp(-t); }, y, cfg) / int_1;
  push("incomplete_gamma", lhs21, incomplete_gamma_p(n / d, y));

  const double lhs22 = detail::radial_weighted_integral(one, g, [](double t) { return std::exp(t); }, y, cfg);
  push("exp_growth", lhs22, int_1 / std::tgamma(n / d) * exp_power_integral(n / d, y));
  return out;
}

} // namespace homolevel
