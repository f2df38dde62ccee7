#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "error.hpp"
#include "gausslike.hpp"
#include "integrate.hpp"
#include "io.hpp"
#include "levelset.hpp"
#include "minvol.hpp"
#include "moments.hpp"
#include "phf.hpp"
#include "polarity.hpp"

namespace homolevel::cli {

using io::json;

// Every run prints one JSON object:
//   {command, inputs_digest, results, quadrature{method, nodes, seed}, timings{wall_ms}, warnings}
// `results` depends only on the inputs and the seed, so repeated runs agree byte for byte there;
// `timings` is the only field that varies.
//
// Exit codes: 0 success, 2 input error (bad flags, files, preconditions), 3 numerical failure.
// Failures print {command, error{type, message}} instead of a report.

struct Options {
  std::string g_path, h_path, body_path, out_path, save_g_path;
  double y = 1.0;
  int k = 1, two_d = 2, d = 2, n = 2, max_degree = 4, max_iters = 200;
  std::string method = "sphere-product-gauss";
  std::optional<int> nodes;
  std::uint64_t seed = QuadratureConfig{}.seed;
  std::optional<double> tol;
  std::vector<double> x;
  bool find_critical = false, kkt = false;
};

namespace detail {

inline json sigma_to_json(const Eigen::MatrixXd& S) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < S.rows(); ++i) {
    json r = json::array();
    for (Eigen::Index j = 0; j < S.cols(); ++j) r.push_back(S(i, j));
    rows.push_back(r);
  }
  return rows;
}

inline json estimate_to_json(double value, double std_error, long long nodes_used) {
  return {{"value", value}, {"std_error", std_error}, {"nodes_used", nodes_used}};
}

class Runner {
public:
  explicit Runner(const Options& o) : o_(o) {
    cfg_.method = parse_method(o.method);
    // Monte Carlo needs far more samples than the angular rule needs nodes.
    cfg_.nodes = o.nodes.value_or(cfg_.method == Method::monte_carlo ? 1'000'000 : QuadratureConfig{}.nodes);
    cfg_.seed = o.seed;
    cfg_.validate();
  }

  const QuadratureConfig& cfg() const { return cfg_; }
  json& inputs() { return inputs_; }
  json& warnings() { return warnings_; }
  /// Commands that do not use the angular rule describe their own sampling here.
  json& quadrature_override() { return quad_override_; }

  Phf load_g() {
    if (o_.g_path.empty()) throw InputError("--g <file> is required");
    Phf g = io::phf_from_json(io::read_json_file(o_.g_path));
    inputs_["g"] = io::phf_to_json(g);
    return g;
  }

  /// h defaults to the constant 1 in the dimension of g.
  Phf load_h(int n) {
    Phf h = o_.h_path.empty() ? Phf::constant(n) : io::phf_from_json(io::read_json_file(o_.h_path));
    if (h.dim() != n) throw InputError("h and g have different dimensions");
    inputs_["h"] = io::phf_to_json(h);
    return h;
  }

  BodyK load_body() {
    if (o_.body_path.empty()) throw InputError("--body <file> is required");
    BodyK K = io::body_from_json(io::read_json_file(o_.body_path));
    inputs_["body"] = io::body_to_json(K);
    return K;
  }

  double y() {
    if (!(o_.y > 0.0)) throw InputError("--y must be > 0");
    inputs_["y"] = o_.y;
    return o_.y;
  }

  void note_boundedness(const Phf& g) {
    const auto b = check_sublevel_bounded(g, 256);
    if (b.verdict == BoundednessReport::Verdict::indeterminate)
      warnings_.push_back("boundedness of {g <= 1} is indeterminate (sampled minimum of g on the sphere is " +
                          std::to_string(b.min_value) + ")");
  }

private:
  const Options& o_;
  QuadratureConfig cfg_;
  json inputs_ = json::object();
  json warnings_ = json::array();
  json quad_override_;
};

inline json cmd_eval(Runner& r, const Options& o) {
  const Phf g = r.load_g();
  if (static_cast<int>(o.x.size()) != g.dim()) throw InputError("--x must have exactly n comma-separated entries");
  r.inputs()["x"] = o.x;
  const auto b = check_sublevel_bounded(g, 256);
  return {{"value", g(o.x)}, {"n", g.dim()}, {"degree", g.degree()}, {"boundedness", verdict_name(b.verdict)},
          {"sphere_min", b.min_value}};
}

inline json report_sublevel(const SublevelReport& s) {
  return {{"value", s.value},           {"std_error", s.std_error}, {"nodes_used", s.nodes_used},
          {"exponent", s.exponent},     {"gamma_factor", s.gamma_factor}, {"y_factor", s.y_factor},
          {"nongauss", s.nongauss}};
}

inline json cmd_vol(Runner& r) {
  const Phf g = r.load_g();
  const double y = r.y();
  r.note_boundedness(g);
  json out = report_sublevel(volume_sublevel(g, y, r.cfg()));
  out["volume"] = out["value"];
  return out;
}

inline json cmd_integrate(Runner& r) {
  const Phf g = r.load_g();
  const Phf h = r.load_h(g.dim());
  const double y = r.y();
  r.note_boundedness(g);
  return report_sublevel(integrate_h_on_sublevel(h, g, y, r.cfg()));
}

inline json cmd_nongauss(Runner& r) {
  const Phf g = r.load_g();
  const Phf h = r.load_h(g.dim());
  r.note_boundedness(g);
  const auto e = nongauss_integral(h, g, r.cfg());
  return estimate_to_json(e.value, e.std_error, e.nodes_used);
}

inline json cmd_identities(Runner& r, const Options& o) {
  const Phf g = r.load_g();
  const Phf h = r.load_h(g.dim());
  const double y = r.y();
  r.note_boundedness(g);
  const double tol = o.tol.value_or(1e-6);
  json recs = json::array();
  bool all = true;
  for (const auto& rep : identity_suite(g, h, y, r.cfg(), tol)) {
    json j = {{"name", rep.name}, {"lhs", rep.lhs}, {"rhs", rep.rhs}, {"rel_residual", rep.rel_residual}, {"pass", rep.pass}};
    if (rep.printed_rhs) {
      j["printed_constant_rhs"] = *rep.printed_rhs;
      j["printed_constant_rel_residual"] = *rep.printed_rel_residual;
    }
    all = all && rep.pass;
    recs.push_back(j);
  }
  return {{"identities", recs}, {"all_pass", all}, {"tol", tol}};
}

inline json cmd_minvol(Runner& r, const Options& o, bool inner) {
  MinVolProblem prob(r.load_body(), o.two_d);
  if (o.k < 1) throw InputError("--k must be >= 1");
  r.inputs()["k"] = o.k;
  r.inputs()["two_d"] = o.two_d;
  r.inputs()["relaxation"] = inner ? "inner" : "outer";
  MinVolOptions opt;
  if (o.tol) opt.gap_tol = *o.tol;
  json out;
  const HomoPoly* g = nullptr;
  std::optional<InnerResult> ir;
  std::optional<OuterResult> orr;
  if (inner) {
    ir = solve_inner(prob, o.k, r.cfg(), opt);
    g = &ir->g;
    const auto& c = ir->cert;
    out = {{"rho", ir->rho},
           {"vol", ir->vol},
           {"iterations", ir->iterations},
           {"stages", ir->stages},
           {"nu", ir->nu},
           {"certificate",
            {{"delta_min_eigenvalue", c.delta_min_eigenvalue},
             {"complementarity_gap", c.complementarity_gap},
             {"gradient_residual", c.gradient_residual},
             {"rho_identity_gap", c.rho_identity_gap},
             {"sigma_mass", c.sigma_mass}}}};
    if (ir->wall_hit) r.warnings().push_back("coefficient wall hit");
  } else {
    orr = solve_outer(prob, o.k, r.cfg(), opt);
    g = &orr->g;
    out = {{"rho_prime", orr->rho_prime},
           {"vol", orr->vol},
           {"iterations", orr->iterations},
           {"stages", orr->stages},
           {"nu", orr->nu},
           {"certificate",
            {{"equality_residual", orr->blocks.equality_residual}, {"gram_min_eigenvalue", orr->blocks.min_eigenvalue}}}};
    if (orr->wall_hit) r.warnings().push_back("coefficient wall hit");
  }
  const json gj = io::phf_to_json(Phf::polynomial(*g));
  out["g"] = gj;
  if (!o.save_g_path.empty()) io::write_text_file(o.save_g_path, io::canonical(gj) + "\n");
  if (o.kkt) {
    const auto kd = kkt_check(*g, prob, r.cfg(), ir ? &ir->cert : nullptr);
    out["kkt"] = {{"max_g_on_K", kd.max_g_on_K},
                  {"contact_points", kd.contact_points},
                  {"contact_count", kd.contact_count},
                  {"caratheodory_bound", kd.caratheodory_bound},
                  {"continuum", kd.continuum},
                  {"weights", kd.weights},
                  {"moment_residual", kd.moment_residual},
                  {"complementarity_gap", kd.complementarity_gap}};
  }
  return out;
}

inline json cmd_polar(Runner& r) {
  const Phf g = r.load_g();
  const auto tab = conjugate_phf(g, g.degree());
  const auto rep = polar_volume(g, g.degree(), r.cfg());
  // A thinned copy of the tabulated conjugate on the unit sphere.
  json sample = json::array();
  const auto& grid = tab.sphere_grid();
  const std::size_t stride = std::max<std::size_t>(1, grid.size() / 16);
  for (std::size_t i = 0; i < grid.size(); i += stride) sample.push_back({{"u", grid[i]}, {"value", tab.values()[i]}});
  if (rep.infinite_directions > 0)
    r.warnings().push_back(std::to_string(rep.infinite_directions) + " sphere directions have g* = +inf");
  return {{"q", rep.q},
          {"conjugate_sample", sample},
          {"polar_volume", rep.volume},
          {"std_error", rep.std_error},
          {"integral", rep.integral}};
}

inline json cmd_gausslike(Runner& r, const Options& o) {
  r.inputs()["d"] = o.d;
  r.inputs()["n"] = o.n;
  r.inputs()["find_critical"] = o.find_critical;
  const SigmaForm init = SigmaForm::identity(o.d, o.n);
  const auto ev = gausslike_eval(init, r.cfg());
  json out = {{"theta", ev.theta}, {"trace_identity_residual", ev.trace_identity_residual}, {"k", init.k_const()}};
  if (o.find_critical) {
    const auto cr = find_critical_sigma(o.d, o.n, init, o.max_iters, r.cfg(), o.tol.value_or(1e-5));
    out["critical"] = {{"theta", cr.theta},
                       {"critical_residual", cr.residual},
                       {"iterations", cr.iterations},
                       {"converged", cr.converged},
                       {"sigma", sigma_to_json(cr.sigma.sigma().matrix())}};
    if (!cr.converged) r.warnings().push_back("fixed-point iteration did not converge");
  }
  return out;
}

inline json cmd_moments(Runner& r, const Options& o) {
  const BodyK K = r.load_body();
  r.inputs()["max_degree"] = o.max_degree;
  const MomentSeq z = lebesgue_moments(K, o.max_degree, r.cfg().seed,
                                       static_cast<std::size_t>(o.nodes.value_or(1'000'000)));
  if (z.provenance() == MomentSeq::Provenance::analytic)
    r.quadrature_override() = {{"method", "closed-form"}, {"nodes", 0}, {"seed", r.cfg().seed}};
  else
    r.quadrature_override() = {{"method", "monte-carlo"}, {"nodes", z.samples()}, {"seed", z.seed()}};
  json ms = json::array();
  for (std::size_t i = 0; i < z.basis().size(); ++i)
    ms.push_back({{"exps", z.basis()[i].exps()}, {"value", z.values()[i]}, {"std_error", z.std_errors()[i]}});
  return {{"provenance", z.provenance() == MomentSeq::Provenance::analytic ? "analytic" : "monte_carlo"},
          {"moments", ms}};
}

inline void add_quadrature_flags(CLI::App* sub, Options& o) {
  sub->add_option("--method", o.method, "sphere-product-gauss (default) or monte-carlo");
  sub->add_option("--nodes", o.nodes, "angular nodes per dimension, or Monte Carlo samples");
  sub->add_option("--seed", o.seed, "seed for Monte Carlo streams");
  sub->add_option("--tol", o.tol, "command tolerance (identity pass level, barrier gap, fixed-point residual)");
  sub->add_option("--out", o.out_path, "also write the report to this file");
}

} // namespace detail

/// Parses argv, runs one command and writes the report. Returns the exit code.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  Options o;
  CLI::App app{"Sublevel volumes, non-Gaussian integrals and minimum-volume sublevel sets of homogeneous functions",
               "homolevel"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print this help and exit"); // "-h" would clash with --h; subcommands inherit this

  auto* eval = app.add_subcommand("eval", "evaluate g at a point and test boundedness of {g <= 1}");
  eval->add_option("--g", o.g_path, "PHF file")->required();
  eval->add_option("--x", o.x, "point, comma separated")->delimiter(',')->required();

  auto* vol = app.add_subcommand("vol", "volume of {g <= y}");
  vol->add_option("--g", o.g_path, "PHF file")->required();
  vol->add_option("--y", o.y, "level (default 1)");

  auto* integ = app.add_subcommand("integrate", "integral of h over {g <= y}");
  integ->add_option("--g", o.g_path, "PHF file")->required();
  integ->add_option("--h", o.h_path, "PHF file (default 1)");
  integ->add_option("--y", o.y, "level (default 1)");

  auto* ng = app.add_subcommand("nongauss", "integral of h exp(-g) over R^n");
  ng->add_option("--g", o.g_path, "PHF file")->required();
  ng->add_option("--h", o.h_path, "PHF file (default 1)");

  auto* ids = app.add_subcommand("identities", "sublevel / non-Gaussian identity suite");
  ids->add_option("--g", o.g_path, "PHF file")->required();
  ids->add_option("--h", o.h_path, "PHF file (default 1)");
  ids->add_option("--y", o.y, "level (default 1)");

  auto* mv = app.add_subcommand("minvol", "minimum-volume sublevel set containing a body");
  mv->require_subcommand(1);
  std::vector<CLI::App*> mv_subs{mv->add_subcommand("inner", "inner (moment) relaxation: lower bounds"),
                                 mv->add_subcommand("outer", "outer (quadratic module) relaxation: upper bounds")};
  for (auto* s : mv_subs) {
    s->add_option("--body", o.body_path, "body file")->required();
    s->add_option("--k", o.k, "relaxation order")->required();
    s->add_option("--two-d", o.two_d, "degree 2d of g")->required();
    s->add_option("--save-g", o.save_g_path, "write the optimal g as a polynomial file");
    s->add_flag("--kkt", o.kkt, "report contact points and KKT weights");
    detail::add_quadrature_flags(s, o);
  }

  auto* pol = app.add_subcommand("polar", "conjugate g* and the volume of the polar of {g <= 1/d}");
  pol->add_option("--g", o.g_path, "PHF file (convex, degree d > 1)")->required();

  auto* gl = app.add_subcommand("gausslike", "theta_d(Sigma) and its critical points");
  gl->add_option("--d", o.d, "half degree")->required();
  gl->add_option("--n", o.n, "dimension")->required();
  gl->add_flag("--find-critical", o.find_critical, "run the damped fixed-point iteration from Sigma = I");
  gl->add_option("--max-iters", o.max_iters, "fixed-point iteration cap (default 200)");

  auto* mom = app.add_subcommand("moments", "Lebesgue moments of a body");
  mom->add_option("--body", o.body_path, "body file")->required();
  mom->add_option("--max-degree", o.max_degree, "largest total degree (default 4)");

  for (auto* s : {eval, vol, integ, ng, ids, pol, gl, mom}) detail::add_quadrature_flags(s, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  std::string command;
  for (const auto* s : app.get_subcommands()) {
    command = s->get_name();
    for (const auto* t : s->get_subcommands()) command += " " + t->get_name();
  }

  const auto t0 = std::chrono::steady_clock::now();
  auto fail = [&](const std::string& type, const std::string& msg, int code) {
    out << json{{"command", command}, {"error", {{"type", type}, {"message", msg}}}}.dump(2) << "\n";
    err << "error: " << msg << "\n";
    return code;
  };

  try {
    detail::Runner r(o);
    json results;
    if (command == "eval") results = detail::cmd_eval(r, o);
    else if (command == "vol") results = detail::cmd_vol(r);
    else if (command == "integrate") results = detail::cmd_integrate(r);
    else if (command == "nongauss") results = detail::cmd_nongauss(r);
    else if (command == "identities") results = detail::cmd_identities(r, o);
    else if (command == "minvol inner") results = detail::cmd_minvol(r, o, true);
    else if (command == "minvol outer") results = detail::cmd_minvol(r, o, false);
    else if (command == "polar") results = detail::cmd_polar(r);
    else if (command == "gausslike") results = detail::cmd_gausslike(r, o);
    else if (command == "moments") results = detail::cmd_moments(r, o);
    else throw InputError("unknown command '" + command + "'");

    const json quad = r.quadrature_override().is_null()
                          ? json{{"method", method_name(r.cfg().method)}, {"nodes", r.cfg().nodes}, {"seed", r.cfg().seed}}
                          : r.quadrature_override();
    json digest_input = r.inputs();
    digest_input["command"] = command;
    digest_input["quadrature"] = quad;
    if (o.tol) digest_input["tol"] = *o.tol;
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    const json report = {{"command", command},
                         {"inputs_digest", io::fnv1a_hex(io::canonical(digest_input))},
                         {"results", results},
                         {"quadrature", quad},
                         {"timings", {{"wall_ms", ms}}},
                         {"warnings", r.warnings()}};
    const std::string text = report.dump(2) + "\n";
    out << text;
    if (!o.out_path.empty()) io::write_text_file(o.out_path, text);
    return 0;
  } catch (const InputError& e) {
    return fail("InputError", e.what(), 2);
  } catch (const NumericalError& e) {
    return fail(failure_name(e.kind()), e.what(), 3);
  }
}

} // namespace homolevel::cli
