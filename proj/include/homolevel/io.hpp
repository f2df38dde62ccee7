#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "error.hpp"
#include "moments.hpp"
#include "multiindex.hpp"
#include "phf.hpp"
#include "polynomial.hpp"

namespace homolevel::io {

using json = nlohmann::json;

// Polynomial files:
//   {"n": 2, "degree": 4, "terms": [{"coeff": 1.0, "exps": [4, 0]}, ...]}
// Other PHF kinds carry a "kind" field:
//   {"kind": "norm_power", "n": 2, "power": 3.0, "scale": 1.0}
//   {"kind": "constant", "n": 2, "value": 1.0}
//   {"kind": "max_of", "children": [<phf>, ...]}
// Body files:
//   {"kind": "box", "lo": [...], "hi": [...]}
//   {"kind": "ball", "center": [...], "radius": r}
//   {"kind": "simplex", "vertices": [[...], ...]}
//   {"kind": "semialgebraic", "n": 2, "constraints": [<polynomial>, ...]}
//
// Serialisation is canonical: keys sorted, terms in graded-lex order with duplicates
// merged, so equal objects print to equal text.

namespace detail {

template <class T>
T get(const json& j, const char* key, const char* what) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string(what) + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InputError(std::string(what) + ": bad field '" + key + "': " + e.what());
  }
}

inline int check_dim(int n, const char* what) {
  if (n < 1) throw InputError(std::string(what) + ": n must be >= 1");
  return n;
}

} // namespace detail

/// General (not necessarily homogeneous) polynomial.
inline Polynomial polynomial_from_json(const json& j) {
  const int n = detail::check_dim(detail::get<int>(j, "n", "polynomial"), "polynomial");
  Polynomial p(n);
  const auto terms = detail::get<json>(j, "terms", "polynomial");
  if (!terms.is_array()) throw InputError("polynomial: 'terms' must be an array");
  for (const auto& t : terms) {
    const auto e = detail::get<std::vector<int>>(t, "exps", "polynomial term");
    if (static_cast<int>(e.size()) != n) throw InputError("polynomial term: exps has the wrong length");
    p.add_term(Multiindex(e), detail::get<double>(t, "coeff", "polynomial term"));
  }
  if (j.contains("degree") && !p.is_zero() && p.degree() > j.at("degree").get<int>())
    throw InputError("polynomial: a term exceeds the declared degree");
  return p;
}

inline json polynomial_to_json(const Polynomial& p) {
  json terms = json::array();
  for (const auto& [a, c] : p.terms()) terms.push_back({{"coeff", c}, {"exps", a.exps()}});
  return {{"n", p.dim()}, {"degree", p.is_zero() ? 0 : p.degree()}, {"terms", terms}};
}

inline HomoPoly homopoly_from_json(const json& j) {
  const Polynomial p = polynomial_from_json(j);
  if (p.is_zero()) throw InputError("polynomial: no nonzero terms");
  const int deg = j.contains("degree") ? j.at("degree").get<int>() : p.degree();
  HomoPoly h(p.dim(), deg);
  for (const auto& [a, c] : p.terms()) h.add_term(a, c); // throws on mixed degrees
  return h;
}

inline Phf phf_from_json(const json& j) {
  const std::string kind = j.contains("kind") ? detail::get<std::string>(j, "kind", "phf") : "polynomial";
  if (kind == "polynomial") return Phf::polynomial(homopoly_from_json(j));
  if (kind == "norm_power") {
    const int n = detail::check_dim(detail::get<int>(j, "n", "norm_power"), "norm_power");
    const double scale = j.contains("scale") ? detail::get<double>(j, "scale", "norm_power") : 1.0;
    return Phf::norm_power(n, detail::get<double>(j, "power", "norm_power"), scale);
  }
  if (kind == "constant") {
    const int n = detail::check_dim(detail::get<int>(j, "n", "constant"), "constant");
    return Phf::constant(n, j.contains("value") ? detail::get<double>(j, "value", "constant") : 1.0);
  }
  if (kind == "max_of") {
    std::vector<Phf> ch;
    for (const auto& c : detail::get<json>(j, "children", "max_of")) ch.push_back(phf_from_json(c));
    return Phf::max_of(std::move(ch));
  }
  throw InputError("phf: unknown kind '" + kind + "'");
}

inline json phf_to_json(const Phf& g) {
  switch (g.kind()) {
  case Phf::Kind::polynomial: {
    json j = polynomial_to_json(g.poly()->as_polynomial());
    j["degree"] = g.poly()->degree();
    return j;
  }
  case Phf::Kind::norm_power:
    if (g.degree() == 0.0) return {{"kind", "constant"}, {"n", g.dim()}, {"value", g.norm_scale()}};
    return {{"kind", "norm_power"}, {"n", g.dim()}, {"power", g.degree()}, {"scale", g.norm_scale()}};
  case Phf::Kind::max_of: {
    json ch = json::array();
    for (const auto& c : g.children()) ch.push_back(phf_to_json(c));
    return {{"kind", "max_of"}, {"children", ch}};
  }
  case Phf::Kind::custom: break;
  }
  throw InputError("custom PHFs have no file representation");
}

inline BodyK body_from_json(const json& j) {
  const auto kind = detail::get<std::string>(j, "kind", "body");
  if (kind == "box") return BodyK::box(detail::get<std::vector<double>>(j, "lo", "box"), detail::get<std::vector<double>>(j, "hi", "box"));
  if (kind == "ball") return BodyK::ball(detail::get<std::vector<double>>(j, "center", "ball"), detail::get<double>(j, "radius", "ball"));
  if (kind == "simplex") return BodyK::simplex(detail::get<std::vector<std::vector<double>>>(j, "vertices", "simplex"));
  if (kind == "semialgebraic") {
    const int n = detail::check_dim(detail::get<int>(j, "n", "semialgebraic"), "semialgebraic");
    std::vector<Polynomial> cons;
    for (const auto& c : detail::get<json>(j, "constraints", "semialgebraic")) cons.push_back(polynomial_from_json(c));
    return BodyK::semialgebraic(n, std::move(cons));
  }
  throw InputError("body: unknown kind '" + kind + "'");
}

inline json body_to_json(const BodyK& K) {
  switch (K.kind()) {
  case BodyK::Kind::box: return {{"kind", "box"}, {"lo", K.lo()}, {"hi", K.hi()}};
  case BodyK::Kind::ball: return {{"kind", "ball"}, {"center", K.center()}, {"radius", K.radius()}};
  case BodyK::Kind::simplex: return {{"kind", "simplex"}, {"vertices", K.vertices()}};
  case BodyK::Kind::semialgebraic: {
    json cons = json::array();
    for (const auto& c : K.constraints()) cons.push_back(polynomial_to_json(c));
    return {{"kind", "semialgebraic"}, {"n", K.dim()}, {"constraints", cons}};
  }
  }
  throw InputError("body: unknown kind");
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("'" + path + "' is not valid JSON: " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
  if (!out) throw InputError("write to '" + path + "' failed");
}

/// Canonical text: sorted keys, no whitespace, shortest round-trip doubles.
inline std::string canonical(const json& j) { return j.dump(); }

/// 64-bit FNV-1a of a string, as 16 hex digits.
inline std::string fnv1a_hex(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  static const char* hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = hex[h & 0xf];
  return out;
}

} // namespace homolevel::io
