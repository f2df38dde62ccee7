#include <cstdio>
#include <filesystem>
#include <string>

#include <gtest/gtest.h>

#include <homolevel/io.hpp>

using namespace homolevel;
using homolevel::io::json;

namespace {

std::string data(const std::string& name) { return std::string(HOMOLEVEL_DATA_DIR) + "/" + name; }

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("homolevel_io_" + name)).string();
}

} // namespace

TEST(Fnv1a, KnownVectors) {
  EXPECT_EQ(io::fnv1a_hex(""), "cbf29ce484222325");
  EXPECT_EQ(io::fnv1a_hex("a"), "af63dc4c8601ec8c");
  EXPECT_EQ(io::fnv1a_hex("foobar"), "85944171f73967e8");
}

TEST(Polynomial, ParsesAndEvaluates) {
  const auto g = io::phf_from_json(io::read_json_file(data("quartic.poly")));
  EXPECT_EQ(g.kind(), Phf::Kind::polynomial);
  EXPECT_EQ(g.degree(), 4.0);
  const std::vector<double> x{1.0, 2.0};
  EXPECT_DOUBLE_EQ(g(x), 1.0 + 4.0 + 16.0);
}

TEST(Polynomial, CanonicalFormIgnoresTermOrderAndMergesDuplicates) {
  const json a = json::parse(R"({"n":2,"degree":2,"terms":[{"coeff":1,"exps":[2,0]},{"coeff":3,"exps":[0,2]}]})");
  const json b = json::parse(R"({"terms":[{"exps":[0,2],"coeff":2},{"exps":[2,0],"coeff":1},{"exps":[0,2],"coeff":1}],"degree":2,"n":2})");
  const auto ca = io::canonical(io::phf_to_json(io::phf_from_json(a)));
  const auto cb = io::canonical(io::phf_to_json(io::phf_from_json(b)));
  EXPECT_EQ(ca, cb);
  EXPECT_EQ(io::fnv1a_hex(ca), io::fnv1a_hex(cb));
}

TEST(Polynomial, RoundTripThroughFiles) {
  for (const char* f : {"disk.poly", "half_norm.poly", "quartic.poly", "quartic_sum.poly", "x1_squared.poly", "one2.phf"}) {
    const auto g = io::phf_from_json(io::read_json_file(data(f)));
    const std::string text = io::canonical(io::phf_to_json(g));
    const auto path = temp_path(std::string(f) + ".rt");
    io::write_text_file(path, text);
    const auto g2 = io::phf_from_json(io::read_json_file(path));
    EXPECT_EQ(io::canonical(io::phf_to_json(g2)), text) << f;
    std::filesystem::remove(path);
  }
}

TEST(Polynomial, CoefficientsRoundTripExactly) {
  HomoPoly p(2, 3);
  p.add_term(Multiindex{3, 0}, 0.1);
  p.add_term(Multiindex{1, 2}, 1.0 / 3.0);
  p.add_term(Multiindex{0, 3}, -2.5e-17);
  const auto back = io::phf_from_json(json::parse(io::canonical(io::phf_to_json(Phf::polynomial(p)))));
  EXPECT_TRUE(*back.poly() == p);
}

TEST(Phf, OtherKindsRoundTrip) {
  const auto np = Phf::norm_power(3, 2.5, 0.75);
  const auto mx = Phf::max_of({Phf::norm_power(2, 2.0), Phf::polynomial(HomoPoly::norm_power(2, 1))});
  for (const Phf& g : {np, mx, Phf::constant(2, 4.0)}) {
    const auto text = io::canonical(io::phf_to_json(g));
    EXPECT_EQ(io::canonical(io::phf_to_json(io::phf_from_json(json::parse(text)))), text);
  }
  EXPECT_THROW(io::phf_to_json(Phf::custom(1, 2.0, [](std::span<const double> x) { return x[0] * x[0]; })), InputError);
}

TEST(Body, AllKindsRoundTrip) {
  for (const char* f : {"box2.body", "ball2.body", "simplex2.body"}) {
    const auto K = io::body_from_json(io::read_json_file(data(f)));
    const auto text = io::canonical(io::body_to_json(K));
    EXPECT_EQ(io::canonical(io::body_to_json(io::body_from_json(json::parse(text)))), text) << f;
  }
  const json sa = json::parse(R"({"kind":"semialgebraic","n":2,"constraints":[
      {"n":2,"terms":[{"coeff":4,"exps":[0,0]},{"coeff":-1,"exps":[2,0]},{"coeff":-1,"exps":[0,2]}]},
      {"n":2,"terms":[{"coeff":1,"exps":[1,0]}]}]})");
  const auto K = io::body_from_json(sa);
  EXPECT_EQ(K.kind(), BodyK::Kind::semialgebraic);
  const auto text = io::canonical(io::body_to_json(K));
  EXPECT_EQ(io::canonical(io::body_to_json(io::body_from_json(json::parse(text)))), text);
}

TEST(Errors, MalformedInputsAreInputErrors) {
  EXPECT_THROW(io::read_json_file(data("does_not_exist.poly")), InputError);
  const auto bad = temp_path("bad.json");
  io::write_text_file(bad, "{ not json");
  EXPECT_THROW(io::read_json_file(bad), InputError);
  std::filesystem::remove(bad);

  EXPECT_THROW(io::phf_from_json(json::parse(R"({"n":2,"terms":[{"coeff":1,"exps":[2,0]},{"coeff":1,"exps":[1,0]}]})")), InputError);
  EXPECT_THROW(io::phf_from_json(json::parse(R"({"n":2,"terms":[{"coeff":1,"exps":[2,0,0]}]})")), InputError);
  EXPECT_THROW(io::phf_from_json(json::parse(R"({"n":2,"terms":[{"coeff":"x","exps":[2,0]}]})")), InputError);
  EXPECT_THROW(io::phf_from_json(json::parse(R"({"n":2})")), InputError);
  EXPECT_THROW(io::phf_from_json(json::parse(R"({"kind":"spline","n":2})")), InputError);
  EXPECT_THROW(io::body_from_json(json::parse(R"({"kind":"ball","center":[0,0],"radius":-1})")), InputError);
  EXPECT_THROW(io::body_from_json(json::parse(R"({"kind":"torus"})")), InputError);
}
