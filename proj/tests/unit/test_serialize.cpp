#include <gtest/gtest.h>

#include <regex>

#include "apollo/serialize.hpp"

using namespace apollo;

namespace {

Packing circle_packing(int depth, unsigned workers = 1) {
  static const auto c = std::make_shared<const Case>(resolve_case(builtin_case("circle")));
  OrbitBudget b;
  b.max_depth = depth;
  b.workers = workers;
  return build_packing(c, b);
}

Json round_trip(const Packing& p) { return Json::parse(dump(packing_json(p))); }

}  // namespace

TEST(Json, ScalarsRoundTrip) {
  const Integer big = Integer(1) << 90;
  EXPECT_EQ(integer_from_json(integer_json(big), "x"), big);
  EXPECT_EQ(integer_from_json(integer_json(-7), "x"), -7);
  EXPECT_TRUE(integer_json(-7).is_number_integer());
  EXPECT_TRUE(integer_json(big).is_string());
  EXPECT_EQ(rational_from_json(rational_json(Rational(-3, 8)), "q"), Rational(-3, 8));
  EXPECT_THROW(integer_from_json(Json("abc"), "x"), SchemaError);
  EXPECT_THROW(integer_from_json(Json(1.5), "x"), SchemaError);
  const IntegerMatrix m{{1, -2}, {3, 4}};
  EXPECT_EQ(matrix_from_json(matrix_json(m), "m"), m);
}

TEST(Json, PackingRoundTripReverifies) {
  const Packing p = circle_packing(8);
  const Json j = round_trip(p);
  EXPECT_EQ(j["format"], kPackingFormat);
  EXPECT_EQ(j["case"], "circle");
  EXPECT_EQ(j["elements"].size(), p.elements.size());
  EXPECT_FALSE(j.contains("workers"));
  const LoadedPacking lp = load_packing(j);
  EXPECT_EQ(lp.gram, p.source->ctx.gram());
  EXPECT_EQ(lp.scale_sq, 2);
  ASSERT_EQ(lp.normals.size(), p.elements.size());
  for (std::size_t i = 0; i < lp.normals.size(); ++i) EXPECT_EQ(lp.normals[i], p.elements[i].normal);
  const auto r = reverify(lp);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.report.tangent_cliques, p.verification.tangent_cliques);
}

TEST(Json, TamperedElementIsNamed) {
  const Packing p = circle_packing(8);
  Json j = round_trip(p);
  j["elements"][3]["normal"][0] = j["elements"][3]["normal"][0].get<long long>() + 1;
  const auto r = reverify(load_packing(j));
  EXPECT_FALSE(r.pass);
  bool named = false;
  for (const auto& s : r.report.counterexamples) named = named || s.find("element 3") != std::string::npos;
  EXPECT_TRUE(named);

  Json k = round_trip(p);
  k["elements"][5]["curvature_sq"] = rational_json(Rational(12345));
  const auto rk = reverify(load_packing(k));
  EXPECT_FALSE(rk.pass);
  EXPECT_EQ(rk.curvature_mismatches, 1u);
}

TEST(Json, SchemaErrors) {
  const Packing p = circle_packing(4);
  Json j = round_trip(p);
  j["elements"][0].erase("normal");
  EXPECT_THROW(load_packing(j), SchemaError);
  j = round_trip(p);
  j["gram"][0][0] = -4;
  try {
    load_packing(j);
    FAIL() << "expected SchemaError";
  } catch (const SchemaError& e) {
    EXPECT_NE(std::string(e.what()).find("Gram matrix does not match"), std::string::npos);
  }
  j = round_trip(p);
  j["format"] = "other/2";
  EXPECT_THROW(load_packing(j), SchemaError);
  j = round_trip(p);
  j["elements"][1]["normal"] = Json::array({1, 2});
  EXPECT_THROW(load_packing(j), SchemaError);
  EXPECT_THROW(load_packing(Json::array()), SchemaError);
}

TEST(Json, ByteIdenticalAcrossWorkers) {
  EXPECT_EQ(dump(packing_json(circle_packing(12, 1))), dump(packing_json(circle_packing(12, 3))));
}

TEST(Svg, DepthZeroIsOneLine) {
  const std::string svg = packing_svg(circle_packing(0));
  EXPECT_EQ(svg.rfind("<?xml", 0), 0u);
  const std::regex line("<line ");
  EXPECT_EQ(std::distance(std::sregex_iterator(svg.begin(), svg.end(), line), std::sregex_iterator()), 1);
  EXPECT_EQ(svg.find("<circle"), std::string::npos);
}

TEST(Svg, CircleRadiiAreReciprocalCurvatures) {
  const Packing p = circle_packing(8);
  const std::string svg = packing_svg(p);
  const std::regex circle(R"re(<circle cx="([^"]+)" cy="([^"]+)" r="([^"]+)"/>)re");
  std::vector<const BoundarySphere*> round;
  for (const auto& e : p.elements)
    if (!e.is_flat()) round.push_back(&e);
  std::size_t i = 0;
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), circle); it != std::sregex_iterator(); ++it, ++i) {
    ASSERT_LT(i, round.size());
    const double r = std::stod((*it)[3]);
    EXPECT_NEAR(r, 1.0 / round[i]->curvature, 1e-8 * r);
    EXPECT_NEAR(std::stod((*it)[1]), round[i]->center[0], 1e-8 * (1 + std::abs(round[i]->center[0])));
    EXPECT_NEAR(-std::stod((*it)[2]), round[i]->center[1], 1e-8);
  }
  EXPECT_EQ(i, round.size());
}

TEST(Svg, SpherePackingIsRejected) {
  const auto c = std::make_shared<const Case>(resolve_case(builtin_case("sphere")));
  OrbitBudget b;
  b.max_depth = 2;
  EXPECT_THROW(packing_svg(build_packing(c, b)), DomainError);
}

TEST(Text, CsvAndFitJson) {
  CountSeries s;
  s.thresholds = {1, 10};
  s.counts = {3, 40};
  EXPECT_EQ(series_csv(s), "threshold,count\n1,3\n10,40\n");
  ExponentFit f;
  f.delta_hat = 1.3;
  f.lo = 10;
  f.hi = 100;
  const Json j = fit_json("curvature", f);
  EXPECT_EQ(j["mode"], "curvature");
  EXPECT_DOUBLE_EQ(j["reference_delta"].get<double>(), kApollonianDelta);
  EXPECT_EQ(j["range"][1], 100);
}
