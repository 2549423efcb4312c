#include <gtest/gtest.h>

#include "numlab/json_io.hpp"
#include "numlab/verify.hpp"
#include "support.hpp"

using namespace numlab;
using namespace numlab::testing;
using io::Json;

namespace {

Json report_for(const RVector& g, const ConvexBody<Rational>& c) {
  Json out{{"instance", io::encode_instance(g, c)}};
  out.update(io::encode(verify_theorem(g, c)));
  return out;
}

}  // namespace

TEST(JsonIo, RationalsAndVectors) {
  EXPECT_EQ(io::encode(R("-3/6")), Json("-1/2"));
  EXPECT_EQ(io::encode(R("4")), Json("4"));
  EXPECT_EQ(io::decode_rational(Json(7)), 7);
  EXPECT_EQ(io::decode_rational(Json("2/4")), R(1, 2));
  EXPECT_ANY_THROW(io::decode_rational(Json("1/0")));
  EXPECT_THROW(io::decode_rational(Json(0.5)), io::FormatError);
  EXPECT_THROW(io::decode_vector(Json("1")), io::FormatError);
  const RVector v = vec({"1/3", "0", "-5/2"});
  EXPECT_TRUE(same(io::decode_vector(io::encode(v)), v));
}

TEST(JsonIo, BodyRoundTrip) {
  fuzz::SplitMix64 rng(71);
  for (int t = 0; t < 200; ++t) {
    const auto n = static_cast<Eigen::Index>(1 + rng.below(5));
    std::vector<RVector> pts, rays;
    for (std::size_t j = 0, k = 1 + rng.below(5); j < k; ++j) pts.push_back(draw_vector(rng, n, 5, 9));
    if (rng.below(2)) rays.push_back(draw_vector(rng, n, 2, 3) + ones(n));
    const ConvexBody<Rational> c(pts, rays);
    const Json j = io::encode(c);
    EXPECT_EQ(io::decode_body(j), c);
    EXPECT_EQ(io::decode_body(Json::parse(j.dump())), c);
  }
}

TEST(JsonIo, BodyErrors) {
  EXPECT_THROW(io::decode_body(Json::object()), io::FormatError);
  EXPECT_THROW(io::decode_body(Json{{"points", "x"}}), io::FormatError);
  EXPECT_ANY_THROW(io::decode_body(Json::parse(R"({"points": [["1", "-1"]]})")));
}

TEST(JsonIo, DigestIsStable) {
  const Json a = io::encode_instance(vec({"1", "1"}), body({vec({"1", "1"}), vec({"2", "0"})}));
  const Json b = io::encode_instance(vec({"1", "1"}), body({vec({"1", "1"}), vec({"2", "0"})}));
  const Json c = io::encode_instance(vec({"1", "1"}), body({vec({"1", "1"}), vec({"2", "1"})}));
  EXPECT_EQ(io::digest(a), io::digest(b));
  EXPECT_NE(io::digest(a), io::digest(c));
  EXPECT_EQ(io::digest(a).size(), 16u);
}

TEST(JsonIo, CertificateShape) {
  const auto cert = std::get<NumeraireCertificate<Rational>>(
      is_numeraire(vec({"1", "1"}), body({vec({"1", "1"}), vec({"2", "0"})})));
  const Json j = io::encode(cert);
  EXPECT_EQ(j.at("q"), Json::parse(R"(["1/2", "1/2"])"));
  EXPECT_TRUE(j.contains("epsilon"));
  EXPECT_TRUE(j.at("binding").is_array());
}

TEST(JsonIo, ChainRoundTrip) {
  const RVector g = vec({"1", "1"});
  const auto c = body({vec({"1", "1"}), vec({"2", "1"})});
  const auto chain = std::get<UnboundedClosure<Rational>>(cs_closure(g, c).verdict).chain;
  const auto back = io::decode_chain(Json::parse(io::encode(chain).dump()));
  ASSERT_EQ(back.size(), chain.size());
  EXPECT_TRUE(verify_witness(g, c, back).ok);
  EXPECT_THROW(io::step_kind_from_string("teleport"), io::FormatError);
  for (auto k : {StepKind::Generator, StepKind::GeneratorRay, StepKind::Combination, StepKind::Extension,
                 StepKind::Ray}) {
    EXPECT_EQ(io::step_kind_from_string(io::to_string(k)), k);
  }
}

TEST(JsonIo, FarkasRoundTrip) {
  const RVector g = vec({"1", "1"});
  const auto c = body({vec({"1", "1"}), vec({"2", "1"})});
  const auto inf = std::get<NumeraireInfeasible<Rational>>(is_numeraire(g, c));
  const auto back = io::decode_farkas(Json::parse(io::encode(inf.farkas).dump()));
  EXPECT_TRUE(verify_infeasibility(g, c, back));
}

TEST(JsonIo, ModelAndGrid) {
  const auto m = io::decode_model(Json::parse(R"({"xi": ["1/10", "1", "10"]})"));
  EXPECT_EQ(m.space().p(), RVector(RVector::Constant(3, R(1, 3))));
  const auto m2 = io::decode_model(Json::parse(R"({"p": ["1/2", "1/2"], "xi": ["1", "2"]})"));
  EXPECT_EQ(m2.xi_min(), 1);
  EXPECT_THROW(io::decode_model(Json::parse(R"({"p": ["1"]})")), io::FormatError);
  EXPECT_EQ(io::decode_grid(Json::parse(R"(["0", "1/4", 1])")), (std::vector<Rational>{0, R(1, 4), 1}));
}

TEST(Verify, AcceptsGenuineReports) {
  const auto r1 = report_for(vec({"1", "1"}), body({vec({"1", "1"}), vec({"2", "0"})}));
  const auto v1 = verify::verify_report(Json::parse(r1.dump()));
  EXPECT_TRUE(v1.ok());
  EXPECT_GE(v1.checked, 3u);
  const auto r2 = report_for(vec({"1", "1"}), body({vec({"1", "1"}), vec({"2", "1"})}));
  const auto v2 = verify::verify_report(r2);
  EXPECT_TRUE(v2.ok());
  EXPECT_GE(v2.checked, 2u);
}

TEST(Verify, AcceptsProofReports) {
  const RVector g = vec({"2", "2"});
  const auto c = body({vec({"2", "2"}), vec({"4", "0"})});
  Json out{{"instance", io::encode_instance(g, c)}};
  out.update(io::encode(run_pipeline(g, c)));
  const auto v = verify::verify_report(out);
  EXPECT_TRUE(v.ok());
  EXPECT_GE(v.checked, 1u);
}

TEST(Verify, RejectsTamperedCertificate) {
  auto r = report_for(vec({"1", "1"}), body({vec({"1", "1"}), vec({"2", "0"})}));
  r["lp"]["certificate"]["q"] = Json::parse(R"(["3/4", "1/4"])");
  const auto v = verify::verify_report(r);
  EXPECT_FALSE(v.ok());
}

TEST(Verify, RejectsTamperedIterates) {
  auto r = report_for(vec({"1", "1"}), body({vec({"1", "1"}), vec({"3/2", "1/2"})}));
  ASSERT_EQ(r["closure"]["verdict"], "bounded");
  r["closure"]["iterates"][0]["points"].push_back(Json::parse(R"(["3", "0"])"));
  EXPECT_FALSE(verify::verify_report(r).ok());
}

TEST(Verify, RejectsTamperedFarkas) {
  auto r = report_for(vec({"1", "1"}), body({vec({"1", "1"}), vec({"2", "1"})}));
  auto& farkas = r["lp"]["certificate"]["farkas"];
  ASSERT_TRUE(farkas.is_array());
  for (auto& x : farkas) x = "0";
  EXPECT_FALSE(verify::verify_report(r).ok());
}

TEST(Verify, RejectsTamperedChain) {
  auto r = report_for(vec({"1", "1"}), body({vec({"1", "1"}), vec({"2", "1"})}));
  r["closure"]["ray"] = Json::parse(R"(["1", "1"])");
  EXPECT_FALSE(verify::verify_report(r).ok());
  auto s = report_for(vec({"1", "1"}), body({vec({"1", "1"}), vec({"2", "1"})}));
  s["closure"]["chain"][0]["value"] = Json::parse(R"(["5", "1"])");
  EXPECT_FALSE(verify::verify_report(s).ok());
}

TEST(Verify, RejectsReportForAnotherInstance) {
  auto r = report_for(vec({"1", "1"}), body({vec({"1", "1"}), vec({"2", "0"})}));
  r["instance"] = io::encode_instance(vec({"1", "1"}), body({vec({"1", "1"}), vec({"2", "1/2"})}));
  EXPECT_FALSE(verify::verify_report(r).ok());
}

TEST(Verify, MalformedFieldsAreFailures) {
  auto r = report_for(vec({"1", "1"}), body({vec({"1", "1"}), vec({"2", "0"})}));
  r["lp"]["certificate"]["q"] = "oops";
  EXPECT_FALSE(verify::verify_report(r).ok());
  EXPECT_TRUE(verify::verify_report(Json::object()).ok());
}
