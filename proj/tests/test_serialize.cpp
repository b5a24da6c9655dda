#include <gtest/gtest.h>

#include "tqf/serialize.hpp"

using namespace tqf;

TEST(Json, FormRoundTrip) {
  TernaryForm f = make_form(2, 10, 3, 0, 2, 8);
  json j = f;
  EXPECT_EQ(j.dump(), "[2,10,3,0,2,8]");
  EXPECT_EQ(j.get<TernaryForm>(), f);
  EXPECT_THROW(parse_json<TernaryForm>("[1,2,3]"), parse_error);
}

TEST(Json, CertificateRoundTrip) {
  for (auto [id, m] : std::vector<std::pair<std::string, i64>>{{"1a", 3}, {"1b", 1}, {"2b", 12'346}, {"1f", 4002}}) {
    Certificate c = certify(id, m);
    Certificate back = parse_json<Certificate>(json(c).dump());
    EXPECT_EQ(back.entry_id, c.entry_id);
    EXPECT_EQ(back.rule_label, c.rule_label);
    EXPECT_EQ(back.m, c.m);
    EXPECT_EQ(back.stripped_m, c.stripped_m);
    EXPECT_EQ(back.scale_exponent, c.scale_exponent);
    EXPECT_EQ(back.four_exponent, c.four_exponent);
    EXPECT_EQ(back.witness, c.witness);
    EXPECT_EQ(back.f, c.f);
    EXPECT_EQ(back.equivalence.U, c.equivalence.U);
    EXPECT_EQ(back.vector, c.vector);
    EXPECT_TRUE(validate_certificate(back).empty());
  }
}

TEST(Json, CertificateFields) {
  json j = certify("1a", 3);
  EXPECT_EQ(j["witness"]["a"], 5);
  EXPECT_EQ(j["witness"]["h"], 12);
  EXPECT_EQ(j["f"], json::parse("[2,10,3,0,2,8]"));
  EXPECT_EQ(j["U"].size(), 9u);
  EXPECT_EQ(j["rule"], "1a case 2");
}

TEST(Json, WideWitnessValuesUseStrings) {
  Witness w{7, 2, 1, 0, 3, (i128{1} << 70) + 5, -(i128{1} << 80)};
  json j = w;
  EXPECT_TRUE(j["h"].is_string());
  EXPECT_EQ(j["h"], "1180591620717411303429");
  EXPECT_EQ(j["b"], "-1208925819614629174706176");
  EXPECT_EQ(j.get<Witness>(), w);
  Witness small{3, 2, 1, 0, 5, 12, 30};
  EXPECT_TRUE(json(small)["b"].is_number_integer());
}

TEST(Json, ReportRoundTrip) {
  Report r;
  r.name = "demo";
  r.N = 10;
  for (i64 m = 1; m <= 10; ++m) r.record(m, m != 7, "seven");
  r.elapsed_seconds = 0.25;
  json j = r;
  EXPECT_EQ(j["ok"], false);
  Report back = parse_json<Report>(j.dump());
  EXPECT_TRUE(same_outcome(back, r));
  EXPECT_DOUBLE_EQ(back.elapsed_seconds, 0.25);
}

TEST(Json, ParseErrors) {
  EXPECT_THROW(parse_json<Certificate>("{"), parse_error);
  EXPECT_THROW(parse_json<Certificate>("{\"m\": 3}"), parse_error);
  EXPECT_THROW(parse_json<Witness>(R"({"m":1,"D":2,"A":0,"B":0,"a":17,"h":"x1","b":6})"), parse_error);
  EXPECT_THROW(parse_json<Report>(R"({"name":"r","N":1,"checked":1,"passed":0,"mismatches":[]})"), parse_error);
}

TEST(Text, Formatting) {
  std::string cert = format_certificate(certify("1a", 3));
  EXPECT_NE(cert.find("rule: 1a case 2"), std::string::npos);
  EXPECT_NE(cert.find("A=1 B=0 a=5 h=12 b=30"), std::string::npos);
  Report r;
  r.name = "t";
  r.N = 2;
  r.record(1, true);
  r.record(2, false, "bad");
  EXPECT_EQ(format_report(r), "t N=2: 1/2 FAILED\n  m=2: bad\n");
}
