#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <string>

#include <json.hpp>

#include "combforge/combforge.h"

using nlohmann::json;

namespace {

struct Obj {
  cf_object* p = nullptr;
  ~Obj() { cf_object_free(p); }
};

struct Str {
  char* p = nullptr;
  ~Str() { cf_string_free(p); }
  std::string str() const { return p ? std::string(p) : std::string(); }
};

std::string identity_choi_json(const std::string& in, const std::string& out) {
  json wires = json::array();
  wires.push_back({{"label", in}, {"dim", 2}, {"kind", "quantum"}, {"step", 0}, {"direction", "input"}});
  wires.push_back(
      {{"label", out}, {"dim", 2}, {"kind", "quantum"}, {"step", 0}, {"direction", "output"}});
  // |I>><<I| with wire order (in, out)
  json re = json::array();
  json im = json::array();
  std::vector<double> rev(16, 0.0);
  auto idx = [](int i, int j, int k, int l) { return (i * 2 + j) * 4 + (k * 2 + l); };
  for (int n = 0; n < 2; ++n)
    for (int m = 0; m < 2; ++m) rev[idx(n, n, m, m)] = 1.0;
  for (double v : rev) {
    re.push_back(v);
    im.push_back(0.0);
  }
  json doc;
  doc["schema"] = "combforge.operator/1";
  doc["wires"] = wires;
  doc["matrix"] = {{"re", re}, {"im", im}};
  return doc.dump();
}

}  // namespace

TEST_CASE("version and error strings exist") {
  CHECK(std::strlen(cf_version()) > 0);
  CHECK(cf_last_error() != nullptr);
}

TEST_CASE("parse errors map to schema status") {
  cf_object* obj = nullptr;
  CHECK(cf_object_parse("{", &obj) == CF_ERR_SCHEMA);
  CHECK(cf_object_parse("{\"schema\":\"nope\"}", &obj) == CF_ERR_SCHEMA);
  CHECK(std::strlen(cf_last_error()) > 0);
  CHECK(cf_object_read_file("/no/such/file.json", &obj) == CF_ERR_IO);
}

TEST_CASE("example generators, validation and cost reports") {
  Obj iso;
  Str iso_report;
  REQUIRE(cf_example("isotropic", 2, 1.5, &iso.p, &iso_report.p) == CF_OK);
  auto ir = json::parse(iso_report.str());
  CHECK(ir["cost_dim"].get<int>() == 2);
  CHECK(ir["log2_cost_dim"].get<double>() == doctest::Approx(1.0));

  Str cost;
  REQUIRE(cf_channel_cost(iso.p, 0, 0, 1e-8, &cost.p) == CF_OK);
  auto cj = json::parse(cost.str());
  CHECK(cj["max_d_hi"].get<int>() == 2);
  CHECK(cj["bounds"][0]["d_lo"].get<int>() == 2);

  Obj delay;
  REQUIRE(cf_example("delay", 3, 0, &delay.p, nullptr) == CF_OK);
  Str vreport;
  CHECK(cf_validate(delay.p, 1e-8, &vreport.p) == CF_OK);
  CHECK(json::parse(vreport.str())["pass"].get<bool>());

  cf_object* bad = nullptr;
  CHECK(cf_example("unknown-family", 2, 0, &bad, nullptr) == CF_ERR_ARG);
}

TEST_CASE("upb comb validates and serializes") {
  Obj upb;
  REQUIRE(cf_example("upb", 0, 0, &upb.p, nullptr) == CF_OK);
  Str report;
  CHECK(cf_validate(upb.p, 1e-8, &report.p) == CF_OK);
  Str text;
  REQUIRE(cf_object_to_json(upb.p, &text.p) == CF_OK);
  Obj reparsed;
  REQUIRE(cf_object_parse(text.p, &reparsed.p) == CF_OK);
  Str text2;
  REQUIRE(cf_object_to_json(reparsed.p, &text2.p) == CF_OK);
  CHECK(text.str() == text2.str());
}

TEST_CASE("link composes identity channels") {
  Obj a, b, ab;
  REQUIRE(cf_object_parse(identity_choi_json("0", "1").c_str(), &a.p) == CF_OK);
  REQUIRE(cf_object_parse(identity_choi_json("1", "2").c_str(), &b.p) == CF_OK);
  REQUIRE(cf_link(a.p, b.p, &ab.p) == CF_OK);
  Str text;
  REQUIRE(cf_object_to_json(ab.p, &text.p) == CF_OK);
  auto j = json::parse(text.str());
  CHECK(j["wires"].size() == 2);
}

TEST_CASE("realize: channels and manifest data") {
  Obj delay;
  REQUIRE(cf_example("delay", 2, 0, &delay.p, nullptr) == CF_OK);
  Obj real;
  Str report;
  REQUIRE(cf_realize(delay.p, 1e-8, &real.p, &report.p) == CF_OK);
  auto rj = json::parse(report.str());
  CHECK(rj["memories"][0]["quantum_dim"].get<int>() == 2);
  CHECK(rj["relink_defect"].get<double>() < 1e-7);

  size_t count = 0;
  REQUIRE(cf_realization_channel_count(real.p, &count) == CF_OK);
  CHECK(count == 2);
  Obj ch;
  REQUIRE(cf_realization_channel(real.p, 0, &ch.p) == CF_OK);
  cf_object_kind kind;
  REQUIRE(cf_object_kind_of(ch.p, &kind) == CF_OK);
  CHECK(kind == CF_OBJECT_OPERATOR);
  cf_object* oob = nullptr;
  CHECK(cf_realization_channel(real.p, 7, &oob) == CF_ERR_ARG);
}

TEST_CASE("certify via the C API catches rank excess") {
  Obj delay;
  REQUIRE(cf_example("delay", 2, 0, &delay.p, nullptr) == CF_OK);
  Str comb_text;
  REQUIRE(cf_object_to_json(delay.p, &comb_text.p) == CF_OK);
  auto dj = json::parse(comb_text.str());

  json decomp;
  decomp["schema"] = "combforge.decomposition/1";
  decomp["steps"] = {1};
  decomp["parts"] = json::array();
  decomp["parts"].push_back({{"index", {0}}, {"matrix", dj["matrix"]}});
  Obj dec;
  REQUIRE(cf_object_parse(decomp.dump().c_str(), &dec.p) == CF_OK);

  Str good;
  CHECK(cf_certify(delay.p, dec.p, 1, 2, 1e-8, &good.p) == CF_OK);
  CHECK(json::parse(good.str())["pass"].get<bool>());

  Str bad;
  CHECK(cf_certify(delay.p, dec.p, 1, 1, 1e-8, &bad.p) == CF_VERIFY_FAIL);
  auto bj = json::parse(bad.str());
  CHECK_FALSE(bj["pass"].get<bool>());
  CHECK(bj["failure"].get<std::string>().find("rank excess") != std::string::npos);
}

TEST_CASE("certify-multi and symmetry-bound wrappers") {
  Obj delay;
  REQUIRE(cf_example("delay", 2, 0, &delay.p, nullptr) == CF_OK);
  Str comb_text;
  REQUIRE(cf_object_to_json(delay.p, &comb_text.p) == CF_OK);
  auto dj = json::parse(comb_text.str());

  json decomp;
  decomp["schema"] = "combforge.decomposition/1";
  decomp["steps"] = {1};
  decomp["parts"] = json::array();
  decomp["parts"].push_back({{"index", {0}}, {"matrix", dj["matrix"]}});
  Obj dec;
  REQUIRE(cf_object_parse(decomp.dump().c_str(), &dec.p) == CF_OK);
  int steps[] = {1};
  int dims[] = {2};
  Str report;
  CHECK(cf_certify_multi(delay.p, dec.p, steps, dims, 1, 1e-8, &report.p) == CF_OK);
  CHECK(json::parse(report.str())["pass"].get<bool>());

  // trivial group on the first input wire: the bound is the reduced-comb rank
  json group;
  group["schema"] = "combforge.group/1";
  group["wires"] = json::array();
  group["wires"].push_back(
      {{"label", "0"}, {"dim", 2}, {"kind", "quantum"}, {"step", 0}, {"direction", "none"}});
  group["elements"] = json::array();
  group["elements"].push_back({{"re", {1.0, 0.0, 0.0, 1.0}}, {"im", {0.0, 0.0, 0.0, 0.0}}});
  Obj grp;
  REQUIRE(cf_object_parse(group.dump().c_str(), &grp.p) == CF_OK);
  Str sym_report;
  REQUIRE(cf_symmetry_bound(delay.p, grp.p, 1, 0, 1e-8, &sym_report.p) == CF_OK);
  CHECK(json::parse(sym_report.str())["max_d_hi"].get<int>() == 2);
}

TEST_CASE("discriminate identical combs returns zero") {
  Obj delay;
  REQUIRE(cf_example("delay", 2, 0, &delay.p, nullptr) == CF_OK);
  Str report;
  REQUIRE(cf_discriminate(delay.p, delay.p, "seesaw", 3, 0, &report.p) == CF_OK);
  auto j = json::parse(report.str());
  CHECK(j["lower_bound"].get<double>() == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(cf_discriminate(delay.p, delay.p, "bogus", 3, 0, &report.p) == CF_ERR_ARG);
}

TEST_CASE("validation failure surfaces as CF_VERIFY_FAIL with a report") {
  Obj delay;
  REQUIRE(cf_example("delay", 2, 0, &delay.p, nullptr) == CF_OK);
  Str text;
  REQUIRE(cf_object_to_json(delay.p, &text.p) == CF_OK);
  auto j = json::parse(text.str());
  for (auto& v : j["matrix"]["re"]) v = v.get<double>() * 1.001;
  Obj scaled;
  REQUIRE(cf_object_parse(j.dump().c_str(), &scaled.p) == CF_OK);
  Str report;
  CHECK(cf_validate(scaled.p, 1e-8, &report.p) == CF_VERIFY_FAIL);
  CHECK_FALSE(json::parse(report.str())["pass"].get<bool>());
}
