#include <doctest.h>

#include <json.hpp>

#include "core/io.hpp"
#include "helpers.hpp"

using namespace combforge;
using namespace combforge::testing;

TEST_CASE("operator documents round trip bit-exactly") {
  Rng rng(3);
  CombValue comb = random_comb(rng, {{2, 2}, {2, 2}}, {2});
  OperatorDoc doc = OperatorDoc::from_comb(comb);
  std::string text = serialize(doc);

  OperatorDoc back = parse_operator(text);
  CHECK(back.matrix == doc.matrix);  // exact doubles
  CHECK(back.wires.size() == doc.wires.size());
  CHECK(serialize(back) == text);  // canonical byte-for-byte round trip

  CombValue comb2 = back.to_comb();
  CHECK(diff_norm(comb2.op, comb.op) == 0.0);
  CHECK(comb2.sig.num_steps() == 2);
}

TEST_CASE("canonical finite-decimal files round trip byte-for-byte") {
  std::string text =
      R"({"schema":"combforge.operator/1","wires":[{"label":"a","dim":2,"kind":"quantum","step":0,"direction":"none"}],"matrix":{"re":[0.25,0.1,0.1,0.75],"im":[0.0,-0.5,0.5,0.0]}})"
      "\n";
  OperatorDoc doc = parse_operator(text);
  CHECK(serialize(doc) == text);
  CHECK(doc.matrix(0, 0) == cxd(0.25, 0.0));
  CHECK(doc.matrix(0, 1) == cxd(0.1, -0.5));
}

TEST_CASE("classical wires and plain operators survive the round trip") {
  LabeledOperator op({{"c", 2, WireKind::Classical}, {"q", 3, WireKind::Quantum}},
                     Mat::Identity(6, 6));
  std::string text = serialize(OperatorDoc::from_operator(op));
  OperatorDoc back = parse_operator(text);
  CHECK(back.wires[0].wire.kind == WireKind::Classical);
  CHECK(back.wires[1].wire.kind == WireKind::Quantum);
  CHECK(back.wires[0].direction == Direction::None);
  CHECK(serialize(back) == text);
}

TEST_CASE("schema violations are rejected with schema errors") {
  auto expect_schema_error = [](const std::string& text) {
    try {
      parse_operator(text);
      FAIL("expected a schema error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Schema);
    }
  };
  expect_schema_error("not json at all");
  expect_schema_error(R"({"schema":"combforge.operator/2","wires":[],"matrix":{"re":[],"im":[]}})");
  expect_schema_error(R"({"schema":"combforge.operator/1","wires":[]})");
  // wrong matrix length
  expect_schema_error(
      R"({"schema":"combforge.operator/1","wires":[{"label":"a","dim":2,"kind":"quantum","step":0,"direction":"none"}],"matrix":{"re":[1,0],"im":[0,0]}})");
  // duplicate label
  expect_schema_error(
      R"({"schema":"combforge.operator/1","wires":[{"label":"a","dim":1,"kind":"quantum","step":0,"direction":"none"},{"label":"a","dim":1,"kind":"quantum","step":0,"direction":"none"}],"matrix":{"re":[1],"im":[0]}})");
  // non-finite entry
  expect_schema_error(
      R"({"schema":"combforge.operator/1","wires":[{"label":"a","dim":1,"kind":"quantum","step":0,"direction":"none"}],"matrix":{"re":[1e999],"im":[0]}})");

  // a comb document requires every step to be present
  OperatorDoc doc;
  doc.wires.push_back({{"0", 2, WireKind::Quantum}, 1, Direction::Input});
  doc.wires.push_back({{"5", 2, WireKind::Quantum}, 3, Direction::Output});
  doc.matrix = Mat::Identity(4, 4);
  CHECK_THROWS_AS(doc.to_comb(), Error);
}

TEST_CASE("direction-only documents read as single-step combs") {
  Rng rng(5);
  ChoiMap chan = random_cptp(rng, {qw("0", 2)}, {qw("1", 2)});
  OperatorDoc doc = OperatorDoc::from_choi(chan);  // step 0 everywhere
  CombValue comb = doc.to_comb();
  CHECK(comb.sig.num_steps() == 1);
  CHECK(validate_deterministic(comb).pass());
}

TEST_CASE("decomposition and group documents") {
  Rng rng(7);
  CombValue comb = random_comb(rng, {{2, 2}}, {});

  DecompositionDoc ddoc;
  ddoc.steps = {1};
  ddoc.parts.push_back({{0}, Mat(0.5 * comb.op.mat())});
  ddoc.parts.push_back({{1}, Mat(0.5 * comb.op.mat())});
  std::string text = serialize(ddoc);
  DecompositionDoc dback = parse_decomposition(text);
  CHECK(serialize(dback) == text);
  auto parts = dback.to_parts(comb);
  CHECK(parts.size() == 2);
  CHECK(diff_norm(parts[0] + parts[1], comb.op) < 1e-15);

  GroupDoc gdoc = GroupDoc::from_group(pauli_uu_star(qw("0", 2), qw("1", 2)));
  std::string gtext = serialize(gdoc);
  GroupDoc gback = parse_group(gtext);
  CHECK(serialize(gback) == gtext);
  gback.to_group().validate();

  CHECK(peek_kind(text) == DocKind::Decomposition);
  CHECK(peek_kind(gtext) == DocKind::Group);
}

TEST_CASE("realization documents") {
  Rng rng(11);
  CombValue comb = random_comb(rng, {{2, 2}, {2, 2}}, {2});
  Realization real = realize(comb);
  RealizationDoc doc = RealizationDoc::from_realization(real);
  CHECK(doc.steps == 2);
  REQUIRE(doc.memories.size() == 1);
  CHECK(doc.memories[0].quantum_dim == real.memory_dims[0].first);
  CHECK(!doc.memories[0].quantum_label.empty());

  std::string text = serialize(doc);
  RealizationDoc back = parse_realization(text);
  CHECK(serialize(back) == text);
  CHECK(back.channels.size() == 2);
  // channels reload as linkable Choi maps that reproduce the comb
  std::vector<ChoiMap> chans;
  for (const auto& ch : back.channels) chans.push_back(ch.to_choi());
  LabeledOperator relinked = link_chain(chans);
  CHECK(trace_norm(relinked - comb.op.aligned_to(relinked.wires())) < 1e-7);
}

TEST_CASE("report fragments are valid JSON") {
  Rng rng(13);
  CombValue comb = random_comb(rng, {{2, 2}}, {});
  auto rep = validate_deterministic(comb);
  auto parsed = nlohmann::json::parse(validation_report_json(rep));
  CHECK(parsed["pass"].get<bool>());
  CHECK(parsed["tol"].get<double>() == rep.tol);

  auto res = certify_step(comb, 1, {comb.op}, 4);
  auto cj = nlohmann::json::parse(certify_result_json(res));
  CHECK(cj["pass"].get<bool>());
  CHECK(cj["certificate"]["max_d_hi"].get<int>() >= 1);
}
