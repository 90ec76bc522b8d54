#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "common.hpp"
#include "generators.hpp"

using namespace liftcount;

namespace {

std::string evidence_text(const PKB &pkb) {
  std::string out;
  for (const GroundLiteral &l : pkb.evidence)
    out += print_ground_literal(pkb.voc, l) + "\n";
  return out;
}

}  // namespace

TEST_CASE("random model generator is byte-deterministic") {
  PKB a = random_pkb(3, 4, 2, 5, 2, 42);
  PKB b = random_pkb(3, 4, 2, 5, 2, 42);
  CHECK(print_model(a) == print_model(b));
  CHECK(evidence_text(a) == evidence_text(b));
  PKB c = random_pkb(3, 4, 2, 5, 2, 43);
  CHECK(print_model(a) != print_model(c));
}

TEST_CASE("random model generator emits the stated structure") {
  PKB pkb = random_pkb(3, 4, 2, 5, 2, 7);
  REQUIRE(pkb.voc.num_sorts() == 1);
  CHECK(pkb.voc.sort_size(0) == 2);
  REQUIRE(pkb.voc.num_preds() == 3);
  for (PredId p = 0; p < 3; ++p) CHECK(pkb.voc.pred(p).arg_sorts.size() == 1);

  REQUIRE(pkb.formulas.size() == 4);
  for (const WeightedFormula &wf : pkb.formulas) {
    CHECK(wf.form == WeightForm::Potential);
    CHECK(wf.stated > 0.0);
    CHECK(wf.stated < 1.0);
    REQUIRE(wf.vars.size() == 1);
    // disjunction of two distinct predicates over the one variable
    std::set<PredId> preds;
    CNF cnf = cnf_convert(wf.formula, wf.vars, pkb.voc);
    REQUIRE(cnf.clauses.size() == 1);
    REQUIRE(cnf.clauses[0].lits.size() == 2);
    for (const Literal &l : cnf.clauses[0].lits) {
      preds.insert(l.pred);
      REQUIRE(l.args.size() == 1);
      CHECK(l.args[0].is_var());
    }
    CHECK(preds.size() == 2);
  }

  REQUIRE(pkb.evidence.size() == 5);
  std::set<std::pair<PredId, ConstId>> seen;
  for (const GroundLiteral &l : pkb.evidence) {
    REQUIRE(l.consts.size() == 1);
    CHECK(l.pred < 3);
    CHECK(l.consts[0] < 2);
    CHECK(seen.insert({l.pred, l.consts[0]}).second);
  }
}

TEST_CASE("random model generator validates its parameters") {
  CHECK_THROWS_AS(random_pkb(0, 1, 1, 0, 2, 1), ModelError);
  CHECK_THROWS_AS(random_pkb(2, 1, 0, 0, 2, 1), ModelError);
  CHECK_THROWS_AS(random_pkb(2, 1, 3, 0, 2, 1), ModelError);
  CHECK_THROWS_AS(random_pkb(2, 1, 1, 5, 2, 1), ModelError);
  CHECK_THROWS_AS(random_pkb(2, 1, 1, 0, 0, 1), ModelError);
}

TEST_CASE("generated models parse back to the same text") {
  for (uint64_t seed : {1, 2, 3}) {
    PKB pkb = random_pkb(4, 5, 3, 6, 3, seed);
    std::string text = print_model(pkb);
    CHECK(print_model(parse_model(text)) == text);
    std::string ev = evidence_text(pkb);
    std::vector<GroundLiteral> parsed = parse_evidence(ev, pkb.voc);
    REQUIRE(parsed.size() == pkb.evidence.size());
    std::string round;
    for (const GroundLiteral &l : parsed)
      round += print_ground_literal(pkb.voc, l) + "\n";
    CHECK(round == ev);
  }
}

TEST_CASE("advisor model generator: shape and evidence accounting") {
  PKB pkb = link_prediction_pkb(3, 4, 0.5, 11);
  REQUIRE(pkb.voc.num_sorts() == 2);
  CHECK(pkb.voc.sort_size(0) == 3);
  CHECK(pkb.voc.sort_size(1) == 4);
  CHECK(pkb.voc.num_preds() == 5);
  REQUIRE(pkb.formulas.size() == 2);
  for (const WeightedFormula &wf : pkb.formulas) {
    CHECK(wf.form == WeightForm::Potential);
    CHECK(wf.stated > 0.0);
    CHECK(wf.stated < 1.0);
  }

  // pool: 3 + 4 + 12 + 4 + 12 = 35 ground atoms; half rounds to 18
  CHECK(pkb.evidence.size() == 18);
  std::set<std::vector<uint32_t>> seen;
  for (const GroundLiteral &l : pkb.evidence) {
    std::vector<uint32_t> key{l.pred};
    for (ConstId c : l.consts) key.push_back(c);
    CHECK(seen.insert(key).second);
  }

  CHECK(link_prediction_pkb(3, 4, 0.0, 11).evidence.empty());
  CHECK(link_prediction_pkb(3, 4, 1.0, 11).evidence.size() == 35);

  PKB again = link_prediction_pkb(3, 4, 0.5, 11);
  CHECK(print_model(again) == print_model(pkb));
  CHECK(evidence_text(again) == evidence_text(pkb));
}

TEST_CASE("advisor model generator validates its parameters") {
  CHECK_THROWS_AS(link_prediction_pkb(0, 4, 0.5, 1), ModelError);
  CHECK_THROWS_AS(link_prediction_pkb(3, 0, 0.5, 1), ModelError);
  CHECK_THROWS_AS(link_prediction_pkb(3, 4, -0.1, 1), ModelError);
  CHECK_THROWS_AS(link_prediction_pkb(3, 4, 1.5, 1), ModelError);
}
