#include "doctest.h"

#include "oracle.hpp"
#include "testkits.hpp"

using namespace hmknf;

namespace {

AtomSet subset_of(const AtomSet& base, std::uint64_t mask) {
  AtomSet out;
  for (std::size_t i = 0; i < base.size(); ++i)
    if (mask >> i & 1) out.push_back(base[i]);
  return out;
}

}  // namespace

TEST_CASE("entailment agrees with the truth-table reference on random ontologies") {
  for (bool horn : {true, false}) {
    testkit::GenOptions opt;
    opt.horn_only = horn;
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
      KnowledgeBase kb = testkit::random_kb(seed, opt);
      Oracle oracle(kb);
      const AtomSet& kao = kb.ontology_atoms();
      REQUIRE(kao.size() <= 6);
      for (std::uint64_t mask = 0; mask < (1ull << kao.size()); ++mask) {
        AtomSet assumptions = subset_of(kao, mask);
        CHECK(oracle.consistent(assumptions) == testkit::tt_consistent(kb, assumptions));
        CHECK(oracle.entails(assumptions, {}) == testkit::tt_entails(kb, assumptions, {}));
        for (AtomId target : kao) {
          CHECK(oracle.entails_atom(assumptions, target) ==
                testkit::tt_entails(kb, assumptions, AtomSet{target}));
        }
        if (kao.size() >= 2) {
          AtomSet disj{kao.front(), kao.back()};
          CHECK(oracle.entails(assumptions, disj) == testkit::tt_entails(kb, assumptions, disj));
        }
      }
    }
  }
}

TEST_CASE("refutation is entailment of the complement") {
  KnowledgeBase kb = testkit::ent_kb();  // ~a | ~b, ~a | c
  Oracle oracle(kb);
  AtomSet a = testkit::atoms(kb, {"a"});
  CHECK(oracle.refutes_atom(a, *kb.find_atom("b")));
  CHECK_FALSE(oracle.refutes_atom({}, *kb.find_atom("b")));
  CHECK(oracle.entails_atom(a, *kb.find_atom("c")));
  CHECK_FALSE(oracle.entails_atom({}, *kb.find_atom("c")));
}

TEST_CASE("closure lists entailed and refuted atoms, or flags inconsistency") {
  KnowledgeBase kb = testkit::ent_kb();
  Oracle oracle(kb);
  SUBCASE("consistent assumptions") {
    EntailmentClosure cl = oracle.closure(testkit::atoms(kb, {"a"}));
    CHECK_FALSE(cl.inconsistent);
    CHECK(cl.pos == testkit::atoms(kb, {"a", "c"}));
    CHECK(cl.neg == testkit::atoms(kb, {"b"}));
  }
  SUBCASE("contradictory assumptions") {
    EntailmentClosure cl = oracle.closure(testkit::atoms(kb, {"a", "b"}));
    CHECK(cl.inconsistent);
    CHECK(cl.pos.empty());
    CHECK(cl.neg.empty());
  }
  SUBCASE("agrees with per-atom queries on random KBs") {
    for (std::uint64_t seed = 100; seed <= 140; ++seed) {
      KnowledgeBase rkb = testkit::random_kb(seed);
      Oracle orc(rkb);
      const AtomSet& kao = rkb.ontology_atoms();
      for (std::uint64_t mask = 0; mask < (1ull << kao.size()); ++mask) {
        AtomSet s = subset_of(kao, mask);
        EntailmentClosure cl = orc.closure(s);
        CHECK(cl.inconsistent == !testkit::tt_consistent(rkb, s));
        if (cl.inconsistent) continue;
        for (AtomId p : kao) {
          CHECK(contains(cl.pos, p) == testkit::tt_entails(rkb, s, AtomSet{p}));
          CHECK(contains(cl.neg, p) ==
                !testkit::tt_consistent(rkb, with_atom(s, p)));
        }
      }
    }
  }
}

TEST_CASE("horn ontologies are recognized and decided without branching") {
  Oracle horn(testkit::bp_kb());
  CHECK(horn.is_horn());
  KnowledgeBase kb = parse_kb("#ontology\na | b.\n#end");
  Oracle general(kb);
  CHECK_FALSE(general.is_horn());
  CHECK(general.consistent({}));
  // Neither disjunct alone is entailed, but the disjunction is.
  CHECK_FALSE(general.entails_atom({}, *kb.find_atom("a")));
  CHECK(general.entails({}, testkit::atoms(kb, {"a", "b"})));
}

TEST_CASE("repeat queries come from the cache") {
  KnowledgeBase kb = testkit::bp_kb();
  Oracle oracle(kb);
  AtomSet s = testkit::atoms(kb, {"highBP(p)"});
  AtomId cand = *kb.find_atom("cand(p)");
  CHECK(oracle.entails_atom(s, cand));
  OracleStats before = oracle.stats();
  for (int i = 0; i < 5; ++i) CHECK(oracle.entails_atom(s, cand));
  OracleStats after = oracle.stats();
  CHECK(after.queries == before.queries + 5);
  CHECK(after.cache_hits == before.cache_hits + 5);
  CHECK(after.sat_calls == before.sat_calls);
}

TEST_CASE("queries over non-ontology atoms are contract violations") {
  KnowledgeBase kb = testkit::bp_kb();  // goodCand(p) is rule-only
  Oracle oracle(kb);
  AtomId rule_only = *kb.find_atom("goodCand(p)");
  CHECK_THROWS_AS(oracle.entails_atom({}, rule_only), ContractError);
  CHECK_THROWS_AS((void)oracle.consistent(AtomSet{rule_only}), ContractError);
}

TEST_CASE("empty ontology entails nothing and is consistent") {
  KnowledgeBase kb = parse_kb("a :- b.");
  Oracle oracle(kb);
  CHECK(oracle.consistent({}));
  CHECK_FALSE(oracle.entails({}, {}));
  EntailmentClosure cl = oracle.closure({});
  CHECK_FALSE(cl.inconsistent);
  CHECK(cl.pos.empty());
  CHECK(cl.neg.empty());
}
