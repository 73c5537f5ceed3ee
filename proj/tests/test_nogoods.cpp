#include "doctest.h"

#include <algorithm>
#include <map>

#include "characterize.hpp"
#include "nogoods.hpp"
#include "testkits.hpp"

using namespace hmknf;

namespace {

std::vector<std::string> nogood_strings(const VarTable& vt, const std::vector<Nogood>& ngs) {
  std::vector<std::string> out;
  out.reserve(ngs.size());
  for (const Nogood& ng : ngs) out.push_back(vt.literals_to_string(ng.lits));
  std::sort(out.begin(), out.end());
  return out;
}

bool contains_string(const std::vector<std::string>& haystack, const std::string& needle) {
  return std::binary_search(haystack.begin(), haystack.end(), needle);
}

AtomSet subset_of(const AtomSet& base, std::uint64_t mask) {
  AtomSet out;
  for (std::size_t i = 0; i < base.size(); ++i)
    if (mask >> i & 1) out.push_back(base[i]);
  return out;
}

}  // namespace

TEST_CASE("variable table layout for the loops example") {
  KnowledgeBase kb = testkit::loops_kb();
  VarTable vt(kb);
  // 1 falsum + 6 atoms + 8 distinct conjunctions + 6 ontology atoms + 1.
  CHECK(vt.size() == 22);
  CHECK(vt.falsum() == 0);
  CHECK(vt.name(0) == "_bot");
  CHECK(vt.name(vt.atom(*kb.find_atom("a"))) == "a");
  CHECK(vt.kind(vt.atom(*kb.find_atom("a"))) == VarKind::Atom);
  CHECK(vt.atom_of(vt.atom(*kb.find_atom("c"))) == *kb.find_atom("c"));
  CHECK(vt.atom_of(0) == kBotAtom);

  // Rules 1 and 2 share the empty body conjunction; its label keeps the
  // argument-free form.
  CHECK(vt.body(0) == vt.body(1));
  CHECK(vt.name(vt.body(0)) == "b()");
  CHECK(vt.conjunction(vt.body(0)).empty());
  CHECK(vt.name(vt.body(2)) == "b(r3)");
  CHECK(vt.name(vt.body(3)) == "b(r4)");
  CHECK(vt.conjunction(vt.body(2)) == LitVec{pos_lit(vt.atom(*kb.find_atom("d")))});

  AtomId a = *kb.find_atom("a");
  AtomId d = *kb.find_atom("d");
  std::uint32_t bp1a = vt.body_exclusive(0, a);
  std::uint32_t bp2a = vt.body_exclusive(1, a);
  std::uint32_t bp2d = vt.body_exclusive(1, d);
  CHECK(vt.name(bp1a) == "bp(r1,a)");
  CHECK(vt.name(bp2a) == "bp(r2,a)");
  CHECK(vt.name(bp2d) == "bp(r2,d)");
  CHECK(bp1a != bp2a);
  CHECK(vt.conjunction(bp1a) == LitVec{pos_lit(vt.body(0))});
  CHECK(vt.conjunction(bp2a) == LitVec{neg_lit(vt.atom(d)), pos_lit(vt.body(1))});
  CHECK(vt.kind(bp1a) == VarKind::Conjunction);

  CHECK(vt.name(vt.ontology(*kb.find_atom("c"))) == "bo(c)");
  CHECK(vt.kind(vt.ontology(*kb.find_atom("c"))) == VarKind::Ontology);
  CHECK(vt.name(vt.ontology_falsum()) == "bo(_bot)");
  CHECK(vt.conjunction_vars().size() == 8);
  KnowledgeBase bp = testkit::bp_kb();
  VarTable bpvt(bp);
  CHECK_THROWS_AS((void)bpvt.ontology(*bp.find_atom("goodCand(p)")), Error);

  CHECK(vt.literal_to_string(pos_lit(vt.atom(a))) == "T a");
  CHECK(vt.literal_to_string(neg_lit(vt.body(2))) == "F b(r3)");
  CHECK(vt.literals_to_string({neg_lit(vt.atom(a)), pos_lit(vt.body(0))}) == "{F a, T b()}");
}

TEST_CASE("nogood canonicalization drops duplicates and rejects contradictions") {
  LitVec lits{pos_lit(3), neg_lit(1), pos_lit(3)};
  canonicalize(lits);
  CHECK(lits == LitVec{neg_lit(1), pos_lit(3)});

  CHECK_FALSE(try_make_nogood({pos_lit(2), neg_lit(2)}).has_value());
  std::optional<Nogood> ng = try_make_nogood({pos_lit(2), pos_lit(2), neg_lit(1)});
  REQUIRE(ng.has_value());
  CHECK(ng->lits == LitVec{neg_lit(1), pos_lit(2)});
}

TEST_CASE("static nogood families for the loops example") {
  KnowledgeBase kb = testkit::loops_kb();
  VarTable vt(kb);

  std::vector<std::string> rules;
  for (const Rule& r : kb.rules()) rules.push_back(vt.literals_to_string(rule_nogood(vt, r).lits));
  CHECK(rules == std::vector<std::string>{"{F a, T b()}", "{F a, F d, T b()}",
                                          "{F f, T b(r3)}", "{F e, T b(r4)}"});

  std::vector<std::string> sat = nogood_strings(vt, saturation_nogoods(vt, kb));
  CHECK(sat.size() == 7);  // six ontology atoms plus falsum
  CHECK(contains_string(sat, "{F a, T bo(a)}"));
  CHECK(contains_string(sat, "{F c, T bo(c)}"));
  CHECK(contains_string(sat, "{F _bot, T bo(_bot)}"));

  std::vector<std::string> sup = nogood_strings(vt, support_nogoods(vt, kb));
  CHECK(sup.size() == 6);  // one per vocabulary atom
  CHECK(contains_string(sup, "{T a, F bp(r1,a), F bp(r2,a), F bo(a)}"));
  CHECK(contains_string(sup, "{T d, F bp(r2,d), F bo(d)}"));
  CHECK(contains_string(sup, "{T b, F bo(b)}"));

  std::vector<Nogood> conj = conjunction_nogoods(vt);
  CHECK(conj.size() == 17);  // 1 + 2 + 2 + 2 + 3 + 3 + 2 + 2 over the eight sets
  std::vector<std::string> conj_strs = nogood_strings(vt, conj);
  CHECK(contains_string(conj_strs, "{F b()}"));            // empty body is always true
  CHECK(contains_string(conj_strs, "{T d, F b(r3)}"));     // conjuncts hold, variable must
  CHECK(contains_string(conj_strs, "{F d, T b(r3)}"));     // variable holds, conjuncts must
  CHECK(contains_string(conj_strs, "{F d, T b(), F bp(r2,a)}"));

  CHECK(static_nogoods(vt, kb).size() == 4 + 7 + 6 + 17);
  CHECK(vt.literals_to_string(falsum_nogood(vt).lits) == "{T _bot}");
}

TEST_CASE("entailment nogoods verify their side conditions") {
  KnowledgeBase kb = testkit::ent_kb();
  Oracle oracle(kb);
  VarTable vt(kb);
  AtomId a = *kb.find_atom("a");
  AtomId b = *kb.find_atom("b");
  AtomId c = *kb.find_atom("c");

  CHECK(vt.literals_to_string(pos_entailment_nogood(vt, kb, oracle, c, AtomSet{a}).lits) ==
        "{T a, F bo(c)}");
  CHECK(vt.literals_to_string(pos_entailment_nogood(vt, kb, oracle, kBotAtom, AtomSet{a, b}).lits) ==
        "{T a, T b, F bo(_bot)}");
  // The set may mention the target atom itself; entailment drops it first.
  CHECK(vt.literals_to_string(pos_entailment_nogood(vt, kb, oracle, c, AtomSet{a, c}).lits) ==
        "{T a, T c, F bo(c)}");
  CHECK_THROWS_AS(pos_entailment_nogood(vt, kb, oracle, b, AtomSet{a}), ContractError);
  CHECK_THROWS_AS(pos_entailment_nogood(vt, kb, oracle, kBotAtom, AtomSet{a}), ContractError);

  CHECK(vt.literals_to_string(neg_entailment_nogood(vt, kb, oracle, b, AtomSet{a}).lits) ==
        "{F a, T bo(b)}");
  CHECK(vt.literals_to_string(neg_entailment_nogood(vt, kb, oracle, b, AtomSet{}).lits) ==
        "{T bo(b)}");
  // Everything outside {c} assumed true is inconsistent, hence entails c.
  CHECK_THROWS_AS(neg_entailment_nogood(vt, kb, oracle, c, AtomSet{}), ContractError);

  bool widened = false;
  Nogood w = neg_entailment_nogood_widened(vt, kb, oracle, c, AtomSet{}, AtomSet{a}, &widened);
  CHECK(widened);
  CHECK(vt.literals_to_string(w.lits) == "{F a, T bo(c)}");
  widened = true;
  Nogood tight = neg_entailment_nogood_widened(vt, kb, oracle, b, AtomSet{a}, AtomSet{a, c},
                                               &widened);
  CHECK_FALSE(widened);
  CHECK(vt.literals_to_string(tight.lits) == "{F a, T bo(b)}");
  CHECK_THROWS_AS(neg_entailment_nogood_widened(vt, kb, oracle, c, AtomSet{}, AtomSet{}, nullptr),
                  ContractError);
  CHECK_THROWS_AS(neg_entailment_nogood_widened(vt, kb, oracle, c, AtomSet{a}, AtomSet{}, nullptr),
                  ContractError);
}

TEST_CASE("the full entailment family contains the worked combinations") {
  KnowledgeBase kb = testkit::ent_kb();
  Oracle oracle(kb);
  VarTable vt(kb);
  std::vector<std::string> all = nogood_strings(vt, entailment_nogoods_full(vt, kb, oracle));
  CHECK(contains_string(all, "{T a, F bo(c)}"));
  CHECK(contains_string(all, "{T a, T b, F bo(_bot)}"));
  CHECK(contains_string(all, "{F a, T bo(b)}"));
  CHECK(contains_string(all, "{F a, T bo(c)}"));
  CHECK(contains_string(all, "{T bo(b)}"));
  CHECK_FALSE(contains_string(all, "{T a, F bo(b)}"));  // would assert a ⊨ b

  CHECK_THROWS_AS(entailment_nogoods_full(vt, kb, oracle, 2), GateError);
}

TEST_CASE("loop nogoods enumerate external-rule refutations") {
  KnowledgeBase kb = testkit::loops_kb();
  Oracle oracle(kb);
  VarTable vt(kb);
  AtomSet loop = testkit::atoms(kb, {"e", "f"});
  AtomSet s = testkit::atoms(kb, {"c"});

  // Rule 3 (f :- d) is the only rule external to {e, f}; rule 4's positive
  // body meets the loop.
  std::vector<std::string> got = nogood_strings(vt, loop_nogoods(vt, kb, oracle, loop, s));
  CHECK(got == std::vector<std::string>{"{T e, F c, F b(r3)}", "{T f, F c, F b(r3)}"});

  // Without assuming c false the remaining ontology atoms entail the loop.
  CHECK_THROWS_AS(loop_nogoods(vt, kb, oracle, loop, AtomSet{}), ContractError);
  CHECK_THROWS_AS(loop_nogoods(vt, kb, oracle, AtomSet{}, AtomSet{}), ContractError);
  CHECK_THROWS_AS(loop_nogoods(vt, kb, oracle, loop, loop), ContractError);

  DependencyGraph g = build_graph(kb, oracle, GraphMode::Overapprox, 12);
  std::vector<std::string> full =
      nogood_strings(vt, loop_nogoods_full(vt, kb, oracle, g, 4096));
  CHECK(contains_string(full, "{T e, F c, F b(r3)}"));
  CHECK(contains_string(full, "{T f, F c, F b(r3)}"));
  CHECK_THROWS_AS(loop_nogoods_full(vt, kb, oracle, g, 4096, 5), GateError);
  CHECK_THROWS_AS(loop_nogoods_full(vt, kb, oracle, g, 4096, 10, 1), GateError);
}

TEST_CASE("the induced assignment of the loops example model") {
  KnowledgeBase kb = testkit::loops_kb();
  Oracle oracle(kb);
  VarTable vt(kb);
  Assignment a = induced_assignment(vt, kb, oracle, testkit::atoms(kb, {"a", "b"}));
  REQUIRE(a.total());

  std::map<std::string, bool> expected{
      {"_bot", false},     {"a", true},         {"d", false},        {"f", false},
      {"e", false},        {"b", true},         {"c", false},        {"b()", true},
      {"b(r3)", false},    {"b(r4)", false},    {"bp(r1,a)", true},  {"bp(r2,a)", true},
      {"bp(r2,d)", false}, {"bp(r3,f)", false}, {"bp(r4,e)", false}, {"bo(a)", false},
      {"bo(d)", false},    {"bo(f)", false},    {"bo(e)", false},    {"bo(b)", true},
      {"bo(c)", false},    {"bo(_bot)", false}};
  REQUIRE(expected.size() == vt.size());
  for (std::uint32_t v = 0; v < vt.size(); ++v) {
    CAPTURE(vt.name(v));
    CHECK(a.value(v) == (expected.at(vt.name(v)) ? 1 : 0));
    CHECK(a.level(v) == 0);
  }
  CHECK(a.true_atoms(vt, kb) == testkit::atoms(kb, {"a", "b"}));
}

TEST_CASE("induced assignments solve the nogood set exactly for models") {
  for (bool horn : {true, false}) {
    testkit::GenOptions opt;
    opt.horn_only = horn;
    opt.max_vocab = 5;
    for (std::uint64_t seed = 500; seed <= 540; ++seed) {
      KnowledgeBase kb = testkit::random_kb(seed, opt);
      Oracle oracle(kb);
      DependencyGraph g = build_graph(kb, oracle, GraphMode::Overapprox, 12);
      VarTable vt(kb);

      std::vector<Nogood> completion = static_nogoods(vt, kb);
      completion.push_back(falsum_nogood(vt));
      for (Nogood& ng : entailment_nogoods_full(vt, kb, oracle))
        completion.push_back(std::move(ng));
      std::vector<Nogood> full = completion;
      for (Nogood& ng : loop_nogoods_full(vt, kb, oracle, g, 4096))
        full.push_back(std::move(ng));

      const AtomSet& vocab = kb.vocab();
      for (std::uint64_t mask = 0; mask < (1ull << vocab.size()); ++mask) {
        AtomSet interp = subset_of(vocab, mask);
        Assignment a = induced_assignment(vt, kb, oracle, interp);
        CHECK(is_solution(completion, a) == check_completion(kb, oracle, interp).accepted);
        CHECK(is_solution(full, a) ==
              check_model_induced(kb, oracle, g, interp, 4096).accepted);
      }
    }
  }
}

TEST_CASE("solution enumeration matches the formula route") {
  SUBCASE("worked examples") {
    for (const char* text : {testkit::kBpText, testkit::kLoopsText, testkit::kEntText}) {
      KnowledgeBase kb = parse_kb(text);
      Oracle oracle(kb);
      DependencyGraph g = build_graph(kb, oracle, GraphMode::Overapprox, 12);
      CHECK(enumerate_solutions_full(kb, oracle, g, false, 4096) ==
            enumerate_models_formulas(kb, oracle, g, 4096));
    }
  }
  SUBCASE("random KBs, with and without loop formulas") {
    for (bool horn : {true, false}) {
      testkit::GenOptions opt;
      opt.horn_only = horn;
      opt.max_vocab = 5;
      for (std::uint64_t seed = 600; seed <= 640; ++seed) {
        KnowledgeBase kb = testkit::random_kb(seed, opt);
        Oracle oracle(kb);
        DependencyGraph g = build_graph(kb, oracle, GraphMode::Overapprox, 12);
        std::vector<AtomSet> full = enumerate_solutions_full(kb, oracle, g, false, 4096);
        CHECK(full == enumerate_models_formulas(kb, oracle, g, 4096));
        // Dropping loop formulas can only admit extra candidates.
        std::vector<AtomSet> completion = enumerate_solutions_full(kb, oracle, g, true, 4096);
        for (const AtomSet& m : full)
          CHECK(std::find(completion.begin(), completion.end(), m) != completion.end());
        if (is_tight(g)) CHECK(completion == full);
      }
    }
  }
  SUBCASE("vocabulary gate") {
    KnowledgeBase kb = testkit::loops_kb();
    Oracle oracle(kb);
    DependencyGraph g = build_graph(kb, oracle, GraphMode::Overapprox, 12);
    CHECK_THROWS_AS(enumerate_solutions_full(kb, oracle, g, false, 4096, 10, 5), GateError);
    CHECK_THROWS_AS(enumerate_solutions_full(kb, oracle, g, false, 4096, 5, 20), GateError);
  }
}
