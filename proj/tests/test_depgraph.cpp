#include "doctest.h"

#include "depgraph.hpp"
#include "oracle.hpp"
#include "testkits.hpp"

using namespace hmknf;

namespace {

DependencyGraph graph_of(const KnowledgeBase& kb, const Oracle& oracle, GraphMode mode) {
  return build_graph(kb, oracle, mode, /*max_exact_atoms=*/12);
}

}  // namespace

TEST_CASE("rule edges run from head atoms to positive body atoms") {
  KnowledgeBase kb = testkit::loops_kb();
  EdgeList edges = rule_edges(kb);
  AtomId d = *kb.find_atom("d"), e = *kb.find_atom("e"), f = *kb.find_atom("f");
  CHECK(edges == EdgeList{{f, d}, {e, f}});

  KnowledgeBase two = parse_kb("a :- not b.\nb :- not a.");
  CHECK(rule_edges(two).empty());  // negative bodies contribute nothing
}

TEST_CASE("exact ontology edges match the by-definition reference") {
  for (bool horn : {true, false}) {
    testkit::GenOptions opt;
    opt.horn_only = horn;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
      KnowledgeBase kb = testkit::random_kb(seed, opt);
      Oracle oracle(kb);
      CHECK(ontology_edges_exact(kb, oracle, 12) == testkit::tt_ontology_edges(kb));
    }
  }
}

TEST_CASE("exact edges are always contained in the overapproximation") {
  for (bool horn : {true, false}) {
    testkit::GenOptions opt;
    opt.horn_only = horn;
    for (std::uint64_t seed = 1; seed <= 80; ++seed) {
      KnowledgeBase kb = testkit::random_kb(seed, opt);
      Oracle oracle(kb);
      EdgeList exact = ontology_edges_exact(kb, oracle, 12);
      EdgeList over = ontology_edges_overapprox(kb);
      for (const auto& edge : exact)
        CHECK(std::binary_search(over.begin(), over.end(), edge));
    }
  }
}

TEST_CASE("entailment through a chain of implications is an exact edge") {
  KnowledgeBase kb = testkit::loops_kb();  // a->b, c->d, c->e, e->f
  Oracle oracle(kb);
  EdgeList exact = ontology_edges_exact(kb, oracle, 12);
  auto has = [&](const char* from, const char* to) {
    return std::binary_search(exact.begin(), exact.end(),
                              std::pair<AtomId, AtomId>{*kb.find_atom(from), *kb.find_atom(to)});
  };
  CHECK(has("b", "a"));
  CHECK(has("d", "c"));
  CHECK(has("e", "c"));
  CHECK(has("f", "e"));
  CHECK(has("f", "c"));  // {c} entails f through c -> e -> f
  CHECK_FALSE(has("a", "b"));
  CHECK(exact == testkit::tt_ontology_edges(kb));
}

TEST_CASE("the exact construction is gated by ontology size") {
  std::string text = "#ontology\n";
  for (int i = 0; i < 13; ++i)
    text += "q" + std::to_string(i) + (i + 1 < 13 ? " -> q" + std::to_string(i + 1) : "") + ".\n";
  text += "#end";
  KnowledgeBase kb = parse_kb(text);
  REQUIRE(kb.ontology_atoms().size() == 13);
  Oracle oracle(kb);
  CHECK_THROWS_AS(ontology_edges_exact(kb, oracle, 12), GateError);
  CHECK_THROWS_AS(build_graph(kb, oracle, GraphMode::Exact, 12), GateError);
  CHECK_NOTHROW(build_graph(kb, oracle, GraphMode::Overapprox, 12));
}

TEST_CASE("overapproximate edges join clause-connected components") {
  KnowledgeBase kb = testkit::loops_kb();
  EdgeList over = ontology_edges_overapprox(kb);
  // Components {a,b} and {c,d,e,f}: 2 + 12 ordered pairs.
  CHECK(over.size() == 14);
  AtomId d = *kb.find_atom("d"), f = *kb.find_atom("f");
  CHECK(std::binary_search(over.begin(), over.end(), std::pair<AtomId, AtomId>{d, f}));
  CHECK(std::binary_search(over.begin(), over.end(), std::pair<AtomId, AtomId>{f, d}));
}

TEST_CASE("strongly connected components and tightness") {
  KnowledgeBase kb = testkit::bp_kb();
  Oracle oracle(kb);
  DependencyGraph exact = graph_of(kb, oracle, GraphMode::Exact);
  CHECK_FALSE(is_tight(exact));  // highRisk <-> riskFactor
  std::vector<AtomSet> comps = sccs(exact);
  AtomSet risk = testkit::atoms(kb, {"highRisk(p)", "riskFactor(p)"});
  bool found = false;
  for (const AtomSet& c : comps) found = found || c == risk;
  CHECK(found);
  CHECK(comps.size() == 5);  // four singletons plus the pair

  KnowledgeBase two = parse_kb("a :- not b.\nb :- not a.");
  Oracle orc2(two);
  CHECK(is_tight(graph_of(two, orc2, GraphMode::Overapprox)));

  KnowledgeBase self = parse_kb("a :- a.");
  Oracle orc3(self);
  DependencyGraph sg = graph_of(self, orc3, GraphMode::Overapprox);
  CHECK_FALSE(is_tight(sg));  // a depends on itself
  CHECK(loops(sg, 16) == std::vector<AtomSet>{{*self.find_atom("a")}});
}

TEST_CASE("loops are the strongly connected subsets of SCCs") {
  KnowledgeBase kb = testkit::loops_kb();
  Oracle oracle(kb);
  DependencyGraph g = graph_of(kb, oracle, GraphMode::Overapprox);
  std::vector<AtomSet> ls = loops(g, 4096);
  // {a,b} is one loop; every 2+-subset of the complete component {c,d,e,f}
  // is strongly connected: 6 pairs + 4 triples + 1 quadruple.
  CHECK(ls.size() == 12);
  for (const AtomSet& l : ls) CHECK(l.size() >= 2);
  CHECK_THROWS_AS(loops(g, 4), GateError);

  DependencyGraph exact = graph_of(kb, oracle, GraphMode::Exact);
  std::vector<AtomSet> els = loops(exact, 4096);
  AtomSet ef = testkit::atoms(kb, {"e", "f"});
  bool found = false;
  for (const AtomSet& l : els) found = found || l == ef;
  CHECK(found);  // e :- f rule edge plus f -> e ontology edge
}

TEST_CASE("ext is the ontology out-neighborhood minus the set itself") {
  KnowledgeBase kb = testkit::loops_kb();
  Oracle oracle(kb);
  DependencyGraph g = graph_of(kb, oracle, GraphMode::Overapprox);
  CHECK(g.ext(testkit::atoms(kb, {"e", "f"})) == testkit::atoms(kb, {"c", "d"}));
  CHECK(g.ext(testkit::atoms(kb, {"a"})) == testkit::atoms(kb, {"b"}));
  CHECK(g.ext(testkit::atoms(kb, {"a", "b"})).empty());
}

TEST_CASE("DOT output lists vertices and styles edge kinds") {
  KnowledgeBase kb = testkit::bp_kb();
  Oracle oracle(kb);
  std::string dot = to_dot(kb, graph_of(kb, oracle, GraphMode::Exact), false);
  CHECK(dot.find("digraph") != std::string::npos);
  CHECK(dot.find("\"goodCand(p)\" -> \"cand(p)\";") != std::string::npos);
  CHECK(dot.find("\"cand(p)\" -> \"highBP(p)\" [style=dashed];") != std::string::npos);
  CHECK(dot.find("risksTreated(p)") != std::string::npos);  // isolated vertex still listed

  std::string clustered = to_dot(kb, graph_of(kb, oracle, GraphMode::Exact), true);
  CHECK(clustered.find("subgraph cluster_0") != std::string::npos);
  CHECK(to_dot(parse_kb(""), graph_of(parse_kb(""), oracle, GraphMode::Overapprox), false) ==
        "digraph dependencies {\n  rankdir=LR;\n}\n");
}
