#pragma once

// Shared helpers for the test binaries: truth-table reference oracles that
// are deliberately independent of the library's DPLL/graph code, a seeded
// random KB generator (emitting concrete syntax, so the parser is always in
// the loop), and the worked example KBs used across suites.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "base.hpp"
#include "depgraph.hpp"
#include "kb.hpp"
#include "parser.hpp"

namespace testkit {

// Truth-table entailment: clauses(O) ∪ assumptions ⊨ ⋁ target, with the
// empty target standing for falsum. Models range over the ontology atoms.
inline bool tt_entails(const hmknf::KnowledgeBase& kb, const hmknf::AtomSet& assumptions,
                       const hmknf::AtomSet& target) {
  const hmknf::AtomSet& kao = kb.ontology_atoms();
  auto truth = [&](std::uint64_t mask, hmknf::AtomId a) {
    for (std::size_t i = 0; i < kao.size(); ++i)
      if (kao[i] == a) return (mask >> i & 1) != 0;
    return false;  // atoms outside the ontology are false in every model
  };
  for (std::uint64_t mask = 0; mask < (1ull << kao.size()); ++mask) {
    bool ok = true;
    for (hmknf::AtomId a : assumptions)
      if (!truth(mask, a)) {
        ok = false;
        break;
      }
    if (!ok) continue;
    for (const hmknf::Clause& c : kb.clauses()) {
      bool sat = false;
      for (hmknf::AtomId a : c.pos)
        if (truth(mask, a)) {
          sat = true;
          break;
        }
      for (hmknf::AtomId a : c.neg)
        if (!truth(mask, a)) {
          sat = true;
          break;
        }
      if (!sat) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    // mask is a model of clauses + assumptions: target must hold in it.
    if (target.empty()) return false;
    bool target_holds = false;
    for (hmknf::AtomId a : target)
      if (truth(mask, a)) {
        target_holds = true;
        break;
      }
    if (!target_holds) return false;
  }
  return true;
}

inline bool tt_consistent(const hmknf::KnowledgeBase& kb, const hmknf::AtomSet& assumptions) {
  return !tt_entails(kb, assumptions, {});
}

// Reference ontology dependency edges, by definition: a → b iff some
// consistent assumption set S with a ∉ S entails a while S ∖ {b} does not.
inline hmknf::EdgeList tt_ontology_edges(const hmknf::KnowledgeBase& kb) {
  const hmknf::AtomSet& kao = kb.ontology_atoms();
  hmknf::EdgeList edges;
  for (hmknf::AtomId a : kao) {
    for (std::uint64_t mask = 0; mask < (1ull << kao.size()); ++mask) {
      hmknf::AtomSet s;
      for (std::size_t i = 0; i < kao.size(); ++i)
        if (mask >> i & 1) s.push_back(kao[i]);
      if (hmknf::contains(s, a)) continue;
      if (!tt_consistent(kb, s)) continue;
      if (!tt_entails(kb, s, {a})) continue;
      for (hmknf::AtomId b : s)
        if (!tt_entails(kb, hmknf::without_atom(s, b), {a})) edges.push_back({a, b});
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

// --- random KB generation ----------------------------------------------------

struct GenOptions {
  std::size_t max_vocab = 6;
  std::size_t max_rules = 8;
  std::size_t max_head = 2;
  std::size_t max_clauses = 5;
  bool horn_only = true;
};

// Deterministic per (seed, options); returns concrete syntax.
inline std::string random_kb_text(std::uint64_t seed, const GenOptions& opt = {}) {
  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ull + 1);
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  std::size_t vocab = 1 + pick(opt.max_vocab);
  auto atom = [&](std::size_t i) { return "p" + std::to_string(i); };

  std::string text;
  std::size_t rules = pick(opt.max_rules + 1);
  for (std::size_t r = 0; r < rules; ++r) {
    std::vector<char> used(vocab, 0);
    std::string line;
    std::size_t head = 1 + pick(opt.max_head);
    for (std::size_t i = 0; i < head; ++i) {
      std::size_t a = pick(vocab);
      if (used[a]) continue;
      used[a] = 1;
      if (!line.empty()) line += " ; ";
      line += atom(a);
    }
    std::string body;
    std::size_t pos = pick(3), neg = pick(3);
    for (std::size_t i = 0; i < pos; ++i) {
      if (!body.empty()) body += ", ";
      body += atom(pick(vocab));
    }
    for (std::size_t i = 0; i < neg; ++i) {
      if (!body.empty()) body += ", ";
      body += "not " + atom(pick(vocab));
    }
    text += line;
    if (!body.empty()) text += " :- " + body;
    text += ".\n";
  }

  std::size_t clauses = pick(opt.max_clauses + 1);
  if (clauses > 0) {
    text += "#ontology\n";
    for (std::size_t c = 0; c < clauses; ++c) {
      // Distinct atoms per clause so no clause is tautological.
      std::vector<std::size_t> members;
      std::size_t size = 1 + pick(3);
      for (std::size_t i = 0; i < size; ++i) {
        std::size_t a = pick(vocab);
        bool dup = false;
        for (std::size_t m : members) dup = dup || m == a;
        if (!dup) members.push_back(a);
      }
      std::string clause;
      std::size_t positives = opt.horn_only ? pick(2) : members.size();
      for (std::size_t i = 0; i < members.size(); ++i) {
        bool positive = opt.horn_only ? i < positives : pick(2) == 0;
        if (!clause.empty()) clause += " | ";
        clause += (positive ? "" : "~") + atom(members[i]);
      }
      text += clause + ".\n";
    }
    text += "#end\n";
  }
  return text;
}

inline hmknf::KnowledgeBase random_kb(std::uint64_t seed, const GenOptions& opt = {}) {
  return hmknf::parse_kb(random_kb_text(seed, opt));
}

// --- worked examples ----------------------------------------------------------

inline constexpr const char* kBpText = R"(
goodCand(p) :- cand(p), not highRisk(p).
highBP(p).
highRisk(p) :- riskFactor(p), not risksTreated(p).

#ontology
highBP(p) -> cand(p).
highRisk(p) -> riskFactor(p).
#end
)";

inline constexpr const char* kLoopsText = R"(
a.
a ; d.
f :- d.
e :- f.

#ontology
a -> b.
c -> d.
c -> e.
e -> f.
#end
)";

inline constexpr const char* kEntText = R"(
#ontology
~a | ~b.
~a | c.
#end
)";

inline hmknf::KnowledgeBase bp_kb() { return hmknf::parse_kb(kBpText); }
inline hmknf::KnowledgeBase loops_kb() { return hmknf::parse_kb(kLoopsText); }
inline hmknf::KnowledgeBase ent_kb() { return hmknf::parse_kb(kEntText); }

// Atom set from names; the atoms must exist.
inline hmknf::AtomSet atoms(const hmknf::KnowledgeBase& kb, const std::vector<std::string>& names) {
  hmknf::AtomSet out;
  for (const std::string& n : names) out.push_back(*kb.find_atom(n));
  hmknf::sort_unique(out);
  return out;
}

}  // namespace testkit
