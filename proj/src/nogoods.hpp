#pragma once

// Boolean constraint layer. Variables cover the atoms (plus a falsum atom),
// one conjunction variable per distinct rule-body literal set and per
// rule/head-atom "fires exclusively" set, and one ontology-support variable
// per ontology atom (plus falsum). A nogood is a literal set no solution may
// contain. Static families encode the rules, saturation, support and
// conjunction definitions; entailment and loop nogoods are sound only under
// side conditions which their constructors verify against the oracle.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "depgraph.hpp"
#include "kb.hpp"
#include "oracle.hpp"

namespace hmknf {

enum class VarKind : std::uint8_t { Atom, Conjunction, Ontology };

struct Literal {
  std::uint32_t var = 0;
  bool positive = true;

  bool operator==(const Literal& o) const { return var == o.var && positive == o.positive; }
  bool operator<(const Literal& o) const {
    return var != o.var ? var < o.var : positive < o.positive;
  }
  Literal complement() const { return {var, !positive}; }
};

inline Literal pos_lit(std::uint32_t v) { return {v, true}; }
inline Literal neg_lit(std::uint32_t v) { return {v, false}; }

// Sorted, duplicate-free literal vector.
using LitVec = std::vector<Literal>;

void canonicalize(LitVec& lits);

class VarTable {
 public:
  explicit VarTable(const KnowledgeBase& kb);

  std::uint32_t falsum() const { return 0; }
  std::uint32_t atom(AtomId a) const { return a + 1; }
  std::uint32_t body(std::uint32_t rule_id) const { return body_var_[rule_id]; }
  std::uint32_t body_exclusive(std::uint32_t rule_id, AtomId head_atom) const;
  std::uint32_t ontology(AtomId a) const;  // ontology atoms only
  std::uint32_t ontology_falsum() const { return ont_falsum_; }

  VarKind kind(std::uint32_t v) const;
  bool is_atom_var(std::uint32_t v) const { return v <= natoms_; }  // falsum included
  // Atom of an atom variable; kBotAtom for the falsum variable.
  AtomId atom_of(std::uint32_t v) const;
  const LitVec& conjunction(std::uint32_t v) const;
  std::vector<std::uint32_t> conjunction_vars() const;  // ascending

  std::size_t size() const { return kinds_.size(); }
  std::string name(std::uint32_t v) const;
  std::string literal_to_string(Literal l) const;
  std::string literals_to_string(const LitVec& lits) const;  // "{T a, F b(r1)}"

 private:
  std::uint32_t intern_conjunction(LitVec lits, std::string label);

  const KnowledgeBase& kb_;
  std::uint32_t natoms_ = 0;
  std::vector<VarKind> kinds_;
  std::vector<std::string> names_;
  std::vector<LitVec> conj_sets_;                    // indexed by v - conj_base_
  std::uint32_t conj_base_ = 0;
  std::vector<std::uint32_t> body_var_;              // per rule id
  std::vector<std::vector<std::pair<AtomId, std::uint32_t>>> body_excl_var_;  // per rule id
  std::vector<std::pair<LitVec, std::uint32_t>> interned_;  // sorted by LitVec
  std::vector<std::uint32_t> ont_var_;               // per position in kb.ontology_atoms()
  std::uint32_t ont_falsum_ = 0;
};

struct Nogood {
  LitVec lits;

  bool operator==(const Nogood& o) const { return lits == o.lits; }
  bool operator<(const Nogood& o) const { return lits < o.lits; }
};

// Canonicalizes; empty result if the literal set is vacuous (contains a
// variable in both polarities and so can never be contained in an
// assignment).
std::optional<Nogood> try_make_nogood(LitVec lits);

// Assignment with trail, levels and reasons; shared by the solver and the
// solution checkers. Literal levels along the trail are non-decreasing.
class Assignment {
 public:
  explicit Assignment(std::size_t var_count);

  std::int8_t value(std::uint32_t var) const { return val_[var]; }  // -1/0/1
  bool assigned(std::uint32_t var) const { return val_[var] >= 0; }
  bool has(Literal l) const { return val_[l.var] == (l.positive ? 1 : 0); }
  bool has_complement(Literal l) const { return val_[l.var] == (l.positive ? 0 : 1); }
  std::uint32_t level(std::uint32_t var) const { return level_[var]; }
  std::int32_t reason(std::uint32_t var) const { return reason_[var]; }

  void assign(Literal l, std::uint32_t level, std::int32_t reason);
  void pop_to_level(std::uint32_t lvl);

  std::size_t var_count() const { return val_.size(); }
  std::size_t trail_size() const { return trail_.size(); }
  Literal trail_at(std::size_t i) const { return trail_[i]; }
  bool total() const { return trail_.size() == val_.size(); }

  // Atoms assigned true/false (falsum variable excluded).
  AtomSet true_atoms(const VarTable& vt, const KnowledgeBase& kb) const;
  AtomSet false_atoms(const VarTable& vt, const KnowledgeBase& kb) const;

 private:
  std::vector<std::int8_t> val_;
  std::vector<std::uint32_t> level_;
  std::vector<std::int32_t> reason_;
  std::vector<Literal> trail_;
};

// --- static families -------------------------------------------------------

// Rule nogood: body conjunction true but every head atom false.
Nogood rule_nogood(const VarTable& vt, const Rule& r);
// Saturation nogoods: an ontology-supported atom (or falsum) cannot be false.
std::vector<Nogood> saturation_nogoods(const VarTable& vt, const KnowledgeBase& kb);
// Support nogoods: a true atom needs some exclusive rule firing or ontology support.
std::vector<Nogood> support_nogoods(const VarTable& vt, const KnowledgeBase& kb);
// Conjunction-definition nogoods for every conjunction variable.
std::vector<Nogood> conjunction_nogoods(const VarTable& vt);
// All of the above.
std::vector<Nogood> static_nogoods(const VarTable& vt, const KnowledgeBase& kb);
// The falsum-must-be-false unit nogood.
Nogood falsum_nogood(const VarTable& vt);

// --- entailment nogoods (side conditions verified) --------------------------

// Positive: with S ⊆ ontology atoms all true, support for p (or falsum if
// p is kBotAtom) cannot be absent. Sound iff clauses(O) ∪ (S ∖ {p}) ⊨ p.
Nogood pos_entailment_nogood(const VarTable& vt, const KnowledgeBase& kb, const Oracle& oracle,
                             AtomId p, const AtomSet& s);
// Negative: with S all false, support for p cannot be present. Sound iff
// clauses(O) ∪ (ontology atoms ∖ (S ∪ {p})) does not entail p. If the strict
// condition fails for s, the constructor widens S to `fallback` (the larger
// false set the caller verified).
Nogood neg_entailment_nogood(const VarTable& vt, const KnowledgeBase& kb, const Oracle& oracle,
                             AtomId p, const AtomSet& s);
Nogood neg_entailment_nogood_widened(const VarTable& vt, const KnowledgeBase& kb,
                                     const Oracle& oracle, AtomId p, const AtomSet& s,
                                     const AtomSet& fallback, bool* widened = nullptr);

// Every valid entailment nogood over subsets of the ontology atoms; gated.
std::vector<Nogood> entailment_nogoods_full(const VarTable& vt, const KnowledgeBase& kb,
                                            const Oracle& oracle, std::size_t max_atoms = 10);

// --- loop nogoods -----------------------------------------------------------

// All members of the loop family for (L, S): for each p ∈ L and each way of
// certifying every external rule dead (body conjunction false, or another
// head atom outside L true), forbid p true with S false. Requires
// clauses(O) ∪ (ontology atoms ∖ (S ∪ L)) ⊭ ⋁L.
std::vector<Nogood> loop_nogoods(const VarTable& vt, const KnowledgeBase& kb,
                                 const Oracle& oracle, const AtomSet& loop, const AtomSet& s);
// Union over all loops and all valid S; gated by ontology-atom count and
// emitted-nogood count.
std::vector<Nogood> loop_nogoods_full(const VarTable& vt, const KnowledgeBase& kb,
                                      const Oracle& oracle, const DependencyGraph& graph,
                                      std::size_t max_loops, std::size_t max_atoms = 10,
                                      std::size_t max_nogoods = 1u << 20);

// --- induced assignments and solution checking ------------------------------

// The total level-0 assignment a candidate atom set induces: atoms by
// membership, conjunctions by evaluation, ontology-support variables by
// entailment from the candidate minus the atom.
Assignment induced_assignment(const VarTable& vt, const KnowledgeBase& kb, const Oracle& oracle,
                              const AtomSet& interp);

// No nogood is contained in the (total) assignment.
bool is_solution(const std::vector<Nogood>& nogoods, const Assignment& a);

// Candidates whose induced assignment solves the materialized nogood set:
// static + falsum + full entailment family, plus the full loop family unless
// completion_only. Gated on ontology-atom and vocabulary size.
std::vector<AtomSet> enumerate_solutions_full(const KnowledgeBase& kb, const Oracle& oracle,
                                              const DependencyGraph& graph, bool completion_only,
                                              std::size_t max_loops, std::size_t max_kao = 10,
                                              std::size_t max_vocab = 20);

}  // namespace hmknf
