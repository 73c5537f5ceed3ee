#pragma once

// Formula-level characterization of which candidate K-interpretations are
// induced by models of the knowledge base.
//
// A candidate set of atoms (everything outside it false) is accepted iff it
// satisfies three completion conditions — every rule's body implies its head,
// the set is saturated (it already contains everything the ontology derives
// from it, and is consistent with it), and every atom whose truth is not
// forced by the ontology alone has a supporting rule — plus, for non-tight
// KBs, one loop condition per dependency loop whose truth is not externally
// forced: some rule outside the loop must support it.

#include <cstdint>
#include <string>
#include <vector>

#include "depgraph.hpp"
#include "formula.hpp"
#include "kb.hpp"
#include "oracle.hpp"

namespace hmknf {

// Hybrid entailment: assumptions and targets range over the full vocabulary.
// Assumed atoms entail themselves; everything else defers to the ontology
// (restricted to ontology atoms). Empty target asks for falsum.
bool ob_entails(const KnowledgeBase& kb, const Oracle& oracle, const AtomSet& assumptions,
                const AtomSet& target);
bool ob_entails_atom(const KnowledgeBase& kb, const Oracle& oracle, const AtomSet& assumptions,
                     AtomId target);
bool ob_consistent(const KnowledgeBase& kb, const Oracle& oracle, const AtomSet& assumptions);

// Everything the ontology forces given the candidate: the candidate itself,
// all entailed atoms, and possibly falsum.
struct SaturationSet {
  bool inconsistent = false;
  AtomSet atoms;
};
SaturationSet saturation_set(const KnowledgeBase& kb, const Oracle& oracle,
                             const AtomSet& interp);

// Three equivalent saturation tests (kept separate so they can cross-check
// each other): entailed-atoms-are-members, computed-set-containment, and
// no-entailment-outside-the-candidate.
bool is_saturated(const KnowledgeBase& kb, const Oracle& oracle, const AtomSet& interp);
bool is_saturated_via_set(const KnowledgeBase& kb, const Oracle& oracle, const AtomSet& interp);
bool is_saturated_via_absence(const KnowledgeBase& kb, const Oracle& oracle,
                              const AtomSet& interp);

Formula body_formula(const Rule& r);
Formula rule_completion_formula(const Rule& r);
// Support formula for atom a: a implies some rule with a in the head fires
// exclusively for a (body holds, all other head atoms false).
Formula support_formula(const KnowledgeBase& kb, AtomId a);
// Atoms whose truth the ontology does not force from the rest of the
// candidate; exactly these need their support formula checked.
AtomSet support_required(const KnowledgeBase& kb, const Oracle& oracle, const AtomSet& interp);
// Loop formula for L: if any loop atom is true, some rule supports the loop
// from outside (head meets L, positive body avoids L, other head atoms false).
Formula loop_formula(const KnowledgeBase& kb, const AtomSet& loop);
// Does loop L need its formula checked? Yes unless the ontology derives the
// loop's disjunction from the candidate minus the loop.
bool loop_check_required(const KnowledgeBase& kb, const Oracle& oracle, const AtomSet& interp,
                         const AtomSet& loop);

struct Verdict {
  bool accepted = true;
  enum class Component { None, RuleCompletion, Saturation, Support, Loop } component =
      Component::None;
  std::uint32_t rule_id = 0;  // for RuleCompletion
  AtomId atom = 0;            // for Support
  AtomSet loop;               // for Loop
  std::string witness;        // rendered violated condition

  std::string component_label(const KnowledgeBase& kb) const;
};

// Completion-only check (rule completion, saturation, support) — complete on
// its own for tight KBs.
Verdict check_completion(const KnowledgeBase& kb, const Oracle& oracle, const AtomSet& interp);
// Full check: completion plus every enumerated loop.
Verdict check_model_induced(const KnowledgeBase& kb, const Oracle& oracle,
                            const DependencyGraph& graph, const AtomSet& interp,
                            std::size_t max_loops);
bool is_model_induced(const KnowledgeBase& kb, const Oracle& oracle, const DependencyGraph& graph,
                      const AtomSet& interp, std::size_t max_loops);

// Loop sweep restricted to true atoms: checks the loop condition over all
// subsets of (SCC ∩ candidate) instead of all loops. Equivalent for fixed
// candidate — a violated loop lies inside the true atoms of one SCC — and
// usable when full loop enumeration trips its gate.
Verdict check_model_induced_sweep(const KnowledgeBase& kb, const Oracle& oracle,
                                  const DependencyGraph& graph, const AtomSet& interp);

// All accepted candidates by brute force over subsets of the vocabulary.
std::vector<AtomSet> enumerate_models_formulas(const KnowledgeBase& kb, const Oracle& oracle,
                                               const DependencyGraph& graph,
                                               std::size_t max_loops,
                                               std::size_t max_vocab = 20);

// Independent semantic route for invariants: build the candidate's ontology
// extension implicitly (its objective models), require it to be non-empty
// and to induce exactly the candidate, evaluate the KB's rules with K-atoms
// read as entailment from the extension, and reject when a proper subset of
// the candidate widens the extension yet still satisfies every rule (the
// wider evaluation set disproves the candidate's model).
bool extension_satisfies_kb(const KnowledgeBase& kb, const Oracle& oracle, const AtomSet& interp);

}  // namespace hmknf
