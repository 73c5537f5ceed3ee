#pragma once

// Ground-truth model enumeration for tiny vocabularies, straight from the
// modal semantics: candidates are sets M of interpretations, and M is a model
// when it satisfies every rule and ontology clause under the modal reading
// (K-atoms true in all of M, negated atoms false somewhere) and no proper
// superset still satisfies them with negation evaluated against M. Each model
// induces the set of atoms true throughout M.
//
// The table over subsets-of-interpretations is 2^(2^n); the implementation
// refuses vocabularies beyond 4 atoms regardless of the caller's gate.

#include <vector>

#include "kb.hpp"

namespace hmknf {

inline constexpr std::size_t kDirectHardCap = 4;

// Induced atom sets of all models, sorted and duplicate-free.
std::vector<AtomSet> enumerate_models_direct(const KnowledgeBase& kb, std::size_t max_vocab);

bool is_model_induced_direct(const KnowledgeBase& kb, const AtomSet& interp,
                             std::size_t max_vocab);

}  // namespace hmknf
