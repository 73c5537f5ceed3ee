#pragma once

// Dependency graphs over the KB's atoms.
//
// Rule edges run from each head atom to each positive body atom. Ontology
// edges capture entailment dependencies: an exact edge a→b exists when some
// consistent assumption set S ∌ a entails a and dropping b ∈ S loses the
// entailment. The exact construction enumerates assumption sets and is gated
// by the ontology-atom count; the default overapproximation takes all ordered
// pairs of distinct atoms within one clause-connected component, which always
// contains the exact edge set. Loops are the non-empty subsets of SCCs whose
// induced subgraph is strongly connected (singletons only with a self-edge).

#include <cstdint>
#include <string>
#include <vector>

#include "kb.hpp"
#include "oracle.hpp"

namespace hmknf {

enum class GraphMode { Overapprox, Exact };

using EdgeList = std::vector<std::pair<AtomId, AtomId>>;  // sorted, unique

struct DependencyGraph {
  GraphMode mode = GraphMode::Overapprox;
  std::size_t atom_count = 0;
  EdgeList rule_edges;
  EdgeList ontology_edges;

  // Out-neighbors in the combined graph, per atom.
  std::vector<AtomSet> adjacency;
  // Out-neighbors across ontology edges only, per atom.
  std::vector<AtomSet> ontology_adjacency;

  bool has_edge(AtomId from, AtomId to) const;
  // Ontology-edge out-neighborhood of S, excluding S itself.
  AtomSet ext(const AtomSet& s) const;
};

EdgeList rule_edges(const KnowledgeBase& kb);
EdgeList ontology_edges_exact(const KnowledgeBase& kb, const Oracle& oracle,
                              std::size_t max_atoms);
EdgeList ontology_edges_overapprox(const KnowledgeBase& kb);

DependencyGraph build_graph(const KnowledgeBase& kb, const Oracle& oracle, GraphMode mode,
                            std::size_t max_exact_atoms);

// Strongly connected components of the combined graph, each sorted, ordered
// by smallest member.
std::vector<AtomSet> sccs(const DependencyGraph& g);

// No cycle in the combined graph (self-edges count as cycles).
bool is_tight(const DependencyGraph& g);

// All loops, gated by result count; an SCC larger than 22 atoms also trips
// the gate (its subset space is not enumerable).
std::vector<AtomSet> loops(const DependencyGraph& g, std::size_t max_loops);

// Graphviz rendering: solid rule edges, dashed ontology edges; optionally
// clusters non-trivial SCCs.
std::string to_dot(const KnowledgeBase& kb, const DependencyGraph& g, bool annotate_sccs);

}  // namespace hmknf
