#include "depgraph.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace hmknf {

namespace {

void sort_unique_edges(EdgeList& e) {
  std::sort(e.begin(), e.end());
  e.erase(std::unique(e.begin(), e.end()), e.end());
}

std::vector<AtomSet> adjacency_of(std::size_t n, const EdgeList& edges) {
  std::vector<AtomSet> adj(n);
  for (const auto& [from, to] : edges) adj[from].push_back(to);
  for (AtomSet& s : adj) sort_unique(s);
  return adj;
}

}  // namespace

bool DependencyGraph::has_edge(AtomId from, AtomId to) const {
  return from < adjacency.size() && contains(adjacency[from], to);
}

AtomSet DependencyGraph::ext(const AtomSet& s) const {
  AtomSet out;
  for (AtomId a : s)
    out.insert(out.end(), ontology_adjacency[a].begin(), ontology_adjacency[a].end());
  sort_unique(out);
  return set_minus(out, s);
}

EdgeList rule_edges(const KnowledgeBase& kb) {
  EdgeList out;
  for (const Rule& r : kb.rules())
    for (AtomId h : r.head)
      for (AtomId b : r.body_pos) out.emplace_back(h, b);
  sort_unique_edges(out);
  return out;
}

// Exact edges by enumeration: for every consistent S ⊆ ontology atoms, every
// entailed a ∉ S, and every b ∈ S whose removal loses the entailment.
EdgeList ontology_edges_exact(const KnowledgeBase& kb, const Oracle& oracle,
                              std::size_t max_atoms) {
  const AtomSet& kao = kb.ontology_atoms();
  if (kao.size() > max_atoms) {
    std::ostringstream os;
    os << "exact dependency graph needs " << kao.size()
       << " ontology atoms enumerated, gate is " << max_atoms;
    throw GateError(os.str());
  }
  EdgeList out;
  const std::size_t n = kao.size();
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    AtomSet s;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) s.push_back(kao[i]);
    if (!oracle.consistent(s)) continue;
    for (AtomId a : kao) {
      if (contains(s, a)) continue;
      if (!oracle.entails_atom(s, a)) continue;
      for (AtomId b : s)
        if (!oracle.entails_atom(without_atom(s, b), a)) out.emplace_back(a, b);
    }
  }
  sort_unique_edges(out);
  return out;
}

// Overapproximation: union clause co-occurrence into connected components and
// connect all ordered pairs of distinct atoms within a component. Contains
// every exact edge: a consistent minimal entailment S ⊨ a cannot cross
// clause-connected components, so each b ∈ S shares a's component.
EdgeList ontology_edges_overapprox(const KnowledgeBase& kb) {
  const AtomSet& kao = kb.ontology_atoms();
  std::vector<AtomId> parent(kb.atom_count());
  for (AtomId a = 0; a < parent.size(); ++a) parent[a] = a;
  std::function<AtomId(AtomId)> find = [&](AtomId x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (const Clause& c : kb.clauses()) {
    AtomSet all = set_union(c.pos, c.neg);
    for (std::size_t i = 1; i < all.size(); ++i) parent[find(all[i])] = find(all[0]);
  }
  std::vector<AtomSet> groups(kb.atom_count());
  for (AtomId a : kao) groups[find(a)].push_back(a);
  EdgeList out;
  for (const AtomSet& g : groups)
    for (AtomId x : g)
      for (AtomId y : g)
        if (x != y) out.emplace_back(x, y);
  sort_unique_edges(out);
  return out;
}

DependencyGraph build_graph(const KnowledgeBase& kb, const Oracle& oracle, GraphMode mode,
                            std::size_t max_exact_atoms) {
  DependencyGraph g;
  g.mode = mode;
  g.atom_count = kb.atom_count();
  g.rule_edges = rule_edges(kb);
  g.ontology_edges = mode == GraphMode::Exact
                         ? ontology_edges_exact(kb, oracle, max_exact_atoms)
                         : ontology_edges_overapprox(kb);
  EdgeList combined = g.rule_edges;
  combined.insert(combined.end(), g.ontology_edges.begin(), g.ontology_edges.end());
  sort_unique_edges(combined);
  g.adjacency = adjacency_of(g.atom_count, combined);
  g.ontology_adjacency = adjacency_of(g.atom_count, g.ontology_edges);
  return g;
}

// Iterative Tarjan.
std::vector<AtomSet> sccs(const DependencyGraph& g) {
  const std::size_t n = g.atom_count;
  std::vector<std::uint32_t> index(n, 0), low(n, 0);
  std::vector<bool> on_stack(n, false), visited(n, false);
  std::vector<AtomId> stack;
  std::vector<AtomSet> out;
  std::uint32_t counter = 1;

  struct Frame {
    AtomId v;
    std::size_t next_edge;
  };
  for (AtomId root = 0; root < n; ++root) {
    if (visited[root]) continue;
    std::vector<Frame> frames{{root, 0}};
    visited[root] = true;
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      Frame& f = frames.back();
      const AtomSet& adj = g.adjacency[f.v];
      if (f.next_edge < adj.size()) {
        AtomId w = adj[f.next_edge++];
        if (!visited[w]) {
          visited[w] = true;
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
      } else {
        AtomId v = f.v;
        frames.pop_back();
        if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
        if (low[v] == index[v]) {
          AtomSet comp;
          for (;;) {
            AtomId w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            comp.push_back(w);
            if (w == v) break;
          }
          sort_unique(comp);
          out.push_back(std::move(comp));
        }
      }
    }
  }
  std::sort(out.begin(), out.end(),
            [](const AtomSet& a, const AtomSet& b) { return a.front() < b.front(); });
  return out;
}

bool is_tight(const DependencyGraph& g) {
  for (const AtomSet& c : sccs(g)) {
    if (c.size() > 1) return false;
    if (g.has_edge(c.front(), c.front())) return false;
  }
  return true;
}

namespace {

// Is the subgraph induced by `subset` strongly connected (and non-trivially
// so for singletons, i.e. with a self-edge)?
bool induced_strongly_connected(const DependencyGraph& g, const AtomSet& subset) {
  if (subset.empty()) return false;
  if (subset.size() == 1) return g.has_edge(subset[0], subset[0]);
  // DFS within the subset from its first atom, then in the transpose.
  auto reach_all = [&](bool transpose) {
    std::vector<AtomId> work{subset[0]};
    AtomSet seen{subset[0]};
    while (!work.empty()) {
      AtomId v = work.back();
      work.pop_back();
      for (AtomId u : subset) {
        if (contains(seen, u)) continue;
        bool edge = transpose ? g.has_edge(u, v) : g.has_edge(v, u);
        if (edge) {
          seen = with_atom(seen, u);
          work.push_back(u);
        }
      }
    }
    return seen.size() == subset.size();
  };
  return reach_all(false) && reach_all(true);
}

}  // namespace

std::vector<AtomSet> loops(const DependencyGraph& g, std::size_t max_loops) {
  std::vector<AtomSet> out;
  for (const AtomSet& comp : sccs(g)) {
    if (comp.size() == 1) {
      if (g.has_edge(comp.front(), comp.front())) out.push_back(comp);
      continue;
    }
    if (comp.size() > 22)
      throw GateError("dependency SCC too large for loop enumeration: " +
                      std::to_string(comp.size()) + " atoms");
    const std::uint32_t full = (1u << comp.size()) - 1;
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
      AtomSet subset;
      for (std::size_t i = 0; i < comp.size(); ++i)
        if (mask & (1u << i)) subset.push_back(comp[i]);
      if (induced_strongly_connected(g, subset)) {
        out.push_back(std::move(subset));
        if (out.size() > max_loops)
          throw GateError("loop count exceeds gate of " + std::to_string(max_loops));
      }
    }
  }
  return out;
}

std::string to_dot(const KnowledgeBase& kb, const DependencyGraph& g, bool annotate_sccs) {
  std::ostringstream os;
  os << "digraph dependencies {\n  rankdir=LR;\n";
  std::vector<char> clustered(kb.atom_count(), 0);
  if (annotate_sccs) {
    std::size_t cluster = 0;
    for (const AtomSet& comp : sccs(g)) {
      bool cyclic = comp.size() > 1 || g.has_edge(comp.front(), comp.front());
      if (!cyclic) continue;
      os << "  subgraph cluster_" << cluster++ << " {\n    label=\"scc\";\n";
      std::vector<std::string> names;
      for (AtomId a : comp) {
        clustered[a] = 1;
        names.push_back(kb.atom_name(a));
      }
      std::sort(names.begin(), names.end());
      for (const std::string& n : names) os << "    \"" << n << "\";\n";
      os << "  }\n";
    }
  }
  for (AtomId a : kb.atoms_by_name())
    if (!clustered[a]) os << "  \"" << kb.atom_name(a) << "\";\n";
  for (const auto& [from, to] : g.rule_edges)
    os << "  \"" << kb.atom_name(from) << "\" -> \"" << kb.atom_name(to) << "\";\n";
  for (const auto& [from, to] : g.ontology_edges)
    os << "  \"" << kb.atom_name(from) << "\" -> \"" << kb.atom_name(to)
       << "\" [style=dashed];\n";
  os << "}\n";
  return os.str();
}

}  // namespace hmknf
