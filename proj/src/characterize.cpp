#include "characterize.hpp"

#include <algorithm>
#include <cstdint>
#include <sstream>

namespace hmknf {

bool ob_entails(const KnowledgeBase& kb, const Oracle& oracle, const AtomSet& assumptions,
                const AtomSet& target) {
  if (intersects(assumptions, target)) return true;
  return oracle.entails(set_intersect(assumptions, kb.ontology_atoms()),
                        set_intersect(target, kb.ontology_atoms()));
}

bool ob_entails_atom(const KnowledgeBase& kb, const Oracle& oracle, const AtomSet& assumptions,
                     AtomId target) {
  return ob_entails(kb, oracle, assumptions, AtomSet{target});
}

bool ob_consistent(const KnowledgeBase& kb, const Oracle& oracle, const AtomSet& assumptions) {
  return oracle.consistent(set_intersect(assumptions, kb.ontology_atoms()));
}

SaturationSet saturation_set(const KnowledgeBase& kb, const Oracle& oracle,
                             const AtomSet& interp) {
  SaturationSet out;
  if (!ob_consistent(kb, oracle, interp)) {
    out.inconsistent = true;
    out.atoms = kb.vocab();  // an inconsistent theory derives everything
    return out;
  }
  out.atoms = interp;
  for (AtomId a : kb.ontology_atoms())
    if (!contains(interp, a) && ob_entails_atom(kb, oracle, interp, a))
      out.atoms = with_atom(out.atoms, a);
  return out;
}

bool is_saturated(const KnowledgeBase& kb, const Oracle& oracle, const AtomSet& interp) {
  if (!ob_consistent(kb, oracle, interp)) return false;
  for (AtomId a : kb.vocab())
    if (!contains(interp, a) && ob_entails_atom(kb, oracle, interp, a)) return false;
  return true;
}

bool is_saturated_via_set(const KnowledgeBase& kb, const Oracle& oracle, const AtomSet& interp) {
  SaturationSet s = saturation_set(kb, oracle, interp);
  return !s.inconsistent && is_subset(s.atoms, interp);
}

bool is_saturated_via_absence(const KnowledgeBase& kb, const Oracle& oracle,
                              const AtomSet& interp) {
  // Nothing outside the candidate — falsum included — may be entailed.
  if (ob_entails(kb, oracle, interp, AtomSet{})) return false;
  for (AtomId a : set_minus(kb.vocab(), interp))
    if (ob_entails_atom(kb, oracle, interp, a)) return false;
  return true;
}

Formula body_formula(const Rule& r) {
  std::vector<Formula> parts;
  for (AtomId p : r.body_pos) parts.push_back(Formula::atom(p));
  for (AtomId n : r.body_neg) parts.push_back(Formula::negate(Formula::atom(n)));
  return Formula::conjunction(std::move(parts));
}

Formula rule_completion_formula(const Rule& r) {
  std::vector<Formula> head;
  for (AtomId h : r.head) head.push_back(Formula::atom(h));
  return Formula::implies(body_formula(r), Formula::disjunction(std::move(head)));
}

Formula support_formula(const KnowledgeBase& kb, AtomId a) {
  std::vector<Formula> options;
  for (const Rule& r : kb.rules()) {
    if (!contains(r.head, a)) continue;
    std::vector<Formula> parts{body_formula(r)};
    for (AtomId q : r.head)
      if (q != a) parts.push_back(Formula::negate(Formula::atom(q)));
    options.push_back(Formula::conjunction(std::move(parts)));
  }
  return Formula::implies(Formula::atom(a), Formula::disjunction(std::move(options)));
}

AtomSet support_required(const KnowledgeBase& kb, const Oracle& oracle, const AtomSet& interp) {
  AtomSet out;
  for (AtomId a : interp)
    if (!ob_entails_atom(kb, oracle, without_atom(interp, a), a)) out.push_back(a);
  return out;
}

Formula loop_formula(const KnowledgeBase& kb, const AtomSet& loop) {
  std::vector<Formula> lhs;
  for (AtomId a : loop) lhs.push_back(Formula::atom(a));
  std::vector<Formula> options;
  for (const Rule& r : kb.rules()) {
    if (!intersects(r.head, loop) || intersects(r.body_pos, loop)) continue;
    std::vector<Formula> parts{body_formula(r)};
    for (AtomId q : set_minus(r.head, loop)) parts.push_back(Formula::negate(Formula::atom(q)));
    options.push_back(Formula::conjunction(std::move(parts)));
  }
  return Formula::implies(Formula::disjunction(std::move(lhs)),
                          Formula::disjunction(std::move(options)));
}

bool loop_check_required(const KnowledgeBase& kb, const Oracle& oracle, const AtomSet& interp,
                         const AtomSet& loop) {
  return !ob_entails(kb, oracle, set_minus(interp, loop), loop);
}

std::string Verdict::component_label(const KnowledgeBase& kb) const {
  switch (component) {
    case Component::None:
      return "none";
    case Component::RuleCompletion:
      return "rule-completion(r" + std::to_string(rule_id + 1) + ")";
    case Component::Saturation:
      return "saturation";
    case Component::Support:
      return "support(" + kb.atom_name(atom) + ")";
    case Component::Loop:
      return "loop(" + kb.atom_set_to_string(loop) + ")";
  }
  return "none";
}

Verdict check_completion(const KnowledgeBase& kb, const Oracle& oracle, const AtomSet& interp) {
  Verdict v;
  for (const Rule& r : kb.rules()) {
    Formula f = rule_completion_formula(r);
    if (!f.eval(interp)) {
      v.accepted = false;
      v.component = Verdict::Component::RuleCompletion;
      v.rule_id = r.id;
      v.witness = f.to_string(kb);
      return v;
    }
  }
  if (!is_saturated(kb, oracle, interp)) {
    v.accepted = false;
    v.component = Verdict::Component::Saturation;
    SaturationSet s = saturation_set(kb, oracle, interp);
    v.witness = s.inconsistent ? "ontology inconsistent with candidate"
                               : "entails " + kb.atom_set_to_string(set_minus(s.atoms, interp));
    return v;
  }
  for (AtomId a : support_required(kb, oracle, interp)) {
    Formula f = support_formula(kb, a);
    if (!f.eval(interp)) {
      v.accepted = false;
      v.component = Verdict::Component::Support;
      v.atom = a;
      v.witness = f.to_string(kb);
      return v;
    }
  }
  return v;
}

Verdict check_model_induced(const KnowledgeBase& kb, const Oracle& oracle,
                            const DependencyGraph& graph, const AtomSet& interp,
                            std::size_t max_loops) {
  Verdict v = check_completion(kb, oracle, interp);
  if (!v.accepted) return v;
  for (const AtomSet& loop : loops(graph, max_loops)) {
    if (!loop_check_required(kb, oracle, interp, loop)) continue;
    Formula f = loop_formula(kb, loop);
    if (!f.eval(interp)) {
      v.accepted = false;
      v.component = Verdict::Component::Loop;
      v.loop = loop;
      v.witness = f.to_string(kb);
      return v;
    }
  }
  return v;
}

bool is_model_induced(const KnowledgeBase& kb, const Oracle& oracle, const DependencyGraph& graph,
                      const AtomSet& interp, std::size_t max_loops) {
  return check_model_induced(kb, oracle, graph, interp, max_loops).accepted;
}

Verdict check_model_induced_sweep(const KnowledgeBase& kb, const Oracle& oracle,
                                  const DependencyGraph& graph, const AtomSet& interp) {
  Verdict v = check_completion(kb, oracle, interp);
  if (!v.accepted) return v;
  for (const AtomSet& comp : sccs(graph)) {
    AtomSet pool = set_intersect(comp, interp);
    if (pool.empty()) continue;
    if (pool.size() > 22)
      throw GateError("candidate loop sweep too large: " + std::to_string(pool.size()) +
                      " atoms in one SCC");
    const std::uint32_t full = (1u << pool.size()) - 1;
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
      AtomSet subset;
      for (std::size_t i = 0; i < pool.size(); ++i)
        if (mask & (1u << i)) subset.push_back(pool[i]);
      if (!loop_check_required(kb, oracle, interp, subset)) continue;
      Formula f = loop_formula(kb, subset);
      if (!f.eval(interp)) {
        v.accepted = false;
        v.component = Verdict::Component::Loop;
        v.loop = subset;
        v.witness = f.to_string(kb);
        return v;
      }
    }
  }
  return v;
}

std::vector<AtomSet> enumerate_models_formulas(const KnowledgeBase& kb, const Oracle& oracle,
                                               const DependencyGraph& graph,
                                               std::size_t max_loops, std::size_t max_vocab) {
  const std::size_t n = kb.atom_count();
  if (n > max_vocab)
    throw GateError("brute-force enumeration over " + std::to_string(n) +
                    " atoms exceeds gate of " + std::to_string(max_vocab));
  std::vector<AtomSet> out;
  const std::uint32_t full = n == 0 ? 0 : (1u << n) - 1;
  for (std::uint32_t mask = 0;; ++mask) {
    AtomSet interp;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) interp.push_back(static_cast<AtomId>(i));
    if (is_model_induced(kb, oracle, graph, interp, max_loops)) out.push_back(std::move(interp));
    if (mask == full) break;
  }
  return out;
}

bool extension_satisfies_kb(const KnowledgeBase& kb, const Oracle& oracle,
                            const AtomSet& interp) {
  // Extension non-empty: the ontology must be consistent with the candidate.
  if (!ob_consistent(kb, oracle, interp)) return false;
  // The extension's objective intersection must be exactly the candidate.
  for (AtomId a : set_minus(kb.vocab(), interp))
    if (ob_entails_atom(kb, oracle, interp, a)) return false;

  // Rules with modal atoms read as entailment from the asserted set, and
  // negation read against the candidate (its own closure once the check
  // above has passed, so membership suffices).
  auto rules_hold = [&](const AtomSet& asserted) {
    for (const Rule& r : kb.rules()) {
      bool body = true;
      for (AtomId p : r.body_pos)
        if (!ob_entails_atom(kb, oracle, asserted, p)) {
          body = false;
          break;
        }
      if (body)
        for (AtomId ng : r.body_neg)
          if (std::binary_search(interp.begin(), interp.end(), ng)) {
            body = false;
            break;
          }
      if (!body) continue;
      bool head = false;
      for (AtomId h : r.head)
        if (ob_entails_atom(kb, oracle, asserted, h)) {
          head = true;
          break;
        }
      if (!head) return false;
    }
    return true;
  };
  if (!rules_hold(interp)) return false;

  // No strictly larger extension may also satisfy everything: asserting only
  // a proper subset widens the objective models, and if some widening that
  // loses at least one candidate member still satisfies every rule, the
  // candidate is not induced by a model. Any larger witness reduces to one
  // of this shape, so scanning the subsets decides it.
  if (interp.size() > 20)
    throw GateError("extension route over " + std::to_string(interp.size()) +
                    " candidate atoms exceeds gate of 20");
  const std::uint32_t full = interp.empty() ? 0 : (1u << interp.size()) - 1;
  for (std::uint32_t mask = 0; mask < full; ++mask) {
    AtomSet sub;
    for (std::size_t i = 0; i < interp.size(); ++i)
      if (mask & (1u << i)) sub.push_back(interp[i]);
    bool widens = false;
    for (AtomId b : interp)
      if (!ob_entails_atom(kb, oracle, sub, b)) {
        widens = true;
        break;
      }
    if (widens && rules_hold(sub)) return false;
  }
  return true;
}

}  // namespace hmknf
