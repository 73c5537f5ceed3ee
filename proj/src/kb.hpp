#pragma once

// Ground knowledge base: disjunctive rules over a shared atom table plus a
// clausal ontology. Atoms are interned strings; an atom's id is its insertion
// index, and all structural sets (heads, bodies, clause literals) are
// canonical sorted AtomSets over those ids.

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "base.hpp"

namespace hmknf {

struct Rule {
  std::uint32_t id = 0;  // position in the rule list (file order)
  AtomSet head;          // disjunctive, non-empty
  AtomSet body_pos;      // positive body atoms
  AtomSet body_neg;      // default-negated body atoms

  bool operator==(const Rule& o) const {
    return head == o.head && body_pos == o.body_pos && body_neg == o.body_neg;
  }
};

// One ontology clause: disjunction of positive and negated atoms. Never a
// tautology (p and ~p together) and never empty; the parser enforces both.
struct Clause {
  AtomSet pos;
  AtomSet neg;

  bool operator==(const Clause& o) const { return pos == o.pos && neg == o.neg; }
};

class KnowledgeBase {
 public:
  AtomId intern_atom(const std::string& name);
  std::optional<AtomId> find_atom(const std::string& name) const;
  const std::string& atom_name(AtomId a) const;
  std::size_t atom_count() const { return names_.size(); }

  void add_rule(AtomSet head, AtomSet body_pos, AtomSet body_neg);
  void add_clause(Clause c);
  void add_warning(std::string w) { warnings_.push_back(std::move(w)); }

  // Recomputes the derived atom classes; call after the last add_*.
  void finalize();

  const std::vector<Rule>& rules() const { return rules_; }
  const std::vector<Clause>& clauses() const { return clauses_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  // All atoms, i.e. {0, ..., atom_count()-1}.
  const AtomSet& vocab() const { return vocab_; }
  // Atoms occurring in at least one rule.
  const AtomSet& rule_atoms() const { return rule_atoms_; }
  // Atoms occurring in at least one ontology clause.
  const AtomSet& ontology_atoms() const { return ontology_atoms_; }

  // Atom ids ordered by name; fixes every user-visible iteration order.
  const std::vector<AtomId>& atoms_by_name() const { return by_name_; }

  // Renders the KB in the input grammar; parsing the result reproduces the
  // same rules, clauses and atom names.
  std::string serialize() const;

  std::string atom_set_to_string(const AtomSet& s) const;  // "{a, b}" name-sorted
  std::string rule_to_string(const Rule& r) const;
  std::string clause_to_string(const Clause& c) const;

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, AtomId> ids_;
  std::vector<Rule> rules_;
  std::vector<Clause> clauses_;
  std::vector<std::string> warnings_;
  AtomSet vocab_;
  AtomSet rule_atoms_;
  AtomSet ontology_atoms_;
  std::vector<AtomId> by_name_;
};

}  // namespace hmknf
