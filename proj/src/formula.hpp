#pragma once

// Small immutable propositional formulas, evaluated against an atom set
// (atoms in the set are true, all others false). Used to state and check the
// completion and loop conditions; rendering matches the ontology syntax.

#include <memory>
#include <string>
#include <vector>

#include "kb.hpp"

namespace hmknf {

class Formula {
 public:
  static Formula truth(bool value);
  static Formula atom(AtomId a);
  static Formula negate(Formula f);
  static Formula conjunction(std::vector<Formula> fs);  // empty -> true
  static Formula disjunction(std::vector<Formula> fs);  // empty -> false
  static Formula implies(Formula lhs, Formula rhs);

  bool eval(const AtomSet& interpretation) const;
  std::string to_string(const KnowledgeBase& kb) const;

 private:
  enum class Kind { True, False, Atom, Not, And, Or };
  struct Node {
    Kind kind;
    AtomId atom = 0;
    std::vector<std::shared_ptr<const Node>> children;
  };

  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static bool eval_node(const Node& n, const AtomSet& interp);
  static void render(const Node& n, const KnowledgeBase& kb, std::string& out, int parent_prec);

  std::shared_ptr<const Node> node_;
};

}  // namespace hmknf
