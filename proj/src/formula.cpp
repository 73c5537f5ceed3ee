#include "formula.hpp"

namespace hmknf {

Formula Formula::truth(bool value) {
  auto n = std::make_shared<Node>();
  n->kind = value ? Kind::True : Kind::False;
  return Formula(std::move(n));
}

Formula Formula::atom(AtomId a) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Atom;
  n->atom = a;
  return Formula(std::move(n));
}

Formula Formula::negate(Formula f) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Not;
  n->children.push_back(std::move(f.node_));
  return Formula(std::move(n));
}

Formula Formula::conjunction(std::vector<Formula> fs) {
  if (fs.empty()) return truth(true);
  if (fs.size() == 1) return std::move(fs.front());
  auto n = std::make_shared<Node>();
  n->kind = Kind::And;
  for (Formula& f : fs) n->children.push_back(std::move(f.node_));
  return Formula(std::move(n));
}

Formula Formula::disjunction(std::vector<Formula> fs) {
  if (fs.empty()) return truth(false);
  if (fs.size() == 1) return std::move(fs.front());
  auto n = std::make_shared<Node>();
  n->kind = Kind::Or;
  for (Formula& f : fs) n->children.push_back(std::move(f.node_));
  return Formula(std::move(n));
}

Formula Formula::implies(Formula lhs, Formula rhs) {
  return disjunction([&] {
    std::vector<Formula> fs;
    fs.push_back(negate(std::move(lhs)));
    fs.push_back(std::move(rhs));
    return fs;
  }());
}

bool Formula::eval(const AtomSet& interpretation) const {
  return eval_node(*node_, interpretation);
}

bool Formula::eval_node(const Node& n, const AtomSet& interp) {
  switch (n.kind) {
    case Kind::True: return true;
    case Kind::False: return false;
    case Kind::Atom: return contains(interp, n.atom);
    case Kind::Not: return !eval_node(*n.children[0], interp);
    case Kind::And:
      for (const auto& c : n.children)
        if (!eval_node(*c, interp)) return false;
      return true;
    case Kind::Or:
      for (const auto& c : n.children)
        if (eval_node(*c, interp)) return true;
      return false;
  }
  return false;
}

// Precedence: ~ binds tighter than &, & tighter than |.
void Formula::render(const Node& n, const KnowledgeBase& kb, std::string& out, int parent_prec) {
  switch (n.kind) {
    case Kind::True: out += "true"; return;
    case Kind::False: out += "false"; return;
    case Kind::Atom: out += kb.atom_name(n.atom); return;
    case Kind::Not:
      out += "~";
      render(*n.children[0], kb, out, 3);
      return;
    case Kind::And: {
      bool paren = parent_prec > 2;
      if (paren) out += "(";
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        if (i) out += " & ";
        render(*n.children[i], kb, out, 2);
      }
      if (paren) out += ")";
      return;
    }
    case Kind::Or: {
      bool paren = parent_prec > 1;
      if (paren) out += "(";
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        if (i) out += " | ";
        render(*n.children[i], kb, out, 1);
      }
      if (paren) out += ")";
      return;
    }
  }
}

std::string Formula::to_string(const KnowledgeBase& kb) const {
  std::string out;
  render(*node_, kb, out, 0);
  return out;
}

}  // namespace hmknf
