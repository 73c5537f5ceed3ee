#include "kb.hpp"

#include <sstream>

namespace hmknf {

AtomId KnowledgeBase::intern_atom(const std::string& name) {
  auto it = ids_.find(name);
  if (it != ids_.end()) return it->second;
  AtomId id = static_cast<AtomId>(names_.size());
  names_.push_back(name);
  ids_.emplace(name, id);
  return id;
}

std::optional<AtomId> KnowledgeBase::find_atom(const std::string& name) const {
  auto it = ids_.find(name);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

const std::string& KnowledgeBase::atom_name(AtomId a) const {
  require(a < names_.size(), "atom id out of range");
  return names_[a];
}

void KnowledgeBase::add_rule(AtomSet head, AtomSet body_pos, AtomSet body_neg) {
  sort_unique(head);
  sort_unique(body_pos);
  sort_unique(body_neg);
  require(!head.empty(), "rule head must be non-empty");
  Rule r;
  r.id = static_cast<std::uint32_t>(rules_.size());
  r.head = std::move(head);
  r.body_pos = std::move(body_pos);
  r.body_neg = std::move(body_neg);
  rules_.push_back(std::move(r));
}

void KnowledgeBase::add_clause(Clause c) {
  sort_unique(c.pos);
  sort_unique(c.neg);
  require(!c.pos.empty() || !c.neg.empty(), "empty clause");
  require(!intersects(c.pos, c.neg), "tautological clause");
  clauses_.push_back(std::move(c));
}

void KnowledgeBase::finalize() {
  vocab_.clear();
  vocab_.reserve(names_.size());
  for (AtomId a = 0; a < names_.size(); ++a) vocab_.push_back(a);

  rule_atoms_.clear();
  for (const Rule& r : rules_) {
    rule_atoms_.insert(rule_atoms_.end(), r.head.begin(), r.head.end());
    rule_atoms_.insert(rule_atoms_.end(), r.body_pos.begin(), r.body_pos.end());
    rule_atoms_.insert(rule_atoms_.end(), r.body_neg.begin(), r.body_neg.end());
  }
  sort_unique(rule_atoms_);

  ontology_atoms_.clear();
  for (const Clause& c : clauses_) {
    ontology_atoms_.insert(ontology_atoms_.end(), c.pos.begin(), c.pos.end());
    ontology_atoms_.insert(ontology_atoms_.end(), c.neg.begin(), c.neg.end());
  }
  sort_unique(ontology_atoms_);

  by_name_.assign(vocab_.begin(), vocab_.end());
  std::sort(by_name_.begin(), by_name_.end(),
            [this](AtomId x, AtomId y) { return names_[x] < names_[y]; });
}

std::string KnowledgeBase::atom_set_to_string(const AtomSet& s) const {
  std::vector<AtomId> order(s.begin(), s.end());
  std::sort(order.begin(), order.end(),
            [this](AtomId x, AtomId y) { return names_[x] < names_[y]; });
  std::string out = "{";
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i) out += ", ";
    out += names_[order[i]];
  }
  out += "}";
  return out;
}

std::string KnowledgeBase::rule_to_string(const Rule& r) const {
  std::ostringstream os;
  for (std::size_t i = 0; i < r.head.size(); ++i) {
    if (i) os << " ; ";
    os << names_[r.head[i]];
  }
  if (!r.body_pos.empty() || !r.body_neg.empty()) {
    os << " :- ";
    bool first = true;
    for (AtomId a : r.body_pos) {
      if (!first) os << ", ";
      first = false;
      os << names_[a];
    }
    for (AtomId a : r.body_neg) {
      if (!first) os << ", ";
      first = false;
      os << "not " << names_[a];
    }
  }
  os << ".";
  return os.str();
}

std::string KnowledgeBase::clause_to_string(const Clause& c) const {
  std::ostringstream os;
  bool first = true;
  for (AtomId a : c.pos) {
    if (!first) os << " | ";
    first = false;
    os << names_[a];
  }
  for (AtomId a : c.neg) {
    if (!first) os << " | ";
    first = false;
    os << "~" << names_[a];
  }
  os << ".";
  return os.str();
}

std::string KnowledgeBase::serialize() const {
  std::ostringstream os;
  for (const Rule& r : rules_) os << rule_to_string(r) << "\n";
  if (!clauses_.empty()) {
    os << "#ontology\n";
    for (const Clause& c : clauses_) os << clause_to_string(c) << "\n";
    os << "#end\n";
  }
  return os.str();
}

}  // namespace hmknf
