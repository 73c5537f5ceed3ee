#include "oracle.hpp"

#include <cstring>

namespace hmknf {

namespace {

// -1 unassigned, 0 false, 1 true
constexpr std::int8_t kUnassigned = -1;

void encode_u32(std::string& out, std::uint32_t v) {
  char buf[4];
  std::memcpy(buf, &v, 4);
  out.append(buf, 4);
}

}  // namespace

Oracle::Oracle(const KnowledgeBase& kb, std::size_t cache_capacity)
    : kb_(kb), cache_capacity_(cache_capacity) {
  for (AtomId a : kb.ontology_atoms()) {
    atom_to_local_.emplace(a, static_cast<std::uint32_t>(local_to_atom_.size()));
    local_to_atom_.push_back(a);
  }
  clauses_.reserve(kb.clauses().size());
  for (const Clause& c : kb.clauses()) {
    std::vector<Lit> lc;
    lc.reserve(c.pos.size() + c.neg.size());
    for (AtomId a : c.pos) lc.push_back({local(a), true});
    for (AtomId a : c.neg) lc.push_back({local(a), false});
    if (c.pos.size() > 1) horn_ = false;
    clauses_.push_back(std::move(lc));
  }
}

std::uint32_t Oracle::local(AtomId a) const {
  auto it = atom_to_local_.find(a);
  require(it != atom_to_local_.end(), "oracle query over non-ontology atom");
  return it->second;
}

bool Oracle::entails(const AtomSet& assumptions, const AtomSet& target) const {
  return query(0, assumptions, target);
}

bool Oracle::entails_atom(const AtomSet& assumptions, AtomId target) const {
  return query(0, assumptions, AtomSet{target});
}

bool Oracle::refutes_atom(const AtomSet& assumptions, AtomId target) const {
  return query(1, assumptions, AtomSet{target});
}

bool Oracle::consistent(const AtomSet& assumptions) const {
  return !query(0, assumptions, AtomSet{});
}

EntailmentClosure Oracle::closure(const AtomSet& assumptions) const {
  EntailmentClosure out;
  if (!consistent(assumptions)) {
    out.inconsistent = true;
    return out;
  }
  for (AtomId a : kb_.ontology_atoms()) {
    if (entails_atom(assumptions, a))
      out.pos.push_back(a);
    else if (refutes_atom(assumptions, a))
      out.neg.push_back(a);
  }
  return out;
}

OracleStats Oracle::stats() const {
  std::lock_guard<std::mutex> lock(mu_);
  return stats_;
}

// kind 0: ⊨ ⋁target (target empty = falsum); kind 1: ⊨ ¬target (singleton).
bool Oracle::query(std::uint8_t kind, const AtomSet& assumptions, const AtomSet& target) const {
  std::string key(1, static_cast<char>(kind));
  for (AtomId a : assumptions) encode_u32(key, a);
  encode_u32(key, 0xfffffffeu);  // separator; never an atom id in practice
  for (AtomId a : target) encode_u32(key, a);

  {
    std::lock_guard<std::mutex> lock(mu_);
    ++stats_.queries;
    auto it = memo_.find(key);
    if (it != memo_.end()) {
      ++stats_.cache_hits;
      lru_.splice(lru_.begin(), lru_, it->second.second);
      return it->second.first;
    }
  }

  bool result;
  if (kind == 0) {
    // Refute: clauses ∪ S ∪ {¬t | t ∈ target} unsatisfiable?
    if (intersects(assumptions, target)) {
      result = true;
    } else {
      result = !sat_with_units(assumptions, target);
    }
  } else {
    // ⊨ ¬t: clauses ∪ S ∪ {t} unsatisfiable?
    result = !sat_with_units(set_union(assumptions, target), AtomSet{});
  }

  std::lock_guard<std::mutex> lock(mu_);
  auto it = memo_.find(key);
  if (it == memo_.end()) {
    lru_.push_front(key);
    memo_.emplace(std::move(key), std::make_pair(result, lru_.begin()));
    if (memo_.size() > cache_capacity_) {
      memo_.erase(lru_.back());
      lru_.pop_back();
    }
  }
  return result;
}

bool Oracle::sat_with_units(const AtomSet& assume_true, const AtomSet& assume_false) const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    ++stats_.sat_calls;
  }
  std::vector<std::int8_t> val(local_to_atom_.size(), kUnassigned);
  for (AtomId a : assume_true) val[local(a)] = 1;
  for (AtomId a : assume_false) {
    std::uint32_t v = local(a);
    if (val[v] == 1) return false;  // contradictory unit set
    val[v] = 0;
  }
  return dpll(val);
}

bool Oracle::dpll(std::vector<std::int8_t>& val) const {
  // Unit propagation to fixpoint.
  bool changed = true;
  while (changed) {
    changed = false;
    for (const std::vector<Lit>& c : clauses_) {
      bool satisfied = false;
      int unassigned = 0;
      Lit last{0, false};
      for (const Lit& l : c) {
        std::int8_t v = val[l.var];
        if (v == kUnassigned) {
          ++unassigned;
          last = l;
        } else if ((v == 1) == l.pos) {
          satisfied = true;
          break;
        }
      }
      if (satisfied) continue;
      if (unassigned == 0) return false;
      if (unassigned == 1) {
        val[last.var] = last.pos ? 1 : 0;
        changed = true;
      }
    }
  }
  // Conflict-free fixpoint of a Horn theory: assigning every remaining atom
  // false satisfies each pending clause (it keeps >= 2 unassigned literals,
  // at most one of which is positive).
  if (horn_) return true;
  // Branch on the first unassigned atom of the first pending clause.
  for (const std::vector<Lit>& c : clauses_) {
    bool satisfied = false;
    const Lit* branch = nullptr;
    for (const Lit& l : c) {
      std::int8_t v = val[l.var];
      if (v == kUnassigned) {
        if (!branch) branch = &l;
      } else if ((v == 1) == l.pos) {
        satisfied = true;
        break;
      }
    }
    if (satisfied || !branch) continue;
    std::vector<std::int8_t> copy = val;
    copy[branch->var] = 0;
    if (dpll(copy)) return true;
    val[branch->var] = 1;
    return dpll(val);
  }
  return true;  // every clause satisfied
}

}  // namespace hmknf
