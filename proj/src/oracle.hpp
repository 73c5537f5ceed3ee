#pragma once

// Propositional entailment oracle over the KB's ontology clauses.
//
// Queries take an assumption set S of ontology atoms (asserted true) and ask
// whether clauses(O) ∪ S entails a target: a single atom, the disjunction of
// several, or — with an empty target — falsum (i.e. inconsistency of the
// assumptions). Refutation runs a small DPLL; after unit propagation a
// conflict-free Horn state is satisfiable outright (all remaining atoms
// false), so Horn ontologies never branch. Results are memoized in a
// mutex-guarded LRU keyed by (assumptions, target).

#include <cstdint>
#include <list>
#include <mutex>
#include <string>
#include <unordered_map>

#include "kb.hpp"

namespace hmknf {

struct OracleStats {
  std::uint64_t queries = 0;     // entailment/consistency questions asked
  std::uint64_t cache_hits = 0;  // answered from the memo table
  std::uint64_t sat_calls = 0;   // DPLL searches actually run
};

// Everything a single assumption set settles: which ontology atoms are
// entailed and which are refuted. `inconsistent` means falsum is entailed
// (and then pos/neg are left empty; every query against S is vacuously true).
struct EntailmentClosure {
  bool inconsistent = false;
  AtomSet pos;
  AtomSet neg;
};

class Oracle {
 public:
  explicit Oracle(const KnowledgeBase& kb, std::size_t cache_capacity = 1u << 16);

  // clauses(O) ∪ assumptions ⊨ ⋁ target? Empty target asks for falsum.
  // Assumptions and target atoms must be ontology atoms.
  bool entails(const AtomSet& assumptions, const AtomSet& target) const;
  bool entails_atom(const AtomSet& assumptions, AtomId target) const;
  // clauses(O) ∪ assumptions ⊨ ¬target?
  bool refutes_atom(const AtomSet& assumptions, AtomId target) const;
  bool consistent(const AtomSet& assumptions) const;

  EntailmentClosure closure(const AtomSet& assumptions) const;

  bool is_horn() const { return horn_; }
  OracleStats stats() const;

 private:
  struct Lit {
    std::uint32_t var;
    bool pos;
  };

  bool query(std::uint8_t kind, const AtomSet& assumptions, const AtomSet& target) const;
  bool sat_with_units(const AtomSet& assume_true, const AtomSet& assume_false) const;
  bool dpll(std::vector<std::int8_t>& val) const;
  std::uint32_t local(AtomId a) const;

  const KnowledgeBase& kb_;
  std::vector<std::vector<Lit>> clauses_;        // over dense local vars
  std::vector<AtomId> local_to_atom_;
  std::unordered_map<AtomId, std::uint32_t> atom_to_local_;
  bool horn_ = true;

  // LRU memo: key encodes kind + assumptions + target.
  mutable std::mutex mu_;
  mutable std::list<std::string> lru_;
  mutable std::unordered_map<std::string, std::pair<bool, std::list<std::string>::iterator>> memo_;
  std::size_t cache_capacity_;
  mutable OracleStats stats_;
};

}  // namespace hmknf
