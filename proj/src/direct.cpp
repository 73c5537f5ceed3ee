#include "direct.hpp"

#include <algorithm>
#include <cstdint>

namespace hmknf {

namespace {

struct RuleMasks {
  std::uint32_t head = 0;
  std::uint32_t body_pos = 0;
  std::uint32_t body_neg = 0;
};

std::uint32_t atom_mask(const AtomSet& s) {
  std::uint32_t m = 0;
  for (AtomId a : s) m |= 1u << a;
  return m;
}

class Enumerator {
 public:
  explicit Enumerator(const KnowledgeBase& kb) : kb_(kb), n_(kb.atom_count()) {
    const std::uint32_t interp_count = 1u << n_;
    for (const Rule& r : kb.rules())
      rules_.push_back({atom_mask(r.head), atom_mask(r.body_pos), atom_mask(r.body_neg)});

    // Which interpretations (atom masks) satisfy every ontology clause.
    interp_sat_.resize(interp_count);
    for (std::uint32_t i = 0; i < interp_count; ++i) {
      bool ok = true;
      for (const Clause& c : kb.clauses()) {
        bool sat = (atom_mask(c.pos) & i) != 0 || (atom_mask(c.neg) & ~i) != 0;
        if (!sat) {
          ok = false;
          break;
        }
      }
      interp_sat_[i] = ok;
    }

    // DP over sets of interpretations (bit i of a set mask = interpretation i
    // is a member): conjunction of members' atoms, and all-members-satisfy-O.
    const std::uint64_t set_count = 1ull << interp_count;
    intersect_.resize(set_count);
    all_sat_.resize(set_count);
    intersect_[0] = n_ == 0 ? 0u : ((1u << n_) - 1);
    all_sat_[0] = true;
    for (std::uint64_t m = 1; m < set_count; ++m) {
      const std::uint32_t low = static_cast<std::uint32_t>(__builtin_ctzll(m));
      const std::uint64_t rest = m & (m - 1);
      intersect_[m] = intersect_[rest] & low_mask(low);
      all_sat_[m] = all_sat_[rest] && interp_sat_[low];
    }
  }

  // Modal satisfaction: positive/modal atoms against `m`, negation against
  // `n` (the candidate model fixing what "not" sees).
  bool sat(std::uint64_t m, std::uint64_t n) const {
    if (!all_sat_[m]) return false;
    const std::uint32_t km = intersect_[m];
    const std::uint32_t kn = intersect_[n];
    for (const RuleMasks& r : rules_) {
      if ((r.body_pos & ~km) != 0) continue;  // some K body atom not derived
      if ((r.body_neg & kn) != 0) continue;   // some negated atom always true
      if ((r.head & km) == 0) return false;   // body holds, head disjunction fails
    }
    return true;
  }

  std::vector<AtomSet> models() {
    const std::uint32_t interp_count = 1u << n_;
    const std::uint64_t set_count = 1ull << interp_count;
    std::vector<AtomSet> out;
    for (std::uint64_t m = 1; m < set_count; ++m) {
      if (!sat(m, m)) continue;
      if (!maximal(m)) continue;
      out.push_back(atoms_of(intersect_[m]));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

 private:
  bool maximal(std::uint64_t m) const {
    const std::uint32_t interp_count = 1u << n_;
    const std::uint64_t full = interp_count == 64 ? ~0ull : (1ull << interp_count) - 1;
    const std::uint64_t complement = full & ~m;
    // Enumerate non-empty subsets s of the complement; m|s are the proper supersets.
    for (std::uint64_t s = complement; s != 0; s = (s - 1) & complement)
      if (sat(m | s, m)) return false;
    return true;
  }

  AtomSet atoms_of(std::uint32_t mask) const {
    AtomSet out;
    for (AtomId a = 0; a < n_; ++a)
      if (mask & (1u << a)) out.push_back(a);
    return out;
  }

  // Interpretation index is itself the atom mask.
  static std::uint32_t low_mask(std::uint32_t interp_index) { return interp_index; }

  const KnowledgeBase& kb_;
  std::uint32_t n_;
  std::vector<RuleMasks> rules_;
  std::vector<bool> interp_sat_;
  std::vector<std::uint32_t> intersect_;
  std::vector<bool> all_sat_;
};

void check_gate(const KnowledgeBase& kb, std::size_t max_vocab) {
  const std::size_t gate = std::min(max_vocab, kDirectHardCap);
  if (kb.atom_count() > gate)
    throw GateError("direct model enumeration over " + std::to_string(kb.atom_count()) +
                    " atoms exceeds gate of " + std::to_string(gate));
}

}  // namespace

std::vector<AtomSet> enumerate_models_direct(const KnowledgeBase& kb, std::size_t max_vocab) {
  check_gate(kb, max_vocab);
  return Enumerator(kb).models();
}

bool is_model_induced_direct(const KnowledgeBase& kb, const AtomSet& interp,
                             std::size_t max_vocab) {
  std::vector<AtomSet> ms = enumerate_models_direct(kb, max_vocab);
  return std::binary_search(ms.begin(), ms.end(), interp);
}

}  // namespace hmknf
