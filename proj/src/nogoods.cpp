#include "nogoods.hpp"

#include <algorithm>
#include <sstream>

#include "characterize.hpp"

namespace hmknf {

void canonicalize(LitVec& lits) {
  std::sort(lits.begin(), lits.end());
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
}

std::optional<Nogood> try_make_nogood(LitVec lits) {
  canonicalize(lits);
  for (std::size_t i = 1; i < lits.size(); ++i)
    if (lits[i].var == lits[i - 1].var) return std::nullopt;  // vacuous
  return Nogood{std::move(lits)};
}

namespace {

Nogood must_make_nogood(LitVec lits, const char* what) {
  std::optional<Nogood> ng = try_make_nogood(std::move(lits));
  if (!ng) throw ContractError(std::string("vacuous nogood in ") + what);
  return std::move(*ng);
}

}  // namespace

// --- VarTable ----------------------------------------------------------------

VarTable::VarTable(const KnowledgeBase& kb) : kb_(kb) {
  natoms_ = static_cast<std::uint32_t>(kb.atom_count());
  kinds_.assign(natoms_ + 1, VarKind::Atom);
  names_.resize(natoms_ + 1);
  names_[0] = "_bot";
  for (AtomId a = 0; a < natoms_; ++a) names_[a + 1] = kb.atom_name(a);
  conj_base_ = natoms_ + 1;

  // Body conjunctions first, so exclusive-firing sets can reference them.
  body_var_.resize(kb.rules().size());
  for (const Rule& r : kb.rules()) {
    LitVec lits;
    for (AtomId p : r.body_pos) lits.push_back(pos_lit(atom(p)));
    for (AtomId n : r.body_neg) lits.push_back(neg_lit(atom(n)));
    std::string label = lits.empty() ? "b()" : "b(r" + std::to_string(r.id + 1) + ")";
    body_var_[r.id] = intern_conjunction(std::move(lits), std::move(label));
  }
  body_excl_var_.resize(kb.rules().size());
  for (const Rule& r : kb.rules()) {
    for (AtomId p : r.head) {
      LitVec lits{pos_lit(body_var_[r.id])};
      for (AtomId q : r.head)
        if (q != p) lits.push_back(neg_lit(atom(q)));
      std::string label = "bp(r" + std::to_string(r.id + 1) + "," + kb.atom_name(p) + ")";
      body_excl_var_[r.id].emplace_back(p, intern_conjunction(std::move(lits), std::move(label)));
    }
  }

  for (AtomId a : kb.ontology_atoms()) {
    ont_var_.push_back(static_cast<std::uint32_t>(kinds_.size()));
    kinds_.push_back(VarKind::Ontology);
    names_.push_back("bo(" + kb.atom_name(a) + ")");
  }
  ont_falsum_ = static_cast<std::uint32_t>(kinds_.size());
  kinds_.push_back(VarKind::Ontology);
  names_.push_back("bo(_bot)");
}

std::uint32_t VarTable::intern_conjunction(LitVec lits, std::string label) {
  canonicalize(lits);
  auto it = std::lower_bound(interned_.begin(), interned_.end(), lits,
                             [](const auto& entry, const LitVec& key) { return entry.first < key; });
  if (it != interned_.end() && it->first == lits) return it->second;
  std::uint32_t v = static_cast<std::uint32_t>(kinds_.size());
  kinds_.push_back(VarKind::Conjunction);
  names_.push_back(std::move(label));
  conj_sets_.push_back(lits);
  interned_.insert(it, {std::move(lits), v});
  return v;
}

std::uint32_t VarTable::body_exclusive(std::uint32_t rule_id, AtomId head_atom) const {
  for (const auto& [a, v] : body_excl_var_[rule_id])
    if (a == head_atom) return v;
  throw ContractError("no exclusive-firing variable for this rule/head pair");
}

std::uint32_t VarTable::ontology(AtomId a) const {
  const AtomSet& kao = kb_.ontology_atoms();
  auto it = std::lower_bound(kao.begin(), kao.end(), a);
  require(it != kao.end() && *it == a, "ontology variable requested for non-ontology atom");
  return ont_var_[static_cast<std::size_t>(it - kao.begin())];
}

VarKind VarTable::kind(std::uint32_t v) const { return kinds_[v]; }

AtomId VarTable::atom_of(std::uint32_t v) const {
  require(is_atom_var(v), "not an atom variable");
  return v == 0 ? kBotAtom : v - 1;
}

const LitVec& VarTable::conjunction(std::uint32_t v) const {
  require(kind(v) == VarKind::Conjunction, "not a conjunction variable");
  return conj_sets_[v - conj_base_];
}

std::vector<std::uint32_t> VarTable::conjunction_vars() const {
  std::vector<std::uint32_t> out;
  for (std::uint32_t v = conj_base_; v < conj_base_ + conj_sets_.size(); ++v) out.push_back(v);
  return out;
}

std::string VarTable::name(std::uint32_t v) const { return names_[v]; }

std::string VarTable::literal_to_string(Literal l) const {
  return (l.positive ? "T " : "F ") + names_[l.var];
}

std::string VarTable::literals_to_string(const LitVec& lits) const {
  std::string out = "{";
  for (std::size_t i = 0; i < lits.size(); ++i) {
    if (i) out += ", ";
    out += literal_to_string(lits[i]);
  }
  out += "}";
  return out;
}

// --- Assignment --------------------------------------------------------------

Assignment::Assignment(std::size_t var_count)
    : val_(var_count, -1), level_(var_count, 0), reason_(var_count, -1) {
  trail_.reserve(var_count);
}

void Assignment::assign(Literal l, std::uint32_t level, std::int32_t reason) {
  require(val_[l.var] < 0, "variable already assigned");
  val_[l.var] = l.positive ? 1 : 0;
  level_[l.var] = level;
  reason_[l.var] = reason;
  trail_.push_back(l);
}

void Assignment::pop_to_level(std::uint32_t lvl) {
  while (!trail_.empty() && level_[trail_.back().var] > lvl) {
    val_[trail_.back().var] = -1;
    reason_[trail_.back().var] = -1;
    trail_.pop_back();
  }
}

AtomSet Assignment::true_atoms(const VarTable& vt, const KnowledgeBase& kb) const {
  AtomSet out;
  for (AtomId a = 0; a < kb.atom_count(); ++a)
    if (value(vt.atom(a)) == 1) out.push_back(a);
  return out;
}

AtomSet Assignment::false_atoms(const VarTable& vt, const KnowledgeBase& kb) const {
  AtomSet out;
  for (AtomId a = 0; a < kb.atom_count(); ++a)
    if (value(vt.atom(a)) == 0) out.push_back(a);
  return out;
}

// --- static families ----------------------------------------------------------

Nogood rule_nogood(const VarTable& vt, const Rule& r) {
  LitVec lits{pos_lit(vt.body(r.id))};
  for (AtomId h : r.head) lits.push_back(neg_lit(vt.atom(h)));
  return must_make_nogood(std::move(lits), "rule nogood");
}

std::vector<Nogood> saturation_nogoods(const VarTable& vt, const KnowledgeBase& kb) {
  std::vector<Nogood> out;
  for (AtomId a : kb.ontology_atoms())
    out.push_back(must_make_nogood({neg_lit(vt.atom(a)), pos_lit(vt.ontology(a))},
                                   "saturation nogood"));
  out.push_back(must_make_nogood({neg_lit(vt.falsum()), pos_lit(vt.ontology_falsum())},
                                 "saturation nogood"));
  return out;
}

std::vector<Nogood> support_nogoods(const VarTable& vt, const KnowledgeBase& kb) {
  std::vector<Nogood> out;
  for (AtomId a : kb.vocab()) {
    LitVec lits{pos_lit(vt.atom(a))};
    for (const Rule& r : kb.rules())
      if (contains(r.head, a)) lits.push_back(neg_lit(vt.body_exclusive(r.id, a)));
    if (contains(kb.ontology_atoms(), a)) lits.push_back(neg_lit(vt.ontology(a)));
    out.push_back(must_make_nogood(std::move(lits), "support nogood"));
  }
  return out;
}

std::vector<Nogood> conjunction_nogoods(const VarTable& vt) {
  std::vector<Nogood> out;
  for (std::uint32_t v : vt.conjunction_vars()) {
    const LitVec& set = vt.conjunction(v);
    LitVec whole{neg_lit(v)};
    whole.insert(whole.end(), set.begin(), set.end());
    // A set holding complementary literals can never be satisfied, so the
    // "conjuncts hold, variable must" direction is vacuous; the binary
    // nogoods below still pin the variable false.
    if (std::optional<Nogood> ng = try_make_nogood(std::move(whole)))
      out.push_back(std::move(*ng));
    for (const Literal& l : set)
      out.push_back(must_make_nogood({pos_lit(v), l.complement()}, "conjunction nogood"));
  }
  return out;
}

std::vector<Nogood> static_nogoods(const VarTable& vt, const KnowledgeBase& kb) {
  std::vector<Nogood> out;
  for (const Rule& r : kb.rules()) out.push_back(rule_nogood(vt, r));
  for (Nogood& n : saturation_nogoods(vt, kb)) out.push_back(std::move(n));
  for (Nogood& n : support_nogoods(vt, kb)) out.push_back(std::move(n));
  for (Nogood& n : conjunction_nogoods(vt)) out.push_back(std::move(n));
  return out;
}

Nogood falsum_nogood(const VarTable& vt) {
  return must_make_nogood({pos_lit(vt.falsum())}, "falsum nogood");
}

// --- entailment nogoods --------------------------------------------------------

Nogood pos_entailment_nogood(const VarTable& vt, const KnowledgeBase& kb, const Oracle& oracle,
                             AtomId p, const AtomSet& s) {
  require(is_subset(s, kb.ontology_atoms()), "entailment support set outside ontology atoms");
  bool sound = p == kBotAtom ? !oracle.consistent(s)
                             : oracle.entails_atom(without_atom(s, p), p);
  require(sound, "positive entailment nogood side condition failed");
  LitVec lits{neg_lit(p == kBotAtom ? vt.ontology_falsum() : vt.ontology(p))};
  for (AtomId a : s) lits.push_back(pos_lit(vt.atom(a)));
  return must_make_nogood(std::move(lits), "positive entailment nogood");
}

namespace {

bool neg_condition_holds(const KnowledgeBase& kb, const Oracle& oracle, AtomId p,
                         const AtomSet& s) {
  if (p == kBotAtom) return oracle.consistent(set_minus(kb.ontology_atoms(), s));
  AtomSet assumptions = set_minus(kb.ontology_atoms(), with_atom(s, p));
  return !oracle.entails_atom(assumptions, p);
}

Nogood build_neg(const VarTable& vt, AtomId p, const AtomSet& s) {
  LitVec lits{pos_lit(p == kBotAtom ? vt.ontology_falsum() : vt.ontology(p))};
  for (AtomId a : s) lits.push_back(neg_lit(vt.atom(a)));
  return must_make_nogood(std::move(lits), "negative entailment nogood");
}

}  // namespace

Nogood neg_entailment_nogood(const VarTable& vt, const KnowledgeBase& kb, const Oracle& oracle,
                             AtomId p, const AtomSet& s) {
  require(is_subset(s, kb.ontology_atoms()), "entailment support set outside ontology atoms");
  require(neg_condition_holds(kb, oracle, p, s),
          "negative entailment nogood side condition failed");
  return build_neg(vt, p, s);
}

Nogood neg_entailment_nogood_widened(const VarTable& vt, const KnowledgeBase& kb,
                                     const Oracle& oracle, AtomId p, const AtomSet& s,
                                     const AtomSet& fallback, bool* widened) {
  require(is_subset(s, fallback), "widening fallback must contain the tight support set");
  if (neg_condition_holds(kb, oracle, p, s)) {
    if (widened) *widened = false;
    return build_neg(vt, p, s);
  }
  if (widened) *widened = true;
  return neg_entailment_nogood(vt, kb, oracle, p, fallback);
}

std::vector<Nogood> entailment_nogoods_full(const VarTable& vt, const KnowledgeBase& kb,
                                            const Oracle& oracle, std::size_t max_atoms) {
  const AtomSet& kao = kb.ontology_atoms();
  if (kao.size() > max_atoms)
    throw GateError("entailment nogood materialization over " + std::to_string(kao.size()) +
                    " ontology atoms exceeds gate of " + std::to_string(max_atoms));
  std::vector<Nogood> out;
  AtomSet targets = kao;
  targets.push_back(kBotAtom);  // kBotAtom sorts above real ids
  const std::size_t n = kao.size();
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    AtomSet s;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) s.push_back(kao[i]);
    for (AtomId p : targets) {
      bool pos_sound = p == kBotAtom ? !oracle.consistent(s)
                                     : oracle.entails_atom(without_atom(s, p), p);
      if (pos_sound) out.push_back(pos_entailment_nogood(vt, kb, oracle, p, s));
      if (neg_condition_holds(kb, oracle, p, s))
        out.push_back(neg_entailment_nogood(vt, kb, oracle, p, s));
    }
  }
  return out;
}

// --- loop nogoods ---------------------------------------------------------------

std::vector<Nogood> loop_nogoods(const VarTable& vt, const KnowledgeBase& kb,
                                 const Oracle& oracle, const AtomSet& loop, const AtomSet& s) {
  require(!loop.empty(), "empty loop");
  require(!intersects(loop, s), "loop and support set must be disjoint");
  require(is_subset(s, kb.ontology_atoms()), "loop support set outside ontology atoms");
  AtomSet assumptions = set_minus(kb.ontology_atoms(), set_union(s, loop));
  require(!oracle.entails(assumptions, set_intersect(loop, kb.ontology_atoms())),
          "loop nogood side condition failed");

  // External rules and their ways of being dead.
  std::vector<LitVec> choice_sets;
  for (const Rule& r : kb.rules()) {
    if (!intersects(r.head, loop) || intersects(r.body_pos, loop)) continue;
    LitVec choices{neg_lit(vt.body(r.id))};
    for (AtomId q : set_minus(r.head, loop)) choices.push_back(pos_lit(vt.atom(q)));
    choice_sets.push_back(std::move(choices));
  }

  std::vector<Nogood> out;
  LitVec base;
  for (AtomId a : s) base.push_back(neg_lit(vt.atom(a)));
  std::vector<std::size_t> pick(choice_sets.size(), 0);
  for (AtomId p : loop) {
    std::fill(pick.begin(), pick.end(), 0);
    for (;;) {
      LitVec lits = base;
      lits.push_back(pos_lit(vt.atom(p)));
      for (std::size_t i = 0; i < choice_sets.size(); ++i) lits.push_back(choice_sets[i][pick[i]]);
      if (std::optional<Nogood> ng = try_make_nogood(std::move(lits))) out.push_back(std::move(*ng));
      // Advance the mixed-radix counter over choices.
      std::size_t i = 0;
      while (i < pick.size() && ++pick[i] == choice_sets[i].size()) pick[i++] = 0;
      if (i == pick.size()) break;
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Nogood> loop_nogoods_full(const VarTable& vt, const KnowledgeBase& kb,
                                      const Oracle& oracle, const DependencyGraph& graph,
                                      std::size_t max_loops, std::size_t max_atoms,
                                      std::size_t max_nogoods) {
  const AtomSet& kao = kb.ontology_atoms();
  if (kao.size() > max_atoms)
    throw GateError("loop nogood materialization over " + std::to_string(kao.size()) +
                    " ontology atoms exceeds gate of " + std::to_string(max_atoms));
  std::vector<Nogood> out;
  const std::size_t n = kao.size();
  for (const AtomSet& loop : loops(graph, max_loops)) {
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      AtomSet s;
      for (std::size_t i = 0; i < n; ++i)
        if (mask & (1u << i)) s.push_back(kao[i]);
      if (intersects(s, loop)) continue;
      AtomSet assumptions = set_minus(kao, set_union(s, loop));
      if (oracle.entails(assumptions, set_intersect(loop, kao))) continue;
      for (Nogood& ng : loop_nogoods(vt, kb, oracle, loop, s)) {
        out.push_back(std::move(ng));
        if (out.size() > max_nogoods)
          throw GateError("loop nogood materialization exceeds " +
                          std::to_string(max_nogoods) + " nogoods");
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// --- induced assignments ---------------------------------------------------------

Assignment induced_assignment(const VarTable& vt, const KnowledgeBase& kb, const Oracle& oracle,
                              const AtomSet& interp) {
  Assignment a(vt.size());
  a.assign(neg_lit(vt.falsum()), 0, -1);
  for (AtomId at : kb.vocab())
    a.assign({vt.atom(at), contains(interp, at)}, 0, -1);
  // Conjunction variables reference only atom variables and earlier
  // conjunction variables, so one ascending pass settles them.
  for (std::uint32_t v : vt.conjunction_vars()) {
    bool value = true;
    for (const Literal& l : vt.conjunction(v))
      if (!a.has(l)) {
        value = false;
        break;
      }
    a.assign({v, value}, 0, -1);
  }
  for (AtomId at : kb.ontology_atoms())
    a.assign({vt.ontology(at), ob_entails_atom(kb, oracle, without_atom(interp, at), at)}, 0, -1);
  a.assign({vt.ontology_falsum(), !ob_consistent(kb, oracle, interp)}, 0, -1);
  return a;
}

bool is_solution(const std::vector<Nogood>& nogoods, const Assignment& a) {
  for (const Nogood& ng : nogoods) {
    bool inside = true;
    for (const Literal& l : ng.lits)
      if (!a.has(l)) {
        inside = false;
        break;
      }
    if (inside) return false;
  }
  return true;
}

std::vector<AtomSet> enumerate_solutions_full(const KnowledgeBase& kb, const Oracle& oracle,
                                              const DependencyGraph& graph, bool completion_only,
                                              std::size_t max_loops, std::size_t max_kao,
                                              std::size_t max_vocab) {
  const std::size_t n = kb.atom_count();
  if (n > max_vocab)
    throw GateError("solution enumeration over " + std::to_string(n) +
                    " atoms exceeds gate of " + std::to_string(max_vocab));
  VarTable vt(kb);
  std::vector<Nogood> delta = static_nogoods(vt, kb);
  delta.push_back(falsum_nogood(vt));
  for (Nogood& ng : entailment_nogoods_full(vt, kb, oracle, max_kao))
    delta.push_back(std::move(ng));
  if (!completion_only)
    for (Nogood& ng : loop_nogoods_full(vt, kb, oracle, graph, max_loops, max_kao))
      delta.push_back(std::move(ng));

  std::vector<AtomSet> out;
  const std::uint32_t full = n == 0 ? 0 : (1u << n) - 1;
  for (std::uint32_t mask = 0;; ++mask) {
    AtomSet interp;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) interp.push_back(static_cast<AtomId>(i));
    Assignment a = induced_assignment(vt, kb, oracle, interp);
    if (is_solution(delta, a)) out.push_back(std::move(interp));
    if (mask == full) break;
  }
  return out;
}

}  // namespace hmknf
