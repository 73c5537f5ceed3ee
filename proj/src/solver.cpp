#include "solver.hpp"

#include <algorithm>
#include <chrono>
#include <random>
#include <sstream>

namespace hmknf {

namespace {

std::uint64_t luby(std::uint64_t i) {
  for (std::uint64_t k = 1;; ++k) {
    if (i == (1ull << k) - 1) return 1ull << (k - 1);
    if (i < (1ull << k) - 1) return luby(i - (1ull << (k - 1)) + 1);
  }
}

}  // namespace

std::string outcome_to_string(Outcome o) {
  switch (o) {
    case Outcome::Model: return "model";
    case Outcome::NoModel: return "no-model";
    case Outcome::Unknown: return "unknown";
  }
  return "unknown";
}

// --- EntailmentRound ---------------------------------------------------------

EntailmentRound::EntailmentRound(const KnowledgeBase& kb, const Oracle& oracle,
                                 const VarTable& vt, const DependencyGraph& graph)
    : kb_(kb), oracle_(oracle), vt_(vt), graph_(graph) {}

std::vector<EntailmentEmission> EntailmentRound::run(const Assignment& a) const {
  std::vector<EntailmentEmission> out;
  const AtomSet& kao = kb_.ontology_atoms();

  AtomSet true_kao, false_kao;
  for (AtomId p : kao) {
    if (a.value(vt_.atom(p)) == 1) true_kao.push_back(p);
    if (a.value(vt_.atom(p)) == 0) false_kao.push_back(p);
  }

  EntailmentClosure cl = oracle_.closure(true_kao);
  if (cl.inconsistent) {
    // The true atoms alone are contradictory; forbid exactly this situation.
    out.push_back({true, kBotAtom, true_kao,
                   pos_entailment_nogood(vt_, kb_, oracle_, kBotAtom, true_kao)});
    return out;
  }

  auto true_ext = [&](AtomId p) {
    AtomSet s;
    for (AtomId q : graph_.ext(AtomSet{p}))
      if (a.value(vt_.atom(q)) == 1) s.push_back(q);
    return s;
  };

  // Entailed atoms not yet true: their support is present.
  for (AtomId p : cl.pos) {
    if (a.value(vt_.atom(p)) == 1) continue;
    AtomSet s = true_ext(p);
    out.push_back({true, p, s, pos_entailment_nogood(vt_, kb_, oracle_, p, s)});
  }
  // Refuted atoms not yet false: making one true would be contradictory.
  for (AtomId p : cl.neg) {
    if (a.value(vt_.atom(p)) == 0) continue;
    AtomSet s = with_atom(true_kao, p);
    out.push_back({true, kBotAtom, s, pos_entailment_nogood(vt_, kb_, oracle_, kBotAtom, s)});
  }
  // True atoms whose support variable is still open but which the remaining
  // true atoms entail: pin the support present. Keeps the support variables
  // total for atoms that are both rule-derived and ontology-derived.
  for (AtomId p : true_kao) {
    if (a.assigned(vt_.ontology(p))) continue;
    if (!oracle_.entails_atom(without_atom(true_kao, p), p)) continue;
    AtomSet s = set_minus(true_ext(p), AtomSet{p});
    out.push_back({true, p, s, pos_entailment_nogood(vt_, kb_, oracle_, p, s)});
  }
  // Support variables not yet false whose atom even the maximal candidate
  // set (everything not false, minus the atom) fails to entail: pin the
  // support absent.
  for (AtomId p : kao) {
    if (a.value(vt_.ontology(p)) == 0) continue;
    AtomSet assumptions = set_minus(kao, with_atom(false_kao, p));
    if (!oracle_.consistent(assumptions)) continue;
    if (oracle_.entails_atom(assumptions, p)) continue;
    AtomSet s;
    for (AtomId q : graph_.ext(AtomSet{p}))
      if (a.value(vt_.atom(q)) == 0) s.push_back(q);
    bool widened = false;
    Nogood ng = neg_entailment_nogood_widened(vt_, kb_, oracle_, p, s, false_kao, &widened);
    out.push_back({false, p, widened ? false_kao : s, std::move(ng)});
  }
  return out;
}

// --- Solver ------------------------------------------------------------------

Solver::Solver(const KnowledgeBase& kb, RunConfig cfg)
    : kb_(kb),
      cfg_(cfg),
      oracle_(kb),
      graph_(build_graph(kb, oracle_, cfg.graph_mode, cfg.max_exact_graph)),
      vt_(kb),
      a_(vt_.size()) {
  tight_ = is_tight(graph_);
  sccs_ = sccs(graph_);
  ent_ = std::make_unique<EntailmentRound>(kb_, oracle_, vt_, graph_);
  watches_.resize(vt_.size() * 2);
  var_activity_.assign(vt_.size(), 0.0);

  for (AtomId a : kb_.atoms_by_name()) atom_select_order_.push_back(vt_.atom(a));
  for (std::uint32_t v : vt_.conjunction_vars()) atom_select_order_.push_back(v);

  if (cfg_.heuristic == Heuristic::Activity && cfg_.seed != 0) {
    std::mt19937_64 rng(cfg_.seed);
    std::uniform_real_distribution<double> jitter(0.0, 1e-6);
    for (double& v : var_activity_) v = jitter(rng);
  }

  for (Nogood& ng : static_nogoods(vt_, kb_)) add_nogood(std::move(ng.lits), Origin::Static);
  add_nogood(falsum_nogood(vt_).lits, Origin::Static);
}

void Solver::trace_line(const std::string& s) {
  if (cfg_.trace) *cfg_.trace << s << "\n";
}

std::int32_t Solver::add_nogood(LitVec lits, Origin origin, bool* added_new) {
  if (added_new) *added_new = false;
  std::optional<Nogood> ng = try_make_nogood(std::move(lits));
  if (!ng) return -1;
  auto it = std::lower_bound(
      dedup_.begin(), dedup_.end(), ng->lits,
      [](const auto& entry, const LitVec& key) { return entry.first < key; });
  if (it != dedup_.end() && it->first == ng->lits) return static_cast<std::int32_t>(it->second);

  std::uint32_t id = static_cast<std::uint32_t>(store_.size());
  StoredNogood sn;
  sn.lits = ng->lits;
  sn.origin = origin;
  sn.activity = nogood_activity_inc_;
  store_.push_back(std::move(sn));
  dedup_.insert(it, {std::move(ng->lits), id});
  attach_watches(id);
  scan_needed_ = true;
  if (added_new) *added_new = true;
  return static_cast<std::int32_t>(id);
}

void Solver::attach_watches(std::uint32_t id) {
  StoredNogood& sn = store_[id];
  if (sn.lits.size() < 2) return;  // units live through scans
  // Prefer literals not currently in the assignment.
  std::uint32_t first = 0, second = 1;
  std::uint32_t found = 0;
  for (std::uint32_t i = 0; i < sn.lits.size() && found < 2; ++i) {
    if (!a_.has(sn.lits[i])) {
      (found == 0 ? first : second) = i;
      ++found;
    }
  }
  if (found == 0) {
    first = 0;
    second = 1;
  } else if (found == 1) {
    second = first == 0 ? 1 : 0;
  }
  sn.w0 = first;
  sn.w1 = second;
  watches_[sn.lits[first].var * 2 + (sn.lits[first].positive ? 1 : 0)].push_back(id);
  watches_[sn.lits[second].var * 2 + (sn.lits[second].positive ? 1 : 0)].push_back(id);
}

void Solver::assert_literal(Literal l, std::int32_t reason) {
  a_.assign(l, dl_, reason);
  if (trace_on() && reason >= 0)
    trace_line("PROP " + vt_.literal_to_string(l) + " reason=" + std::to_string(reason));
}

std::int32_t Solver::scan_once(bool& progressed) {
  progressed = false;
  for (std::uint32_t id = 0; id < store_.size(); ++id) {
    const StoredNogood& sn = store_[id];
    if (sn.deleted) continue;
    std::size_t free_count = 0;
    Literal free_lit{0, true};
    bool blocked = false;
    for (const Literal& l : sn.lits) {
      if (a_.has(l)) continue;
      if (a_.has_complement(l)) {
        blocked = true;
        break;
      }
      if (++free_count > 1) break;
      free_lit = l;
    }
    if (blocked || free_count > 1) continue;
    if (free_count == 0) return static_cast<std::int32_t>(id);  // contained: conflict
    assert_literal(free_lit.complement(), static_cast<std::int32_t>(id));
    progressed = true;
  }
  return -1;
}

std::int32_t Solver::process_watch_list(Literal assigned) {
  std::vector<std::uint32_t>& wl =
      watches_[assigned.var * 2 + (assigned.positive ? 1 : 0)];
  std::size_t keep = 0;
  for (std::size_t i = 0; i < wl.size(); ++i) {
    std::uint32_t id = wl[i];
    StoredNogood& sn = store_[id];
    if (sn.deleted) continue;  // dropped from the list
    if (sn.lits[sn.w0] == assigned) std::swap(sn.w0, sn.w1);
    if (!(sn.lits[sn.w1] == assigned)) {
      // Stale entry (watch moved elsewhere); drop it.
      continue;
    }
    Literal other = sn.lits[sn.w0];
    // Try to move the triggered watch to a literal outside the assignment.
    std::uint32_t relocated = 0;
    for (std::uint32_t j = 0; j < sn.lits.size(); ++j) {
      if (j == sn.w0 || j == sn.w1) continue;
      if (!a_.has(sn.lits[j])) {
        sn.w1 = j;
        watches_[sn.lits[j].var * 2 + (sn.lits[j].positive ? 1 : 0)].push_back(id);
        relocated = 1;
        break;
      }
    }
    if (relocated) continue;
    // Every literal but the other watch is in the assignment.
    wl[keep++] = id;
    if (a_.has(other)) {
      for (std::size_t j = i + 1; j < wl.size(); ++j) wl[keep++] = wl[j];
      wl.resize(keep);
      return static_cast<std::int32_t>(id);
    }
    if (!a_.has_complement(other)) assert_literal(other.complement(), static_cast<std::int32_t>(id));
  }
  wl.resize(keep);
  return -1;
}

std::int32_t Solver::propagate() {
  for (;;) {
    if (scan_needed_) {
      bool progressed = false;
      std::int32_t c = scan_once(progressed);
      if (c >= 0) return c;
      if (!progressed) {
        scan_needed_ = false;
        queue_pos_ = a_.trail_size();
      }
      continue;
    }
    if (queue_pos_ < a_.trail_size()) {
      std::int32_t c = process_watch_list(a_.trail_at(queue_pos_++));
      if (c >= 0) return c;
      continue;
    }
    return -1;
  }
}

bool Solver::entailment_round() {
  bool any_new = false;
  for (EntailmentEmission& em : ent_->run(a_)) {
    bool added = false;
    add_nogood(std::move(em.nogood.lits), Origin::Entailment, &added);
    if (!added) continue;
    any_new = true;
    ++stats_.entailment_nogoods;
    if (trace_on()) {
      std::string atom = em.atom == kBotAtom ? "_bot" : kb_.atom_name(em.atom);
      trace_line(std::string(em.positive ? "ENT+ " : "ENT- ") + atom + " " +
                 kb_.atom_set_to_string(em.support));
    }
  }
  return any_new;
}

std::pair<AtomSet, AtomSet> Solver::unfounded_set() {
  for (const AtomSet& comp : sccs_) {
    if (comp.size() == 1 && !graph_.has_edge(comp.front(), comp.front())) continue;
    AtomSet u;
    for (AtomId at : comp)
      if (a_.value(vt_.atom(at)) == 1) u.push_back(at);
    if (u.empty()) continue;
    // Remove head atoms of any live external rule until fixpoint.
    bool changed = true;
    while (changed && !u.empty()) {
      changed = false;
      for (const Rule& r : kb_.rules()) {
        if (!intersects(r.head, u) || intersects(r.body_pos, u)) continue;
        bool blocked = a_.value(vt_.body(r.id)) == 0;
        if (!blocked)
          for (AtomId q : set_minus(r.head, u))
            if (a_.value(vt_.atom(q)) == 1) {
              blocked = true;
              break;
            }
        if (!blocked) {
          u = set_minus(u, r.head);
          changed = true;
        }
      }
    }
    if (u.empty()) continue;
    // External false support set, greedily minimized.
    AtomSet s;
    for (AtomId q : graph_.ext(u))
      if (a_.value(vt_.atom(q)) == 0) s.push_back(q);
    const AtomSet& kao = kb_.ontology_atoms();
    AtomSet u_kao = set_intersect(u, kao);
    if (oracle_.entails(set_minus(kao, set_union(s, u)), u_kao)) continue;
    for (AtomId drop : AtomSet(s)) {
      AtomSet smaller = without_atom(s, drop);
      if (!oracle_.entails(set_minus(kao, set_union(smaller, u)), u_kao)) s = smaller;
    }
    return {u, s};
  }
  return {AtomSet{}, AtomSet{}};
}

void Solver::add_unfounded_nogood(const AtomSet& u, const AtomSet& s) {
  LitVec lits{pos_lit(vt_.atom(u.front()))};
  for (const Rule& r : kb_.rules()) {
    if (!intersects(r.head, u) || intersects(r.body_pos, u)) continue;
    if (a_.value(vt_.body(r.id)) == 0) {
      lits.push_back(neg_lit(vt_.body(r.id)));
      continue;
    }
    bool found = false;
    for (AtomId q : set_minus(r.head, u))
      if (a_.value(vt_.atom(q)) == 1) {
        lits.push_back(pos_lit(vt_.atom(q)));
        found = true;
        break;
      }
    require(found, "live external rule while adding unfounded-set nogood");
  }
  for (AtomId at : s) lits.push_back(neg_lit(vt_.atom(at)));
  if (trace_on())
    trace_line("UNFOUNDED " + kb_.atom_set_to_string(u) + " " + kb_.atom_set_to_string(s));
  bool added = false;
  add_nogood(std::move(lits), Origin::Loop, &added);
  if (added) ++stats_.loop_nogoods;
}

std::int32_t Solver::propagate_with_theory() {
  unfounded_cache_.clear();
  unfounded_support_.clear();
  for (;;) {
    std::int32_t c = propagate();
    if (c >= 0) return c;
    if (entailment_round()) continue;
    AtomSet still;
    for (AtomId at : unfounded_cache_)
      if (a_.value(vt_.atom(at)) != 0) still.push_back(at);
    unfounded_cache_ = std::move(still);
    if (unfounded_cache_.empty())
      std::tie(unfounded_cache_, unfounded_support_) = unfounded_set();
    if (unfounded_cache_.empty()) return -1;
    add_unfounded_nogood(unfounded_cache_, unfounded_support_);
  }
}

void Solver::bump_nogood(std::uint32_t id) {
  StoredNogood& sn = store_[id];
  sn.activity += nogood_activity_inc_;
  if (sn.activity > 1e100) {
    for (StoredNogood& other : store_) other.activity *= 1e-100;
    nogood_activity_inc_ *= 1e-100;
  }
}

void Solver::bump_var(std::uint32_t var) {
  var_activity_[var] += var_activity_inc_;
  if (var_activity_[var] > 1e100) {
    for (double& v : var_activity_) v *= 1e-100;
    var_activity_inc_ *= 1e-100;
  }
}

void Solver::decay_activities() {
  var_activity_inc_ /= 0.95;
  nogood_activity_inc_ /= 0.95;
}

bool Solver::analyze_and_learn(std::uint32_t conflict_id) {
  bump_nogood(conflict_id);
  const LitVec& conflict = store_[conflict_id].lits;
  std::uint32_t maxl = 0;
  for (const Literal& l : conflict) maxl = std::max(maxl, a_.level(l.var));
  if (maxl == 0) return false;
  if (maxl < dl_) backjump(maxl);

  // First unique implication point over the current level.
  std::vector<char> seen(vt_.size(), 0);
  LitVec learned;
  int counter = 0;
  auto process = [&](const LitVec& lits, std::uint32_t skip_var) {
    for (const Literal& l : lits) {
      if (l.var == skip_var || seen[l.var]) continue;
      std::uint32_t lv = a_.level(l.var);
      if (lv == 0) continue;  // root-level facts hold in every solution
      seen[l.var] = 1;
      bump_var(l.var);
      if (lv == dl_)
        ++counter;
      else
        learned.push_back(l);
    }
  };
  process(conflict, vt_.size());
  require(counter > 0, "conflict without current-level literals");
  std::size_t ti = a_.trail_size();
  Literal uip{0, true};
  for (;;) {
    require(ti > 0, "conflict analysis walked off the trail");
    --ti;
    Literal sigma = a_.trail_at(ti);
    if (!seen[sigma.var]) continue;
    seen[sigma.var] = 0;
    if (--counter == 0) {
      uip = sigma;
      break;
    }
    std::int32_t rid = a_.reason(sigma.var);
    require(rid >= 0, "propagated literal without a reason");
    bump_nogood(static_cast<std::uint32_t>(rid));
    process(store_[rid].lits, sigma.var);
  }
  learned.push_back(uip);

  std::uint32_t bjl = 0;
  for (const Literal& l : learned)
    if (!(l == uip)) bjl = std::max(bjl, a_.level(l.var));

  canonicalize(learned);
  if (trace_on())
    trace_line("LEARN " + vt_.literals_to_string(learned) + " backjump=" + std::to_string(bjl));
  ++stats_.learned;
  backjump(bjl);
  add_nogood(std::move(learned), Origin::Learned);
  decay_activities();

  std::size_t live_learned = 0;
  for (const StoredNogood& sn : store_)
    if (!sn.deleted && (sn.origin == Origin::Learned || sn.origin == Origin::Entailment ||
                        sn.origin == Origin::Loop))
      ++live_learned;
  if (live_learned > cfg_.learned_cap) reduce_store();
  return true;
}

void Solver::backjump(std::uint32_t level) {
  a_.pop_to_level(level);
  dl_ = level;
  queue_pos_ = a_.trail_size();
  scan_needed_ = true;
}

void Solver::reduce_store() {
  // Nogoods currently acting as reasons must stay.
  std::vector<char> locked(store_.size(), 0);
  for (std::size_t i = 0; i < a_.trail_size(); ++i) {
    std::int32_t rid = a_.reason(a_.trail_at(i).var);
    if (rid >= 0) locked[rid] = 1;
  }
  std::vector<std::uint32_t> candidates;
  for (std::uint32_t id = 0; id < store_.size(); ++id) {
    const StoredNogood& sn = store_[id];
    if (sn.deleted || locked[id]) continue;
    if (sn.origin == Origin::Learned || sn.origin == Origin::Entailment ||
        sn.origin == Origin::Loop)
      candidates.push_back(id);
  }
  std::sort(candidates.begin(), candidates.end(), [this](std::uint32_t x, std::uint32_t y) {
    if (store_[x].activity != store_[y].activity)
      return store_[x].activity < store_[y].activity;
    return x < y;
  });
  std::size_t evict = candidates.size() / 2;
  for (std::size_t i = 0; i < evict; ++i) {
    StoredNogood& sn = store_[candidates[i]];
    sn.deleted = true;
    ++stats_.evicted;
    auto it = std::lower_bound(
        dedup_.begin(), dedup_.end(), sn.lits,
        [](const auto& entry, const LitVec& key) { return entry.first < key; });
    if (it != dedup_.end() && it->first == sn.lits && it->second == candidates[i])
      dedup_.erase(it);
  }
}

Literal Solver::select_literal() {
  if (cfg_.heuristic == Heuristic::Activity) {
    std::uint32_t best = 0;
    bool have = false;
    for (std::uint32_t v : atom_select_order_) {
      if (a_.assigned(v)) continue;
      if (!have || var_activity_[v] > var_activity_[best]) {
        best = v;
        have = true;
      }
    }
    require(have, "no selectable variable in a partial assignment");
    return pos_lit(best);
  }
  for (std::uint32_t v : atom_select_order_)
    if (!a_.assigned(v)) return pos_lit(v);
  throw ContractError("no selectable variable in a partial assignment");
}

Solver::CheckResult Solver::certify_model(const AtomSet& interp, std::string* gate_msg) {
  Verdict v;
  try {
    v = tight_ ? check_completion(kb_, oracle_, interp)
               : check_model_induced(kb_, oracle_, graph_, interp, cfg_.max_loops);
  } catch (const GateError&) {
    try {
      v = check_model_induced_sweep(kb_, oracle_, graph_, interp);
    } catch (const GateError& g2) {
      if (gate_msg) *gate_msg = g2.what();
      return CheckResult::Gated;
    }
  }
  if (trace_on()) trace_line(v.accepted ? "CHECK pass" : "CHECK fail");
  return v.accepted ? CheckResult::Pass : CheckResult::Fail;
}

SolveResult Solver::solve() { return run(1); }

SolveResult Solver::enumerate(std::uint64_t max_models) { return run(max_models); }

SolveResult Solver::run(std::uint64_t max_models) {
  SolveResult result;
  const auto start = std::chrono::steady_clock::now();
  std::uint64_t restart_idx = 1;
  std::uint64_t conflicts_since_restart = 0;

  auto finish = [&](Outcome o, const std::string& msg) {
    result.outcome = o;
    result.message = msg;
    stats_.oracle = oracle_.stats();
    result.stats = stats_;
    return result;
  };

  for (;;) {
    if (cfg_.conflict_budget && stats_.conflicts >= cfg_.conflict_budget)
      return finish(Outcome::Unknown, "conflict budget exhausted");
    if (cfg_.time_budget_ms) {
      auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - start)
                         .count();
      if (elapsed >= 0 && static_cast<std::uint64_t>(elapsed) > cfg_.time_budget_ms)
        return finish(Outcome::Unknown, "time budget exhausted");
    }

    std::int32_t c = propagate_with_theory();
    if (c >= 0) {
      ++stats_.conflicts;
      ++conflicts_since_restart;
      if (trace_on()) trace_line("CONFLICT " + std::to_string(c));
      if (!analyze_and_learn(static_cast<std::uint32_t>(c)))
        return finish(result.models.empty() ? Outcome::NoModel : Outcome::Model, "");
      if (cfg_.restarts && conflicts_since_restart >= luby(restart_idx) * 64) {
        ++restart_idx;
        conflicts_since_restart = 0;
        ++stats_.restarts;
        backjump(0);
      }
      continue;
    }

    if (!a_.total()) {
      Literal d = select_literal();
      ++dl_;
      ++stats_.decisions;
      a_.assign(d, dl_, -1);
      if (trace_on())
        trace_line("DECIDE " + std::to_string(dl_) + " " + vt_.literal_to_string(d));
      continue;
    }

    AtomSet interp = a_.true_atoms(vt_, kb_);
    ++stats_.model_checks;
    std::string gate_msg;
    CheckResult cr = certify_model(interp, &gate_msg);
    if (cr == CheckResult::Gated) return finish(Outcome::Unknown, gate_msg);
    if (cr == CheckResult::Pass) {
      if (trace_on()) trace_line("MODEL " + kb_.atom_set_to_string(interp));
      ++stats_.models;
      result.models.push_back(interp);
      if (max_models && result.models.size() >= max_models)
        return finish(Outcome::Model, "");
      backjump(0);
      LitVec block;
      for (AtomId at : kb_.vocab()) block.push_back({vt_.atom(at), contains(interp, at)});
      add_nogood(std::move(block), Origin::Blocking);
      continue;
    }
    // The certifier rejected this total assignment: exclude it verbatim.
    LitVec all;
    all.reserve(a_.trail_size());
    for (std::size_t i = 0; i < a_.trail_size(); ++i) all.push_back(a_.trail_at(i));
    add_nogood(std::move(all), Origin::ModelReject);
  }
}

}  // namespace hmknf
