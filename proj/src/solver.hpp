#pragma once

// Conflict-driven search over the nogood encoding.
//
// The solver interleaves unit propagation with two theory steps that run at
// every propagation fixpoint: an entailment round, which asks the oracle
// about the current partial assignment and adds entailment nogoods for
// whatever it settles, and an unfounded-set check, which finds circularly
// justified true atoms inside a dependency-graph SCC and adds one loop
// nogood against them. Conflicts are analyzed to the first unique
// implication point; total conflict-free assignments are certified against
// the formula-level checker before being reported, and enumeration proceeds
// by permanently blocking each reported interpretation.

#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "characterize.hpp"
#include "depgraph.hpp"
#include "kb.hpp"
#include "nogoods.hpp"
#include "oracle.hpp"

namespace hmknf {

enum class Heuristic { Lex, Activity };
enum class Outcome { Model, NoModel, Unknown };

std::string outcome_to_string(Outcome o);

struct RunConfig {
  GraphMode graph_mode = GraphMode::Overapprox;
  std::size_t max_exact_graph = 12;  // ontology-atom gate for the exact graph
  std::size_t max_loops = 4096;      // loop-enumeration gate for certification
  std::size_t max_direct = 3;        // vocabulary gate for the direct checker (CLI)
  std::uint64_t conflict_budget = 0;  // 0 = unbounded
  std::uint64_t time_budget_ms = 0;   // 0 = unbounded
  Heuristic heuristic = Heuristic::Lex;
  std::uint64_t seed = 0;
  bool restarts = false;            // Luby sequence, unit 64 conflicts
  std::size_t learned_cap = 10000;  // eviction threshold for acquired nogoods
  std::ostream* trace = nullptr;    // event log; null = off
};

struct SolveStats {
  std::uint64_t decisions = 0;
  std::uint64_t conflicts = 0;
  std::uint64_t restarts = 0;
  std::uint64_t learned = 0;
  std::uint64_t entailment_nogoods = 0;
  std::uint64_t loop_nogoods = 0;
  std::uint64_t model_checks = 0;
  std::uint64_t evicted = 0;
  std::uint64_t models = 0;
  OracleStats oracle;
};

struct SolveResult {
  Outcome outcome = Outcome::Unknown;
  std::vector<AtomSet> models;  // in discovery order
  SolveStats stats;
  std::string message;  // why the outcome is Unknown, when it is
};

// One entailment nogood the round decided to emit, with the support set it
// actually used (for traces and tests).
struct EntailmentEmission {
  bool positive = true;     // presence-forcing vs absence-forcing
  AtomId atom = 0;          // kBotAtom for the falsum support variable
  AtomSet support;
  Nogood nogood;
};

// Computes, against a fixed assignment, every entailment nogood the oracle
// currently justifies: entailed-but-not-true atoms, refuted-but-not-false
// atoms (as falsum nogoods), true atoms whose open support variable the
// remaining true atoms already settle, and support variables that cannot
// hold because even the maximal remaining assumption set fails to entail
// their atom.
class EntailmentRound {
 public:
  EntailmentRound(const KnowledgeBase& kb, const Oracle& oracle, const VarTable& vt,
                  const DependencyGraph& graph);

  std::vector<EntailmentEmission> run(const Assignment& a) const;

 private:
  const KnowledgeBase& kb_;
  const Oracle& oracle_;
  const VarTable& vt_;
  const DependencyGraph& graph_;
};

// Single-shot solver: construct, then call solve() or enumerate() once.
class Solver {
 public:
  Solver(const KnowledgeBase& kb, RunConfig cfg);

  // First certified interpretation, if any.
  SolveResult solve();
  // All certified interpretations (up to max_models; 0 = all).
  SolveResult enumerate(std::uint64_t max_models = 0);

  const KnowledgeBase& kb() const { return kb_; }
  const Oracle& oracle() const { return oracle_; }
  const DependencyGraph& graph() const { return graph_; }
  const VarTable& vars() const { return vt_; }
  bool tight() const { return tight_; }

 private:
  enum class Origin : std::uint8_t { Static, Learned, Entailment, Loop, Blocking, ModelReject };
  enum class CheckResult { Pass, Fail, Gated };

  struct StoredNogood {
    LitVec lits;
    Origin origin = Origin::Static;
    double activity = 0.0;
    bool deleted = false;
    std::uint32_t w0 = 0;  // watched positions (size >= 2 only)
    std::uint32_t w1 = 0;
  };

  SolveResult run(std::uint64_t max_models);

  // Returns the store id; -1 if the literal set was vacuous. Duplicate sets
  // return the existing id with *added_new = false.
  std::int32_t add_nogood(LitVec lits, Origin origin, bool* added_new = nullptr);
  void attach_watches(std::uint32_t id);
  void assert_literal(Literal l, std::int32_t reason);

  // Unit propagation to fixpoint; conflict nogood id or -1. A full scan of
  // the store replaces watch-driven propagation after backjumps and nogood
  // additions, since fresh nogoods' watches carry no invariant there.
  std::int32_t propagate();
  std::int32_t scan_once(bool& progressed);
  std::int32_t process_watch_list(Literal assigned);

  // Propagation interleaved with entailment rounds and unfounded-set checks,
  // each running at the propagation fixpoint.
  std::int32_t propagate_with_theory();
  bool entailment_round();  // true if a new nogood was added
  std::pair<AtomSet, AtomSet> unfounded_set();
  void add_unfounded_nogood(const AtomSet& u, const AtomSet& s);

  // First-UIP learning; false on a root-level conflict (search exhausted).
  bool analyze_and_learn(std::uint32_t conflict_id);
  void backjump(std::uint32_t level);

  void bump_nogood(std::uint32_t id);
  void bump_var(std::uint32_t var);
  void decay_activities();
  void reduce_store();

  Literal select_literal();
  CheckResult certify_model(const AtomSet& interp, std::string* gate_msg);

  bool trace_on() const { return cfg_.trace != nullptr; }
  void trace_line(const std::string& s);

  const KnowledgeBase& kb_;
  RunConfig cfg_;
  Oracle oracle_;
  DependencyGraph graph_;
  VarTable vt_;
  Assignment a_;
  bool tight_ = false;
  std::vector<AtomSet> sccs_;
  std::unique_ptr<EntailmentRound> ent_;

  std::vector<StoredNogood> store_;
  std::vector<std::vector<std::uint32_t>> watches_;  // index: var * 2 + positive
  std::vector<std::pair<LitVec, std::uint32_t>> dedup_;  // sorted by literal set

  std::uint32_t dl_ = 0;
  std::size_t queue_pos_ = 0;
  bool scan_needed_ = true;
  AtomSet unfounded_cache_;
  AtomSet unfounded_support_;

  std::vector<double> var_activity_;
  double var_activity_inc_ = 1.0;
  double nogood_activity_inc_ = 1.0;
  std::vector<std::uint32_t> atom_select_order_;

  SolveStats stats_;
};

}  // namespace hmknf
