#include "hmknf.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "characterize.hpp"
#include "depgraph.hpp"
#include "direct.hpp"
#include "kb.hpp"
#include "nogoods.hpp"
#include "parser.hpp"
#include "solver.hpp"

struct hmknf_kb {
  hmknf::KnowledgeBase kb;
};

struct hmknf_options {
  hmknf::RunConfig cfg;
  std::string trace_path;  // empty = tracing off; "stderr" = standard error
};

struct hmknf_result {
  hmknf::SolveResult res;
  std::vector<std::vector<std::string>> names;  // per model, name-sorted
};

namespace {

thread_local std::string g_last_error = "";

const hmknf_options kDefaultOptions{};

hmknf_status fail(hmknf_status st, const std::string& msg) {
  g_last_error = msg;
  return st;
}

hmknf_status from_current_exception() {
  try {
    throw;
  } catch (const hmknf::Error& e) {
    switch (e.code()) {
      case hmknf::ErrorCode::Parse: return fail(HMKNF_ERR_PARSE, e.what());
      case hmknf::ErrorCode::Gate: return fail(HMKNF_ERR_GATE, e.what());
      case hmknf::ErrorCode::InvalidArgument: return fail(HMKNF_ERR_INVALID, e.what());
      case hmknf::ErrorCode::Io: return fail(HMKNF_ERR_IO, e.what());
      case hmknf::ErrorCode::Contract: return fail(HMKNF_ERR_INTERNAL, e.what());
    }
    return fail(HMKNF_ERR_INTERNAL, e.what());
  } catch (const std::exception& e) {
    return fail(HMKNF_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(HMKNF_ERR_INTERNAL, "unknown error");
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::uint64_t parse_number(const char* key, const char* value) {
  try {
    std::size_t pos = 0;
    std::string v(value);
    std::uint64_t n = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return n;
  } catch (const std::exception&) {
    throw hmknf::InvalidArgumentError(std::string("option ") + key +
                                      " needs a non-negative integer, got '" + value + "'");
  }
}

hmknf_result* materialize(const hmknf::KnowledgeBase& kb, hmknf::SolveResult res) {
  auto* out = new hmknf_result;
  out->names.reserve(res.models.size());
  for (const hmknf::AtomSet& m : res.models) {
    std::vector<std::string> names;
    names.reserve(m.size());
    for (hmknf::AtomId a : m) names.push_back(kb.atom_name(a));
    std::sort(names.begin(), names.end());
    out->names.push_back(std::move(names));
  }
  out->res = std::move(res);
  return out;
}

hmknf_status run_solver(const hmknf_kb* kb, const hmknf_options* opts, bool enumerate,
                        uint64_t max_models, hmknf_result** out) {
  if (!kb || !out) return fail(HMKNF_ERR_INVALID, "null argument");
  if (!opts) opts = &kDefaultOptions;
  *out = nullptr;
  try {
    hmknf::RunConfig cfg = opts->cfg;
    std::ofstream trace_file;
    if (!opts->trace_path.empty()) {
      if (opts->trace_path == "stderr") {
        cfg.trace = &std::cerr;
      } else {
        trace_file.open(opts->trace_path);
        if (!trace_file) throw hmknf::IoError("cannot open trace file " + opts->trace_path);
        cfg.trace = &trace_file;
      }
    }
    hmknf::Solver solver(kb->kb, cfg);
    hmknf::SolveResult res = enumerate ? solver.enumerate(max_models) : solver.solve();
    *out = materialize(kb->kb, std::move(res));
    return HMKNF_OK;
  } catch (...) {
    return from_current_exception();
  }
}

std::vector<hmknf::AtomSet> sorted_models(std::vector<hmknf::AtomSet> models) {
  std::sort(models.begin(), models.end());
  return models;
}

}  // namespace

extern "C" {

const char* hmknf_version(void) { return "0.1.0"; }

const char* hmknf_last_error(void) { return g_last_error.c_str(); }

void hmknf_string_free(char* s) { std::free(s); }

/* --- knowledge bases ------------------------------------------------------ */

hmknf_status hmknf_parse(const char* text, hmknf_kb** out) {
  if (!text || !out) return fail(HMKNF_ERR_INVALID, "null argument");
  *out = nullptr;
  try {
    auto* kb = new hmknf_kb{hmknf::parse_kb(text)};
    *out = kb;
    return HMKNF_OK;
  } catch (...) {
    return from_current_exception();
  }
}

hmknf_status hmknf_parse_file(const char* path, hmknf_kb** out) {
  if (!path || !out) return fail(HMKNF_ERR_INVALID, "null argument");
  *out = nullptr;
  try {
    auto* kb = new hmknf_kb{hmknf::parse_kb_file(path)};
    *out = kb;
    return HMKNF_OK;
  } catch (...) {
    return from_current_exception();
  }
}

void hmknf_kb_free(hmknf_kb* kb) { delete kb; }

hmknf_status hmknf_kb_serialize(const hmknf_kb* kb, char** out) {
  if (!kb || !out) return fail(HMKNF_ERR_INVALID, "null argument");
  *out = dup_string(kb->kb.serialize());
  if (!*out) return fail(HMKNF_ERR_INTERNAL, "out of memory");
  return HMKNF_OK;
}

size_t hmknf_kb_atom_count(const hmknf_kb* kb) { return kb ? kb->kb.atom_count() : 0; }
size_t hmknf_kb_rule_count(const hmknf_kb* kb) { return kb ? kb->kb.rules().size() : 0; }
size_t hmknf_kb_clause_count(const hmknf_kb* kb) { return kb ? kb->kb.clauses().size() : 0; }
size_t hmknf_kb_warning_count(const hmknf_kb* kb) { return kb ? kb->kb.warnings().size() : 0; }

const char* hmknf_kb_warning(const hmknf_kb* kb, size_t i) {
  if (!kb || i >= kb->kb.warnings().size()) return nullptr;
  return kb->kb.warnings()[i].c_str();
}

/* --- options --------------------------------------------------------------- */

hmknf_options* hmknf_options_new(void) { return new hmknf_options; }

void hmknf_options_free(hmknf_options* opts) { delete opts; }

hmknf_status hmknf_options_set(hmknf_options* opts, const char* key, const char* value) {
  if (!opts || !key || !value) return fail(HMKNF_ERR_INVALID, "null argument");
  try {
    std::string k(key);
    std::string v(value);
    if (k == "graph-mode") {
      if (v == "exact")
        opts->cfg.graph_mode = hmknf::GraphMode::Exact;
      else if (v == "overapprox")
        opts->cfg.graph_mode = hmknf::GraphMode::Overapprox;
      else
        throw hmknf::InvalidArgumentError("graph-mode must be exact or overapprox, got '" + v +
                                          "'");
    } else if (k == "max-exact-graph") {
      opts->cfg.max_exact_graph = static_cast<std::size_t>(parse_number(key, value));
    } else if (k == "max-loops") {
      opts->cfg.max_loops = static_cast<std::size_t>(parse_number(key, value));
    } else if (k == "max-direct") {
      opts->cfg.max_direct = static_cast<std::size_t>(parse_number(key, value));
    } else if (k == "conflicts") {
      opts->cfg.conflict_budget = parse_number(key, value);
    } else if (k == "time-ms") {
      opts->cfg.time_budget_ms = parse_number(key, value);
    } else if (k == "heuristic") {
      if (v == "lex")
        opts->cfg.heuristic = hmknf::Heuristic::Lex;
      else if (v == "activity")
        opts->cfg.heuristic = hmknf::Heuristic::Activity;
      else
        throw hmknf::InvalidArgumentError("heuristic must be lex or activity, got '" + v + "'");
    } else if (k == "seed") {
      opts->cfg.seed = parse_number(key, value);
    } else if (k == "restarts") {
      if (v == "0")
        opts->cfg.restarts = false;
      else if (v == "1")
        opts->cfg.restarts = true;
      else
        throw hmknf::InvalidArgumentError("restarts must be 0 or 1, got '" + v + "'");
    } else if (k == "learned-cap") {
      opts->cfg.learned_cap = static_cast<std::size_t>(parse_number(key, value));
    } else if (k == "trace") {
      opts->trace_path = v;
    } else {
      throw hmknf::InvalidArgumentError("unknown option '" + k + "'");
    }
    return HMKNF_OK;
  } catch (...) {
    return from_current_exception();
  }
}

/* --- solving ----------------------------------------------------------------- */

hmknf_status hmknf_solve(const hmknf_kb* kb, const hmknf_options* opts, hmknf_result** out) {
  return run_solver(kb, opts, false, 1, out);
}

hmknf_status hmknf_enumerate(const hmknf_kb* kb, const hmknf_options* opts, uint64_t max_models,
                             hmknf_result** out) {
  return run_solver(kb, opts, true, max_models, out);
}

void hmknf_result_free(hmknf_result* res) { delete res; }

hmknf_outcome hmknf_result_outcome(const hmknf_result* res) {
  if (!res) return HMKNF_UNKNOWN;
  switch (res->res.outcome) {
    case hmknf::Outcome::Model: return HMKNF_MODEL;
    case hmknf::Outcome::NoModel: return HMKNF_NO_MODEL;
    case hmknf::Outcome::Unknown: return HMKNF_UNKNOWN;
  }
  return HMKNF_UNKNOWN;
}

size_t hmknf_result_model_count(const hmknf_result* res) { return res ? res->names.size() : 0; }

size_t hmknf_result_model_size(const hmknf_result* res, size_t model) {
  if (!res || model >= res->names.size()) return 0;
  return res->names[model].size();
}

const char* hmknf_result_model_atom(const hmknf_result* res, size_t model, size_t idx) {
  if (!res || model >= res->names.size() || idx >= res->names[model].size()) return nullptr;
  return res->names[model][idx].c_str();
}

const char* hmknf_result_message(const hmknf_result* res) {
  return res ? res->res.message.c_str() : "";
}

uint64_t hmknf_result_stat(const hmknf_result* res, const char* name) {
  if (!res || !name) return 0;
  const hmknf::SolveStats& s = res->res.stats;
  std::string n(name);
  if (n == "decisions") return s.decisions;
  if (n == "conflicts") return s.conflicts;
  if (n == "restarts") return s.restarts;
  if (n == "learned") return s.learned;
  if (n == "entailment-nogoods") return s.entailment_nogoods;
  if (n == "loop-nogoods") return s.loop_nogoods;
  if (n == "model-checks") return s.model_checks;
  if (n == "evicted") return s.evicted;
  if (n == "models") return s.models;
  if (n == "oracle-queries") return s.oracle.queries;
  if (n == "oracle-cache-hits") return s.oracle.cache_hits;
  if (n == "oracle-sat-calls") return s.oracle.sat_calls;
  return 0;
}

/* --- verification ------------------------------------------------------------ */

hmknf_status hmknf_verify(const hmknf_kb* kb, const hmknf_options* opts,
                          const char* const* atoms, size_t n_atoms, int* accepted, char** label,
                          char** witness) {
  if (!kb || !accepted || (n_atoms > 0 && !atoms))
    return fail(HMKNF_ERR_INVALID, "null argument");
  if (!opts) opts = &kDefaultOptions;
  if (label) *label = nullptr;
  if (witness) *witness = nullptr;
  try {
    hmknf::AtomSet interp;
    for (size_t i = 0; i < n_atoms; ++i) {
      if (!atoms[i]) throw hmknf::InvalidArgumentError("null atom name");
      auto id = kb->kb.find_atom(atoms[i]);
      if (!id)
        throw hmknf::ParseError(std::string("unknown atom '") + atoms[i] + "' in candidate", 0,
                                0);
      interp.push_back(*id);
    }
    hmknf::sort_unique(interp);

    hmknf::Oracle oracle(kb->kb);
    hmknf::DependencyGraph graph = hmknf::build_graph(kb->kb, oracle, opts->cfg.graph_mode,
                                                      opts->cfg.max_exact_graph);
    hmknf::Verdict v;
    if (hmknf::is_tight(graph)) {
      v = hmknf::check_completion(kb->kb, oracle, interp);
    } else {
      try {
        v = hmknf::check_model_induced(kb->kb, oracle, graph, interp, opts->cfg.max_loops);
      } catch (const hmknf::GateError&) {
        v = hmknf::check_model_induced_sweep(kb->kb, oracle, graph, interp);
      }
    }
    *accepted = v.accepted ? 1 : 0;
    if (!v.accepted) {
      if (label) *label = dup_string(v.component_label(kb->kb));
      if (witness) *witness = dup_string(v.witness);
    }
    return HMKNF_OK;
  } catch (...) {
    return from_current_exception();
  }
}

hmknf_status hmknf_verify_all(const hmknf_kb* kb, const hmknf_options* opts, const char* oracle,
                              int* match, char** report) {
  if (!kb || !oracle || !match) return fail(HMKNF_ERR_INVALID, "null argument");
  if (!opts) opts = &kDefaultOptions;
  if (report) *report = nullptr;
  try {
    std::string which(oracle);
    hmknf::Solver solver(kb->kb, opts->cfg);
    hmknf::SolveResult engine = solver.enumerate();
    if (engine.outcome == hmknf::Outcome::Unknown)
      throw hmknf::GateError("solver stopped before exhausting the search: " + engine.message);

    std::vector<hmknf::AtomSet> reference;
    if (which == "formulas") {
      hmknf::Oracle orc(kb->kb);
      hmknf::DependencyGraph graph =
          hmknf::build_graph(kb->kb, orc, opts->cfg.graph_mode, opts->cfg.max_exact_graph);
      reference = hmknf::enumerate_models_formulas(kb->kb, orc, graph, opts->cfg.max_loops);
    } else if (which == "nogoods") {
      hmknf::Oracle orc(kb->kb);
      hmknf::DependencyGraph graph =
          hmknf::build_graph(kb->kb, orc, opts->cfg.graph_mode, opts->cfg.max_exact_graph);
      reference = hmknf::enumerate_solutions_full(kb->kb, orc, graph, /*completion_only=*/false,
                                                  opts->cfg.max_loops);
    } else if (which == "direct") {
      reference = hmknf::enumerate_models_direct(kb->kb, opts->cfg.max_direct);
    } else {
      throw hmknf::InvalidArgumentError("oracle must be formulas, nogoods or direct, got '" +
                                        which + "'");
    }

    std::vector<hmknf::AtomSet> lhs = sorted_models(engine.models);
    std::vector<hmknf::AtomSet> rhs = sorted_models(reference);
    *match = lhs == rhs ? 1 : 0;
    if (report) {
      std::string text;
      if (*match) {
        text = "MATCH (" + std::to_string(lhs.size()) +
               (lhs.size() == 1 ? " model)" : " models)");
      } else {
        text = "MISMATCH: solver found " + std::to_string(lhs.size()) + ", " + which +
               " route found " + std::to_string(rhs.size());
        for (const hmknf::AtomSet& m : lhs)
          if (!std::binary_search(rhs.begin(), rhs.end(), m))
            text += "\nonly solver: " + kb->kb.atom_set_to_string(m);
        for (const hmknf::AtomSet& m : rhs)
          if (!std::binary_search(lhs.begin(), lhs.end(), m))
            text += "\nonly " + which + ": " + kb->kb.atom_set_to_string(m);
      }
      *report = dup_string(text);
    }
    return HMKNF_OK;
  } catch (...) {
    return from_current_exception();
  }
}

/* --- graphs -------------------------------------------------------------------- */

hmknf_status hmknf_graph_dot(const hmknf_kb* kb, const hmknf_options* opts, int annotate_sccs,
                             char** out) {
  if (!kb || !out) return fail(HMKNF_ERR_INVALID, "null argument");
  if (!opts) opts = &kDefaultOptions;
  *out = nullptr;
  try {
    hmknf::Oracle oracle(kb->kb);
    hmknf::DependencyGraph graph = hmknf::build_graph(kb->kb, oracle, opts->cfg.graph_mode,
                                                      opts->cfg.max_exact_graph);
    *out = dup_string(hmknf::to_dot(kb->kb, graph, annotate_sccs != 0));
    if (!*out) return fail(HMKNF_ERR_INTERNAL, "out of memory");
    return HMKNF_OK;
  } catch (...) {
    return from_current_exception();
  }
}

}  // extern "C"
