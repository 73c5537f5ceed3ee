// Command-line driver for the hybrid MKNF solver, built on the C API only.
//
// Subcommands: solve (first model), enumerate (all models), verify (check a
// candidate interpretation, or cross-check the whole enumeration against an
// independent route), graph (DOT dependency graph).
//
// Exit codes: 0 model found / candidate accepted / enumerations match;
// 1 no model / rejected / mismatch; 2 unusable input; 3 search gave up
// (budget or in-run gate); 4 a tractability gate was exceeded; 5 internal
// error.

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hmknf.h"
#include "json.hpp"

namespace {

constexpr int kExitModel = 0;
constexpr int kExitNoModel = 1;
constexpr int kExitInput = 2;
constexpr int kExitUnknown = 3;
constexpr int kExitGate = 4;
constexpr int kExitInternal = 5;

struct Config {
  std::string input;
  std::string graph_mode = "overapprox";
  std::uint64_t max_exact_graph = 12;
  std::uint64_t max_loops = 4096;
  std::uint64_t max_direct = 3;
  std::uint64_t conflicts = 0;
  std::uint64_t time_ms = 0;
  std::string heuristic = "lex";
  std::uint64_t seed = 0;
  bool restarts = false;
  std::uint64_t learned_cap = 10000;
  std::string trace;
  bool json = false;
  bool stats = false;
};

void add_common_options(CLI::App* cmd, Config& cfg) {
  cmd->add_option("input", cfg.input, "knowledge base file")->required();
  cmd->add_option("--graph-mode", cfg.graph_mode, "dependency graph construction")
      ->check(CLI::IsMember({"exact", "overapprox"}))
      ->capture_default_str();
  cmd->add_option("--max-exact-graph", cfg.max_exact_graph,
                  "ontology-atom gate for the exact graph")
      ->capture_default_str();
  cmd->add_option("--max-loops", cfg.max_loops, "loop-enumeration gate")->capture_default_str();
  cmd->add_option("--max-direct", cfg.max_direct,
                  "vocabulary gate for the direct semantics checker")
      ->capture_default_str();
  cmd->add_option("--conflicts", cfg.conflicts, "conflict budget (0 = unbounded)")
      ->capture_default_str();
  cmd->add_option("--time-ms", cfg.time_ms, "time budget in milliseconds (0 = unbounded)")
      ->capture_default_str();
  cmd->add_option("--heuristic", cfg.heuristic, "decision heuristic")
      ->check(CLI::IsMember({"lex", "activity"}))
      ->capture_default_str();
  cmd->add_option("--seed", cfg.seed, "seed for randomized components")->capture_default_str();
  cmd->add_flag("--restarts", cfg.restarts, "enable Luby restarts");
  cmd->add_option("--learned-cap", cfg.learned_cap, "acquired-nogood eviction threshold")
      ->capture_default_str();
  cmd->add_option("--trace", cfg.trace, "write an event trace to this file (\"stderr\" works)");
  cmd->add_flag("--json", cfg.json, "machine-readable output");
  cmd->add_flag("--stats", cfg.stats, "print solver statistics to stderr");
}

int status_exit(hmknf_status st) {
  std::fprintf(stderr, "error: %s\n", hmknf_last_error());
  switch (st) {
    case HMKNF_ERR_PARSE: return kExitInput;
    case HMKNF_ERR_GATE: return kExitGate;
    case HMKNF_ERR_INVALID: return kExitInput;
    case HMKNF_ERR_IO: return kExitInput;
    default: return kExitInternal;
  }
}

struct KbHandle {
  hmknf_kb* kb = nullptr;
  ~KbHandle() { hmknf_kb_free(kb); }
};

struct OptionsHandle {
  hmknf_options* opts = hmknf_options_new();
  ~OptionsHandle() { hmknf_options_free(opts); }
};

struct ResultHandle {
  hmknf_result* res = nullptr;
  ~ResultHandle() { hmknf_result_free(res); }
};

struct StringHandle {
  char* s = nullptr;
  ~StringHandle() { hmknf_string_free(s); }
};

bool apply_options(hmknf_options* opts, const Config& cfg) {
  auto set = [&](const char* key, const std::string& value) {
    return hmknf_options_set(opts, key, value.c_str()) == HMKNF_OK;
  };
  bool ok = set("graph-mode", cfg.graph_mode) &&
            set("max-exact-graph", std::to_string(cfg.max_exact_graph)) &&
            set("max-loops", std::to_string(cfg.max_loops)) &&
            set("max-direct", std::to_string(cfg.max_direct)) &&
            set("conflicts", std::to_string(cfg.conflicts)) &&
            set("time-ms", std::to_string(cfg.time_ms)) &&
            set("heuristic", cfg.heuristic) && set("seed", std::to_string(cfg.seed)) &&
            set("restarts", cfg.restarts ? "1" : "0") &&
            set("learned-cap", std::to_string(cfg.learned_cap));
  std::string trace = cfg.trace;
  if (trace.empty()) {
    const char* env = std::getenv("HMKNF_TRACE");
    if (env && std::string(env) == "1") trace = "stderr";
  }
  if (ok && !trace.empty()) ok = set("trace", trace);
  return ok;
}

std::string model_to_string(const hmknf_result* res, size_t m) {
  std::string out = "{";
  size_t n = hmknf_result_model_size(res, m);
  for (size_t i = 0; i < n; ++i) {
    if (i) out += ", ";
    out += hmknf_result_model_atom(res, m, i);
  }
  out += "}";
  return out;
}

nlohmann::json model_to_json(const hmknf_result* res, size_t m) {
  nlohmann::json atoms = nlohmann::json::array();
  size_t n = hmknf_result_model_size(res, m);
  for (size_t i = 0; i < n; ++i) atoms.push_back(hmknf_result_model_atom(res, m, i));
  return atoms;
}

nlohmann::json stats_to_json(const hmknf_result* res) {
  static const char* const names[] = {
      "decisions",     "conflicts",        "restarts",          "learned",
      "entailment-nogoods", "loop-nogoods", "model-checks",     "evicted",
      "models",        "oracle-queries",   "oracle-cache-hits", "oracle-sat-calls"};
  nlohmann::json out;
  for (const char* name : names) out[name] = hmknf_result_stat(res, name);
  return out;
}

void print_stats(const hmknf_result* res) {
  static const char* const names[] = {
      "decisions",     "conflicts",        "restarts",          "learned",
      "entailment-nogoods", "loop-nogoods", "model-checks",     "evicted",
      "models",        "oracle-queries",   "oracle-cache-hits", "oracle-sat-calls"};
  for (const char* name : names)
    std::fprintf(stderr, "%s: %llu\n", name,
                 static_cast<unsigned long long>(hmknf_result_stat(res, name)));
}

const char* outcome_name(hmknf_outcome o) {
  switch (o) {
    case HMKNF_MODEL: return "model";
    case HMKNF_NO_MODEL: return "no-model";
    default: return "unknown";
  }
}

int report_outcome(const hmknf_result* res, bool enumerate_mode, const Config& cfg) {
  hmknf_outcome outcome = hmknf_result_outcome(res);
  if (cfg.json) {
    nlohmann::json out;
    out["outcome"] = outcome_name(outcome);
    if (enumerate_mode) {
      nlohmann::json models = nlohmann::json::array();
      for (size_t m = 0; m < hmknf_result_model_count(res); ++m)
        models.push_back(model_to_json(res, m));
      out["models"] = models;
    } else {
      if (hmknf_result_model_count(res) > 0)
        out["model"] = model_to_json(res, 0);
      else
        out["model"] = nullptr;
    }
    if (outcome == HMKNF_UNKNOWN) out["message"] = hmknf_result_message(res);
    out["stats"] = stats_to_json(res);
    std::cout << out.dump(2) << "\n";
  } else {
    if (outcome == HMKNF_UNKNOWN) {
      std::cout << "UNKNOWN\n";
      std::fprintf(stderr, "unknown: %s\n", hmknf_result_message(res));
    } else if (hmknf_result_model_count(res) == 0) {
      std::cout << "NO MODEL\n";
    } else if (enumerate_mode) {
      for (size_t m = 0; m < hmknf_result_model_count(res); ++m)
        std::cout << model_to_string(res, m) << "\n";
    } else {
      std::cout << "MODEL " << model_to_string(res, 0) << "\n";
    }
  }
  if (cfg.stats && !cfg.json) print_stats(res);
  switch (outcome) {
    case HMKNF_MODEL: return kExitModel;
    case HMKNF_NO_MODEL: return kExitNoModel;
    default: return kExitUnknown;
  }
}

// Splits "f(x,y),g" at commas outside parentheses; whitespace trimmed,
// empty pieces dropped (so "" is the empty candidate).
std::vector<std::string> split_candidate(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  auto flush = [&]() {
    size_t b = cur.find_first_not_of(" \t");
    size_t e = cur.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(cur.substr(b, e - b + 1));
    cur.clear();
  };
  for (char c : text) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      flush();
      continue;
    }
    cur += c;
  }
  flush();
  return out;
}

int cmd_solve_or_enumerate(const Config& cfg, bool enumerate_mode, std::uint64_t max_models) {
  KbHandle kb;
  hmknf_status st = hmknf_parse_file(cfg.input.c_str(), &kb.kb);
  if (st != HMKNF_OK) return status_exit(st);
  OptionsHandle opts;
  if (!apply_options(opts.opts, cfg)) return status_exit(HMKNF_ERR_INVALID);
  ResultHandle res;
  st = enumerate_mode ? hmknf_enumerate(kb.kb, opts.opts, max_models, &res.res)
                      : hmknf_solve(kb.kb, opts.opts, &res.res);
  if (st != HMKNF_OK) return status_exit(st);
  return report_outcome(res.res, enumerate_mode, cfg);
}

int cmd_verify(const Config& cfg, bool have_candidate, const std::string& candidate, bool all,
               const std::string& oracle) {
  KbHandle kb;
  hmknf_status st = hmknf_parse_file(cfg.input.c_str(), &kb.kb);
  if (st != HMKNF_OK) return status_exit(st);
  OptionsHandle opts;
  if (!apply_options(opts.opts, cfg)) return status_exit(HMKNF_ERR_INVALID);

  if (all) {
    int match = 0;
    StringHandle report;
    st = hmknf_verify_all(kb.kb, opts.opts, oracle.c_str(), &match, &report.s);
    if (st != HMKNF_OK) return status_exit(st);
    if (cfg.json) {
      nlohmann::json out;
      out["match"] = match != 0;
      out["report"] = report.s ? report.s : "";
      std::cout << out.dump(2) << "\n";
    } else {
      std::cout << (report.s ? report.s : "") << "\n";
    }
    return match ? kExitModel : kExitNoModel;
  }

  if (!have_candidate) {
    std::fprintf(stderr, "error: verify needs --candidate or --all\n");
    return kExitInput;
  }
  std::vector<std::string> atoms = split_candidate(candidate);
  std::vector<const char*> ptrs;
  ptrs.reserve(atoms.size());
  for (const std::string& a : atoms) ptrs.push_back(a.c_str());
  int accepted = 0;
  StringHandle label, witness;
  st = hmknf_verify(kb.kb, opts.opts, ptrs.data(), ptrs.size(), &accepted, &label.s, &witness.s);
  if (st != HMKNF_OK) return status_exit(st);
  if (cfg.json) {
    nlohmann::json out;
    out["accepted"] = accepted != 0;
    if (!accepted) {
      out["component"] = label.s ? label.s : "";
      out["witness"] = witness.s ? witness.s : "";
    }
    std::cout << out.dump(2) << "\n";
  } else if (accepted) {
    std::cout << "ACCEPT\n";
  } else {
    std::cout << "REJECT " << (label.s ? label.s : "") << "\n";
    if (witness.s && *witness.s) std::cout << "  " << witness.s << "\n";
  }
  return accepted ? kExitModel : kExitNoModel;
}

int cmd_graph(const Config& cfg, bool annotate) {
  KbHandle kb;
  hmknf_status st = hmknf_parse_file(cfg.input.c_str(), &kb.kb);
  if (st != HMKNF_OK) return status_exit(st);
  OptionsHandle opts;
  if (!apply_options(opts.opts, cfg)) return status_exit(HMKNF_ERR_INVALID);
  StringHandle dot;
  st = hmknf_graph_dot(kb.kb, opts.opts, annotate ? 1 : 0, &dot.s);
  if (st != HMKNF_OK) return status_exit(st);
  std::cout << dot.s;
  return kExitModel;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hmknf — model enumeration for ground hybrid MKNF knowledge bases"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(hmknf_version()));

  Config solve_cfg, enum_cfg, verify_cfg, graph_cfg;
  std::uint64_t max_models = 0;
  std::string candidate, oracle = "formulas";
  bool all = false, annotate = false;

  CLI::App* solve = app.add_subcommand("solve", "find one model");
  add_common_options(solve, solve_cfg);

  CLI::App* enumerate = app.add_subcommand("enumerate", "find every model");
  add_common_options(enumerate, enum_cfg);
  enumerate->add_option("--max-models", max_models, "stop after this many (0 = all)")
      ->capture_default_str();

  CLI::App* verify = app.add_subcommand("verify", "check a candidate or the whole enumeration");
  add_common_options(verify, verify_cfg);
  CLI::Option* cand_opt =
      verify->add_option("--candidate", candidate, "comma-separated atom names");
  verify->add_flag("--all", all, "cross-check the enumeration against an independent route")
      ->excludes(cand_opt);
  verify->add_option("--oracle", oracle, "route for --all")
      ->check(CLI::IsMember({"formulas", "nogoods", "direct"}))
      ->capture_default_str();

  CLI::App* graph = app.add_subcommand("graph", "print the dependency graph as DOT");
  add_common_options(graph, graph_cfg);
  graph->add_flag("--loops", annotate, "cluster cyclic strongly connected components");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;  // help/version exit 0, usage errors exit 2
  }

  if (solve->parsed()) return cmd_solve_or_enumerate(solve_cfg, false, 1);
  if (enumerate->parsed()) return cmd_solve_or_enumerate(enum_cfg, true, max_models);
  if (verify->parsed())
    return cmd_verify(verify_cfg, cand_opt->count() > 0, candidate, all, oracle);
  if (graph->parsed()) return cmd_graph(graph_cfg, annotate);
  return kExitInput;
}
