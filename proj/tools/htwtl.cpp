/// \file htwtl.cpp
/// \brief Command-line driver: check, translate, synthesize, inspect.
///
/// Exit codes:
///   0  SAT verdict / feasible plan / informational command succeeded
///   1  UNSAT verdict / infeasible synthesis instance
///   2  usage, parse, or quantifier-fragment error
///   3  resource cap hit (time, product size, or instance size)
///
/// Set HTWTL_NO_COLOR (to any value) to disable ANSI colors.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "htwtl/bounds.hpp"
#include "htwtl/check.hpp"
#include "htwtl/classify.hpp"
#include "htwtl/errors.hpp"
#include "htwtl/parse.hpp"
#include "htwtl/print.hpp"
#include "htwtl/report.hpp"
#include "htwtl/synth.hpp"
#include "htwtl/tks.hpp"
#include "htwtl/trace.hpp"
#include "htwtl/translate.hpp"

namespace {

constexpr int exit_sat = 0;
constexpr int exit_unsat = 1;
constexpr int exit_usage = 2;
constexpr int exit_resource = 3;

/// A failure that has already been rendered for the user, with its exit code.
struct cli_failure {
  int code;
  std::string message;
};

bool color_on() { return std::getenv("HTWTL_NO_COLOR") == nullptr; }

std::string paint(const char* code, const std::string& s) {
  if (!color_on()) return s;
  return std::string("\033[") + code + "m" + s + "\033[0m";
}
std::string green(const std::string& s) { return paint("32;1", s); }
std::string red(const std::string& s) { return paint("31;1", s); }
std::string bold(const std::string& s) { return paint("1", s); }

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw cli_failure{exit_usage, "cannot open file: " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t pos) {
  std::size_t line = 1, col = 1;
  for (std::size_t k = 0; k < pos && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

[[noreturn]] void fail_parse(const std::string& origin, const std::string& source,
                             const htwtl::syntax_error& e) {
  auto [ln, cl] = line_col(source, e.position());
  throw cli_failure{exit_usage, origin + ":" + std::to_string(ln) + ":" + std::to_string(cl) +
                                    ": expected " + e.expected()};
}

struct loaded_formula {
  htwtl::hyper_formula formula;
  htwtl::family_map families;
  std::string origin;
};

loaded_formula load_formula(const std::string& path, const std::string& inline_text) {
  if (path.empty() == inline_text.empty())
    throw cli_failure{exit_usage, "provide exactly one of: a formula file, or --formula TEXT"};
  loaded_formula lf;
  std::string source;
  if (!inline_text.empty()) {
    source = inline_text;
    lf.origin = "<--formula>";
  } else {
    source = slurp(path);
    lf.origin = path;
  }
  try {
    htwtl::formula_document doc = htwtl::parse_formula_document(source);
    lf.formula = std::move(doc.formula);
    lf.families = std::move(doc.families);
  } catch (const htwtl::syntax_error& e) {
    fail_parse(lf.origin, source, e);
  } catch (const htwtl::error& e) {
    throw cli_failure{exit_usage, lf.origin + ": " + e.what()};
  }
  return lf;
}

struct loaded_model {
  htwtl::timed_kripke model;
  std::optional<htwtl::grid_spec> grid;
  std::string origin;
};

loaded_model load_model(const std::string& path, bool as_grid) {
  loaded_model lm;
  lm.origin = path;
  std::string source = slurp(path);
  try {
    if (as_grid) {
      lm.grid = htwtl::parse_grid(source);
      lm.model = htwtl::grid_to_tks(*lm.grid);
    } else {
      lm.model = htwtl::parse_model(source);
    }
  } catch (const htwtl::syntax_error& e) {
    fail_parse(path, source, e);
  } catch (const htwtl::error& e) {
    throw cli_failure{exit_usage, path + ": " + e.what()};
  }
  return lm;
}

struct cap_flags {
  long long k_lim = 0;  // 0 = use the formula horizon
  long long time_cap_ms = 120000;
  long long state_cap = 10000000;
  int threads = 1;
};

htwtl::check_options to_options(const cap_flags& c) {
  htwtl::check_options o;
  if (c.k_lim > 0) o.k_lim = c.k_lim;
  o.time_cap_ms = c.time_cap_ms;
  o.state_cap = c.state_cap;
  o.threads = c.threads;
  return o;
}

void add_cap_flags(CLI::App* cmd, cap_flags& caps) {
  cmd->add_option("--k-lim", caps.k_lim,
                  "Explore exactly K events per trace (horizon K-1), overriding the formula horizon");
  cmd->add_option("--time-cap-ms", caps.time_cap_ms, "Abort the search after this many milliseconds")
      ->capture_default_str();
  cmd->add_option("--state-cap", caps.state_cap,
                  "Abort if the product graph would exceed this many nodes")
      ->capture_default_str();
  cmd->add_option("--threads", caps.threads, "Worker threads (reserved; execution is single-threaded)")
      ->capture_default_str();
}

void print_assignments(const std::string& heading, const std::vector<htwtl::assignment_path>& aps) {
  if (aps.empty()) return;
  std::cout << heading << ":\n";
  for (const auto& ap : aps) {
    std::cout << "  " << ap.var << ":";
    for (const auto& [state, tick] : ap.steps) std::cout << " " << state << "@" << tick;
    std::cout << "\n    trace: " << htwtl::print_trace(ap.trace) << "\n";
  }
}

void write_out(const std::string& out_path, const nlohmann::json& rep) {
  if (out_path.empty()) return;
  std::ofstream out(out_path);
  if (!out) throw cli_failure{exit_usage, "cannot write file: " + out_path};
  out << rep.dump(2) << "\n";
}

long long ms_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                               t0)
      .count();
}

/// Renders the grid with every cell visited by a plan path as '*'.
void render_overlay(const htwtl::grid_spec& g, const std::vector<htwtl::assignment_path>& aps) {
  std::set<std::pair<int, int>> on_path;
  for (const auto& ap : aps)
    for (const auto& [state, tick] : ap.steps) {
      if (state.size() < 4 || state[0] != 'c') continue;
      auto us = state.find('_');
      if (us == std::string::npos) continue;
      try {
        on_path.insert({std::stoi(state.substr(1, us - 1)), std::stoi(state.substr(us + 1))});
      } catch (const std::exception&) {
        continue;
      }
    }
  std::cout << "path overlay ('*' = visited cell):\n";
  for (int r = 0; r < g.height; ++r) {
    std::string row = g.rows[r];
    for (int c = 0; c < g.width; ++c)
      if (on_path.count({r, c})) row[c] = '*';
    std::cout << "  " << row << "\n";
  }
}

// --- subcommands -------------------------------------------------------------

int cmd_check(const std::string& model_path, const std::string& formula_path,
              const std::string& formula_inline, bool as_grid, const cap_flags& caps,
              const std::string& out_path) {
  auto t0 = std::chrono::steady_clock::now();
  loaded_model lm = load_model(model_path, as_grid);
  loaded_formula lf = load_formula(formula_path, formula_inline);
  long long load_ms = ms_since(t0);

  htwtl::check_result res = htwtl::check(lm.model, lf.formula, lf.families, to_options(caps));

  std::cout << bold("check") << " " << lf.origin << " on " << lm.origin << "\n";
  std::cout << "formula: " << htwtl::pretty(lf.formula) << "\n";
  std::cout << "fragment: " << res.fragment
            << (res.rewritten_async ? " (asynchronous; rewritten to synchronous)" : "") << "\n";
  std::cout << "mode: " << res.mode << "  horizon: " << res.horizon
            << "  nodes: " << res.traces_examined << "  time: " << res.time_ms << " ms\n";
  std::cout << "verdict: " << (res.sat ? green("SAT") : red("UNSAT")) << "\n";
  print_assignments("witness", res.witness);
  print_assignments("counterexample", res.counterexample);

  nlohmann::json rep = htwtl::report_check(
      "check", lf.formula, res, {{"load", load_ms}, {"search", res.time_ms}, {"total", ms_since(t0)}});
  write_out(out_path, rep);
  return res.sat ? exit_sat : exit_unsat;
}

int cmd_translate(const std::string& formula_path, const std::string& formula_inline,
                  bool copies_report, const std::string& out_path) {
  auto t0 = std::chrono::steady_clock::now();
  loaded_formula lf = load_formula(formula_path, formula_inline);
  htwtl::fragment fr = htwtl::classify(lf.formula);
  if (fr.kind == htwtl::fragment_kind::other)
    throw htwtl::unsupported_fragment(htwtl::fragment_name(fr) +
                                      " (supported: exists*, forall*, exists*forall*)");

  bool sync = htwtl::is_synchronous(lf.formula);
  std::vector<std::string> pipeline;
  std::cout << bold("translate") << " " << lf.origin << "\n";
  std::cout << "input: " << htwtl::pretty(lf.formula) << "\n";
  std::cout << "fragment: " << htwtl::fragment_name(fr)
            << (sync ? " (synchronous)" : " (asynchronous)") << "\n";

  htwtl::hyper_formula hf = lf.formula;
  if (!sync) {
    hf = htwtl::async_to_sync(lf.formula);
    pipeline.push_back("async-to-sync");
    std::cout << "synchronous rewrite: " << htwtl::pretty(hf) << "\n";
  }
  pipeline.push_back("expand-families");
  pipeline.push_back("copy-tagging");
  htwtl::translation tr = htwtl::hyper_to_twtl(hf, lf.families);
  std::string twtl_text = htwtl::pretty_twtl(tr.formula);

  std::cout << "n_copies: " << tr.n_copies << "\n";
  std::cout << "twtl: " << twtl_text << "\n";
  std::cout << "horizon: " << htwtl::horizon(tr.formula) << "\n";
  if (tr.fresh_props.empty()) {
    std::cout << "fresh propositions: none\n";
  } else {
    std::cout << "fresh propositions:\n";
    for (const auto& fp : tr.fresh_props)
      std::cout << "  " << fp.name << "  subformula #" << fp.preorder_index << "  copy "
                << fp.copy + 1 << "  family " << fp.family << "  via " << fp.trace_var << "\n";
  }

  nlohmann::json rep = htwtl::report_translate("translate", lf.formula,
                                               htwtl::fragment_name(fr), pipeline, twtl_text,
                                               {{"total", ms_since(t0)}});
  rep["n_copies"] = tr.n_copies;
  rep["horizon"] = htwtl::horizon(tr.formula);
  if (!sync) rep["rewrite"] = htwtl::pretty(hf);
  nlohmann::json fps = nlohmann::json::array();
  for (const auto& fp : tr.fresh_props)
    fps.push_back({{"name", fp.name},
                   {"subformula", fp.preorder_index},
                   {"copy", fp.copy},
                   {"family", fp.family},
                   {"trace_var", fp.trace_var}});
  rep["fresh_props"] = fps;
  if (copies_report) std::cout << rep.dump(2) << "\n";
  write_out(out_path, rep);
  return exit_sat;
}

int cmd_synthesize(const std::string& model_path, const std::string& formula_path,
                   const std::string& formula_inline, bool as_grid, const cap_flags& caps,
                   const std::string& out_path) {
  auto t0 = std::chrono::steady_clock::now();
  loaded_model lm = load_model(model_path, as_grid);
  loaded_formula lf = load_formula(formula_path, formula_inline);

  std::cout << bold("synthesize") << " " << lf.origin << " on " << lm.origin << "\n";
  std::cout << "objective: earliest completion of " << htwtl::pretty(lf.formula) << "\n";

  htwtl::witness_plan plan;
  try {
    plan = htwtl::synthesize(lm.model, lf.formula, lf.families, to_options(caps));
  } catch (const htwtl::infeasible& e) {
    std::cout << "plan: " << red("INFEASIBLE") << " (" << e.what() << ")\n";
    return exit_unsat;
  }

  std::cout << "plan: " << green("FEASIBLE") << "  total_time: " << plan.total_time
            << "  nodes: " << plan.nodes_explored << "  time: " << plan.time_ms << " ms\n";
  print_assignments("assignments", plan.assignments);
  if (lm.grid) render_overlay(*lm.grid, plan.assignments);

  nlohmann::json rep =
      htwtl::report_plan("synthesize", htwtl::fragment_name(htwtl::classify(lf.formula)), plan,
                         {{"search", plan.time_ms}, {"total", ms_since(t0)}});
  std::cout << rep.dump(2) << "\n";
  write_out(out_path, rep);
  return exit_sat;
}

int cmd_inspect(const std::string& model_path, bool as_grid) {
  loaded_model lm = load_model(model_path, as_grid);
  const htwtl::timed_kripke& m = lm.model;

  std::cout << bold("model") << " " << lm.origin << "\n";
  if (lm.grid)
    std::cout << "grid: " << lm.grid->width << "x" << lm.grid->height << "\n";
  std::cout << "states: " << m.n_states() << " (" << m.init.size() << " initial)\n";
  std::cout << "transitions: " << m.n_transitions() << "\n";

  long long dmin = 0, dmax = 0;
  bool first = true;
  for (const auto& row : m.adj)
    for (const auto& [dst, dur] : row) {
      (void)dst;
      if (first) {
        dmin = dmax = dur;
        first = false;
      } else {
        dmin = std::min(dmin, dur);
        dmax = std::max(dmax, dur);
      }
    }
  if (!first) std::cout << "durations: " << dmin << ".." << dmax << "\n";

  htwtl::unrolled_graph g = htwtl::unroll(m, /*silent_intermediates=*/false);
  std::cout << "unit-unrolled nodes: " << g.n_nodes() << "\n";

  std::set<std::string> props;
  for (const auto& lab : m.labels) props.insert(lab.begin(), lab.end());
  std::cout << "propositions (" << props.size() << "):";
  for (const auto& p : props) std::cout << " " << p;
  std::cout << "\n";
  if (!m.families.empty()) {
    std::cout << "families:\n";
    for (const auto& [name, members] : m.families) {
      std::cout << "  " << name << " =";
      for (const auto& mem : members) std::cout << " " << mem;
      std::cout << "\n";
    }
  }
  return exit_sat;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"HyperTWTL bounded model checking and witness-plan synthesis"};
  app.require_subcommand(1);

  std::string model_path, formula_path, formula_inline, out_path;
  bool as_grid = false, copies_report = false;
  cap_flags caps;

  CLI::App* c_check = app.add_subcommand("check", "Model-check a formula against a model");
  c_check->add_option("model", model_path, "Model file (or grid file with --grid)")->required();
  c_check->add_option("formula_file", formula_path, "Formula file");
  c_check->add_option("--formula", formula_inline, "Inline formula text");
  c_check->add_flag("--grid", as_grid, "Treat the model file as a grid world");
  c_check->add_option("--out", out_path, "Write the JSON report to this path");
  add_cap_flags(c_check, caps);

  CLI::App* c_translate =
      app.add_subcommand("translate", "Print the synchronous rewrite and flattened TWTL form");
  c_translate->add_option("formula_file", formula_path, "Formula file");
  c_translate->add_option("--formula", formula_inline, "Inline formula text");
  c_translate->add_flag("--copies-report", copies_report,
                        "Also print the machine-readable JSON report");
  c_translate->add_option("--out", out_path, "Write the JSON report to this path");

  CLI::App* c_synth =
      app.add_subcommand("synthesize", "Find minimum-completion-time witness paths");
  c_synth->add_option("model", model_path, "Model file (or grid file with --grid)")->required();
  c_synth->add_option("formula_file", formula_path, "Formula file");
  c_synth->add_option("--formula", formula_inline, "Inline formula text");
  c_synth->add_flag("--grid", as_grid, "Treat the model file as a grid world");
  c_synth->add_option("--out", out_path, "Write the JSON plan to this path");
  add_cap_flags(c_synth, caps);

  CLI::App* c_inspect = app.add_subcommand("inspect", "Print model statistics");
  c_inspect->add_option("model", model_path, "Model file (or grid file with --grid)")->required();
  c_inspect->add_flag("--grid", as_grid, "Treat the model file as a grid world");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_usage;
  }

  try {
    if (c_check->parsed())
      return cmd_check(model_path, formula_path, formula_inline, as_grid, caps, out_path);
    if (c_translate->parsed())
      return cmd_translate(formula_path, formula_inline, copies_report, out_path);
    if (c_synth->parsed())
      return cmd_synthesize(model_path, formula_path, formula_inline, as_grid, caps, out_path);
    if (c_inspect->parsed()) return cmd_inspect(model_path, as_grid);
    std::cerr << red("error: ") << "no subcommand given\n";
    return exit_usage;
  } catch (const cli_failure& f) {
    std::cerr << red("error: ") << f.message << "\n";
    return f.code;
  } catch (const htwtl::product_too_large& e) {
    std::cerr << red("error: ") << e.what() << "\n";
    return exit_resource;
  } catch (const htwtl::instance_too_large& e) {
    std::cerr << red("error: ") << e.what() << "\n";
    return exit_resource;
  } catch (const htwtl::timeout_error& e) {
    std::cerr << red("error: ") << e.what() << "\n";
    return exit_resource;
  } catch (const htwtl::infeasible& e) {
    std::cerr << red("error: ") << e.what() << "\n";
    return exit_unsat;
  } catch (const htwtl::error& e) {
    std::cerr << red("error: ") << e.what() << "\n";
    return exit_usage;
  } catch (const std::exception& e) {
    std::cerr << red("internal error: ") << e.what() << "\n";
    return exit_resource;
  }
}
