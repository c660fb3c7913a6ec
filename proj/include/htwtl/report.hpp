/// \file report.hpp
/// \brief Structured run reports (versioned JSON).
///
/// Every CLI run can emit one JSON document describing what was done:
/// the command, the formula, the quantifier fragment, the pipeline stages
/// applied, the verdict or plan, and per-stage timings.  Schema version 1.

#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "htwtl/ast.hpp"
#include "htwtl/check.hpp"
#include "htwtl/print.hpp"
#include "htwtl/synth.hpp"
#include "htwtl/trace.hpp"

namespace htwtl {

namespace detail {

inline nlohmann::json assignment_to_json(const assignment_path& ap) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& [state, tick] : ap.steps) steps.push_back({{"state", state}, {"tick", tick}});
  return {{"var", ap.var}, {"path", steps}, {"trace", print_trace(ap.trace)}};
}

inline nlohmann::json assignments_to_json(const std::vector<assignment_path>& aps) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& ap : aps) arr.push_back(assignment_to_json(ap));
  return arr;
}

}  // namespace detail

/// Report skeleton shared by all commands.
inline nlohmann::json make_report(const std::string& command, const std::string& formula,
                                  const std::string& fragment,
                                  const std::vector<std::string>& pipeline,
                                  const std::map<std::string, long long>& timings_ms) {
  nlohmann::json r;
  r["schema"] = 1;
  r["command"] = command;
  r["formula"] = formula;
  r["fragment"] = fragment;
  r["pipeline"] = pipeline;
  r["timings_ms"] = timings_ms;
  return r;
}

/// Model-checking report.
inline nlohmann::json report_check(const std::string& command, const hyper_formula& f,
                                   const check_result& res,
                                   const std::map<std::string, long long>& timings_ms) {
  std::vector<std::string> pipeline;
  if (res.rewritten_async) pipeline.push_back("async-to-sync");
  pipeline.push_back("expand-families");
  pipeline.push_back("copy-tagging");
  pipeline.push_back("bounded-search(" + res.mode + ")");
  nlohmann::json r = make_report(command, pretty(f), res.fragment, pipeline, timings_ms);
  r["verdict"] = {{"status", res.sat ? "SAT" : "UNSAT"},
                  {"mode", res.mode},
                  {"horizon", res.horizon},
                  {"traces_examined", res.traces_examined},
                  {"witness", detail::assignments_to_json(res.witness)},
                  {"counterexample", detail::assignments_to_json(res.counterexample)}};
  return r;
}

/// Synthesis report.
inline nlohmann::json report_plan(const std::string& command, const std::string& fragment,
                                  const witness_plan& plan,
                                  const std::map<std::string, long long>& timings_ms) {
  std::vector<std::string> pipeline = {"flatten-exists-forall", "copy-tagging",
                                       "min-horizon-sweep"};
  nlohmann::json r = make_report(command, pretty(plan.objective), fragment, pipeline, timings_ms);
  r["plan"] = {{"objective", "min-completion-time"},
               {"total_time", plan.total_time},
               {"nodes_explored", plan.nodes_explored},
               {"assignments", detail::assignments_to_json(plan.assignments)}};
  return r;
}

/// Translation report (no verdict: carries the produced formula text).
inline nlohmann::json report_translate(const std::string& command, const hyper_formula& input,
                                       const std::string& fragment,
                                       const std::vector<std::string>& pipeline,
                                       const std::string& output_formula,
                                       const std::map<std::string, long long>& timings_ms) {
  nlohmann::json r = make_report(command, pretty(input), fragment, pipeline, timings_ms);
  r["output"] = output_formula;
  return r;
}

}  // namespace htwtl
