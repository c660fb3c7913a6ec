/// \file synth.hpp
/// \brief Witness-path synthesis: minimum-completion-time plans.
///
/// Synthesis reduces the formula to its existential core (exists*forall*
/// prefixes are flattened by witness substitution), then sweeps candidate
/// horizons upward: the first horizon at which an existential search
/// succeeds is minimal, because satisfaction at window [0, j] is what the
/// sweep queries directly.  The returned plan is re-verified with the
/// reference evaluator before being handed out.

#pragma once

#include <chrono>
#include <string>
#include <vector>

#include "htwtl/ast.hpp"
#include "htwtl/bounds.hpp"
#include "htwtl/check.hpp"
#include "htwtl/errors.hpp"
#include "htwtl/eval.hpp"
#include "htwtl/tks.hpp"
#include "htwtl/translate.hpp"

namespace htwtl {

/// A synthesized plan: one duration path + trace per existential trace
/// variable, completing at the minimal horizon index `total_time`.
struct witness_plan {
  std::vector<assignment_path> assignments;
  hyper_formula objective;
  long long total_time = 0;
  long long nodes_explored = 0;
  long long time_ms = 0;
};

/// Synthesizes minimum-completion-time witness paths for `f` on `m`.
/// Throws `infeasible` when no witness exists within the formula horizon
/// (or the `k_lim` cap, when tighter) and `timeout_error` past the time
/// cap.
inline witness_plan synthesize(const timed_kripke& m, const hyper_formula& f,
                               const family_map& extra_fams = {},
                               const check_options& opts = {}) {
  auto t0 = std::chrono::steady_clock::now();

  bool sync = is_synchronous(f);
  hyper_formula hf = sync ? f : async_to_sync(f);
  family_map fams = merge_families(m.families, extra_fams);
  hyper_formula flat = flatten_exists_forall(hf, fams);
  translation tr = hyper_to_twtl(flat, fams);

  long long H = horizon(tr.formula);
  if (opts.k_lim) {
    if (*opts.k_lim < 1) throw std::invalid_argument("k_lim must be at least 1");
    H = std::min(H, *opts.k_lim - 1);
  }

  unrolled_graph g = unroll(m, /*silent_intermediates=*/!sync);
  unsigned long long product_size = 1;
  for (int k = 0; k < tr.n_copies; ++k) {
    product_size *= static_cast<unsigned long long>(g.n_nodes());
    if (product_size > static_cast<unsigned long long>(opts.state_cap))
      throw product_too_large(product_size, static_cast<unsigned long long>(opts.state_cap));
  }

  auto deadline = t0 + std::chrono::milliseconds(opts.time_cap_ms);
  witness_plan plan;
  plan.objective = f;

  for (long long j = 0; j <= H; ++j) {
    auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
                         deadline - std::chrono::steady_clock::now())
                         .count();
    if (remaining <= 0) throw timeout_error("synthesis exceeded the time cap");
    detail::bounded_search search(g, tr.formula.root, tr.n_copies, j, remaining);
    std::vector<std::vector<int>> wit;
    bool found = search.exists_run(&wit);
    plan.nodes_explored += search.nodes();
    if (!found) continue;

    if (tr.n_copies > 0) {
      // Re-verify before reporting.
      std::vector<timed_trace> views;
      std::vector<const timed_trace*> ptrs;
      for (const auto& p : wit) views.push_back(run_to_trace(g, p));
      for (const auto& v : views) ptrs.push_back(&v);
      if (!eval_twtl(retag_copies(tr.formula.root), zip_traces(ptrs), 0, j))
        throw std::logic_error("internal: synthesized plan failed re-verification");
    }
    for (int c = 0; c < tr.n_copies; ++c) {
      assignment_path ap;
      ap.var = flat.trace_prefix[static_cast<std::size_t>(c)].var;
      for (const auto& [base, tick] : project_run(g, wit[static_cast<std::size_t>(c)])) {
        ap.steps.push_back({m.state_names[static_cast<std::size_t>(base)], tick});
        ap.trace.events.push_back({tick, m.labels[static_cast<std::size_t>(base)]});
      }
      plan.assignments.push_back(std::move(ap));
    }
    plan.total_time = j;
    plan.time_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
    return plan;
  }
  throw infeasible("no witness within horizon " + std::to_string(H));
}

}  // namespace htwtl
