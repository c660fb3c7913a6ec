/// \file trajectory.hpp
/// \brief Bounded trajectory semantics for asynchronous formulas.
///
/// A trajectory schedules which traces advance at each global tick.  We
/// admit exactly the *timestamp-consistent* schedules: a trace advances at
/// tick k (i.e. between global times k and k+1) precisely when it has an
/// event stamped k+1, so a trace with a gap in its timestamps stutters
/// silently through the gap.  Under this reading the view a trajectory
/// induces on a trace is its tick-aligned (inv_trace) padding, which is the
/// content of the asynchronous-to-synchronous reduction; the bounded
/// enumerator nevertheless enumerates candidate schedules and filters, so
/// equivalence with the rewrite pipeline is a real integration test rather
/// than a tautology of shared code.
///
/// Fairness is approximated on the bounded horizon: every trace variable
/// must advance at least once within the fairness horizon.  Steps where no
/// variable advances are allowed (global time can pass silently for all
/// traces at once); the non-empty-step requirement of the unbounded
/// definition exists to rule out infinite global stuttering, which a
/// bounded horizon rules out by construction.

#pragma once

#include <map>
#include <string>
#include <vector>

#include "htwtl/ast.hpp"
#include "htwtl/errors.hpp"
#include "htwtl/trace.hpp"
#include "htwtl/translate.hpp"

namespace htwtl {

/// A bounded trajectory: step k lists the (zero-based) trace-variable
/// indices that advance between global ticks k and k+1.
struct trajectory {
  std::vector<std::vector<int>> steps;
  long long fairness_horizon = 0;
};

/// True when `tr` is consistent with the assigned traces' timestamps and
/// fair on the horizon (every variable advances at least once).
inline bool trajectory_admissible(const trajectory& tr,
                                  const std::vector<const timed_trace*>& assigned) {
  std::size_t n = assigned.size();
  std::vector<bool> advanced(n, false);
  for (long long k = 0; k < tr.fairness_horizon; ++k) {
    std::vector<bool> scheduled(n, false);
    for (int v : tr.steps[static_cast<std::size_t>(k)]) {
      if (v < 0 || static_cast<std::size_t>(v) >= n) return false;
      scheduled[static_cast<std::size_t>(v)] = true;
      advanced[static_cast<std::size_t>(v)] = true;
    }
    for (std::size_t v = 0; v < n; ++v) {
      bool due = false;  // does trace v have an event stamped k+1?
      for (const auto& e : assigned[v]->events)
        if (e.tau == k + 1) {
          due = true;
          break;
        }
      if (scheduled[v] != due) return false;
    }
  }
  for (std::size_t v = 0; v < n; ++v)
    if (!advanced[v]) return false;
  return true;
}

/// Enumerates all admissible trajectories over the assigned traces by
/// filtering every subset sequence of the given length.  Exponential in the
/// horizon; intended for small bounded instances.
inline std::vector<trajectory> enumerate_trajectories(
    const std::vector<const timed_trace*>& assigned, long long fairness_horizon) {
  std::size_t n = assigned.size();
  std::vector<trajectory> out;
  std::vector<std::vector<int>> subsets;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    std::vector<int> s;
    for (std::size_t v = 0; v < n; ++v)
      if (mask & (1u << v)) s.push_back(static_cast<int>(v));
    subsets.push_back(std::move(s));
  }
  trajectory cur;
  cur.fairness_horizon = fairness_horizon;
  cur.steps.assign(static_cast<std::size_t>(fairness_horizon), {});
  auto rec = [&](auto&& self, long long k) -> void {
    if (k == fairness_horizon) {
      if (trajectory_admissible(cur, assigned)) out.push_back(cur);
      return;
    }
    for (const auto& s : subsets) {
      cur.steps[static_cast<std::size_t>(k)] = s;
      self(self, k + 1);
    }
  };
  rec(rec, 0);
  return out;
}

/// The view a trajectory induces on one assigned trace: one event per
/// global tick 0..horizon, carrying the trace's event when the pointer
/// advanced to it at that tick and silence otherwise.
inline timed_trace trajectory_view(const trajectory& tr, const timed_trace& t, int var) {
  timed_trace out;
  out.events.push_back(
      {0, t.empty() || t.events[0].tau != 0 ? std::set<std::string>{} : t.events[0].props});
  std::size_t ptr = (t.empty() || t.events[0].tau != 0) ? 0 : 1;
  for (long long k = 0; k < tr.fairness_horizon; ++k) {
    bool advanced = false;
    for (int v : tr.steps[static_cast<std::size_t>(k)]) advanced |= v == var;
    timed_event e;
    e.tau = k + 1;
    if (advanced && ptr < t.events.size()) {
      e.props = t.events[ptr].props;
      ++ptr;
    }
    out.events.push_back(std::move(e));
  }
  return out;
}

// --- direct multi-trace evaluation -------------------------------------------

/// Variable environment for direct evaluation of a quantified body: each
/// trace variable maps to a tick-aligned view.  All views must share one
/// length.
using view_env = std::map<std::string, const timed_trace*>;

namespace detail {

inline const timed_trace& view_of(const view_env& env, const atom_ref& a) {
  auto it = env.find(a.trace_var);
  if (it == env.end()) throw unbound_variable(a.trace_var);
  return *it->second;
}

/// Direct satisfaction over tick-aligned views; mirrors the single-trace
/// clauses, plus the asynchronous window:
///
///   [f][lo,hi][tl,th] at [i,j]:  j - i >= hi + th, and some
///   k in [i+lo, i+hi+th] with k <= j satisfies f at [k, i+hi+th].
///
/// The tolerance interval extends the deadline granted to a lagging trace;
/// its lower bound does not constrain satisfaction (a closeness tolerance,
/// not a separation requirement).
inline bool sat_views(const body_ptr& b, const view_env& env, long long len, long long i,
                      long long j) {
  if (i < 0 || j < i || j >= len) return false;
  switch (b->kind) {
    case node_kind::hold: {
      const hold_term& h = b->hold;
      if (i + h.duration > j) return false;
      const timed_trace* t = nullptr;
      if (!(h.atom.prop == k_true_prop && h.atom.trace_var.empty()))
        t = &view_of(env, h.atom);
      for (long long n = i; n <= i + h.duration; ++n) {
        bool present = t == nullptr || observes((*t)[static_cast<std::size_t>(n)], h.atom.prop);
        if (present == h.negated) return false;
      }
      return true;  // views are tick-aligned: the time gap equals j - i >= duration
    }
    case node_kind::conj:
      return sat_views(b->left, env, len, i, j) && sat_views(b->right, env, len, i, j);
    case node_kind::neg:
      return !sat_views(b->left, env, len, i, j);
    case node_kind::concat:
      for (long long k = i; k < j; ++k)
        if (sat_views(b->left, env, len, i, k)) return sat_views(b->right, env, len, k + 1, j);
      return false;
    case node_kind::within: {
      if (j - i < b->hi) return false;
      for (long long k = i + b->lo; k <= i + b->hi && k <= j; ++k)
        if (sat_views(b->left, env, len, k, i + b->hi)) return true;
      return false;
    }
    case node_kind::within_async: {
      long long end = b->hi + b->t_hi;
      if (j - i < end) return false;
      for (long long k = i + b->lo; k <= i + end && k <= j; ++k)
        if (sat_views(b->left, env, len, k, i + end)) return true;
      return false;
    }
    case node_kind::eq_atom:
    case node_kind::neq_atom:
      throw std::logic_error("sat_views: family atom not expanded");
  }
  return false;
}

}  // namespace detail

/// Directly evaluates an expanded quantifier-free body over tick-aligned
/// views at window [i, j].
inline bool eval_views(const body_ptr& b, const view_env& env, long long len, long long i,
                       long long j) {
  return detail::sat_views(b, env, len, i, j);
}

namespace detail {

struct async_checker {
  const std::vector<timed_trace>& traces;
  const hyper_formula& f;
  body_ptr body;  // families expanded
  long long horizon;

  std::vector<const timed_trace*> assigned;  // per trace-prefix position

  bool over_traces(std::size_t q) {
    if (q == f.trace_prefix.size()) return over_trajectories(0, {});
    bool is_exists = f.trace_prefix[q].is_exists;
    for (const auto& t : traces) {
      assigned.push_back(&t);
      bool v = over_traces(q + 1);
      assigned.pop_back();
      if (v == is_exists) return is_exists;
    }
    return !is_exists;
  }

  bool over_trajectories(std::size_t q, std::map<std::string, const trajectory*> chosen) {
    if (q == f.traj_prefix.size()) return eval_body(chosen);
    auto all = enumerate_trajectories(assigned, horizon);
    bool is_exists = f.traj_prefix[q].is_exists;
    for (const auto& tr : all) {
      chosen[f.traj_prefix[q].var] = &tr;
      bool v = over_trajectories(q + 1, chosen);
      if (v == is_exists) return is_exists;
    }
    return !is_exists;
  }

  /// Atoms indexed by a trajectory variable read the view that trajectory
  /// induces; unindexed atoms read the canonical (inv-aligned) view.  Since
  /// admissible trajectories are timestamp-consistent these coincide, but
  /// we build the indexed views from the schedule itself.
  bool eval_body(const std::map<std::string, const trajectory*>& chosen) {
    // Pre-build views per (trajectory variable, trace position).
    std::map<std::string, std::vector<timed_trace>> traj_views;
    for (const auto& [var, tr] : chosen) {
      auto& vs = traj_views[var];
      for (std::size_t p = 0; p < assigned.size(); ++p)
        vs.push_back(trajectory_view(*tr, *assigned[p], static_cast<int>(p)));
    }
    std::vector<timed_trace> canon;
    for (const auto* t : assigned) canon.push_back(inv_trace(*t, horizon));

    // The body may mix trajectory indices; resolve each atom's view by
    // rewriting to a per-(trace,traj) environment key.
    view_env env;
    body_ptr keyed = key_atoms(body, chosen, traj_views, canon, env);
    return eval_views(keyed, env, horizon + 1, 0, horizon);
  }

  /// Renames each atom's trace variable to a unique (trace var, traj var)
  /// key and binds that key to the proper view in `env`.
  body_ptr key_atoms(const body_ptr& b, const std::map<std::string, const trajectory*>& chosen,
                     std::map<std::string, std::vector<timed_trace>>& traj_views,
                     std::vector<timed_trace>& canon, view_env& env) {
    switch (b->kind) {
      case node_kind::hold: {
        hold_term h = b->hold;
        if (!(h.atom.prop == k_true_prop && h.atom.trace_var.empty())) {
          std::size_t pos = trace_position(h.atom.trace_var);
          std::string key = h.atom.trace_var + ":" + h.atom.traj_var;
          if (h.atom.traj_var.empty()) {
            env[key] = &canon[pos];
          } else {
            if (!chosen.count(h.atom.traj_var)) throw unbound_variable(h.atom.traj_var);
            env[key] = &traj_views[h.atom.traj_var][pos];
          }
          h.atom.trace_var = key;
          h.atom.traj_var.clear();
        }
        return make_hold(h.duration, std::move(h.atom), h.negated);
      }
      case node_kind::eq_atom:
      case node_kind::neq_atom:
        throw std::logic_error("async_checker: family atom not expanded");
      case node_kind::neg:
        return make_neg(key_atoms(b->left, chosen, traj_views, canon, env));
      case node_kind::conj:
        return make_conj(key_atoms(b->left, chosen, traj_views, canon, env),
                         key_atoms(b->right, chosen, traj_views, canon, env));
      case node_kind::concat:
        return make_concat(key_atoms(b->left, chosen, traj_views, canon, env),
                           key_atoms(b->right, chosen, traj_views, canon, env));
      case node_kind::within:
        return make_within(key_atoms(b->left, chosen, traj_views, canon, env), b->lo, b->hi);
      case node_kind::within_async:
        return make_within_async(key_atoms(b->left, chosen, traj_views, canon, env), b->lo,
                                 b->hi, b->t_lo, b->t_hi);
    }
    return b;
  }

  std::size_t trace_position(const std::string& var) const {
    for (std::size_t p = 0; p < f.trace_prefix.size(); ++p)
      if (f.trace_prefix[p].var == var) return p;
    throw unbound_variable(var);
  }
};

}  // namespace detail

/// Bounded asynchronous check over an explicit trace set: trace quantifiers
/// range over the set, trajectory quantifiers over the admissible
/// trajectories of the assigned tuple (fairness horizon = `horizon`), and
/// the body is evaluated on the views the trajectory induces.  Family atoms
/// are expanded with `fams` first.
inline bool direct_check_async(const std::vector<timed_trace>& traces, const hyper_formula& f,
                               const family_map& fams, long long horizon) {
  detail::async_checker c{traces, f, expand_families(f.body, fams), horizon, {}};
  return c.over_traces(0);
}

}  // namespace htwtl
