/// \file eval.hpp
/// \brief Memoized bounded evaluator for plain TWTL over a timed trace.
///
/// Semantics of `sat(f, t, i, j)` over event indices i..j of trace t (all
/// out-of-range situations — i > j, j beyond the trace — evaluate to false):
///
///   H^d a   : i+d <= j, a observed at every event i..i+d,
///             and tau(j) - tau(i) >= d.
///   H^d !a  : as above with "a absent from every event i..i+d".
///   f & g   : both hold on [i, j].
///   !f      : f does not hold on [i, j].
///   f ; g   : let k* be the earliest k in [i, j-1] with sat(f, i, k);
///             no such k means false, otherwise sat(g, k*+1, j).
///             The split is committed: no backtracking over k.
///   [f][lo,hi] : tau(j) - tau(i) >= hi, and some k in [i+lo, i+hi] with
///             k <= j satisfies sat(f, k, i+hi).
///
/// Asynchronous windows and family comparison atoms must be rewritten away
/// (async_to_sync / expand_families) before evaluation; encountering them
/// here is a logic error, not a verdict.

#pragma once

#include <map>
#include <tuple>

#include "htwtl/ast.hpp"
#include "htwtl/errors.hpp"
#include "htwtl/trace.hpp"

namespace htwtl {

/// Evaluation state: the trace under test plus the (node, i, j) memo table.
struct eval_context {
  explicit eval_context(const timed_trace& t) : trace(&t) {}

  const timed_trace* trace;
  std::map<std::tuple<const body_node*, long long, long long>, bool> memo;
};

namespace detail {

inline bool eval_total(eval_context& ctx, const body_ptr& b, long long i, long long j);

inline bool eval_uncached(eval_context& ctx, const body_ptr& b, long long i, long long j) {
  const timed_trace& t = *ctx.trace;
  switch (b->kind) {
    case node_kind::hold: {
      const hold_term& h = b->hold;
      if (i + h.duration > j) return false;
      for (long long n = i; n <= i + h.duration; ++n) {
        bool present = observes(t[static_cast<std::size_t>(n)], h.atom.prop);
        if (present == h.negated) return false;
      }
      return t[static_cast<std::size_t>(j)].tau - t[static_cast<std::size_t>(i)].tau >=
             h.duration;
    }
    case node_kind::conj:
      return eval_total(ctx, b->left, i, j) && eval_total(ctx, b->right, i, j);
    case node_kind::neg:
      return !eval_total(ctx, b->left, i, j);
    case node_kind::concat: {
      for (long long k = i; k < j; ++k)
        if (eval_total(ctx, b->left, i, k)) return eval_total(ctx, b->right, k + 1, j);
      return false;
    }
    case node_kind::within: {
      if (t[static_cast<std::size_t>(j)].tau - t[static_cast<std::size_t>(i)].tau < b->hi)
        return false;
      for (long long k = i + b->lo; k <= i + b->hi && k <= j; ++k)
        if (eval_total(ctx, b->left, k, i + b->hi)) return true;
      return false;
    }
    case node_kind::within_async:
      throw std::logic_error("eval: asynchronous window not rewritten (run async_to_sync)");
    case node_kind::eq_atom:
    case node_kind::neq_atom:
      throw std::logic_error("eval: family atom not expanded (run expand_families)");
  }
  return false;
}

inline bool eval_total(eval_context& ctx, const body_ptr& b, long long i, long long j) {
  if (i < 0 || i > j || j >= static_cast<long long>(ctx.trace->size())) return false;
  auto key = std::make_tuple(b.get(), i, j);
  auto it = ctx.memo.find(key);
  if (it != ctx.memo.end()) return it->second;
  bool v = eval_uncached(ctx, b, i, j);
  ctx.memo.emplace(key, v);
  return v;
}

}  // namespace detail

/// Evaluates `b` over t[i..j].  Indices must satisfy 0 <= i <= j < |t|.
inline bool eval_twtl(const body_ptr& b, const timed_trace& t, long long i, long long j) {
  if (i < 0 || i > j || j >= static_cast<long long>(t.size()))
    throw index_out_of_range(static_cast<std::size_t>(i < 0 ? 0 : i),
                             static_cast<std::size_t>(j < 0 ? 0 : j), t.size());
  eval_context ctx(t);
  return detail::eval_total(ctx, b, i, j);
}

/// Evaluates with an existing context (memo reused across calls on the same
/// trace).
inline bool eval_twtl(eval_context& ctx, const body_ptr& b, long long i, long long j) {
  if (i < 0 || i > j || j >= static_cast<long long>(ctx.trace->size()))
    throw index_out_of_range(static_cast<std::size_t>(i < 0 ? 0 : i),
                             static_cast<std::size_t>(j < 0 ? 0 : j), ctx.trace->size());
  return detail::eval_total(ctx, b, i, j);
}

}  // namespace htwtl
