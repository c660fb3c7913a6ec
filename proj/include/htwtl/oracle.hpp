/// \file oracle.hpp
/// \brief Reference evaluator: a deliberately plain, unmemoized transcription
///        of the bounded TWTL satisfaction relation.
///
/// This implementation exists to cross-check eval.hpp.  It shares no code
/// with the production evaluator beyond the trace accessors: every clause is
/// written out directly from the satisfaction relation, favoring obviousness
/// over speed.  Keep it dumb.

#pragma once

#include "htwtl/ast.hpp"
#include "htwtl/errors.hpp"
#include "htwtl/trace.hpp"

namespace htwtl {

namespace oracle_detail {

inline bool sat(const body_ptr& f, const timed_trace& t, long long i, long long j) {
  // Out-of-range windows never satisfy anything.
  long long len = static_cast<long long>(t.size());
  if (i < 0 || j < i || j >= len) return false;

  switch (f->kind) {
    case node_kind::hold: {
      long long d = f->hold.duration;
      // All of t[i..i+d] must exist inside the window.
      if (i + d > j) return false;
      bool want = !f->hold.negated;
      for (long long n = i; n <= i + d; ++n)
        if (observes(t[static_cast<std::size_t>(n)], f->hold.atom.prop) != want) return false;
      // The window must span at least d time units.
      return t[static_cast<std::size_t>(j)].tau - t[static_cast<std::size_t>(i)].tau >= d;
    }

    case node_kind::conj:
      return sat(f->left, t, i, j) && sat(f->right, t, i, j);

    case node_kind::neg:
      return !sat(f->left, t, i, j);

    case node_kind::concat: {
      // Earliest prefix satisfying the left operand; the split is final.
      for (long long k = i; k <= j - 1; ++k) {
        if (sat(f->left, t, i, k)) return sat(f->right, t, k + 1, j);
      }
      return false;
    }

    case node_kind::within: {
      long long tau_i = t[static_cast<std::size_t>(i)].tau;
      long long tau_j = t[static_cast<std::size_t>(j)].tau;
      if (tau_j - tau_i < f->hi) return false;
      for (long long k = i + f->lo; k <= i + f->hi; ++k) {
        if (k > j) break;
        if (sat(f->left, t, k, i + f->hi)) return true;
      }
      return false;
    }

    case node_kind::within_async:
      throw std::logic_error("oracle: asynchronous window not rewritten");
    case node_kind::eq_atom:
    case node_kind::neq_atom:
      throw std::logic_error("oracle: family atom not expanded");
  }
  return false;
}

}  // namespace oracle_detail

/// Reference satisfaction check over t[i..j].
inline bool oracle_eval(const body_ptr& f, const timed_trace& t, long long i, long long j) {
  if (i < 0 || i > j || j >= static_cast<long long>(t.size()))
    throw index_out_of_range(static_cast<std::size_t>(i < 0 ? 0 : i),
                             static_cast<std::size_t>(j < 0 ? 0 : j), t.size());
  return oracle_detail::sat(f, t, i, j);
}

}  // namespace htwtl
