/// \file bounds.hpp
/// \brief Time-bound recursions over formula bodies.
///
/// `beta` is the projected time needed to satisfy a formula; `horizon` is
/// the trace length (in time units) the model checker must explore.  On the
/// supported grammar the two recursions coincide case-by-case:
///
///   beta(H^d a)              = d
///   beta(f & g)              = max(beta(f), beta(g))
///   beta(!f)                 = beta(f)
///   beta(f ; g)              = beta(f) + beta(g) + 1
///   beta([f][lo,hi])         = hi
///   beta([f][lo,hi][tl,th])  = hi + th
///
/// Family comparison atoms bound like the disjunction they expand to:
/// max of the two hold durations.

#pragma once

#include <algorithm>

#include "htwtl/ast.hpp"

namespace htwtl {

inline long long beta(const body_ptr& b) {
  switch (b->kind) {
    case node_kind::hold:
      return b->hold.duration;
    case node_kind::eq_atom:
    case node_kind::neq_atom:
      return std::max(b->hold.duration, b->rhs.duration);
    case node_kind::neg:
      return beta(b->left);
    case node_kind::conj:
      return std::max(beta(b->left), beta(b->right));
    case node_kind::concat:
      return beta(b->left) + beta(b->right) + 1;
    case node_kind::within:
      return b->hi;
    case node_kind::within_async:
      return b->hi + b->t_hi;
  }
  return 0;
}

inline long long beta(const hyper_formula& f) { return beta(f.body); }

/// Exploration horizon for bounded checking.  Identical recursion to beta;
/// kept as a separate entry point because callers use it for a different
/// purpose (trace length rather than satisfaction time).
inline long long horizon(const body_ptr& b) { return beta(b); }

inline long long horizon(const hyper_formula& f) { return horizon(f.body); }

inline long long horizon(const twtl_formula& f) { return horizon(f.root); }

}  // namespace htwtl
