/// \file classify.hpp
/// \brief Quantifier-fragment classification.

#pragma once

#include <string>

#include "htwtl/ast.hpp"

namespace htwtl {

enum class fragment_kind {
  alternation_free_exists,  ///< exists* prefix
  alternation_free_forall,  ///< forall* prefix
  exists_forall,            ///< exists+ forall+ prefix
  other,                    ///< anything else (see `switches`)
};

/// Classification of a trace-quantifier prefix.  `switches` counts the
/// number of adjacent quantifier-type changes (0 for alternation-free,
/// 1 for exists*forall* and forall*exists*, ...).
struct fragment {
  fragment_kind kind = fragment_kind::alternation_free_exists;
  int switches = 0;
};

inline fragment classify(const hyper_formula& f) {
  fragment r;
  const auto& p = f.trace_prefix;
  for (std::size_t i = 1; i < p.size(); ++i)
    if (p[i].is_exists != p[i - 1].is_exists) ++r.switches;
  bool any_forall = false, any_exists = false;
  for (const auto& q : p) (q.is_exists ? any_exists : any_forall) = true;
  if (!any_forall) {
    r.kind = fragment_kind::alternation_free_exists;  // includes the empty prefix
  } else if (!any_exists) {
    r.kind = fragment_kind::alternation_free_forall;
  } else if (r.switches == 1 && p.front().is_exists) {
    r.kind = fragment_kind::exists_forall;
  } else {
    r.kind = fragment_kind::other;
  }
  return r;
}

inline std::string fragment_name(const fragment& fr) {
  switch (fr.kind) {
    case fragment_kind::alternation_free_exists:
      return "alternation-free-exists";
    case fragment_kind::alternation_free_forall:
      return "alternation-free-forall";
    case fragment_kind::exists_forall:
      return "exists-forall";
    case fragment_kind::other:
      return "other(" + std::to_string(fr.switches) + " switches)";
  }
  return "";
}

namespace detail {
inline bool has_async_node(const body_ptr& b) {
  switch (b->kind) {
    case node_kind::within_async:
      return true;
    case node_kind::hold:
    case node_kind::eq_atom:
    case node_kind::neq_atom:
      return false;
    case node_kind::neg:
    case node_kind::within:
      return has_async_node(b->left);
    case node_kind::conj:
    case node_kind::concat:
      return has_async_node(b->left) || has_async_node(b->right);
  }
  return false;
}
}  // namespace detail

/// A formula is synchronous when it has no trajectory quantifiers and no
/// asynchronous within-window.
inline bool is_synchronous(const hyper_formula& f) {
  return f.traj_prefix.empty() && !detail::has_async_node(f.body);
}

}  // namespace htwtl
