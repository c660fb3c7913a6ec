/// \file print.hpp
/// \brief Pretty-printers for formulas.
///
/// The printer always parenthesizes binary connectives, so its output is
/// unambiguous regardless of operator precedence; parsing a printed formula
/// yields a structurally identical AST.

#pragma once

#include <string>

#include "htwtl/ast.hpp"

namespace htwtl {

namespace detail {

inline std::string atom_suffix(const atom_ref& a) {
  if (a.copy >= 0) return "^" + std::to_string(a.copy + 1);
  std::string s;
  if (!a.trace_var.empty()) {
    s += "@" + a.trace_var;
    if (!a.traj_var.empty()) s += ":" + a.traj_var;
  }
  return s;
}

inline std::string hold_string(const hold_term& h) {
  if (h.atom.prop == k_true_prop && h.atom.trace_var.empty() && h.atom.copy < 0 &&
      h.duration == 0 && !h.negated)
    return "true";
  std::string s = "H^" + std::to_string(h.duration) + " ";
  if (h.negated) s += "!";
  s += h.atom.prop + atom_suffix(h.atom);
  return s;
}

}  // namespace detail

/// Renders a body.  Binary nodes print parenthesized; `within` brackets are
/// self-delimiting.
inline std::string pretty_body(const body_ptr& b) {
  switch (b->kind) {
    case node_kind::hold:
      return detail::hold_string(b->hold);
    case node_kind::eq_atom:
      return "(" + detail::hold_string(b->hold) + " == " + detail::hold_string(b->rhs) + ")";
    case node_kind::neq_atom:
      return "(" + detail::hold_string(b->hold) + " != " + detail::hold_string(b->rhs) + ")";
    case node_kind::neg:
      return "!" + pretty_body(b->left);
    case node_kind::conj:
      return "(" + pretty_body(b->left) + " & " + pretty_body(b->right) + ")";
    case node_kind::concat:
      return "(" + pretty_body(b->left) + " ; " + pretty_body(b->right) + ")";
    case node_kind::within:
      return "[" + pretty_body(b->left) + "][" + std::to_string(b->lo) + "," +
             std::to_string(b->hi) + "]";
    case node_kind::within_async:
      return "[" + pretty_body(b->left) + "][" + std::to_string(b->lo) + "," +
             std::to_string(b->hi) + "][" + std::to_string(b->t_lo) + "," +
             std::to_string(b->t_hi) + "]";
  }
  return "";
}

/// Renders a full formula, quantifier prefix included.
inline std::string pretty(const hyper_formula& f) {
  std::string s;
  for (const auto& q : f.trace_prefix) s += (q.is_exists ? "exists " : "forall ") + q.var + ". ";
  for (const auto& q : f.traj_prefix) s += (q.is_exists ? "E " : "A ") + q.var + ". ";
  return s + pretty_body(f.body);
}

/// Renders a translated TWTL formula (atoms print as prop^copy).
inline std::string pretty_twtl(const twtl_formula& f) { return pretty_body(f.root); }

}  // namespace htwtl
