/// \file ast.hpp
/// \brief Abstract syntax for HyperTWTL formulas.
///
/// A hyper formula is a quantifier prefix (trace quantifiers followed by
/// trajectory quantifiers) over a body built from time-bounded hold
/// operators, boolean connectives, concatenation, and within-windows.
/// Disjunction and implication are desugared at parse time into negation
/// and conjunction, so the body AST has exactly eight node kinds.
///
/// Atom equality / inequality over proposition families (`==` / `!=`) is
/// kept as a dedicated node until translation expands it into the
/// corresponding disjunction over family members.

#pragma once

#include <memory>
#include <string>
#include <vector>

namespace htwtl {

/// Reserved proposition that is true at every trace position (including
/// silent positions).  `hold` of duration zero over this atom is the
/// logical constant true.
inline const std::string k_true_prop = "true";

/// A proposition observed on a quantified trace.
///
/// `copy` is -1 while the formula is still quantified; translation to plain
/// TWTL replaces variable references with zero-based trace-copy indices.
struct atom_ref {
  std::string prop;       ///< proposition (or family, inside ==/!=) name
  std::string trace_var;  ///< bound trace variable; empty for the constant atom
  std::string traj_var;   ///< bound trajectory variable; empty if absent
  int copy = -1;          ///< trace copy index after translation, else -1

  friend bool operator==(const atom_ref& a, const atom_ref& b) {
    return a.prop == b.prop && a.trace_var == b.trace_var && a.traj_var == b.traj_var &&
           a.copy == b.copy;
  }
};

/// One `H^d [!]a` term: the atom must hold (or, negated, must be absent)
/// for `duration` consecutive time units.
struct hold_term {
  long long duration = 0;
  atom_ref atom;
  bool negated = false;

  friend bool operator==(const hold_term& a, const hold_term& b) {
    return a.duration == b.duration && a.atom == b.atom && a.negated == b.negated;
  }
};

enum class node_kind {
  hold,          ///< H^d [!]a
  conj,          ///< left & right
  neg,           ///< ! child
  concat,        ///< left ; right (earliest-split concatenation)
  within,        ///< [ child ][lo,hi]
  within_async,  ///< [ child ][lo,hi][t_lo,t_hi]
  eq_atom,       ///< H^d f@x == H^d f@y over family f
  neq_atom,      ///< H^d f@x != H^d f@y over family f
};

struct body_node;
using body_ptr = std::shared_ptr<const body_node>;

/// A node of the quantifier-free body.  Field use depends on `kind`:
///  - hold:              `hold`
///  - conj:              `left`, `right`
///  - neg:               `left`
///  - concat:            `left`, `right`
///  - within:            `left`, `lo`, `hi`
///  - within_async:      `left`, `lo`, `hi`, `t_lo`, `t_hi`
///  - eq_atom/neq_atom:  `hold` (lhs), `rhs`, `family`
struct body_node {
  node_kind kind;

  hold_term hold;      ///< hold payload / lhs of ==, !=
  hold_term rhs;       ///< rhs of ==, !=
  std::string family;  ///< family name of ==, != (same as hold.atom.prop)

  body_ptr left;
  body_ptr right;

  long long lo = 0;    ///< within window lower bound
  long long hi = 0;    ///< within window upper bound
  long long t_lo = 0;  ///< async tolerance lower bound
  long long t_hi = 0;  ///< async tolerance upper bound
};

/// One trace quantifier (`exists x.` / `forall x.`).
struct trace_quantifier {
  bool is_exists = true;
  std::string var;

  friend bool operator==(const trace_quantifier& a, const trace_quantifier& b) {
    return a.is_exists == b.is_exists && a.var == b.var;
  }
};

/// One trajectory quantifier (`E r.` / `A r.`).
struct traj_quantifier {
  bool is_exists = true;
  std::string var;

  friend bool operator==(const traj_quantifier& a, const traj_quantifier& b) {
    return a.is_exists == b.is_exists && a.var == b.var;
  }
};

/// A closed HyperTWTL formula.
struct hyper_formula {
  std::vector<trace_quantifier> trace_prefix;
  std::vector<traj_quantifier> traj_prefix;
  body_ptr body;
};

/// A plain (single- or multi-copy) TWTL formula produced by translation.
/// Atoms carry `copy` indices in [0, n_copies).
struct twtl_formula {
  body_ptr root;
  int n_copies = 1;
};

// --- constructors ----------------------------------------------------------

inline body_ptr make_hold(long long d, atom_ref atom, bool negated = false) {
  auto n = std::make_shared<body_node>();
  n->kind = node_kind::hold;
  n->hold = hold_term{d, std::move(atom), negated};
  return n;
}

/// The constant-true body (a zero-duration hold over the reserved atom).
inline body_ptr make_true() { return make_hold(0, atom_ref{k_true_prop, "", "", -1}); }

inline body_ptr make_conj(body_ptr l, body_ptr r) {
  auto n = std::make_shared<body_node>();
  n->kind = node_kind::conj;
  n->left = std::move(l);
  n->right = std::move(r);
  return n;
}

inline body_ptr make_neg(body_ptr c) {
  auto n = std::make_shared<body_node>();
  n->kind = node_kind::neg;
  n->left = std::move(c);
  return n;
}

/// Disjunction, desugared: a | b  ==  !(!a & !b).
inline body_ptr make_disj(body_ptr l, body_ptr r) {
  return make_neg(make_conj(make_neg(std::move(l)), make_neg(std::move(r))));
}

/// Implication, desugared: a -> b  ==  !(a & !b).
inline body_ptr make_implies(body_ptr l, body_ptr r) {
  return make_neg(make_conj(std::move(l), make_neg(std::move(r))));
}

inline body_ptr make_concat(body_ptr l, body_ptr r) {
  auto n = std::make_shared<body_node>();
  n->kind = node_kind::concat;
  n->left = std::move(l);
  n->right = std::move(r);
  return n;
}

inline body_ptr make_within(body_ptr c, long long lo, long long hi) {
  auto n = std::make_shared<body_node>();
  n->kind = node_kind::within;
  n->left = std::move(c);
  n->lo = lo;
  n->hi = hi;
  return n;
}

inline body_ptr make_within_async(body_ptr c, long long lo, long long hi, long long t_lo,
                                  long long t_hi) {
  auto n = std::make_shared<body_node>();
  n->kind = node_kind::within_async;
  n->left = std::move(c);
  n->lo = lo;
  n->hi = hi;
  n->t_lo = t_lo;
  n->t_hi = t_hi;
  return n;
}

inline body_ptr make_cmp_atom(bool equal, hold_term lhs, hold_term rhs) {
  auto n = std::make_shared<body_node>();
  n->kind = equal ? node_kind::eq_atom : node_kind::neq_atom;
  n->family = lhs.atom.prop;
  n->hold = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

// --- structural equality ----------------------------------------------------

inline bool equal_bodies(const body_ptr& a, const body_ptr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case node_kind::hold:
      return a->hold == b->hold;
    case node_kind::eq_atom:
    case node_kind::neq_atom:
      return a->family == b->family && a->hold == b->hold && a->rhs == b->rhs;
    case node_kind::neg:
      return equal_bodies(a->left, b->left);
    case node_kind::conj:
    case node_kind::concat:
      return equal_bodies(a->left, b->left) && equal_bodies(a->right, b->right);
    case node_kind::within:
      return a->lo == b->lo && a->hi == b->hi && equal_bodies(a->left, b->left);
    case node_kind::within_async:
      return a->lo == b->lo && a->hi == b->hi && a->t_lo == b->t_lo && a->t_hi == b->t_hi &&
             equal_bodies(a->left, b->left);
  }
  return false;
}

inline bool equal_formulas(const hyper_formula& a, const hyper_formula& b) {
  return a.trace_prefix == b.trace_prefix && a.traj_prefix == b.traj_prefix &&
         equal_bodies(a.body, b.body);
}

}  // namespace htwtl
