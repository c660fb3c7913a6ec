/// \file translate.hpp
/// \brief Reductions between formula classes: family-atom expansion,
///        asynchronous-to-synchronous rewriting, quantified-to-plain-TWTL
///        copy tagging, and exists*forall* flattening.

#pragma once

#include <map>
#include <string>
#include <vector>

#include "htwtl/ast.hpp"
#include "htwtl/classify.hpp"
#include "htwtl/errors.hpp"
#include "htwtl/trace.hpp"

namespace htwtl {

using family_map = std::map<std::string, std::vector<std::string>>;

/// Members of a named family.  A name with no declaration is the singleton
/// family containing itself.
inline std::vector<std::string> family_members(const family_map& fams, const std::string& name) {
  auto it = fams.find(name);
  if (it != fams.end()) return it->second;
  return {name};
}

/// Merges family declarations from two sources (e.g. a model file and a
/// formula document).  Conflicting declarations are an error.
inline family_map merge_families(const family_map& a, const family_map& b) {
  family_map out = a;
  for (const auto& [name, members] : b) {
    auto [it, inserted] = out.emplace(name, members);
    if (!inserted && it->second != members)
      throw std::invalid_argument("conflicting declarations for family '" + name + "'");
  }
  return out;
}

// --- family expansion -------------------------------------------------------

namespace detail {

inline body_ptr false_body() { return make_neg(make_true()); }

/// OR-folds a list of bodies; an empty list is false.
inline body_ptr fold_disj(std::vector<body_ptr> parts) {
  if (parts.empty()) return false_body();
  body_ptr acc = parts.front();
  for (std::size_t k = 1; k < parts.size(); ++k) acc = make_disj(acc, parts[k]);
  return acc;
}

inline body_ptr member_pair(const hold_term& lhs, const hold_term& rhs,
                            const std::string& ml, const std::string& mr) {
  atom_ref la = lhs.atom;
  la.prop = ml;
  atom_ref ra = rhs.atom;
  ra.prop = mr;
  return make_conj(make_hold(lhs.duration, std::move(la)), make_hold(rhs.duration, std::move(ra)));
}

}  // namespace detail

/// Expands `==` / `!=` family atoms into their member disjunctions:
///
///   H^d F@x == H^d F@y   becomes   OR_i  (H^d f_i@x & H^d f_i@y)
///   H^d F@x != H^d F@y   becomes   OR_{i != j} (H^d f_i@x & H^d f_j@y)
///
/// A `!=` over a one-member family has no pairs and expands to false.
inline body_ptr expand_families(const body_ptr& b, const family_map& fams) {
  switch (b->kind) {
    case node_kind::hold:
      return b;
    case node_kind::eq_atom: {
      std::vector<body_ptr> parts;
      for (const auto& mem : family_members(fams, b->family))
        parts.push_back(detail::member_pair(b->hold, b->rhs, mem, mem));
      return detail::fold_disj(std::move(parts));
    }
    case node_kind::neq_atom: {
      std::vector<body_ptr> parts;
      const auto members = family_members(fams, b->family);
      for (const auto& ml : members)
        for (const auto& mr : members)
          if (ml != mr) parts.push_back(detail::member_pair(b->hold, b->rhs, ml, mr));
      return detail::fold_disj(std::move(parts));
    }
    case node_kind::neg:
      return make_neg(expand_families(b->left, fams));
    case node_kind::conj:
      return make_conj(expand_families(b->left, fams), expand_families(b->right, fams));
    case node_kind::concat:
      return make_concat(expand_families(b->left, fams), expand_families(b->right, fams));
    case node_kind::within:
      return make_within(expand_families(b->left, fams), b->lo, b->hi);
    case node_kind::within_async:
      return make_within_async(expand_families(b->left, fams), b->lo, b->hi, b->t_lo, b->t_hi);
  }
  return b;
}

// --- asynchronous-to-synchronous rewrite -------------------------------------

namespace detail {

inline body_ptr strip_async(const body_ptr& b) {
  switch (b->kind) {
    case node_kind::hold: {
      hold_term h = b->hold;
      h.atom.traj_var.clear();
      return make_hold(h.duration, std::move(h.atom), h.negated);
    }
    case node_kind::eq_atom:
    case node_kind::neq_atom: {
      hold_term l = b->hold, r = b->rhs;
      l.atom.traj_var.clear();
      r.atom.traj_var.clear();
      return make_cmp_atom(b->kind == node_kind::eq_atom, std::move(l), std::move(r));
    }
    case node_kind::neg:
      return make_neg(strip_async(b->left));
    case node_kind::conj:
      return make_conj(strip_async(b->left), strip_async(b->right));
    case node_kind::concat:
      return make_concat(strip_async(b->left), strip_async(b->right));
    case node_kind::within:
      return make_within(strip_async(b->left), b->lo, b->hi);
    case node_kind::within_async:
      // [psi][lo,hi][tl,th] widens to the synchronous window [lo, hi+th]:
      // the tolerance th extends the deadline granted to the laggard trace.
      return make_within(strip_async(b->left), b->lo, b->hi + b->t_hi);
  }
  return b;
}

}  // namespace detail

/// Rewrites an asynchronous formula into the synchronous fragment intended
/// for evaluation over tick-aligned (inv_trace) views: trajectory
/// quantifiers are dropped, trajectory indices are stripped from atoms, and
/// every `[psi][lo,hi][tl,th]` becomes `[psi'][lo, hi+th]`.  Synchronous
/// windows are left untouched.
inline hyper_formula async_to_sync(const hyper_formula& f) {
  hyper_formula out;
  out.trace_prefix = f.trace_prefix;
  out.body = detail::strip_async(f.body);
  return out;
}

// --- copy tagging (quantified -> plain multi-copy TWTL) ----------------------

/// One fresh-proposition record: translation bookkeeping for subformulas
/// that observe the same proposition family across a pair of traces.
struct fresh_prop {
  std::string name;      ///< M_<i>_<j> (==) or B_<i>_<j> (!=)
  int preorder_index;    ///< stable preorder index of the subformula
  int copy;              ///< trace copy index (zero-based)
  std::string family;    ///< observed family
  std::string trace_var; ///< originating trace variable
};

using fresh_prop_table = std::vector<fresh_prop>;

/// Result of hyper_to_twtl.
struct translation {
  twtl_formula formula;
  fresh_prop_table fresh_props;
  int n_copies = 0;
};

namespace detail {

inline void collect_fresh(const body_ptr& b, int& preorder,
                          const std::map<std::string, int>& copy_of, fresh_prop_table& out) {
  int index = preorder++;
  switch (b->kind) {
    case node_kind::eq_atom:
    case node_kind::neq_atom: {
      const char* base = b->kind == node_kind::eq_atom ? "M" : "B";
      for (const hold_term* side : {&b->hold, &b->rhs}) {
        auto it = copy_of.find(side->atom.trace_var);
        int copy = it == copy_of.end() ? -1 : it->second;
        out.push_back({std::string(base) + "_" + std::to_string(index) + "_" +
                           std::to_string(copy + 1),
                       index, copy, b->family, side->atom.trace_var});
      }
      return;
    }
    case node_kind::hold:
      return;
    case node_kind::neg:
    case node_kind::within:
    case node_kind::within_async:
      collect_fresh(b->left, preorder, copy_of, out);
      return;
    case node_kind::conj:
    case node_kind::concat:
      collect_fresh(b->left, preorder, copy_of, out);
      collect_fresh(b->right, preorder, copy_of, out);
      return;
  }
}

inline body_ptr tag_copies(const body_ptr& b, const std::map<std::string, int>& copy_of) {
  switch (b->kind) {
    case node_kind::hold: {
      hold_term h = b->hold;
      if (!h.atom.trace_var.empty()) {
        auto it = copy_of.find(h.atom.trace_var);
        if (it == copy_of.end()) throw unbound_variable(h.atom.trace_var);
        h.atom.copy = it->second;
        h.atom.trace_var.clear();
        h.atom.traj_var.clear();
      }
      return make_hold(h.duration, std::move(h.atom), h.negated);
    }
    case node_kind::eq_atom:
    case node_kind::neq_atom:
      throw std::logic_error("tag_copies: family atom not expanded (run expand_families)");
    case node_kind::neg:
      return make_neg(tag_copies(b->left, copy_of));
    case node_kind::conj:
      return make_conj(tag_copies(b->left, copy_of), tag_copies(b->right, copy_of));
    case node_kind::concat:
      return make_concat(tag_copies(b->left, copy_of), tag_copies(b->right, copy_of));
    case node_kind::within:
      return make_within(tag_copies(b->left, copy_of), b->lo, b->hi);
    case node_kind::within_async:
      throw std::logic_error("tag_copies: asynchronous window not rewritten (run async_to_sync)");
  }
  return b;
}

}  // namespace detail

/// Translates a synchronous hyper formula into plain multi-copy TWTL: family
/// atoms expand to member disjunctions, and each trace variable becomes the
/// copy index of its position in the quantifier prefix.  The fresh-prop
/// table records, for reports, which subformulas observed a family across a
/// pair of traces (it does not change the formula).
inline translation hyper_to_twtl(const hyper_formula& f, const family_map& fams) {
  if (!is_synchronous(f))
    throw std::logic_error("hyper_to_twtl: formula is asynchronous (run async_to_sync)");
  std::map<std::string, int> copy_of;
  for (std::size_t k = 0; k < f.trace_prefix.size(); ++k)
    copy_of[f.trace_prefix[k].var] = static_cast<int>(k);
  translation out;
  out.n_copies = static_cast<int>(f.trace_prefix.size());
  int preorder = 0;
  detail::collect_fresh(f.body, preorder, copy_of, out.fresh_props);
  out.formula.root = detail::tag_copies(expand_families(f.body, fams), copy_of);
  out.formula.n_copies = out.n_copies;
  return out;
}

/// Renames copy-indexed atoms to tagged plain propositions (`p` on copy k
/// becomes `p^<k+1>`), producing a single-trace formula for evaluation over
/// product traces whose labels are tagged the same way (see self_compose and
/// zip_traces).
inline body_ptr retag_copies(const body_ptr& b) {
  switch (b->kind) {
    case node_kind::hold: {
      hold_term h = b->hold;
      if (h.atom.copy >= 0) {
        h.atom.prop += "^" + std::to_string(h.atom.copy + 1);
        h.atom.copy = -1;
      }
      return make_hold(h.duration, std::move(h.atom), h.negated);
    }
    case node_kind::eq_atom:
    case node_kind::neq_atom:
      throw std::logic_error("retag_copies: family atom not expanded");
    case node_kind::neg:
      return make_neg(retag_copies(b->left));
    case node_kind::conj:
      return make_conj(retag_copies(b->left), retag_copies(b->right));
    case node_kind::concat:
      return make_concat(retag_copies(b->left), retag_copies(b->right));
    case node_kind::within:
      return make_within(retag_copies(b->left), b->lo, b->hi);
    case node_kind::within_async:
      return make_within_async(retag_copies(b->left), b->lo, b->hi, b->t_lo, b->t_hi);
  }
  return b;
}

/// Zips tick-aligned traces into one product trace with copy-tagged labels
/// (`p` from trace k becomes `p^<k+1>`).  All inputs must have identical
/// timestamp sequences.
inline timed_trace zip_traces(const std::vector<const timed_trace*>& traces) {
  timed_trace out;
  if (traces.empty()) return out;
  std::size_t len = traces[0]->size();
  for (const auto* t : traces)
    if (t->size() != len) throw std::invalid_argument("zip_traces: length mismatch");
  for (std::size_t n = 0; n < len; ++n) {
    timed_event e;
    e.tau = traces[0]->events[n].tau;
    for (std::size_t k = 0; k < traces.size(); ++k) {
      if (traces[k]->events[n].tau != e.tau)
        throw std::invalid_argument("zip_traces: timestamp mismatch");
      for (const auto& p : traces[k]->events[n].props)
        e.props.insert(p + "^" + std::to_string(k + 1));
    }
    out.events.push_back(std::move(e));
  }
  return out;
}

// --- exists*forall* flattening ------------------------------------------------

namespace detail {

inline body_ptr subst_trace_vars(const body_ptr& b,
                                 const std::map<std::string, std::string>& rename) {
  auto sub_atom = [&](atom_ref a) {
    auto it = rename.find(a.trace_var);
    if (it != rename.end()) a.trace_var = it->second;
    return a;
  };
  switch (b->kind) {
    case node_kind::hold: {
      hold_term h = b->hold;
      h.atom = sub_atom(h.atom);
      return make_hold(h.duration, std::move(h.atom), h.negated);
    }
    case node_kind::eq_atom:
    case node_kind::neq_atom: {
      hold_term l = b->hold, r = b->rhs;
      l.atom = sub_atom(l.atom);
      r.atom = sub_atom(r.atom);
      return make_cmp_atom(b->kind == node_kind::eq_atom, std::move(l), std::move(r));
    }
    case node_kind::neg:
      return make_neg(subst_trace_vars(b->left, rename));
    case node_kind::conj:
      return make_conj(subst_trace_vars(b->left, rename), subst_trace_vars(b->right, rename));
    case node_kind::concat:
      return make_concat(subst_trace_vars(b->left, rename), subst_trace_vars(b->right, rename));
    case node_kind::within:
      return make_within(subst_trace_vars(b->left, rename), b->lo, b->hi);
    case node_kind::within_async:
      return make_within_async(subst_trace_vars(b->left, rename), b->lo, b->hi, b->t_lo,
                               b->t_hi);
  }
  return b;
}

}  // namespace detail

/// Flattens an exists*forall* formula to an exists-only one by witness
/// substitution: each universal variable ranges over the existential
/// witnesses, so the body is conjoined over every assignment of universal
/// variables to existential ones:
///
///   exists p1. exists p2. forall q. body
///     becomes
///   exists p1. exists p2. (body[q\p1] & body[q\p2])
///
/// Family atoms are expanded before substitution.  An exists-only formula
/// passes through (with families expanded); anything else is rejected.
inline hyper_formula flatten_exists_forall(const hyper_formula& f, const family_map& fams) {
  if (!f.traj_prefix.empty())
    throw std::logic_error("flatten_exists_forall: formula is asynchronous (run async_to_sync)");
  fragment fr = classify(f);
  if (fr.kind != fragment_kind::exists_forall &&
      fr.kind != fragment_kind::alternation_free_exists)
    throw not_exists_forall();

  body_ptr body = expand_families(f.body, fams);
  std::vector<std::string> evars, avars;
  for (const auto& q : f.trace_prefix) (q.is_exists ? evars : avars).push_back(q.var);

  hyper_formula out;
  for (const auto& v : evars) out.trace_prefix.push_back({true, v});
  if (avars.empty()) {
    out.body = body;
    return out;
  }

  // Enumerate assignments of universal variables to existential ones in
  // row-major order (leftmost universal varies slowest).
  std::vector<std::size_t> pick(avars.size(), 0);
  body_ptr acc;
  for (;;) {
    std::map<std::string, std::string> rename;
    for (std::size_t k = 0; k < avars.size(); ++k) rename[avars[k]] = evars[pick[k]];
    body_ptr inst = detail::subst_trace_vars(body, rename);
    acc = acc ? make_conj(std::move(acc), std::move(inst)) : std::move(inst);
    std::size_t k = avars.size();
    while (k > 0 && ++pick[k - 1] == evars.size()) pick[--k] = 0;
    if (k == 0) break;
  }
  out.body = std::move(acc);
  return out;
}

}  // namespace htwtl
