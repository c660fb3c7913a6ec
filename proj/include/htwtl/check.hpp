/// \file check.hpp
/// \brief Bounded model checking over implicit self-composition.
///
/// The checker never materializes the product automaton or the set of
/// bounded traces.  It searches the implicit product of unit-unrolled runs
/// depth-first, and an incremental three-valued evaluator decides the
/// formula on the explored prefixes:
///
///  - The formula is compiled once into a DAG of evaluation cells, one per
///    reachable (subformula, window) pair on ticks 0..H.  Windows are unit
///    ticks, so all time-gap side conditions reduce to index arithmetic and
///    a cell's verdict is a monotone function of the known run prefix: it
///    starts `unknown` and settles to `yes` or `no` exactly once.
///  - Pushing one step of a run marks the affected atomic cells dirty and
///    re-pulls verdicts upward in formula height order; a trail undoes the
///    settled verdicts on backtracking.
///  - A 128-bit XOR fingerprint of the settled-verdict set keys memoization
///    of failed subtrees, merging run prefixes that differ only in
///    formula-irrelevant details.  (Fingerprint equality is probabilistic in
///    the usual hashing-based sense; collisions are astronomically unlikely
///    but not impossible.)
///
/// Quantifier handling: alternation-free prefixes run a plain existential
/// (or dual universal) search over lockstep product steps; exists*forall*
/// prefixes run a two-level game search whose inner level looks for a
/// universal-side refuter of the current existential prefix.  Since a `no`
/// verdict on a prefix holds for every completion, a found refuter soundly
/// dooms the whole existential subtree; at a full-length existential run
/// the inner search is exhaustive, so the final verdict is exact.
///
/// `check_twtl_model` and `enumerate_assignments` provide deliberately
/// naive bounded semantics (explicit product / explicit assignment
/// enumeration) for cross-validation on small instances.

#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <unordered_set>
#include <utility>
#include <vector>

#include "htwtl/ast.hpp"
#include "htwtl/bounds.hpp"
#include "htwtl/classify.hpp"
#include "htwtl/errors.hpp"
#include "htwtl/eval.hpp"
#include "htwtl/tks.hpp"
#include "htwtl/trace.hpp"
#include "htwtl/trajectory.hpp"
#include "htwtl/translate.hpp"

namespace htwtl {

enum class verdict3 : std::uint8_t { unknown, yes, no };

/// Checker knobs.  `k_lim`, when set, fixes the exploration horizon to
/// exactly k_lim - 1 ticks (k_lim events per trace), overriding the formula
/// horizon in either direction.  `threads` is accepted for forward
/// compatibility; execution is single-threaded.
struct check_options {
  std::optional<long long> k_lim;
  long long time_cap_ms = 120000;
  long long state_cap = 10000000;
  std::optional<std::string> mode_override;  ///< "exists-run" | "all-runs" | "game"
  int threads = 1;
};

/// One reported trace assignment: the variable, its duration path through
/// the model (state name + arrival tick), and the induced raw timed trace.
struct assignment_path {
  std::string var;
  std::vector<std::pair<std::string, long long>> steps;
  timed_trace trace;
};

struct check_result {
  bool sat = false;
  std::string mode;              ///< "exists-run" | "all-runs" | "game"
  std::string fragment;          ///< quantifier fragment name
  bool rewritten_async = false;  ///< asynchronous-to-synchronous rewrite applied
  long long horizon = 0;
  std::vector<assignment_path> witness;
  std::vector<assignment_path> counterexample;
  long long traces_examined = 0;  ///< search nodes expanded
  long long time_ms = 0;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/// One evaluation cell: a subformula at a fixed unit-tick window [i, j].
/// `kids` layout: conj {l, r}; neg {l}; within {left at (k, i+hi) for
/// k = i+lo..i+hi}; concat {left at (i, i+t) for t = 0..m-1, then right at
/// (i+t+1, j) for t = 0..m-1} with m = j-i.
struct eval_cell {
  const body_node* node = nullptr;
  long long i = 0, j = 0;
  verdict3 v = verdict3::unknown;
  bool frozen = false;  ///< settled at construction; excluded from fingerprint
  int height = 0;
  int copy = -1;  ///< trace copy for hold cells
  std::vector<int> kids;
  std::vector<int> parents;
};

/// Incremental three-valued evaluation of a copy-tagged body over growing
/// per-copy run prefixes in a unit-unrolled graph.
class prefix_engine {
 public:
  using move_list = std::vector<std::pair<int, int>>;  ///< (copy, node) steps

  prefix_engine(const unrolled_graph& g, const body_ptr& root, int n_copies, long long horizon)
      : g_(&g), n_copies_(n_copies), horizon_(horizon) {
    if (n_copies > 4)
      throw instance_too_large(static_cast<unsigned long long>(n_copies), 4);
    if (horizon < 0) throw std::invalid_argument("prefix_engine: negative horizon");
    paths_.resize(static_cast<std::size_t>(n_copies));
    holds_by_pos_.assign(static_cast<std::size_t>(n_copies),
                         std::vector<std::vector<int>>(static_cast<std::size_t>(horizon + 1)));
    root_ = build(root.get(), 0, horizon);
    dirty_.assign(static_cast<std::size_t>(cells_[static_cast<std::size_t>(root_)].height + 1),
                  {});
    in_dirty_.assign(cells_.size(), 0);
  }

  verdict3 top() const { return cells_[static_cast<std::size_t>(root_)].v; }
  std::pair<std::uint64_t, std::uint64_t> digest() const { return {d0_, d1_}; }
  int n_copies() const { return n_copies_; }
  long long horizon() const { return horizon_; }
  long long path_len(int copy) const {
    return static_cast<long long>(paths_[static_cast<std::size_t>(copy)].size());
  }
  int frontier(int copy) const { return paths_[static_cast<std::size_t>(copy)].back(); }
  const std::vector<int>& path(int copy) const { return paths_[static_cast<std::size_t>(copy)]; }

  /// Advances the listed copies by one node each and re-evaluates.
  void push_tuple(const move_list& moves) {
    undo_.push_back({moves, trail_.size()});
    for (const auto& [c, u] : moves) {
      auto& path = paths_[static_cast<std::size_t>(c)];
      path.push_back(u);
      long long pos = static_cast<long long>(path.size()) - 1;
      if (pos > horizon_) throw std::logic_error("prefix_engine: push beyond horizon");
      for (int id : holds_by_pos_[static_cast<std::size_t>(c)][static_cast<std::size_t>(pos)])
        mark_dirty(id);
    }
    flush();
  }

  void pop_tuple() {
    const undo_rec& rec = undo_.back();
    while (trail_.size() > rec.trail_mark) {
      int id = trail_.back();
      trail_.pop_back();
      auto& c = cells_[static_cast<std::size_t>(id)];
      toggle_digest(id, c.v);
      c.v = verdict3::unknown;
    }
    for (const auto& [c, u] : rec.moves) paths_[static_cast<std::size_t>(c)].pop_back();
    undo_.pop_back();
  }

 private:
  struct undo_rec {
    move_list moves;
    std::size_t trail_mark;
  };

  int node_height(const body_node* n) {
    auto it = heights_.find(n);
    if (it != heights_.end()) return it->second;
    int h = 0;
    switch (n->kind) {
      case node_kind::hold:
        break;
      case node_kind::neg:
      case node_kind::within:
        h = 1 + node_height(n->left.get());
        break;
      case node_kind::conj:
      case node_kind::concat:
        h = 1 + std::max(node_height(n->left.get()), node_height(n->right.get()));
        break;
      default:
        throw std::logic_error("prefix_engine: unexpected node kind");
    }
    heights_[n] = h;
    return h;
  }

  int build(const body_node* n, long long i, long long j) {
    auto key = std::make_tuple(n, i, j);
    if (auto it = index_.find(key); it != index_.end()) return it->second;

    eval_cell c;
    c.node = n;
    c.i = i;
    c.j = j;
    c.height = node_height(n);
    switch (n->kind) {
      case node_kind::hold: {
        const hold_term& h = n->hold;
        if (i + h.duration > j) {
          c.v = verdict3::no;  // window cannot fit the dwell
        } else if (h.atom.prop == k_true_prop) {
          c.v = h.negated ? verdict3::no : verdict3::yes;
        } else {
          c.copy = h.atom.copy;
          if (c.copy < 0 || c.copy >= n_copies_)
            throw std::logic_error("prefix_engine: untagged atom (run hyper_to_twtl)");
        }
        break;
      }
      case node_kind::neg:
        c.kids.push_back(build(n->left.get(), i, j));
        break;
      case node_kind::conj:
        c.kids.push_back(build(n->left.get(), i, j));
        c.kids.push_back(build(n->right.get(), i, j));
        break;
      case node_kind::within:
        if (j - i < n->hi) {
          c.v = verdict3::no;  // time-gap side condition unsatisfiable
        } else {
          for (long long k = i + n->lo; k <= i + n->hi; ++k)
            c.kids.push_back(build(n->left.get(), k, i + n->hi));
        }
        break;
      case node_kind::concat:
        if (i == j) {
          c.v = verdict3::no;  // no split point
        } else {
          for (long long k = i; k < j; ++k) c.kids.push_back(build(n->left.get(), i, k));
          for (long long k = i; k < j; ++k) c.kids.push_back(build(n->right.get(), k + 1, j));
        }
        break;
      case node_kind::within_async:
        throw std::logic_error("prefix_engine: asynchronous window (run async_to_sync)");
      case node_kind::eq_atom:
      case node_kind::neq_atom:
        throw std::logic_error("prefix_engine: family atom (run expand_families)");
    }

    int id = static_cast<int>(cells_.size());
    cells_.push_back(std::move(c));
    index_[key] = id;
    eval_cell& cc = cells_[static_cast<std::size_t>(id)];
    if (cc.v == verdict3::unknown && cc.node->kind != node_kind::hold)
      cc.v = recompute(cc);  // children are final where already settled
    if (cc.v != verdict3::unknown) {
      cc.frozen = true;
      return id;
    }
    if (cc.node->kind == node_kind::hold) {
      for (long long p = i; p <= i + cc.node->hold.duration; ++p)
        holds_by_pos_[static_cast<std::size_t>(cc.copy)][static_cast<std::size_t>(p)].push_back(
            id);
    } else {
      for (int kid : cc.kids) {
        auto& kc = cells_[static_cast<std::size_t>(kid)];
        if (!kc.frozen) kc.parents.push_back(id);
      }
    }
    return id;
  }

  verdict3 recompute(const eval_cell& c) const {
    switch (c.node->kind) {
      case node_kind::hold: {
        const auto& path = paths_[static_cast<std::size_t>(c.copy)];
        const std::string& p = c.node->hold.atom.prop;
        bool all_known = true;
        for (long long n = c.i; n <= c.i + c.node->hold.duration; ++n) {
          if (n >= static_cast<long long>(path.size())) {
            all_known = false;
            continue;
          }
          bool present =
              g_->labels[static_cast<std::size_t>(path[static_cast<std::size_t>(n)])].count(p) >
              0;
          if (present == c.node->hold.negated) return verdict3::no;
        }
        return all_known ? verdict3::yes : verdict3::unknown;
      }
      case node_kind::neg: {
        verdict3 k = cells_[static_cast<std::size_t>(c.kids[0])].v;
        if (k == verdict3::yes) return verdict3::no;
        if (k == verdict3::no) return verdict3::yes;
        return verdict3::unknown;
      }
      case node_kind::conj: {
        verdict3 l = cells_[static_cast<std::size_t>(c.kids[0])].v;
        verdict3 r = cells_[static_cast<std::size_t>(c.kids[1])].v;
        if (l == verdict3::no || r == verdict3::no) return verdict3::no;
        if (l == verdict3::yes && r == verdict3::yes) return verdict3::yes;
        return verdict3::unknown;
      }
      case node_kind::within: {
        bool all_no = true;
        for (int kid : c.kids) {
          verdict3 k = cells_[static_cast<std::size_t>(kid)].v;
          if (k == verdict3::yes) return verdict3::yes;
          all_no &= k == verdict3::no;
        }
        return all_no ? verdict3::no : verdict3::unknown;
      }
      case node_kind::concat: {
        // Earliest-split: scan left windows in split order; the first
        // non-`no` split is committed.
        std::size_t m = c.kids.size() / 2;
        for (std::size_t t = 0; t < m; ++t) {
          verdict3 l = cells_[static_cast<std::size_t>(c.kids[t])].v;
          if (l == verdict3::no) continue;
          if (l == verdict3::unknown) return verdict3::unknown;
          return cells_[static_cast<std::size_t>(c.kids[m + t])].v;
        }
        return verdict3::no;
      }
      default:
        throw std::logic_error("prefix_engine: unexpected node kind");
    }
  }

  void mark_dirty(int id) {
    auto& c = cells_[static_cast<std::size_t>(id)];
    if (c.v != verdict3::unknown || in_dirty_[static_cast<std::size_t>(id)]) return;
    in_dirty_[static_cast<std::size_t>(id)] = 1;
    dirty_[static_cast<std::size_t>(c.height)].push_back(id);
  }

  /// Settles dirty cells bottom-up (parents are strictly taller than their
  /// children, so one ascending sweep suffices).
  void flush() {
    for (std::size_t h = 0; h < dirty_.size(); ++h) {
      auto& bucket = dirty_[h];
      for (std::size_t b = 0; b < bucket.size(); ++b) {
        int id = bucket[b];
        in_dirty_[static_cast<std::size_t>(id)] = 0;
        auto& c = cells_[static_cast<std::size_t>(id)];
        if (c.v != verdict3::unknown) continue;  // settled earlier this flush
        verdict3 nv = recompute(c);
        if (nv == verdict3::unknown) continue;
        c.v = nv;
        toggle_digest(id, nv);
        trail_.push_back(id);
        for (int par : c.parents) mark_dirty(par);
      }
      bucket.clear();
    }
  }

  void toggle_digest(int id, verdict3 v) {
    std::uint64_t z =
        static_cast<std::uint64_t>(id) * 2 + (v == verdict3::yes ? 1 : 0);
    d0_ ^= splitmix64(z ^ 0x6a09e667f3bcc908ull);
    d1_ ^= splitmix64(z ^ 0xbb67ae8584caa73bull);
  }

  const unrolled_graph* g_;
  int n_copies_;
  long long horizon_;
  int root_ = 0;
  std::vector<eval_cell> cells_;
  std::map<std::tuple<const body_node*, long long, long long>, int> index_;
  std::map<const body_node*, int> heights_;
  std::vector<std::vector<int>> paths_;
  std::vector<std::vector<std::vector<int>>> holds_by_pos_;  ///< [copy][position] -> cell ids
  std::vector<std::vector<int>> dirty_;                      ///< by height
  std::vector<char> in_dirty_;
  std::vector<int> trail_;
  std::vector<undo_rec> undo_;
  std::uint64_t d0_ = 0, d1_ = 0;
};

/// Depth-first searches over the implicit product, with memo-on-exit of
/// failed subtrees keyed on (frontier pack, tick, verdict fingerprint).
class bounded_search {
 public:
  bounded_search(const unrolled_graph& g, const body_ptr& root, int n_copies, long long horizon,
                 long long time_cap_ms)
      : g_(g),
        eng_(g, root, n_copies, horizon),
        n_(n_copies),
        H_(horizon),
        deadline_(std::chrono::steady_clock::now() + std::chrono::milliseconds(time_cap_ms)) {
    if (g.n_nodes() > 0xFFFF)
      throw instance_too_large(static_cast<unsigned long long>(g.n_nodes()), 0xFFFF);
  }

  long long nodes() const { return nodes_; }

  /// Existential search: is there a run tuple satisfying the body?
  bool exists_run(std::vector<std::vector<int>>* witness) {
    if (n_ == 0) return eng_.top() == verdict3::yes;
    return for_each_init_tuple(0, n_, [&](const move_list& mv) {
      eng_.push_tuple(mv);
      bool r = er_rec(0, witness);
      eng_.pop_tuple();
      return r;
    });
  }

  /// Universal check: true when every run tuple satisfies the body;
  /// otherwise `violation` receives a violating tuple.
  bool all_runs(std::vector<std::vector<int>>* violation) {
    if (n_ == 0) return eng_.top() == verdict3::yes;
    bool violated = for_each_init_tuple(0, n_, [&](const move_list& mv) {
      eng_.push_tuple(mv);
      bool r = ar_rec(0, violation);
      eng_.pop_tuple();
      return r;
    });
    return !violated;
  }

  /// Game search for exists^ne forall^(n-ne): true when some existential
  /// tuple defeats every universal response.  On failure `counterexample`
  /// receives the first discovered (existential prefix, refuter) pair,
  /// both extended to full length.
  bool game(int n_exists, std::vector<std::vector<int>>* witness,
            std::vector<std::vector<int>>* counterexample) {
    ne_ = n_exists;
    if (n_ == 0) return eng_.top() == verdict3::yes;
    if (ne_ == 0) {
      // No existential copies: the body must hold against every universal
      // response on its own.
      move_list none;
      eng_.push_tuple(none);
      bool r = outer_rec(0, witness);
      eng_.pop_tuple();
      if (!r && counterexample && cex_found_) *counterexample = cex_paths_;
      return r;
    }
    bool sat = for_each_init_tuple(0, ne_, [&](const move_list& mv) {
      eng_.push_tuple(mv);
      bool r = outer_rec(0, witness);
      eng_.pop_tuple();
      return r;
    });
    if (!sat && counterexample && cex_found_) *counterexample = cex_paths_;
    return sat;
  }

 private:
  using move_list = prefix_engine::move_list;
  using memo_key = std::array<std::uint64_t, 4>;
  struct memo_hash {
    std::size_t operator()(const memo_key& k) const {
      std::uint64_t h = 0x1f83d9abfb41bd6bull;
      for (std::uint64_t v : k) h = splitmix64(h ^ v);
      return static_cast<std::size_t>(h);
    }
  };
  using memo_set = std::unordered_set<memo_key, memo_hash>;

  void count_node() {
    if ((++nodes_ & 2047) == 0 && std::chrono::steady_clock::now() > deadline_)
      throw timeout_error("search exceeded the time cap");
  }

  memo_key pack(int lo, int hi, long long tick, long long extra) const {
    std::uint64_t p = 0;
    for (int c = lo; c < hi; ++c)
      p = (p << 16) | static_cast<std::uint64_t>(eng_.frontier(c));
    auto [d0, d1] = eng_.digest();
    return {p, (static_cast<std::uint64_t>(tick) << 16) | static_cast<std::uint64_t>(extra), d0,
            d1};
  }

  template <typename Fn>
  bool for_each_init_tuple(int lo, int hi, Fn&& fn) {
    if (lo >= hi) {
      move_list none;
      return fn(none);
    }
    std::vector<std::size_t> pick(static_cast<std::size_t>(hi - lo), 0);
    for (;;) {
      move_list mv;
      for (int c = lo; c < hi; ++c)
        mv.push_back({c, g_.init[pick[static_cast<std::size_t>(c - lo)]]});
      if (fn(mv)) return true;
      int k = hi - lo - 1;
      while (k >= 0 && ++pick[static_cast<std::size_t>(k)] == g_.init.size())
        pick[static_cast<std::size_t>(k--)] = 0;
      if (k < 0) return false;
    }
  }

  template <typename Fn>
  bool for_each_succ_tuple(int lo, int hi, Fn&& fn) {
    if (lo >= hi) {
      move_list none;
      return fn(none);
    }
    std::vector<std::size_t> pick(static_cast<std::size_t>(hi - lo), 0);
    for (;;) {
      move_list mv;
      for (int c = lo; c < hi; ++c)
        mv.push_back(
            {c, g_.next[static_cast<std::size_t>(eng_.frontier(c))]
                        [pick[static_cast<std::size_t>(c - lo)]]});
      if (fn(mv)) return true;
      int k = hi - lo - 1;
      while (k >= 0 &&
             ++pick[static_cast<std::size_t>(k)] ==
                 g_.next[static_cast<std::size_t>(eng_.frontier(lo + k))].size())
        pick[static_cast<std::size_t>(k--)] = 0;
      if (k < 0) return false;
    }
  }

  std::vector<int> extend_lex(std::vector<int> path) const {
    if (path.empty()) path.push_back(g_.init[0]);
    while (static_cast<long long>(path.size()) < H_ + 1)
      path.push_back(g_.next[static_cast<std::size_t>(path.back())][0]);
    return path;
  }

  void capture(std::vector<std::vector<int>>* out, int lo, int hi) const {
    if (!out) return;
    out->assign(static_cast<std::size_t>(n_), {});
    for (int c = lo; c < hi; ++c)
      (*out)[static_cast<std::size_t>(c)] = extend_lex(eng_.path(c));
  }

  void record_cex() {
    if (cex_found_) return;
    cex_found_ = true;
    cex_paths_.assign(static_cast<std::size_t>(n_), {});
    for (int c = 0; c < n_; ++c)
      cex_paths_[static_cast<std::size_t>(c)] = extend_lex(eng_.path(c));
  }

  bool er_rec(long long tick, std::vector<std::vector<int>>* witness) {
    count_node();
    verdict3 v = eng_.top();
    if (v == verdict3::yes) {
      capture(witness, 0, n_);
      return true;
    }
    if (v == verdict3::no) return false;
    if (tick == H_) throw std::logic_error("internal: undecided verdict at full horizon");
    memo_key key = pack(0, n_, tick, 0);
    if (er_memo_.count(key)) return false;
    bool found = for_each_succ_tuple(0, n_, [&](const move_list& mv) {
      eng_.push_tuple(mv);
      bool r = er_rec(tick + 1, witness);
      eng_.pop_tuple();
      return r;
    });
    if (found) return true;
    er_memo_.insert(key);
    return false;
  }

  bool ar_rec(long long tick, std::vector<std::vector<int>>* violation) {
    count_node();
    verdict3 v = eng_.top();
    if (v == verdict3::no) {
      capture(violation, 0, n_);
      return true;
    }
    if (v == verdict3::yes) return false;
    if (tick == H_) throw std::logic_error("internal: undecided verdict at full horizon");
    memo_key key = pack(0, n_, tick, 0);
    if (ar_memo_.count(key)) return false;
    bool found = for_each_succ_tuple(0, n_, [&](const move_list& mv) {
      eng_.push_tuple(mv);
      bool r = ar_rec(tick + 1, violation);
      eng_.pop_tuple();
      return r;
    });
    if (found) return true;
    ar_memo_.insert(key);
    return false;
  }

  bool outer_rec(long long te, std::vector<std::vector<int>>* witness) {
    count_node();
    verdict3 v = eng_.top();
    if (v == verdict3::yes) {
      // True for every universal completion already.
      capture(witness, 0, ne_);
      return true;
    }
    if (v == verdict3::no) {
      record_cex();
      return false;
    }
    memo_key key = pack(0, ne_, te, 1);
    if (outer_memo_.count(key)) return false;
    if (inner_refute(te)) {
      outer_memo_.insert(key);
      return false;
    }
    if (te == H_) {
      // Full existential run and the exhaustive inner pass found no
      // refuter: every universal completion satisfies the body.
      capture(witness, 0, ne_);
      return true;
    }
    bool found = for_each_succ_tuple(0, ne_, [&](const move_list& mv) {
      eng_.push_tuple(mv);
      bool r = outer_rec(te + 1, witness);
      eng_.pop_tuple();
      return r;
    });
    if (found) return true;
    outer_memo_.insert(key);
    return false;
  }

  /// Looks for a universal-side run making the verdict `no` against the
  /// current existential prefix.  Exploration is capped at the existential
  /// depth `te` (deeper universal knowledge cannot settle a verdict that
  /// still awaits existential positions), which makes the probe cheap early
  /// on and exhaustive exactly at te == H.
  bool inner_refute(long long te) {
    if (ne_ == n_) return false;
    return for_each_init_tuple(ne_, n_, [&](const move_list& mv) {
      eng_.push_tuple(mv);
      bool r = inner_rec(0, te);
      eng_.pop_tuple();
      return r;
    });
  }

  bool inner_rec(long long ta, long long te) {
    count_node();
    verdict3 v = eng_.top();
    if (v == verdict3::no) {
      record_cex();
      return true;
    }
    if (v == verdict3::yes) return false;
    if (ta >= te) return false;  // knowledge cap; see inner_refute
    memo_key key = pack(ne_, n_, ta, te);  // the cap depth is part of the claim
    if (inner_memo_.count(key)) return false;
    bool found = for_each_succ_tuple(ne_, n_, [&](const move_list& mv) {
      eng_.push_tuple(mv);
      bool r = inner_rec(ta + 1, te);
      eng_.pop_tuple();
      return r;
    });
    if (found) return true;
    inner_memo_.insert(key);
    return false;
  }

  const unrolled_graph& g_;
  prefix_engine eng_;
  int n_;
  long long H_;
  std::chrono::steady_clock::time_point deadline_;
  long long nodes_ = 0;
  int ne_ = 0;
  bool cex_found_ = false;
  std::vector<std::vector<int>> cex_paths_;
  memo_set er_memo_, ar_memo_, outer_memo_, inner_memo_;
};

}  // namespace detail

/// Model-checks a quantified formula against a model.  Asynchronous
/// formulas are rewritten to the synchronous fragment and evaluated over
/// the silent (tick-aligned) unit view; synchronous formulas use the
/// label-copying unit view.  The search mode follows the quantifier
/// fragment unless overridden.
inline check_result check(const timed_kripke& m, const hyper_formula& f,
                          const family_map& extra_fams = {}, const check_options& opts = {}) {
  auto t0 = std::chrono::steady_clock::now();
  check_result res;

  fragment fr = classify(f);
  res.fragment = fragment_name(fr);

  bool sync = is_synchronous(f);
  res.rewritten_async = !sync;
  hyper_formula hf = sync ? f : async_to_sync(f);

  family_map fams = merge_families(m.families, extra_fams);
  translation tr = hyper_to_twtl(hf, fams);

  long long H = horizon(tr.formula);
  if (opts.k_lim) {
    if (*opts.k_lim < 1) throw std::invalid_argument("k_lim must be at least 1");
    H = *opts.k_lim - 1;
  }
  res.horizon = H;

  unrolled_graph g = unroll(m, /*silent_intermediates=*/!sync);
  unsigned long long product_size = 1;
  for (int k = 0; k < tr.n_copies; ++k) {
    product_size *= static_cast<unsigned long long>(g.n_nodes());
    if (product_size > static_cast<unsigned long long>(opts.state_cap))
      throw product_too_large(product_size, static_cast<unsigned long long>(opts.state_cap));
  }

  std::string mode;
  if (opts.mode_override) {
    mode = *opts.mode_override;
    if (mode != "exists-run" && mode != "all-runs" && mode != "game")
      throw std::invalid_argument("unknown mode override: " + mode);
  } else {
    switch (fr.kind) {
      case fragment_kind::alternation_free_exists:
        mode = "exists-run";
        break;
      case fragment_kind::alternation_free_forall:
        mode = "all-runs";
        break;
      case fragment_kind::exists_forall:
        mode = "game";
        break;
      case fragment_kind::other:
        throw unsupported_fragment(res.fragment);
    }
  }
  int n_exists = 0;
  for (const auto& q : hf.trace_prefix) {
    if (!q.is_exists) break;
    ++n_exists;
  }

  detail::bounded_search search(g, tr.formula.root, tr.n_copies, H, opts.time_cap_ms);
  std::vector<std::vector<int>> wit, cex;
  bool sat = false;
  if (mode == "exists-run") {
    sat = search.exists_run(&wit);
  } else if (mode == "all-runs") {
    sat = search.all_runs(&cex);
  } else {
    sat = search.game(n_exists, &wit, &cex);
  }
  res.sat = sat;
  res.mode = mode;
  res.traces_examined = search.nodes();

  auto to_assignments = [&](const std::vector<std::vector<int>>& paths, int lo, int hi) {
    std::vector<assignment_path> out;
    for (int c = lo; c < hi; ++c) {
      assignment_path ap;
      ap.var = f.trace_prefix[static_cast<std::size_t>(c)].var;
      for (const auto& [base, tick] : project_run(g, paths[static_cast<std::size_t>(c)])) {
        ap.steps.push_back({m.state_names[static_cast<std::size_t>(base)], tick});
        ap.trace.events.push_back({tick, m.labels[static_cast<std::size_t>(base)]});
      }
      out.push_back(std::move(ap));
    }
    return out;
  };

  // Re-verify every reported run tuple with the reference evaluator before
  // exposing it.
  auto verify_tuple = [&](const std::vector<std::vector<int>>& paths, bool expect) {
    std::vector<timed_trace> views;
    std::vector<const timed_trace*> ptrs;
    for (const auto& p : paths) views.push_back(run_to_trace(g, p));
    for (const auto& v : views) ptrs.push_back(&v);
    timed_trace zipped = zip_traces(ptrs);
    if (eval_twtl(retag_copies(tr.formula.root), zipped, 0, H) != expect)
      throw std::logic_error("internal: reported run tuple failed re-verification");
  };

  if (sat && mode == "exists-run" && !wit.empty()) {
    verify_tuple(wit, true);
    res.witness = to_assignments(wit, 0, tr.n_copies);
  } else if (sat && mode == "game" && !wit.empty()) {
    res.witness = to_assignments(wit, 0, n_exists);
  }
  if (!sat && !cex.empty()) {
    verify_tuple(cex, false);
    res.counterexample = to_assignments(cex, 0, tr.n_copies);
  }

  res.time_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
  return res;
}

/// Naive cross-checker over the explicit synchronous self-composition:
/// enumerates every bounded product trace and evaluates the retagged
/// formula on each.  `exists_mode` selects "some trace satisfies" versus
/// "every trace satisfies".  Small instances only.
inline bool check_twtl_model(const timed_kripke& m, const twtl_formula& f, bool exists_mode,
                             long long horizon_override = -1,
                             unsigned long long trace_cap = 1000000ULL) {
  long long H = horizon_override >= 0 ? horizon_override : horizon(f);
  timed_kripke product = self_compose(m, f.n_copies);
  std::vector<timed_trace> traces = generate_traces(product, H, trace_cap);
  body_ptr root = retag_copies(f.root);
  for (const auto& t : traces) {
    bool ok = eval_twtl(root, t, 0, static_cast<long long>(t.size()) - 1);
    if (exists_mode && ok) return true;
    if (!exists_mode && !ok) return false;
  }
  return !exists_mode;
}

/// Exhaustive bounded semantics for synchronous formulas: enumerates every
/// unit-view trace of length bound+1, assigns traces to the quantifier
/// prefix in every combination (respecting quantifier order and type), and
/// evaluates the body directly.  Entirely independent of the search engine;
/// serves as the cross-validation oracle.
inline bool enumerate_assignments(const timed_kripke& m, const hyper_formula& f,
                                  const family_map& extra_fams, long long bound,
                                  unsigned long long cap = 1000000ULL) {
  if (!is_synchronous(f))
    throw std::logic_error("enumerate_assignments: synchronous formulas only");
  if (bound < 0) throw std::invalid_argument("enumerate_assignments: negative bound");
  family_map fams = merge_families(m.families, extra_fams);
  unrolled_graph g = unroll(m, /*silent_intermediates=*/false);

  std::vector<timed_trace> traces;
  std::vector<int> run;
  auto walk = [&](auto&& self, int node) -> void {
    run.push_back(node);
    if (static_cast<long long>(run.size()) == bound + 1) {
      if (traces.size() >= cap)
        throw instance_too_large(static_cast<unsigned long long>(traces.size()) + 1, cap);
      traces.push_back(run_to_trace(g, run));
    } else {
      for (int nx : g.next[static_cast<std::size_t>(node)]) self(self, nx);
    }
    run.pop_back();
  };
  for (int s : g.init) walk(walk, s);

  unsigned long long combos = 1;
  for (std::size_t q = 0; q < f.trace_prefix.size(); ++q) {
    combos *= traces.size();
    if (combos > cap) throw instance_too_large(combos, cap);
  }

  body_ptr body = expand_families(f.body, fams);
  view_env env;
  auto eval_prefix = [&](auto&& self, std::size_t q) -> bool {
    if (q == f.trace_prefix.size()) return eval_views(body, env, bound + 1, 0, bound);
    bool is_exists = f.trace_prefix[q].is_exists;
    for (const auto& t : traces) {
      env[f.trace_prefix[q].var] = &t;
      if (self(self, q + 1) == is_exists) return is_exists;
    }
    return !is_exists;
  };
  return eval_prefix(eval_prefix, 0);
}

}  // namespace htwtl
