/// \file tks.hpp
/// \brief Timed Kripke structures: text format, unit unrolling, grids,
///        self-composition, and trace generation.
///
/// Model text format (one directive per line, `#` starts a comment):
///
///   states: S0 S1 S2
///   init:   S0
///   family: I = I1 I2
///   label:  S1 = a b
///   trans:  S0 -2-> S1
///
/// Transition durations are strictly positive integers.  States with no
/// outgoing transition receive an implicit unit self-loop when loading.

#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "htwtl/errors.hpp"
#include "htwtl/trace.hpp"

namespace htwtl {

struct transition {
  int src = 0;
  long long dur = 1;
  int dst = 0;
};

/// A timed Kripke structure over named states with positive-duration
/// transitions, propositional labels, and declared proposition families.
struct timed_kripke {
  std::vector<std::string> state_names;
  std::map<std::string, int> state_index;
  std::vector<int> init;                          ///< sorted state ids
  std::vector<std::set<std::string>> labels;      ///< per state
  std::vector<std::vector<std::pair<int, long long>>> adj;  ///< per state: (dst, dur)
  std::map<std::string, std::vector<std::string>> families;

  int n_states() const { return static_cast<int>(state_names.size()); }

  std::size_t n_transitions() const {
    std::size_t n = 0;
    for (const auto& a : adj) n += a.size();
    return n;
  }

  int require_state(const std::string& name) const {
    auto it = state_index.find(name);
    if (it == state_index.end()) throw unknown_state(name);
    return it->second;
  }

  /// All propositions appearing in labels or families.
  std::set<std::string> propositions() const {
    std::set<std::string> ps;
    for (const auto& l : labels) ps.insert(l.begin(), l.end());
    for (const auto& [f, members] : families) {
      ps.insert(f);
      ps.insert(members.begin(), members.end());
    }
    return ps;
  }
};

/// Parses the model text format.  Throws syntax_error / unknown_state /
/// zero_duration / empty_init.
inline timed_kripke parse_model(const std::string& text) {
  timed_kripke m;
  struct pending_label {
    std::string state;
    std::set<std::string> props;
  };
  struct pending_trans {
    std::string src, dst;
    long long dur;
    std::size_t pos;
  };
  std::vector<pending_label> plabels;
  std::vector<pending_trans> ptrans;
  std::vector<std::string> pinit;

  std::size_t line_start = 0;
  while (line_start <= text.size()) {
    std::size_t line_end = text.find('\n', line_start);
    if (line_end == std::string::npos) line_end = text.size();
    std::string line = text.substr(line_start, line_end - line_start);
    if (auto hash = line.find('#'); hash != std::string::npos) line = line.substr(0, hash);

    std::vector<std::string> toks;
    std::size_t p = 0;
    while (p < line.size()) {
      while (p < line.size() && std::isspace(static_cast<unsigned char>(line[p]))) ++p;
      std::size_t q = p;
      while (q < line.size() && !std::isspace(static_cast<unsigned char>(line[q]))) ++q;
      if (q > p) toks.push_back(line.substr(p, q - p));
      p = q;
    }
    if (!toks.empty()) {
      const std::string& head = toks[0];
      if (head == "states:") {
        for (std::size_t i = 1; i < toks.size(); ++i) {
          if (m.state_index.count(toks[i]))
            throw syntax_error(line_start, "a fresh state name (duplicate '" + toks[i] + "')");
          m.state_index[toks[i]] = m.n_states();
          m.state_names.push_back(toks[i]);
        }
      } else if (head == "init:") {
        pinit.insert(pinit.end(), toks.begin() + 1, toks.end());
      } else if (head == "family:") {
        if (toks.size() < 4 || toks[2] != "=")
          throw syntax_error(line_start, "family: NAME = member...");
        m.families[toks[1]] = std::vector<std::string>(toks.begin() + 3, toks.end());
      } else if (head == "label:") {
        if (toks.size() < 3 || toks[2] != "=")
          throw syntax_error(line_start, "label: STATE = prop...");
        plabels.push_back({toks[1], std::set<std::string>(toks.begin() + 3, toks.end())});
      } else if (head == "trans:") {
        // trans: SRC -d-> DST
        if (toks.size() != 4) throw syntax_error(line_start, "trans: SRC -d-> DST");
        const std::string& mid = toks[2];
        if (mid.size() < 4 || mid.front() != '-' || mid.substr(mid.size() - 2) != "->")
          throw syntax_error(line_start, "a duration arrow like -2->");
        std::string digits = mid.substr(1, mid.size() - 3);
        if (digits.empty() ||
            digits.find_first_not_of("0123456789") != std::string::npos)
          throw syntax_error(line_start, "a numeric duration in the arrow");
        ptrans.push_back({toks[1], toks[3], std::stoll(digits), line_start});
      } else {
        throw syntax_error(line_start, "states:/init:/family:/label:/trans:");
      }
    }
    if (line_end == text.size()) break;
    line_start = line_end + 1;
  }

  m.labels.assign(m.n_states(), {});
  m.adj.assign(m.n_states(), {});
  for (const auto& pl : plabels) {
    int s = m.require_state(pl.state);
    m.labels[s].insert(pl.props.begin(), pl.props.end());
  }
  for (const auto& name : pinit) m.init.push_back(m.require_state(name));
  std::sort(m.init.begin(), m.init.end());
  m.init.erase(std::unique(m.init.begin(), m.init.end()), m.init.end());
  if (m.init.empty()) throw empty_init();
  for (const auto& pt : ptrans) {
    if (pt.dur == 0) throw zero_duration(pt.src + " -0-> " + pt.dst);
    m.adj[m.require_state(pt.src)].push_back({m.require_state(pt.dst), pt.dur});
  }
  // Implicit unit self-loop on sink states, then a deterministic edge order.
  for (int s = 0; s < m.n_states(); ++s)
    if (m.adj[s].empty()) m.adj[s].push_back({s, 1});
  for (auto& a : m.adj) {
    std::sort(a.begin(), a.end(), [&](const auto& x, const auto& y) {
      if (m.state_names[x.first] != m.state_names[y.first])
        return m.state_names[x.first] < m.state_names[y.first];
      return x.second < y.second;
    });
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
  return m;
}

// --- unit unrolling ---------------------------------------------------------

/// A unit-duration view of a model: every transition of duration d becomes a
/// chain of d unit steps through d-1 intermediate nodes.  In the synchronous
/// view intermediates repeat the source state's label; in the silent view
/// they are unlabeled (epsilon), which tick-aligns runs exactly like
/// inv_trace tick-aligns raw traces.
struct unrolled_graph {
  int n_base = 0;
  std::vector<std::set<std::string>> labels;   ///< per node
  std::vector<std::vector<int>> next;          ///< unit successors, deterministic order
  std::vector<int> base_of;                    ///< base state id, or -1 for intermediates
  std::vector<int> init;                       ///< initial node ids (base nodes)

  int n_nodes() const { return static_cast<int>(labels.size()); }
};

inline unrolled_graph unroll(const timed_kripke& m, bool silent_intermediates) {
  unrolled_graph g;
  g.n_base = m.n_states();
  g.labels.resize(m.n_states());
  g.next.resize(m.n_states());
  g.base_of.resize(m.n_states());
  for (int s = 0; s < m.n_states(); ++s) {
    g.labels[s] = m.labels[s];
    g.base_of[s] = s;
  }
  for (int s = 0; s < m.n_states(); ++s) {
    for (const auto& [dst, dur] : m.adj[s]) {
      int cur = s;
      for (long long step = 1; step < dur; ++step) {
        int mid = g.n_nodes();
        g.labels.push_back(silent_intermediates ? std::set<std::string>{} : m.labels[s]);
        g.next.emplace_back();
        g.base_of.push_back(-1);
        g.next[cur].push_back(mid);
        cur = mid;
      }
      g.next[cur].push_back(dst);
    }
  }
  g.init = m.init;
  return g;
}

/// Projects a unit-unrolled run (node per tick) onto its base states with
/// arrival ticks.
inline std::vector<std::pair<int, long long>> project_run(const unrolled_graph& g,
                                                          const std::vector<int>& run) {
  std::vector<std::pair<int, long long>> out;
  for (std::size_t k = 0; k < run.size(); ++k)
    if (g.base_of[run[k]] >= 0) out.push_back({g.base_of[run[k]], static_cast<long long>(k)});
  return out;
}

/// Builds the raw timed trace of a unit-unrolled run: one event per tick,
/// carrying the node's labels (silent intermediates give epsilon events).
inline timed_trace run_to_trace(const unrolled_graph& g, const std::vector<int>& run) {
  timed_trace t;
  for (std::size_t k = 0; k < run.size(); ++k)
    t.events.push_back({static_cast<long long>(k), g.labels[run[k]]});
  return t;
}

// --- self-composition -------------------------------------------------------

/// n-fold self-composition over the synchronous unit-unrolled view.  States
/// are node tuples, labels are copy-tagged (`p^k`, k starting at 1), and all
/// transitions are unit.  Throws product_too_large if the product exceeds
/// `cap` states.
inline timed_kripke self_compose(const timed_kripke& m, int n_copies,
                                 unsigned long long cap = 10000000ULL) {
  unrolled_graph g = unroll(m, /*silent_intermediates=*/false);
  unsigned long long size = 1;
  for (int k = 0; k < n_copies; ++k) {
    size *= static_cast<unsigned long long>(g.n_nodes());
    if (size > cap) throw product_too_large(size, cap);
  }

  auto node_name = [&](int v) {
    if (g.base_of[v] >= 0) return m.state_names[g.base_of[v]];
    return "u" + std::to_string(v);
  };

  timed_kripke p;
  std::vector<int> tuple(n_copies, 0);
  // Enumerate tuples in row-major order so state ids are deterministic.
  unsigned long long total = size;
  for (unsigned long long idx = 0; idx < total; ++idx) {
    unsigned long long rest = idx;
    for (int k = n_copies - 1; k >= 0; --k) {
      tuple[k] = static_cast<int>(rest % g.n_nodes());
      rest /= g.n_nodes();
    }
    std::string name = "(";
    std::set<std::string> lab;
    for (int k = 0; k < n_copies; ++k) {
      if (k) name += ",";
      name += node_name(tuple[k]);
      for (const auto& pr : g.labels[tuple[k]])
        lab.insert(pr + "^" + std::to_string(k + 1));
    }
    name += ")";
    p.state_index[name] = p.n_states();
    p.state_names.push_back(name);
    p.labels.push_back(std::move(lab));
  }
  p.adj.assign(p.n_states(), {});
  for (unsigned long long idx = 0; idx < total; ++idx) {
    unsigned long long rest = idx;
    for (int k = n_copies - 1; k >= 0; --k) {
      tuple[k] = static_cast<int>(rest % g.n_nodes());
      rest /= g.n_nodes();
    }
    // Cartesian product of unit successors.
    std::vector<std::size_t> pick(n_copies, 0);
    for (;;) {
      unsigned long long dst = 0;
      bool ok = true;
      for (int k = 0; k < n_copies; ++k) {
        if (pick[k] >= g.next[tuple[k]].size()) {
          ok = false;
          break;
        }
        dst = dst * g.n_nodes() + g.next[tuple[k]][pick[k]];
      }
      if (ok) p.adj[idx].push_back({static_cast<int>(dst), 1});
      int k = n_copies - 1;
      while (k >= 0 && ++pick[k] >= g.next[tuple[k]].size()) {
        pick[k] = 0;
        --k;
      }
      if (k < 0) break;
    }
  }
  // Initial tuples: products of initial nodes.
  std::vector<int> iv(n_copies, 0);
  for (;;) {
    unsigned long long idx = 0;
    for (int k = 0; k < n_copies; ++k) idx = idx * g.n_nodes() + g.init[iv[k]];
    p.init.push_back(static_cast<int>(idx));
    int k = n_copies - 1;
    while (k >= 0 && ++iv[k] >= static_cast<int>(g.init.size())) {
      iv[k] = 0;
      --k;
    }
    if (k < 0) break;
  }
  std::sort(p.init.begin(), p.init.end());
  return p;
}

// --- trace generation -------------------------------------------------------

/// Enumerates the raw timed traces of `m` whose cumulative duration stays
/// within `bound` and that are maximal (no outgoing transition fits in the
/// remaining budget).  Events carry base-state labels at their visit times.
/// Deterministic order; throws instance_too_large beyond `cap` traces.
inline std::vector<timed_trace> generate_traces(const timed_kripke& m, long long bound,
                                                unsigned long long cap = 1000000ULL) {
  std::vector<timed_trace> out;
  timed_trace cur;
  auto emit = [&](const timed_trace& t) {
    if (out.size() >= cap) throw instance_too_large(out.size() + 1, cap);
    out.push_back(t);
  };
  struct frame {
    int state;
    long long at;
  };
  // Depth-first over (state, arrival time) with explicit recursion.
  std::vector<int> order(m.init.begin(), m.init.end());
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return m.state_names[a] < m.state_names[b];
  });
  auto rec = [&](auto&& self, int s, long long at) -> void {
    cur.events.push_back({at, m.labels[s]});
    bool extended = false;
    for (const auto& [dst, dur] : m.adj[s]) {
      if (at + dur <= bound) {
        extended = true;
        self(self, dst, at + dur);
      }
    }
    if (!extended) emit(cur);
    cur.events.pop_back();
  };
  for (int s : order) rec(rec, s, 0);
  return out;
}

// --- grids ------------------------------------------------------------------

/// A rectangular grid world.  Cells: 'I' initial, 'G' goal, 'R' region,
/// 'X' obstacle, '.' free.
struct grid_spec {
  int width = 0;
  int height = 0;
  std::vector<std::string> rows;

  char at(int r, int c) const { return rows[r][c]; }
};

/// Parses the grid format: a `WIDTH HEIGHT` header line, then HEIGHT rows of
/// WIDTH cells.  `#` starts a comment.
inline grid_spec parse_grid(const std::string& text) {
  grid_spec g;
  std::vector<std::string> lines;
  std::size_t line_start = 0;
  while (line_start <= text.size()) {
    std::size_t line_end = text.find('\n', line_start);
    if (line_end == std::string::npos) line_end = text.size();
    std::string line = text.substr(line_start, line_end - line_start);
    if (auto hash = line.find('#'); hash != std::string::npos) line = line.substr(0, hash);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.pop_back();
    if (!line.empty()) lines.push_back(line);
    if (line_end == text.size()) break;
    line_start = line_end + 1;
  }
  if (lines.empty()) throw syntax_error(0, "a WIDTH HEIGHT header");
  {
    std::size_t sp = lines[0].find(' ');
    if (sp == std::string::npos) throw syntax_error(0, "a WIDTH HEIGHT header");
    try {
      g.width = std::stoi(lines[0].substr(0, sp));
      g.height = std::stoi(lines[0].substr(sp + 1));
    } catch (const std::exception&) {
      throw syntax_error(0, "numeric WIDTH HEIGHT");
    }
  }
  if (static_cast<int>(lines.size()) != g.height + 1)
    throw syntax_error(0, std::to_string(g.height) + " grid rows");
  for (int r = 0; r < g.height; ++r) {
    const std::string& row = lines[r + 1];
    if (static_cast<int>(row.size()) != g.width)
      throw syntax_error(0, "a row of width " + std::to_string(g.width));
    for (char c : row)
      if (c != 'I' && c != 'G' && c != 'R' && c != 'X' && c != '.')
        throw syntax_error(0, "cells from {I,G,R,X,.}");
    g.rows.push_back(row);
  }
  return g;
}

/// Converts a grid into a model: one state per non-obstacle cell (named
/// c<row>_<col>), unit transitions between 4-neighbors, a unit self-loop on
/// every cell.  The k-th initial cell (row-major) is labeled s0_k and the
/// family s0 collects those labels; regions are labeled r and goals g.
inline timed_kripke grid_to_tks(const grid_spec& g) {
  timed_kripke m;
  std::vector<std::vector<int>> id(g.height, std::vector<int>(g.width, -1));
  int inits = 0;
  for (int r = 0; r < g.height; ++r)
    for (int c = 0; c < g.width; ++c) {
      if (g.at(r, c) == 'X') continue;
      std::string name = "c" + std::to_string(r) + "_" + std::to_string(c);
      id[r][c] = m.n_states();
      m.state_index[name] = m.n_states();
      m.state_names.push_back(name);
      std::set<std::string> lab;
      switch (g.at(r, c)) {
        case 'I': {
          ++inits;
          std::string member = "s0_" + std::to_string(inits);
          lab.insert(member);
          m.families["s0"].push_back(member);
          break;
        }
        case 'G':
          lab.insert("g");
          break;
        case 'R':
          lab.insert("r");
          break;
        default:
          break;
      }
      m.labels.push_back(std::move(lab));
    }
  if (inits == 0) throw no_initial();
  bool any_goal = false;
  for (int r = 0; r < g.height; ++r)
    for (int c = 0; c < g.width; ++c) any_goal |= g.at(r, c) == 'G';
  if (!any_goal) throw no_goal();

  m.adj.assign(m.n_states(), {});
  for (int r = 0; r < g.height; ++r)
    for (int c = 0; c < g.width; ++c) {
      if (id[r][c] < 0) continue;
      if (g.at(r, c) == 'I') m.init.push_back(id[r][c]);
      m.adj[id[r][c]].push_back({id[r][c], 1});
      const int dr[] = {-1, 0, 0, 1};
      const int dc[] = {0, -1, 1, 0};
      for (int d = 0; d < 4; ++d) {
        int nr = r + dr[d], nc = c + dc[d];
        if (nr < 0 || nr >= g.height || nc < 0 || nc >= g.width || id[nr][nc] < 0) continue;
        m.adj[id[r][c]].push_back({id[nr][nc], 1});
      }
    }
  std::sort(m.init.begin(), m.init.end());
  for (auto& a : m.adj) {
    std::sort(a.begin(), a.end(), [&](const auto& x, const auto& y) {
      if (m.state_names[x.first] != m.state_names[y.first])
        return m.state_names[x.first] < m.state_names[y.first];
      return x.second < y.second;
    });
  }
  return m;
}

}  // namespace htwtl
