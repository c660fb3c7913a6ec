/// \file trace.hpp
/// \brief Timed traces, tick-alignment (inv), and the compact trace printer.

#pragma once

#include <set>
#include <string>
#include <vector>

#include "htwtl/ast.hpp"
#include "htwtl/errors.hpp"

namespace htwtl {

/// One observation: a timestamp and the set of propositions true there.
/// An empty proposition set is a silent (epsilon) event.
struct timed_event {
  long long tau = 0;
  std::set<std::string> props;

  friend bool operator==(const timed_event& a, const timed_event& b) {
    return a.tau == b.tau && a.props == b.props;
  }
};

/// A finite timed word with strictly increasing timestamps.
struct timed_trace {
  std::vector<timed_event> events;

  std::size_t size() const { return events.size(); }
  bool empty() const { return events.empty(); }
  const timed_event& operator[](std::size_t n) const { return events[n]; }

  friend bool operator==(const timed_trace& a, const timed_trace& b) {
    return a.events == b.events;
  }
};

/// True when proposition `p` is observed at event `n` (the reserved
/// constant-true proposition holds everywhere, silent events included).
inline bool observes(const timed_event& e, const std::string& p) {
  return p == k_true_prop || e.props.count(p) != 0;
}

/// Tick-aligns a trace: emits one event per integer time 0..end, inserting
/// silent (epsilon) events at times where the input has no observation.
/// `end` defaults to the input's last timestamp; a larger value pads the
/// tail with silent events.  Input timestamps must be non-negative and
/// strictly increasing.
inline timed_trace inv_trace(const timed_trace& t, long long end = -1) {
  long long last = t.empty() ? -1 : t.events.back().tau;
  if (end < 0) end = last < 0 ? 0 : last;
  if (end < last)
    throw std::logic_error("inv_trace: alignment end " + std::to_string(end) +
                           " precedes last timestamp " + std::to_string(last));
  timed_trace out;
  out.events.reserve(static_cast<std::size_t>(end) + 1);
  std::size_t next = 0;
  long long prev = -1;
  for (long long tick = 0; tick <= end; ++tick) {
    timed_event e;
    e.tau = tick;
    if (next < t.events.size() && t.events[next].tau == tick) {
      e.props = t.events[next].props;
      ++next;
    }
    out.events.push_back(std::move(e));
    prev = tick;
  }
  (void)prev;
  if (next < t.events.size())
    throw std::logic_error("inv_trace: input timestamps not strictly increasing");
  return out;
}

/// Compact rendering: each event prints as epsilon for a silent event, the
/// bare proposition for a singleton, or `{p,q}` for larger sets; events are
/// concatenated without separators.  Example: a trace observing b at 3, a
/// at 6, and b at 8 tick-aligns and prints as
///
///   epsilon epsilon epsilon b epsilon epsilon a epsilon b   (no spaces)
inline std::string print_trace(const timed_trace& t) {
  std::string s;
  for (const auto& e : t.events) {
    if (e.props.empty()) {
      s += "\xce\xb5";  // epsilon (UTF-8)
    } else if (e.props.size() == 1) {
      s += *e.props.begin();
    } else {
      s += "{";
      bool first = true;
      for (const auto& p : e.props) {
        if (!first) s += ",";
        s += p;
        first = false;
      }
      s += "}";
    }
  }
  return s;
}

/// Keeps only traces whose every timestamp is strictly below `k_lim`.
inline std::vector<timed_trace> bound_variability(const std::vector<timed_trace>& traces,
                                                  long long k_lim) {
  std::vector<timed_trace> out;
  for (const auto& t : traces) {
    bool ok = true;
    for (const auto& e : t.events)
      if (e.tau >= k_lim) {
        ok = false;
        break;
      }
    if (ok) out.push_back(t);
  }
  return out;
}

}  // namespace htwtl
