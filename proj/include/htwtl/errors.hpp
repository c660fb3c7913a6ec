/// \file errors.hpp
/// \brief Error taxonomy for the htwtl toolkit.
///
/// Every failure mode surfaced by the library is one of the exception types
/// below.  All of them derive from htwtl::error (itself a
/// std::runtime_error), so callers can catch the whole family at once while
/// the CLI maps individual types onto exit codes.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace htwtl {

/// Base class for all htwtl errors.
class error : public std::runtime_error {
public:
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

/// Formula or model text failed to parse.  Carries the byte offset of the
/// offending token and a description of what was expected there.
class syntax_error : public error {
public:
  syntax_error(std::size_t position, const std::string& expected)
      : error("syntax error at offset " + std::to_string(position) + ": expected " + expected),
        position_(position),
        expected_(expected) {}

  std::size_t position() const { return position_; }
  const std::string& expected() const { return expected_; }

private:
  std::size_t position_;
  std::string expected_;
};

/// An atom references a trace or trajectory variable that is not bound by
/// the quantifier prefix.
class unbound_variable : public error {
public:
  explicit unbound_variable(const std::string& var)
      : error("unbound variable: " + var) {}
};

/// The same variable is quantified twice in a prefix.
class duplicate_quantifier : public error {
public:
  explicit duplicate_quantifier(const std::string& var)
      : error("duplicate quantifier for variable: " + var) {}
};

/// A time interval has a lower bound greater than its upper bound.
class malformed_interval : public error {
public:
  malformed_interval(long long lo, long long hi)
      : error("malformed interval [" + std::to_string(lo) + "," + std::to_string(hi) + "]") {}
};

/// An interval that must be finite is missing an upper bound.
class unbounded_interval : public error {
public:
  explicit unbounded_interval(const std::string& where)
      : error("unbounded interval in " + where) {}
};

/// A model file references a state that was never declared.
class unknown_state : public error {
public:
  explicit unknown_state(const std::string& name)
      : error("unknown state: " + name) {}
};

/// A transition with duration zero was declared (durations are positive).
class zero_duration : public error {
public:
  explicit zero_duration(const std::string& where)
      : error("zero-duration transition: " + where) {}
};

/// The model declares no initial states.
class empty_init : public error {
public:
  empty_init() : error("model has no initial states") {}
};

/// Self-composition would exceed the configured product-size cap.
class product_too_large : public error {
public:
  product_too_large(unsigned long long size, unsigned long long cap)
      : error("product has " + std::to_string(size) + " states, exceeding cap " + std::to_string(cap)) {}
};

/// A grid contains no initial cell.
class no_initial : public error {
public:
  no_initial() : error("grid has no initial cell") {}
};

/// A grid contains no goal cell.
class no_goal : public error {
public:
  no_goal() : error("grid has no goal cell") {}
};

/// Evaluation was requested at trace indices outside the trace.
class index_out_of_range : public error {
public:
  index_out_of_range(std::size_t i, std::size_t j, std::size_t len)
      : error("indices [" + std::to_string(i) + "," + std::to_string(j) + "] out of range for trace of length " + std::to_string(len)) {}
};

/// A time or node budget was exhausted before the check finished.
class timeout_error : public error {
public:
  explicit timeout_error(const std::string& what) : error("timeout: " + what) {}
};

/// The quantifier prefix alternates in a way translation does not support.
class alternation_present : public error {
public:
  alternation_present() : error("quantifier alternation present; formula is not alternation-free") {}
};

/// flatten_exists_forall was called on a formula outside the exists*forall*
/// fragment.
class not_exists_forall : public error {
public:
  not_exists_forall() : error("formula is not in the exists*forall* fragment") {}
};

/// The model checker does not handle this quantifier fragment.
class unsupported_fragment : public error {
public:
  explicit unsupported_fragment(const std::string& what)
      : error("unsupported fragment: " + what) {}
};

/// Exhaustive assignment enumeration would exceed its instance cap.
class instance_too_large : public error {
public:
  instance_too_large(unsigned long long size, unsigned long long cap)
      : error("instance has " + std::to_string(size) + " assignments, exceeding cap " + std::to_string(cap)) {}
};

/// Synthesis found no witness plan within the horizon.
class infeasible : public error {
public:
  explicit infeasible(const std::string& what) : error("infeasible: " + what) {}
};

}  // namespace htwtl
