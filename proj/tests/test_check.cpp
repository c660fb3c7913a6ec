/// \file test_check.cpp
/// \brief Model-checking engine: mode selection, horizon override, witness
///        and counterexample reporting, and agreement with the exhaustive
///        assignment enumerator.

#include <catch2/catch_amalgamated.hpp>

#include <stdexcept>
#include <string>
#include <vector>

#include "htwtl/check.hpp"
#include "htwtl/parse.hpp"
#include "htwtl/tks.hpp"

namespace {

// Two states; only `s` carries `a`, and `s` can either dwell or fall into
// the `t` sink.  Initial state is `s` alone.
htwtl::timed_kripke model_a() {
  return htwtl::parse_model(
      "states: s t\n"
      "init: s\n"
      "family: F = a b\n"
      "label: s = a\n"
      "label: t = b\n"
      "trans: s -1-> s\n"
      "trans: s -1-> t\n"
      "trans: t -1-> t\n");
}

// Two initial states, only one of which carries `a`; universal claims about
// `a` at the start are falsified by the run from `v`.
htwtl::timed_kripke model_b() {
  return htwtl::parse_model(
      "states: u v\n"
      "init: u v\n"
      "label: u = a\n"
      "trans: u -1-> v\n"
      "trans: v -1-> v\n");
}

// One state labelled with both propositions.
htwtl::timed_kripke model_c() {
  return htwtl::parse_model(
      "states: x\n"
      "init: x\n"
      "label: x = a b\n"
      "trans: x -1-> x\n");
}

}  // namespace

TEST_CASE("mode follows the quantifier fragment", "[check]") {
  auto m = model_a();

  auto r1 = htwtl::check(m, htwtl::parse_hyper("exists p. [H^1 a@p][0,2]"));
  CHECK(r1.mode == "exists-run");
  CHECK(r1.fragment == "alternation-free-exists");

  auto r2 = htwtl::check(m, htwtl::parse_hyper("forall p. [H^0 a@p][0,1]"));
  CHECK(r2.mode == "all-runs");
  CHECK(r2.fragment == "alternation-free-forall");

  auto r3 = htwtl::check(
      m, htwtl::parse_hyper("exists p. forall q. [H^0 F@p == H^0 F@q][0,1]"));
  CHECK(r3.mode == "game");
  CHECK(r3.fragment == "exists-forall");

  CHECK_THROWS_AS(
      htwtl::check(m, htwtl::parse_hyper("forall p. exists q. [H^0 a@p & H^0 a@q][0,1]")),
      htwtl::unsupported_fragment);
}

TEST_CASE("expected verdicts on the dwell/sink model", "[check]") {
  auto m = model_a();

  // s can dwell, so two consecutive `a` events exist.
  CHECK(htwtl::check(m, htwtl::parse_hyper("exists p. [H^1 a@p][0,2]")).sat);

  // Every run starts at s, so `a` occurs within the first window.
  CHECK(htwtl::check(m, htwtl::parse_hyper("forall p. [H^0 a@p][0,1]")).sat);

  // The run s t t never shows two consecutive `a` events.
  auto r = htwtl::check(m, htwtl::parse_hyper("forall p. [H^1 a@p][0,2]"));
  CHECK_FALSE(r.sat);
  REQUIRE(r.counterexample.size() == 1);
  CHECK(r.counterexample[0].var == "p");
  CHECK(r.counterexample[0].steps.front().first == "s");
  CHECK(r.counterexample[0].steps.front().second == 0);

  // All runs agree on `a` at the first event, so the matched-observation
  // game is won by any choice of the existential run.
  auto g = htwtl::check(
      m, htwtl::parse_hyper("exists p. forall q. [H^0 F@p == H^0 F@q][0,1]"));
  CHECK(g.sat);
  REQUIRE(g.witness.size() == 1);
  CHECK(g.witness[0].var == "p");
}

TEST_CASE("witness paths start at an initial state and stay on the clock",
          "[check]") {
  auto m = model_a();
  auto r = htwtl::check(m, htwtl::parse_hyper("exists p. [H^1 a@p][0,2]"));
  REQUIRE(r.sat);
  REQUIRE(r.witness.size() == 1);
  const auto& w = r.witness[0];
  CHECK(w.var == "p");
  REQUIRE_FALSE(w.steps.empty());
  CHECK(w.steps.front().first == "s");
  CHECK(w.steps.front().second == 0);
  CHECK(w.steps.back().second <= r.horizon);
  for (std::size_t k = 1; k < w.steps.size(); ++k)
    CHECK(w.steps[k - 1].second < w.steps[k].second);
  CHECK(w.trace.events.size() == w.steps.size());
  CHECK(r.traces_examined > 0);
  CHECK(r.time_ms >= 0);
}

TEST_CASE("the event-count limit overrides the formula horizon", "[check]") {
  auto m = model_a();
  auto f = htwtl::parse_hyper("exists p. [H^1 a@p][0,2]");

  htwtl::check_options longer;
  longer.k_lim = 10;
  auto r1 = htwtl::check(m, f, {}, longer);
  CHECK(r1.horizon == 9);
  CHECK(r1.sat);

  // Two events span one time unit, below the window's required gap.
  htwtl::check_options shorter;
  shorter.k_lim = 2;
  auto r2 = htwtl::check(m, f, {}, shorter);
  CHECK(r2.horizon == 1);
  CHECK_FALSE(r2.sat);

  htwtl::check_options bad;
  bad.k_lim = 0;
  CHECK_THROWS_AS(htwtl::check(m, f, {}, bad), std::invalid_argument);
}

TEST_CASE("mode overrides swap the verdict semantics", "[check]") {
  auto m = model_b();
  auto f = htwtl::parse_hyper("forall p. [H^0 a@p][0,1]");

  auto all = htwtl::check(m, f);
  CHECK_FALSE(all.sat);
  REQUIRE(all.counterexample.size() == 1);
  CHECK(all.counterexample[0].steps.front().first == "v");

  htwtl::check_options opts;
  opts.mode_override = "exists-run";
  auto some = htwtl::check(m, f, {}, opts);
  CHECK(some.mode == "exists-run");
  CHECK(some.sat);
  REQUIRE(some.witness.size() == 1);
  CHECK(some.witness[0].steps.front().first == "u");

  htwtl::check_options bogus;
  bogus.mode_override = "sideways";
  CHECK_THROWS_AS(htwtl::check(m, f, {}, bogus), std::invalid_argument);
}

TEST_CASE("tiny state caps reject multi-copy products", "[check]") {
  auto m = model_a();
  htwtl::check_options opts;
  opts.state_cap = 3;
  CHECK_THROWS_AS(
      htwtl::check(m, htwtl::parse_hyper("exists p. exists q. [H^0 a@p & H^0 b@q][0,1]"),
                   {}, opts),
      htwtl::product_too_large);
}

TEST_CASE("asynchronous input is rewritten before the search", "[check]") {
  auto m = model_a();
  auto r = htwtl::check(m, htwtl::parse_hyper("exists p. A r. [H^0 a@p:r][0,1][0,2]"));
  CHECK(r.rewritten_async);
  CHECK(r.horizon == 3);
  CHECK(r.sat);
}

TEST_CASE("engine agrees with the exhaustive assignment enumerator", "[check]") {
  const std::vector<htwtl::timed_kripke> models = {model_a(), model_b(), model_c()};
  const std::vector<std::string> formulas = {
      "exists p. [H^1 a@p][0,2]",
      "forall p. [H^0 a@p][0,1]",
      "exists p. forall q. [H^0 F@p == H^0 F@q][0,1]",
      "exists p. exists q. ([H^0 a@p][0,1] ; [H^0 b@q][0,1])",
      "forall p. forall q. ([H^0 a@p][0,1] & [H^0 a@q][0,2])",
      "exists p. forall q. ([H^0 b@q][0,1] ; [H^0 a@p][0,1])",
  };
  htwtl::family_map extra = {{"F", {"a", "b"}}};

  for (std::size_t mi = 0; mi < models.size(); ++mi) {
    for (const auto& text : formulas) {
      CAPTURE(mi, text);
      auto f = htwtl::parse_hyper(text);
      auto res = htwtl::check(models[mi], f, extra);
      bool expected =
          htwtl::enumerate_assignments(models[mi], f, extra, res.horizon);
      CHECK(res.sat == expected);
    }
  }
}

TEST_CASE("engine agrees with the explicit product checker", "[check]") {
  auto m = model_a();
  htwtl::family_map fams = m.families;

  auto e = htwtl::parse_hyper("exists p. [H^1 a@p][0,2]");
  auto te = htwtl::hyper_to_twtl(e, fams);
  CHECK(htwtl::check(m, e).sat ==
        htwtl::check_twtl_model(m, te.formula, /*exists_mode=*/true));

  auto a = htwtl::parse_hyper("forall p. [H^1 a@p][0,2]");
  auto ta = htwtl::hyper_to_twtl(a, fams);
  CHECK(htwtl::check(m, a).sat ==
        htwtl::check_twtl_model(m, ta.formula, /*exists_mode=*/false));
}

TEST_CASE("enumerator rejects asynchronous formulas and bad bounds", "[check]") {
  auto m = model_a();
  CHECK_THROWS_AS(
      htwtl::enumerate_assignments(
          m, htwtl::parse_hyper("exists p. A r. [H^0 a@p:r][0,1][0,2]"), {}, 3),
      std::logic_error);
  CHECK_THROWS_AS(
      htwtl::enumerate_assignments(m, htwtl::parse_hyper("exists p. [H^0 a@p][0,1]"),
                                   {}, -1),
      std::invalid_argument);
}
