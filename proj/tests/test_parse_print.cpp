/// \file test_parse_print.cpp
/// \brief Parser / pretty-printer round-trips, error positions, and the
///        formula document format.

#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "htwtl/ast.hpp"
#include "htwtl/errors.hpp"
#include "htwtl/parse.hpp"
#include "htwtl/print.hpp"
#include "htwtl/translate.hpp"

namespace {

htwtl::hyper_formula reparse(const htwtl::hyper_formula& f) {
  return htwtl::parse_hyper(htwtl::pretty(f));
}

}  // namespace

TEST_CASE("pretty-print round-trips through the parser", "[parse][print]") {
  const std::vector<std::string> samples = {
      "exists p. [H^1 a@p][0,2]",
      "forall p. [H^0 !a@p][0,0]",
      "exists p. exists q. ([H^1 a@p][0,2] ; [H^2 b@q][1,4])",
      "exists p. forall q. !([H^1 a@p][0,2] & ![H^1 b@q][0,3])",
      "exists p. ([H^1 a@p ; H^1 b@p][2,6] & [H^3 c@p][0,5])",
      "exists p. exists q. [H^1 f@p == H^1 f@q][0,2]",
      "exists p. forall q. [H^2 g@p != H^2 g@q][1,3]",
      "forall p. forall q. A r. E r2. [H^1 a@p:r & H^1 b@q:r2][0,2]",
      "exists p. E r. [H^1 a@p:r][2,5][0,3]",
      "exists p. true",
      "exists p. (true ; [H^1 a@p][0,2])",
  };
  for (const auto& text : samples) {
    CAPTURE(text);
    htwtl::hyper_formula f = htwtl::parse_hyper(text);
    std::string printed = htwtl::pretty(f);
    htwtl::hyper_formula g = htwtl::parse_hyper(printed);
    CHECK(htwtl::equal_formulas(f, g));
    CHECK(htwtl::pretty(g) == printed);
  }
}

TEST_CASE("sugared operators desugar deterministically", "[parse]") {
  // p | q and p -> q are conj/neg trees; the printer shows the core form.
  auto f = htwtl::parse_hyper("exists p. ([H^1 a@p][0,2] | [H^1 b@p][0,2])");
  CHECK(htwtl::pretty(f) ==
        "exists p. !(![H^1 a@p][0,2] & ![H^1 b@p][0,2])");
  auto g = htwtl::parse_hyper("exists p. [H^1 a@p][0,2] -> [H^1 b@p][0,2]");
  CHECK(htwtl::pretty(g) == "exists p. !([H^1 a@p][0,2] & ![H^1 b@p][0,2])");
  CHECK(htwtl::equal_formulas(g, reparse(g)));
}

TEST_CASE("precedence: concat binds tighter than conjunction, implication loosest",
          "[parse]") {
  auto f = htwtl::parse_hyper(
      "exists p. [H^1 a@p][0,2] ; [H^1 b@p][0,2] & [H^1 c@p][0,2]");
  // (a ; b) & c, not a ; (b & c).
  CHECK(htwtl::pretty(f) ==
        "exists p. (([H^1 a@p][0,2] ; [H^1 b@p][0,2]) & [H^1 c@p][0,2])");
  auto g = htwtl::parse_hyper(
      "exists p. [H^1 a@p][0,2] -> [H^1 b@p][0,2] ; [H^1 c@p][0,2]");
  CHECK(htwtl::pretty(g) ==
        "exists p. !([H^1 a@p][0,2] & !([H^1 b@p][0,2] ; [H^1 c@p][0,2]))");
}

TEST_CASE("parse errors carry positions and expectations", "[parse][errors]") {
  auto expect_error = [](const std::string& text, std::size_t pos,
                         const std::string& what) {
    CAPTURE(text);
    try {
      htwtl::parse_hyper(text);
      FAIL("expected syntax_error");
    } catch (const htwtl::syntax_error& e) {
      CHECK(e.position() == pos);
      CHECK(e.expected() == what);
    }
  };
  expect_error("exists p [H^1 a@p][0,2]", 9, "'.'");
  expect_error("exists p. [H^1 a@p][0,", 22, "a natural number");
  expect_error("exists p. [H^1 a@p][0,2", 23, "']'");
  expect_error("exists p. [H^ a@p][0,2]", 14, "a natural number");
  expect_error("exists p. [H^1 a@p == H^1 b@p][0,2]", 22,
               "matching family name 'a' on both sides");
  expect_error("exists p. [H^1 !a@p == H^1 a@p][0,2]", 11,
               "an unnegated hold on the left of == / !=");
}

TEST_CASE("binding errors: duplicate and unbound variables", "[parse][errors]") {
  CHECK_THROWS_AS(htwtl::parse_hyper("exists p. exists p. [H^1 a@p][0,2]"),
                  htwtl::duplicate_quantifier);
  CHECK_THROWS_AS(htwtl::parse_hyper("exists p. A r. A r. [H^1 a@p:r][0,2]"),
                  htwtl::duplicate_quantifier);
  CHECK_THROWS_AS(htwtl::parse_hyper("exists p. [H^1 a@q][0,2]"),
                  htwtl::unbound_variable);
  CHECK_THROWS_AS(htwtl::parse_hyper("exists p. [H^1 a@p:r][0,2]"),
                  htwtl::unbound_variable);
}

TEST_CASE("interval validation", "[parse][errors]") {
  CHECK_THROWS_AS(htwtl::parse_hyper("exists p. [H^1 a@p][5,2]"),
                  htwtl::malformed_interval);
  CHECK_THROWS_AS(htwtl::parse_hyper("exists p. [H^1 a@p:r][0,2][3,1]"),
                  htwtl::malformed_interval);
}

TEST_CASE("formula documents: families, comments, offset preservation",
          "[parse][document]") {
  const std::string text =
      "# leading comment\n"
      "family: F = f1 f2\n"
      "\n"
      "exists p. exists q.   # trailing comment\n"
      "  [H^1 F@p == H^1 F@q][0,2]\n";
  auto doc = htwtl::parse_formula_document(text);
  REQUIRE(doc.families.count("F") == 1);
  CHECK(doc.families.at("F") == std::vector<std::string>{"f1", "f2"});
  CHECK(doc.formula.trace_prefix.size() == 2);

  SECTION("error offsets point into the original document") {
    const std::string broken =
        "# comment\n"
        "family: F = f1 f2\n"
        "exists p. [H^1 F@p][0,]\n";
    try {
      htwtl::parse_formula_document(broken);
      FAIL("expected syntax_error");
    } catch (const htwtl::syntax_error& e) {
      // Comment and family lines are blanked, not removed, so the offset
      // lands exactly on the offending ']' in the original document.
      CHECK(e.position() == broken.find(",]") + 1);
      CHECK(e.expected() == "a natural number");
    }
  }

  SECTION("family lines must be well-formed") {
    CHECK_THROWS_AS(htwtl::parse_formula_document("family: F =\nexists p. true"),
                    htwtl::syntax_error);
  }
}

TEST_CASE("copy-tagged TWTL parses back after translation", "[parse][twtl]") {
  auto doc = htwtl::parse_formula_document(
      "family: F = f1 f2\n"
      "exists p. forall q. ([H^1 F@p == H^1 F@q][0,2] ; [H^1 a@p][1,3])\n");
  auto tr = htwtl::hyper_to_twtl(doc.formula, doc.families);
  std::string printed = htwtl::pretty_twtl(tr.formula);
  htwtl::twtl_formula back = htwtl::parse_twtl(printed);
  CHECK(htwtl::equal_bodies(tr.formula.root, back.root));
  CHECK(back.n_copies == tr.n_copies);
  CHECK(htwtl::pretty_twtl(back) == printed);

  SECTION("copy tags are one-based") {
    CHECK_THROWS_AS(htwtl::parse_twtl("[H^1 a^0][0,2]"), htwtl::syntax_error);
    htwtl::twtl_formula t = htwtl::parse_twtl("[H^1 a^2 & H^1 b][0,2]");
    CHECK(t.n_copies == 2);
  }
}
