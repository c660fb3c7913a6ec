/// \file parse.hpp
/// \brief Recursive-descent parser for the HyperTWTL concrete syntax.
///
/// Grammar (binding strength, loosest to tightest):
///
///   formula   := qpref body
///   qpref     := {("forall" | "exists") IDENT "."} {("A" | "E") IDENT "."}
///   body      := implic
///   implic    := disj ["->" implic]                      (right associative)
///   disj      := conj {"|" conj}
///   conj      := seq {"&" seq}
///   seq       := prefix {";" prefix}                     (left associative)
///   prefix    := "!" prefix | primary
///   primary   := atomform | "true" | "(" body ")" | withinform
///   withinform:= "[" body "]" "[" NAT "," NAT "]" ["[" NAT "," NAT "]"]
///   atomform  := "H" "^" NAT ["!"] IDENT "@" IDENT [":" IDENT]
///                [("==" | "!=") "H" "^" NAT IDENT "@" IDENT [":" IDENT]]
///
/// Note that `;` (concatenation) binds tighter than `&`, and `|` / `->`
/// are desugared during parsing.  Formula *documents* may additionally
/// carry `#` comments and `family:` directive lines; see
/// parse_formula_document().

#pragma once

#include <cctype>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "htwtl/ast.hpp"
#include "htwtl/errors.hpp"

namespace htwtl {

namespace detail {

enum class tok_kind { ident, nat, sym, end };

struct token {
  tok_kind kind = tok_kind::end;
  std::string text;      // ident text or symbol spelling
  long long value = 0;   // nat value
  std::size_t pos = 0;   // byte offset in input
};

class lexer {
public:
  explicit lexer(const std::string& text) : text_(text) { advance(); }

  const token& peek() const { return tok_; }

  token next() {
    token t = tok_;
    advance();
    return t;
  }

private:
  void advance() {
    while (i_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[i_]))) ++i_;
    tok_.pos = i_;
    if (i_ >= text_.size()) {
      tok_ = token{tok_kind::end, "", 0, i_};
      return;
    }
    char c = text_[i_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = i_;
      while (i_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[i_])) || text_[i_] == '_'))
        ++i_;
      tok_ = token{tok_kind::ident, text_.substr(start, i_ - start), 0, start};
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = i_;
      long long v = 0;
      while (i_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i_]))) {
        v = v * 10 + (text_[i_] - '0');
        ++i_;
      }
      tok_ = token{tok_kind::nat, text_.substr(start, i_ - start), v, start};
      return;
    }
    std::size_t start = i_;
    auto two = [&](char a, char b) {
      return c == a && i_ + 1 < text_.size() && text_[i_ + 1] == b;
    };
    if (two('-', '>') || two('=', '=') || two('!', '=')) {
      tok_ = token{tok_kind::sym, text_.substr(i_, 2), 0, start};
      i_ += 2;
      return;
    }
    static const std::string singles = ".&|!;()[],@:^";
    if (singles.find(c) != std::string::npos) {
      tok_ = token{tok_kind::sym, std::string(1, c), 0, start};
      ++i_;
      return;
    }
    throw syntax_error(start, "a token (got '" + std::string(1, c) + "')");
  }

  const std::string& text_;
  std::size_t i_ = 0;
  token tok_;
};

class parser {
public:
  explicit parser(const std::string& text, bool twtl_mode = false)
      : lex_(text), twtl_mode_(twtl_mode) {}

  hyper_formula parse() {
    hyper_formula f;
    parse_prefix(f);
    f.body = parse_body();
    expect_end();
    validate(f);
    return f;
  }

  twtl_formula parse_twtl() {
    twtl_formula f;
    f.root = parse_body();
    expect_end();
    int max_copy = -1;
    max_copy_of(f.root, max_copy);
    f.n_copies = max_copy + 1 > 1 ? max_copy + 1 : 1;
    return f;
  }

private:
  lexer lex_;
  bool twtl_mode_;

  [[noreturn]] void fail(const std::string& expected) {
    throw syntax_error(lex_.peek().pos, expected);
  }

  bool at_sym(const std::string& s) {
    return lex_.peek().kind == tok_kind::sym && lex_.peek().text == s;
  }

  void eat_sym(const std::string& s) {
    if (!at_sym(s)) fail("'" + s + "'");
    lex_.next();
  }

  std::string eat_ident(const std::string& what) {
    if (lex_.peek().kind != tok_kind::ident) fail(what);
    return lex_.next().text;
  }

  long long eat_nat() {
    if (lex_.peek().kind != tok_kind::nat) fail("a natural number");
    return lex_.next().value;
  }

  void expect_end() {
    if (lex_.peek().kind != tok_kind::end) fail("end of formula");
  }

  void parse_prefix(hyper_formula& f) {
    // Trace quantifiers first, then trajectory quantifiers.
    for (;;) {
      const token& t = lex_.peek();
      if (t.kind != tok_kind::ident) return;
      if (t.text == "forall" || t.text == "exists") {
        if (!f.traj_prefix.empty())
          throw syntax_error(t.pos, "trace quantifiers before trajectory quantifiers");
        bool is_exists = t.text == "exists";
        lex_.next();
        std::string var = eat_ident("a trace variable");
        eat_sym(".");
        f.trace_prefix.push_back({is_exists, var});
      } else if (t.text == "A" || t.text == "E") {
        bool is_exists = t.text == "E";
        lex_.next();
        std::string var = eat_ident("a trajectory variable");
        eat_sym(".");
        f.traj_prefix.push_back({is_exists, var});
      } else {
        return;
      }
    }
  }

  body_ptr parse_body() { return parse_implic(); }

  body_ptr parse_implic() {
    body_ptr l = parse_disj();
    if (at_sym("->")) {
      lex_.next();
      return make_implies(std::move(l), parse_implic());
    }
    return l;
  }

  body_ptr parse_disj() {
    body_ptr l = parse_conj();
    while (at_sym("|")) {
      lex_.next();
      l = make_disj(std::move(l), parse_conj());
    }
    return l;
  }

  body_ptr parse_conj() {
    body_ptr l = parse_seq();
    while (at_sym("&")) {
      lex_.next();
      l = make_conj(std::move(l), parse_seq());
    }
    return l;
  }

  body_ptr parse_seq() {
    body_ptr l = parse_prefix_op();
    while (at_sym(";")) {
      lex_.next();
      l = make_concat(std::move(l), parse_prefix_op());
    }
    return l;
  }

  body_ptr parse_prefix_op() {
    if (at_sym("!")) {
      lex_.next();
      return make_neg(parse_prefix_op());
    }
    return parse_primary();
  }

  body_ptr parse_primary() {
    const token& t = lex_.peek();
    if (t.kind == tok_kind::ident && t.text == "true") {
      lex_.next();
      return make_true();
    }
    if (t.kind == tok_kind::ident && t.text == "H") return parse_atomform();
    if (at_sym("(")) {
      lex_.next();
      body_ptr b = parse_body();
      eat_sym(")");
      return b;
    }
    if (at_sym("[")) return parse_withinform();
    fail("an atom, 'true', '(', '[', or '!'");
  }

  body_ptr parse_withinform() {
    eat_sym("[");
    body_ptr b = parse_body();
    eat_sym("]");
    eat_sym("[");
    std::size_t ipos = lex_.peek().pos;
    long long lo = eat_nat();
    eat_sym(",");
    long long hi = eat_nat();
    eat_sym("]");
    if (lo > hi) throw malformed_interval(lo, hi);
    if (!at_sym("[")) return make_within(std::move(b), lo, hi);
    lex_.next();
    ipos = lex_.peek().pos;
    long long t_lo = eat_nat();
    eat_sym(",");
    long long t_hi = eat_nat();
    eat_sym("]");
    (void)ipos;
    if (t_lo > t_hi) throw malformed_interval(t_lo, t_hi);
    return make_within_async(std::move(b), lo, hi, t_lo, t_hi);
  }

  hold_term parse_hold_term(bool allow_negation) {
    if (!(lex_.peek().kind == tok_kind::ident && lex_.peek().text == "H")) fail("'H'");
    lex_.next();
    eat_sym("^");
    long long d = eat_nat();
    bool negated = false;
    if (allow_negation && at_sym("!")) {
      lex_.next();
      negated = true;
    }
    atom_ref a;
    a.prop = eat_ident("a proposition name");
    if (twtl_mode_ && at_sym("^")) {
      lex_.next();
      std::size_t cpos = lex_.peek().pos;
      long long copy = eat_nat();
      if (copy < 1) throw syntax_error(cpos, "a 1-based copy tag");
      a.copy = static_cast<int>(copy - 1);
      return hold_term{d, std::move(a), negated};
    }
    if (twtl_mode_ && !at_sym("@")) return hold_term{d, std::move(a), negated};
    eat_sym("@");
    a.trace_var = eat_ident("a trace variable");
    if (at_sym(":")) {
      lex_.next();
      a.traj_var = eat_ident("a trajectory variable");
    }
    return hold_term{d, std::move(a), negated};
  }

  body_ptr parse_atomform() {
    std::size_t pos = lex_.peek().pos;
    hold_term lhs = parse_hold_term(/*allow_negation=*/true);
    bool eq = at_sym("==");
    bool neq = at_sym("!=");
    if (!eq && !neq) return make_hold(lhs.duration, std::move(lhs.atom), lhs.negated);
    if (lhs.negated) throw syntax_error(pos, "an unnegated hold on the left of == / !=");
    lex_.next();
    std::size_t rpos = lex_.peek().pos;
    hold_term rhs = parse_hold_term(/*allow_negation=*/false);
    if (rhs.atom.prop != lhs.atom.prop)
      throw syntax_error(rpos, "matching family name '" + lhs.atom.prop + "' on both sides");
    return make_cmp_atom(eq, std::move(lhs), std::move(rhs));
  }

  // Static checks: no duplicate quantifiers, every atom variable bound.
  void validate(const hyper_formula& f) {
    std::set<std::string> trace_vars, traj_vars;
    for (const auto& q : f.trace_prefix) {
      if (!trace_vars.insert(q.var).second) throw duplicate_quantifier(q.var);
    }
    for (const auto& q : f.traj_prefix) {
      if (traj_vars.count(q.var) || trace_vars.count(q.var)) throw duplicate_quantifier(q.var);
      traj_vars.insert(q.var);
    }
    check_bound(f.body, trace_vars, traj_vars);
  }

  static void check_atom(const atom_ref& a, const std::set<std::string>& trace_vars,
                         const std::set<std::string>& traj_vars) {
    if (a.prop == k_true_prop && a.trace_var.empty()) return;
    if (!trace_vars.count(a.trace_var)) throw unbound_variable(a.trace_var);
    if (!a.traj_var.empty() && !traj_vars.count(a.traj_var)) throw unbound_variable(a.traj_var);
  }

  static void max_copy_of(const body_ptr& b, int& max_copy) {
    switch (b->kind) {
      case node_kind::eq_atom:
      case node_kind::neq_atom:
        if (b->rhs.atom.copy > max_copy) max_copy = b->rhs.atom.copy;
        [[fallthrough]];
      case node_kind::hold:
        if (b->hold.atom.copy > max_copy) max_copy = b->hold.atom.copy;
        return;
      case node_kind::neg:
      case node_kind::within:
      case node_kind::within_async:
        max_copy_of(b->left, max_copy);
        return;
      case node_kind::conj:
      case node_kind::concat:
        max_copy_of(b->left, max_copy);
        max_copy_of(b->right, max_copy);
        return;
    }
  }

  static void check_bound(const body_ptr& b, const std::set<std::string>& trace_vars,
                          const std::set<std::string>& traj_vars) {
    switch (b->kind) {
      case node_kind::hold:
        check_atom(b->hold.atom, trace_vars, traj_vars);
        return;
      case node_kind::eq_atom:
      case node_kind::neq_atom:
        check_atom(b->hold.atom, trace_vars, traj_vars);
        check_atom(b->rhs.atom, trace_vars, traj_vars);
        return;
      case node_kind::neg:
      case node_kind::within:
      case node_kind::within_async:
        check_bound(b->left, trace_vars, traj_vars);
        return;
      case node_kind::conj:
      case node_kind::concat:
        check_bound(b->left, trace_vars, traj_vars);
        check_bound(b->right, trace_vars, traj_vars);
        return;
    }
  }
};

}  // namespace detail

/// Parses a bare HyperTWTL formula (no comments or directives).
inline hyper_formula parse_hyper(const std::string& text) {
  return detail::parser(text).parse();
}

/// Parses a copy-tagged TWTL body as printed by pretty_twtl(): atoms
/// carry `^k` copy tags (1-based) instead of `@var` bindings.  No
/// quantifier prefix is accepted; n_copies is the highest tag seen.
inline twtl_formula parse_twtl(const std::string& text) {
  return detail::parser(text, /*twtl_mode=*/true).parse_twtl();
}

/// A formula document: optional `family:` directives plus one formula.
struct formula_document {
  hyper_formula formula;
  std::map<std::string, std::vector<std::string>> families;
};

/// Parses a formula document.  Documents may contain `#` comments (to end
/// of line), blank lines, and `family: F = m1 m2 ...` directive lines; the
/// remaining text must be a single formula (it may span several lines).
inline formula_document parse_formula_document(const std::string& text) {
  formula_document doc;
  std::string formula_text;
  std::size_t line_start = 0;
  while (line_start <= text.size()) {
    std::size_t line_end = text.find('\n', line_start);
    if (line_end == std::string::npos) line_end = text.size();
    std::string line = text.substr(line_start, line_end - line_start);
    // Blank out comments (and below, directive lines) instead of deleting
    // them so that error offsets in the assembled formula text coincide with
    // offsets in the original document.
    if (auto hash = line.find('#'); hash != std::string::npos)
      for (std::size_t k = hash; k < line.size(); ++k) line[k] = ' ';
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first != std::string::npos && line.compare(first, 7, "family:") == 0) {
      std::string rest = line.substr(first + 7);
      auto eq = rest.find('=');
      if (eq == std::string::npos)
        throw syntax_error(line_start + first, "'=' in family directive");
      auto trim = [](std::string s) {
        std::size_t a = s.find_first_not_of(" \t\r");
        if (a == std::string::npos) return std::string();
        std::size_t b = s.find_last_not_of(" \t\r");
        return s.substr(a, b - a + 1);
      };
      std::string name = trim(rest.substr(0, eq));
      if (name.empty()) throw syntax_error(line_start + first, "a family name");
      std::vector<std::string> members;
      std::string mems = rest.substr(eq + 1);
      std::size_t p = 0;
      while (p < mems.size()) {
        while (p < mems.size() && std::isspace(static_cast<unsigned char>(mems[p]))) ++p;
        std::size_t q = p;
        while (q < mems.size() && !std::isspace(static_cast<unsigned char>(mems[q]))) ++q;
        if (q > p) members.push_back(mems.substr(p, q - p));
        p = q;
      }
      if (members.empty()) throw syntax_error(line_start + first, "at least one family member");
      doc.families[name] = std::move(members);
      formula_text.append(line.size(), ' ');
      formula_text += '\n';
    } else {
      formula_text += line;
      formula_text += '\n';
    }
    if (line_end == text.size()) break;
    line_start = line_end + 1;
  }
  doc.formula = parse_hyper(formula_text);
  return doc;
}

}  // namespace htwtl
