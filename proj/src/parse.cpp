#include "tlc/parse.hpp"

#include <cctype>
#include <map>

#include "tlc/error.hpp"

namespace tlc {

SymbolTable SymbolTable::with_builtins() {
  SymbolTable t;
  for (const char* f : {"tuple", "seq", "setof", "union", "inter", "size", "plus", "times",
                        "cons", "occ"})
    t.functions.insert(f);
  return t;
}

namespace {

using K = Assertion::Kind;
using A = Assertion;

struct Token {
  enum class Type { Ident, Flex, Int, String, Punct, End };
  Type type = Type::End;
  std::string text;
  std::int64_t number = 0;
  int line = 1, col = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) { advance(); }

  const Token& peek() const { return tok_; }

  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error("parse", msg + " at line " + std::to_string(tok_.line) + ", column " +
                             std::to_string(tok_.col));
  }

 private:
  void advance() {
    skip_space();
    tok_ = Token{};
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= text_.size()) {
      tok_.type = Token::Type::End;
      return;
    }
    char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      tok_.type = Token::Type::Ident;
      tok_.text = take_ident();
      return;
    }
    if (c == '@') {
      bump();
      tok_.type = Token::Type::Flex;
      tok_.text = take_ident();
      if (tok_.text.empty()) fail("expected flexible variable name after '@'");
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '-' && pos_ + 1 < text_.size() &&
         std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
      tok_.type = Token::Type::Int;
      bool neg = c == '-';
      if (neg) bump();
      std::int64_t v = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        v = v * 10 + (text_[pos_] - '0');
        bump();
      }
      tok_.number = neg ? -v : v;
      return;
    }
    if (c == '"') {
      bump();
      tok_.type = Token::Type::String;
      while (pos_ < text_.size() && text_[pos_] != '"') {
        tok_.text.push_back(text_[pos_]);
        bump();
      }
      if (pos_ >= text_.size()) fail("unterminated string");
      bump();
      return;
    }
    tok_.type = Token::Type::Punct;
    for (const char* multi : {"=>>", "~~>", "<~~", "->", "<=", ">="}) {
      std::size_t len = std::char_traits<char>::length(multi);
      if (text_.compare(pos_, len, multi) == 0) {
        tok_.text = multi;
        for (std::size_t i = 0; i < len; ++i) bump();
        return;
      }
    }
    tok_.text = std::string(1, c);
    bump();
  }

  std::string take_ident() {
    std::string s;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'') {
        s.push_back(c);
        bump();
      } else {
        break;
      }
    }
    return s;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
        while (pos_ < text_.size() && text_[pos_] != '\n') bump();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        bump();
      } else {
        break;
      }
    }
  }

  void bump() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_;
};

const std::set<std::string> kKeywords = {
    "and",   "or",         "not",        "forall",      "exists",      "always",
    "alwaysP", "alwaysS",  "alwaysPS",   "eventually",  "eventuallyP", "eventuallyS",
    "eventuallyPS", "next", "onself",    "self",        "on",          "req",
    "ind",   "per",        "correct",    "under",       "isfail",      "true",
    "false", "in",         "subset",     "node",        "value",       "Correct",
    "Nodes", "spec",       "bot",        "unit"};

class Parser {
 public:
  Parser(const std::string& text, const SymbolTable& symbols)
      : lex_(text), symbols_(symbols) {}

  APtr parse_full() {
    APtr a = parse_expr();
    if (lex_.peek().type != Token::Type::End) lex_.fail("unexpected trailing input");
    return a;
  }

  std::vector<NamedSpec> parse_specs() {
    std::vector<NamedSpec> out;
    while (lex_.peek().type != Token::Type::End) {
      expect_ident("spec");
      if (lex_.peek().type != Token::Type::Ident) lex_.fail("expected spec name");
      std::string name = lex_.take().text;
      expect_punct(":");
      out.push_back(NamedSpec{name, parse_expr()});
    }
    return out;
  }

 private:
  bool peek_ident(const std::string& word) {
    return lex_.peek().type == Token::Type::Ident && lex_.peek().text == word;
  }

  bool peek_punct(const std::string& p) {
    return lex_.peek().type == Token::Type::Punct && lex_.peek().text == p;
  }

  void expect_ident(const std::string& word) {
    if (!peek_ident(word)) lex_.fail("expected '" + word + "'");
    lex_.take();
  }

  void expect_punct(const std::string& p) {
    if (!peek_punct(p)) lex_.fail("expected '" + p + "'");
    lex_.take();
  }

  bool eat_ident(const std::string& word) {
    if (!peek_ident(word)) return false;
    lex_.take();
    return true;
  }

  bool eat_punct(const std::string& p) {
    if (!peek_punct(p)) return false;
    lex_.take();
    return true;
  }

  // expr := or_expr (('->' | '=>>' | '~~>' | '<~~') expr)?   right associative
  APtr parse_expr() {
    APtr lhs = parse_or();
    if (eat_punct("->")) return A::make(K::Implies, lhs, parse_expr());
    if (eat_punct("=>>")) return A::make(K::StrongImplies, lhs, parse_expr());
    if (eat_punct("~~>")) return A::make(K::LeadsTo, lhs, parse_expr());
    if (eat_punct("<~~")) return A::make(K::PrecededBy, lhs, parse_expr());
    return lhs;
  }

  APtr parse_or() {
    APtr lhs = parse_and();
    while (eat_ident("or")) lhs = A::make(K::Or, lhs, parse_and());
    return lhs;
  }

  APtr parse_and() {
    APtr lhs = parse_unary();
    while (eat_ident("and")) lhs = A::make(K::And, lhs, parse_unary());
    return lhs;
  }

  APtr parse_unary() {
    static const std::map<std::string, K> unary = {
        {"not", K::Not},
        {"always", K::Always},
        {"alwaysP", K::PastAlways},
        {"alwaysS", K::AlwaysS},
        {"alwaysPS", K::PastAlwaysS},
        {"eventually", K::Eventually},
        {"eventuallyP", K::PastEventually},
        {"eventuallyS", K::EventuallyS},
        {"eventuallyPS", K::PastEventuallyS},
        {"next", K::Next},
        {"onself", K::SelfOp},
    };
    if (lex_.peek().type == Token::Type::Ident) {
      auto it = unary.find(lex_.peek().text);
      if (it != unary.end()) {
        lex_.take();
        return A::make(it->second, parse_unary());
      }
      if (peek_ident("forall") || peek_ident("exists")) return parse_quantifier();
    }
    return parse_primary();
  }

  APtr parse_quantifier() {
    bool universal = lex_.take().text == "forall";
    if (lex_.peek().type != Token::Type::Ident) lex_.fail("expected variable name");
    std::string var = lex_.take().text;
    expect_punct(":");
    Sort sort;
    if (eat_ident("node"))
      sort = Sort::NodeSort;
    else if (eat_ident("value"))
      sort = Sort::ValueSort;
    else
      lex_.fail("expected sort 'node' or 'value'");
    expect_punct(".");
    APtr body = parse_expr();
    return A::quantifier(universal ? K::Forall : K::Exists, var, sort, body);
  }

  APtr parse_primary() {
    if (eat_punct("(")) {
      APtr a = parse_expr();
      expect_punct(")");
      return a;
    }
    if (eat_ident("true")) return A::true_lit();
    if (eat_ident("false")) return A::false_lit();
    if (eat_ident("self")) return A::self_sugar();
    if (eat_ident("isfail")) return A::is_fail();
    if (eat_ident("correct")) {
      expect_punct("(");
      TermPtr t = parse_term();
      expect_punct(")");
      return A::correct(t);
    }
    if (eat_ident("under")) return A::under(parse_location());
    if (peek_ident("on")) return parse_event_atom();
    if (lex_.peek().type == Token::Type::Ident && kKeywords.count(lex_.peek().text) &&
        lex_.peek().text != "Correct" && lex_.peek().text != "Nodes" &&
        lex_.peek().text != "req" && lex_.peek().text != "ind" && lex_.peek().text != "per" &&
        lex_.peek().text != "bot" && lex_.peek().text != "unit") {
      lex_.fail("unexpected keyword '" + lex_.peek().text + "'");
    }
    return parse_comparison();
  }

  APtr parse_event_atom() {
    expect_ident("on");
    TermPtr node = parse_term();
    expect_punct(",");
    Location loc = parse_location();
    Orientation o;
    if (eat_ident("req"))
      o = Orientation::Request;
    else if (eat_ident("ind"))
      o = Orientation::Indication;
    else if (eat_ident("per"))
      o = Orientation::Periodic;
    else
      lex_.fail("expected orientation req, ind or per");
    if (lex_.peek().type != Token::Type::Ident) lex_.fail("expected event kind");
    std::string kind = lex_.take().text;
    std::vector<TermPtr> args;
    if (eat_punct("(")) {
      if (!peek_punct(")")) {
        args.push_back(parse_term());
        while (eat_punct(",")) args.push_back(parse_term());
      }
      expect_punct(")");
    }
    return A::event_atom(node, loc, o, kind, args);
  }

  Location parse_location() {
    expect_punct("[");
    Location d;
    if (!peek_punct("]")) {
      for (;;) {
        if (lex_.peek().type != Token::Type::Int) lex_.fail("expected child index");
        d.push_back(static_cast<int>(lex_.take().number));
        if (!eat_punct(",")) break;
      }
    }
    expect_punct("]");
    return d;
  }

  APtr parse_comparison() {
    TermPtr lhs = parse_term();
    if (eat_punct("=")) return A::atom(A::Pred::Eq, lhs, parse_term());
    if (eat_punct("<=")) return A::atom(A::Pred::Le, lhs, parse_term());
    if (eat_punct("<")) return A::atom(A::Pred::Lt, lhs, parse_term());
    if (eat_punct(">=")) return A::atom(A::Pred::Le, parse_term(), lhs);
    if (eat_punct(">")) return A::atom(A::Pred::Lt, parse_term(), lhs);
    if (eat_ident("in")) return A::atom(A::Pred::In, lhs, parse_term());
    if (eat_ident("subset")) return A::atom(A::Pred::Subset, lhs, parse_term());
    if (lhs->kind == Term::Kind::Rigid)
      lex_.fail("unknown predicate or bare term '" + lhs->name + "'");
    lex_.fail("expected a predicate after term");
  }

  TermPtr parse_term() { return parse_sum(); }

  TermPtr parse_sum() {
    TermPtr lhs = parse_product();
    while (peek_punct("+")) {
      lex_.take();
      lhs = Term::func("plus", {lhs, parse_product()});
    }
    return lhs;
  }

  TermPtr parse_product() {
    TermPtr lhs = parse_term_atom();
    while (peek_punct("*")) {
      lex_.take();
      lhs = Term::func("times", {lhs, parse_term_atom()});
    }
    return lhs;
  }

  TermPtr parse_term_atom() {
    const Token& t = lex_.peek();
    if (t.type == Token::Type::Int) return Term::constant(Value::integer(lex_.take().number));
    if (t.type == Token::Type::String) return Term::constant(Value::string(lex_.take().text));
    if (t.type == Token::Type::Punct && t.text == "#") {
      lex_.take();
      if (lex_.peek().type != Token::Type::Int) lex_.fail("expected node id after '#'");
      return Term::constant(Value::node(static_cast<NodeId>(lex_.take().number)));
    }
    if (t.type == Token::Type::Punct && t.text == "[") {
      Location d = parse_location();
      Value::List items;
      for (int i : d) items.push_back(Value::integer(i));
      return Term::constant(Value::sequence(std::move(items)));
    }
    if (t.type == Token::Type::Punct && t.text == "(") {
      lex_.take();
      TermPtr inner = parse_term();
      expect_punct(")");
      return inner;
    }
    if (t.type == Token::Type::Flex) {
      Flex f = flex_by_name(lex_.take().text);
      if (eat_punct("(")) {
        std::vector<TermPtr> args = {parse_term()};
        expect_punct(")");
        return Term::apply_flex(f, std::move(args));
      }
      return Term::flexible(f);
    }
    if (t.type == Token::Type::Ident) {
      std::string name = lex_.take().text;
      if (name == "Correct") return Term::correct_set();
      if (name == "Nodes") return Term::node_set();
      if (name == "req" || name == "ind" || name == "per")
        return Term::constant(Value::string(name));
      if (name == "bot") return Term::constant(Value::bottom());
      if (name == "unit") return Term::constant(Value::unit());
      if (eat_punct("(")) {
        std::vector<TermPtr> args;
        if (!peek_punct(")")) {
          args.push_back(parse_term());
          while (eat_punct(",")) args.push_back(parse_term());
        }
        expect_punct(")");
        if (symbols_.known(name)) return Term::func(name, std::move(args));
        if (kKeywords.count(name)) lex_.fail("'" + name + "' is not a function");
        // Application of a map-valued rigid variable.
        if (args.size() == 1) return Term::apply_rigid(name, std::move(args));
        lex_.fail("unknown function '" + name + "'");
      }
      if (kKeywords.count(name)) lex_.fail("unexpected keyword '" + name + "' in term");
      return Term::rigid(name);
    }
    lex_.fail("expected a term");
  }

  Flex flex_by_name(const std::string& name) {
    if (name == "n") return Flex::N;
    if (name == "r") return Flex::R;
    if (name == "d") return Flex::D;
    if (name == "o") return Flex::O;
    if (name == "e") return Flex::E;
    if (name == "ors") return Flex::Ors;
    if (name == "ois") return Flex::Ois;
    if (name == "s") return Flex::S;
    if (name == "s'" || name == "s2") return Flex::SPost;
    lex_.fail("unknown flexible variable @" + name);
  }

  Lexer lex_;
  const SymbolTable& symbols_;
};

}  // namespace

APtr parse_assertion(const std::string& text) {
  return parse_assertion(text, SymbolTable::with_builtins());
}

APtr parse_assertion(const std::string& text, const SymbolTable& symbols) {
  Parser p(text, symbols);
  return p.parse_full();
}

std::vector<NamedSpec> parse_spec_file(const std::string& text, const SymbolTable& symbols) {
  Parser p(text, symbols);
  return p.parse_specs();
}

}  // namespace tlc
