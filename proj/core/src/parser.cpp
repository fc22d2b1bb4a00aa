#include "ctms/lang.hpp"
#include "ctms/syntax.hpp"

#include <cctype>
#include <set>

namespace ctms {

namespace {

enum class Tok { Ident, Int, Sym, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1;
  int col = 1;
};

const char* const kSymbols[] = {"|->", "-*", "->", "..", ":=", "<=", ">=", "!=", "&&", "||", "(", ")", "[",
                                "]",   "{",  "}",  ",",  ";",  ":",  ".",  "=",  "<",  ">",  "+",  "-",  "!",
                                "~",   "*",  "@",  "_"};

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      t.kind = Tok::Int;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
      out.push_back(t);
      continue;
    }
    bool ident_start = std::isalpha(static_cast<unsigned char>(c)) ||
                       (c == '_' && i + 1 < src.size() &&
                        (std::isalnum(static_cast<unsigned char>(src[i + 1])) || src[i + 1] == '_'));
    if (ident_start) {
      size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' || src[j] == '\''))
        ++j;
      t.kind = Tok::Ident;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
      out.push_back(t);
      continue;
    }
    bool matched = false;
    for (const char* s : kSymbols) {
      std::string_view sv(s);
      if (src.substr(i, sv.size()) == sv) {
        t.kind = Tok::Sym;
        t.text = std::string(sv);
        advance(sv.size());
        out.push_back(t);
        matched = true;
        break;
      }
    }
    if (!matched)
      throw ParseError(line, col, {}, std::to_string(line) + ":" + std::to_string(col) +
                                          ": unexpected character '" + std::string(1, c) + "'");
  }
  Token end;
  end.kind = Tok::End;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

const std::set<std::string> kKeywords = {"requires", "params", "let",    "in",  "if",    "then", "else",
                                         "while",    "for",    "to",     "do",  "inv",   "true", "false",
                                         "forall",   "exists", "box",    "array", "loc"};

struct PendingRead {
  std::string temp;
  ExprPtr loc;
  SrcPos pos;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(lex(src)) {
    for (const auto& t : toks_)
      if (t.kind == Tok::Ident) used_.insert(t.text);
  }

  Program program() {
    Program p;
    if (is_kw("params")) {
      next();
      p.params_declared = true;
      do {
        auto name = ident("parameter name");
        expect(":");
        auto d = ident("parameter domain");
        if (d == "Nat") p.params.push_back({name, ParamDomain::Nat});
        else if (d == "Int") p.params.push_back({name, ParamDomain::Int});
        else if (d == "Obj") p.params.push_back({name, ParamDomain::Obj});
        else if (d == "Loc") p.params.push_back({name, ParamDomain::Loc});
        else fail({"Nat", "Int", "Obj", "Loc"});
      } while (accept(","));
      expect(";");
    }
    if (is_kw("requires")) {
      next();
      p.pre = assertion();
      expect(";");
    } else {
      p.pre = a_true();
    }
    p.body = seq();
    expect_end();
    if (!p.params_declared) p.params = infer_params(p.pre);
    check_bound(p);
    return p;
  }

  AssertionPtr assertion_only() {
    auto a = assertion();
    expect_end();
    return a;
  }

  ExprPtr expr_only() {
    auto e = expr_or(false);
    expect_end();
    return e;
  }

  CmdPtr cmd_only() {
    auto c = seq();
    expect_end();
    return c;
  }

 private:
  std::vector<Token> toks_;
  size_t pos_ = 0;
  std::set<std::string> used_;
  int fresh_ = 0;
  std::vector<PendingRead>* reads_ = nullptr;

  const Token& peek(size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  SrcPos here() const { return {peek().line, peek().col}; }

  bool is_sym(const char* s, size_t k = 0) const { return peek(k).kind == Tok::Sym && peek(k).text == s; }
  bool is_kw(const char* s, size_t k = 0) const { return peek(k).kind == Tok::Ident && peek(k).text == s; }

  bool accept(const char* s) {
    if (is_sym(s)) {
      next();
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(std::vector<std::string> expected) {
    const Token& t = peek();
    std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    std::string msg = std::to_string(t.line) + ":" + std::to_string(t.col) + ": expected ";
    for (size_t i = 0; i < expected.size(); ++i) msg += (i ? " or " : "") + expected[i];
    msg += ", found " + found;
    throw ParseError(t.line, t.col, std::move(expected), msg);
  }

  void expect(const char* s) {
    if (!accept(s)) fail({std::string("'") + s + "'"});
  }
  void expect_kw(const char* s) {
    if (!is_kw(s)) fail({std::string("'") + s + "'"});
    next();
  }
  void expect_end() {
    if (peek().kind != Tok::End) fail({"end of input"});
  }

  std::string ident(const char* what) {
    if (peek().kind != Tok::Ident || kKeywords.count(peek().text)) fail({what});
    return next().text;
  }

  std::string fresh_temp() {
    for (;;) {
      std::string n = "_r" + std::to_string(fresh_++);
      if (!used_.count(n)) {
        used_.insert(n);
        return n;
      }
    }
  }

  // ---- commands ----

  CmdPtr seq() {
    SrcPos p = here();
    auto c = single();
    if (accept(";")) {
      if (peek().kind == Tok::End || is_sym(")") || is_kw("in")) return c;
      auto rest = seq();
      auto s = std::make_shared<Cmd>(*c_seq(c, rest));
      s->pos = p;
      return s;
    }
    return c;
  }

  static CmdPtr at(CmdPtr c, SrcPos p) {
    auto m = std::make_shared<Cmd>(*c);
    m->pos = p;
    return m;
  }

  CmdPtr wrap_reads(const std::vector<PendingRead>& reads, CmdPtr c) {
    for (auto it = reads.rbegin(); it != reads.rend(); ++it) c = at(c_let(it->temp, at(c_read(it->loc), it->pos), c), it->pos);
    return c;
  }

  ExprPtr cexpr_into(std::vector<PendingRead>& reads, int level) {
    auto* saved = reads_;
    reads_ = &reads;
    ExprPtr e;
    try {
      e = level == 0 ? expr_or(true) : expr_postfix(true);
    } catch (...) {
      reads_ = saved;
      throw;
    }
    reads_ = saved;
    return e;
  }

  CmdPtr single() {
    SrcPos p = here();
    if (is_kw("let")) {
      next();
      auto x = ident("variable");
      expect("=");
      auto c1 = seq();
      expect_kw("in");
      auto c2 = seq();
      return at(c_let(x, c1, c2), p);
    }
    if (is_kw("if")) {
      next();
      std::vector<PendingRead> reads;
      auto g = cexpr_into(reads, 0);
      expect_kw("then");
      auto t = single();
      CmdPtr f;
      if (is_kw("else")) {
        next();
        f = single();
      } else {
        f = at(c_expr(lit(unit_value(), p)), p);
      }
      return wrap_reads(reads, at(c_if(g, t, f), p));
    }
    if (is_kw("while")) {
      next();
      expect("!");
      std::vector<PendingRead> reads;
      auto e = cexpr_into(reads, 1);
      if (!reads.empty()) throw ParseError(p.line, p.col, {}, std::to_string(p.line) + ":" + std::to_string(p.col) +
                                                                 ": heap reads are not allowed in a while guard location");
      AssertionPtr inv;
      if (is_kw("inv")) {
        next();
        inv = assertion();
      }
      expect_kw("do");
      auto body = single();
      return at(c_while(e, body, inv), p);
    }
    if (is_kw("for")) {
      next();
      auto x = ident("loop variable");
      expect_kw("in");
      expect("[");
      std::vector<PendingRead> reads;
      auto lo = cexpr_into(reads, 0);
      if (!accept(":")) {
        if (is_kw("to")) next();
        else fail({"':'", "'to'"});
      }
      auto hi = cexpr_into(reads, 0);
      expect("]");
      AssertionPtr inv;
      if (is_kw("inv")) {
        next();
        inv = assertion();
      }
      expect_kw("do");
      auto body = single();
      return wrap_reads(reads, at(c_for(x, lo, hi, body, inv), p));
    }
    if (is_sym("(") && !is_sym(")", 1)) {
      size_t save = pos_;
      int save_fresh = fresh_;
      try {
        next();
        auto c = seq();
        expect(")");
        if (!continues_expr()) return c;
      } catch (const ParseError&) {
      }
      pos_ = save;
      fresh_ = save_fresh;
    }
    // expression command, possibly with embedded reads, or a write
    std::vector<PendingRead> reads;
    auto e = cexpr_into(reads, 0);
    if (is_sym(":=")) {
      if (reads.empty() || e->kind != Expr::Kind::Var || e->name != reads.back().temp) fail({"a heap location '!e' before ':='"});
      auto target = reads.back();
      reads.pop_back();
      next();
      std::vector<PendingRead> rhs_reads;
      auto v = cexpr_into(rhs_reads, 0);
      reads.insert(reads.end(), rhs_reads.begin(), rhs_reads.end());
      return wrap_reads(reads, at(c_write(target.loc, v), p));
    }
    if (!reads.empty() && e->kind == Expr::Kind::Var && e->name == reads.back().temp) {
      auto r = reads.back();
      reads.pop_back();
      return wrap_reads(reads, at(c_read(r.loc), r.pos));
    }
    return wrap_reads(reads, at(c_expr(e), p));
  }

  bool continues_expr(bool logical = true) const {
    if (peek().kind != Tok::Sym) return false;
    static const std::set<std::string> ops = {"+", "-", "=", "<", "<=", ">", ">=", "!=", "[", ":=", "|->"};
    if (logical && (peek().text == "&&" || peek().text == "||")) return true;
    return ops.count(peek().text) > 0;
  }

  // ---- expressions ----

  ExprPtr expr_or(bool reads) {
    SrcPos p = here();
    auto l = expr_and(reads);
    while (accept("||")) l = app(Op::Or, {l, expr_and(reads)}, p);
    return l;
  }

  ExprPtr expr_and(bool reads) {
    SrcPos p = here();
    auto l = expr_cmp(reads);
    while (accept("&&")) l = app(Op::And, {l, expr_cmp(reads)}, p);
    return l;
  }

  ExprPtr expr_cmp(bool reads) {
    SrcPos p = here();
    auto l = expr_add(reads);
    if (peek().kind == Tok::Sym) {
      const std::string op = peek().text;
      if (op == "=" || op == "<" || op == "<=" || op == ">" || op == ">=" || op == "!=") {
        next();
        auto r = expr_add(reads);
        if (op == "=") return app(Op::Eq, {l, r}, p);
        if (op == "<") return app(Op::Lt, {l, r}, p);
        if (op == "<=") return app(Op::Le, {l, r}, p);
        if (op == ">") return app(Op::Lt, {r, l}, p);
        if (op == ">=") return app(Op::Le, {r, l}, p);
        return app(Op::Not, {app(Op::Eq, {l, r}, p)}, p);
      }
    }
    return l;
  }

  ExprPtr expr_add(bool reads) {
    SrcPos p = here();
    auto l = expr_unary(reads);
    for (;;) {
      if (accept("+")) l = app(Op::Add, {l, expr_unary(reads)}, p);
      else if (accept("-")) l = app(Op::Sub, {l, expr_unary(reads)}, p);
      else return l;
    }
  }

  ExprPtr expr_unary(bool reads) {
    SrcPos p = here();
    if (accept("~")) return app(Op::Not, {expr_unary(reads)}, p);
    if (accept("-")) {
      if (peek().kind == Tok::Int) {
        auto t = next();
        return expr_postfix_rest(lit(Value{-Int(t.text)}, p), reads);
      }
      return app(Op::Sub, {lit(int_value(0), p), expr_unary(reads)}, p);
    }
    return expr_postfix(reads);
  }

  ExprPtr expr_postfix(bool reads) { return expr_postfix_rest(expr_primary(reads), reads); }

  ExprPtr expr_postfix_rest(ExprPtr e, bool reads) {
    while (is_sym("[")) {
      SrcPos p = here();
      next();
      auto idx = expr_or(reads);
      expect("]");
      e = app(Op::Offset, {e, idx}, p);
    }
    return e;
  }

  ExprPtr expr_primary(bool reads) {
    SrcPos p = here();
    const Token& t = peek();
    if (t.kind == Tok::Int) {
      next();
      return lit(Value{Int(t.text)}, p);
    }
    if (is_kw("true")) {
      next();
      return lit(Value{true}, p);
    }
    if (is_kw("false")) {
      next();
      return lit(Value{false}, p);
    }
    if (is_kw("loc")) {
      next();
      expect("(");
      auto o = expr_or(reads);
      expect(",");
      auto i = expr_or(reads);
      expect(")");
      auto ov = eval_closed_expr(o);
      auto iv = eval_closed_expr(i);
      if (ov && iv && as_obj(*ov) && as_int(*iv)) return lit(Value{HeapLoc{*as_obj(*ov), *as_int(*iv)}}, p);
      return app(Op::Offset, {o, i}, p);
    }
    if (accept("@")) {
      auto n = ident("object name");
      return lit(Value{ObjId{n}}, p);
    }
    if (is_sym("(")) {
      next();
      if (accept(")")) return lit(unit_value(), p);
      auto e = expr_or(reads);
      expect(")");
      return e;
    }
    if (is_sym("!") && reads && reads_) {
      next();
      auto l = expr_postfix(reads);
      auto temp = fresh_temp();
      reads_->push_back({temp, l, p});
      return var(temp, p);
    }
    if (t.kind == Tok::Ident && !kKeywords.count(t.text)) {
      next();
      return var(t.text, p);
    }
    fail({"expression"});
  }

  // ---- assertions ----

  bool at_quant() const { return is_kw("forall") || is_kw("exists"); }

  AssertionPtr assertion() { return at_quant() ? quant() : imp(); }

  static AssertionPtr at(AssertionPtr a, SrcPos p) {
    auto m = std::make_shared<Assertion>(*a);
    m->pos = p;
    return m;
  }

  AssertionPtr quant() {
    SrcPos p = here();
    bool all = is_kw("forall");
    next();
    auto x = ident("bound variable");
    expect_kw("in");
    Domain d = domain();
    expect(".");
    auto body = assertion();
    return at(all ? a_forall(x, d, body) : a_exists(x, d, body), p);
  }

  Domain domain() {
    if (accept("[")) {
      auto lo = expr_or(false);
      expect("..");
      auto hi = expr_or(false);
      expect("]");
      return Domain::interval(lo, hi);
    }
    if (accept("{")) {
      std::vector<ExprPtr> xs;
      if (!is_sym("}")) {
        do xs.push_back(expr_or(false));
        while (accept(","));
      }
      expect("}");
      return Domain::set(xs);
    }
    if (peek().kind == Tok::Ident) {
      const std::string n = peek().text;
      if (n == "Nat") return next(), Domain::nat();
      if (n == "Int") return next(), Domain::integers();
      if (n == "Val") return next(), Domain::val();
      if (n == "Obj") return next(), Domain::obj();
      if (n == "Loc") return next(), Domain::locs();
    }
    fail({"domain"});
  }

  AssertionPtr imp() {
    SrcPos p = here();
    auto l = wand();
    if (accept("->")) {
      auto r = at_quant() ? quant() : imp();
      return at(a_imp(l, r), p);
    }
    return l;
  }

  AssertionPtr wand() {
    SrcPos p = here();
    auto l = aor();
    if (accept("-*")) {
      auto r = at_quant() ? quant() : wand();
      return at(a_wand(l, r), p);
    }
    return l;
  }

  AssertionPtr aor() {
    SrcPos p = here();
    auto l = aand();
    while (accept("||")) l = at(a_or(l, aand()), p);
    return l;
  }

  AssertionPtr aand() {
    SrcPos p = here();
    auto l = astar();
    while (accept("&&")) l = at(a_and(l, astar()), p);
    return l;
  }

  AssertionPtr astar() {
    SrcPos p = here();
    auto l = aunary();
    while (accept("*")) l = at(a_star(l, aunary()), p);
    return l;
  }

  AssertionPtr aunary() {
    SrcPos p = here();
    if (accept("!")) return at(a_not(aunary()), p);
    if (is_kw("box")) {
      next();
      expect("(");
      auto a = assertion();
      expect(")");
      return at(a_box(a), p);
    }
    return atom();
  }

  AssertionPtr atom() {
    SrcPos p = here();
    if (is_kw("true")) {
      next();
      return at(a_true(), p);
    }
    if (is_kw("false")) {
      next();
      return at(a_false(), p);
    }
    if (is_kw("array")) {
      next();
      expect("(");
      auto o = expr_or(false);
      expect(",");
      auto n = expr_or(false);
      expect(")");
      return at(a_array(o, n), p);
    }
    if (at_quant()) return quant();
    if (is_sym("(") && !is_sym(")", 1)) {
      size_t save = pos_;
      try {
        next();
        auto a = assertion();
        expect(")");
        if (!continues_expr(false)) return a;
      } catch (const ParseError&) {
      }
      pos_ = save;
    }
    auto e = expr_cmp(false);
    if (accept("|->")) {
      if (accept("_")) return at(a_pts_any(e), p);
      auto v = expr_add(false);
      return at(a_pts(e, v), p);
    }
    return at(a_pure(e), p);
  }
};

}  // namespace

Program parse_program(std::string_view text) { return Parser(text).program(); }
AssertionPtr parse_assertion(std::string_view text) { return Parser(text).assertion_only(); }
ExprPtr parse_expr(std::string_view text) { return Parser(text).expr_only(); }
CmdPtr parse_cmd(std::string_view text) { return Parser(text).cmd_only(); }

}  // namespace ctms
