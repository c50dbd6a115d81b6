#include "glp/syntax.hpp"

#include <cctype>
#include <functional>
#include <map>
#include <optional>
#include <unordered_map>

namespace glp {

const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::Lex: return "LexError";
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::Placement: return "PlacementError";
    case ErrorKind::UndefinedType: return "UndefinedType";
    case ErrorKind::CircularAlias: return "CircularAlias";
    case ErrorKind::AliasOfPrimitiveUnion: return "AliasOfPrimitiveUnion";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::NonConcreteArgument: return "NonConcreteArgument";
    case ErrorKind::DeterminismViolation: return "DeterminismViolation";
    case ErrorKind::Redefinition: return "Redefinition";
    case ErrorKind::UnknownProcedure: return "UnknownProcedure";
  }
  return "Error";
}

bool is_primitive_type(std::string_view n) {
  return n == "Integer" || n == "Real" || n == "Number" || n == "String" || n == "Constant";
}

std::string type_key(std::string_view name, std::size_t nparams) {
  return std::string(name) + "/" + std::to_string(nparams);
}

std::string pred_key(std::string_view name, std::size_t arity) {
  return std::string(name) + "/" + std::to_string(arity);
}

std::string pred_key(const Term& head) {
  if (head->tag == Tag::Cmp) return pred_key(head->s, head->args.size());
  if (head->tag == Tag::Str) return pred_key(head->s, 0);
  return {};
}

// ---------------------------------------------------------------- lexer

namespace {

enum class Tok { Var, Atom, Str, Int, Real, Punct, Op, Question, End, Eof, ModeUp, ModeDown };

struct Token {
  Tok kind;
  std::string text;
  std::int64_t ival = 0;
  double rval = 0;
  SrcLoc loc;
  bool adjacent_paren = false;  // immediately followed by '('
  bool adjacent_question = false;
};

const char* const kOps[] = {"::=", "=..", "..=", "=?=", "=:=", "=\\=", ":-", "=<", ">=", ":=",
                            "//",  "=",   "<",   ">",   "+",   "-",    "*",  "/",  "\\", ";"};

class Lexer {
 public:
  Lexer(std::string_view src, bool moded) : src_(src), moded_(moded) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.loc = {line_, col_};
      if (pos_ >= src_.size()) {
        t.kind = Tok::Eof;
        out.push_back(t);
        return out;
      }
      lex_one(t);
      if (pos_ < src_.size()) {
        t.adjacent_paren = src_[pos_] == '(';
        t.adjacent_question = src_[pos_] == '?';
      }
      out.push_back(std::move(t));
    }
  }

 private:
  std::string_view src_;
  bool moded_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;

  char peek(std::size_t k = 0) const { return pos_ + k < src_.size() ? src_[pos_ + k] : '\0'; }
  void advance(std::size_t n = 1) {
    for (std::size_t k = 0; k < n && pos_ < src_.size(); ++k) {
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else if ((static_cast<unsigned char>(src_[pos_]) & 0xC0) != 0x80) {
        ++col_;
      }
      ++pos_;
    }
  }
  [[noreturn]] void fail(const std::string& msg) { throw GlpError(ErrorKind::Lex, {line_, col_}, msg); }

  void skip_space() {
    for (;;) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        advance();
      } else if (c == '%') {
        while (pos_ < src_.size() && peek() != '\n') advance();
      } else if (c == '/' && peek(1) == '*') {
        advance(2);
        while (pos_ < src_.size() && !(peek() == '*' && peek(1) == '/')) advance();
        if (pos_ >= src_.size()) fail("unterminated comment");
        advance(2);
      } else {
        return;
      }
    }
  }

  static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

  void lex_one(Token& t) {
    char c = peek();
    if (src_.substr(pos_, 3) == "\xE2\x86\x91" || src_.substr(pos_, 3) == "\xE2\x86\x93") {
      if (!moded_) fail("mode annotation outside a moded term");
      t.kind = src_[pos_ + 2] == '\x91' ? Tok::ModeUp : Tok::ModeDown;
      advance(3);
      return;
    }
    if (moded_ && c == '^') {
      t.kind = Tok::ModeUp;
      advance();
      return;
    }
    if (moded_ && c == 'v') {
      char d = peek(1);
      if (d == '[' || d == '(' || d == '_' || d == '"' || std::isupper(static_cast<unsigned char>(d)) ||
          std::isdigit(static_cast<unsigned char>(d))) {
        t.kind = Tok::ModeDown;
        advance();
        return;
      }
    }
    if (std::isupper(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t s = pos_;
      while (ident_char(peek())) advance();
      t.kind = Tok::Var;
      t.text = std::string(src_.substr(s, pos_ - s));
      return;
    }
    if (std::islower(static_cast<unsigned char>(c))) {
      std::size_t s = pos_;
      while (ident_char(peek())) advance();
      t.kind = Tok::Atom;
      t.text = std::string(src_.substr(s, pos_ - s));
      if (t.text == "mod") t.kind = Tok::Op;
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t s = pos_;
      while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
      bool real = false;
      if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
        real = true;
        advance();
        while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
      }
      if ((peek() == 'e' || peek() == 'E') &&
          (std::isdigit(static_cast<unsigned char>(peek(1))) ||
           ((peek(1) == '-' || peek(1) == '+') && std::isdigit(static_cast<unsigned char>(peek(2)))))) {
        real = true;
        advance(2);
        while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
      }
      std::string text(src_.substr(s, pos_ - s));
      try {
        if (real) {
          t.kind = Tok::Real;
          t.rval = std::stod(text);
        } else {
          t.kind = Tok::Int;
          t.ival = std::stoll(text);
        }
      } catch (const std::exception&) {
        fail("numeric literal out of range: " + text);
      }
      t.text = text;
      return;
    }
    if (c == '"' || c == '\'') {
      char q = c;
      advance();
      std::string out;
      for (;;) {
        if (pos_ >= src_.size()) fail("unterminated string");
        char d = peek();
        if (d == q) {
          advance();
          break;
        }
        if (d == '\\') {
          advance();
          char e = peek();
          if (e == 'n') out += '\n';
          else if (e == 't') out += '\t';
          else out += e;
          advance();
          continue;
        }
        out += d;
        advance();
      }
      t.kind = Tok::Str;
      t.text = out;
      return;
    }
    if (c == '(' || c == ')' || c == '[' || c == ']' || c == '|' || c == ',') {
      t.kind = Tok::Punct;
      t.text = std::string(1, c);
      advance();
      return;
    }
    if (c == '?') {
      t.kind = Tok::Question;
      t.text = "?";
      advance();
      return;
    }
    if (c == '.') {
      char d = peek(1);
      if (d == '\0' || d == ' ' || d == '\n' || d == '\t' || d == '\r' || d == '%') {
        t.kind = Tok::End;
        t.text = ".";
        advance();
        return;
      }
    }
    for (const char* op : kOps) {
      std::string_view o(op);
      if (src_.substr(pos_, o.size()) == o) {
        t.kind = Tok::Op;
        t.text = std::string(o);
        advance(o.size());
        return;
      }
    }
    if (c == '.') {
      t.kind = Tok::End;
      t.text = ".";
      advance();
      return;
    }
    fail(std::string("unexpected character '") + c + "'");
  }
};

struct OpInfo {
  int prec;
  int left_max;
  int right_max;
};

std::optional<OpInfo> infix_info(const std::string& op) {
  static const std::map<std::string, OpInfo> table = {
      {":=", {700, 699, 699}},  {"=", {700, 699, 699}},   {"=..", {700, 699, 699}},
      {"..=", {700, 699, 699}}, {"=?=", {700, 699, 699}}, {"<", {700, 699, 699}},
      {">", {700, 699, 699}},   {"=<", {700, 699, 699}},  {">=", {700, 699, 699}},
      {"=:=", {700, 699, 699}}, {"=\\=", {700, 699, 699}}, {"\\", {600, 599, 600}},
      {"+", {500, 500, 499}},   {"-", {500, 500, 499}},   {"*", {400, 400, 399}},
      {"/", {400, 400, 399}},   {"//", {400, 400, 399}},  {"mod", {400, 400, 399}},
  };
  auto it = table.find(op);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

// ---------------------------------------------------------------- parser

class Parser {
 public:
  Parser(std::string_view src, bool moded = false) : toks_(Lexer(src, moded).run()) {}

  std::vector<Token> toks_;
  std::size_t p_ = 0;
  std::unordered_map<std::string, VarId> vars_;
  // Modes attached to term nodes when parsing moded text.
  std::vector<std::pair<const Node*, bool>>* mode_sink = nullptr;

  const Token& cur() const { return toks_[p_]; }
  const Token& next() const { return toks_[std::min(p_ + 1, toks_.size() - 1)]; }
  bool is_punct(const char* s) const { return cur().kind == Tok::Punct && cur().text == s; }
  bool is_op(const char* s) const { return cur().kind == Tok::Op && cur().text == s; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw GlpError(ErrorKind::Parse, cur().loc, msg);
  }
  void expect_punct(const char* s) {
    if (!is_punct(s)) fail(std::string("expected '") + s + "'" + found());
    ++p_;
  }
  std::string found() const {
    const Token& t = cur();
    if (t.kind == Tok::Eof) return ", found end of input";
    return ", found '" + t.text + "'";
  }

  Term variable(const std::string& name, bool reader) {
    if (name == "_" || name[0] == '_') {
      if (reader) fail("anonymous variable cannot be a reader");
      return mk_anon();
    }
    auto it = vars_.find(name);
    if (it == vars_.end()) it = vars_.emplace(name, fresh_var()).first;
    return reader ? mk_reader(it->second, name) : mk_writer(it->second, name);
  }

  // Terms ---------------------------------------------------------------

  std::optional<bool> take_mode() {
    if (cur().kind == Tok::ModeUp) {
      ++p_;
      return true;
    }
    if (cur().kind == Tok::ModeDown) {
      ++p_;
      return false;
    }
    return std::nullopt;
  }

  Term note(Term t, std::optional<bool> up) {
    if (mode_sink && up) mode_sink->push_back({t.get(), *up});
    return t;
  }

  std::vector<Term> arg_list() {
    std::vector<Term> args;
    expect_punct("(");
    if (is_punct(")")) fail("empty argument list");
    args.push_back(term(999));
    while (is_punct(",")) {
      ++p_;
      args.push_back(term(999));
    }
    expect_punct(")");
    return args;
  }

  Term primary() {
    auto mode = take_mode();
    const Token t = cur();
    switch (t.kind) {
      case Tok::Var: {
        ++p_;
        bool reader = false;
        if (cur().kind == Tok::Question && t.adjacent_question) {
          ++p_;
          reader = true;
        }
        if (cur().kind == Tok::Question) fail("complement applies once, to a variable");
        return note(variable(t.text, reader), mode);
      }
      case Tok::Int: ++p_; return note(mk_int(t.ival), mode);
      case Tok::Real: ++p_; return note(mk_real(t.rval), mode);
      case Tok::Atom:
      case Tok::Str: {
        ++p_;
        if (t.adjacent_paren) return note(mk_cmp(t.text, arg_list()), mode);
        return note(mk_str(t.text), mode);
      }
      case Tok::Op: {
        if (t.adjacent_paren && t.text != ";") {
          ++p_;
          return note(mk_cmp(t.text, arg_list()), mode);
        }
        if (t.text == "-") {
          ++p_;
          if (cur().kind == Tok::Int && !mode) {
            std::int64_t v = cur().ival;
            ++p_;
            return mk_int(-v);
          }
          if (cur().kind == Tok::Real && !mode) {
            double v = cur().rval;
            ++p_;
            return mk_real(-v);
          }
          return note(mk_cmp("-", {term(200)}), mode);
        }
        fail("unexpected operator '" + t.text + "'");
      }
      case Tok::Punct: {
        if (t.text == "[") {
          ++p_;
          if (is_punct("]")) {
            ++p_;
            return note(mk_nil(), mode);
          }
          std::vector<Term> items{term(999)};
          while (is_punct(",")) {
            ++p_;
            items.push_back(term(999));
          }
          Term tail;
          if (is_punct("|")) {
            ++p_;
            tail = term(999);
          }
          expect_punct("]");
          Term list = mk_list(items, tail);
          if (mode_sink && mode) {
            // A moded list literal carries its mode on every spine cell.
            Term cell = list;
            for (std::size_t k = 0; k < items.size(); ++k) {
              mode_sink->push_back({cell.get(), *mode});
              cell = cell->args[1];
            }
            if (!tail) mode_sink->push_back({cell.get(), *mode});
          }
          return list;
        }
        if (t.text == "(") {
          ++p_;
          Term inner = term(1200);
          expect_punct(")");
          if (cur().kind == Tok::Question) fail("complement applies once, to a variable");
          return note(inner, mode);
        }
        fail("unexpected '" + t.text + "'");
      }
      case Tok::Question: fail("unexpected '?'");
      case Tok::End: fail("unexpected end of clause");
      case Tok::Eof: fail("unexpected end of input");
      default: fail("unexpected token");
    }
  }

  Term term(int max_prec) {
    Term left = primary();
    for (;;) {
      const Token& t = cur();
      if (t.kind != Tok::Op) break;
      auto info = infix_info(t.text);
      if (!info || info->prec > max_prec) break;
      std::string op = t.text;
      ++p_;
      Term right = term(info->right_max);
      left = mk_cmp(op, {left, right});
      if (cur().kind == Tok::Op) {
        auto nxt = infix_info(cur().text);
        if (nxt && nxt->prec == info->prec && info->left_max < info->prec) fail("operator priority clash");
      }
    }
    return left;
  }

  std::vector<Term> goal_list() {
    std::vector<Term> goals{term(999)};
    while (is_punct(",")) {
      ++p_;
      goals.push_back(term(999));
    }
    return goals;
  }

  static bool is_true(const std::vector<Term>& g) {
    return g.size() == 1 && g[0]->tag == Tag::Str && g[0]->s == "true";
  }

  Clause clause() {
    vars_.clear();
    Clause c;
    c.loc = cur().loc;
    c.head = term(999);
    if (c.head->tag != Tag::Cmp && c.head->tag != Tag::Str) fail("clause head must be a compound or a string");
    if (is_op(":-")) {
      ++p_;
      std::vector<Term> first = goal_list();
      if (is_punct("|")) {
        ++p_;
        c.guard = is_true(first) ? std::vector<Term>{} : first;
        c.body = goal_list();
      } else {
        c.body = first;
      }
      if (is_true(c.body)) c.body.clear();
    }
    if (cur().kind != Tok::End) fail("expected '.' at end of clause" + found());
    ++p_;
    return c;
  }

  // Types ---------------------------------------------------------------

  std::vector<TypeExpr> type_args() {
    std::vector<TypeExpr> args;
    expect_punct("(");
    args.push_back(type_expr());
    while (is_punct(",")) {
      ++p_;
      args.push_back(type_expr());
    }
    expect_punct(")");
    return args;
  }

  TypeExpr type_primary() {
    TypeExpr e;
    const Token t = cur();
    e.loc = t.loc;
    switch (t.kind) {
      case Tok::Var:
        ++p_;
        if (t.text == "_") {
          e.kind = TypeExpr::Kind::Wild;
        } else {
          if (t.text[0] == '_') fail("type names cannot start with '_'");
          e.kind = TypeExpr::Kind::Ref;
          e.name = t.text;
          if (t.adjacent_paren) e.args = type_args();
        }
        break;
      case Tok::Int: ++p_; e.kind = TypeExpr::Kind::Const; e.value = mk_int(t.ival); break;
      case Tok::Real: ++p_; e.kind = TypeExpr::Kind::Const; e.value = mk_real(t.rval); break;
      case Tok::Atom:
      case Tok::Str:
        ++p_;
        if (t.adjacent_paren) {
          e.kind = TypeExpr::Kind::Cmp;
          e.name = t.text;
          e.args = type_args();
        } else {
          e.kind = TypeExpr::Kind::Const;
          e.value = mk_str(t.text);
        }
        break;
      case Tok::Op:
        if (!t.adjacent_paren || t.text == ";") fail("unexpected operator '" + t.text + "' in type");
        ++p_;
        e.kind = TypeExpr::Kind::Cmp;
        e.name = t.text;
        e.args = type_args();
        break;
      case Tok::Punct:
        if (t.text == "[") {
          ++p_;
          if (is_punct("]")) {
            ++p_;
            e.kind = TypeExpr::Kind::Const;
            e.value = mk_nil();
            break;
          }
          std::vector<TypeExpr> items{type_expr()};
          while (is_punct(",")) {
            ++p_;
            items.push_back(type_expr());
          }
          TypeExpr tail;
          if (is_punct("|")) {
            ++p_;
            tail = type_expr();
          } else {
            tail.kind = TypeExpr::Kind::Const;
            tail.value = mk_nil();
            tail.loc = cur().loc;
          }
          expect_punct("]");
          for (auto it = items.rbegin(); it != items.rend(); ++it) {
            TypeExpr cell;
            cell.kind = TypeExpr::Kind::Cmp;
            cell.name = ".";
            cell.loc = it->loc;
            cell.args = {*it, tail};
            tail = cell;
          }
          e = tail;
          e.loc = t.loc;
          break;
        }
        if (t.text == "(") {
          ++p_;
          e = type_expr();
          expect_punct(")");
          break;
        }
        fail("unexpected '" + t.text + "' in type");
      default: fail("unexpected token in type" + found());
    }
    while (cur().kind == Tok::Question) {
      ++p_;
      e.dual = !e.dual;
    }
    return e;
  }

  TypeExpr type_expr() {
    TypeExpr left = type_primary();
    if (is_op("\\")) {
      ++p_;
      TypeExpr right = type_expr();
      TypeExpr e;
      e.kind = TypeExpr::Kind::Cmp;
      e.name = "\\";
      e.loc = left.loc;
      e.args = {left, right};
      return e;
    }
    return left;
  }

  TypeRule type_rule() {
    TypeRule r;
    r.loc = cur().loc;
    const Token name = cur();
    if (name.text[0] == '_') fail("type names cannot start with '_'");
    r.name = name.text;
    ++p_;
    if (name.adjacent_paren) {
      expect_punct("(");
      for (;;) {
        if (cur().kind != Tok::Var || cur().text[0] == '_') fail("expected type parameter" + found());
        r.params.push_back(cur().text);
        ++p_;
        if (is_punct(",")) {
          ++p_;
          continue;
        }
        break;
      }
      expect_punct(")");
    }
    if (!is_op("::=")) fail("expected '::='" + found());
    ++p_;
    r.alts.push_back(type_expr());
    while (is_op(";")) {
      ++p_;
      r.alts.push_back(type_expr());
    }
    if (cur().kind != Tok::End) fail("expected '.' at end of type rule" + found());
    ++p_;
    return r;
  }

  ProcDecl proc_decl() {
    ProcDecl d;
    d.loc = cur().loc;
    ++p_;  // 'procedure'
    const Token t = cur();
    if (t.kind != Tok::Atom && t.kind != Tok::Str && t.kind != Tok::Op) fail("expected procedure name" + found());
    d.name = t.text;
    ++p_;
    if (t.adjacent_paren) d.args = type_args();
    if (cur().kind != Tok::End) fail("expected '.' at end of declaration" + found());
    ++p_;
    return d;
  }

  bool at_decl() const {
    if (cur().kind != Tok::Atom || cur().text != "procedure" || cur().adjacent_paren) return false;
    const Token& n = next();
    return n.kind == Tok::Atom || n.kind == Tok::Str || (n.kind == Tok::Op && n.adjacent_paren);
  }
};

void collect_refs(const TypeExpr& e, std::vector<const TypeExpr*>& out) {
  if (e.kind == TypeExpr::Kind::Ref) out.push_back(&e);
  for (const auto& a : e.args) collect_refs(a, out);
}

void check_type_refs(const SourceProgram& prog, const ParseOptions& opts) {
  std::set<std::string> all_names;
  for (const auto& k : opts.known_types) all_names.insert(k.substr(0, k.find('/')));
  for (const auto& it : prog.items)
    if (auto r = std::get_if<TypeRule>(&it)) all_names.insert(r->name);
  std::set<std::string> earlier;
  for (const auto& k : opts.known_types) earlier.insert(k.substr(0, k.find('/')));

  auto undefined = [](const TypeExpr& e) {
    throw GlpError(ErrorKind::UndefinedType, e.loc, "undefined type '" + e.name + "'");
  };
  for (const auto& it : prog.items) {
    if (auto r = std::get_if<TypeRule>(&it)) {
      std::vector<const TypeExpr*> refs;
      for (const auto& a : r->alts) collect_refs(a, refs);
      std::set<std::string> params(r->params.begin(), r->params.end());
      for (const TypeExpr* e : refs) {
        if (params.count(e->name) || is_primitive_type(e->name) || all_names.count(e->name)) continue;
        undefined(*e);
      }
      earlier.insert(r->name);
    } else if (auto d = std::get_if<ProcDecl>(&it)) {
      // Undefined names are accepted only as arguments of parametrised types.
      std::function<void(const TypeExpr&, bool)> walk = [&](const TypeExpr& e, bool in_param) {
        if (e.kind == TypeExpr::Kind::Ref) {
          bool known = is_primitive_type(e.name) || earlier.count(e.name);
          if (!known && !(in_param && e.args.empty())) undefined(e);
          for (const auto& a : e.args) walk(a, true);
          return;
        }
        for (const auto& a : e.args) walk(a, in_param);
      };
      for (const auto& a : d->args) walk(a, false);
    }
  }
}

}  // namespace

SourceProgram parse_program(std::string_view text, const ParseOptions& opts) {
  Parser ps(text);
  SourceProgram prog;
  std::string open_block;          // predicate whose declaration opened the current block
  std::size_t clauses_in_block = 0;
  SrcLoc block_loc;
  std::set<std::string> closed;    // predicates whose block has ended
  auto close_block = [&] {
    if (!open_block.empty()) closed.insert(open_block);
    open_block.clear();
    clauses_in_block = 0;
  };
  (void)block_loc;
  while (ps.cur().kind != Tok::Eof) {
    if (ps.cur().kind == Tok::Var) {
      close_block();
      prog.items.emplace_back(ps.type_rule());
    } else if (ps.at_decl()) {
      close_block();
      ProcDecl d = ps.proc_decl();
      open_block = pred_key(d.name, d.arity());
      block_loc = d.loc;
      prog.items.emplace_back(std::move(d));
    } else {
      SrcLoc loc = ps.cur().loc;
      Clause c = ps.clause();
      std::string key = pred_key(c.head);
      if (key != open_block) {
        if (closed.count(key))
          throw GlpError(ErrorKind::Placement, loc,
                         "clauses for " + key + " are not contiguous with their declaration");
        throw GlpError(ErrorKind::Placement, loc,
                       "clause for " + key + " is not preceded by its procedure declaration");
      }
      ++clauses_in_block;
      prog.items.emplace_back(std::move(c));
    }
  }
  close_block();
  (void)opts.builtin_decls;
  check_type_refs(prog, opts);
  return prog;
}

std::vector<Term> parse_goal(std::string_view text) {
  Parser ps(text);
  if (ps.cur().kind == Tok::Eof) return {};
  std::vector<Term> goals = ps.goal_list();
  if (ps.cur().kind == Tok::End) ++ps.p_;
  if (ps.cur().kind != Tok::Eof) ps.fail("unexpected text after goal" + ps.found());
  if (Parser::is_true(goals)) return {};
  for (const auto& g : goals)
    if (g->tag != Tag::Cmp && g->tag != Tag::Str) throw GlpError(ErrorKind::Parse, {1, 1}, "goal must be a compound or a string");
  return goals;
}

Term parse_term(std::string_view text) {
  Parser ps(text);
  Term t = ps.term(1200);
  if (ps.cur().kind == Tok::End) ++ps.p_;
  if (ps.cur().kind != Tok::Eof) ps.fail("unexpected text after term" + ps.found());
  return t;
}

TypeExpr parse_type_expr(std::string_view text) {
  Parser ps(text);
  TypeExpr e = ps.type_expr();
  if (ps.cur().kind != Tok::Eof) ps.fail("unexpected text after type" + ps.found());
  return e;
}

// Exposed to kernel for moded-term input.
std::pair<Term, std::vector<std::pair<const Node*, bool>>> parse_moded_raw(std::string_view text,
                                                                          std::unordered_map<std::string, VarId>* names) {
  Parser ps(text, true);
  if (names) ps.vars_ = *names;
  std::vector<std::pair<const Node*, bool>> modes;
  ps.mode_sink = &modes;
  Term t = ps.term(1200);
  if (ps.cur().kind != Tok::Eof) ps.fail("unexpected text after moded term" + ps.found());
  if (names) *names = ps.vars_;
  return {t, modes};
}

// ---------------------------------------------------------------- printing

bool type_expr_equal(const TypeExpr& a, const TypeExpr& b) {
  if (a.kind != b.kind || a.dual != b.dual || a.name != b.name || a.args.size() != b.args.size()) return false;
  if (a.kind == TypeExpr::Kind::Const && !same_constant(a.value, b.value)) return false;
  for (std::size_t k = 0; k < a.args.size(); ++k)
    if (!type_expr_equal(a.args[k], b.args[k])) return false;
  return true;
}

std::string to_string(const TypeExpr& t) {
  std::string s;
  bool wrap = false;
  switch (t.kind) {
    case TypeExpr::Kind::Wild: s = "_"; break;
    case TypeExpr::Kind::Const: s = symbol_name(t.value); break;
    case TypeExpr::Kind::Ref:
      s = t.name;
      if (!t.args.empty()) {
        s += "(";
        for (std::size_t k = 0; k < t.args.size(); ++k) s += (k ? ", " : "") + to_string(t.args[k]);
        s += ")";
      }
      break;
    case TypeExpr::Kind::Cmp:
      if (t.name == "." && t.args.size() == 2) {
        s = "[" + to_string(t.args[0]);
        const TypeExpr* tail = &t.args[1];
        while (tail->kind == TypeExpr::Kind::Cmp && tail->name == "." && tail->args.size() == 2 && !tail->dual) {
          s += ", " + to_string(tail->args[0]);
          tail = &tail->args[1];
        }
        if (!(tail->kind == TypeExpr::Kind::Const && tail->value->tag == Tag::Nil && !tail->dual))
          s += "|" + to_string(*tail);
        s += "]";
      } else if (t.name == "\\" && t.args.size() == 2) {
        std::string l = to_string(t.args[0]);
        if (t.args[0].kind == TypeExpr::Kind::Cmp && t.args[0].name == "\\") l = "(" + l + ")";
        s = l + " \\ " + to_string(t.args[1]);
        wrap = t.dual;
      } else {
        s = is_infix_op(t.name) ? t.name : quote_string(t.name);
        s += "(";
        for (std::size_t k = 0; k < t.args.size(); ++k) s += (k ? ", " : "") + to_string(t.args[k]);
        s += ")";
      }
      break;
  }
  if (wrap) s = "(" + s + ")";
  if (t.dual) s += "?";
  return s;
}

std::string to_string(const TypeRule& r) {
  std::string s = r.name;
  if (!r.params.empty()) {
    s += "(";
    for (std::size_t k = 0; k < r.params.size(); ++k) s += (k ? ", " : "") + r.params[k];
    s += ")";
  }
  s += " ::= ";
  for (std::size_t k = 0; k < r.alts.size(); ++k) s += (k ? " ; " : "") + to_string(r.alts[k]);
  return s + ".";
}

std::string to_string(const ProcDecl& d) {
  std::string s = "procedure " + (is_infix_op(d.name) ? d.name : quote_string(d.name));
  if (!d.args.empty()) {
    s += "(";
    for (std::size_t k = 0; k < d.args.size(); ++k) s += (k ? ", " : "") + to_string(d.args[k]);
    s += ")";
  }
  return s + ".";
}

std::string to_string(const Clause& c) {
  std::string s = to_string(c.head);
  if (c.guard.empty() && c.body.empty()) return s + ".";
  s += " :- ";
  if (!c.guard.empty()) s += to_string(c.guard) + " | ";
  s += to_string(c.body);
  return s + ".";
}

std::string print_program(const SourceProgram& p) {
  std::string out;
  for (const auto& it : p.items) {
    if (auto r = std::get_if<TypeRule>(&it)) out += to_string(*r) + "\n";
    else if (auto d = std::get_if<ProcDecl>(&it)) out += "\n" + to_string(*d) + "\n";
    else out += to_string(std::get<Clause>(it)) + "\n";
  }
  return out;
}

namespace {

bool eq_renaming(const Term& a, const Term& b, std::map<VarId, VarId>& fwd, std::map<VarId, VarId>& back) {
  if (a->tag != b->tag) return false;
  switch (a->tag) {
    case Tag::Anon: return true;
    case Tag::Writer:
    case Tag::Reader: {
      auto f = fwd.emplace(a->var, b->var).first;
      auto g = back.emplace(b->var, a->var).first;
      return f->second == b->var && g->second == a->var;
    }
    case Tag::Cmp:
      if (a->s != b->s || a->args.size() != b->args.size()) return false;
      for (std::size_t k = 0; k < a->args.size(); ++k)
        if (!eq_renaming(a->args[k], b->args[k], fwd, back)) return false;
      return true;
    default: return same_constant(a, b);
  }
}

bool goals_eq(const std::vector<Term>& a, const std::vector<Term>& b, std::map<VarId, VarId>& f,
              std::map<VarId, VarId>& g) {
  if (a.size() != b.size()) return false;
  for (std::size_t k = 0; k < a.size(); ++k)
    if (!eq_renaming(a[k], b[k], f, g)) return false;
  return true;
}

}  // namespace

bool clause_equal_modulo_renaming(const Clause& a, const Clause& b) {
  std::map<VarId, VarId> f, g;
  return eq_renaming(a.head, b.head, f, g) && goals_eq(a.guard, b.guard, f, g) && goals_eq(a.body, b.body, f, g);
}

bool program_equal_modulo_renaming(const SourceProgram& a, const SourceProgram& b) {
  if (a.items.size() != b.items.size()) return false;
  for (std::size_t k = 0; k < a.items.size(); ++k) {
    const Item& x = a.items[k];
    const Item& y = b.items[k];
    if (x.index() != y.index()) return false;
    if (auto r = std::get_if<TypeRule>(&x)) {
      const auto& s = std::get<TypeRule>(y);
      if (r->name != s.name || r->params != s.params || r->alts.size() != s.alts.size()) return false;
      for (std::size_t j = 0; j < r->alts.size(); ++j)
        if (!type_expr_equal(r->alts[j], s.alts[j])) return false;
    } else if (auto d = std::get_if<ProcDecl>(&x)) {
      const auto& e = std::get<ProcDecl>(y);
      if (d->name != e.name || d->args.size() != e.args.size()) return false;
      for (std::size_t j = 0; j < d->args.size(); ++j)
        if (!type_expr_equal(d->args[j], e.args[j])) return false;
    } else if (!clause_equal_modulo_renaming(std::get<Clause>(x), std::get<Clause>(y))) {
      return false;
    }
  }
  return true;
}

}  // namespace glp
