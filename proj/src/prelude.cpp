#include "glp/prelude.hpp"

namespace glp {

namespace {

// Guards and native predicates are declared without clauses. The channel and
// difference-list predicates are ordinary GLP.
constexpr std::string_view kPrelude = R"GLP(
Stream ::= [] ; [_|Stream].
DiffList ::= Stream \ Stream?.
Channel ::= ch(Stream, Stream?).
Exp ::= Number ; +(Exp, Exp) ; -(Exp, Exp) ; *(Exp, Exp) ;
        /(Exp, Exp) ; //(Exp, Exp) ; mod(Exp, Exp) ; neg(Exp).

procedure integer(Integer?).
procedure number(Number?).
procedure string(String?).
procedure atom(String?).
procedure constant(Constant?).
procedure compound(_?).
procedure is_list(Stream?).
procedure ground(_?).
procedure known(_?).
procedure unknown(_?).
procedure =?=(_?, _?).

procedure <(Exp?, Exp?).
procedure >(Exp?, Exp?).
procedure =<(Exp?, Exp?).
procedure >=(Exp?, Exp?).
procedure =:=(Exp?, Exp?).
procedure =\=(Exp?, Exp?).

procedure =(_, _?).
procedure :=(Number, Exp?).
procedure =..(_, Stream?).
procedure ..=(Stream, _?).

procedure dl_append(DiffList?, DiffList?, DiffList).
dl_append(A\B?, B\C?, A?\C).

procedure dl_to_list(DiffList?, Stream).
dl_to_list(Xs\[], Xs?).

procedure new_channel(Channel, Channel).
new_channel(ch(Xs?, Ys), ch(Ys?, Xs)).

procedure send(_?, Channel?, Channel).
send(X, ch(In, [X?|Out?]), ch(In?, Out)).

procedure receive(_, Channel?, Channel).
receive(X?, ch([X|In], Out?), ch(In?, Out)).
)GLP";

}  // namespace

std::string_view prelude_source() { return kPrelude; }

const std::vector<GuardInfo>& guard_table() {
  static const std::vector<GuardInfo> table = {
      {"integer", 1, true, false},  {"number", 1, true, false},   {"string", 1, true, false},
      {"atom", 1, true, false},     {"constant", 1, true, false}, {"compound", 1, false, false},
      {"is_list", 1, false, false}, {"ground", 1, true, false},   {"known", 1, false, false},
      {"unknown", 1, false, false}, {"=?=", 2, true, false},      {"<", 2, true, true},
      {">", 2, true, true},         {"=<", 2, true, true},        {">=", 2, true, true},
      {"=:=", 2, true, true},       {"=\\=", 2, true, true},
  };
  return table;
}

const GuardInfo* find_guard(std::string_view name, std::size_t arity) {
  for (const auto& g : guard_table())
    if (g.name == name && static_cast<std::size_t>(g.arity) == arity) return &g;
  return nullptr;
}

bool is_guard(std::string_view name, std::size_t arity) {
  return find_guard(name, arity) != nullptr || (name == "otherwise" && arity == 0);
}

bool is_native_predicate(std::string_view name, std::size_t arity) {
  return arity == 2 && (name == "=" || name == ":=" || name == "=.." || name == "..=");
}

}  // namespace glp
