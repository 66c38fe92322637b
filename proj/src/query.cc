// Copyright 2026 The InstKG Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "instkg/query.h"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <set>

#include "instkg/error.h"
#include "instkg/model.h"

namespace instkg {
namespace {

enum class Tok { kIri, kPname, kVar, kString, kWord, kPunct, kOp, kNumber, kEnd };

struct Token {
  Tok kind = Tok::kEnd;
  std::string text;  // IRI without brackets, var without '?', unescaped string
  size_t pos = 0;
  std::string lang;      // kString
  std::string datatype;  // kString, raw (IRI or pname) form
  bool datatype_is_pname = false;
  size_t datatype_pos = 0;
};

bool IsNameChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
         (static_cast<unsigned char>(c) >= 0x80);
}

std::string Upper(std::string_view s) {
  std::string out(s);
  for (char &c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> Run() {
    std::vector<Token> out;
    for (;;) {
      SkipSpaceAndComments();
      if (i_ >= text_.size()) break;
      out.push_back(Next());
    }
    Token end;
    end.pos = text_.size();
    out.push_back(end);
    return out;
  }

 private:
  void SkipSpaceAndComments() {
    while (i_ < text_.size()) {
      char c = text_[i_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i_;
      } else if (c == '#') {
        while (i_ < text_.size() && text_[i_] != '\n') ++i_;
      } else {
        break;
      }
    }
  }

  [[noreturn]] void Fail(size_t pos, const std::string &msg) const {
    throw SyntaxError("syntax error at offset " + std::to_string(pos) + ": " + msg, pos);
  }

  Token Next() {
    Token t;
    t.pos = i_;
    const char c = text_[i_];
    if (c == '<') {
      size_t j = i_ + 1;
      while (j < text_.size() && text_[j] != '>' && text_[j] != '<' && text_[j] != '"' &&
             !std::isspace(static_cast<unsigned char>(text_[j]))) {
        ++j;
      }
      if (j < text_.size() && text_[j] == '>' && j > i_ + 1) {
        t.kind = Tok::kIri;
        t.text = std::string(text_.substr(i_ + 1, j - i_ - 1));
        i_ = j + 1;
        return t;
      }
      t.kind = Tok::kOp;
      t.text = (i_ + 1 < text_.size() && text_[i_ + 1] == '=') ? "<=" : "<";
      i_ += t.text.size();
      return t;
    }
    if (c == '?' || c == '$') {
      size_t j = i_ + 1;
      while (j < text_.size() && IsNameChar(text_[j]) && text_[j] != '-') ++j;
      if (j == i_ + 1) Fail(i_, "expected a variable name after '" + std::string(1, c) + "'");
      t.kind = Tok::kVar;
      t.text = std::string(text_.substr(i_ + 1, j - i_ - 1));
      i_ = j;
      return t;
    }
    if (c == '"' || c == '\'') return String(c);
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i_;
      while (j < text_.size() &&
             (std::isdigit(static_cast<unsigned char>(text_[j])) || text_[j] == '.')) {
        ++j;
      }
      t.kind = Tok::kNumber;
      t.text = std::string(text_.substr(i_, j - i_));
      i_ = j;
      return t;
    }
    if (IsNameChar(c) || c == ':') return NameOrPname();
    for (std::string_view op : {"&&", "||", "!=", ">=", "^^"}) {
      if (text_.substr(i_, 2) == op) {
        t.kind = Tok::kOp;
        t.text = std::string(op);
        i_ += 2;
        return t;
      }
    }
    if (std::string_view("{}().;,=*").find(c) != std::string_view::npos) {
      t.kind = Tok::kPunct;
    } else if (std::string_view("!><+-/|&^@[]").find(c) != std::string_view::npos) {
      t.kind = Tok::kOp;
    } else {
      Fail(i_, "unexpected character '" + std::string(1, c) + "'");
    }
    t.text = std::string(1, c);
    ++i_;
    return t;
  }

  Token NameOrPname() {
    Token t;
    t.pos = i_;
    size_t j = i_;
    while (j < text_.size() && (IsNameChar(text_[j]) || text_[j] == '.')) ++j;
    while (j > i_ && text_[j - 1] == '.') --j;
    if (j < text_.size() && text_[j] == ':') {
      size_t k = j + 1;
      while (k < text_.size() && (IsNameChar(text_[k]) || text_[k] == '.' || text_[k] == '%')) ++k;
      while (k > j + 1 && text_[k - 1] == '.') --k;
      t.kind = Tok::kPname;
      t.text = std::string(text_.substr(i_, k - i_));
      i_ = k;
      return t;
    }
    t.kind = Tok::kWord;
    t.text = std::string(text_.substr(i_, j - i_));
    i_ = j;
    return t;
  }

  Token String(char quote) {
    Token t;
    t.kind = Tok::kString;
    t.pos = i_;
    size_t j = i_ + 1;
    for (;;) {
      if (j >= text_.size() || text_[j] == '\n') Fail(t.pos, "unterminated string literal");
      char c = text_[j];
      if (c == quote) break;
      if (c == '\\') {
        if (j + 1 >= text_.size()) Fail(j, "dangling escape");
        char e = text_[j + 1];
        switch (e) {
          case 'n': t.text.push_back('\n'); break;
          case 't': t.text.push_back('\t'); break;
          case 'r': t.text.push_back('\r'); break;
          case '"': case '\'': case '\\': t.text.push_back(e); break;
          default: Fail(j, "unsupported escape '\\" + std::string(1, e) + "'");
        }
        j += 2;
        continue;
      }
      t.text.push_back(c);
      ++j;
    }
    i_ = j + 1;
    if (i_ < text_.size() && text_[i_] == '@') {
      size_t k = i_ + 1;
      while (k < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[k])) || text_[k] == '-')) {
        ++k;
      }
      if (k == i_ + 1) Fail(i_, "empty language tag");
      t.lang = std::string(text_.substr(i_ + 1, k - i_ - 1));
      i_ = k;
    } else if (text_.substr(i_, 2) == "^^") {
      i_ += 2;
      t.datatype_pos = i_;
      if (i_ >= text_.size()) Fail(i_, "expected a datatype after '^^'");
      Token dt = text_[i_] == '<' ? Next() : NameOrPname();
      if (dt.kind == Tok::kIri) {
        t.datatype = dt.text;
      } else if (dt.kind == Tok::kPname) {
        t.datatype = dt.text;
        t.datatype_is_pname = true;
      } else {
        Fail(dt.pos, "expected a datatype IRI");
      }
    }
    return t;
  }

  std::string_view text_;
  size_t i_ = 0;
};

const std::set<std::string> &UnsupportedKeywords() {
  static const std::set<std::string> k = {
      "UNION",  "MINUS",   "BIND",   "VALUES", "SERVICE",   "GRAPH",    "GROUP",
      "ORDER",  "LIMIT",   "OFFSET", "HAVING", "DISTINCT",  "REDUCED",  "ASK",
      "CONSTRUCT", "DESCRIBE", "BASE", "FROM",  "NOT",      "EXISTS",   "REGEX",
      "STR",    "LANG",    "BOUND",  "SAMETERM", "STRSTARTS", "STRENDS", "LCASE",
      "UCASE",  "IN",      "AS",     "COUNT",  "IF",        "COALESCE", "INSERT",
      "DELETE", "LOAD",    "CLEAR",  "DROP",   "CREATE",    "WITH"};
  return k;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(Lexer(text).Run()) {}

  Query Run() {
    Query q;
    while (IsWord("PREFIX")) {
      Advance();
      const Token &name = Peek();
      if (name.kind != Tok::kPname || name.text.back() != ':' ||
          name.text.find(':') != name.text.size() - 1) {
        Fail(name, "expected a prefix name ending in ':'");
      }
      std::string prefix = name.text.substr(0, name.text.size() - 1);
      Advance();
      const Token &iri = Peek();
      if (iri.kind != Tok::kIri) Fail(iri, "expected <iri> in PREFIX declaration");
      prefixes_[prefix] = iri.text;
      q.prefixes.emplace_back(prefix, iri.text);
      Advance();
    }
    CheckUnsupportedWord();
    if (!IsWord("SELECT")) Fail(Peek(), "expected SELECT");
    Advance();
    CheckUnsupportedWord();
    if (IsPunct("*")) Unsupported(Peek(), "SELECT *");
    if (IsPunct("(")) Unsupported(Peek(), "projection expressions");
    std::vector<size_t> projection_pos;
    while (Peek().kind == Tok::kVar) {
      if (std::find(q.projection.begin(), q.projection.end(), Peek().text) ==
          q.projection.end()) {
        q.projection.push_back(Peek().text);
        projection_pos.push_back(Peek().pos);
      }
      Advance();
    }
    if (q.projection.empty()) Fail(Peek(), "expected at least one projected variable");
    CheckUnsupportedWord();
    if (IsWord("WHERE")) Advance();
    Expect("{");
    ParseGroup(q);
    Expect("}");
    CheckUnsupportedWord();
    if (Peek().kind != Tok::kEnd) Fail(Peek(), "unexpected trailing input");

    for (size_t i = 0; i < q.projection.size(); ++i) {
      if (!pattern_vars_.count(q.projection[i])) {
        throw SyntaxError("syntax error at offset " + std::to_string(projection_pos[i]) +
                              ": projected variable ?" + q.projection[i] +
                              " does not occur in the WHERE clause",
                          projection_pos[i]);
      }
    }
    for (const auto &[var, pos] : filter_vars_) {
      if (!pattern_vars_.count(var)) {
        throw SyntaxError("syntax error at offset " + std::to_string(pos) + ": filter variable ?" +
                              var + " does not occur in a triple pattern",
                          pos);
      }
    }
    return q;
  }

 private:
  const Token &Peek(size_t ahead = 0) const {
    return toks_[std::min(k_ + ahead, toks_.size() - 1)];
  }
  void Advance() {
    if (k_ + 1 < toks_.size()) ++k_;
  }
  bool IsWord(std::string_view upper) const {
    return Peek().kind == Tok::kWord && Upper(Peek().text) == upper;
  }
  bool IsPunct(std::string_view p) const {
    return Peek().kind == Tok::kPunct && Peek().text == p;
  }

  [[noreturn]] static void Fail(const Token &t, const std::string &msg) {
    std::string near = t.kind == Tok::kEnd ? "end of query" : "'" + t.text + "'";
    throw SyntaxError(
        "syntax error at offset " + std::to_string(t.pos) + " near " + near + ": " + msg, t.pos);
  }
  [[noreturn]] static void Unsupported(const Token &t, const std::string &what) {
    throw UnsupportedFeature(what + " (offset " + std::to_string(t.pos) + ")", t.pos);
  }

  void CheckUnsupportedWord() const {
    if (Peek().kind == Tok::kWord && UnsupportedKeywords().count(Upper(Peek().text))) {
      Unsupported(Peek(), Upper(Peek().text));
    }
  }

  void Expect(std::string_view p) {
    if (!IsPunct(p)) Fail(Peek(), "expected '" + std::string(p) + "'");
    Advance();
  }

  Term Expand(const Token &t) {
    const size_t colon = t.text.find(':');
    const std::string prefix = t.text.substr(0, colon);
    auto it = prefixes_.find(prefix);
    if (it == prefixes_.end()) {
      throw UnknownPrefix("unknown prefix '" + prefix + ":' at offset " + std::to_string(t.pos),
                          t.pos);
    }
    return MakeIri(it->second + t.text.substr(colon + 1), t);
  }

  static Term MakeIri(const std::string &iri, const Token &t) {
    if (!IsAbsoluteIri(iri)) Fail(t, "'" + iri + "' is not an absolute IRI");
    return Term::Iri(iri);
  }

  Term MakeLiteral(const Token &t) {
    std::string datatype;
    if (!t.datatype.empty()) {
      Token dt;
      dt.text = t.datatype;
      dt.pos = t.datatype_pos;
      datatype = t.datatype_is_pname ? Expand(dt).value() : MakeIri(t.datatype, dt).value();
    }
    return Term::Literal(t.text, datatype, t.lang);
  }

  // Position: 0 subject, 1 predicate, 2 object.
  PatternTerm ParseTerm(int position) {
    const Token &t = Peek();
    PatternTerm out;
    switch (t.kind) {
      case Tok::kVar:
        out.var = t.text;
        pattern_vars_.insert(t.text);
        break;
      case Tok::kIri:
        out.term = MakeIri(t.text, t);
        break;
      case Tok::kPname:
        out.term = Expand(t);
        break;
      case Tok::kString:
        if (position != 2) Fail(t, "a literal can only appear in object position");
        out.term = MakeLiteral(t);
        break;
      case Tok::kWord:
        if (position == 1 && t.text == "a") {
          out.term = Term::Iri(vocab::kRdfType);
          break;
        }
        CheckUnsupportedWord();
        Fail(t, "expected a variable, IRI or prefixed name");
      case Tok::kNumber:
        Unsupported(t, "numeric literals");
      case Tok::kPunct:
        if (t.text == "[" || t.text == "(") Unsupported(t, "blank nodes and collections");
        Fail(t, "expected a variable, IRI or prefixed name");
      case Tok::kOp:
        if (t.text == "[") Unsupported(t, "blank nodes");
        if (position == 1 && (t.text == "^" || t.text == "!")) Unsupported(t, "property paths");
        Fail(t, "expected a variable, IRI or prefixed name");
      case Tok::kEnd:
        Fail(t, "unexpected end of query");
    }
    Advance();
    if (position == 1 && Peek().kind == Tok::kOp &&
        (Peek().text == "/" || Peek().text == "|" || Peek().text == "+")) {
      Unsupported(Peek(), "property paths");
    }
    if (position == 1 && IsPunct("*")) Unsupported(Peek(), "property paths");
    return out;
  }

  // subject (predicate object (',' object)* (';' ...)*)
  void ParseTriples(std::vector<TriplePattern> &out) {
    PatternTerm s = ParseTerm(0);
    for (;;) {
      PatternTerm p = ParseTerm(1);
      for (;;) {
        PatternTerm o = ParseTerm(2);
        out.push_back(TriplePattern{s, p, o});
        if (!IsPunct(",")) break;
        Advance();
      }
      if (!IsPunct(";")) break;
      while (IsPunct(";")) Advance();
      if (IsPunct(".") || IsPunct("}")) break;
    }
  }

  bool AtTermStart() const {
    const Token &t = Peek();
    return t.kind == Tok::kVar || t.kind == Tok::kIri || t.kind == Tok::kPname;
  }

  void ParseGroup(Query &q) {
    for (;;) {
      CheckUnsupportedWord();
      if (IsPunct("}") || Peek().kind == Tok::kEnd) return;
      if (IsPunct(".")) {
        Advance();
        continue;
      }
      if (IsPunct("{")) Unsupported(Peek(), "nested group patterns");
      if (IsWord("OPTIONAL")) {
        Advance();
        Expect("{");
        OptionalGroup group;
        for (;;) {
          CheckUnsupportedWord();
          if (IsPunct("}")) break;
          if (IsPunct(".")) {
            Advance();
            continue;
          }
          if (IsPunct("{")) Unsupported(Peek(), "nested group patterns");
          if (IsWord("OPTIONAL")) Unsupported(Peek(), "nested OPTIONAL");
          if (IsWord("FILTER")) Unsupported(Peek(), "FILTER inside OPTIONAL");
          if (!AtTermStart()) Fail(Peek(), "expected a triple pattern");
          ParseTriples(group.patterns);
          if (IsWord("FILTER")) Unsupported(Peek(), "FILTER inside OPTIONAL");
          CheckUnsupportedWord();
          if (!IsPunct(".") && !IsPunct("}")) Fail(Peek(), "expected '.' or '}'");
        }
        Expect("}");
        if (group.patterns.empty()) Fail(Peek(), "empty OPTIONAL group");
        q.where.emplace_back(std::move(group));
        continue;
      }
      if (IsWord("FILTER")) {
        Advance();
        q.where.emplace_back(ParseConstraint());
        continue;
      }
      if (!AtTermStart()) {
        if (Peek().kind == Tok::kString) Fail(Peek(), "a literal cannot be a subject");
        Fail(Peek(), "expected a triple pattern, OPTIONAL or FILTER");
      }
      std::vector<TriplePattern> triples;
      ParseTriples(triples);
      for (auto &t : triples) q.where.emplace_back(std::move(t));
      if (!IsPunct(".") && !IsPunct("}") && !IsWord("OPTIONAL") && !IsWord("FILTER")) {
        CheckUnsupportedWord();
        Fail(Peek(), "expected '.', '}', OPTIONAL or FILTER");
      }
    }
  }

  FilterExpr ParseConstraint() {
    if (IsPunct("(")) {
      Advance();
      FilterExpr e = ParseOr();
      Expect(")");
      return e;
    }
    if (Peek().kind == Tok::kWord) return ParseCall();
    Fail(Peek(), "expected '(' or a function call after FILTER");
  }

  FilterExpr ParseOr() {
    FilterExpr lhs = ParseAnd();
    while (Peek().kind == Tok::kOp && Peek().text == "||") {
      Advance();
      FilterExpr e;
      e.op = FilterExpr::Op::kOr;
      e.children.push_back(std::move(lhs));
      e.children.push_back(ParseAnd());
      lhs = std::move(e);
    }
    return lhs;
  }

  FilterExpr ParseAnd() {
    FilterExpr lhs = ParsePrimary();
    while (Peek().kind == Tok::kOp && Peek().text == "&&") {
      Advance();
      FilterExpr e;
      e.op = FilterExpr::Op::kAnd;
      e.children.push_back(std::move(lhs));
      e.children.push_back(ParsePrimary());
      lhs = std::move(e);
    }
    return lhs;
  }

  FilterExpr ParsePrimary() {
    if (IsPunct("(")) {
      Advance();
      FilterExpr e = ParseOr();
      Expect(")");
      return e;
    }
    if (Peek().kind == Tok::kOp && Peek().text == "!") Unsupported(Peek(), "operator '!'");
    if (Peek().kind == Tok::kWord) return ParseCall();
    FilterExpr e;
    e.op = FilterExpr::Op::kEquals;
    e.lhs = ParseOperand();
    const Token &op = Peek();
    if (op.kind == Tok::kOp) Unsupported(op, "operator '" + op.text + "'");
    if (!(op.kind == Tok::kPunct && op.text == "=")) Fail(op, "expected '='");
    Advance();
    e.rhs = ParseOperand();
    RejectOperatorAfterOperand();
    return e;
  }

  FilterExpr ParseCall() {
    const Token &name = Peek();
    if (Upper(name.text) != "CONTAINS") {
      if (IsPunctAt(1, "(") || UnsupportedKeywords().count(Upper(name.text))) {
        Unsupported(name, "function " + Upper(name.text));
      }
      Fail(name, "expected an expression");
    }
    Advance();
    Expect("(");
    FilterExpr e;
    e.op = FilterExpr::Op::kContains;
    e.lhs = ParseOperand();
    Expect(",");
    const Token &needle = Peek();
    if (needle.kind != Tok::kString) Fail(needle, "CONTAINS expects a string constant");
    e.rhs = ParseOperand();
    Expect(")");
    RejectOperatorAfterOperand();
    return e;
  }

  bool IsPunctAt(size_t ahead, std::string_view p) const {
    return Peek(ahead).kind == Tok::kPunct && Peek(ahead).text == p;
  }

  void RejectOperatorAfterOperand() const {
    const Token &t = Peek();
    if (t.kind == Tok::kOp && t.text != "&&" && t.text != "||") {
      Unsupported(t, "operator '" + t.text + "'");
    }
    if (t.kind == Tok::kPunct && (t.text == "=" || t.text == "*")) {
      Unsupported(t, "operator '" + t.text + "'");
    }
  }

  PatternTerm ParseOperand() {
    const Token &t = Peek();
    PatternTerm out;
    switch (t.kind) {
      case Tok::kVar:
        out.var = t.text;
        filter_vars_.emplace(t.text, t.pos);
        break;
      case Tok::kIri:
        out.term = MakeIri(t.text, t);
        break;
      case Tok::kPname:
        out.term = Expand(t);
        break;
      case Tok::kString:
        out.term = MakeLiteral(t);
        break;
      case Tok::kNumber:
        Unsupported(t, "numeric literals");
      default:
        Fail(t, "expected a variable, IRI or string");
    }
    Advance();
    return out;
  }

  std::vector<Token> toks_;
  size_t k_ = 0;
  std::map<std::string, std::string> prefixes_;
  std::set<std::string> pattern_vars_;
  std::map<std::string, size_t> filter_vars_;
};

// Evaluation state: terms are compared by store id; constants absent from the
// store get no id and therefore match nothing.
struct Slot {
  int var = -1;                  // >= 0: variable index
  std::optional<TermId> id;      // constant id when present in the store
  const Term *term = nullptr;    // constant term
};

struct CompiledPattern {
  Slot s, p, o;
  bool impossible = false;
};

struct CompiledFilter {
  FilterExpr::Op op;
  Slot lhs, rhs;
  std::vector<CompiledFilter> children;
};

class Evaluator {
 public:
  Evaluator(const TripleStore &store, const Query &query) : store_(store), query_(query) {
    for (const auto &el : query.where) {
      if (const auto *tp = std::get_if<TriplePattern>(&el)) {
        steps_.push_back(Step{false, {Compile(*tp)}});
      } else if (const auto *opt = std::get_if<OptionalGroup>(&el)) {
        Step step{true, {}};
        for (const auto &tp : opt->patterns) step.patterns.push_back(Compile(tp));
        steps_.push_back(std::move(step));
      } else {
        filters_.push_back(CompileFilter(std::get<FilterExpr>(el)));
      }
    }
    for (const auto &v : query.projection) projection_.push_back(VarIndex(v));
    PushDownEqualities();
  }

  ResultTable Run() {
    ResultTable table;
    table.vars = query_.projection;
    std::vector<std::optional<TermId>> row(vars_.size());
    for (const auto &[var, id] : pinned_) row[var] = id;
    if (!impossible_) {
      Solve(0, row, [&](const std::vector<std::optional<TermId>> &r) {
        for (const auto &f : filters_) {
          if (Eval(f, r) != 1) return;
        }
        std::vector<std::optional<Term>> out;
        out.reserve(projection_.size());
        for (int v : projection_) {
          if (r[v]) {
            out.emplace_back(store_.term(*r[v]));
          } else {
            out.emplace_back(std::nullopt);
          }
        }
        table.rows.push_back(std::move(out));
      });
    }
    SortRows(table);
    return table;
  }

 private:
  struct Step {
    bool optional;
    std::vector<CompiledPattern> patterns;
  };
  using Row = std::vector<std::optional<TermId>>;
  using Sink = std::function<void(const Row &)>;

  int VarIndex(const std::string &name) {
    auto it = var_index_.find(name);
    if (it != var_index_.end()) return it->second;
    int idx = static_cast<int>(vars_.size());
    vars_.push_back(name);
    var_index_.emplace(name, idx);
    return idx;
  }

  Slot CompileSlot(const PatternTerm &t) {
    Slot s;
    if (t.is_var()) {
      s.var = VarIndex(t.var);
    } else {
      s.term = &t.term;
      s.id = store_.Find(t.term);
    }
    return s;
  }

  CompiledPattern Compile(const TriplePattern &tp) {
    CompiledPattern c{CompileSlot(tp.s), CompileSlot(tp.p), CompileSlot(tp.o)};
    for (const Slot *s : {&c.s, &c.p, &c.o}) {
      if (s->var < 0 && !s->id) c.impossible = true;
    }
    return c;
  }

  CompiledFilter CompileFilter(const FilterExpr &e) {
    CompiledFilter f;
    f.op = e.op;
    if (e.op == FilterExpr::Op::kAnd || e.op == FilterExpr::Op::kOr) {
      for (const auto &c : e.children) f.children.push_back(CompileFilter(c));
    } else {
      f.lhs = CompileSlot(e.lhs);
      f.rhs = CompileSlot(e.rhs);
    }
    return f;
  }

  // A top-level conjunct "?v = const" where ?v is bound by a mandatory
  // pattern can be applied before joining without changing the result.
  void PushDownEqualities() {
    std::set<int> mandatory;
    for (const auto &step : steps_) {
      if (step.optional) continue;
      for (const auto &p : step.patterns) {
        for (const Slot *s : {&p.s, &p.p, &p.o}) {
          if (s->var >= 0) mandatory.insert(s->var);
        }
      }
    }
    std::function<void(const CompiledFilter &)> visit = [&](const CompiledFilter &f) {
      if (f.op == FilterExpr::Op::kAnd) {
        for (const auto &c : f.children) visit(c);
        return;
      }
      if (f.op != FilterExpr::Op::kEquals) return;
      const Slot *var = f.lhs.var >= 0 ? &f.lhs : &f.rhs;
      const Slot *constant = f.lhs.var >= 0 ? &f.rhs : &f.lhs;
      if (var->var < 0 || constant->var >= 0 || !mandatory.count(var->var)) return;
      if (!constant->id) {
        impossible_ = true;
        return;
      }
      auto [it, inserted] = pinned_.emplace(var->var, *constant->id);
      if (!inserted && it->second != *constant->id) impossible_ = true;
    };
    for (const auto &f : filters_) visit(f);
    for (const auto &step : steps_) {
      if (step.optional) continue;
      for (const auto &p : step.patterns) {
        if (p.impossible) impossible_ = true;
      }
    }
  }

  static std::optional<TermId> Value(const Slot &s, const Row &row) {
    return s.var >= 0 ? row[s.var] : s.id;
  }

  // Joins patterns[i..] onto 'row', calling 'done' for each completion.
  void Join(const std::vector<CompiledPattern> &patterns, size_t i, Row &row,
            const Sink &done) {
    if (i == patterns.size()) {
      done(row);
      return;
    }
    const CompiledPattern &p = patterns[i];
    if (p.impossible) return;
    auto s = Value(p.s, row), pr = Value(p.p, row), o = Value(p.o, row);
    store_.MatchIds(s, pr, o, [&](TermId ms, TermId mp, TermId mo) {
      std::vector<int> bound;
      bool ok = true;
      const std::pair<const Slot *, TermId> parts[3] = {{&p.s, ms}, {&p.p, mp}, {&p.o, mo}};
      for (const auto &[slot, id] : parts) {
        if (slot->var < 0) continue;
        if (row[slot->var]) {
          if (*row[slot->var] != id) ok = false;  // repeated variable in one pattern
        } else {
          row[slot->var] = id;
          bound.push_back(slot->var);
        }
      }
      if (ok) Join(patterns, i + 1, row, done);
      for (int v : bound) row[v].reset();
      return true;
    });
  }

  void Solve(size_t step, Row &row, const Sink &emit) {
    if (step == steps_.size()) {
      emit(row);
      return;
    }
    const Step &st = steps_[step];
    if (!st.optional) {
      Join(st.patterns, 0, row, [&](const Row &) { Solve(step + 1, row, emit); });
      return;
    }
    std::vector<Row> extensions;
    Join(st.patterns, 0, row, [&](const Row &r) { extensions.push_back(r); });
    if (extensions.empty()) {
      Solve(step + 1, row, emit);
      return;
    }
    for (auto &ext : extensions) Solve(step + 1, ext, emit);
  }

  // 1 true, 0 false, -1 error.
  int Eval(const CompiledFilter &f, const Row &row) const {
    switch (f.op) {
      case FilterExpr::Op::kAnd: {
        int a = Eval(f.children[0], row), b = Eval(f.children[1], row);
        if (a == 0 || b == 0) return 0;
        if (a < 0 || b < 0) return -1;
        return 1;
      }
      case FilterExpr::Op::kOr: {
        int a = Eval(f.children[0], row), b = Eval(f.children[1], row);
        if (a == 1 || b == 1) return 1;
        if (a < 0 || b < 0) return -1;
        return 0;
      }
      case FilterExpr::Op::kEquals: {
        if ((f.lhs.var >= 0 && !row[f.lhs.var]) || (f.rhs.var >= 0 && !row[f.rhs.var])) {
          return -1;
        }
        const Term &a = TermOf(f.lhs, row), &b = TermOf(f.rhs, row);
        return a == b ? 1 : 0;
      }
      case FilterExpr::Op::kContains: {
        if (f.lhs.var >= 0 && !row[f.lhs.var]) return -1;
        const Term &hay = TermOf(f.lhs, row);
        const Term &needle = TermOf(f.rhs, row);
        if (!hay.is_literal()) return -1;
        return hay.value().find(needle.value()) != std::string::npos ? 1 : 0;
      }
    }
    return -1;
  }

  const Term &TermOf(const Slot &s, const Row &row) const {
    if (s.var >= 0) return store_.term(*row[s.var]);
    return *s.term;
  }

  const TripleStore &store_;
  const Query &query_;
  std::vector<std::string> vars_;
  std::map<std::string, int> var_index_;
  std::vector<Step> steps_;
  std::vector<CompiledFilter> filters_;
  std::vector<int> projection_;
  std::map<int, TermId> pinned_;
  bool impossible_ = false;
};

void AppendTsvTerm(const Term &t, std::string &out) {
  out += t.ToNTriples();
}

}  // namespace

std::vector<TriplePattern> Query::Bgp() const {
  std::vector<TriplePattern> out;
  for (const auto &el : where) {
    if (const auto *tp = std::get_if<TriplePattern>(&el)) out.push_back(*tp);
  }
  return out;
}

std::vector<FilterExpr> Query::Filters() const {
  std::vector<FilterExpr> out;
  for (const auto &el : where) {
    if (const auto *f = std::get_if<FilterExpr>(&el)) out.push_back(*f);
  }
  return out;
}

Query ParseQuery(std::string_view text) { return Parser(text).Run(); }

void SortRows(ResultTable &table) { std::sort(table.rows.begin(), table.rows.end()); }

ResultTable EvaluateQuery(const TripleStore &store, const Query &query) {
  return Evaluator(store, query).Run();
}

std::string SerializeResults(const ResultTable &table, ResultFormat format) {
  if (format == ResultFormat::kTsv) {
    std::string out;
    for (size_t i = 0; i < table.vars.size(); ++i) {
      if (i) out += '\t';
      out += '?' + table.vars[i];
    }
    out += '\n';
    for (const auto &row : table.rows) {
      for (size_t i = 0; i < row.size(); ++i) {
        if (i) out += '\t';
        if (row[i]) AppendTsvTerm(*row[i], out);
      }
      out += '\n';
    }
    return out;
  }
  Json bindings = Json::array();
  for (const auto &row : table.rows) {
    Json b = Json::object();
    for (size_t i = 0; i < row.size(); ++i) {
      if (!row[i]) continue;
      const Term &t = *row[i];
      Json cell = {{"type", t.is_iri() ? "uri" : "literal"}, {"value", t.value()}};
      if (!t.datatype().empty()) cell["datatype"] = t.datatype();
      if (!t.language().empty()) cell["xml:lang"] = t.language();
      b[table.vars[i]] = std::move(cell);
    }
    bindings.push_back(std::move(b));
  }
  Json doc = {{"head", {{"vars", table.vars}}}, {"results", {{"bindings", bindings}}}};
  return doc.dump();
}

ResultFormat ParseResultFormat(std::string_view name) {
  if (name == "json") return ResultFormat::kJson;
  if (name == "tsv") return ResultFormat::kTsv;
  throw Error("unknown result format '" + std::string(name) + "' (expected json or tsv)");
}

}  // namespace instkg
