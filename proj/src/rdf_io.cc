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

#include "instkg/rdf_io.h"

#include <algorithm>
#include <cctype>
#include <map>

#include "instkg/error.h"
#include "instkg/io.h"
#include "instkg/kernels.h"
#include "instkg/unicode.h"

namespace instkg {
namespace {

int HexValue(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

// Cursor over a character buffer with line tracking. Shared by the
// N-Triples line parser and the Turtle parser.
class Scanner {
 public:
  Scanner(std::string_view text, size_t line) : text_(text), line_(line) {}

  bool AtEnd() const { return pos_ >= text_.size(); }
  char Peek(size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }
  char Next() {
    char c = text_[pos_++];
    if (c == '\n') ++line_;
    return c;
  }
  bool StartsWith(std::string_view s) const { return text_.substr(pos_, s.size()) == s; }
  bool StartsWithKeyword(std::string_view kw) const {
    if (pos_ + kw.size() > text_.size()) return false;
    for (size_t i = 0; i < kw.size(); ++i) {
      if (std::toupper(static_cast<unsigned char>(text_[pos_ + i])) !=
          std::toupper(static_cast<unsigned char>(kw[i]))) {
        return false;
      }
    }
    return true;
  }
  void Advance(size_t n) {
    for (size_t i = 0; i < n && !AtEnd(); ++i) Next();
  }
  size_t line() const { return line_; }

  [[noreturn]] void Fail(const std::string &message) const { throw ParseError(line_, message); }

  // Skips spaces and tabs; with 'newlines' also line breaks and comments.
  void SkipSpace(bool newlines) {
    while (!AtEnd()) {
      char c = Peek();
      if (c == ' ' || c == '\t') {
        Next();
      } else if (newlines && (c == '\n' || c == '\r')) {
        Next();
      } else if (newlines && c == '#') {
        while (!AtEnd() && Peek() != '\n') Next();
      } else {
        break;
      }
    }
  }

  void Expect(char c, const char *what) {
    if (Peek() != c || AtEnd()) Fail(std::string("expected ") + what);
    Next();
  }

  // \uXXXX or \UXXXXXXXX, positioned after the backslash.
  void ReadUnicodeEscape(std::string *out) {
    char kind = Next();
    int digits = kind == 'u' ? 4 : 8;
    char32_t cp = 0;
    for (int i = 0; i < digits; ++i) {
      if (AtEnd()) Fail("truncated unicode escape");
      int v = HexValue(Next());
      if (v < 0) Fail("bad hex digit in unicode escape");
      cp = cp * 16 + static_cast<char32_t>(v);
    }
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) Fail("invalid code point escape");
    AppendUtf8(cp, out);
  }

  std::string ReadIriRef() {
    Expect('<', "'<'");
    std::string iri;
    while (true) {
      if (AtEnd()) Fail("unterminated IRI");
      char c = Next();
      if (c == '>') break;
      if (c == '\\') {
        if (Peek() != 'u' && Peek() != 'U') Fail("invalid escape in IRI");
        ReadUnicodeEscape(&iri);
        continue;
      }
      unsigned char u = static_cast<unsigned char>(c);
      if (u <= 0x20 || c == '<' || c == '"' || c == '{' || c == '}' || c == '|' ||
          c == '^' || c == '`') {
        Fail("invalid character in IRI");
      }
      iri.push_back(c);
    }
    return iri;
  }

  // Positioned at the opening quote. Handles '"', '\'' and the triple-quoted
  // long forms when 'allow_long'.
  std::string ReadString(bool allow_long) {
    char quote = Peek();
    bool long_form = allow_long && Peek(1) == quote && Peek(2) == quote;
    Advance(long_form ? 3 : 1);
    std::string out;
    while (true) {
      if (AtEnd()) Fail("unterminated string literal");
      char c = Peek();
      if (long_form) {
        if (c == quote && Peek(1) == quote && Peek(2) == quote) {
          // Extra quotes before the closing triple belong to the content.
          if (Peek(3) == quote) {
            out.push_back(Next());
            continue;
          }
          Advance(3);
          break;
        }
      } else if (c == quote) {
        Next();
        break;
      } else if (c == '\n' || c == '\r') {
        Fail("newline in string literal");
      }
      Next();
      if (c != '\\') {
        out.push_back(c);
        continue;
      }
      if (AtEnd()) Fail("truncated escape");
      char e = Peek();
      switch (e) {
        case 't': out.push_back('\t'); Next(); break;
        case 'b': out.push_back('\b'); Next(); break;
        case 'n': out.push_back('\n'); Next(); break;
        case 'r': out.push_back('\r'); Next(); break;
        case 'f': out.push_back('\f'); Next(); break;
        case '"': out.push_back('"'); Next(); break;
        case '\'': out.push_back('\''); Next(); break;
        case '\\': out.push_back('\\'); Next(); break;
        case 'u':
        case 'U': ReadUnicodeEscape(&out); break;
        default: Fail(std::string("invalid escape \\") + e);
      }
    }
    return out;
  }

  std::string ReadLangTag() {
    Expect('@', "'@'");
    std::string tag;
    while (!AtEnd() && (std::isalnum(static_cast<unsigned char>(Peek())) || Peek() == '-')) {
      tag.push_back(Next());
    }
    if (tag.empty() || !std::isalpha(static_cast<unsigned char>(tag[0])) || tag.back() == '-') {
      Fail("malformed language tag");
    }
    return tag;
  }

 private:
  std::string_view text_;
  size_t pos_ = 0;
  size_t line_;
};

Term MakeIri(Scanner &sc, std::string iri) {
  if (!IsAbsoluteIri(iri)) sc.Fail("IRI is not absolute: <" + iri + ">");
  return Term::Iri(std::move(iri));
}

Term MakeLiteral(Scanner &sc, std::string lexical, std::string datatype, std::string lang) {
  if (!datatype.empty() && !IsAbsoluteIri(datatype)) sc.Fail("datatype IRI is not absolute");
  return Term::Literal(std::move(lexical), std::move(datatype), std::move(lang));
}

// ---------------------------------------------------------------------------
// Turtle

class TurtleParser {
 public:
  explicit TurtleParser(std::string_view text) : sc_(text, 1) {}

  std::vector<Triple> Parse() {
    std::vector<Triple> out;
    while (true) {
      sc_.SkipSpace(true);
      if (sc_.AtEnd()) break;
      if (sc_.StartsWith("@prefix")) {
        sc_.Advance(7);
        ParsePrefix();
        sc_.SkipSpace(true);
        sc_.Expect('.', "'.' after @prefix");
      } else if (sc_.StartsWith("@base")) {
        sc_.Advance(5);
        ParseBase();
        sc_.SkipSpace(true);
        sc_.Expect('.', "'.' after @base");
      } else if (sc_.StartsWithKeyword("PREFIX") && IsKeywordEnd(6)) {
        sc_.Advance(6);
        ParsePrefix();
      } else if (sc_.StartsWithKeyword("BASE") && IsKeywordEnd(4)) {
        sc_.Advance(4);
        ParseBase();
      } else {
        ParseTriples(&out);
      }
    }
    return out;
  }

 private:
  bool IsKeywordEnd(size_t n) const {
    char c = sc_.Peek(n);
    return c == ' ' || c == '\t' || c == '\n' || c == '\r';
  }

  void ParsePrefix() {
    sc_.SkipSpace(true);
    std::string name;
    while (!sc_.AtEnd() && sc_.Peek() != ':') {
      char c = sc_.Peek();
      if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) {
        sc_.Fail("malformed prefix name");
      }
      name.push_back(sc_.Next());
    }
    sc_.Expect(':', "':' in prefix declaration");
    sc_.SkipSpace(true);
    prefixes_[name] = Resolve(sc_.ReadIriRef());
  }

  void ParseBase() {
    sc_.SkipSpace(true);
    base_ = Resolve(sc_.ReadIriRef());
  }

  std::string Resolve(std::string iri) const {
    if (IsAbsoluteIri(iri) || base_.empty()) return iri;
    if (!iri.empty() && iri[0] == '#') return base_ + iri;
    auto slash = base_.rfind('/');
    return base_.substr(0, slash + 1) + iri;
  }

  bool IsNameChar(char c) const {
    unsigned char u = static_cast<unsigned char>(c);
    return std::isalnum(u) || c == '_' || c == '-' || c == '.' || u >= 0x80;
  }

  Term ParsePrefixedName() {
    std::string prefix;
    while (!sc_.AtEnd() && sc_.Peek() != ':') {
      if (!IsNameChar(sc_.Peek())) sc_.Fail("unexpected character in prefixed name");
      prefix.push_back(sc_.Next());
    }
    sc_.Expect(':', "':'");
    std::string local;
    while (!sc_.AtEnd()) {
      char c = sc_.Peek();
      if (c == '\\') {
        sc_.Next();
        local.push_back(sc_.Next());
        continue;
      }
      if (!(IsNameChar(c) || c == ':' || c == '%')) break;
      // A trailing '.' ends the statement, not the name.
      if (c == '.') {
        char n = sc_.Peek(1);
        if (!(IsNameChar(n) || n == ':')) break;
      }
      local.push_back(sc_.Next());
    }
    auto it = prefixes_.find(prefix);
    if (it == prefixes_.end()) sc_.Fail("unknown prefix '" + prefix + ":'");
    return MakeIri(sc_, it->second + local);
  }

  Term ParseIriTerm() {
    if (sc_.Peek() == '<') return MakeIri(sc_, Resolve(sc_.ReadIriRef()));
    if (sc_.Peek() == '_' && sc_.Peek(1) == ':') sc_.Fail("blank nodes are not supported");
    if (sc_.Peek() == '[') sc_.Fail("blank nodes are not supported");
    if (sc_.Peek() == '(') sc_.Fail("collections are not supported");
    return ParsePrefixedName();
  }

  Term ParseObject() {
    char c = sc_.Peek();
    if (c == '"' || c == '\'') {
      std::string lexical = sc_.ReadString(true);
      if (sc_.Peek() == '@') return Term::Literal(std::move(lexical), "", sc_.ReadLangTag());
      if (sc_.StartsWith("^^")) {
        sc_.Advance(2);
        Term dt = ParseIriTerm();
        return MakeLiteral(sc_, std::move(lexical), dt.value(), "");
      }
      return Term::Literal(std::move(lexical));
    }
    if (c == '+' || c == '-' || std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && std::isdigit(static_cast<unsigned char>(sc_.Peek(1))))) {
      return ParseNumber();
    }
    if (sc_.StartsWith("true") && !IsNameChar(sc_.Peek(4)) && sc_.Peek(4) != ':') {
      sc_.Advance(4);
      return Term::Literal("true", std::string(vocab::kXsdBoolean));
    }
    if (sc_.StartsWith("false") && !IsNameChar(sc_.Peek(5)) && sc_.Peek(5) != ':') {
      sc_.Advance(5);
      return Term::Literal("false", std::string(vocab::kXsdBoolean));
    }
    return ParseIriTerm();
  }

  Term ParseNumber() {
    std::string lex;
    if (sc_.Peek() == '+' || sc_.Peek() == '-') lex.push_back(sc_.Next());
    bool dot = false;
    bool exp = false;
    while (!sc_.AtEnd()) {
      char c = sc_.Peek();
      if (std::isdigit(static_cast<unsigned char>(c))) {
        lex.push_back(sc_.Next());
      } else if (c == '.' && !dot && !exp &&
                 std::isdigit(static_cast<unsigned char>(sc_.Peek(1)))) {
        dot = true;
        lex.push_back(sc_.Next());
      } else if ((c == 'e' || c == 'E') && !exp) {
        exp = true;
        lex.push_back(sc_.Next());
        if (sc_.Peek() == '+' || sc_.Peek() == '-') lex.push_back(sc_.Next());
      } else {
        break;
      }
    }
    if (lex.empty() || lex == "+" || lex == "-") sc_.Fail("malformed number");
    std::string_view dt = exp ? vocab::kXsdDouble : dot ? vocab::kXsdDecimal : vocab::kXsdInteger;
    return Term::Literal(lex, std::string(dt));
  }

  void ParseTriples(std::vector<Triple> *out) {
    Term subject = ParseIriTerm();
    while (true) {
      sc_.SkipSpace(true);
      Term predicate;
      if (sc_.Peek() == 'a' && (IsKeywordEnd(1) || sc_.Peek(1) == '<' || sc_.Peek(1) == '"')) {
        sc_.Next();
        predicate = Term::Iri(std::string(vocab::kRdfType));
      } else {
        predicate = ParseIriTerm();
      }
      while (true) {
        sc_.SkipSpace(true);
        out->push_back(Triple{subject, predicate, ParseObject()});
        sc_.SkipSpace(true);
        if (sc_.Peek() != ',') break;
        sc_.Next();
      }
      if (sc_.Peek() == ';') {
        while (sc_.Peek() == ';') {
          sc_.Next();
          sc_.SkipSpace(true);
        }
        if (sc_.Peek() == '.') break;
        continue;
      }
      break;
    }
    sc_.SkipSpace(true);
    sc_.Expect('.', "'.' at end of statement");
  }

  Scanner sc_;
  std::map<std::string, std::string> prefixes_;
  std::string base_;
};

// Local names we emit unescaped: [A-Za-z0-9_-]+, not starting with '-'.
bool SafeLocalName(std::string_view local) {
  if (local.empty() || local[0] == '-') return false;
  for (char c : local) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
  }
  return true;
}

std::string CompactIri(const std::string &iri, const PrefixMap &prefixes) {
  for (const auto &[name, base] : prefixes) {
    if (iri.size() > base.size() && iri.compare(0, base.size(), base) == 0 &&
        SafeLocalName(std::string_view(iri).substr(base.size()))) {
      return name + ":" + iri.substr(base.size());
    }
  }
  return "<" + iri + ">";
}

std::string TurtleTerm(const Term &t, const PrefixMap &prefixes) {
  if (t.is_iri()) return CompactIri(t.value(), prefixes);
  std::string out = "\"";
  AppendEscapedLiteral(t.value(), &out);
  out.push_back('"');
  if (!t.language().empty()) {
    out += "@" + t.language();
  } else if (!t.datatype().empty()) {
    out += "^^" + CompactIri(t.datatype(), prefixes);
  }
  return out;
}

}  // namespace

const PrefixMap &DefaultPrefixes() {
  static const PrefixMap kPrefixes = {
      {"orkgr", "http://orkg.org/orkg/resource/"},
      {"orkgc", "http://orkg.org/orkg/class/"},
      {"orkgp", "http://orkg.org/orkg/predicate/"},
      {"rdf", "http://www.w3.org/1999/02/22-rdf-syntax-ns#"},
      {"rdfs", "http://www.w3.org/2000/01/rdf-schema#"},
      {"xsd", "http://www.w3.org/2001/XMLSchema#"},
  };
  return kPrefixes;
}

std::string SerializeNTriples(const TripleStore &store) {
  std::vector<std::string> lines;
  lines.reserve(store.size());
  for (const auto &t : store.Triples()) lines.push_back(t.ToNTriples());
  std::sort(lines.begin(), lines.end());
  std::string out;
  size_t total = 0;
  for (const auto &l : lines) total += l.size() + 1;
  out.reserve(total);
  for (const auto &l : lines) {
    out += l;
    out.push_back('\n');
  }
  return out;
}

std::optional<Triple> ParseNTriplesLine(std::string_view line, size_t line_number) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  Scanner sc(line, line_number);
  sc.SkipSpace(false);
  if (sc.AtEnd() || sc.Peek() == '#') return std::nullopt;

  auto read_iri = [&](const char *what) {
    if (sc.Peek() == '_' && sc.Peek(1) == ':') sc.Fail("blank nodes are not supported");
    if (sc.Peek() != '<') sc.Fail(std::string("expected IRI for ") + what);
    return MakeIri(sc, sc.ReadIriRef());
  };

  Term subject = read_iri("subject");
  sc.SkipSpace(false);
  Term predicate = read_iri("predicate");
  sc.SkipSpace(false);
  Term object;
  if (sc.Peek() == '"') {
    std::string lexical = sc.ReadString(false);
    if (sc.Peek() == '@') {
      object = Term::Literal(std::move(lexical), "", sc.ReadLangTag());
    } else if (sc.StartsWith("^^")) {
      sc.Advance(2);
      object = MakeLiteral(sc, std::move(lexical), sc.ReadIriRef(), "");
    } else {
      object = Term::Literal(std::move(lexical));
    }
  } else {
    object = read_iri("object");
  }
  sc.SkipSpace(false);
  if (sc.AtEnd() || sc.Peek() != '.') sc.Fail("missing terminal '.'");
  sc.Next();
  sc.SkipSpace(false);
  if (!sc.AtEnd() && sc.Peek() != '#') sc.Fail("trailing characters after '.'");
  return Triple{std::move(subject), std::move(predicate), std::move(object)};
}

TripleStore LoadNTriples(std::string_view text) {
  std::vector<Triple> triples = parallel::ParseNTriples(text);
  TripleStore store;
  store.InsertAll(triples);
  return store;
}

std::vector<Triple> ParseTurtle(std::string_view text) { return TurtleParser(text).Parse(); }

TripleStore LoadTurtle(std::string_view text) {
  std::vector<Triple> triples = ParseTurtle(text);
  TripleStore store;
  store.InsertAll(triples);
  return store;
}

std::string SerializeTurtle(const TripleStore &store, const PrefixMap &prefixes) {
  std::string out;
  for (const auto &[name, base] : prefixes) {
    out += "@prefix " + name + ": <" + base + "> .\n";
  }
  if (!prefixes.empty()) out.push_back('\n');

  // Group by subject then predicate in canonical term order.
  std::map<Term, std::map<Term, std::vector<Term>>> grouped;
  for (const auto &t : store.Triples()) grouped[t.subject][t.predicate].push_back(t.object);
  for (auto &[subject, preds] : grouped) {
    out += TurtleTerm(subject, prefixes);
    bool first_pred = true;
    for (auto &[pred, objects] : preds) {
      std::sort(objects.begin(), objects.end());
      out += first_pred ? " " : " ;\n    ";
      first_pred = false;
      out += pred.value() == vocab::kRdfType ? "a" : TurtleTerm(pred, prefixes);
      for (size_t i = 0; i < objects.size(); ++i) {
        out += i == 0 ? " " : ", ";
        out += TurtleTerm(objects[i], prefixes);
      }
    }
    out += " .\n";
  }
  return out;
}

TripleStore LoadRdfFile(const std::filesystem::path &path) {
  std::string text = ReadFile(path);
  if (path.extension() == ".ttl") return LoadTurtle(text);
  return LoadNTriples(text);
}

}  // namespace instkg
