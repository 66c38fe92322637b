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

#include "instkg/rdf.h"

#include <cctype>
#include <cstdio>

#include "instkg/error.h"

namespace instkg {

bool IsAbsoluteIri(std::string_view iri) {
  auto colon = iri.find(':');
  if (colon == std::string_view::npos || colon == 0) return false;
  if (!std::isalpha(static_cast<unsigned char>(iri[0]))) return false;
  for (size_t i = 1; i < colon; ++i) {
    unsigned char c = static_cast<unsigned char>(iri[i]);
    if (!(std::isalnum(c) || c == '+' || c == '-' || c == '.')) return false;
  }
  for (char ch : iri) {
    unsigned char c = static_cast<unsigned char>(ch);
    if (c <= 0x20 || c == 0x7F) return false;
    switch (c) {
      case '<': case '>': case '"': case '{': case '}':
      case '|': case '^': case '`': case '\\':
        return false;
      default:
        break;
    }
  }
  return true;
}

Term Term::Iri(std::string iri) {
  if (!IsAbsoluteIri(iri)) throw Error("not an absolute IRI: '" + iri + "'");
  Term t;
  t.kind_ = Kind::kIri;
  t.value_ = std::move(iri);
  return t;
}

Term Term::Literal(std::string lexical, std::string datatype, std::string language) {
  Term t;
  t.kind_ = Kind::kLiteral;
  t.value_ = std::move(lexical);
  if (!language.empty()) {
    for (auto &c : language) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    t.language_ = std::move(language);
  } else if (datatype != vocab::kXsdString) {
    if (!datatype.empty() && !IsAbsoluteIri(datatype)) {
      throw Error("literal datatype is not an absolute IRI: '" + datatype + "'");
    }
    t.datatype_ = std::move(datatype);
  }
  return t;
}

void AppendEscapedLiteral(std::string_view lexical, std::string *out) {
  for (char ch : lexical) {
    unsigned char c = static_cast<unsigned char>(ch);
    switch (ch) {
      case '"': *out += "\\\""; break;
      case '\\': *out += "\\\\"; break;
      case '\n': *out += "\\n"; break;
      case '\t': *out += "\\t"; break;
      default:
        if (c < 0x20 || c == 0x7F) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04X", c);
          *out += buf;
        } else {
          out->push_back(ch);
        }
    }
  }
}

std::string Term::ToNTriples() const {
  std::string out;
  if (is_iri()) {
    out.reserve(value_.size() + 2);
    out.push_back('<');
    out += value_;
    out.push_back('>');
    return out;
  }
  out.push_back('"');
  AppendEscapedLiteral(value_, &out);
  out.push_back('"');
  if (!language_.empty()) {
    out.push_back('@');
    out += language_;
  } else if (!datatype_.empty()) {
    out += "^^<";
    out += datatype_;
    out.push_back('>');
  }
  return out;
}

size_t TermHash::operator()(const Term &t) const {
  size_t h = std::hash<std::string>()(t.value());
  h ^= static_cast<size_t>(t.kind()) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  if (!t.datatype().empty()) h ^= std::hash<std::string>()(t.datatype()) * 31;
  if (!t.language().empty()) h ^= std::hash<std::string>()(t.language()) * 131;
  return h;
}

std::string Triple::ToNTriples() const {
  std::string out = subject.ToNTriples();
  out.push_back(' ');
  out += predicate.ToNTriples();
  out.push_back(' ');
  out += object.ToNTriples();
  out += " .";
  return out;
}

Triple MakeTriple(Term subject, Term predicate, Term object) {
  if (!subject.is_iri()) throw Error("triple subject must be an IRI");
  if (!predicate.is_iri()) throw Error("triple predicate must be an IRI");
  return Triple{std::move(subject), std::move(predicate), std::move(object)};
}

}  // namespace instkg
