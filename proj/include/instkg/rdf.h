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

#ifndef INSTKG_RDF_H_
#define INSTKG_RDF_H_

#include <compare>
#include <cstddef>
#include <functional>
#include <string>
#include <string_view>

namespace instkg {

namespace vocab {
inline constexpr char kRdfType[] =
    "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
inline constexpr char kRdfsLabel[] =
    "http://www.w3.org/2000/01/rdf-schema#label";
inline constexpr char kXsd[] = "http://www.w3.org/2001/XMLSchema#";
inline constexpr char kXsdString[] =
    "http://www.w3.org/2001/XMLSchema#string";
inline constexpr char kXsdDate[] =
    "http://www.w3.org/2001/XMLSchema#date";
inline constexpr char kXsdInteger[] =
    "http://www.w3.org/2001/XMLSchema#integer";
inline constexpr char kXsdDecimal[] =
    "http://www.w3.org/2001/XMLSchema#decimal";
inline constexpr char kXsdDouble[] =
    "http://www.w3.org/2001/XMLSchema#double";
inline constexpr char kXsdBoolean[] =
    "http://www.w3.org/2001/XMLSchema#boolean";
}  // namespace vocab

// "scheme:rest" with an RFC 3987 scheme and none of the characters N-Triples
// forbids inside IRIREF.
bool IsAbsoluteIri(std::string_view iri);

// An RDF term: an absolute IRI or a literal. No blank nodes.
//
// Literals typed xsd:string are stored untyped (RDF 1.1 treats them as the
// same term) and language tags are lowercased, so structural equality is
// term equality.
class Term {
 public:
  enum class Kind : unsigned char { kIri = 0, kLiteral = 1 };

  Term() = default;

  // Throws instkg::Error when 'iri' is not absolute.
  static Term Iri(std::string iri);
  static Term Literal(std::string lexical, std::string datatype = "",
                      std::string language = "");

  Kind kind() const { return kind_; }
  bool is_iri() const { return kind_ == Kind::kIri; }
  bool is_literal() const { return kind_ == Kind::kLiteral; }

  // IRI string or literal lexical form.
  const std::string &value() const { return value_; }
  const std::string &datatype() const { return datatype_; }
  const std::string &language() const { return language_; }

  std::string ToNTriples() const;

  // IRIs sort before literals; then by value, datatype, language.
  auto operator<=>(const Term &) const = default;
  bool operator==(const Term &) const = default;

 private:
  Kind kind_ = Kind::kIri;
  std::string value_;
  std::string datatype_;
  std::string language_;
};

struct TermHash {
  size_t operator()(const Term &t) const;
};

struct Triple {
  Term subject;
  Term predicate;
  Term object;

  // "<s> <p> <o> ." without a trailing newline.
  std::string ToNTriples() const;

  auto operator<=>(const Triple &) const = default;
  bool operator==(const Triple &) const = default;
};

// Throws instkg::Error when subject or predicate is not an IRI.
Triple MakeTriple(Term subject, Term predicate, Term object);

// N-Triples string escaping: \" \ \n \t, \uXXXX for other control chars.
void AppendEscapedLiteral(std::string_view lexical, std::string *out);

}  // namespace instkg

#endif  // INSTKG_RDF_H_
