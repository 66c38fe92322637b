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

#ifndef INSTKG_RDF_IO_H_
#define INSTKG_RDF_IO_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "instkg/rdf.h"
#include "instkg/triple_store.h"

namespace instkg {

using PrefixMap = std::vector<std::pair<std::string, std::string>>;

// orkgr, orkgc, orkgp, rdf, rdfs, xsd.
const PrefixMap &DefaultPrefixes();

// Canonical N-Triples: one "<s> <p> <o> ." line per triple, lines sorted
// bytewise, each terminated by '\n'. Equal stores give identical bytes.
std::string SerializeNTriples(const TripleStore &store);

// Parses one N-Triples line. Returns nullopt for blank and comment lines.
// Throws ParseError tagged with 'line_number'.
std::optional<Triple> ParseNTriplesLine(std::string_view line, size_t line_number);

// Loads N-Triples text using the parallel line parser. Throws ParseError
// carrying the first offending line.
TripleStore LoadNTriples(std::string_view text);

// Turtle subset: @prefix/@base/PREFIX/BASE, prefixed names, 'a', ';' and ','
// lists, short and long string literals with language tags or datatypes,
// numeric and boolean literals. Blank nodes and collections are rejected.
TripleStore LoadTurtle(std::string_view text);
std::vector<Triple> ParseTurtle(std::string_view text);

// Subjects grouped, predicates and objects abbreviated with ';' and ','.
std::string SerializeTurtle(const TripleStore &store,
                            const PrefixMap &prefixes = DefaultPrefixes());

// Dispatches on extension: ".ttl" is Turtle, anything else N-Triples.
TripleStore LoadRdfFile(const std::filesystem::path &path);

}  // namespace instkg

#endif  // INSTKG_RDF_IO_H_
