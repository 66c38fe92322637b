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

#ifndef INSTKG_ERROR_H_
#define INSTKG_ERROR_H_

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace instkg {

// Base class of every error raised by the library. Each failure mode named in
// the module contracts has its own subclass so callers can catch precisely.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string &message) : std::runtime_error(message) {}
};

#define INSTKG_DEFINE_ERROR(Name, Base)                     \
  class Name : public Base {                                \
   public:                                                  \
    explicit Name(const std::string &message) : Base(message) {} \
  }

// Scholarly model.
INSTKG_DEFINE_ERROR(MalformedDoi, Error);

// Harvesting.
class SourceError : public Error {
 public:
  SourceError(std::string source, const std::string &message)
      : Error(source + ": " + message), source_(std::move(source)) {}
  const std::string &source() const { return source_; }

 private:
  std::string source_;
};
INSTKG_DEFINE_ERROR(MalformedPayload, Error);
INSTKG_DEFINE_ERROR(FixtureMissing, Error);
INSTKG_DEFINE_ERROR(FulltextUnavailable, Error);
class SourceUnavailable : public SourceError {
 public:
  using SourceError::SourceError;
};

// Harmonizer.
class HarmonizationFailure : public Error {
 public:
  explicit HarmonizationFailure(std::vector<std::string> missing);
  const std::vector<std::string> &missing() const { return missing_; }

 private:
  std::vector<std::string> missing_;
};

// Dataset analyzer.
INSTKG_DEFINE_ERROR(MalformedHeader, Error);
class RaggedRow : public Error {
 public:
  RaggedRow(size_t row, size_t cells, size_t columns);
  size_t row() const { return row_; }

 private:
  size_t row_;
};
INSTKG_DEFINE_ERROR(NoTemporalData, Error);
INSTKG_DEFINE_ERROR(NoLocationData, Error);

// Entity extraction.
INSTKG_DEFINE_ERROR(ExtractorTimeout, Error);
INSTKG_DEFINE_ERROR(ProtocolViolation, Error);
INSTKG_DEFINE_ERROR(InvalidBioSequence, Error);
INSTKG_DEFINE_ERROR(ShapeMismatch, Error);
INSTKG_DEFINE_ERROR(EmptyTaxonomy, Error);
INSTKG_DEFINE_ERROR(CorpusFormatError, Error);

// Knowledge graph building.
INSTKG_DEFINE_ERROR(MissingVocabulary, Error);
INSTKG_DEFINE_ERROR(OrphanTriple, Error);
INSTKG_DEFINE_ERROR(PreconditionViolation, Error);

// Graph store.
class ParseError : public Error {
 public:
  ParseError(size_t line, const std::string &message);
  size_t line() const { return line_; }

 private:
  size_t line_;
};

// Query engine.
class QueryError : public Error {
 public:
  QueryError(const std::string &message, size_t position)
      : Error(message), position_(position) {}
  size_t position() const { return position_; }

 private:
  size_t position_;
};
class SyntaxError : public QueryError {
 public:
  using QueryError::QueryError;
};
class UnknownPrefix : public QueryError {
 public:
  using QueryError::QueryError;
};
class UnsupportedFeature : public QueryError {
 public:
  using QueryError::QueryError;
};

// Pipeline.
INSTKG_DEFINE_ERROR(ConfigError, Error);

class StageFailure : public Error {
 public:
  StageFailure(std::string stage, const std::string &message)
      : Error("stage " + stage + ": " + message), stage_(std::move(stage)) {}
  const std::string &stage() const { return stage_; }

 private:
  std::string stage_;
};

#undef INSTKG_DEFINE_ERROR

}  // namespace instkg

#endif  // INSTKG_ERROR_H_
