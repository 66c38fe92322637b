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

#ifndef INSTKG_TRIPLE_STORE_H_
#define INSTKG_TRIPLE_STORE_H_

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <unordered_map>
#include <vector>

#include "instkg/rdf.h"

namespace instkg {

using TermId = uint32_t;
using IdTriple = std::array<TermId, 3>;

// In-memory triple store. Terms are interned to dense ids; the triple set is
// kept in three ordered indexes (SPO, POS, OSP) so that every combination of
// bound positions is answered by a prefix range scan of one index.
//
// Not internally synchronized: many concurrent readers or one writer.
class TripleStore {
 public:
  enum class Index { kSpo, kPos, kOsp };

  TripleStore() = default;
  TripleStore(const TripleStore &) = default;
  TripleStore(TripleStore &&) = default;
  TripleStore &operator=(const TripleStore &) = default;
  TripleStore &operator=(TripleStore &&) = default;

  // Returns false when the triple was already present.
  bool Insert(const Triple &triple);

  // Bulk path: interns every term, sorts the batch once per index and merges
  // it in. Returns the number of newly inserted triples.
  size_t InsertAll(std::span<const Triple> triples);

  bool Contains(const Triple &triple) const;
  size_t size() const { return spo_.size(); }
  bool empty() const { return spo_.empty(); }

  // Streams the triples matching every bound position. 'fn' returns false to
  // stop early.
  void Match(const std::optional<Term> &s, const std::optional<Term> &p,
             const std::optional<Term> &o,
             const std::function<bool(const Triple &)> &fn) const;
  std::vector<Triple> Match(const std::optional<Term> &s,
                            const std::optional<Term> &p,
                            const std::optional<Term> &o) const;

  // Every triple, in SPO id order.
  std::vector<Triple> Triples() const;

  std::optional<TermId> Find(const Term &term) const;
  const Term &term(TermId id) const { return terms_[id]; }
  size_t term_count() const { return terms_.size(); }
  Triple Resolve(const IdTriple &spo) const;

  // The index that answers a pattern with the given bound positions.
  static Index ChooseIndex(bool s, bool p, bool o);

  // Id-level match used by the query evaluator. 'fn' receives (s, p, o) ids
  // and returns false to stop.
  template <typename Fn>
  void MatchIds(std::optional<TermId> s, std::optional<TermId> p,
                std::optional<TermId> o, Fn &&fn) const;

 private:
  TermId Intern(const Term &term);

  static IdTriple Permute(Index index, const IdTriple &spo);
  static IdTriple Unpermute(Index index, const IdTriple &key);
  const std::set<IdTriple> &IndexSet(Index index) const;

  std::vector<Term> terms_;
  std::unordered_map<Term, TermId, TermHash> ids_;
  std::set<IdTriple> spo_;
  std::set<IdTriple> pos_;
  std::set<IdTriple> osp_;
};

template <typename Fn>
void TripleStore::MatchIds(std::optional<TermId> s, std::optional<TermId> p,
                           std::optional<TermId> o, Fn &&fn) const {
  const Index index = ChooseIndex(s.has_value(), p.has_value(), o.has_value());
  // Bound positions always form a prefix of the chosen ordering.
  IdTriple lo{0, 0, 0};
  const IdTriple bound = Permute(index, {s.value_or(0), p.value_or(0), o.value_or(0)});
  const int prefix = static_cast<int>(s.has_value()) + static_cast<int>(p.has_value()) +
                     static_cast<int>(o.has_value());
  for (int i = 0; i < prefix; ++i) lo[i] = bound[i];
  const auto &set = IndexSet(index);
  for (auto it = set.lower_bound(lo); it != set.end(); ++it) {
    const IdTriple &key = *it;
    bool in_range = true;
    for (int i = 0; i < prefix; ++i) {
      if (key[i] != bound[i]) {
        in_range = false;
        break;
      }
    }
    if (!in_range) break;
    const IdTriple spo = Unpermute(index, key);
    if (!fn(spo[0], spo[1], spo[2])) break;
  }
}

}  // namespace instkg

#endif  // INSTKG_TRIPLE_STORE_H_
