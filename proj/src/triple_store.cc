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

#include "instkg/triple_store.h"

#include "instkg/kernels.h"

namespace instkg {

TripleStore::Index TripleStore::ChooseIndex(bool s, bool p, bool o) {
  if (s && !p && o) return Index::kOsp;
  if (s) return Index::kSpo;
  if (p) return Index::kPos;
  if (o) return Index::kOsp;
  return Index::kSpo;
}

IdTriple TripleStore::Permute(Index index, const IdTriple &spo) {
  switch (index) {
    case Index::kSpo: return spo;
    case Index::kPos: return {spo[1], spo[2], spo[0]};
    case Index::kOsp: return {spo[2], spo[0], spo[1]};
  }
  return spo;
}

IdTriple TripleStore::Unpermute(Index index, const IdTriple &key) {
  switch (index) {
    case Index::kSpo: return key;
    case Index::kPos: return {key[2], key[0], key[1]};
    case Index::kOsp: return {key[1], key[2], key[0]};
  }
  return key;
}

const std::set<IdTriple> &TripleStore::IndexSet(Index index) const {
  switch (index) {
    case Index::kSpo: return spo_;
    case Index::kPos: return pos_;
    case Index::kOsp: return osp_;
  }
  return spo_;
}

TermId TripleStore::Intern(const Term &term) {
  auto it = ids_.find(term);
  if (it != ids_.end()) return it->second;
  const TermId id = static_cast<TermId>(terms_.size());
  terms_.push_back(term);
  ids_.emplace(term, id);
  return id;
}

std::optional<TermId> TripleStore::Find(const Term &term) const {
  auto it = ids_.find(term);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

bool TripleStore::Insert(const Triple &triple) {
  const IdTriple spo{Intern(triple.subject), Intern(triple.predicate),
                     Intern(triple.object)};
  if (!spo_.insert(spo).second) return false;
  pos_.insert(Permute(Index::kPos, spo));
  osp_.insert(Permute(Index::kOsp, spo));
  return true;
}

size_t TripleStore::InsertAll(std::span<const Triple> triples) {
  std::vector<IdTriple> batch;
  batch.reserve(triples.size());
  for (const auto &t : triples) {
    batch.push_back({Intern(t.subject), Intern(t.predicate), Intern(t.object)});
  }
  parallel::SortUnique(&batch);

  // Only triples not already stored go to the secondary indexes.
  std::vector<IdTriple> fresh;
  fresh.reserve(batch.size());
  for (const auto &spo : batch) {
    if (spo_.insert(spo).second) fresh.push_back(spo);
  }

  std::vector<IdTriple> pos(fresh.size());
  std::vector<IdTriple> osp(fresh.size());
  for (size_t i = 0; i < fresh.size(); ++i) {
    pos[i] = Permute(Index::kPos, fresh[i]);
    osp[i] = Permute(Index::kOsp, fresh[i]);
  }
#pragma omp parallel sections
  {
#pragma omp section
    {
      parallel::SortUnique(&pos);
      for (const auto &k : pos) pos_.emplace_hint(pos_.end(), k);
    }
#pragma omp section
    {
      parallel::SortUnique(&osp);
      for (const auto &k : osp) osp_.emplace_hint(osp_.end(), k);
    }
  }
  return fresh.size();
}

bool TripleStore::Contains(const Triple &triple) const {
  auto s = Find(triple.subject);
  auto p = Find(triple.predicate);
  auto o = Find(triple.object);
  if (!s || !p || !o) return false;
  return spo_.count({*s, *p, *o}) > 0;
}

Triple TripleStore::Resolve(const IdTriple &spo) const {
  return Triple{terms_[spo[0]], terms_[spo[1]], terms_[spo[2]]};
}

void TripleStore::Match(const std::optional<Term> &s, const std::optional<Term> &p,
                        const std::optional<Term> &o,
                        const std::function<bool(const Triple &)> &fn) const {
  std::optional<TermId> sid, pid, oid;
  if (s) {
    sid = Find(*s);
    if (!sid) return;
  }
  if (p) {
    pid = Find(*p);
    if (!pid) return;
  }
  if (o) {
    oid = Find(*o);
    if (!oid) return;
  }
  MatchIds(sid, pid, oid, [&](TermId a, TermId b, TermId c) {
    return fn(Triple{terms_[a], terms_[b], terms_[c]});
  });
}

std::vector<Triple> TripleStore::Match(const std::optional<Term> &s,
                                       const std::optional<Term> &p,
                                       const std::optional<Term> &o) const {
  std::vector<Triple> out;
  Match(s, p, o, [&](const Triple &t) {
    out.push_back(t);
    return true;
  });
  return out;
}

std::vector<Triple> TripleStore::Triples() const {
  std::vector<Triple> out;
  out.reserve(spo_.size());
  for (const auto &spo : spo_) out.push_back(Resolve(spo));
  return out;
}

}  // namespace instkg
