// Copyright 2026 The carrec Authors
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
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "carrec/catalog.hpp"
#include "carrec/csv.hpp"
#include "carrec/error.hpp"
#include "carrec/random.hpp"

namespace carrec {

struct PredictionEntry {
  std::string item_id;
  double score = 0.0;
};

// Per-user ranked prediction list. Scores are non-increasing, items are
// distinct, and generated providers never include an item the user already
// borrowed in training data.
struct PredictionList {
  std::string user_id;
  std::vector<PredictionEntry> entries;

  std::vector<std::string> top_k(std::size_t k) const {
    std::vector<std::string> out;
    const std::size_t take = std::min(k, entries.size());
    out.reserve(take);
    for (std::size_t i = 0; i < take; ++i) out.push_back(entries[i].item_id);
    return out;
  }
};

// Item-item co-occurrence index over training transactions, scored with
// cosine normalization: sim(a,b) = |U_a ∩ U_b| / sqrt(|U_a| |U_b|) where
// U_x is the set of users who borrowed x. Built once, then immutable;
// per-user scoring is pure.
class CooccurrenceModel {
 public:
  explicit CooccurrenceModel(const Dataset& train) : train_(&train) {
    for (const auto& user : train.users()) {
      const auto items = train.user_items(user);
      std::vector<std::string> sorted(items.begin(), items.end());
      for (std::size_t a = 0; a < sorted.size(); ++a) {
        popularity_[sorted[a]] += 1;
        for (std::size_t b = a + 1; b < sorted.size(); ++b) {
          ++pair_counts_[sorted[a]][sorted[b]];
          ++pair_counts_[sorted[b]][sorted[a]];
        }
      }
    }
  }

  PredictionList score(const std::string& user, std::size_t n) const {
    const auto borrowed = train_->user_items(user);
    if (borrowed.empty())
      throw Error("co-occurrence: user '" + user + "' has no transactions");
    std::map<std::string, double> scores;
    for (const auto& b : borrowed) {
      const double pop_b = static_cast<double>(popularity_.at(b));
      auto row = pair_counts_.find(b);
      if (row == pair_counts_.end()) continue;
      for (const auto& [candidate, count] : row->second) {
        if (borrowed.count(candidate)) continue;
        scores[candidate] += static_cast<double>(count) /
                             std::sqrt(pop_b * popularity_.at(candidate));
      }
    }
    PredictionList out;
    out.user_id = user;
    out.entries.reserve(scores.size());
    for (auto& [item, score] : scores) out.entries.push_back({item, score});
    std::stable_sort(out.entries.begin(), out.entries.end(),
                     [](const PredictionEntry& a, const PredictionEntry& b) {
                       if (a.score != b.score) return a.score > b.score;
                       return a.item_id < b.item_id;
                     });
    if (out.entries.size() > n) out.entries.resize(n);
    return out;
  }

 private:
  const Dataset* train_;
  std::map<std::string, std::map<std::string, std::size_t>> pair_counts_;
  std::map<std::string, std::size_t> popularity_;
};

inline PredictionList score_cooccurrence(const Dataset& train,
                                         const std::string& user,
                                         std::size_t n) {
  return CooccurrenceModel(train).score(user, n);
}

// n seeded-uniform distinct items with scores 1.000, 0.999, 0.998, ...
// Items in `exclude` (the user's training borrows) are never chosen.
inline PredictionList random_baseline(const ItemMap& catalog,
                                      const std::string& user, std::size_t n,
                                      std::uint64_t seed,
                                      const std::set<std::string>& exclude = {}) {
  std::vector<std::string> ids;
  ids.reserve(catalog.size());
  for (const auto& [id, item] : catalog)
    if (!exclude.count(id)) ids.push_back(id);
  if (n > ids.size())
    throw Error("random baseline: requested " + std::to_string(n) +
                " items but only " + std::to_string(ids.size()) +
                " are available");
  Rng rng(derive_seed(seed, "random-baseline", user));
  PredictionList out;
  out.user_id = user;
  out.entries.reserve(n);
  const auto picks = rng.sample(std::move(ids), n);
  for (std::size_t i = 0; i < picks.size(); ++i)
    out.entries.push_back({picks[i], 1.0 - 0.001 * static_cast<double>(i)});
  return out;
}

struct ImportedPredictions {
  std::map<std::string, PredictionList> by_user;
  std::size_t dropped_unknown_item = 0;
  std::size_t dropped_already_borrowed = 0;
  std::size_t duplicate_entries = 0;  // resolved by keeping the max score
};

// Reads a user_id,item_id,score file (externally trained model output).
// Entries for unknown or already-borrowed items are dropped with counts.
inline ImportedPredictions import_predictions(const std::string& path,
                                              const Dataset& train) {
  ImportedPredictions out;
  std::map<std::string, std::map<std::string, double>> best;
  DelimitedReader reader(path);
  reader.require_columns({"user_id", "item_id", "score"});
  std::size_t row = 0;
  std::vector<std::string> fields;
  std::map<std::string, std::set<std::string>> borrowed_cache;
  while (reader.next(row, fields)) {
    const std::string user(trim(reader.field(fields, "user_id")));
    const std::string item(trim(reader.field(fields, "item_id")));
    if (user.empty() || item.empty())
      throw Error(path + " row " + std::to_string(row) +
                  ": missing user_id or item_id");
    const double score = parse_double(trim(reader.field(fields, "score")));
    if (!train.items().count(item)) {
      ++out.dropped_unknown_item;
      continue;
    }
    auto cached = borrowed_cache.find(user);
    if (cached == borrowed_cache.end())
      cached = borrowed_cache.emplace(user, train.user_items(user)).first;
    if (cached->second.count(item)) {
      ++out.dropped_already_borrowed;
      continue;
    }
    auto [it, inserted] = best[user].emplace(item, score);
    if (!inserted) {
      ++out.duplicate_entries;
      it->second = std::max(it->second, score);
    }
  }
  for (auto& [user, items] : best) {
    PredictionList list;
    list.user_id = user;
    list.entries.reserve(items.size());
    for (auto& [item, score] : items) list.entries.push_back({item, score});
    std::stable_sort(list.entries.begin(), list.entries.end(),
                     [](const PredictionEntry& a, const PredictionEntry& b) {
                       if (a.score != b.score) return a.score > b.score;
                       return a.item_id < b.item_id;
                     });
    out.by_user.emplace(user, std::move(list));
  }
  return out;
}

inline std::vector<std::string> top_k(const PredictionList& p, std::size_t k) {
  return p.top_k(k);
}

}  // namespace carrec
