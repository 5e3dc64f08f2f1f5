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
//
// Independent brute-force oracles, coded straight from the definitions and
// kept free of the library's metric/similarity implementations.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "carrec/catalog.hpp"

namespace carrec::oracle {

// ---- Ranking-metric oracles over a relevance mask ----
// rel[i] is the relevance of 1-based rank i+1; total_relevant counts the
// user's relevant items inside AND outside the ranking.

inline std::size_t hits(const std::vector<bool>& rel, std::size_t k) {
  std::size_t h = 0;
  for (std::size_t i = 0; i < rel.size() && i < k; ++i)
    if (rel[i]) ++h;
  return h;
}

inline double precision(const std::vector<bool>& rel, std::size_t k) {
  if (rel.empty()) return 0.0;
  return static_cast<double>(hits(rel, k)) /
         static_cast<double>(std::min(k, rel.size()));
}

inline double recall(const std::vector<bool>& rel, std::size_t total_relevant,
                     std::size_t k) {
  return static_cast<double>(hits(rel, k)) /
         static_cast<double>(total_relevant);
}

inline double average_precision(const std::vector<bool>& rel, std::size_t k) {
  const std::size_t r = hits(rel, k);
  if (r == 0) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 1; i <= std::min(k, rel.size()); ++i)
    if (rel[i - 1]) sum += precision(rel, i);
  return sum / static_cast<double>(r);
}

inline double ndcg(const std::vector<bool>& rel, std::size_t total_relevant,
                   std::size_t k) {
  if (total_relevant == 0) return 0.0;
  double dcg = 0.0;
  for (std::size_t i = 1; i <= std::min(k, rel.size()); ++i)
    if (rel[i - 1]) dcg += 1.0 / std::log2(i + 1.0);
  double idcg = 0.0;
  for (std::size_t i = 1; i <= std::min(k, total_relevant); ++i)
    idcg += 1.0 / std::log2(i + 1.0);
  return dcg / idcg;
}

// ---- BIS oracle ----
// Recoded from the weighted-average definition with its own set measure.

inline double jaccard_sets(const std::set<std::string>& a,
                           const std::set<std::string>& b) {
  std::vector<std::string> inter, uni;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(inter));
  std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                 std::back_inserter(uni));
  if (uni.empty()) return 0.0;
  return static_cast<double>(inter.size()) / static_cast<double>(uni.size());
}

inline double bis(const Item& x, const Item& y, double w_author = 1,
                  double w_genre = 2, double w_subject = 1, double w_age = 2,
                  double w_medium = 1, double w_fiction = 1,
                  double denominator = 8) {
  double sum = 0.0;
  const auto ax = x.author_norm();
  const auto ay = y.author_norm();
  if (ax && ay && *ax == *ay) sum += w_author;
  sum += w_genre * jaccard_sets(x.genres, y.genres);
  sum += w_subject * jaccard_sets(x.subjects, y.subjects);
  if (x.age_category && y.age_category && *x.age_category == *y.age_category)
    sum += w_age;
  if (x.medium_type && y.medium_type && *x.medium_type == *y.medium_type)
    sum += w_medium;
  if (x.fiction && y.fiction && *x.fiction == *y.fiction) sum += w_fiction;
  return sum / denominator;
}

inline double internal_similarity_double_loop(
    const std::vector<const Item*>& items) {
  double sum = 0.0;
  for (const Item* a : items)
    for (const Item* b : items) sum += bis(*a, *b);
  return sum / (static_cast<double>(items.size()) *
                static_cast<double>(items.size()));
}

}  // namespace carrec::oracle
