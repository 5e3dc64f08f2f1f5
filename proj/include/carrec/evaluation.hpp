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
#include <set>
#include <string>
#include <vector>

#include "carrec/carousel.hpp"
#include "carrec/catalog.hpp"
#include "carrec/error.hpp"

namespace carrec {

// A user's ranked recommendations plus the held-out items they actually
// borrowed. Relevance is binary; ranked_items must be duplicate-free.
struct RelevanceJudgment {
  std::vector<std::string> ranked_items;
  std::set<std::string> relevant;

  bool relevant_at(std::size_t rank) const {  // 1-based
    return rank <= ranked_items.size() &&
           relevant.count(ranked_items[rank - 1]) > 0;
  }

  std::size_t hits_in_top(std::size_t k) const {
    std::size_t count = 0;
    const std::size_t limit = std::min(k, ranked_items.size());
    for (std::size_t i = 1; i <= limit; ++i)
      if (relevant_at(i)) ++count;
    return count;
  }
};

// Hits in the top k over min(k, list length); an empty list scores 0.
inline double precision_at_k(const RelevanceJudgment& j, std::size_t k) {
  if (k == 0) throw Error("precision@k: k must be >= 1");
  if (j.ranked_items.empty()) return 0.0;
  const std::size_t denom = std::min(k, j.ranked_items.size());
  return static_cast<double>(j.hits_in_top(k)) / static_cast<double>(denom);
}

// Hits in the top k over the total number of relevant items.
inline double recall_at_k(const RelevanceJudgment& j, std::size_t k) {
  if (k == 0) throw Error("recall@k: k must be >= 1");
  if (j.relevant.empty()) throw Error("recall@k: empty relevant set");
  return static_cast<double>(j.hits_in_top(k)) /
         static_cast<double>(j.relevant.size());
}

// (1/r) * sum over relevant ranks i <= k of precision@i, with r the number
// of relevant items inside the top k; 0 when r is 0.
inline double average_precision_at_k(const RelevanceJudgment& j,
                                     std::size_t k) {
  if (k == 0) throw Error("AP@k: k must be >= 1");
  const std::size_t r = j.hits_in_top(k);
  if (r == 0) return 0.0;
  double sum = 0.0;
  std::size_t hits = 0;
  const std::size_t limit = std::min(k, j.ranked_items.size());
  for (std::size_t i = 1; i <= limit; ++i) {
    if (!j.relevant_at(i)) continue;
    ++hits;
    sum += static_cast<double>(hits) / static_cast<double>(i);
  }
  return sum / static_cast<double>(r);
}

inline double mean_average_precision(const std::vector<RelevanceJudgment>& js,
                                     std::size_t k) {
  if (js.empty()) throw Error("MAP: empty judgment list");
  double sum = 0.0;
  for (const auto& j : js) sum += average_precision_at_k(j, k);
  return sum / static_cast<double>(js.size());
}

// Binary-relevance nDCG: DCG over the top k against the DCG of the ideal
// ordering of the user's relevant items, truncated at k. 0 when the user
// has no relevant items.
inline double ndcg_at_k(const RelevanceJudgment& j, std::size_t k) {
  if (k == 0) throw Error("nDCG@k: k must be >= 1");
  if (j.relevant.empty()) return 0.0;
  double dcg = 0.0;
  const std::size_t limit = std::min(k, j.ranked_items.size());
  for (std::size_t i = 1; i <= limit; ++i)
    if (j.relevant_at(i)) dcg += 1.0 / std::log2(static_cast<double>(i) + 1.0);
  double idcg = 0.0;
  const std::size_t ideal = std::min(k, j.relevant.size());
  for (std::size_t i = 1; i <= ideal; ++i)
    idcg += 1.0 / std::log2(static_cast<double>(i) + 1.0);
  return dcg / idcg;
}

// Share of carousel items added to the collection on or after the cutoff.
inline double novelty_percentage(const FilledCarousel& c,
                                 const ItemMap& catalog, Date cutoff) {
  if (c.items.empty()) throw Error("novelty percentage: empty carousel");
  std::size_t novel = 0;
  for (const auto& id : c.items) {
    auto it = catalog.find(id);
    if (it == catalog.end()) throw Error("novelty percentage: unknown item " + id);
    if (it->second.added_date && *it->second.added_date >= cutoff) ++novel;
  }
  return 100.0 * static_cast<double>(novel) /
         static_cast<double>(c.items.size());
}

struct BoxplotSummary {
  double median = 0.0;
  double lower_quartile = 0.0;
  double upper_quartile = 0.0;
  double lower_whisker = 0.0;
  double upper_whisker = 0.0;
  std::size_t n = 0;
};

// Quartiles by linear interpolation over the sorted sample (position
// h = (n-1)p); whiskers are the sample min and max.
inline BoxplotSummary boxplot_summary(std::vector<double> values) {
  if (values.empty()) throw Error("boxplot: empty value list");
  std::sort(values.begin(), values.end());
  auto quantile = [&](double p) {
    const double h = static_cast<double>(values.size() - 1) * p;
    const std::size_t lo = static_cast<std::size_t>(h);
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = h - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
  };
  BoxplotSummary s;
  s.median = quantile(0.5);
  s.lower_quartile = quantile(0.25);
  s.upper_quartile = quantile(0.75);
  s.lower_whisker = values.front();
  s.upper_whisker = values.back();
  s.n = values.size();
  return s;
}

}  // namespace carrec
