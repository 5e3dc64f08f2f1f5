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
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "carrec/catalog.hpp"
#include "carrec/error.hpp"

namespace carrec {

// Attribute weights for the basic item similarity. The denominator must be
// the sum of the weights; scaling everything by the same positive constant
// leaves scores unchanged. Genre and age category carry a 2x boost by
// default.
struct BisWeights {
  double author = 1.0;
  double genre = 2.0;
  double subject = 1.0;
  double age_category = 2.0;
  double medium_type = 1.0;
  double fiction = 1.0;
  double denominator = 8.0;

  static BisWeights make(double author, double genre, double subject,
                         double age_category, double medium_type,
                         double fiction) {
    BisWeights w{author, genre,       subject,
                 age_category, medium_type, fiction,
                 author + genre + subject + age_category + medium_type +
                     fiction};
    w.validate();
    return w;
  }

  void validate() const {
    if (author < 0 || genre < 0 || subject < 0 || age_category < 0 ||
        medium_type < 0 || fiction < 0)
      throw Error("BIS weights must be non-negative");
    if (denominator <= 0) throw Error("BIS denominator must be positive");
  }
};

// |x ∩ y| / |x ∪ y|. Two empty sets score 0: jointly missing metadata is
// not evidence of similarity.
template <typename T>
double jaccard(const std::set<T>& x, const std::set<T>& y) {
  if (x.empty() && y.empty()) return 0.0;
  std::size_t inter = 0;
  auto ix = x.begin();
  auto iy = y.begin();
  while (ix != x.end() && iy != y.end()) {
    if (*ix < *iy)
      ++ix;
    else if (*iy < *ix)
      ++iy;
    else {
      ++inter;
      ++ix;
      ++iy;
    }
  }
  return static_cast<double>(inter) /
         static_cast<double>(x.size() + y.size() - inter);
}

namespace detail {

// Exact-match component: 1 on match, 0 otherwise. A missing side never
// matches, even against another missing side.
template <typename T>
double match_component(const std::optional<T>& a, const std::optional<T>& b) {
  return (a && b && *a == *b) ? 1.0 : 0.0;
}

inline double author_component(const Item& i, const Item& j) {
  if (!i.main_author || !j.main_author) return 0.0;
  const auto a = trim(*i.main_author);
  const auto b = trim(*j.main_author);
  if (a.empty() || b.empty()) return 0.0;
  return normalized_equal(a, b) ? 1.0 : 0.0;
}

}  // namespace detail

// Basic item similarity: the weighted average of six attribute-level
// similarities. Author, age category, medium type and fiction compare as
// exact-match indicators on normalized values; genres and subjects use the
// Jaccard measure on their code sets.
inline double bis(const Item& i, const Item& j, const BisWeights& w) {
  const double author_sim = detail::author_component(i, j);
  const double genre_sim = jaccard(i.genres, j.genres);
  const double subject_sim = jaccard(i.subjects, j.subjects);
  const double age_sim = detail::match_component(i.age_category, j.age_category);
  const double medium_sim = detail::match_component(i.medium_type, j.medium_type);
  const double fiction_sim = detail::match_component(i.fiction, j.fiction);
  return (w.author * author_sim + w.genre * genre_sim +
          w.subject * subject_sim + w.age_category * age_sim +
          w.medium_type * medium_sim + w.fiction * fiction_sim) /
         w.denominator;
}

using ItemRefs = std::span<const Item* const>;

// max over j in J of bis(i, j).
inline double max_bis(const Item& i, ItemRefs J, const BisWeights& w) {
  if (J.empty()) throw Error("max_bis: empty item set");
  double best = 0.0;
  bool first = true;
  for (const Item* j : J) {
    const double s = bis(i, *j, w);
    if (first || s > best) best = s;
    first = false;
  }
  return best;
}

// (1/|J|) * sum over j in J of bis(i, j).
inline double avg_bis(const Item& i, ItemRefs J, const BisWeights& w) {
  if (J.empty()) throw Error("avg_bis: empty item set");
  double sum = 0.0;
  for (const Item* j : J) sum += bis(i, *j, w);
  return sum / static_cast<double>(J.size());
}

// (1/|I|) * sum over i in I of avg_bis(i, J).
inline double avg_set_bis(ItemRefs I, ItemRefs J, const BisWeights& w) {
  if (I.empty() || J.empty()) throw Error("avg_set_bis: empty item set");
  double sum = 0.0;
  for (const Item* i : I) sum += avg_bis(*i, J, w);
  return sum / static_cast<double>(I.size());
}

enum class InternalSimilarityVariant {
  // (1/|I|^2) * double sum of bis over all ordered pairs, diagonal included
  // — the formula as written.
  formula,
  // Off-diagonal pairs only, divided by |I|(|I|-1) — the "unique item
  // pairs" prose reading. Falls back to the formula value for |I| = 1,
  // where no off-diagonal pair exists.
  unique_pairs,
};

// Average pairwise similarity within one item list. Lower means more
// diverse.
inline double internal_similarity(
    ItemRefs I, const BisWeights& w,
    InternalSimilarityVariant variant = InternalSimilarityVariant::formula) {
  if (I.empty()) throw Error("internal_similarity: empty item list");
  const std::size_t n = I.size();
  double off_diag = 0.0;  // sum over unordered pairs, each counted once
  double diag = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    diag += bis(*I[a], *I[a], w);
    for (std::size_t b = a + 1; b < n; ++b) off_diag += bis(*I[a], *I[b], w);
  }
  if (variant == InternalSimilarityVariant::unique_pairs && n > 1)
    return 2.0 * off_diag / (static_cast<double>(n) * (n - 1));
  return (2.0 * off_diag + diag) / (static_cast<double>(n) * n);
}

// (1/K) * sum over the K predicted items of their max similarity to the
// ground-truth set G.
inline double bis_at_k(ItemRefs G, ItemRefs predicted_top_k,
                       const BisWeights& w) {
  if (G.empty()) throw Error("bis_at_k: empty ground-truth set");
  if (predicted_top_k.empty()) throw Error("bis_at_k: empty prediction list");
  double sum = 0.0;
  for (const Item* p : predicted_top_k) sum += max_bis(*p, G, w);
  return sum / static_cast<double>(predicted_top_k.size());
}

// Mean BIS@K over users. Every listed user must have a non-empty ground
// truth and at least K predictions; iteration order cannot affect the
// result beyond floating-point associativity, which is fixed by summing in
// sorted user order.
inline double abis(
    const std::set<std::string>& users,
    const std::map<std::string, std::vector<const Item*>>& ground_truth,
    const std::map<std::string, std::vector<const Item*>>& predictions,
    std::size_t k, const BisWeights& w) {
  if (users.empty()) throw Error("abis: empty user set");
  double sum = 0.0;
  for (const auto& user : users) {
    const auto g = ground_truth.find(user);
    if (g == ground_truth.end() || g->second.empty())
      throw Error("abis: user '" + user + "' has no ground truth");
    const auto p = predictions.find(user);
    if (p == predictions.end() || p->second.size() < k)
      throw Error("abis: user '" + user + "' has fewer than " +
                  std::to_string(k) + " predictions");
    sum += bis_at_k(g->second, ItemRefs(p->second.data(), k), w);
  }
  return sum / static_cast<double>(users.size());
}

}  // namespace carrec
