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
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "carrec/catalog.hpp"
#include "carrec/error.hpp"
#include "carrec/random.hpp"
#include "carrec/recommender.hpp"
#include "carrec/similarity.hpp"
#include "carrec/text.hpp"
#include "carrec/time.hpp"

namespace carrec {

enum class CarouselKind { genre, genre_combination, subject, author, cyclic_event };
enum class Provenance { from_predictions, from_history, global };
enum class ItemSource { predicted, topup, diversity, serendipity, novelty };
enum class EventField { genre, subject };

inline const char* to_string(CarouselKind k) {
  switch (k) {
    case CarouselKind::genre: return "genre";
    case CarouselKind::genre_combination: return "genre_combination";
    case CarouselKind::subject: return "subject";
    case CarouselKind::author: return "author";
    case CarouselKind::cyclic_event: return "cyclic_event";
  }
  return "?";
}

inline const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::from_predictions: return "from_predictions";
    case Provenance::from_history: return "from_history";
    case Provenance::global: return "global";
  }
  return "?";
}

inline const char* to_string(ItemSource s) {
  switch (s) {
    case ItemSource::predicted: return "predicted";
    case ItemSource::topup: return "topup";
    case ItemSource::diversity: return "diversity";
    case ItemSource::serendipity: return "serendipity";
    case ItemSource::novelty: return "novelty";
  }
  return "?";
}

// A calendar rule mapping a date range to an event tag and the catalog
// filter that defines matching items.
struct EventRule {
  Date start;
  Date end;  // inclusive
  std::string tag;
  EventField field = EventField::genre;
  std::set<std::string> values;
};

using EventCalendar = std::vector<EventRule>;

// A typed carousel constraint plus where it came from.
struct CarouselSpec {
  CarouselKind kind = CarouselKind::genre;
  // genre code, subject code, normalized author key, or event tag.
  std::string value;
  // genre_combination only: the exact genre set (>= 2 genres).
  std::set<std::string> genre_set;
  Provenance provenance = Provenance::global;
  // cyclic_event only: the config-resolved filter.
  EventField event_field = EventField::genre;
  std::set<std::string> event_values;

  // Single deterministic text form, also used in file output and for
  // deriving per-spec random streams. Combinations join genres with '+'.
  std::string canonical_constraint() const {
    if (kind == CarouselKind::genre_combination)
      return join(genre_set.begin(), genre_set.end(), "+");
    return value;
  }
};

struct FilledCarousel {
  CarouselSpec spec;
  std::vector<std::string> items;
  std::vector<ItemSource> sources;
};

// Knobs for the fill strategies. predicted_take applies to the diversity,
// serendipity and novelty strategies; the original strategy fills every
// slot from predictions and the combined strategy takes
// combined_predicted_take.
struct StrategyParams {
  int carousel_size = 15;
  int predicted_take = 10;
  int combined_predicted_take = 9;
  int candidate_pool_size = 100;
  int recency_window = 200;
  Date novelty_cutoff{};
  std::uint64_t seed = 0;

  void validate() const {
    if (carousel_size < 1) throw Error("carousel_size must be >= 1");
    if (predicted_take < 0 || predicted_take > carousel_size)
      throw Error("predicted_take must be in [0, carousel_size]");
    if (combined_predicted_take < 0 || combined_predicted_take > carousel_size)
      throw Error("combined_predicted_take must be in [0, carousel_size]");
    if (candidate_pool_size < carousel_size - predicted_take)
      throw Error("candidate_pool_size too small for carousel_size");
    if (recency_window < 1) throw Error("recency_window must be >= 1");
  }
};

inline bool matches_constraint(const Item& item, const CarouselSpec& spec) {
  switch (spec.kind) {
    case CarouselKind::genre:
      return item.genres.count(spec.value) > 0;
    case CarouselKind::genre_combination:
      return std::includes(item.genres.begin(), item.genres.end(),
                           spec.genre_set.begin(), spec.genre_set.end());
    case CarouselKind::subject:
      return item.subjects.count(spec.value) > 0;
    case CarouselKind::author: {
      const auto key = item.author_norm();
      return key && *key == spec.value;
    }
    case CarouselKind::cyclic_event: {
      const auto& fields = spec.event_field == EventField::genre
                               ? item.genres
                               : item.subjects;
      for (const auto& v : spec.event_values)
        if (fields.count(v)) return true;
      return false;
    }
  }
  return false;
}

namespace detail {

// Frequency tables over an item list (multiplicity counts).
struct FeatureCounts {
  std::map<std::string, int> genres;
  std::map<std::string, int> combos;  // canonical form -> count
  std::map<std::string, std::set<std::string>> combo_sets;
  std::map<std::string, int> subjects;
  std::map<std::string, int> authors;

  void add(const Item& item) {
    for (const auto& g : item.genres) ++genres[g];
    if (item.genres.size() >= 2) {
      const std::string key =
          join(item.genres.begin(), item.genres.end(), "+");
      ++combos[key];
      combo_sets.emplace(key, item.genres);
    }
    for (const auto& s : item.subjects) ++subjects[s];
    if (const auto a = item.author_norm()) ++authors[*a];
  }
};

// Top-n values by (count desc, value asc), skipping excluded ones.
inline std::vector<std::string> pick_top(const std::map<std::string, int>& counts,
                                         std::size_t n,
                                         const std::set<std::string>& excluded) {
  std::vector<std::pair<std::string, int>> ranked;
  for (const auto& [value, count] : counts)
    if (!excluded.count(value)) ranked.emplace_back(value, count);
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) {
                     if (a.second != b.second) return a.second > b.second;
                     return a.first < b.first;
                   });
  if (ranked.size() > n) ranked.resize(n);
  std::vector<std::string> out;
  out.reserve(ranked.size());
  for (auto& [value, count] : ranked) out.push_back(value);
  return out;
}

struct PickedValues {
  std::set<std::string> genres;
  std::set<std::string> combos;
  std::set<std::string> subjects;
  std::set<std::string> authors;
};

// One round of the selection procedure over one statistics source.
// include_individual_genres is false for the cold-start variant.
inline void append_specs(const FeatureCounts& counts, Provenance provenance,
                         bool include_individual_genres, PickedValues& picked,
                         std::vector<CarouselSpec>& out) {
  if (include_individual_genres) {
    for (const auto& g : pick_top(counts.genres, 3, picked.genres)) {
      picked.genres.insert(g);
      out.push_back({CarouselKind::genre, g, {}, provenance});
    }
  }
  for (const auto& c : pick_top(counts.combos, 2, picked.combos)) {
    picked.combos.insert(c);
    out.push_back({CarouselKind::genre_combination, "", counts.combo_sets.at(c),
                   provenance});
  }
  for (const auto& s : pick_top(counts.subjects, 3, picked.subjects)) {
    picked.subjects.insert(s);
    out.push_back({CarouselKind::subject, s, {}, provenance});
  }
  for (const auto& a : pick_top(counts.authors, 3, picked.authors)) {
    picked.authors.insert(a);
    out.push_back({CarouselKind::author, a, {}, provenance});
  }
}

inline void append_event_spec(const EventCalendar& calendar,
                              std::optional<Date> eval_date,
                              std::vector<CarouselSpec>& out) {
  if (!eval_date) return;
  for (const auto& rule : calendar) {
    if (rule.start <= *eval_date && *eval_date <= rule.end) {
      CarouselSpec spec;
      spec.kind = CarouselKind::cyclic_event;
      spec.value = rule.tag;
      spec.provenance = Provenance::global;
      spec.event_field = rule.field;
      spec.event_values = rule.values;
      out.push_back(std::move(spec));
      return;  // at most one cyclic-event carousel
    }
  }
}

}  // namespace detail

// Carousel selection for a user with borrowing history: frequency
// statistics over the top-5 predicted items pick 3 genres, 2 genre
// combinations, 3 subjects and 3 authors; the 5 most recently borrowed
// distinct items contribute the same counts, excluding values already
// picked. Ties break by higher frequency first, then lexicographic value.
inline std::vector<CarouselSpec> select_carousels_with_history(
    const std::string& user, const PredictionList& preds, const Dataset& ds,
    const EventCalendar& calendar = {},
    std::optional<Date> eval_date = std::nullopt) {
  if (preds.entries.empty())
    throw Error("carousel selection: user '" + user +
                "' has no predictions (cold-start selection applies)");
  if (!ds.has_user(user))
    throw Error("carousel selection: user '" + user +
                "' has no training history");

  detail::FeatureCounts pred_counts;
  for (const auto& id : preds.top_k(5)) {
    auto it = ds.items().find(id);
    if (it != ds.items().end()) pred_counts.add(it->second);
  }

  detail::FeatureCounts history_counts;
  std::set<std::string> seen;
  for (const auto& id : recent_transactions(ds, user, ds.user_transactions(user).size())) {
    if (seen.size() == 5) break;
    if (!seen.insert(id).second) continue;  // re-borrows don't consume slots
    history_counts.add(ds.item(id));
  }

  std::vector<CarouselSpec> out;
  detail::PickedValues picked;
  detail::append_specs(pred_counts, Provenance::from_predictions, true, picked,
                       out);
  detail::append_specs(history_counts, Provenance::from_history, true, picked,
                       out);
  detail::append_event_spec(calendar, eval_date, out);
  return out;
}

// Cold-start selection: the pooled top-1 predictions of all users with
// history stand in for the user's predicted items, and the 1000 most
// recent transactions across all users stand in for their recent borrows.
// Individual-genre carousels are omitted from both sources; only genre
// combinations are kept.
inline std::vector<CarouselSpec> select_carousels_cold_start(
    const Dataset& ds,
    const std::map<std::string, PredictionList>& all_preds,
    const EventCalendar& calendar = {},
    std::optional<Date> eval_date = std::nullopt) {
  detail::FeatureCounts top1_counts;
  std::size_t pooled = 0;
  for (const auto& [user, preds] : all_preds) {
    if (preds.entries.empty()) continue;
    auto it = ds.items().find(preds.entries.front().item_id);
    if (it == ds.items().end()) continue;
    top1_counts.add(it->second);
    ++pooled;
  }
  if (pooled == 0)
    throw Error("cold-start selection: no user has predictions");
  if (ds.transactions().empty())
    throw Error("cold-start selection: dataset has no transactions");

  // Global recency order: newest first, ties by (user_id, item_id) of the
  // canonical transaction order.
  std::vector<const Transaction*> txs;
  txs.reserve(ds.transactions().size());
  for (const auto& tx : ds.transactions()) txs.push_back(&tx);
  std::sort(txs.begin(), txs.end(),
            [](const Transaction* a, const Transaction* b) {
              if (a->timestamp != b->timestamp)
                return a->timestamp > b->timestamp;
              if (a->user_id != b->user_id) return a->user_id < b->user_id;
              return a->item_id < b->item_id;
            });
  detail::FeatureCounts recent_counts;
  const std::size_t take = std::min<std::size_t>(1000, txs.size());
  for (std::size_t i = 0; i < take; ++i)
    recent_counts.add(ds.item(txs[i]->item_id));

  std::vector<CarouselSpec> out;
  detail::PickedValues picked;
  detail::append_specs(top1_counts, Provenance::global, false, picked, out);
  detail::append_specs(recent_counts, Provenance::global, false, picked, out);
  detail::append_event_spec(calendar, eval_date, out);
  return out;
}

namespace detail {

struct FillState {
  const Dataset* ds;
  const CarouselSpec* spec;
  const StrategyParams* params;
  std::string user;
  std::set<std::string> borrowed;
  std::vector<std::string> items;
  std::vector<ItemSource> sources;
  std::set<std::string> selected;

  bool full() const {
    return items.size() >= static_cast<std::size_t>(params->carousel_size);
  }

  bool eligible(const Item& item) const {
    return !borrowed.count(item.id) && !selected.count(item.id) &&
           matches_constraint(item, *spec);
  }

  void add(const std::string& id, ItemSource source) {
    items.push_back(id);
    sources.push_back(source);
    selected.insert(id);
  }

  // Matching, not-borrowed, not-yet-selected catalog items, id order.
  std::vector<const Item*> matching_pool() const {
    std::vector<const Item*> out;
    for (const auto& [id, item] : ds->items())
      if (eligible(item)) out.push_back(&item);
    return out;
  }

  void take_predicted(const PredictionList& preds, int limit) {
    for (const auto& entry : preds.entries) {
      if (items.size() >= static_cast<std::size_t>(limit) || full()) break;
      auto it = ds->items().find(entry.item_id);
      if (it == ds->items().end() || !eligible(it->second)) continue;
      add(entry.item_id, ItemSource::predicted);
    }
  }

  Rng stream(std::string_view purpose) const {
    return Rng(derive_seed(params->seed, "fill", user,
                           std::string(to_string(spec->kind)) + ":" +
                               spec->canonical_constraint(),
                           purpose));
  }

  FilledCarousel finish() && {
    return {*spec, std::move(items), std::move(sources)};
  }
};

inline FillState make_state(const CarouselSpec& spec, const std::string& user,
                            const Dataset& ds, const StrategyParams& p) {
  p.validate();
  FillState st;
  st.ds = &ds;
  st.spec = &spec;
  st.params = &p;
  st.user = user;
  st.borrowed = ds.user_items(user);
  return st;
}

// Greedy pick: the pool item with minimal avg_bis against the current
// selection (all candidates tie at 0 while the selection is empty), ties by
// item_id. Returns pool index or npos.
inline std::size_t argmin_avg_bis(const std::vector<const Item*>& pool,
                                  const std::vector<const Item*>& selected,
                                  const BisWeights& w) {
  std::size_t best = static_cast<std::size_t>(-1);
  double best_score = 0.0;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const double score =
        selected.empty() ? 0.0 : avg_bis(*pool[i], selected, w);
    if (best == static_cast<std::size_t>(-1) || score < best_score ||
        (score == best_score && pool[i]->id < pool[best]->id)) {
      best = i;
      best_score = score;
    }
  }
  return best;
}

inline std::vector<const Item*> resolve_items(const Dataset& ds,
                                              const std::vector<std::string>& ids) {
  std::vector<const Item*> out;
  out.reserve(ids.size());
  for (const auto& id : ids) out.push_back(&ds.item(id));
  return out;
}

// Novelty ordering: recently first-published items first, then most recent
// added_date, then item_id.
inline std::vector<const Item*> novelty_candidates(const FillState& st) {
  std::vector<const Item*> out;
  const Date cutoff = st.params->novelty_cutoff;
  const int cutoff_year = year_of(cutoff);
  for (const Item* item : st.matching_pool())
    if (item->added_date && *item->added_date >= cutoff) out.push_back(item);
  std::sort(out.begin(), out.end(), [&](const Item* a, const Item* b) {
    const bool a_new = a->first_published_year &&
                       *a->first_published_year >= cutoff_year;
    const bool b_new = b->first_published_year &&
                       *b->first_published_year >= cutoff_year;
    if (a_new != b_new) return a_new;
    if (a->added_date->days != b->added_date->days)
      return a->added_date->days > b->added_date->days;
    return a->id < b->id;
  });
  return out;
}

}  // namespace detail

// Basic fill: up to carousel_size matching, not previously borrowed items
// from the prediction list in rank order, topped up with seeded-random
// matching items from the rest of the collection. Users without
// predictions draw everything from the collection.
inline FilledCarousel fill_original(const CarouselSpec& spec,
                                    const std::string& user,
                                    const PredictionList& preds,
                                    const Dataset& ds,
                                    const StrategyParams& p,
                                    const BisWeights& = {}) {
  auto st = detail::make_state(spec, user, ds, p);
  st.take_predicted(preds, p.carousel_size);
  if (!st.full()) {
    auto pool = st.matching_pool();
    auto rng = st.stream("topup");
    rng.shuffle(pool);
    for (const Item* item : pool) {
      if (st.full()) break;
      st.add(item->id, ItemSource::topup);
    }
  }
  return std::move(st).finish();
}

// Diversity fill: up to predicted_take predicted items, then greedily add
// the candidate-pool item with the lowest average similarity to the items
// selected so far.
inline FilledCarousel fill_diversity(const CarouselSpec& spec,
                                     const std::string& user,
                                     const PredictionList& preds,
                                     const Dataset& ds,
                                     const StrategyParams& p,
                                     const BisWeights& w = {}) {
  auto st = detail::make_state(spec, user, ds, p);
  st.take_predicted(preds, p.predicted_take);
  auto rng = st.stream("diversity");
  auto pool = rng.sample(st.matching_pool(),
                         static_cast<std::size_t>(p.candidate_pool_size));
  auto selected = detail::resolve_items(ds, st.items);
  while (!st.full() && !pool.empty()) {
    const std::size_t pick = detail::argmin_avg_bis(pool, selected, w);
    selected.push_back(pool[pick]);
    st.add(pool[pick]->id, ItemSource::diversity);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  return std::move(st).finish();
}

// Serendipity fill: like diversity, but candidates score against the
// user's recency_window most recent borrowed items instead of the carousel
// itself. Users without history fall back to the diversity fill.
inline FilledCarousel fill_serendipity(const CarouselSpec& spec,
                                       const std::string& user,
                                       const PredictionList& preds,
                                       const Dataset& ds,
                                       const StrategyParams& p,
                                       const BisWeights& w = {}) {
  if (!ds.has_user(user)) return fill_diversity(spec, user, preds, ds, p, w);
  auto st = detail::make_state(spec, user, ds, p);
  st.take_predicted(preds, p.predicted_take);
  const auto history = detail::resolve_items(
      ds, recent_transactions(ds, user,
                              static_cast<std::size_t>(p.recency_window)));
  auto rng = st.stream("serendipity");
  auto pool = rng.sample(st.matching_pool(),
                         static_cast<std::size_t>(p.candidate_pool_size));
  // The criterion is static: order once by (score, id).
  std::vector<std::pair<double, const Item*>> ranked;
  ranked.reserve(pool.size());
  for (const Item* c : pool) ranked.emplace_back(avg_bis(*c, history, w), c);
  std::sort(ranked.begin(), ranked.end(),
            [](const auto& a, const auto& b) {
              if (a.first != b.first) return a.first < b.first;
              return a.second->id < b.second->id;
            });
  for (const auto& [score, item] : ranked) {
    if (st.full()) break;
    st.add(item->id, ItemSource::serendipity);
  }
  return std::move(st).finish();
}

// Novelty fill: the diversity slot structure, with the added items drawn
// from matching items added since the cutoff, recently first-published
// ones first.
inline FilledCarousel fill_novelty(const CarouselSpec& spec,
                                   const std::string& user,
                                   const PredictionList& preds,
                                   const Dataset& ds, const StrategyParams& p,
                                   const BisWeights& = {}) {
  auto st = detail::make_state(spec, user, ds, p);
  st.take_predicted(preds, p.predicted_take);
  for (const Item* item : detail::novelty_candidates(st)) {
    if (st.full()) break;
    st.add(item->id, ItemSource::novelty);
  }
  return std::move(st).finish();
}

// Combined fill: 9 top-predicted items, then a novelty -> serendipity ->
// diversity round-robin, one item per strategy per round, until the
// carousel is full or every source is exhausted. A source with no
// remaining eligible item is skipped (a history-less user has no
// serendipity criterion, so that source stays empty for them).
inline FilledCarousel fill_combined(const CarouselSpec& spec,
                                    const std::string& user,
                                    const PredictionList& preds,
                                    const Dataset& ds, const StrategyParams& p,
                                    const BisWeights& w = {}) {
  auto st = detail::make_state(spec, user, ds, p);
  st.take_predicted(preds, p.combined_predicted_take);

  auto novelty = detail::novelty_candidates(st);
  std::size_t novelty_next = 0;

  std::vector<std::pair<double, const Item*>> serendipity;
  if (ds.has_user(user)) {
    const auto history = detail::resolve_items(
        ds, recent_transactions(ds, user,
                                static_cast<std::size_t>(p.recency_window)));
    auto rng = st.stream("combined-serendipity");
    auto pool = rng.sample(st.matching_pool(),
                           static_cast<std::size_t>(p.candidate_pool_size));
    serendipity.reserve(pool.size());
    for (const Item* c : pool)
      serendipity.emplace_back(avg_bis(*c, history, w), c);
    std::sort(serendipity.begin(), serendipity.end(),
              [](const auto& a, const auto& b) {
                if (a.first != b.first) return a.first < b.first;
                return a.second->id < b.second->id;
              });
  }
  std::size_t serendipity_next = 0;

  auto div_rng = st.stream("combined-diversity");
  auto div_pool = div_rng.sample(st.matching_pool(),
                                 static_cast<std::size_t>(p.candidate_pool_size));
  auto selected = detail::resolve_items(ds, st.items);

  bool progressed = true;
  while (!st.full() && progressed) {
    progressed = false;
    // novelty
    while (novelty_next < novelty.size() &&
           st.selected.count(novelty[novelty_next]->id))
      ++novelty_next;
    if (!st.full() && novelty_next < novelty.size()) {
      const Item* item = novelty[novelty_next++];
      selected.push_back(item);
      st.add(item->id, ItemSource::novelty);
      progressed = true;
    }
    // serendipity
    while (serendipity_next < serendipity.size() &&
           st.selected.count(serendipity[serendipity_next].second->id))
      ++serendipity_next;
    if (!st.full() && serendipity_next < serendipity.size()) {
      const Item* item = serendipity[serendipity_next++].second;
      selected.push_back(item);
      st.add(item->id, ItemSource::serendipity);
      progressed = true;
    }
    // diversity
    std::erase_if(div_pool, [&](const Item* c) {
      return st.selected.count(c->id) > 0;
    });
    if (!st.full() && !div_pool.empty()) {
      const std::size_t pick = detail::argmin_avg_bis(div_pool, selected, w);
      const Item* item = div_pool[pick];
      div_pool.erase(div_pool.begin() + static_cast<std::ptrdiff_t>(pick));
      selected.push_back(item);
      st.add(item->id, ItemSource::diversity);
      progressed = true;
    }
  }
  return std::move(st).finish();
}

enum class Strategy { original, diversity, serendipity, novelty, combined };

inline const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::original: return "original";
    case Strategy::diversity: return "diversity";
    case Strategy::serendipity: return "serendipity";
    case Strategy::novelty: return "novelty";
    case Strategy::combined: return "combined";
  }
  return "?";
}

inline Strategy strategy_from_string(std::string_view name) {
  if (name == "original") return Strategy::original;
  if (name == "diversity") return Strategy::diversity;
  if (name == "serendipity") return Strategy::serendipity;
  if (name == "novelty") return Strategy::novelty;
  if (name == "combined") return Strategy::combined;
  throw Error("unknown strategy '" + std::string(name) +
              "' (valid: original, diversity, serendipity, novelty, combined)");
}

inline FilledCarousel fill_carousel(Strategy strategy, const CarouselSpec& spec,
                                    const std::string& user,
                                    const PredictionList& preds,
                                    const Dataset& ds, const StrategyParams& p,
                                    const BisWeights& w = {}) {
  switch (strategy) {
    case Strategy::original: return fill_original(spec, user, preds, ds, p, w);
    case Strategy::diversity: return fill_diversity(spec, user, preds, ds, p, w);
    case Strategy::serendipity:
      return fill_serendipity(spec, user, preds, ds, p, w);
    case Strategy::novelty: return fill_novelty(spec, user, preds, ds, p, w);
    case Strategy::combined: return fill_combined(spec, user, preds, ds, p, w);
  }
  throw InternalError("unreachable strategy");
}

}  // namespace carrec
