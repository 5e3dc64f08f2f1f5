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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "carrec/csv.hpp"
#include "carrec/error.hpp"
#include "carrec/random.hpp"
#include "carrec/text.hpp"
#include "carrec/time.hpp"

namespace carrec {

// One catalog record. Empty optionals / empty sets are explicit "missing"
// values and are never defaulted.
struct Item {
  std::string id;
  std::string title;
  std::optional<std::string> main_author;  // raw form; compare via author_key
  std::set<std::string> genres;
  std::set<std::string> subjects;
  std::optional<std::string> age_category;
  std::optional<std::string> medium_type;
  std::optional<bool> fiction;
  std::optional<Date> added_date;
  std::optional<int> first_published_year;

  std::optional<std::string> author_norm() const {
    if (!main_author) return std::nullopt;
    std::string key = author_key(*main_author);
    if (key.empty()) return std::nullopt;
    return key;
  }
};

// One implicit-feedback checkout event.
struct Transaction {
  std::string user_id;
  std::string item_id;
  Timestamp timestamp = 0;
};

inline bool transaction_order(const Transaction& a, const Transaction& b) {
  if (a.user_id != b.user_id) return a.user_id < b.user_id;
  if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
  return a.item_id < b.item_id;
}

using ItemMap = std::map<std::string, Item>;

struct LoadIssue {
  std::size_t row = 0;
  std::string reason;
};

struct LoadReport {
  std::vector<LoadIssue> issues;
  std::size_t rows_loaded = 0;
  std::size_t rows_dropped = 0;

  void add(std::size_t row, std::string reason) {
    issues.push_back({row, std::move(reason)});
    ++rows_dropped;
  }

  // Line-delimited {row, reason} records.
  std::string to_jsonl() const {
    std::string out;
    for (const auto& issue : issues) {
      nlohmann::json j{{"row", issue.row}, {"reason", issue.reason}};
      out += j.dump();
      out += '\n';
    }
    return out;
  }
};

// Immutable after construction; concurrent reads are safe.
class Dataset {
 public:
  Dataset() = default;

  static Dataset build(ItemMap items, std::vector<Transaction> transactions) {
    Dataset ds;
    ds.items_ = std::move(items);
    ds.transactions_ = std::move(transactions);
    std::sort(ds.transactions_.begin(), ds.transactions_.end(),
              transaction_order);
    for (const auto& tx : ds.transactions_) {
      if (!ds.items_.count(tx.item_id))
        throw InternalError("transaction references unknown item " +
                            tx.item_id);
    }
    std::size_t begin = 0;
    for (std::size_t i = 1; i <= ds.transactions_.size(); ++i) {
      if (i == ds.transactions_.size() ||
          ds.transactions_[i].user_id != ds.transactions_[begin].user_id) {
        ds.user_index_[ds.transactions_[begin].user_id] = {begin, i};
        begin = i;
      }
    }
    return ds;
  }

  const ItemMap& items() const { return items_; }
  const std::vector<Transaction>& transactions() const { return transactions_; }

  const Item& item(const std::string& id) const {
    auto it = items_.find(id);
    if (it == items_.end()) throw Error("unknown item: " + id);
    return it->second;
  }

  bool has_user(const std::string& user_id) const {
    return user_index_.count(user_id) > 0;
  }

  // Sorted by user_id.
  std::vector<std::string> users() const {
    std::vector<std::string> out;
    out.reserve(user_index_.size());
    for (const auto& [user, span] : user_index_) out.push_back(user);
    return out;
  }

  // The user's transactions, oldest first (tie-break by item_id).
  std::span<const Transaction> user_transactions(
      const std::string& user_id) const {
    auto it = user_index_.find(user_id);
    if (it == user_index_.end()) throw Error("unknown user: " + user_id);
    return {transactions_.data() + it->second.first,
            it->second.second - it->second.first};
  }

  std::set<std::string> user_items(const std::string& user_id) const {
    std::set<std::string> out;
    if (!has_user(user_id)) return out;
    for (const auto& tx : user_transactions(user_id)) out.insert(tx.item_id);
    return out;
  }

 private:
  ItemMap items_;
  std::vector<Transaction> transactions_;
  std::map<std::string, std::pair<std::size_t, std::size_t>> user_index_;
};

namespace detail {

inline std::set<std::string> parse_code_set(std::string_view cell) {
  std::set<std::string> out;
  if (trim(cell).empty()) return out;
  for (const auto& part : split(cell, ';')) {
    const auto t = trim(part);
    if (!t.empty()) out.insert(std::string(t));
  }
  return out;
}

inline std::optional<std::string> opt_text(std::string_view cell) {
  const auto t = trim(cell);
  if (t.empty()) return std::nullopt;
  return std::string(t);
}

// Throws Error on a malformed field so the caller can report the row.
inline Item item_from_fields(const DelimitedReader& reader,
                             const std::vector<std::string>& fields) {
  auto get = [&](const std::string& name) -> std::string_view {
    return reader.field(fields, name);
  };
  Item item;
  item.id = std::string(trim(get("item_id")));
  if (item.id.empty()) throw Error("missing item_id");
  item.title = std::string(trim(get("title")));
  item.main_author = opt_text(get("main_author"));
  item.genres = parse_code_set(get("genres"));
  item.subjects = parse_code_set(get("subjects"));
  item.age_category = opt_text(get("age_category"));
  item.medium_type = opt_text(get("medium_type"));
  if (auto f = opt_text(get("fiction"))) {
    if (*f == "true")
      item.fiction = true;
    else if (*f == "false")
      item.fiction = false;
    else
      throw Error("fiction must be true, false or empty, got '" + *f + "'");
  }
  if (auto d = opt_text(get("added_date"))) item.added_date = parse_date(*d);
  if (auto y = opt_text(get("first_published_year"))) {
    int year = 0;
    if (!detail::parse_int(*y, year))
      throw Error("unparseable first_published_year '" + *y + "'");
    item.first_published_year = year;
  }
  return item;
}

inline Item item_from_json(const nlohmann::json& j) {
  Item item;
  item.id = j.value("item_id", std::string());
  if (item.id.empty()) throw Error("missing item_id");
  item.title = j.value("title", std::string());
  if (j.contains("main_author") && j["main_author"].is_string() &&
      !j["main_author"].get<std::string>().empty())
    item.main_author = j["main_author"].get<std::string>();
  for (const char* key : {"genres", "subjects"}) {
    if (!j.contains(key)) continue;
    auto& dst = std::string_view(key) == "genres" ? item.genres : item.subjects;
    if (!j[key].is_array()) throw Error(std::string(key) + " must be an array");
    for (const auto& g : j[key]) dst.insert(g.get<std::string>());
  }
  if (j.contains("age_category") && !j["age_category"].is_null())
    item.age_category = j["age_category"].get<std::string>();
  if (j.contains("medium_type") && !j["medium_type"].is_null())
    item.medium_type = j["medium_type"].get<std::string>();
  if (j.contains("fiction") && !j["fiction"].is_null())
    item.fiction = j["fiction"].get<bool>();
  if (j.contains("added_date") && !j["added_date"].is_null())
    item.added_date = parse_date(j["added_date"].get<std::string>());
  if (j.contains("first_published_year") &&
      !j["first_published_year"].is_null())
    item.first_published_year = j["first_published_year"].get<int>();
  return item;
}

}  // namespace detail

enum class ItemFileFormat { csv, jsonl };

struct ItemsLoadResult {
  ItemMap items;
  LoadReport report;
};

// Malformed rows are collected in the report; a duplicate item_id is a hard
// error naming the id.
inline ItemsLoadResult load_items(const std::string& path,
                                  ItemFileFormat format = ItemFileFormat::csv) {
  ItemsLoadResult result;
  auto insert = [&](std::size_t row, Item&& item) {
    if (result.items.count(item.id))
      throw Error("duplicate item_id '" + item.id + "' at row " +
                  std::to_string(row));
    result.items.emplace(item.id, std::move(item));
    ++result.report.rows_loaded;
  };
  if (format == ItemFileFormat::csv) {
    DelimitedReader reader(path);
    reader.require_columns({"item_id"});
    std::size_t row = 0;
    std::vector<std::string> fields;
    while (reader.next(row, fields)) {
      try {
        insert(row, detail::item_from_fields(reader, fields));
      } catch (const Error& e) {
        if (std::string_view(e.what()).starts_with("duplicate item_id")) throw;
        result.report.add(row, e.what());
      }
    }
  } else {
    std::ifstream in(path);
    if (!in) throw Error("cannot open file: " + path);
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
      ++row;
      if (trim(line).empty()) continue;
      try {
        insert(row, detail::item_from_json(nlohmann::json::parse(line)));
      } catch (const Error& e) {
        if (std::string_view(e.what()).starts_with("duplicate item_id")) throw;
        result.report.add(row, e.what());
      } catch (const nlohmann::json::exception& e) {
        result.report.add(row, e.what());
      }
    }
  }
  return result;
}

struct TransactionsLoadResult {
  std::vector<Transaction> transactions;
  LoadReport report;
};

// Rows referencing unknown items are dropped and counted; unparseable rows
// become row-level report entries. Output sorted by (user, timestamp, item).
inline TransactionsLoadResult load_transactions(const std::string& path,
                                                const ItemMap& catalog) {
  TransactionsLoadResult result;
  DelimitedReader reader(path);
  if (!reader.header().empty())
    reader.require_columns({"user_id", "item_id", "timestamp"});
  std::size_t row = 0;
  std::vector<std::string> fields;
  while (reader.next(row, fields)) {
    Transaction tx;
    tx.user_id = std::string(trim(reader.field(fields, "user_id")));
    tx.item_id = std::string(trim(reader.field(fields, "item_id")));
    if (tx.user_id.empty() || tx.item_id.empty()) {
      result.report.add(row, "missing user_id or item_id");
      continue;
    }
    try {
      tx.timestamp = parse_timestamp(trim(reader.field(fields, "timestamp")));
    } catch (const Error& e) {
      result.report.add(row, e.what());
      continue;
    }
    if (!catalog.count(tx.item_id)) {
      result.report.add(row, "unknown item: " + tx.item_id);
      continue;
    }
    result.transactions.push_back(std::move(tx));
    ++result.report.rows_loaded;
  }
  std::sort(result.transactions.begin(), result.transactions.end(),
            transaction_order);
  return result;
}

// Annual loan rate = loans / number of distinct calendar years with at
// least one loan. Bounds are inclusive.
inline Dataset filter_users_by_annual_loans(const Dataset& ds, double min_rate,
                                            double max_rate) {
  if (min_rate > max_rate)
    throw Error("annual-loan filter: min exceeds max");
  std::vector<Transaction> kept;
  for (const auto& user : ds.users()) {
    const auto txs = ds.user_transactions(user);
    std::set<int> years;
    for (const auto& tx : txs) years.insert(year_of(tx.timestamp));
    const double rate =
        static_cast<double>(txs.size()) / static_cast<double>(years.size());
    if (rate >= min_rate && rate <= max_rate)
      kept.insert(kept.end(), txs.begin(), txs.end());
  }
  return Dataset::build(ds.items(), std::move(kept));
}

struct TrainTestSplit {
  Dataset train;
  std::map<std::string, std::set<std::string>> test;  // user -> ground truth
};

// Holds out each chosen user's most recent `per_user_holdout` transactions;
// their items become the (deduplicated) ground-truth set.
inline TrainTestSplit split_train_test(const Dataset& ds,
                                       std::size_t n_test_users,
                                       std::size_t per_user_holdout,
                                       std::uint64_t seed) {
  std::vector<std::string> eligible;
  for (const auto& user : ds.users())
    if (ds.user_transactions(user).size() > per_user_holdout)
      eligible.push_back(user);
  if (eligible.size() < n_test_users)
    throw Error("insufficient eligible test users: need " +
                std::to_string(n_test_users) + ", have " +
                std::to_string(eligible.size()));
  Rng rng(derive_seed(seed, "split"));
  const auto chosen_vec = rng.sample(eligible, n_test_users);
  const std::set<std::string> chosen(chosen_vec.begin(), chosen_vec.end());

  TrainTestSplit out;
  std::vector<Transaction> train_txs;
  train_txs.reserve(ds.transactions().size());
  for (const auto& user : ds.users()) {
    const auto txs = ds.user_transactions(user);
    if (!chosen.count(user)) {
      train_txs.insert(train_txs.end(), txs.begin(), txs.end());
      continue;
    }
    const std::size_t keep = txs.size() - per_user_holdout;
    train_txs.insert(train_txs.end(), txs.begin(), txs.begin() + keep);
    auto& truth = out.test[user];
    for (std::size_t i = keep; i < txs.size(); ++i)
      truth.insert(txs[i].item_id);
  }
  out.train = Dataset::build(ds.items(), std::move(train_txs));
  return out;
}

// The user's n most recent transaction items, most recent first. Re-borrows
// are kept.
inline std::vector<std::string> recent_transactions(const Dataset& ds,
                                                    const std::string& user,
                                                    std::size_t n) {
  const auto txs = ds.user_transactions(user);  // throws on unknown user
  std::vector<std::string> out;
  const std::size_t take = std::min(n, txs.size());
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i)
    out.push_back(txs[txs.size() - 1 - i].item_id);
  return out;
}

}  // namespace carrec
