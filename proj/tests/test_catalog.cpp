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
#include <catch2/catch_amalgamated.hpp>

#include "carrec/catalog.hpp"
#include "test_support.hpp"

using namespace carrec;
using carrec::testing::TempDir;

namespace {

const char* kItemsHeader =
    "item_id,title,main_author,genres,subjects,age_category,medium_type,"
    "fiction,added_date,first_published_year\n";

Dataset toy_dataset() {
  ItemMap items;
  for (const char* id : {"A", "B", "C", "D"})
    items.emplace(id, carrec::testing::complete_item(id));
  std::vector<Transaction> txs{
      {"u1", "A", parse_timestamp("2023-01-01T10:00:00Z")},
      {"u1", "B", parse_timestamp("2023-01-02T10:00:00Z")},
      {"u2", "C", parse_timestamp("2023-01-03T10:00:00Z")},
  };
  return Dataset::build(std::move(items), std::move(txs));
}

}  // namespace

TEST_CASE("load_items maps all fields and flags missing cells", "[catalog]") {
  TempDir tmp;
  const auto path = tmp.file(
      "items.csv",
      std::string(kItemsHeader) +
          "B1,\"Dragons, Etc.\",A. Writer,fantasy;adventure,dragons;maps;lore,"
          "adult,book,true,2023-04-01,2023\n"
          "B2,Plain,,,,,,,,\n");
  const auto result = load_items(path);
  REQUIRE(result.items.size() == 2);
  REQUIRE(result.report.issues.empty());

  const Item& b1 = result.items.at("B1");
  CHECK(b1.title == "Dragons, Etc.");  // quoted comma survives
  CHECK(b1.genres == std::set<std::string>{"fantasy", "adventure"});
  CHECK(b1.subjects.size() == 3);
  CHECK(b1.fiction == true);
  CHECK(b1.added_date == parse_date("2023-04-01"));
  CHECK(b1.first_published_year == 2023);

  const Item& b2 = result.items.at("B2");
  CHECK(b2.genres.empty());
  CHECK_FALSE(b2.main_author.has_value());
  CHECK_FALSE(b2.fiction.has_value());
  CHECK_FALSE(b2.added_date.has_value());
}

TEST_CASE("load_items collects malformed rows and rejects duplicates",
          "[catalog]") {
  TempDir tmp;
  const auto bad = tmp.file("items.csv",
                            std::string(kItemsHeader) +
                                "B1,T,,fantasy,,adult,book,true,2023-04-01,2023\n"
                                "B2,T,,fantasy,,adult,book,yes,2023-04-01,2023\n"
                                "B3,T,,fantasy,,adult,book,,not-a-date,2023\n");
  const auto result = load_items(bad);
  CHECK(result.items.size() == 1);
  REQUIRE(result.report.issues.size() == 2);
  CHECK(result.report.issues[0].row == 3);
  CHECK(result.report.issues[1].row == 4);

  const auto dup = tmp.file("dup.csv", std::string(kItemsHeader) +
                                           "B7,T,,,,,,,,\n"
                                           "B7,T,,,,,,,,\n");
  CHECK_THROWS_WITH(load_items(dup),
                    Catch::Matchers::ContainsSubstring("B7"));

  const auto no_id = tmp.file("noid.csv", "title,genres\nX,fantasy\n");
  CHECK_THROWS_WITH(load_items(no_id),
                    Catch::Matchers::ContainsSubstring("item_id"));
}

TEST_CASE("load_items reads line-delimited records", "[catalog]") {
  TempDir tmp;
  const auto path = tmp.file(
      "items.jsonl",
      R"({"item_id":"J1","title":"One","genres":["a","b"],"fiction":true})"
      "\n"
      R"({"item_id":"J2","subjects":["s"],"added_date":"2024-02-02"})"
      "\n"
      "not json\n");
  const auto result = load_items(path, ItemFileFormat::jsonl);
  CHECK(result.items.size() == 2);
  CHECK(result.items.at("J1").genres.size() == 2);
  CHECK(result.items.at("J2").added_date == parse_date("2024-02-02"));
  REQUIRE(result.report.issues.size() == 1);
  CHECK(result.report.issues[0].row == 3);
}

TEST_CASE("load_transactions drops unknown items and orders by tie-break",
          "[catalog]") {
  TempDir tmp;
  ItemMap items;
  items.emplace("A", carrec::testing::complete_item("A"));
  items.emplace("B", carrec::testing::complete_item("B"));

  const auto path = tmp.file("tx.csv",
                             "user_id,item_id,timestamp\n"
                             "u1,B,2023-01-05T09:00:00Z\n"
                             "u1,A,2023-01-05T09:00:00Z\n"
                             "u1,GHOST,2023-01-06T09:00:00Z\n");
  const auto result = load_transactions(path, items);
  REQUIRE(result.transactions.size() == 2);
  CHECK(result.report.rows_dropped == 1);
  // same user, same timestamp: ordered by item_id
  CHECK(result.transactions[0].item_id == "A");
  CHECK(result.transactions[1].item_id == "B");

  const auto bad_ts = tmp.file("bad.csv",
                               "user_id,item_id,timestamp\n"
                               "u1,A,yesterday\n");
  const auto bad = load_transactions(bad_ts, items);
  CHECK(bad.transactions.empty());
  REQUIRE(bad.report.issues.size() == 1);
  CHECK(bad.report.issues[0].reason.find("yesterday") != std::string::npos);

  const auto empty = tmp.file("empty.csv", "");
  CHECK(load_transactions(empty, items).transactions.empty());
}

TEST_CASE("dataset indexes users deterministically", "[catalog]") {
  const Dataset ds = toy_dataset();
  CHECK(ds.users() == std::vector<std::string>{"u1", "u2"});
  CHECK(ds.user_transactions("u1").size() == 2);
  CHECK(ds.user_items("u2") == std::set<std::string>{"C"});
  CHECK_THROWS_AS(ds.user_transactions("nobody"), Error);

  std::size_t total = 0;
  for (const auto& user : ds.users())
    total += ds.user_transactions(user).size();
  CHECK(total == ds.transactions().size());
}

TEST_CASE("annual loan filter averages per active year", "[catalog]") {
  ItemMap items;
  items.emplace("A", carrec::testing::complete_item("A"));
  std::vector<Transaction> txs;
  auto add_loans = [&](const std::string& user, const std::string& year,
                       int count) {
    for (int i = 0; i < count; ++i)
      txs.push_back({user, "A",
                     parse_timestamp(year + "-01-01T00:00:00Z") + i * 3600});
  };
  add_loans("heavy", "2023", 60);   // 60/yr -> removed
  add_loans("edge", "2023", 10);    // exactly 10/yr -> retained (inclusive)
  add_loans("spread", "2022", 15);  // 30 loans over 2 years = 15/yr
  add_loans("spread", "2023", 15);
  const Dataset ds = Dataset::build(items, txs);

  const Dataset filtered = filter_users_by_annual_loans(ds, 10, 50);
  CHECK(filtered.users() == std::vector<std::string>{"edge", "spread"});

  // idempotent
  const Dataset twice = filter_users_by_annual_loans(filtered, 10, 50);
  CHECK(twice.users() == filtered.users());
  CHECK(twice.transactions().size() == filtered.transactions().size());

  CHECK_THROWS_AS(filter_users_by_annual_loans(ds, 50, 10), Error);
}

TEST_CASE("train/test split holds out the most recent items", "[catalog]") {
  ItemMap items;
  for (int i = 0; i < 10; ++i)
    items.emplace("I" + std::to_string(i),
                  carrec::testing::complete_item("I" + std::to_string(i)));
  std::vector<Transaction> txs;
  for (int u = 0; u < 6; ++u)
    for (int i = 0; i < 8; ++i)
      txs.push_back({"u" + std::to_string(u), "I" + std::to_string(i),
                     parse_timestamp("2023-01-01T00:00:00Z") + i * 86400});
  const Dataset ds = Dataset::build(items, txs);

  const auto split = split_train_test(ds, 3, 2, 42);
  CHECK(split.test.size() == 3);
  std::size_t held = 0;
  for (const auto& [user, truth] : split.test) {
    held += truth.size();
    // the held-out items are the most recent two
    CHECK(truth == std::set<std::string>{"I6", "I7"});
    CHECK(split.train.user_transactions(user).size() == 6);
    for (const auto& tx : split.train.user_transactions(user))
      CHECK_FALSE(truth.count(tx.item_id));
  }
  CHECK(held == 6);

  // multiset union of train + held-out equals the original per test user
  for (const auto& [user, truth] : split.test) {
    CHECK(split.train.user_transactions(user).size() + 2 ==
          ds.user_transactions(user).size());
  }

  // determinism
  const auto again = split_train_test(ds, 3, 2, 42);
  CHECK(again.test == split.test);
  const auto other_seed = split_train_test(ds, 3, 2, 43);
  CHECK(other_seed.test.size() == 3);

  // zero test users: everything stays in train
  const auto none = split_train_test(ds, 0, 2, 1);
  CHECK(none.test.empty());
  CHECK(none.train.transactions().size() == ds.transactions().size());

  CHECK_THROWS_WITH(split_train_test(ds, 7, 2, 1),
                    Catch::Matchers::ContainsSubstring("insufficient"));
}

TEST_CASE("recent transactions keep re-borrows and cap at n", "[catalog]") {
  ItemMap items;
  items.emplace("A", carrec::testing::complete_item("A"));
  items.emplace("B", carrec::testing::complete_item("B"));
  std::vector<Transaction> txs;
  const Timestamp base = parse_timestamp("2023-06-01T00:00:00Z");
  txs.push_back({"u", "A", base + 1});
  txs.push_back({"u", "B", base + 2});
  txs.push_back({"u", "A", base + 3});  // re-borrow
  const Dataset ds = Dataset::build(items, txs);

  CHECK(recent_transactions(ds, "u", 200) ==
        std::vector<std::string>{"A", "B", "A"});
  CHECK(recent_transactions(ds, "u", 2) == std::vector<std::string>{"A", "B"});
  CHECK_THROWS_AS(recent_transactions(ds, "ghost", 5), Error);

  // 250 -> 200 cap
  std::vector<Transaction> many;
  for (int i = 0; i < 250; ++i)
    many.push_back({"m", i % 2 ? "A" : "B", base + i});
  const Dataset big = Dataset::build(items, many);
  CHECK(recent_transactions(big, "m", 200).size() == 200);
}
