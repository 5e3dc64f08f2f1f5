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

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "carrec/catalog.hpp"

namespace carrec::testing {

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("carrec_test_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name, const std::string& contents) const {
    const auto p = path_ / name;
    std::ofstream out(p);
    out << contents;
    return p.string();
  }

  std::string path(const std::string& name = "") const {
    return name.empty() ? path_.string() : (path_ / name).string();
  }

 private:
  std::filesystem::path path_;
};

struct ItemBuilder {
  Item item;

  explicit ItemBuilder(std::string id) { item.id = std::move(id); }

  ItemBuilder& title(std::string t) { item.title = std::move(t); return *this; }
  ItemBuilder& author(std::string a) { item.main_author = std::move(a); return *this; }
  ItemBuilder& genres(std::initializer_list<const char*> gs) {
    for (auto g : gs) item.genres.insert(g);
    return *this;
  }
  ItemBuilder& subjects(std::initializer_list<const char*> ss) {
    for (auto s : ss) item.subjects.insert(s);
    return *this;
  }
  ItemBuilder& age(std::string a) { item.age_category = std::move(a); return *this; }
  ItemBuilder& medium(std::string m) { item.medium_type = std::move(m); return *this; }
  ItemBuilder& fiction(bool f) { item.fiction = f; return *this; }
  ItemBuilder& added(const std::string& date) {
    item.added_date = parse_date(date);
    return *this;
  }
  ItemBuilder& published(int year) {
    item.first_published_year = year;
    return *this;
  }

  operator Item() const { return item; }
};

// Complete-metadata item: every attribute present.
inline Item complete_item(const std::string& id) {
  return ItemBuilder(id)
      .title("title " + id)
      .author("Author " + id)
      .genres({"fantasy"})
      .subjects({"magic"})
      .age("adult")
      .medium("book")
      .fiction(true)
      .added("2020-01-01")
      .published(2019);
}

// Seeded random item with occasional missing attributes; used by property
// tests. Deliberately built on std::mt19937 (test-local determinism only).
inline Item random_item(std::mt19937& rng, const std::string& id) {
  auto pick = [&](int n) { return static_cast<int>(rng() % n); };
  Item item;
  item.id = id;
  item.title = "t" + id;
  if (pick(10) != 0) item.main_author = "author" + std::to_string(pick(6));
  const int n_genres = pick(4);  // 0..3
  for (int i = 0; i < n_genres; ++i)
    item.genres.insert("g" + std::to_string(pick(6)));
  const int n_subjects = pick(5);
  for (int i = 0; i < n_subjects; ++i)
    item.subjects.insert("s" + std::to_string(pick(10)));
  if (pick(10) != 0) item.age_category = "age" + std::to_string(pick(3));
  if (pick(10) != 0) item.medium_type = "m" + std::to_string(pick(3));
  if (pick(10) != 0) item.fiction = pick(2) == 0;
  if (pick(10) != 0)
    item.added_date = Date{18000 + pick(2000)};
  if (pick(10) != 0) item.first_published_year = 1990 + pick(35);
  return item;
}

inline std::vector<const Item*> refs(const std::vector<Item>& items) {
  std::vector<const Item*> out;
  out.reserve(items.size());
  for (const auto& item : items) out.push_back(&item);
  return out;
}

}  // namespace carrec::testing
