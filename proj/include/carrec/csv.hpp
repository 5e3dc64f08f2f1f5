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

#include <charconv>
#include <fstream>
#include <initializer_list>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "carrec/error.hpp"

namespace carrec {

// Minimal RFC-4180 style parsing: ','-separated, '"'-quoted fields with
// doubled inner quotes. Records do not span lines.
inline std::vector<std::string> parse_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"' && cur.empty()) {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

inline std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos)
    return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::string csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += csv_escape(fields[i]);
  }
  out += '\n';
  return out;
}

// Shortest round-trip formatting so numbers re-read from files compare
// bit-equal with the in-memory values.
inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s) {
  double v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw Error("unparseable number: '" + std::string(s) + "'");
  return v;
}

// Header-row delimited reader. Reads the header eagerly; records stream via
// next(). Line numbers are 1-based file lines (header is line 1). Blank
// lines are skipped. An empty file yields an empty header and no records.
class DelimitedReader {
 public:
  explicit DelimitedReader(const std::string& path) : in_(path), path_(path) {
    if (!in_) throw Error("cannot open file: " + path);
    std::string line;
    while (std::getline(in_, line)) {
      ++lineno_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      header_ = parse_csv_line(line);
      for (std::size_t i = 0; i < header_.size(); ++i)
        columns_[header_[i]] = i;
      break;
    }
  }

  const std::vector<std::string>& header() const { return header_; }

  bool has_column(const std::string& name) const {
    return columns_.count(name) > 0;
  }

  void require_columns(std::initializer_list<const char*> names) const {
    for (const char* name : names)
      if (!has_column(name))
        throw Error(path_ + ": required column '" + std::string(name) +
                    "' missing");
  }

  // Field by column name from the current record; empty view if absent.
  std::string_view field(const std::vector<std::string>& fields,
                         const std::string& name) const {
    auto it = columns_.find(name);
    if (it == columns_.end() || it->second >= fields.size()) return {};
    return fields[it->second];
  }

  bool next(std::size_t& lineno, std::vector<std::string>& fields) {
    std::string line;
    while (std::getline(in_, line)) {
      ++lineno_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      fields = parse_csv_line(line);
      lineno = lineno_;
      return true;
    }
    return false;
  }

 private:
  std::ifstream in_;
  std::string path_;
  std::vector<std::string> header_;
  std::map<std::string, std::size_t> columns_;
  std::size_t lineno_ = 0;
};

}  // namespace carrec
