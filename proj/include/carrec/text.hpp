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

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

namespace carrec {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.emplace_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

template <typename It>
std::string join(It first, It last, std::string_view sep) {
  std::string out;
  for (It it = first; it != last; ++it) {
    if (it != first) out += sep;
    out += *it;
  }
  return out;
}

namespace detail {

// Streams the characters of the normalized form of s (see author_key).
class NormalizedCursor {
 public:
  explicit NormalizedCursor(std::string_view s) : s_(trim(s)) {}

  int next() {  // -1 at end
    while (pos_ < s_.size()) {
      const unsigned char c = static_cast<unsigned char>(s_[pos_]);
      if (std::isspace(c)) {
        pending_space_ = true;
        ++pos_;
        continue;
      }
      if (pending_space_) {
        pending_space_ = false;
        return ' ';
      }
      ++pos_;
      return std::tolower(c);
    }
    return -1;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
  bool pending_space_ = false;
};

}  // namespace detail

// author_key(a) == author_key(b), without allocating.
inline bool normalized_equal(std::string_view a, std::string_view b) {
  detail::NormalizedCursor ca(a), cb(b);
  int x = 0, y = 0;
  do {
    x = ca.next();
    y = cb.next();
    if (x != y) return false;
  } while (x != -1);
  return true;
}

// Normalized author comparison key: ASCII case-folded, runs of whitespace
// collapsed to a single space, outer whitespace stripped.
inline std::string author_key(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  for (char ch : std::string(trim(raw))) {
    if (std::isspace(static_cast<unsigned char>(ch))) {
      pending_space = true;
      continue;
    }
    if (pending_space && !out.empty()) out += ' ';
    pending_space = false;
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  }
  return out;
}

}  // namespace carrec
