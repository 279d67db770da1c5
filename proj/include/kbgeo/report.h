// Copyright 2026 The kbgeo Authors
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

#ifndef KBGEO_REPORT_H_
#define KBGEO_REPORT_H_

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace kbgeo {

// Ordered key/value report. Keys are dotted paths ("bounds.n_max"); entry
// order is insertion order and is preserved by both output formats.
class Report {
 public:
  Report& add(std::string key, std::string value);
  Report& add(std::string key, const char* value) {
    return add(std::move(key), std::string(value));
  }
  Report& add(std::string key, bool value);
  Report& add(std::string key, long long value);
  Report& add(std::string key, int value) {
    return add(std::move(key), static_cast<long long>(value));
  }
  Report& add(std::string key, std::size_t value) {
    return add(std::move(key), static_cast<long long>(value));
  }
  // Appends every entry of `other` under `prefix.`.
  Report& append(std::string_view prefix, const Report& other);

  // First value stored under key, or empty.
  std::string get(std::string_view key) const;
  bool has(std::string_view key) const;

  const std::vector<std::pair<std::string, std::string>>& entries() const {
    return entries_;
  }

  friend bool operator==(const Report&, const Report&) = default;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

enum class ReportFormat { kText, kMachine };

// Text: nested "key: value" lines, two spaces per level, a section header
// line whenever the dotted prefix changes. Machine: "key=value" per line.
// Newlines inside values are escaped as "\n" in both formats.
std::string WriteReport(const Report& report, ReportFormat format);

}  // namespace kbgeo

#endif  // KBGEO_REPORT_H_
