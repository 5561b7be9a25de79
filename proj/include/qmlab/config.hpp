// Copyright 2026 The qmlab Authors
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

#ifndef QMLAB_CONFIG_HPP
#define QMLAB_CONFIG_HPP

#include <map>
#include <set>
#include <string>
#include <vector>

namespace qmlab {

/// INI-style configuration: [section] headers, key = value lines, ';' or '#'
/// comments. Keys are addressed as "section.key". Every lookup is recorded
/// so that misspelled keys can be reported after a plan is assembled.
class Config {
 public:
  static Config parse(const std::string& text);
  static Config load(const std::string& path);

  bool has(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  /// Comma-separated reals; entries may be written as fractions "1/64".
  std::vector<double> get_list(const std::string& key,
                               const std::vector<double>& fallback) const;

  /// Keys present in the file but never looked up.
  std::vector<std::string> unused_keys() const;
  /// Throws listing the unused keys, if any.
  void reject_unused() const;

  void set(const std::string& key, const std::string& value);

 private:
  const std::string* find(const std::string& key) const;

  std::map<std::string, std::string> values_;
  mutable std::set<std::string> used_;
};

/// Parses "0.125", "1/8" or "1e-3".
double parse_real(const std::string& text);

}  // namespace qmlab

#endif  // QMLAB_CONFIG_HPP
