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

#include "qmlab/config.hpp"

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qmlab/error.hpp"

namespace qmlab {
namespace {

double parse_number(const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(v))
    fail(ErrorCode::kInvalidArgument, "not a number: '" + text + "'");
  return v;
}

// The INI reader keeps trailing comments; cut them here.
std::string strip_comment(const std::string& raw) {
  std::string s = raw;
  const auto cut = s.find_first_of(";#");
  if (cut != std::string::npos) s.erase(cut);
  boost::algorithm::trim(s);
  return s;
}

}  // namespace

double parse_real(const std::string& text) {
  const std::string s = boost::algorithm::trim_copy(text);
  const auto slash = s.find('/');
  if (slash == std::string::npos) return parse_number(s);
  const double num = parse_number(boost::algorithm::trim_copy(s.substr(0, slash)));
  const double den = parse_number(boost::algorithm::trim_copy(s.substr(slash + 1)));
  if (den == 0.0) fail(ErrorCode::kInvalidArgument, "zero denominator in '" + text + "'");
  return num / den;
}

Config Config::parse(const std::string& text) {
  boost::property_tree::ptree tree;
  std::istringstream in(text);
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    fail(ErrorCode::kInvalidArgument, std::string("config: ") + e.what());
  }
  Config c;
  for (const auto& [section, body] : tree) {
    if (body.empty()) {
      fail(ErrorCode::kInvalidArgument,
           "config: key '" + section + "' outside of any section");
    }
    for (const auto& [key, leaf] : body)
      c.values_[section + "." + key] = strip_comment(leaf.get_value<std::string>());
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot open config " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

const std::string* Config::find(const std::string& key) const {
  used_.insert(key);
  const auto it = values_.find(key);
  return it == values_.end() ? nullptr : &it->second;
}

bool Config::has(const std::string& key) const { return values_.count(key) > 0; }

double Config::get_double(const std::string& key, double fallback) const {
  const std::string* v = find(key);
  if (!v) return fallback;
  try {
    return parse_real(*v);
  } catch (const Error& e) {
    fail(ErrorCode::kInvalidArgument, key + ": " + e.what());
  }
}

int Config::get_int(const std::string& key, int fallback) const {
  const double v = get_double(key, fallback);
  if (v != std::round(v) || std::abs(v) > 1e9)
    fail(ErrorCode::kInvalidArgument, key + ": expected an integer");
  return static_cast<int>(v);
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  const std::string* v = find(key);
  return v ? *v : fallback;
}

std::vector<double> Config::get_list(const std::string& key,
                                     const std::vector<double>& fallback) const {
  const std::string* v = find(key);
  if (!v) return fallback;
  std::vector<std::string> parts;
  boost::algorithm::split(parts, *v, boost::algorithm::is_any_of(","));
  std::vector<double> out;
  for (const auto& p : parts) {
    if (boost::algorithm::trim_copy(p).empty()) continue;
    try {
      out.push_back(parse_real(p));
    } catch (const Error& e) {
      fail(ErrorCode::kInvalidArgument, key + ": " + e.what());
    }
  }
  if (out.empty()) fail(ErrorCode::kInvalidArgument, key + ": empty list");
  return out;
}

std::vector<std::string> Config::unused_keys() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : values_)
    if (!used_.count(k)) out.push_back(k);
  return out;
}

void Config::reject_unused() const {
  const auto keys = unused_keys();
  if (keys.empty()) return;
  std::string msg = "config: unknown keys:";
  for (const auto& k : keys) msg += " " + k;
  fail(ErrorCode::kInvalidArgument, msg);
}

void Config::set(const std::string& key, const std::string& value) {
  require(key.find('.') != std::string::npos, "config keys look like section.key");
  values_[key] = value;
}

}  // namespace qmlab
