// Copyright 2026 The gtep Authors.
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

// Checked field access for the JSON input formats. Every failure is a
// SchemaError naming the offending object and field.

#ifndef GTEP_SRC_JSON_UTIL_HPP
#define GTEP_SRC_JSON_UTIL_HPP

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gtep/system_model.hpp"
#include "json.hpp"

namespace gtep::detail {

inline const nlohmann::json& field(const nlohmann::json& o, const char* key, const std::string& where) {
  if (!o.is_object()) throw SchemaError(where + ": expected an object");
  auto it = o.find(key);
  if (it == o.end()) throw SchemaError(where + ": missing required field '" + key + "'");
  return *it;
}

inline double get_num(const nlohmann::json& o, const char* key, const std::string& where,
                      std::optional<double> def = std::nullopt) {
  if (def && o.is_object() && !o.contains(key)) return *def;
  const auto& v = field(o, key, where);
  if (!v.is_number()) throw SchemaError(where + ": field '" + key + "' must be a number");
  return v.get<double>();
}

inline int get_int(const nlohmann::json& o, const char* key, const std::string& where,
                   std::optional<int> def = std::nullopt) {
  if (def && o.is_object() && !o.contains(key)) return *def;
  const auto& v = field(o, key, where);
  if (!v.is_number_integer()) throw SchemaError(where + ": field '" + key + "' must be an integer");
  return v.get<int>();
}

inline bool get_bool(const nlohmann::json& o, const char* key, const std::string& where) {
  const auto& v = field(o, key, where);
  if (!v.is_boolean()) throw SchemaError(where + ": field '" + key + "' must be a boolean");
  return v.get<bool>();
}

inline std::string get_str(const nlohmann::json& o, const char* key, const std::string& where) {
  const auto& v = field(o, key, where);
  if (!v.is_string()) throw SchemaError(where + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

inline const nlohmann::json& get_array(const nlohmann::json& o, const char* key, const std::string& where) {
  const auto& v = field(o, key, where);
  if (!v.is_array()) throw SchemaError(where + ": field '" + key + "' must be an array");
  return v;
}

inline std::vector<double> num_array(const nlohmann::json& v, const std::string& where) {
  if (!v.is_array()) throw SchemaError(where + ": expected an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& x : v) {
    if (!x.is_number()) throw SchemaError(where + ": expected an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

// Per-model-year array of length n; a scalar default fills a missing field.
inline std::vector<double> per_year(const nlohmann::json& o, const char* key, const std::string& where, int n,
                                    std::optional<double> def = std::nullopt) {
  if (def && o.is_object() && !o.contains(key)) return std::vector<double>(n, *def);
  auto v = num_array(field(o, key, where), where + "." + key);
  if (static_cast<int>(v.size()) != n)
    throw SchemaError(where + ": field '" + key + "' needs " + std::to_string(n) + " entries (one per year), got " +
                      std::to_string(v.size()));
  return v;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace gtep::detail

#endif  // GTEP_SRC_JSON_UTIL_HPP
