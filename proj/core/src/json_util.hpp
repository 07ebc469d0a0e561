// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "vidsum/error.hpp"

namespace vidsum::detail {

using json = nlohmann::json;

inline json parse_json(std::string_view text, const std::string& where) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(where + ": " + e.what());
  }
}

/// Calls `fn(object, line_number)` for every non-blank line.
inline void for_each_jsonl(std::string_view text, const std::string& where,
                           const std::function<void(const json&, std::size_t)>& fn) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    const auto here = where + " line " + std::to_string(line_no);
    const json obj = parse_json(line, here);
    if (!obj.is_object()) throw ParseError(here + ": expected a JSON object");
    fn(obj, line_no);
  }
}

inline const json& field(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(where + ": missing field '" + key + "'");
  return *it;
}

inline std::string get_string(const json& obj, const char* key, const std::string& where) {
  const auto& v = field(obj, key, where);
  if (!v.is_string()) throw ParseError(where + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

inline double get_number(const json& v, const char* key, const std::string& where) {
  if (!v.is_number()) throw ParseError(where + ": field '" + key + "' must be a number");
  return v.get<double>();
}

inline double number_field(const json& obj, const char* key, const std::string& where) {
  return get_number(field(obj, key, where), key, where);
}

inline std::uint32_t get_index(const json& v, const char* key, const std::string& where) {
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0 ||
      v.get<std::int64_t>() > std::numeric_limits<std::uint32_t>::max()) {
    throw ParseError(where + ": field '" + key + "' must be a non-negative integer");
  }
  return static_cast<std::uint32_t>(v.get<std::int64_t>());
}

inline std::uint32_t index_field(const json& obj, const char* key, const std::string& where) {
  return get_index(field(obj, key, where), key, where);
}

}  // namespace vidsum::detail
