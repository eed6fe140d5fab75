// Copyright 2026 The gapsolve Authors
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

#include <array>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gap/instance.hpp"

namespace gap {

/// Malformed input file; the message names the offending field.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline const nlohmann::json& require_key(const nlohmann::json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(std::string("missing required key \"") + key + "\"");
  return *it;
}

inline std::int64_t as_integer(const nlohmann::json& v, const std::string& where) {
  if (!v.is_number_integer()) throw ParseError(where + ": expected an integer");
  return v.get<std::int64_t>();
}

inline std::vector<int> int_array(const nlohmann::json& obj, const char* key) {
  const auto& arr = require_key(obj, key);
  if (!arr.is_array()) throw ParseError(std::string("\"") + key + "\": expected an array");
  std::vector<int> out;
  out.reserve(arr.size());
  for (std::size_t k = 0; k < arr.size(); ++k)
    out.push_back(static_cast<int>(
        as_integer(arr[k], std::string("\"") + key + "\"[" + std::to_string(k) + "]")));
  return out;
}

}  // namespace detail

/// Reads an instance from its JSON object form. Does not normalize.
inline Instance instance_from_json(const nlohmann::json& j) {
  using detail::require_key;
  if (!j.is_object()) throw ParseError("instance must be a JSON object");
  static constexpr std::array kKeys = {"s",        "t",          "cost",      "a_demand",
                                       "a_capacity", "b_demand", "b_capacity"};
  for (const auto& [key, _] : j.items())
    if (std::ranges::find(kKeys, key) == kKeys.end())
      throw ParseError("unknown key \"" + key + "\"");

  Instance inst;
  inst.s = static_cast<int>(detail::as_integer(require_key(j, "s"), "\"s\""));
  inst.t = static_cast<int>(detail::as_integer(require_key(j, "t"), "\"t\""));
  if (inst.s < 1 || inst.t < 1) throw ParseError("\"s\" and \"t\" must be at least 1");

  const auto& cost = require_key(j, "cost");
  if (!cost.is_array()) throw ParseError("\"cost\": expected an array of rows");
  if (cost.size() != static_cast<std::size_t>(inst.s))
    throw ParseError("\"cost\": has " + std::to_string(cost.size()) + " rows, expected s=" +
                     std::to_string(inst.s));
  inst.cost = CostMatrix(static_cast<std::size_t>(inst.s), static_cast<std::size_t>(inst.t));
  for (std::size_t i = 0; i < cost.size(); ++i) {
    const auto& row = cost[i];
    if (!row.is_array() || row.size() != static_cast<std::size_t>(inst.t))
      throw ParseError("\"cost\"[" + std::to_string(i) + "]: row length must equal t=" +
                       std::to_string(inst.t));
    for (std::size_t k = 0; k < row.size(); ++k)
      inst.cost(i, k) = detail::as_integer(
          row[k], "\"cost\"[" + std::to_string(i) + "][" + std::to_string(k) + "]");
  }
  inst.a_demand = detail::int_array(j, "a_demand");
  inst.a_capacity = detail::int_array(j, "a_capacity");
  inst.b_demand = detail::int_array(j, "b_demand");
  inst.b_capacity = detail::int_array(j, "b_capacity");
  return inst;
}

inline nlohmann::json to_json(const Instance& inst) {
  nlohmann::json cost = nlohmann::json::array();
  for (std::size_t i = 0; i < inst.cost.rows(); ++i) {
    auto r = inst.cost.row(i);
    cost.push_back(std::vector<Cost>(r.begin(), r.end()));
  }
  return {{"s", inst.s},
          {"t", inst.t},
          {"cost", std::move(cost)},
          {"a_demand", inst.a_demand},
          {"a_capacity", inst.a_capacity},
          {"b_demand", inst.b_demand},
          {"b_capacity", inst.b_capacity}};
}

inline nlohmann::json pairs_to_json(std::span<const Pair> pairs) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& p : pairs) out.push_back({p.a, p.b});
  return out;
}

/// Accepts either a bare array of [a, b] pairs or an object with a "pairs" key
/// (so `solve` output can be fed straight into `verify`).
inline std::vector<Pair> pairs_from_json(const nlohmann::json& j) {
  const nlohmann::json& arr = j.is_object() ? detail::require_key(j, "pairs") : j;
  if (!arr.is_array()) throw ParseError("\"pairs\": expected an array");
  std::vector<Pair> out;
  for (std::size_t k = 0; k < arr.size(); ++k) {
    const auto& p = arr[k];
    const std::string where = "\"pairs\"[" + std::to_string(k) + "]";
    if (!p.is_array() || p.size() != 2) throw ParseError(where + ": expected [a, b]");
    out.push_back({static_cast<int>(detail::as_integer(p[0], where)),
                   static_cast<int>(detail::as_integer(p[1], where))});
  }
  return out;
}

inline nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

/// Parses and normalizes an instance file. Malformed content raises
/// ParseError; unrepairable bounds raise InstanceError.
inline Instance parse_instance(const std::string& path) {
  Instance inst;
  try {
    inst = instance_from_json(read_json_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
  return normalize_instance(std::move(inst));
}

/// 64-bit FNV-1a over the compact JSON form, as 16 hex digits.
inline std::string instance_digest(const Instance& inst) {
  const std::string text = to_json(inst).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

}  // namespace gap
