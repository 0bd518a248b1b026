// Copyright 2026 The ffslab Authors.
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

// Report serialization and config-file loading for the ffslab tool.

#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ffslab/error.hpp"
#include "json.hpp"

namespace ffslab::cli {

/// Fixed-point text for a double rounded to 1e-12, trailing zeros removed.
/// Magnitudes of 1e15 and beyond switch to 13 significant digits.
inline std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[64];
  if (std::abs(v) >= 1e15) {
    std::snprintf(buf, sizeof buf, "%.12e", v);
    return buf;
  }
  std::snprintf(buf, sizeof buf, "%.12f", v);
  std::string s = buf;
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.push_back('0');
  if (s == "-0.0") s = "0.0";
  return s;
}

namespace detail {
inline void write_json(std::string& out, const nlohmann::json& j, int depth) {
  const std::string pad(2 * (depth + 1), ' ');
  const std::string close(2 * depth, ' ');
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {  // keys come out sorted
        if (!first) out += ",\n";
        first = false;
        out += pad + nlohmann::json(key).dump() + ": ";
        write_json(out, value, depth + 1);
      }
      out += "\n" + close + "}";
      return;
    }
    case nlohmann::json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        write_json(out, j[i], depth + 1);
      }
      out += "\n" + close + "]";
      return;
    }
    case nlohmann::json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    default:
      out += j.dump();
  }
}
}  // namespace detail

/// Pretty JSON with sorted keys and fixed float precision.
inline std::string dump(const nlohmann::json& j) {
  std::string out;
  detail::write_json(out, j, 0);
  out.push_back('\n');
  return out;
}

/// A config value as the matching JSON scalar: integers, decimals and
/// booleans become typed values, anything else stays a string.
inline nlohmann::json typed_value(const std::string& text) {
  if (text.empty()) return nullptr;
  if (text == "true") return true;
  if (text == "false") return false;
  const bool numeric = text.find_first_not_of("+-0123456789.eE") == std::string::npos;
  if (numeric) {
    try {
      std::size_t used = 0;
      if (text.find_first_of(".eE") == std::string::npos) {
        const long long v = std::stoll(text, &used);
        if (used == text.size()) return v;
      } else {
        const double v = std::stod(text, &used);
        if (used == text.size()) return v;
      }
    } catch (const std::logic_error&) {
    }
  }
  return text;
}

struct ConfigFile {
  std::optional<std::string> command;
  std::vector<std::string> args;  // "--key=value" tokens
};

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline void add_setting(ConfigFile& cfg, const std::string& key, const std::string& value) {
  if (key.empty()) fail(ErrorCode::kConfigError, "config entry without a key");
  if (key == "command") {
    cfg.command = value;
  } else if (key == "config") {
    fail(ErrorCode::kConfigError, "config files cannot include other config files");
  } else {
    cfg.args.push_back("--" + key + "=" + value);
  }
}

/// Parses a JSON object or key=value lines ('#' starts a comment). The
/// special key "command" selects the subcommand.
inline ConfigFile parse_config(const std::string& text) {
  ConfigFile cfg;
  const std::string body = trim(text);
  if (body.empty()) fail(ErrorCode::kConfigError, "config is empty");
  if (body.front() == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
      fail(ErrorCode::kConfigError, std::string("config is not valid JSON: ") + e.what());
    }
    if (j.empty()) fail(ErrorCode::kConfigError, "config is empty");
    for (const auto& [key, value] : j.items()) {
      if (value.is_string()) {
        add_setting(cfg, key, value.get<std::string>());
      } else if (value.is_array()) {
        std::string joined;
        for (const auto& v : value) {
          if (v.is_structured()) fail(ErrorCode::kConfigError, "nested value for '" + key + "'");
          if (!joined.empty()) joined += ',';
          joined += v.is_string() ? v.get<std::string>() : v.dump();
        }
        add_setting(cfg, key, joined);
      } else if (value.is_primitive() && !value.is_null()) {
        add_setting(cfg, key, value.dump());
      } else {
        fail(ErrorCode::kConfigError, "unsupported value for '" + key + "'");
      }
    }
    return cfg;
  }
  std::istringstream in(body);
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(ErrorCode::kConfigError, "config line without '=': " + line);
    add_setting(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  if (!cfg.command && cfg.args.empty()) fail(ErrorCode::kConfigError, "config is empty");
  return cfg;
}

inline ConfigFile load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kConfigError, "cannot read config file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

}  // namespace ffslab::cli
