// Copyright 2026 The freelab Authors.
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


#include "freelab/config.hpp"

#include <fstream>
#include <istream>

#include "freelab/csv.hpp"
#include "freelab/errors.hpp"

namespace freelab {

Config Config::parse(std::istream& is, const std::string& source) {
  Config c;
  c.source_ = source;
  std::string line;
  int number = 0;
  while (std::getline(is, line)) {
    ++number;
    const std::string t(trim(line));
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    const std::string where = source + ":" + std::to_string(number);
    if (eq == std::string::npos) {
      throw IoError(where + ": expected key = value");
    }
    const std::string key(trim(std::string_view(t).substr(0, eq)));
    const std::string value(trim(std::string_view(t).substr(eq + 1)));
    const auto dot = key.find('.');
    if (key.empty() || dot == std::string::npos || dot == 0 ||
        dot + 1 == key.size()) {
      throw IoError(where + ": key '" + key + "' is not subcommand.option");
    }
    if (!c.entries_.emplace(key, value).second) {
      throw IoError(where + ": duplicate key '" + key + "'");
    }
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path);
  return parse(in, path);
}

void Config::validate(const Schema& schema) const {
  for (const auto& [key, value] : entries_) {
    const auto dot = key.find('.');
    const std::string sub = key.substr(0, dot);
    const std::string opt = key.substr(dot + 1);
    const auto it = schema.find(sub);
    if (it == schema.end()) {
      throw IoError(source_ + ": unknown subcommand in key '" + key + "'");
    }
    if (!it->second.count(opt)) {
      throw IoError(source_ + ": unknown option in key '" + key + "'");
    }
  }
}

std::map<std::string, std::string> Config::section(const std::string& sub) const {
  std::map<std::string, std::string> out;
  const std::string prefix = sub + ".";
  for (const auto& [key, value] : entries_) {
    if (key.compare(0, prefix.size(), prefix) == 0) {
      out.emplace(key.substr(prefix.size()), value);
    }
  }
  return out;
}

}  // namespace freelab
