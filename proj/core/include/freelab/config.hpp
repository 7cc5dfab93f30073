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


#pragma once

#include <iosfwd>
#include <map>
#include <set>
#include <string>

namespace freelab {

// Flat "key = value" text with keys namespaced as "subcommand.option".
// Blank lines and lines starting with '#' are ignored. Duplicate keys and
// malformed lines are IoErrors.
class Config {
 public:
  using Schema = std::map<std::string, std::set<std::string>>;

  static Config parse(std::istream& is, const std::string& source = "config");
  static Config load(const std::string& path);

  // Rejects any key whose subcommand or option is not in the schema.
  void validate(const Schema& schema) const;
  // Options of one subcommand with the prefix stripped.
  std::map<std::string, std::string> section(const std::string& sub) const;

  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
  std::string source_;
};

}  // namespace freelab
