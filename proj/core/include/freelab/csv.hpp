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

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace freelab {

// Shortest round-trip-safe text for a double: 17 significant digits.
std::string format_double(double x);
// Strict decimal parse of the whole string; throws IoError.
double parse_double(std::string_view s);
std::int64_t parse_int(std::string_view s);
std::vector<double> parse_double_list(std::string_view s, char sep = ',');

std::string_view trim(std::string_view s);

// CSV output: '#' metadata lines, one header row, then data rows.
class CsvWriter {
 public:
  using Cell = std::variant<double, std::int64_t, std::string>;

  explicit CsvWriter(std::ostream& os) : os_(os) {}

  void metadata(std::string_view key, const Cell& value);
  // seed, n, N and the build's git describe string.
  void run_metadata(std::uint64_t seed, std::int64_t n, std::int64_t N);
  void header(const std::vector<std::string>& columns);
  void row(const std::vector<Cell>& cells);

 private:
  std::ostream& os_;
  std::size_t columns_ = 0;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::size_t column(std::string_view name) const;
};
// Numeric CSV with a header row; '#' lines are skipped.
CsvTable read_csv_table(std::istream& is);
CsvTable read_csv_table(const std::string& path);

}  // namespace freelab
