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


#include <cmath>
#include <istream>
#include <ostream>

#include "freelab/csv.hpp"
#include "freelab/errors.hpp"
#include "freelab/rates.hpp"

namespace freelab {

void write_rate_series(std::ostream& os, const std::vector<RatePoint>& s) {
  CsvWriter w(os);
  w.header({"n", "delta"});
  for (const auto& p : s) w.row({std::int64_t{p.n}, p.delta});
}

std::vector<RatePoint> read_rate_series(std::istream& is) {
  const CsvTable t = read_csv_table(is);
  const std::size_t cn = t.column("n");
  const std::size_t cd = t.column("delta");
  std::vector<RatePoint> out;
  out.reserve(t.rows.size());
  for (const auto& row : t.rows) {
    const double n = row[cn];
    if (n != std::floor(n) || n < 1 || n > 1e9) {
      throw IoError("rate series: n must be a positive integer");
    }
    out.push_back({static_cast<int>(n), row[cd]});
  }
  return out;
}

}  // namespace freelab
