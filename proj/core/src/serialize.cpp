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

// Measure files look like
//
//   # comment
//   variant = atomic
//   points = -1,1
//   masses = 0.5,0.5
//
// Keys per variant:
//   atomic        points, masses
//   grid_density  grid, density
//   empirical     values
//   semicircle    variance, center
//   free_poisson  rate, jump, shift, reflected (0 or 1)

#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>

#include "freelab/csv.hpp"
#include "freelab/errors.hpp"
#include "freelab/measure.hpp"

namespace freelab {
namespace {

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += format_double(v[i]);
  }
  return s;
}

class Fields {
 public:
  explicit Fields(std::map<std::string, std::string> kv) : kv_(std::move(kv)) {}

  const std::string& get(const std::string& key) {
    used_.insert(key);
    const auto it = kv_.find(key);
    if (it == kv_.end()) throw IoError("measure file: missing key '" + key + "'");
    return it->second;
  }
  std::string get_or(const std::string& key, const std::string& fallback) {
    used_.insert(key);
    const auto it = kv_.find(key);
    return it == kv_.end() ? fallback : it->second;
  }
  void reject_unused() const {
    for (const auto& [k, v] : kv_) {
      if (!used_.count(k)) throw IoError("measure file: unknown key '" + k + "'");
    }
  }

 private:
  std::map<std::string, std::string> kv_;
  std::set<std::string> used_;
};

}  // namespace

void write_measure(std::ostream& os, const Measure& m) {
  if (const auto* a = m.get_if<Atomic>()) {
    os << "variant = atomic\n"
       << "points = " << join(a->points) << '\n'
       << "masses = " << join(a->masses) << '\n';
  } else if (const auto* g = m.get_if<GridDensity>()) {
    os << "variant = grid_density\n"
       << "grid = " << join(g->grid) << '\n'
       << "density = " << join(g->density) << '\n';
  } else if (const auto* e = m.get_if<Empirical>()) {
    os << "variant = empirical\n"
       << "values = " << join(e->values) << '\n';
  } else if (const auto* s = m.get_if<Semicircle>()) {
    os << "variant = semicircle\n"
       << "variance = " << format_double(s->variance) << '\n'
       << "center = " << format_double(s->center) << '\n';
  } else if (const auto* p = m.get_if<FreePoisson>()) {
    os << "variant = free_poisson\n"
       << "rate = " << format_double(p->rate) << '\n'
       << "jump = " << format_double(p->jump) << '\n'
       << "shift = " << format_double(p->shift) << '\n'
       << "reflected = " << (p->reflected ? 1 : 0) << '\n';
  }
}

Measure read_measure(std::istream& is) {
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto s = trim(line);
    if (s.empty() || s.front() == '#') continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) {
      throw IoError("measure file line " + std::to_string(lineno) +
                    ": expected key = value");
    }
    std::string key(trim(s.substr(0, eq)));
    if (!kv.emplace(key, std::string(trim(s.substr(eq + 1)))).second) {
      throw IoError("measure file: duplicate key '" + key + "'");
    }
  }
  Fields f(std::move(kv));
  const std::string variant = f.get("variant");
  try {
    auto build = [&]() -> Measure {
      if (variant == "atomic") {
        return Measure::atomic(parse_double_list(f.get("points")),
                               parse_double_list(f.get("masses")));
      }
      if (variant == "grid_density") {
        return Measure::grid_density(parse_double_list(f.get("grid")),
                                     parse_double_list(f.get("density")));
      }
      if (variant == "empirical") {
        return Measure::empirical(parse_double_list(f.get("values")));
      }
      if (variant == "semicircle") {
        return Measure::semicircle(parse_double(f.get("variance")),
                                   parse_double(f.get_or("center", "0")));
      }
      if (variant == "free_poisson") {
        FreePoisson p;
        p.rate = parse_double(f.get("rate"));
        p.jump = parse_double(f.get("jump"));
        p.shift = parse_double(f.get_or("shift", "0"));
        p.reflected = parse_int(f.get_or("reflected", "0")) != 0;
        return Measure::free_poisson(p);
      }
      throw IoError("measure file: unknown variant '" + variant + "'");
    };
    Measure m = build();
    f.reject_unused();
    return m;
  } catch (const PreconditionError& e) {
    throw IoError(std::string("measure file: ") + e.what());
  }
}

void save_measure(const std::string& path, const Measure& m) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  write_measure(out, m);
  if (!out) throw IoError("write failed: " + path);
}

Measure load_measure(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return read_measure(in);
}

}  // namespace freelab
