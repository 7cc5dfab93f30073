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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "freelab/errors.hpp"
#include "freelab/free_conv.hpp"

namespace freelab {
namespace {

void validate(const AtomList& a) {
  if (a.locations.size() != a.masses.size()) {
    throw PreconditionError("atom list: locations and masses differ in size");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!std::isfinite(a.locations[i]) || !(a.masses[i] > 0.0) ||
        a.masses[i] > 1.0) {
      throw PreconditionError("atom list: masses must lie in (0, 1]");
    }
    total += a.masses[i];
    for (std::size_t j = 0; j < i; ++j) {
      if (a.locations[j] == a.locations[i]) {
        throw PreconditionError("atom list: repeated location");
      }
    }
  }
  if (total > 1.0 + 1e-12) {
    throw PreconditionError("atom list: masses sum to more than 1");
  }
}

}  // namespace

AtomList AtomList::of(const Measure& m) {
  AtomList out;
  for (const auto& [x, w] : atoms(m)) {
    out.locations.push_back(x);
    out.masses.push_back(w);
  }
  return out;
}

AtomList convolution_atoms(const AtomList& a1, const AtomList& a2) {
  validate(a1);
  validate(a2);
  std::vector<std::pair<double, double>> found;
  for (std::size_t i = 0; i < a1.size(); ++i) {
    for (std::size_t j = 0; j < a2.size(); ++j) {
      const double s = a1.masses[i] + a2.masses[j];
      if (s > 1.0) found.emplace_back(a1.locations[i] + a2.locations[j], s - 1.0);
    }
  }
  std::sort(found.begin(), found.end());
  AtomList out;
  for (const auto& [x, w] : found) {
    if (!out.empty() && out.locations.back() == x) {
      out.masses.back() += w;
    } else {
      out.locations.push_back(x);
      out.masses.push_back(w);
    }
  }
  return out;
}

AtomList nfold_atoms(const AtomList& a, int n) {
  if (n < 2) throw PreconditionError("nfold_atoms: n must be at least 2");
  AtomList acc = a;
  for (int k = 2; k <= n; ++k) acc = convolution_atoms(acc, a);
  return acc;
}

}  // namespace freelab
