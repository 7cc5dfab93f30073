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

// Kolmogorov distance between two distribution functions.
//
// Both CDFs are evaluated, with both one-sided limits, on the union of their
// break points. Between consecutive points p < q nothing jumps, so
//
//   |F_a(x) - F_b(x)| <= max(F_a(q-) - F_b(p), F_b(q-) - F_a(p))
//
// for p < x < q, with equality possible only if both move on (p, q). If one
// of them is constant there, |D| is monotone and the endpoint values already
// give the supremum. Intervals whose bound exceeds the running maximum are
// subdivided until the excess is negligible or the budget runs out; what is
// left over is reported as the resolution.

#include <algorithm>
#include <cmath>
#include <functional>
#include <iterator>

#include "freelab/measure.hpp"

namespace freelab {
namespace {

constexpr int kContinuousSweep = 4096;
constexpr double kRefineTarget = 1e-10;
constexpr std::size_t kRefineBudget = 400000;
constexpr int kRefineRounds = 40;

struct Side {
  std::function<double(double)> right;
  std::function<double(double)> left;
  std::vector<double> breaks;
};

void add_uniform(std::vector<double>& out, double lo, double hi, int count) {
  for (int i = 0; i <= count; ++i) {
    out.push_back(lo + (hi - lo) * i / count);
  }
}

Side side_of(const Measure& m) {
  Side s;
  s.right = [&m](double x) { return cdf(m, x); };
  s.left = [&m](double x) { return cdf_left(m, x); };
  if (const auto* a = m.get_if<Atomic>()) {
    s.breaks = a->points;
  } else if (const auto* e = m.get_if<Empirical>()) {
    s.breaks = e->values;
  } else if (const auto* g = m.get_if<GridDensity>()) {
    const auto& t = g->grid;
    s.breaks.reserve(4 * t.size());
    for (std::size_t k = 0; k + 1 < t.size(); ++k) {
      const double h = t[k + 1] - t[k];
      for (int j = 0; j < 4; ++j) s.breaks.push_back(t[k] + 0.25 * j * h);
    }
    s.breaks.push_back(t.back());
  } else {
    const Interval sup = support_interval(m);
    add_uniform(s.breaks, sup.lo, sup.hi, kContinuousSweep);
    for (const auto& [x, w] : atoms(m)) s.breaks.push_back(x);
  }
  return s;
}

struct Node {
  double x;
  double a, a_left, b, b_left;
};

KolmogorovResult run(const Side& sa, const Side& sb) {
  std::vector<double> xs;
  xs.reserve(sa.breaks.size() + sb.breaks.size());
  xs.insert(xs.end(), sa.breaks.begin(), sa.breaks.end());
  xs.insert(xs.end(), sb.breaks.begin(), sb.breaks.end());
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  auto eval = [&](double x) {
    return Node{x, sa.right(x), sa.left(x), sb.right(x), sb.left(x)};
  };
  std::vector<Node> nodes;
  nodes.reserve(xs.size());
  for (double x : xs) nodes.push_back(eval(x));

  KolmogorovResult best;
  auto consider = [&](const Node& n) {
    const double r = std::abs(n.a - n.b);
    const double l = std::abs(n.a_left - n.b_left);
    if (r > best.distance) {
      best.distance = r;
      best.location = n.x;
    }
    if (l > best.distance) {
      best.distance = l;
      best.location = n.x;
    }
  };
  for (const auto& n : nodes) consider(n);

  // Excess of the interval bound over the running maximum; zero when one
  // side does not move on the open interval.
  auto excess = [&](const Node& p, const Node& q) {
    const double da = q.a_left - p.a;
    const double db = q.b_left - p.b;
    if (da <= 0.0 || db <= 0.0) return 0.0;
    const double bound = std::max(q.a_left - p.b, q.b_left - p.a);
    return std::max(0.0, bound - best.distance);
  };

  std::size_t spent = 0;
  for (int round = 0; round < kRefineRounds; ++round) {
    std::vector<std::pair<double, std::size_t>> wide;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
      const double e = excess(nodes[i], nodes[i + 1]);
      if (e > kRefineTarget) wide.emplace_back(e, i);
    }
    const std::size_t room = (kRefineBudget - spent) / 3;
    if (wide.empty() || room == 0) break;
    if (wide.size() > room) {
      std::nth_element(wide.begin(), wide.begin() + room, wide.end(),
                       std::greater<>());
      wide.resize(room);
      std::sort(wide.begin(), wide.end(),
                [](const auto& u, const auto& v) { return u.second < v.second; });
    }
    std::vector<Node> fresh;
    for (const auto& [e, i] : wide) {
      const Node& p = nodes[i];
      const Node& q = nodes[i + 1];
      const double h = q.x - p.x;
      for (int j = 1; j < 4; ++j) {
        const double x = p.x + 0.25 * j * h;
        if (x > p.x && x < q.x) fresh.push_back(eval(x));
      }
    }
    if (fresh.empty()) break;
    spent += fresh.size();
    for (const auto& n : fresh) consider(n);
    std::vector<Node> merged;
    merged.reserve(nodes.size() + fresh.size());
    std::merge(nodes.begin(), nodes.end(), fresh.begin(), fresh.end(),
               std::back_inserter(merged),
               [](const Node& u, const Node& v) { return u.x < v.x; });
    nodes = std::move(merged);
  }

  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    best.resolution = std::max(best.resolution, excess(nodes[i], nodes[i + 1]));
  }
  best.distance = std::min(best.distance, 1.0);
  return best;
}

}  // namespace

KolmogorovResult kolmogorov(const Measure& a, const Measure& b) {
  return run(side_of(a), side_of(b));
}

double kolmogorov_distance(const Measure& a, const Measure& b) {
  return kolmogorov(a, b).distance;
}

KolmogorovResult kolmogorov(const Measure& a,
                            const std::function<double(double)>& reference_cdf,
                            Interval support, int sweep) {
  Side ref;
  ref.right = reference_cdf;
  ref.left = reference_cdf;
  add_uniform(ref.breaks, support.lo, support.hi, std::max(sweep, 1));
  return run(side_of(a), ref);
}

}  // namespace freelab
