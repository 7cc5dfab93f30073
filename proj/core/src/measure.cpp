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

#include "freelab/measure.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "freelab/errors.hpp"
#include "freelab/random.hpp"

namespace freelab {
namespace {

constexpr double kPi = std::numbers::pi;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_finite(const std::vector<double>& v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw PreconditionError(std::string(what) + ": non-finite value");
    }
  }
}

void require_increasing(const std::vector<double>& v, const char* what) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] > v[i - 1])) {
      throw PreconditionError(std::string(what) +
                              ": points must be strictly increasing");
    }
  }
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double catalan(int j) { return binomial(2 * j, j) / (j + 1); }

// Moments of the free Poisson law with the given rate and jump (Narayana).
double free_poisson_raw_moment(double rate, double jump, int k) {
  if (k == 0) return 1.0;
  double s = 0.0;
  for (int i = 1; i <= k; ++i) {
    const double narayana = binomial(k, i) * binomial(k, i - 1) / k;
    s += narayana * std::pow(rate, i);
  }
  return s * std::pow(jump, k);
}

// Moments of center + scale * Y from the moments of Y.
template <class YMoment>
double affine_moment(double center, double scale, int k, YMoment&& ymom) {
  double s = 0.0;
  for (int j = 0; j <= k; ++j) {
    const double mj = ymom(j);
    if (mj == 0.0) continue;
    s += binomial(k, j) * std::pow(center, k - j) * std::pow(scale, j) * mj;
  }
  return s;
}

struct FreePoissonEdges {
  double a, b, atom;
};

FreePoissonEdges edges_of(const FreePoisson& p) {
  const double sl = std::sqrt(p.rate);
  return {p.jump * (1.0 - sl) * (1.0 - sl), p.jump * (1.0 + sl) * (1.0 + sl),
          p.rate < 1.0 ? 1.0 - p.rate : 0.0};
}

// Absolutely continuous part of the free Poisson CDF at y, in closed form.
// With y = m - r cos(t) the density integral reduces to elementary terms.
double free_poisson_ac_cdf(const FreePoisson& p, double y) {
  const auto e = edges_of(p);
  const double total = std::min(1.0, p.rate);
  if (y <= e.a) return 0.0;
  if (y >= e.b) return total;
  const double alpha = p.jump;
  const double sl = std::sqrt(p.rate);
  const double m = alpha * (1.0 + p.rate);
  const double r = 2.0 * alpha * sl;
  const double q = alpha * std::abs(1.0 - p.rate);
  const double theta = std::acos(std::clamp((m - y) / r, -1.0, 1.0));
  double value = r * std::sin(theta) + m * theta;
  if (q > 0.0) {
    const double half = 0.5 * theta;
    value -= 2.0 * q *
             std::atan2((1.0 + sl) * std::sin(half),
                        std::abs(1.0 - sl) * std::cos(half));
  }
  return std::clamp(value / (2.0 * kPi * alpha), 0.0, total);
}

double free_poisson_cdf_y(const FreePoisson& p, double y, bool left) {
  const auto e = edges_of(p);
  double f = free_poisson_ac_cdf(p, y);
  if (e.atom > 0.0 && (left ? y > 0.0 : y >= 0.0)) f += e.atom;
  return std::clamp(f, 0.0, 1.0);
}

double free_poisson_cdf(const FreePoisson& p, double x, bool left) {
  if (!p.reflected) return free_poisson_cdf_y(p, x - p.shift, left);
  // P(-Y <= t) = 1 - P(Y < -t); P(-Y < t) = 1 - P(Y <= -t).
  return 1.0 - free_poisson_cdf_y(p, p.shift - x, !left);
}

double semicircle_cdf(const Semicircle& s, double x) {
  const double y = (x - s.center) / std::sqrt(s.variance);
  if (y <= -2.0) return 0.0;
  if (y >= 2.0) return 1.0;
  const double v = 0.5 + y * std::sqrt(4.0 - y * y) / (4.0 * kPi) +
                   std::asin(0.5 * y) / kPi;
  return std::clamp(v, 0.0, 1.0);
}

double grid_cdf(const GridDensity& g, double x) {
  const auto& t = g.grid;
  if (x <= t.front()) return 0.0;
  if (x >= t.back()) return 1.0;
  const std::size_t k =
      static_cast<std::size_t>(std::upper_bound(t.begin(), t.end(), x) -
                               t.begin()) - 1;
  const double h = t[k + 1] - t[k];
  const double u = x - t[k];
  const double f0 = g.density[k];
  const double f1 = g.density[k + 1];
  const double v = g.cumulative[k] + f0 * u + (f1 - f0) * u * u / (2.0 * h);
  return std::clamp(v, 0.0, 1.0);
}

double atomic_cdf(const Atomic& a, double x, bool left) {
  const auto end = left ? std::lower_bound(a.points.begin(), a.points.end(), x)
                        : std::upper_bound(a.points.begin(), a.points.end(), x);
  const auto n = end - a.points.begin();
  if (n == static_cast<std::ptrdiff_t>(a.points.size())) return 1.0;
  const double s = std::accumulate(a.masses.begin(), a.masses.begin() + n, 0.0);
  return std::min(s, 1.0);
}

double empirical_cdf(const Empirical& e, double x, bool left) {
  const auto& v = e.values;
  const auto end = left ? std::lower_bound(v.begin(), v.end(), x)
                        : std::upper_bound(v.begin(), v.end(), x);
  return static_cast<double>(end - v.begin()) / static_cast<double>(v.size());
}

double cdf_impl(const Measure& m, double x, bool left) {
  return std::visit(
      Overloaded{
          [&](const Atomic& a) { return atomic_cdf(a, x, left); },
          [&](const GridDensity& g) { return grid_cdf(g, x); },
          [&](const Empirical& e) { return empirical_cdf(e, x, left); },
          [&](const Semicircle& s) { return semicircle_cdf(s, x); },
          [&](const FreePoisson& p) { return free_poisson_cdf(p, x, left); },
      },
      m.payload());
}

}  // namespace

Measure Measure::atomic(std::vector<double> points, std::vector<double> masses) {
  if (points.empty() || points.size() != masses.size()) {
    throw PreconditionError("atomic: need equally many points and masses (>0)");
  }
  require_finite(points, "atomic");
  require_finite(masses, "atomic");
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](auto i, auto j) { return points[i] < points[j]; });
  Atomic a;
  double total = 0.0;
  for (auto i : order) {
    if (!(masses[i] > 0.0)) {
      throw PreconditionError("atomic: masses must be positive");
    }
    total += masses[i];
    if (!a.points.empty() && a.points.back() == points[i]) {
      a.masses.back() += masses[i];
    } else {
      a.points.push_back(points[i]);
      a.masses.push_back(masses[i]);
    }
  }
  if (std::abs(total - 1.0) > 1e-9) {
    std::ostringstream os;
    os << "atomic: masses sum to " << total << ", expected 1";
    throw PreconditionError(os.str());
  }
  for (double& w : a.masses) w /= total;
  return Measure(std::move(a));
}

Measure Measure::point_mass(double at) { return atomic({at}, {1.0}); }

Measure Measure::grid_density(std::vector<double> grid,
                              std::vector<double> density) {
  if (grid.size() < 2 || grid.size() != density.size()) {
    throw PreconditionError(
        "grid_density: need at least two nodes and one value per node");
  }
  require_finite(grid, "grid_density");
  require_finite(density, "grid_density");
  require_increasing(grid, "grid_density");
  for (double f : density) {
    if (f < 0.0) throw PreconditionError("grid_density: negative density");
  }
  GridDensity g;
  g.cumulative.assign(grid.size(), 0.0);
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    g.cumulative[k + 1] = g.cumulative[k] + 0.5 * (grid[k + 1] - grid[k]) *
                                                (density[k] + density[k + 1]);
  }
  const double total = g.cumulative.back();
  if (!(total > 0.0)) {
    throw PreconditionError("grid_density: density integrates to zero");
  }
  for (double& f : density) f /= total;
  for (double& c : g.cumulative) c /= total;
  g.grid = std::move(grid);
  g.density = std::move(density);
  return Measure(std::move(g));
}

Measure Measure::empirical(std::vector<double> samples) {
  if (samples.empty()) throw PreconditionError("empirical: empty sample");
  require_finite(samples, "empirical");
  std::sort(samples.begin(), samples.end());
  return Measure(Empirical{std::move(samples)});
}

Measure Measure::semicircle(double variance, double center) {
  if (!(variance > 0.0) || !std::isfinite(variance) || !std::isfinite(center)) {
    throw PreconditionError("semicircle: variance must be positive and finite");
  }
  return Measure(Semicircle{variance, center});
}

Measure Measure::free_poisson(double rate, double jump) {
  return free_poisson(FreePoisson{rate, jump, 0.0, false});
}

Measure Measure::free_poisson(const FreePoisson& p) {
  if (!(p.rate > 0.0) || !(p.jump > 0.0) || !std::isfinite(p.rate) ||
      !std::isfinite(p.jump) || !std::isfinite(p.shift)) {
    throw PreconditionError("free_poisson: rate and jump must be positive");
  }
  return Measure(p);
}

MeasureKind Measure::kind() const {
  return static_cast<MeasureKind>(payload_.index());
}

bool Measure::is_discrete() const {
  return kind() == MeasureKind::kAtomic || kind() == MeasureKind::kEmpirical;
}

std::string Measure::describe() const {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const Atomic& a) { os << "atomic(" << a.points.size()
                                           << " atoms)"; },
                 [&](const GridDensity& g) { os << "grid_density("
                                                << g.grid.size() << " nodes)"; },
                 [&](const Empirical& e) { os << "empirical("
                                              << e.values.size() << " values)"; },
                 [&](const Semicircle& s) { os << "semicircle(variance="
                                               << s.variance << ", center="
                                               << s.center << ")"; },
                 [&](const FreePoisson& p) {
                   os << "free_poisson(rate=" << p.rate << ", jump=" << p.jump
                      << ", shift=" << p.shift
                      << (p.reflected ? ", reflected)" : ")");
                 },
             },
             payload_);
  return os.str();
}

double cdf(const Measure& m, double x) { return cdf_impl(m, x, false); }
double cdf_left(const Measure& m, double x) { return cdf_impl(m, x, true); }

double density(const Measure& m, double x) {
  return std::visit(
      Overloaded{
          [&](const Atomic&) -> double {
            throw PreconditionError("density: atomic law has no density");
          },
          [&](const Empirical&) -> double {
            throw PreconditionError("density: empirical law has no density");
          },
          [&](const GridDensity& g) -> double {
            const auto& t = g.grid;
            if (x < t.front() || x > t.back()) return 0.0;
            auto k = static_cast<std::size_t>(
                std::upper_bound(t.begin(), t.end(), x) - t.begin());
            if (k == t.size()) return g.density.back();
            --k;
            const double u = (x - t[k]) / (t[k + 1] - t[k]);
            return (1.0 - u) * g.density[k] + u * g.density[k + 1];
          },
          [&](const Semicircle& s) -> double {
            const double d = 4.0 * s.variance - (x - s.center) * (x - s.center);
            return d > 0.0 ? std::sqrt(d) / (2.0 * kPi * s.variance) : 0.0;
          },
          [&](const FreePoisson& p) -> double {
            const auto e = edges_of(p);
            const double y = p.reflected ? p.shift - x : x - p.shift;
            if (y <= e.a || y >= e.b) return 0.0;
            return std::sqrt((y - e.a) * (e.b - y)) / (2.0 * kPi * p.jump * y);
          },
      },
      m.payload());
}

std::vector<std::pair<double, double>> atoms(const Measure& m) {
  std::vector<std::pair<double, double>> out;
  if (const auto* a = m.get_if<Atomic>()) {
    for (std::size_t i = 0; i < a->points.size(); ++i) {
      out.emplace_back(a->points[i], a->masses[i]);
    }
  } else if (const auto* e = m.get_if<Empirical>()) {
    const double w = 1.0 / static_cast<double>(e->values.size());
    for (double v : e->values) {
      if (!out.empty() && out.back().first == v) {
        out.back().second += w;
      } else {
        out.emplace_back(v, w);
      }
    }
  } else if (const auto* p = m.get_if<FreePoisson>()) {
    const auto e = edges_of(*p);
    if (e.atom > 0.0) out.emplace_back(p->shift, e.atom);
  }
  return out;
}

double moment(const Measure& m, int k) {
  if (k < 1) throw PreconditionError("moment: degree must be positive");
  if (k > kMaxMomentDegree) {
    throw PreconditionError("moment: degree " + std::to_string(k) +
                            " exceeds the supported maximum of 16");
  }
  return std::visit(
      Overloaded{
          [&](const Atomic& a) {
            double s = 0.0;
            for (std::size_t i = 0; i < a.points.size(); ++i) {
              s += a.masses[i] * std::pow(a.points[i], k);
            }
            return s;
          },
          [&](const Empirical& e) {
            double s = 0.0;
            for (double v : e.values) s += std::pow(v, k);
            return s / static_cast<double>(e.values.size());
          },
          [&](const GridDensity& g) {
            // 10-point Gauss-Legendre per cell is exact for x^k times a
            // linear function up to k = 18.
            using Rule = boost::math::quadrature::gauss<double, 10>;
            const auto& xs = Rule::abscissa();
            const auto& ws = Rule::weights();
            double s = 0.0;
            for (std::size_t c = 0; c + 1 < g.grid.size(); ++c) {
              const double f0 = g.density[c], f1 = g.density[c + 1];
              if (f0 == 0.0 && f1 == 0.0) continue;
              const double mid = 0.5 * (g.grid[c] + g.grid[c + 1]);
              const double half = 0.5 * (g.grid[c + 1] - g.grid[c]);
              double cell = 0.0;
              auto node = [&](double u, double w) {
                const double x = mid + half * u;
                const double f = 0.5 * (f0 + f1) + 0.5 * (f1 - f0) * u;
                cell += w * f * std::pow(x, k);
              };
              for (std::size_t i = 0; i < xs.size(); ++i) {
                node(xs[i], ws[i]);
                if (xs[i] != 0.0) node(-xs[i], ws[i]);
              }
              s += half * cell;
            }
            return s;
          },
          [&](const Semicircle& sc) {
            return affine_moment(sc.center, std::sqrt(sc.variance), k,
                                 [](int j) {
                                   return j % 2 ? 0.0 : catalan(j / 2);
                                 });
          },
          [&](const FreePoisson& p) {
            return affine_moment(p.shift, p.reflected ? -1.0 : 1.0, k,
                                 [&](int j) {
                                   return free_poisson_raw_moment(p.rate,
                                                                  p.jump, j);
                                 });
          },
      },
      m.payload());
}

double mean(const Measure& m) { return moment(m, 1); }

double variance(const Measure& m) {
  if (const auto* s = m.get_if<Semicircle>()) return s->variance;
  if (const auto* p = m.get_if<FreePoisson>()) return p->rate * p->jump * p->jump;
  const double mu = mean(m);
  // Central second moment computed directly to avoid cancellation.
  return std::visit(
      Overloaded{
          [&](const Atomic& a) {
            double s = 0.0;
            for (std::size_t i = 0; i < a.points.size(); ++i) {
              s += a.masses[i] * (a.points[i] - mu) * (a.points[i] - mu);
            }
            return s;
          },
          [&](const Empirical& e) {
            double s = 0.0;
            for (double v : e.values) s += (v - mu) * (v - mu);
            return s / static_cast<double>(e.values.size());
          },
          [&](const auto&) { return moment(shift(m, -mu), 2); },
      },
      m.payload());
}

Interval support_interval(const Measure& m) {
  return std::visit(
      Overloaded{
          [](const Atomic& a) {
            return Interval{a.points.front(), a.points.back()};
          },
          [](const Empirical& e) {
            return Interval{e.values.front(), e.values.back()};
          },
          [](const GridDensity& g) {
            const auto& f = g.density;
            std::size_t first = 0;
            while (f[first] == 0.0) ++first;
            std::size_t last = f.size() - 1;
            while (f[last] == 0.0) --last;
            const std::size_t lo = first == 0 ? 0 : first - 1;
            const std::size_t hi = last + 1 == f.size() ? last : last + 1;
            return Interval{g.grid[lo], g.grid[hi]};
          },
          [](const Semicircle& s) {
            const double r = 2.0 * std::sqrt(s.variance);
            return Interval{s.center - r, s.center + r};
          },
          [](const FreePoisson& p) {
            const auto e = edges_of(p);
            const double lo = e.atom > 0.0 ? 0.0 : e.a;
            if (p.reflected) return Interval{p.shift - e.b, p.shift - lo};
            return Interval{p.shift + lo, p.shift + e.b};
          },
      },
      m.payload());
}

Measure dilate(const Measure& m, double c) {
  if (c == 0.0 || !std::isfinite(c)) {
    throw PreconditionError("dilate: scale must be nonzero and finite");
  }
  return std::visit(
      Overloaded{
          [&](const Atomic& a) {
            std::vector<double> p = a.points;
            for (double& x : p) x *= c;
            return Measure::atomic(std::move(p), a.masses);
          },
          [&](const Empirical& e) {
            std::vector<double> v = e.values;
            for (double& x : v) x *= c;
            return Measure::empirical(std::move(v));
          },
          [&](const GridDensity& g) {
            std::vector<double> t = g.grid;
            std::vector<double> f = g.density;
            for (double& x : t) x *= c;
            if (c < 0.0) {
              std::reverse(t.begin(), t.end());
              std::reverse(f.begin(), f.end());
            }
            return Measure::grid_density(std::move(t), std::move(f));
          },
          [&](const Semicircle& s) {
            return Measure::semicircle(c * c * s.variance, c * s.center);
          },
          [&](const FreePoisson& p) {
            FreePoisson q = p;
            q.jump = std::abs(c) * p.jump;
            q.shift = c * p.shift;
            q.reflected = (c < 0.0) != p.reflected;
            return Measure::free_poisson(q);
          },
      },
      m.payload());
}

Measure shift(const Measure& m, double a) {
  if (!std::isfinite(a)) throw PreconditionError("shift: non-finite offset");
  return std::visit(
      Overloaded{
          [&](const Atomic& at) {
            std::vector<double> p = at.points;
            for (double& x : p) x += a;
            return Measure::atomic(std::move(p), at.masses);
          },
          [&](const Empirical& e) {
            std::vector<double> v = e.values;
            for (double& x : v) x += a;
            return Measure::empirical(std::move(v));
          },
          [&](const GridDensity& g) {
            std::vector<double> t = g.grid;
            for (double& x : t) x += a;
            return Measure::grid_density(std::move(t), g.density);
          },
          [&](const Semicircle& s) {
            return Measure::semicircle(s.variance, s.center + a);
          },
          [&](const FreePoisson& p) {
            FreePoisson q = p;
            q.shift += a;
            return Measure::free_poisson(q);
          },
      },
      m.payload());
}

double quantile(const Measure& m, double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw PreconditionError("quantile: probability outside [0, 1]");
  }
  const Interval s = support_interval(m);
  if (p == 0.0) return s.lo;
  if (const auto* e = m.get_if<Empirical>()) {
    const auto n = static_cast<double>(e->values.size());
    auto idx = static_cast<std::size_t>(std::ceil(p * n - 1e-12));
    idx = std::clamp<std::size_t>(idx, 1, e->values.size());
    return e->values[idx - 1];
  }
  if (const auto* a = m.get_if<Atomic>()) {
    double c = 0.0;
    for (std::size_t i = 0; i < a->points.size(); ++i) {
      c += a->masses[i];
      if (c >= p - 1e-15) return a->points[i];
    }
    return a->points.back();
  }
  for (const auto& [x, w] : atoms(m)) {
    if (cdf_left(m, x) < p && p <= cdf(m, x)) return x;
  }
  double lo = s.lo, hi = s.hi;
  for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (cdf(m, mid) >= p) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

std::vector<double> sample(const Measure& m, std::size_t count, Rng& rng) {
  std::vector<double> out(count);
  for (auto& x : out) x = quantile(m, rng.uniform());
  return out;
}

}  // namespace freelab
