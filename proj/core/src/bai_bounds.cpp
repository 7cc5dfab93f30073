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

#include "freelab/bai_bounds.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

#include "freelab/csv.hpp"
#include "freelab/errors.hpp"
#include "freelab/transforms.hpp"

namespace freelab {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLineTailTarget = 1e-7;
constexpr double kQuadTol = 1e-10;
constexpr double kQuadAbsTol = 1e-14;
constexpr int kVerticalSeeds = 64;
constexpr int kVerticalTop = 3;
constexpr int kSmoothGrid = 512;

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 61>;

struct Quad {
  double value = 0.0;
  double error = 0.0;
};

template <class F>
Quad integrate(F&& f, double lo, double hi, const char* term) {
  if (!(hi > lo)) return {};
  // A shallow pass first: integrands near roundoff level never meet the
  // relative tolerance, and their error estimate is added to the bound anyway.
  double err = 0.0;
  double v = Kronrod::integrate(f, lo, hi, 5, kQuadTol, &err);
  if (!(err <= std::max(kQuadTol * std::abs(v), kQuadAbsTol))) {
    v = Kronrod::integrate(f, lo, hi, 15, kQuadTol, &err);
  }
  if (!std::isfinite(v) || err > 1e-6 * std::max(1.0, std::abs(v))) {
    std::ostringstream os;
    os << term << ": quadrature did not converge on [" << lo << ", " << hi
       << "] (error estimate " << err << ")";
    throw ConvergenceError(os.str());
  }
  return {v, err};
}

// Integral of F from -inf to x, i.e. E (x - X)_+.
double integrated_cdf(const Measure& m, double x) {
  if (const auto* a = m.get_if<Atomic>()) {
    double s = 0.0;
    for (std::size_t i = 0; i < a->points.size() && a->points[i] < x; ++i) {
      s += a->masses[i] * (x - a->points[i]);
    }
    return s;
  }
  if (const auto* e = m.get_if<Empirical>()) {
    double s = 0.0;
    for (double v : e->values) {
      if (v >= x) break;
      s += x - v;
    }
    return s / static_cast<double>(e->values.size());
  }
  if (const auto* s = m.get_if<Semicircle>()) {
    const double sigma = std::sqrt(s->variance);
    const double y = (x - s->center) / sigma;
    if (y <= -2.0) return 0.0;
    if (y >= 2.0) return sigma * y;
    const double r = 4.0 - y * y;
    const double f = 0.5 + y * std::sqrt(r) / (4.0 * kPi) + std::asin(0.5 * y) / kPi;
    return sigma * (y * f + r * std::sqrt(r) / (6.0 * kPi));
  }
  if (const auto* g = m.get_if<GridDensity>()) {
    const auto& t = g->grid;
    if (x <= t.front()) return 0.0;
    // Cell integrals of the piecewise quadratic CDF.
    double s = 0.0;
    for (std::size_t k = 0; k + 1 < t.size(); ++k) {
      const double h = t[k + 1] - t[k];
      const double u = std::min(x, t[k + 1]) - t[k];
      const double f0 = g->density[k], f1 = g->density[k + 1];
      s += g->cumulative[k] * u + f0 * u * u / 2.0 +
           (f1 - f0) * u * u * u / (6.0 * h);
      if (x <= t[k + 1]) return s;
    }
    return s + (x - t.back());
  }
  const Interval sup = support_interval(m);
  if (x <= sup.lo) return 0.0;
  const double top = std::min(x, sup.hi);
  double s = integrate([&](double t) { return cdf(m, t); }, sup.lo, top,
                       "integrated cdf").value;
  if (x > sup.hi) s += x - sup.hi;
  return s;
}

double second_moment(const Measure& m) { return moment(m, 2); }

// Line integral of |G_mu(u+i) - G_nu(u+i)| over [lo, 2], split into
// geometrically growing pieces to the left of -2.
Quad line_integral(const Measure& mu, const Measure& nu, double lo) {
  auto f = [&](double u) {
    const cplx z(u, 1.0);
    return std::abs(cauchy_transform_d(mu, z).g - cauchy_transform_d(nu, z).g);
  };
  Quad total;
  auto add = [&](double a, double b) {
    const Quad q = integrate(f, a, b, "line integral");
    total.value += q.value;
    total.error += q.error;
  };
  double right = 2.0;
  double left = std::max(lo, -2.0);
  add(left, right);
  double width = 4.0;
  while (left > lo) {
    right = left;
    left = std::max(lo, left - width);
    add(left, right);
    width *= 2.0;
  }
  return total;
}

// sup over x in [-2 + eps/2, 2 - eps/2] of the integral over [v, 1] of
// |G_mu(x + iy) - G_nu(x + iy)| dy.
void vertical_sup(const Measure& mu, const Measure& nu, const BaiParameters& p,
                  BaiBreakdown& out) {
  auto column = [&](double x) {
    auto f = [&](double y) {
      const cplx z(x, y);
      return std::abs(cauchy_transform_d(mu, z).g -
                      cauchy_transform_d(nu, z).g);
    };
    return integrate(f, p.v, 1.0, "vertical integral").value;
  };
  const double lo = -2.0 + p.eps / 2.0;
  const double hi = 2.0 - p.eps / 2.0;
  const double step = (hi - lo) / (kVerticalSeeds - 1);
  std::vector<std::pair<double, double>> seeds;
  for (int i = 0; i < kVerticalSeeds; ++i) {
    const double x = i + 1 == kVerticalSeeds ? hi : lo + step * i;
    seeds.emplace_back(column(x), x);
  }
  std::sort(seeds.begin(), seeds.end(), std::greater<>());
  out.vertical_sup = seeds.front().first;
  out.vertical_argmax = seeds.front().second;
  out.vertical_refinements = 0;
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int k = 0; k < kVerticalTop && k < static_cast<int>(seeds.size()); ++k) {
    double a = std::max(lo, seeds[k].second - step);
    double b = std::min(hi, seeds[k].second + step);
    double c = b - phi * (b - a);
    double d = a + phi * (b - a);
    double fc = column(c), fd = column(d);
    while (b - a > 1e-6) {
      ++out.vertical_refinements;
      if (fc > fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - phi * (b - a);
        fc = column(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + phi * (b - a);
        fd = column(d);
      }
    }
    for (auto [fx, x] : {std::pair{fc, c}, std::pair{fd, d}}) {
      if (fx > out.vertical_sup) {
        out.vertical_sup = fx;
        out.vertical_argmax = x;
      }
    }
  }
}

// Integral of |F_mu - F_nu| over |x| > B. Every representation has compact
// support, so the integrand vanishes beyond the union of the supports and
// the truncation there is exact.
double far_field(const Measure& mu, const Measure& nu, double B) {
  const Interval a = support_interval(mu);
  const Interval b = support_interval(nu);
  const double reach = std::max({std::abs(a.lo), std::abs(a.hi),
                                 std::abs(b.lo), std::abs(b.hi)});
  if (reach <= B) return 0.0;
  std::vector<double> cuts;
  for (const auto* m : {&mu, &nu}) {
    for (const auto& [x, w] : atoms(*m)) cuts.push_back(x);
  }
  auto piecewise = [&](double lo, double hi) {
    std::vector<double> pts{lo, hi};
    for (double c : cuts) {
      if (c > lo && c < hi) pts.push_back(c);
    }
    std::sort(pts.begin(), pts.end());
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      s += integrate(
               [&](double x) { return std::abs(cdf(mu, x) - cdf(nu, x)); },
               pts[i], pts[i + 1], "far-field integral")
               .value;
    }
    return s;
  };
  return piecewise(B, reach) + piecewise(-reach, -B);
}

void fill_common(const Measure& mu, const Measure& nu, const BaiParameters& p,
                 BaiBreakdown& out) {
  out.params = p;
  vertical_sup(mu, nu, p, out);
  out.smoothness = smoothness_term(nu, p.v, p.a);
  out.tail = tail_term(nu, p.eps);
}

}  // namespace

double gamma_of(double a) {
  if (!(a > 0.0)) throw PreconditionError("gamma_of: a must be positive");
  return 2.0 / kPi * std::atan(a);
}

BaiParameters BaiParameters::make(double v, double eps, double a) {
  if (!(v > 0.0 && v < 1.0)) throw PreconditionError("need v in (0, 1)");
  if (!(eps > 0.0 && eps < 2.0)) throw PreconditionError("need eps in (0, 2)");
  if (!(a > 0.0)) throw PreconditionError("need a > 0");
  BaiParameters p;
  p.v = v;
  p.eps = eps;
  p.a = a;
  p.gamma = gamma_of(a);
  if (!(p.gamma > 0.5)) {
    throw PreconditionError("need gamma = (2/pi) atan(a) > 1/2");
  }
  if (!(eps > 2.0 * v * a)) throw PreconditionError("need eps > 2 v a");
  p.c_gamma = 1.0 / ((2.0 * p.gamma - 1.0) * kPi);
  return p;
}

BaiParameters BaiParameters::make(double v, double eps, double a, double A,
                                  double B) {
  BaiParameters p = make(v, eps, a);
  if (!(B > 0.0 && A > B)) throw PreconditionError("need A > B > 0");
  const double kappa = 2.0 * B / (kPi * (A - B) * (2.0 * p.gamma - 1.0));
  if (!(kappa < 1.0)) {
    throw PreconditionError(
        "need kappa = 2B/(pi (A - B)(2 gamma - 1)) < 1");
  }
  p.A = A;
  p.B = B;
  p.kappa = kappa;
  p.c_gamma_kappa = 1.0 / ((2.0 * p.gamma - 1.0) * kPi * (1.0 - kappa));
  return p;
}

double smoothness_term(const Measure& nu, double v, double a) {
  if (!(v > 0.0 && v < 1.0) || !(a > 0.0)) {
    throw PreconditionError("smoothness_term: need v in (0, 1) and a > 0");
  }
  const double d = 2.0 * v * a;
  // F is non-decreasing, so the integral over |y| < d of |F(x) - F(x + y)|
  // equals Phi(x + d) - 2 Phi(x) + Phi(x - d) with Phi the integrated CDF.
  auto h = [&](double x) {
    return integrated_cdf(nu, x + d) - 2.0 * integrated_cdf(nu, x) +
           integrated_cdf(nu, x - d);
  };
  const Interval s = support_interval(nu);
  const double lo = s.lo - 4.0 * v * a;
  const double hi = s.hi + 4.0 * v * a;
  std::vector<double> xs;
  for (int i = 0; i <= kSmoothGrid; ++i) xs.push_back(lo + (hi - lo) * i / kSmoothGrid);
  // h is piecewise linear between these for step CDFs.
  for (const auto& [x, w] : atoms(nu)) {
    xs.push_back(x);
    xs.push_back(x - d);
    xs.push_back(x + d);
  }
  double best = 0.0;
  std::vector<std::pair<double, double>> scored;
  scored.reserve(xs.size());
  for (double x : xs) scored.emplace_back(h(x), x);
  std::sort(scored.begin(), scored.end(), std::greater<>());
  best = scored.front().first;
  double spacing = (hi - lo) / kSmoothGrid;
  for (int level = 0; level < 3; ++level) {
    const std::size_t top = std::min<std::size_t>(8, scored.size());
    std::vector<std::pair<double, double>> next;
    for (std::size_t k = 0; k < top; ++k) {
      const double c = scored[k].second;
      for (int j = -8; j <= 8; ++j) {
        const double x = c + spacing * j / 8.0;
        next.emplace_back(h(x), x);
      }
    }
    std::sort(next.begin(), next.end(), std::greater<>());
    best = std::max(best, next.front().first);
    scored = std::move(next);
    spacing /= 8.0;
  }
  return std::max(0.0, best) / v;
}

double tail_term(const Measure& nu, double eps) {
  if (!(eps > 0.0 && eps <= 2.0)) {
    throw PreconditionError("tail_term: need eps in (0, 2]");
  }
  return std::max(cdf(nu, -2.0 + eps), 1.0 - cdf(nu, 2.0 - eps));
}

double assemble(const BaiBreakdown& b) {
  const double gp = b.params.gamma * kPi * b.tail;
  if (b.variant == BaiVariant::kTheorem) {
    return b.params.c_gamma *
           (b.line_integral + b.vertical_sup + b.smoothness + gp);
  }
  return b.params.c_gamma_kappa.value() *
         (b.line_integral + b.vertical_sup + b.smoothness +
          kPi * b.far_field + gp);
}

BaiBreakdown bai_bound_theorem(const Measure& mu, const Measure& nu,
                               const BaiParameters& p) {
  BaiBreakdown out;
  out.variant = BaiVariant::kTheorem;
  // |G_mu(z) - G_nu(z)| <= (|m1 - n1| + m2 + n2)/|z|^2 at Im z = 1, from
  // 1/(z - t) = 1/z + t/z^2 + t^2/(z^2 (z - t)); the integral of 1/(u^2+1)
  // over (-inf, -T) is below 1/T.
  const double c = std::abs(mean(mu) - mean(nu)) + second_moment(mu) +
                   second_moment(nu);
  const double T = std::max(16.0, c / kLineTailTarget);
  const Quad q = line_integral(mu, nu, -T);
  out.line_truncation = c / T;
  out.line_quadrature_error = q.error;
  out.line_integral = q.value + q.error + out.line_truncation;
  fill_common(mu, nu, p, out);
  out.bound = assemble(out);
  return out;
}

BaiBreakdown bai_bound_corollary(const Measure& mu, const Measure& nu,
                                 const BaiParameters& p) {
  if (!p.A || !p.B || !p.kappa || !p.c_gamma_kappa) {
    throw PreconditionError(
        "bai_bound_corollary: parameters need A and B (use the five-argument "
        "BaiParameters::make)");
  }
  BaiBreakdown out;
  out.variant = BaiVariant::kCorollary;
  const Quad q = line_integral(mu, nu, -*p.A);
  out.line_quadrature_error = q.error;
  out.line_integral = q.value + q.error;
  out.far_field = far_field(mu, nu, *p.B);
  out.far_field_truncation = 0.0;
  fill_common(mu, nu, p, out);
  out.bound = assemble(out);
  return out;
}

void write_bai_header(std::ostream& os) {
  CsvWriter w(os);
  w.header({"variant", "v", "eps", "a", "gamma", "A", "B", "kappa", "constant",
            "line_integral", "line_truncation", "vertical_sup",
            "vertical_argmax", "vertical_refinements", "smoothness", "tail",
            "far_field", "bound"});
}

void write_bai_row(std::ostream& os, const BaiBreakdown& b) {
  CsvWriter w(os);
  const bool cor = b.variant == BaiVariant::kCorollary;
  const auto& p = b.params;
  auto opt = [](const std::optional<double>& x) -> CsvWriter::Cell {
    if (x) return *x;
    return std::string("");
  };
  w.row({std::string(cor ? "corollary" : "theorem"), p.v, p.eps, p.a, p.gamma,
         opt(p.A), opt(p.B), opt(p.kappa),
         cor ? *p.c_gamma_kappa : p.c_gamma, b.line_integral,
         b.line_truncation, b.vertical_sup, b.vertical_argmax,
         std::int64_t{b.vertical_refinements}, b.smoothness, b.tail,
         b.far_field, b.bound});
}

}  // namespace freelab
