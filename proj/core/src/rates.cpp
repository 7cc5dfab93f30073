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

#include "freelab/rates.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "freelab/errors.hpp"

namespace freelab {
namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 61>;

// Integral of f against the continuous part of m over [lo, hi], split at
// zero and at the atoms.
template <class F>
double continuous_integral(const Measure& m, F&& f, double lo, double hi) {
  if (m.is_discrete()) return 0.0;
  const Interval s = support_interval(m);
  lo = std::max(lo, s.lo);
  hi = std::min(hi, s.hi);
  if (!(hi > lo)) return 0.0;
  std::vector<double> cuts{lo, hi};
  if (lo < 0.0 && 0.0 < hi) cuts.push_back(0.0);
  for (const auto& [x, w] : atoms(m)) {
    if (lo < x && x < hi) cuts.push_back(x);
  }
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (!(cuts[i + 1] > cuts[i])) continue;
    double err = 0.0;
    total += Kronrod::integrate(
        [&](double x) { return f(x) * density(m, x); }, cuts[i], cuts[i + 1],
        15, 1e-11, &err);
  }
  return total;
}

bool same(const MomentProfile& a, const MomentProfile& b) {
  return a.norm_bound == b.norm_bound && a.variance == b.variance &&
         a.abs_moment_3 == b.abs_moment_3 && a.abs_moment_4 == b.abs_moment_4;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

}  // namespace

void MomentProfile::validate() const {
  if (!(variance > 0.0) || !std::isfinite(variance)) {
    throw PreconditionError("moment profile: variance must be positive");
  }
  if (!(abs_moment_3 >= 0.0) || !(abs_moment_4 >= 0.0)) {
    throw PreconditionError("moment profile: absolute moments must be >= 0");
  }
  constexpr double rel = 1e-9;
  if (norm_bound) {
    const double b = *norm_bound;
    if (!(b >= 0.0)) throw PreconditionError("moment profile: negative norm");
    if (abs_moment_3 > b * b * b * (1.0 + rel) ||
        abs_moment_4 > b * b * b * b * (1.0 + rel)) {
      throw PreconditionError(
          "moment profile: absolute moments exceed powers of the norm bound");
    }
  }
  if (abs_moment_3 * abs_moment_3 > variance * abs_moment_4 * (1.0 + rel)) {
    throw PreconditionError(
        "moment profile: E|X|^3 squared exceeds var * E|X|^4");
  }
}

double absolute_moment(const Measure& m, int k) {
  if (k < 1 || k > 8) {
    throw PreconditionError("absolute_moment: degree must lie in [1, 8]");
  }
  double total = 0.0;
  for (const auto& [x, w] : atoms(m)) total += w * std::pow(std::abs(x), k);
  if (const auto* e = m.get_if<Empirical>()) {
    total = 0.0;
    for (double x : e->values) total += std::pow(std::abs(x), k);
    return total / static_cast<double>(e->values.size());
  }
  const Interval s = support_interval(m);
  return total + continuous_integral(
                     m, [k](double x) { return std::pow(std::abs(x), k); },
                     s.lo, s.hi);
}

MomentProfile MomentProfile::of(const Measure& m) {
  MomentProfile p;
  const Interval s = support_interval(m);
  p.norm_bound = std::max(std::abs(s.lo), std::abs(s.hi));
  p.variance = moment(m, 2);
  p.abs_moment_3 = absolute_moment(m, 3);
  p.abs_moment_4 = moment(m, 4);
  return p;
}

LyapunovReport lyapunov_report(const std::vector<MomentProfile>& profiles) {
  if (profiles.empty()) {
    throw PreconditionError("lyapunov_report: empty family");
  }
  LyapunovReport r;
  r.n = static_cast<int>(profiles.size());
  r.first = profiles.front();
  r.identical = true;
  bool all_bounded = true;
  double s3 = 0.0, s4 = 0.0, m3 = 0.0, m4 = 0.0, top = 0.0;
  for (const auto& p : profiles) {
    if (!(p.variance >= 0.0) || !(p.abs_moment_3 >= 0.0) ||
        !(p.abs_moment_4 >= 0.0)) {
      throw PreconditionError("lyapunov_report: moments must be nonnegative");
    }
    r.b2 += p.variance;
    m3 += p.abs_moment_3;
    m4 += p.abs_moment_4;
    if (p.norm_bound) {
      const double b = *p.norm_bound;
      s3 += b * b * b;
      s4 += b * b * b * b;
      top = std::max(top, b);
    } else {
      all_bounded = false;
    }
    r.identical = r.identical && same(p, r.first);
  }
  if (!(r.b2 > 0.0)) {
    throw PreconditionError("lyapunov_report: total variance B_n^2 is zero");
  }
  const double b = std::sqrt(r.b2);
  r.l3 = m3 / (r.b2 * b);
  r.l4 = m4 / (r.b2 * r.b2);
  if (all_bounded) {
    r.l_s3 = s3 / (r.b2 * b);
    r.l_s4 = s4 / (r.b2 * r.b2);
    r.max_norm = top;
  }
  return r;
}

const char* bound_name(BoundKind k) {
  switch (k) {
    case BoundKind::kBounded: return "bounded";
    case BoundKind::kSupport: return "support";
    case BoundKind::kBoundedIdentical: return "bounded-identical";
    case BoundKind::kUnbounded: return "unbounded";
    case BoundKind::kUnboundedIdentical: return "unbounded-identical";
  }
  return "?";
}

BoundKind parse_bound_kind(const std::string& s) {
  for (auto k : {BoundKind::kBounded, BoundKind::kSupport,
                 BoundKind::kBoundedIdentical, BoundKind::kUnbounded,
                 BoundKind::kUnboundedIdentical}) {
    if (s == bound_name(k)) return k;
  }
  throw PreconditionError("unknown bound kind: " + s);
}

GateResult precondition_gate(const LyapunovReport& r, BoundKind kind) {
  GateResult g;
  auto require_support = [&] {
    if (!r.l_s3 || !r.l_s4 || !r.max_norm) {
      throw PreconditionError(std::string(bound_name(kind)) +
                              " bound needs a norm bound for every summand");
    }
  };
  auto identical_unit = [&] {
    if (!r.identical) {
      g.violations.push_back("summands are not identically distributed");
    }
    if (std::abs(r.first.variance - 1.0) > 1e-12) {
      g.violations.push_back("var X_1 = " + fmt(r.first.variance) +
                             " is not 1");
    }
  };
  if (!(r.b2 > 0.0)) g.violations.push_back("B_n^2 > 0 fails");

  switch (kind) {
    case BoundKind::kBounded:
      require_support();
      if (!(*r.l_s4 < 1.0 / 16.0)) {
        g.violations.push_back("L_S4 < 1/16 fails (L_S4 = " + fmt(*r.l_s4) +
                               ")");
      }
      if (!(*r.l_s3 < 1.0 / (2.0 * std::numbers::e))) {
        g.violations.push_back("L_S3 < 1/(2e) fails (L_S3 = " +
                               fmt(*r.l_s3) + ")");
      }
      break;
    case BoundKind::kSupport:
      require_support();
      if (!(*r.l_s4 < 1.0 / 64.0)) {
        g.violations.push_back("L_S4 < 1/64 fails (L_S4 = " + fmt(*r.l_s4) +
                               ")");
      }
      break;
    case BoundKind::kBoundedIdentical: {
      require_support();
      identical_unit();
      const double b = *r.first.norm_bound;
      if (!(r.n > 16.0 * b * b * b * b)) {
        g.violations.push_back("n > 16 ||X_1||^4 fails (n = " +
                               std::to_string(r.n) + ", 16 ||X_1||^4 = " +
                               fmt(16.0 * b * b * b * b) + ")");
      }
      break;
    }
    case BoundKind::kUnbounded:
      if (!std::isfinite(r.l4)) {
        g.violations.push_back("L_4 is not finite");
      }
      g.caveats.push_back(
          "the Lindeberg condition is asymptotic and the existence threshold "
          "n0 is not constructive; neither is certified");
      break;
    case BoundKind::kUnboundedIdentical:
      identical_unit();
      if (!std::isfinite(r.first.abs_moment_4)) {
        g.violations.push_back("E|X_1|^4 is not finite");
      }
      g.caveats.push_back(
          "the existence threshold n0 is not constructive and is not "
          "certified");
      break;
  }
  g.passed = g.violations.empty();
  return g;
}

double theorem_bound(const LyapunovReport& r, BoundKind kind, double C) {
  if (!(C > 0.0)) throw PreconditionError("theorem_bound: C must be positive");
  const GateResult g = precondition_gate(r, kind);
  if (!g.passed) {
    std::string msg = std::string(bound_name(kind)) + " bound: ";
    for (std::size_t i = 0; i < g.violations.size(); ++i) {
      if (i) msg += "; ";
      msg += g.violations[i];
    }
    throw PreconditionError(msg);
  }
  const double n = r.n;
  switch (kind) {
    case BoundKind::kBounded: {
      const double l3 = *r.l_s3, l4 = *r.l_s4;
      return C * std::max(std::abs(std::log(l3)) * l3,
                          std::abs(std::log(l4)) * std::sqrt(l4));
    }
    case BoundKind::kSupport:
      return 2.0 + *r.max_norm / std::sqrt(r.b2) + 57.0 * std::sqrt(*r.l_s4);
    case BoundKind::kBoundedIdentical: {
      const double b = *r.first.norm_bound;
      return C * b * b * b * std::log(n) / std::sqrt(n);
    }
    case BoundKind::kUnbounded:
      return C * (std::pow(r.l4, 0.25) + std::sqrt(n) * std::pow(r.l4, 0.75) +
                  n * std::pow(r.l4, 1.25));
    case BoundKind::kUnboundedIdentical:
      return C * std::pow(r.first.abs_moment_4, 1.25) / std::pow(n, 0.25);
  }
  return 0.0;
}

double lindeberg_functional(const std::vector<Measure>& measures, double eps) {
  if (measures.empty()) {
    throw PreconditionError("lindeberg_functional: empty family");
  }
  if (!(eps > 0.0)) {
    throw PreconditionError("lindeberg_functional: eps must be positive");
  }
  double b2 = 0.0;
  for (const auto& m : measures) b2 += moment(m, 2);
  if (!(b2 > 0.0)) {
    throw PreconditionError("lindeberg_functional: total variance is zero");
  }
  const double t = eps * std::sqrt(b2);
  double total = 0.0;
  auto sq = [](double x) { return x * x; };
  for (const auto& m : measures) {
    if (const auto* e = m.get_if<Empirical>()) {
      double s = 0.0;
      for (double x : e->values) {
        if (std::abs(x) > t) s += x * x;
      }
      total += s / static_cast<double>(e->values.size());
      continue;
    }
    for (const auto& [x, w] : atoms(m)) {
      if (std::abs(x) > t) total += w * x * x;
    }
    const Interval s = support_interval(m);
    total += continuous_integral(m, sq, t, s.hi);
    total += continuous_integral(m, sq, s.lo, -t);
  }
  return total / b2;
}

RateFit rate_fit(const std::vector<RatePoint>& series, bool with_log) {
  if (series.size() < 4) {
    throw PreconditionError("rate_fit: need at least 4 points");
  }
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (!(series[i].delta > 0.0) || !std::isfinite(series[i].delta)) {
      throw PreconditionError("rate_fit: degenerate series (delta must be > 0)");
    }
    if (series[i].n < (with_log ? 2 : 1)) {
      throw PreconditionError("rate_fit: n must be at least 2 with a log factor");
    }
    if (i > 0 && series[i].n <= series[i - 1].n) {
      throw PreconditionError("rate_fit: n must be strictly increasing");
    }
  }
  const std::size_t k = series.size();
  std::vector<double> xs(k), ys(k);
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double ln = std::log(static_cast<double>(series[i].n));
    xs[i] = ln;
    ys[i] = std::log(series[i].delta) - (with_log ? std::log(ln) : 0.0);
    mx += xs[i];
    my += ys[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  RateFit f;
  f.log_factor_included = with_log;
  f.exponent = sxy / sxx;
  const double intercept = my - f.exponent * mx;
  f.constant = std::exp(intercept);
  for (std::size_t i = 0; i < k; ++i) {
    f.max_abs_residual = std::max(
        f.max_abs_residual, std::abs(ys[i] - intercept - f.exponent * xs[i]));
  }
  return f;
}

std::vector<RatePoint> clt_delta_series(const Measure& base,
                                        const std::vector<int>& ns,
                                        const CltOptions& options) {
  const Measure omega = Measure::semicircle(1.0, 0.0);
  std::vector<RatePoint> out;
  out.reserve(ns.size());
  for (int n : ns) {
    const auto r = free_clt_distribution(base, n, options);
    out.push_back({n, kolmogorov_distance(r.measure, omega)});
  }
  return out;
}

}  // namespace freelab
