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

#include "freelab/free_conv.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

#include "freelab/csv.hpp"
#include "freelab/errors.hpp"
#include "freelab/parallel.hpp"

namespace freelab {
namespace {

constexpr int kUndampedIterations = 200;
constexpr double kFailureFraction = 0.01;

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

struct HValue {
  cplx h;   // 1/G(u) - u
  cplx dh;
};

HValue h_of(const Measure& m, cplx u) {
  const auto v = cauchy_transform_d(m, u);
  if (v.g == cplx(0.0) || !finite(v.g)) {
    std::ostringstream os;
    os << "Cauchy transform vanished at u = " << u.real() << " + "
       << u.imag() << "i";
    throw ZeroDenominatorError(os.str());
  }
  const cplx f = 1.0 / v.g;
  return {f - u, -v.dg * f * f - 1.0};
}

struct Iterate {
  cplx w;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

// Fixed point of w -> T(w). Each step tries a Newton update on w - T(w) and
// keeps it only if it stays above im_floor and lowers the residual;
// otherwise it takes the plain step, damped by 1/2 once the undamped budget
// is used up.
template <class Map>
Iterate fixed_point(Map&& map, cplx w, double im_floor, double tol,
                    int max_iter) {
  auto [t, dt] = map(w);
  Iterate out;
  for (int it = 1; it <= max_iter; ++it) {
    const double r = std::abs(t - w);
    const double goal =
        std::max(tol, 8.0 * std::numeric_limits<double>::epsilon() * std::abs(w));
    out.iterations = it;
    out.residual = r;
    if (r < goal) {
      out.w = t;
      out.converged = true;
      return out;
    }
    const cplx newton = w - (w - t) / (1.0 - dt);
    bool accepted = false;
    if (finite(newton) && newton.imag() >= im_floor) {
      auto [tn, dtn] = map(newton);
      if (finite(tn) && std::abs(tn - newton) < r) {
        w = newton;
        t = tn;
        dt = dtn;
        accepted = true;
      }
    }
    if (!accepted) {
      w = it > kUndampedIterations ? 0.5 * (w + t) : t;
      std::tie(t, dt) = map(w);
    }
  }
  out.w = w;
  out.residual = std::abs(t - w);
  return out;
}

void check_half_plane(const SubordinationPoint& p, double im_z) {
  const double slack = 1e-9 * (1.0 + std::abs(p.z));
  if (p.omega1.imag() < im_z - slack ||
      (p.omega2 != cplx(0.0) && p.omega2.imag() < im_z - slack)) {
    std::ostringstream os;
    os << "subordination function left the half-plane above Im z at z = "
       << p.z.real() << " + " << p.z.imag() << "i";
    throw ConvergenceError(os.str());
  }
}

std::vector<double> grid_points(Interval window, int resolution) {
  std::vector<double> xs(static_cast<std::size_t>(resolution));
  const double step = window.width() / (resolution - 1);
  for (std::size_t j = 0; j < xs.size(); ++j) {
    xs[j] = j + 1 == xs.size() ? window.hi : window.lo + step * j;
  }
  return xs;
}

void validate(int resolution, double tol, int max_iter) {
  if (resolution < 8) {
    throw PreconditionError("resolution must be at least 8");
  }
  if (!(tol >= 1e-14)) throw PreconditionError("tol must be at least 1e-14");
  if (max_iter < 1) throw PreconditionError("max_iter must be positive");
}

void check_failures(const SubordinationResult& r) {
  const std::size_t bad = r.failures();
  if (static_cast<double>(bad) <= kFailureFraction * r.points.size()) return;
  const SubordinationPoint* worst = &r.points.front();
  for (const auto& p : r.points) {
    if (p.residual > worst->residual) worst = &p;
  }
  std::ostringstream os;
  os << "subordination did not converge at " << bad << " of "
     << r.points.size() << " grid points; worst residual " << worst->residual
     << " at z = " << worst->z.real() << " + " << worst->z.imag() << "i";
  throw ConvergenceError(os.str());
}

// Inverts precomputed transform values that sit on the inversion grid.
Inversion invert_on_grid(const std::vector<cplx>& gs, Interval window,
                         int resolution, double eta) {
  const double step = window.width() / (resolution - 1);
  auto lookup = [&](cplx z) {
    const auto j = std::lround((z.real() - window.lo) / step);
    return gs[static_cast<std::size_t>(
        std::clamp<long>(j, 0, static_cast<long>(gs.size()) - 1))];
  };
  return stieltjes_invert(lookup, window, resolution, eta);
}

}  // namespace

std::size_t SubordinationResult::failures() const {
  return static_cast<std::size_t>(
      std::count_if(points.begin(), points.end(),
                    [](const auto& p) { return !p.converged; }));
}

double SubordinationResult::worst_residual() const {
  double w = 0.0;
  for (const auto& p : points) w = std::max(w, p.residual);
  return w;
}

int SubordinationResult::max_iterations() const {
  int m = 0;
  for (const auto& p : points) m = std::max(m, p.iterations);
  return m;
}

SubordinationPoint subordinate(const Measure& m1, const Measure& m2, cplx z,
                               double tol, int max_iter) {
  if (!(z.imag() > 0.0)) {
    throw PreconditionError("subordinate: z must lie in the upper half-plane");
  }
  auto map = [&](cplx w) -> std::pair<cplx, cplx> {
    const HValue h2 = h_of(m2, w);
    const HValue h1 = h_of(m1, z + h2.h);
    return {z + h1.h, h1.dh * h2.dh};
  };
  const Iterate it =
      fixed_point(map, z + cplx(0.0, 1.0), z.imag(), tol, max_iter);
  SubordinationPoint p;
  p.z = z;
  p.omega2 = it.w;
  p.omega1 = z + h_of(m2, it.w).h;
  p.g = cauchy_transform_d(m1, p.omega1).g;
  p.iterations = it.iterations;
  p.residual = it.residual;
  p.converged = it.converged;
  check_half_plane(p, z.imag());
  return p;
}

SubordinationPoint subordinate_power(const Measure& m, int n, cplx zeta,
                                     double tol, int max_iter) {
  if (n < 1) throw PreconditionError("subordinate_power: n must be positive");
  if (!(zeta.imag() > 0.0)) {
    throw PreconditionError(
        "subordinate_power: zeta must lie in the upper half-plane");
  }
  const double k = n - 1.0;
  auto map = [&](cplx w) -> std::pair<cplx, cplx> {
    const HValue h = h_of(m, w);
    return {zeta + k * h.h, k * h.dh};
  };
  const Iterate it =
      fixed_point(map, zeta + cplx(0.0, 1.0), zeta.imag(), tol, max_iter);
  SubordinationPoint p;
  p.z = zeta;
  p.omega1 = it.w;
  p.g = cauchy_transform_d(m, it.w).g;
  p.iterations = it.iterations;
  p.residual = it.residual;
  p.converged = it.converged;
  check_half_plane(p, zeta.imag());
  return p;
}

Interval convolution_window(const Measure& m1, const Measure& m2) {
  const Interval a = support_interval(m1);
  const Interval b = support_interval(m2);
  return {a.lo + b.lo - 1.0, a.hi + b.hi + 1.0};
}

ConvolutionResult free_convolve(const Measure& m1, const Measure& m2,
                                const ConvolutionOptions& options) {
  validate(options.resolution, options.tol, options.max_iter);
  const Interval window = options.window.value_or(convolution_window(m1, m2));
  const double eta = options.eta.value_or(default_eta(window, options.resolution));
  const auto xs = grid_points(window, options.resolution);

  SubordinationResult sub;
  sub.tol = options.tol;
  sub.points = parallel_map(
      xs.size(),
      [&](std::size_t j) {
        return subordinate(m1, m2, cplx(xs[j], eta), options.tol,
                           options.max_iter);
      },
      options.threads);
  check_failures(sub);

  std::vector<cplx> gs(xs.size());
  for (std::size_t j = 0; j < xs.size(); ++j) gs[j] = sub.points[j].g;
  auto inv = invert_on_grid(gs, window, options.resolution, eta);
  return {std::move(inv.measure), eta, window, std::move(sub)};
}

ConvolutionResult free_clt_distribution(const Measure& base, int n,
                                        const CltOptions& options) {
  if (n < 2 || n > 4096) {
    throw PreconditionError("free_clt_distribution: n must lie in [2, 4096]");
  }
  const double mu = mean(base);
  const double var = variance(base);
  if (std::abs(mu) > 1e-8 || std::abs(var - 1.0) > 1e-8) {
    std::ostringstream os;
    os << "free_clt_distribution: base must have mean 0 and variance 1 "
          "(got mean "
       << mu << ", variance " << var << ")";
    throw PreconditionError(os.str());
  }
  validate(options.resolution, options.tol, options.max_iter);
  const double root_n = std::sqrt(static_cast<double>(n));

  if (options.strategy == FoldStrategy::kBinaryFold) {
    ConvolutionOptions fold;
    fold.resolution = options.fold_resolution;
    fold.tol = options.tol;
    fold.max_iter = options.max_iter;
    fold.threads = options.threads;
    std::map<int, ConvolutionResult> memo;
    std::function<Measure(int)> power = [&](int k) -> Measure {
      if (k == 1) return base;
      if (auto it = memo.find(k); it != memo.end()) return it->second.measure;
      const int half = k / 2;
      Measure left = power(half);
      Measure right = k - half == half ? left : power(k - half);
      auto r = free_convolve(left, right, fold);
      Measure out = r.measure;
      memo.emplace(k, std::move(r));
      return out;
    };
    Measure top = power(n);
    ConvolutionResult r = std::move(memo.at(n));
    r.measure = dilate(top, 1.0 / root_n);
    r.eta /= root_n;
    r.window = {r.window.lo / root_n, r.window.hi / root_n};
    return r;
  }

  const Interval s = support_interval(base);
  const double m = std::max(std::abs(s.lo), std::abs(s.hi));
  const double half = 2.0 + m / root_n + 0.5;
  const Interval window = options.window.value_or(Interval{-half, half});
  const double eta = options.eta.value_or(default_eta(window, options.resolution));
  const auto xs = grid_points(window, options.resolution);

  SubordinationResult sub;
  sub.tol = options.tol;
  sub.points = parallel_map(
      xs.size(),
      [&](std::size_t j) {
        auto p = subordinate_power(base, n, root_n * cplx(xs[j], eta),
                                   options.tol, options.max_iter);
        p.g *= root_n;
        return p;
      },
      options.threads);
  check_failures(sub);

  std::vector<cplx> gs(xs.size());
  for (std::size_t j = 0; j < xs.size(); ++j) gs[j] = sub.points[j].g;
  auto inv = invert_on_grid(gs, window, options.resolution, eta);
  return {std::move(inv.measure), eta, window, std::move(sub)};
}

void write_subordination_csv(std::ostream& os, const SubordinationResult& r) {
  CsvWriter w(os);
  w.metadata("tol", r.tol);
  w.header({"re_z", "im_z", "iterations", "residual", "converged",
            "re_omega1", "im_omega1", "re_omega2", "im_omega2"});
  for (const auto& p : r.points) {
    w.row({p.z.real(), p.z.imag(), std::int64_t{p.iterations}, p.residual,
           std::int64_t{p.converged ? 1 : 0}, p.omega1.real(),
           p.omega1.imag(), p.omega2.real(), p.omega2.imag()});
  }
}

}  // namespace freelab
