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

#include "freelab/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "freelab/csv.hpp"
#include "freelab/errors.hpp"

namespace freelab {
namespace {

// log(1 + w) without losing digits when |w| is small.
cplx log1p_c(cplx w) {
  const double re = 0.5 * std::log1p(2.0 * w.real() + std::norm(w));
  return {re, std::atan2(w.imag(), 1.0 + w.real())};
}

CauchyValue semicircle_value(cplx z, double var) {
  // Both roots of var G^2 - z G + 1 = 0; keep the one in the lower
  // half-plane, which is the branch that behaves like 1/z.
  // The product of the roots is 1/var, so the small one comes from the
  // larger numerator without cancellation.
  const cplx root = std::sqrt(z * z - 4.0 * var);
  const cplx q = std::abs(z + root) >= std::abs(z - root) ? z + root : z - root;
  const cplx big = q / (2.0 * var);
  const cplx small = 2.0 / q;
  const cplx g = small.imag() < big.imag() ? small : big;
  // Implicit differentiation of the quadratic.
  return {g, g / (2.0 * var * g - z)};
}

// Free Poisson law of the given rate and jump, no shift.
CauchyValue free_poisson_value(double rate, double alpha, cplx z) {
  const double sl = std::sqrt(rate);
  const double a = alpha * (1.0 - sl) * (1.0 - sl);
  const double b = alpha * (1.0 + sl) * (1.0 + sl);
  const cplx s = std::sqrt(z - a) * std::sqrt(z - b);
  const cplx c = z + alpha - rate * alpha;
  cplx g;
  if (std::real(std::conj(c) * s) > 0.0) {
    // Rationalized form avoids cancellation when c and s nearly agree.
    g = 2.0 / (c + s);
  } else {
    g = (c - s) / (2.0 * alpha * z);
  }
  // From alpha z G^2 - c G + 1 = 0.
  const cplx dg = -(alpha * g * g - g) / (2.0 * alpha * z * g - c);
  return {g, dg};
}

CauchyValue grid_value(const GridDensity& gd, cplx z) {
  const auto& t = gd.grid;
  const auto& f = gd.density;
  cplx g = 0.0, dg = 0.0;
  for (std::size_t k = 0; k + 1 < t.size(); ++k) {
    if (f[k] == 0.0 && f[k + 1] == 0.0) continue;
    const double h = t[k + 1] - t[k];
    const double slope = (f[k + 1] - f[k]) / h;
    const cplx u0 = z - t[k];
    const cplx u1 = z - t[k + 1];
    // Integral over the cell of (f_k + slope (t - t_k)) / (z - t) dt equals
    // f(z) log(u0/u1) - slope h, with f extended linearly to z.
    const cplx fz = f[k] + slope * u0;
    const cplx lg = log1p_c(h / u1);
    g += fz * lg - slope * h;
    dg += slope * lg + fz * (1.0 / u0 - 1.0 / u1);
  }
  return {g, dg};
}

}  // namespace

HalfPlanePoint::HalfPlanePoint(double re, double im) : z_(re, im) {
  if (!(im > 0.0) || !std::isfinite(re) || !std::isfinite(im)) {
    throw PreconditionError("point is not in the open upper half-plane");
  }
}

CauchyValue cauchy_transform_d(const Measure& m, cplx z) {
  if (const auto* a = m.get_if<Atomic>()) {
    cplx g = 0.0, dg = 0.0;
    for (std::size_t i = 0; i < a->points.size(); ++i) {
      const cplx r = 1.0 / (z - a->points[i]);
      g += a->masses[i] * r;
      dg -= a->masses[i] * r * r;
    }
    return {g, dg};
  }
  if (const auto* e = m.get_if<Empirical>()) {
    cplx g = 0.0, dg = 0.0;
    for (double v : e->values) {
      const cplx r = 1.0 / (z - v);
      g += r;
      dg -= r * r;
    }
    const double w = 1.0 / static_cast<double>(e->values.size());
    return {g * w, dg * w};
  }
  if (const auto* s = m.get_if<Semicircle>()) {
    return semicircle_value(z - s->center, s->variance);
  }
  if (const auto* p = m.get_if<FreePoisson>()) {
    if (!p->reflected) return free_poisson_value(p->rate, p->jump, z - p->shift);
    // E 1/(z - c + Y) = -conj(G_Y(-conj(z - c))).
    const auto v = free_poisson_value(p->rate, p->jump, -std::conj(z - p->shift));
    return {-std::conj(v.g), std::conj(v.dg)};
  }
  return grid_value(std::get<GridDensity>(m.payload()), z);
}

cplx cauchy_transform(const Measure& m, HalfPlanePoint z) {
  return cauchy_transform_d(m, z.value()).g;
}

cplx semicircle_cauchy(HalfPlanePoint z, double variance) {
  if (!(variance > 0.0)) {
    throw PreconditionError("semicircle_cauchy: variance must be positive");
  }
  return semicircle_value(z.value(), variance).g;
}

double default_eta(Interval window, int resolution) {
  return 4.0 * window.width() / resolution;
}

Inversion stieltjes_invert(const CauchyFunction& g, Interval window,
                           int resolution, double eta) {
  if (resolution < 8) {
    throw PreconditionError("stieltjes_invert: resolution must be at least 8");
  }
  if (!(eta > 1e-6 && eta < 1.0)) {
    throw PreconditionError("stieltjes_invert: eta must lie in (1e-6, 1)");
  }
  if (!(window.hi > window.lo)) {
    throw PreconditionError("stieltjes_invert: empty window");
  }
  std::vector<double> xs(static_cast<std::size_t>(resolution));
  std::vector<double> fs(xs.size());
  const double step = window.width() / (resolution - 1);
  for (std::size_t j = 0; j < xs.size(); ++j) {
    xs[j] = j + 1 == xs.size() ? window.hi : window.lo + step * j;
    fs[j] = std::max(0.0, -g(cplx(xs[j], eta)).imag() / std::numbers::pi);
  }
  return {Measure::grid_density(std::move(xs), std::move(fs)), eta};
}

void write_transform_trace(std::ostream& os, const std::vector<cplx>& zs,
                           const std::vector<cplx>& gs) {
  if (zs.size() != gs.size()) {
    throw PreconditionError("transform trace: size mismatch");
  }
  CsvWriter w(os);
  w.header({"re_z", "im_z", "re_g", "im_g"});
  for (std::size_t i = 0; i < zs.size(); ++i) {
    w.row({zs[i].real(), zs[i].imag(), gs[i].real(), gs[i].imag()});
  }
}

}  // namespace freelab
