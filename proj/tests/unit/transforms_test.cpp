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


#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "freelab/errors.hpp"
#include "freelab/measure.hpp"
#include "freelab/transforms.hpp"
#include "oracles.hpp"

namespace freelab {
namespace {

constexpr double kPi = std::numbers::pi;

// Integral of 1/(z - t) against the semicircle in the angle variable.
cplx semicircle_transform_quadrature(cplx z) {
  auto part = [&](bool imag) {
    return oracle::simpson(
        [&](double t) {
          const cplx v = 2.0 / kPi * std::cos(t) * std::cos(t) /
                         (z - 2.0 * std::sin(t));
          return imag ? v.imag() : v.real();
        },
        -kPi / 2.0, kPi / 2.0, 40000);
  };
  return {part(false), part(true)};
}

std::vector<Measure> zoo() {
  return {Measure::atomic({-1.0, 1.0}, {0.5, 0.5}),
          Measure::empirical({0.4, -1.2, 3.0, 0.4, 2.2}),
          Measure::semicircle(),
          Measure::semicircle(0.3, 1.1),
          Measure::free_poisson(4.0, 0.25),
          Measure::free_poisson(0.4, 1.3),
          dilate(Measure::free_poisson(2.0, 0.5), -1.0),
          Measure::grid_density({-1.0, 0.0, 0.5, 2.0}, {0.0, 1.0, 0.3, 0.0})};
}

std::vector<cplx> z_sweep() {
  std::vector<cplx> zs;
  for (double re : {-7.0, -2.0, -0.9, 0.0, 0.3, 1.999, 2.0, 4.5}) {
    for (double im : {1e-6, 1e-3, 0.05, 0.7, 3.0, 40.0}) zs.emplace_back(re, im);
  }
  return zs;
}

TEST(HalfPlane, RejectsClosedLowerHalf) {
  EXPECT_THROW(HalfPlanePoint(0.0, 0.0), PreconditionError);
  EXPECT_THROW(HalfPlanePoint(1.0, -1e-3), PreconditionError);
  EXPECT_THROW(HalfPlanePoint(NAN, 1.0), PreconditionError);
  EXPECT_NO_THROW(HalfPlanePoint(1.0, 1e-300));
}

TEST(CauchyTransform, Examples) {
  const cplx z(0.3, 0.7);
  const cplx g = cauchy_transform(Measure::point_mass(0.0), HalfPlanePoint(z));
  EXPECT_NEAR(std::abs(g - 1.0 / z), 0.0, 1e-15);

  const cplx gi = cauchy_transform(Measure::semicircle(), HalfPlanePoint(0.0, 1.0));
  EXPECT_NEAR(gi.real(), 0.0, 1e-15);
  EXPECT_NEAR(gi.imag(), -0.6180339887498949, 1e-12);
  EXPECT_NEAR(std::abs(gi - semicircle_transform_quadrature({0.0, 1.0})), 0.0, 1e-10);

  const cplx g2 = semicircle_cauchy(HalfPlanePoint(0.0, 2.0));
  EXPECT_NEAR(g2.imag(), (2.0 - std::sqrt(8.0)) / 2.0, 1e-14);
  EXPECT_NEAR(std::abs(g2 - semicircle_transform_quadrature({0.0, 2.0})), 0.0, 1e-10);
}

TEST(CauchyTransform, SemicircleClosedFormMatchesQuadrature) {
  for (double re = -4.0; re <= 4.0; re += 0.8) {
    for (double im : {0.1, 0.5, 2.0}) {
      const cplx z(re, im);
      EXPECT_NEAR(std::abs(semicircle_cauchy(HalfPlanePoint(z)) -
                           semicircle_transform_quadrature(z)),
                  0.0, 1e-9)
          << z;
    }
  }
}

TEST(CauchyTransform, SemicircleSelfConsistency) {
  const Measure omega = Measure::semicircle();
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      const HalfPlanePoint z(-5.0 + i * 10.0 / 9.0, std::pow(10.0, -3.0 + j * 0.5));
      EXPECT_NEAR(std::abs(semicircle_cauchy(z) - cauchy_transform(omega, z)),
                  0.0, 1e-9);
    }
  }
}

TEST(CauchyTransform, SemicircleBoundedByOne) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> re(-10.0, 10.0), lg(-8.0, 2.0);
  for (int i = 0; i < 5000; ++i) {
    const HalfPlanePoint z(re(rng), std::pow(10.0, lg(rng)));
    EXPECT_LE(std::abs(semicircle_cauchy(z)), 1.0 + 1e-12);
  }
}

TEST(CauchyTransform, FreePoissonMatchesQuadrature) {
  // Rate 1/y, jump y: Marchenko-Pastur with edges (1 -+ sqrt(y))^2.
  for (double y : {0.25, 0.7}) {
    const Measure fp = Measure::free_poisson(1.0 / y, y);
    const double a = (1 - std::sqrt(y)) * (1 - std::sqrt(y));
    const double b = (1 + std::sqrt(y)) * (1 + std::sqrt(y));
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    for (cplx z : {cplx(0.1, 0.2), cplx(1.0, 0.3), cplx(2.5, 1.0), cplx(-1.0, 0.05)}) {
      auto part = [&](bool imag) {
        return oracle::simpson(
            [&](double t) {
              const double u = c - h * std::cos(t);
              const double root = h * std::sin(t);
              const cplx v = root * root / (2 * kPi * y * u) / (z - u);
              return imag ? v.imag() : v.real();
            },
            0.0, kPi, 40000);
      };
      const cplx ref(part(false), part(true));
      EXPECT_NEAR(std::abs(cauchy_transform(fp, HalfPlanePoint(z)) - ref), 0.0, 1e-9)
          << "y=" << y << " z=" << z;
    }
  }
}

TEST(CauchyTransform, FreePoissonAtomContributes) {
  // Rate 0.4: atom of mass 0.6 at 0 plus the continuous part.
  const Measure fp = Measure::free_poisson(0.4, 1.3);
  const cplx z(0.0, 1e-4);
  const cplx g = cauchy_transform(fp, HalfPlanePoint(z));
  EXPECT_NEAR(-g.imag() * z.imag(), 0.6, 1e-3);
}

TEST(CauchyTransform, GridDensityMatchesQuadrature) {
  const Measure g = Measure::grid_density({-1.0, 0.0, 0.5, 2.0}, {0.0, 1.0, 0.3, 0.0});
  const auto* p = g.get_if<GridDensity>();
  ASSERT_NE(p, nullptr);
  for (cplx z : {cplx(0.2, 0.05), cplx(-1.0, 0.3), cplx(3.0, 1.0), cplx(0.5, 1e-3)}) {
    cplx ref = 0.0;
    for (std::size_t c = 0; c + 1 < p->grid.size(); ++c) {
      const double x0 = p->grid[c], x1 = p->grid[c + 1];
      const double f0 = p->density[c], f1 = p->density[c + 1];
      auto f = [&](double x, bool imag) {
        const cplx v = (f0 + (f1 - f0) * (x - x0) / (x1 - x0)) / (z - x);
        return imag ? v.imag() : v.real();
      };
      ref += cplx(oracle::simpson([&](double x) { return f(x, false); }, x0, x1, 200000),
                  oracle::simpson([&](double x) { return f(x, true); }, x0, x1, 200000));
    }
    EXPECT_NEAR(std::abs(cauchy_transform(g, HalfPlanePoint(z)) - ref), 0.0, 1e-8) << z;
  }
}

TEST(CauchyTransform, NevanlinnaAndBound) {
  for (const Measure& m : zoo()) {
    for (cplx z : z_sweep()) {
      const cplx g = cauchy_transform(m, HalfPlanePoint(z));
      EXPECT_LT(g.imag(), 0.0) << m.describe() << " z=" << z;
      EXPECT_LE(std::abs(g), (1.0 + 1e-12) / z.imag()) << m.describe() << " z=" << z;
    }
  }
}

TEST(CauchyTransform, Decay) {
  for (const Measure& m : zoo()) {
    const double m2 = moment(m, 2);
    for (double r : {10.0, 100.0}) {
      for (double angle : {0.3, 1.2, 2.5}) {
        const cplx z = std::polar(r, angle);
        const cplx g = cauchy_transform(m, HalfPlanePoint(z));
        EXPECT_LE(std::abs(z * g - 1.0), (m2 + 1.0) / z.imag()) << m.describe();
      }
    }
  }
}

TEST(CauchyTransform, DerivativeMatchesDifferenceQuotient) {
  for (const Measure& m : zoo()) {
    for (cplx z : {cplx(0.4, 0.3), cplx(-2.5, 0.8), cplx(1.9, 0.05)}) {
      const double h = 1e-6;
      const cplx fd = (cauchy_transform_d(m, z + h).g - cauchy_transform_d(m, z - h).g) / (2 * h);
      const cplx dg = cauchy_transform_d(m, z).dg;
      EXPECT_NEAR(std::abs(dg - fd), 0.0, 1e-5 * std::max(1.0, std::abs(dg)))
          << m.describe() << " z=" << z;
    }
  }
}

TEST(SemicircleCauchy, BranchContinuousAlongLine) {
  cplx prev = semicircle_cauchy(HalfPlanePoint(-5.0, 0.5));
  const double step = 1e-3;
  for (double x = -5.0 + step; x <= 5.0; x += step) {
    const cplx g = semicircle_cauchy(HalfPlanePoint(x, 0.5));
    // |G'| <= 1/(Im z)^2 bounds the change per step.
    EXPECT_LE(std::abs(g - prev), step / 0.25 + 1e-12) << x;
    prev = g;
  }
}

TEST(SemicircleCauchy, LargeZAsymptotics) {
  for (double var : {0.5, 1.0, 3.0}) {
    for (double angle : {0.01, 1.0, 3.1}) {
      const cplx z = std::polar(1e6, angle);
      EXPECT_NEAR(std::abs(z * semicircle_cauchy(HalfPlanePoint(z), var) - 1.0), 0.0, 1e-9);
    }
  }
}

TEST(StieltjesInvert, SemicircleDensityAtZero) {
  const auto inv = stieltjes_invert(
      [](cplx z) { return semicircle_cauchy(HalfPlanePoint(z)); }, {-3.0, 3.0}, 2048, 1e-3);
  EXPECT_NEAR(density(inv.measure, 0.0), 1.0 / kPi, 2e-3);
  EXPECT_DOUBLE_EQ(inv.eta, 1e-3);
}

TEST(StieltjesInvert, PointMassBump) {
  const double eta = 1e-2;
  const auto inv = stieltjes_invert([](cplx z) { return 1.0 / z; }, {-1.0, 1.0}, 4096, eta);
  // Mass before the final renormalization is the Poisson kernel's mass on
  // the window, 1 - (2/pi) atan(eta).
  EXPECT_NEAR(cdf(inv.measure, 1.0) - cdf(inv.measure, -1.0), 1.0, 2e-2);
  EXPECT_NEAR(cdf(inv.measure, 0.0), 0.5, 1e-3);
  const double inside = cdf(inv.measure, 10 * eta) - cdf(inv.measure, -10 * eta);
  EXPECT_GE(inside, 0.93);
}

TEST(StieltjesInvert, AtomMassAwayFromOrigin) {
  const double eta = 1e-2;
  for (double a : {-1.3, 0.25, 2.0}) {
    const auto inv = stieltjes_invert(
        [a](cplx z) { return 1.0 / (z - a); }, {a - 3.0, a + 3.0}, 8192, eta);
    EXPECT_GE(cdf(inv.measure, a + 10 * eta) - cdf(inv.measure, a - 10 * eta), 0.93);
  }
}

TEST(StieltjesInvert, RoundTripKolmogorov) {
  const Measure omega = Measure::semicircle();
  const auto inv = stieltjes_invert(
      [&](cplx z) { return cauchy_transform(omega, HalfPlanePoint(z)); }, {-3.0, 3.0}, 8192,
      1e-3);
  EXPECT_LE(kolmogorov_distance(inv.measure, omega), 5e-3);
}

TEST(StieltjesInvert, Validation) {
  auto g = [](cplx z) { return 1.0 / z; };
  EXPECT_THROW(stieltjes_invert(g, {-1.0, 1.0}, 7, 1e-2), PreconditionError);
  EXPECT_THROW(stieltjes_invert(g, {-1.0, 1.0}, 64, 1e-7), PreconditionError);
  EXPECT_THROW(stieltjes_invert(g, {-1.0, 1.0}, 64, 1.0), PreconditionError);
  EXPECT_THROW(stieltjes_invert(g, {1.0, -1.0}, 64, 0.1), PreconditionError);
}

TEST(StieltjesInvert, DefaultEta) {
  EXPECT_DOUBLE_EQ(default_eta({-3.0, 3.0}, 2048), 4.0 * 6.0 / 2048);
}

TEST(TransformTrace, WritesRows) {
  std::ostringstream os;
  write_transform_trace(os, {cplx(0.0, 1.0)}, {cplx(0.0, -0.5)});
  EXPECT_NE(os.str().find("re_z"), std::string::npos);
  EXPECT_NE(os.str().find("-0.5"), std::string::npos);
}

}  // namespace
}  // namespace freelab
