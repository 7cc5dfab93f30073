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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "freelab/bai_bounds.hpp"
#include "freelab/errors.hpp"
#include "oracles.hpp"

namespace freelab {
namespace {

constexpr double kPi = std::numbers::pi;

Measure gue_empirical(int N, unsigned seed) {
  std::mt19937_64 rng(seed);
  const Eigen::VectorXd ev = oracle::eigenvalues(oracle::gue(N, rng));
  return Measure::empirical({ev.data(), ev.data() + ev.size()});
}

// Dense sweep of |F_a - F_b| with both one-sided values at every atom.
double sweep_distance(const Measure& a, const Measure& b) {
  std::vector<double> xs;
  const Interval sa = support_interval(a), sb = support_interval(b);
  const double lo = std::min(sa.lo, sb.lo) - 0.1;
  const double hi = std::max(sa.hi, sb.hi) + 0.1;
  for (int i = 0; i <= 40000; ++i) xs.push_back(lo + (hi - lo) * i / 40000.0);
  double d = 0.0;
  for (double x : xs) d = std::max(d, std::abs(cdf(a, x) - cdf(b, x)));
  for (const Measure* m : {&a, &b}) {
    for (const auto& [x, w] : atoms(*m)) {
      d = std::max(d, std::abs(cdf(a, x) - cdf(b, x)));
      d = std::max(d, std::abs(cdf_left(a, x) - cdf_left(b, x)));
    }
  }
  return d;
}

// Brute force over x of (1/v) * integral_{|y|<2va} |F(x) - F(x+y)| dy.
double smoothness_oracle(const std::function<double(double)>& F, double lo,
                         double hi, double v, double a, int points = 2000) {
  const double d = 2.0 * v * a;
  double best = 0.0;
  for (int i = 0; i <= points; ++i) {
    const double x = lo + (hi - lo) * i / points;
    const double s = oracle::simpson(
        [&](double y) { return std::abs(F(x) - F(x + y)); }, -d, d, 400);
    best = std::max(best, s);
  }
  return best / v;
}

TEST(GammaOf, Examples) {
  EXPECT_DOUBLE_EQ(gamma_of(1.0), 0.5);
  EXPECT_NEAR(gamma_of(2.0), 0.70483, 1e-5);
  EXPECT_NEAR(gamma_of(1e6), 1.0, 1e-5);
  EXPECT_THROW(gamma_of(0.0), PreconditionError);
  EXPECT_THROW(gamma_of(-1.0), PreconditionError);
}

TEST(GammaOf, MatchesQuadratureOfCauchyDensity) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  double prev = 0.0;
  std::vector<double> as;
  for (int i = 0; i < 50; ++i) as.push_back(std::pow(10.0, u(rng)));
  std::sort(as.begin(), as.end());
  for (double a : as) {
    // x = tan(t) turns the integrand into the constant 1/pi.
    const double q = oracle::simpson([](double) { return 1.0 / kPi; },
                                     -std::atan(a), std::atan(a), 2);
    EXPECT_NEAR(gamma_of(a), q, 1e-12) << a;
    EXPECT_GT(gamma_of(a), prev);
    prev = gamma_of(a);
  }
}

TEST(BaiParameters, Validation) {
  EXPECT_NO_THROW(BaiParameters::make(0.1, 1.2, 2.0));
  EXPECT_THROW(BaiParameters::make(0.0, 1.2, 2.0), PreconditionError);
  EXPECT_THROW(BaiParameters::make(1.0, 1.2, 2.0), PreconditionError);
  EXPECT_THROW(BaiParameters::make(0.1, 0.0, 2.0), PreconditionError);
  EXPECT_THROW(BaiParameters::make(0.1, 2.0, 2.0), PreconditionError);
  EXPECT_THROW(BaiParameters::make(0.1, 1.2, 1.0), PreconditionError);  // gamma
  EXPECT_THROW(BaiParameters::make(0.3, 1.2, 2.0), PreconditionError);  // eps
  EXPECT_THROW(BaiParameters::make(0.1, 1.2, 2.0, 3.0, 3.0), PreconditionError);
  EXPECT_THROW(BaiParameters::make(0.1, 1.2, 2.0, 4.0, 3.0), PreconditionError);
  try {
    BaiParameters::make(0.3, 1.2, 2.0);
    FAIL();
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("eps > 2 v a"), std::string::npos);
  }
}

TEST(BaiParameters, Constants) {
  const auto p = BaiParameters::make(0.1, 1.2, 2.0, 8.0, 3.0);
  const double g = 2.0 / kPi * std::atan(2.0);
  EXPECT_NEAR(p.gamma, g, 1e-15);
  EXPECT_NEAR(p.c_gamma, 1.0 / ((2 * g - 1) * kPi), 1e-14);
  EXPECT_NEAR(*p.kappa, 6.0 / (5.0 * kPi * (2 * g - 1)), 1e-14);
  EXPECT_NEAR(*p.kappa, 0.9323, 5e-4);
  EXPECT_NEAR(*p.c_gamma_kappa, 1.0 / ((2 * g - 1) * kPi * (1 - *p.kappa)),
              1e-12);
  EXPECT_FALSE(BaiParameters::make(0.1, 1.2, 2.0).A.has_value());
}

TEST(Smoothness, SemicircleBelowClosedForm) {
  for (double v : {0.01, 0.1}) {
    for (double a : {1.0, 2.0}) {
      const double s = smoothness_term(Measure::semicircle(), v, a);
      EXPECT_LE(s, 4 * a * a * v / kPi) << v << " " << a;
      EXPECT_GT(s, 0.0);
    }
  }
}

TEST(Smoothness, PointMass) {
  EXPECT_NEAR(smoothness_term(Measure::point_mass(0.0), 0.1, 1.0), 2.0, 1e-9);
  const double o = smoothness_oracle(
      [](double x) { return x >= 0.0 ? 1.0 : 0.0; }, -0.5, 0.5, 0.1, 1.0);
  EXPECT_NEAR(o, 2.0, 2e-2);
}

TEST(Smoothness, Uniform) {
  const Measure u = Measure::grid_density({-1.0, 1.0}, {0.5, 0.5});
  EXPECT_NEAR(smoothness_term(u, 0.05, 1.0), 0.1, 1e-9);
}

TEST(Smoothness, MatchesBruteForce) {
  const Measure m = Measure::atomic({-1.0, 0.2, 0.5}, {0.3, 0.5, 0.2});
  auto F = [&](double x) { return cdf(m, x); };
  for (double v : {0.05, 0.2}) {
    const double s = smoothness_term(m, v, 1.5);
    const double o = smoothness_oracle(F, -2.0, 1.5, v, 1.5);
    EXPECT_NEAR(s, o, 0.02 * o) << v;
    EXPECT_GE(s, o * (1 - 1e-9));
  }
  const Measure w = Measure::semicircle();
  const double s = smoothness_term(w, 0.1, 2.0);
  // The density peaks at 0, so the sup sits there.
  const double so = smoothness_oracle(oracle::semicircle_cdf, -0.2, 0.2, 0.1, 2.0, 20);
  EXPECT_NEAR(s, so, 1e-3);
}

TEST(Tail, Examples) {
  const Measure w = Measure::semicircle();
  for (double eps : {0.1, 0.5, 1.0}) {
    EXPECT_LE(tail_term(w, eps), std::pow(eps, 1.5) / kPi);
    EXPECT_NEAR(tail_term(w, eps), oracle::semicircle_cdf(-2.0 + eps), 1e-9);
  }
  EXPECT_NEAR(tail_term(w, 2.0), 0.5, 1e-12);
  EXPECT_EQ(tail_term(Measure::point_mass(0.0), 1.0), 0.0);
  EXPECT_THROW(tail_term(w, 0.0), PreconditionError);
  EXPECT_THROW(tail_term(w, 2.5), PreconditionError);
}

TEST(Tail, ClosedFormsDominateOnGrid) {
  const Measure w = Measure::semicircle();
  for (int i = 1; i <= 5; ++i) {
    const double v = 0.02 * i;
    for (int j = 1; j <= 5; ++j) {
      const double eps = 0.35 * j;
      EXPECT_LE(smoothness_term(w, v, 2.0), 16.0 * v / kPi);
      EXPECT_LE(tail_term(w, eps), std::pow(eps, 1.5) / kPi);
    }
  }
}

TEST(BaiTheorem, IdenticalLawsHaveZeroTransformTerms) {
  const Measure w = Measure::semicircle();
  const auto p = BaiParameters::make(0.1, 1.2, 2.0, 8.0, 3.0);
  const auto t = bai_bound_theorem(w, w, p);
  EXPECT_LE(t.line_integral, 1e-6);  // truncation allowance only
  EXPECT_LE(t.line_integral - t.line_truncation, 1e-9);
  EXPECT_LE(t.vertical_sup, 1e-9);
  EXPECT_GE(t.bound, 0.0);
  const auto c = bai_bound_corollary(w, w, p);
  EXPECT_LE(c.line_integral, 1e-9);
  EXPECT_LE(c.vertical_sup, 1e-9);
  EXPECT_LE(c.far_field, 1e-9);
  const Measure m = Measure::atomic({-1.0, 0.5}, {0.4, 0.6});
  const auto c2 = bai_bound_corollary(m, m, p);
  EXPECT_LE(c2.line_integral + c2.vertical_sup + c2.far_field, 1e-9);
}

TEST(BaiTheorem, CertifiesGueSpectrum) {
  const Measure mu = gue_empirical(256, 7);
  const Measure w = Measure::semicircle();
  const auto p = BaiParameters::make(0.1, 1.2, 2.0, 8.0, 3.0);
  const double delta = sweep_distance(mu, w);
  const auto t = bai_bound_theorem(mu, w, p);
  const auto c = bai_bound_corollary(mu, w, p);
  EXPECT_GE(t.bound, delta);
  EXPECT_GE(c.bound, delta);
  EXPECT_GT(t.line_integral, 0.0);
  EXPECT_GT(t.vertical_refinements, 0);
  EXPECT_GE(t.vertical_argmax, -2.0 + 0.6);
  EXPECT_LE(t.vertical_argmax, 2.0 - 0.6);
}

TEST(BaiTheorem, CertifiesDilation) {
  const Measure w = Measure::semicircle();
  const Measure mu = dilate(w, 1.05);
  // Reference from the closed semicircle CDF on a dense grid.
  double delta = 0.0;
  for (int i = 0; i <= 4000; ++i) {
    const double x = -2.2 + 4.4 * i / 4000.0;
    delta = std::max(delta, std::abs(oracle::semicircle_cdf(x / 1.05) -
                                     oracle::semicircle_cdf(x)));
  }
  EXPECT_NEAR(kolmogorov_distance(mu, w), delta, 1e-4);
  const auto p = BaiParameters::make(0.1, 1.2, 2.0, 8.0, 3.0);
  EXPECT_GE(bai_bound_theorem(mu, w, p).bound, delta);
  EXPECT_GE(bai_bound_corollary(mu, w, p).bound, delta);
}

TEST(BaiTheorem, AssembleIsLinearAndMonotone) {
  const auto p = BaiParameters::make(0.1, 1.2, 2.0, 8.0, 3.0);
  const auto b = bai_bound_corollary(dilate(Measure::semicircle(), 1.1),
                                     Measure::semicircle(), p);
  EXPECT_NEAR(assemble(b), b.bound, 1e-15);
  EXPECT_NEAR(b.bound,
              *p.c_gamma_kappa * (b.line_integral + b.vertical_sup +
                                  b.smoothness + kPi * b.far_field +
                                  p.gamma * kPi * b.tail),
              1e-14);
  for (double BaiBreakdown::*term :
       {&BaiBreakdown::line_integral, &BaiBreakdown::vertical_sup,
        &BaiBreakdown::smoothness, &BaiBreakdown::tail,
        &BaiBreakdown::far_field}) {
    BaiBreakdown up = b;
    up.*term += 0.01;
    EXPECT_GT(assemble(up), assemble(b));
  }
  // The theorem variant ignores the far-field term.
  BaiBreakdown t = b;
  t.variant = BaiVariant::kTheorem;
  const double before = assemble(t);
  t.far_field += 1.0;
  EXPECT_EQ(assemble(t), before);
}

TEST(BaiTheorem, CorollaryNeedsWindow) {
  const Measure w = Measure::semicircle();
  EXPECT_THROW(bai_bound_corollary(w, w, BaiParameters::make(0.1, 1.2, 2.0)),
               PreconditionError);
}

TEST(BaiTheorem, CertifiesRandomPairs) {
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 12; ++trial) {
    Measure mu = Measure::semicircle();
    switch (trial % 4) {
      case 0: mu = Measure::semicircle(0.5 + u(rng), 0.4 * u(rng) - 0.2); break;
      case 1: mu = Measure::free_poisson(2.0 + 4.0 * u(rng), 0.5); break;
      case 2: mu = gue_empirical(64, 100 + trial); break;
      default: {
        const double w = 0.25 + 0.1 * u(rng);
        mu = Measure::atomic({-1.0, 0.0, 1.0}, {w, 0.2, 0.8 - w});
      }
    }
    if (trial % 4 == 1) mu = shift(mu, -mean(mu));
    const Measure nu = trial % 3 ? Measure::semicircle()
                                 : Measure::semicircle(0.8 + 0.4 * u(rng));
    const double a = 2.0 + u(rng);
    const double v = 0.02 + 0.2 * u(rng);
    const double eps = std::min(1.9, 2 * v * a + 0.05 + u(rng));
    const auto p = BaiParameters::make(v, eps, a, 8.0, 3.0);
    const double delta = sweep_distance(mu, nu);
    const auto t = bai_bound_theorem(mu, nu, p);
    const auto c = bai_bound_corollary(mu, nu, p);
    EXPECT_GE(t.bound, delta) << trial;
    EXPECT_GE(c.bound, delta) << trial;
    for (const auto* b : {&t, &c}) {
      EXPECT_GE(b->line_integral, 0.0);
      EXPECT_GE(b->vertical_sup, 0.0);
      EXPECT_GE(b->smoothness, 0.0);
      EXPECT_GE(b->tail, 0.0);
      EXPECT_GE(b->far_field, 0.0);
    }
  }
}

TEST(BaiCsv, RowRoundTrips) {
  const auto p = BaiParameters::make(0.1, 1.2, 2.0, 8.0, 3.0);
  const Measure w = Measure::semicircle();
  const auto t =
      bai_bound_theorem(dilate(w, 1.05), w, BaiParameters::make(0.1, 1.2, 2.0));
  const auto c = bai_bound_corollary(dilate(w, 1.05), w, p);
  std::stringstream ss;
  write_bai_header(ss);
  write_bai_row(ss, t);
  write_bai_row(ss, c);
  std::vector<std::vector<std::string>> lines;
  for (std::string line; std::getline(ss, line);) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    lines.push_back(cells);
  }
  ASSERT_EQ(lines.size(), 3u);
  auto col = [&](const std::string& name) {
    return std::find(lines[0].begin(), lines[0].end(), name) - lines[0].begin();
  };
  ASSERT_EQ(lines[1].size(), lines[0].size());
  ASSERT_EQ(lines[2].size(), lines[0].size());
  EXPECT_EQ(lines[1][col("variant")], "theorem");
  EXPECT_EQ(lines[2][col("variant")], "corollary");
  EXPECT_EQ(lines[1][col("kappa")], "");
  EXPECT_NEAR(std::stod(lines[2][col("bound")]), c.bound, 1e-12 * c.bound);
  EXPECT_NEAR(std::stod(lines[1][col("smoothness")]), t.smoothness, 1e-14);
}

}  // namespace
}  // namespace freelab
