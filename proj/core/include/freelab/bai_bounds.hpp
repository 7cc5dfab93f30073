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

#pragma once

#include <iosfwd>
#include <optional>

#include "freelab/measure.hpp"

namespace freelab {

// (1/pi) * integral over |x| < a of dx/(1 + x^2) = (2/pi) atan(a).
double gamma_of(double a);

// Parameters of the Kolmogorov-distance bounds. All hypotheses are checked
// at construction; a violation is a PreconditionError naming it.
struct BaiParameters {
  double v = 0.0;
  double eps = 0.0;
  double a = 0.0;
  double gamma = 0.0;
  double c_gamma = 0.0;  // 1/((2 gamma - 1) pi)
  // Only for the finite-window variant.
  std::optional<double> A;
  std::optional<double> B;
  std::optional<double> kappa;          // 2B/(pi (A - B)(2 gamma - 1))
  std::optional<double> c_gamma_kappa;  // 1/((2 gamma - 1) pi (1 - kappa))

  // v in (0,1), eps in (0,2), gamma > 1/2, eps > 2 v a.
  static BaiParameters make(double v, double eps, double a);
  // Additionally A > B > 0 and kappa < 1.
  static BaiParameters make(double v, double eps, double a, double A,
                            double B);
};

// (1/v) sup_x integral_{|y| < 2va} |F(x) - F(x + y)| dy.
// Grid search over the support +- 4va with three refinement levels; step
// CDFs are evaluated at every break point, which makes them exact.
double smoothness_term(const Measure& nu, double v, double a);

// max{F(-2 + eps), 1 - F(2 - eps)} for eps in (0, 2].
double tail_term(const Measure& nu, double eps);

enum class BaiVariant { kTheorem, kCorollary };

struct BaiBreakdown {
  BaiVariant variant = BaiVariant::kTheorem;
  BaiParameters params;
  // Integral of |G_mu(u+i) - G_nu(u+i)| over (-inf, 2) or [-A, 2],
  // including truncation and quadrature error allowances.
  double line_integral = 0.0;
  double line_truncation = 0.0;  // part of line_integral
  double line_quadrature_error = 0.0;  // part of line_integral
  // sup over x in [-2 + eps/2, 2 - eps/2] of the vertical integral over [v,1].
  double vertical_sup = 0.0;
  double vertical_argmax = 0.0;
  int vertical_refinements = 0;
  double smoothness = 0.0;
  double tail = 0.0;
  // Corollary only: integral of |F_mu - F_nu| over |x| > B.
  double far_field = 0.0;
  double far_field_truncation = 0.0;
  double bound = 0.0;
};

// Recomputes `bound` from the terms.
double assemble(const BaiBreakdown& b);

// Both inputs need finite second moments; every variant here qualifies.
BaiBreakdown bai_bound_theorem(const Measure& mu, const Measure& nu,
                               const BaiParameters& p);
BaiBreakdown bai_bound_corollary(const Measure& mu, const Measure& nu,
                                 const BaiParameters& p);

void write_bai_header(std::ostream& os);
void write_bai_row(std::ostream& os, const BaiBreakdown& b);

}  // namespace freelab
