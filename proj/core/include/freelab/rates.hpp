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
#include <string>
#include <vector>

#include "freelab/free_conv.hpp"
#include "freelab/measure.hpp"

namespace freelab {

// Moments of one summand. norm_bound is the operator norm, absent for
// unbounded summands.
struct MomentProfile {
  std::optional<double> norm_bound;
  double variance = 0.0;
  double abs_moment_3 = 0.0;
  double abs_moment_4 = 0.0;

  // Throws PreconditionError when the moment inequalities fail.
  void validate() const;
  // norm_bound is max |support|; variance is the second moment (the laws
  // are taken as centered); moments by exact sums or quadrature.
  static MomentProfile of(const Measure& m);
};

// E|X|^k for 1 <= k <= 8.
double absolute_moment(const Measure& m, int k);

// Lyapunov fractions of a family:
//   L_{S,k} = sum ||X_i||^k / B^k,  L_k = sum E|X_i|^k / B^k,  B^2 = sum var.
struct LyapunovReport {
  int n = 0;
  double b2 = 0.0;
  std::optional<double> l_s3;
  std::optional<double> l_s4;
  double l3 = 0.0;
  double l4 = 0.0;
  std::optional<double> max_norm;
  bool identical = false;  // all profiles equal
  MomentProfile first;
};

LyapunovReport lyapunov_report(const std::vector<MomentProfile>& profiles);

enum class BoundKind {
  kBounded,           // max{|log L_S3| L_S3, |log L_S4| L_S4^{1/2}}
  kSupport,           // support radius 2 + max||X||/B + 57 L_S4^{1/2}
  kBoundedIdentical,  // ||X_1||^3 log n / sqrt(n)
  kUnbounded,         // L4^{1/4} + sqrt(n) L4^{3/4} + n L4^{5/4}
  kUnboundedIdentical,  // E|X_1|^4^{5/4} / n^{1/4}
};

const char* bound_name(BoundKind k);
BoundKind parse_bound_kind(const std::string& s);

struct GateResult {
  bool passed = false;
  std::vector<std::string> violations;  // each names the failed inequality
  std::vector<std::string> caveats;     // conditions that cannot be checked
};

// Checkable hypotheses of each bound. Support-type bounds need every
// norm_bound; a missing one is a PreconditionError, not a gate failure.
GateResult precondition_gate(const LyapunovReport& r, BoundKind kind);

// Evaluates the bound with caller constant C; a failing gate is a
// PreconditionError listing the violations. kSupport ignores C.
double theorem_bound(const LyapunovReport& r, BoundKind kind, double C = 1.0);

// (1/B^2) sum of the second moment of each law over |x| > eps B.
double lindeberg_functional(const std::vector<Measure>& measures, double eps);

struct RatePoint {
  int n = 0;
  double delta = 0.0;
};

struct RateFit {
  double exponent = 0.0;
  bool log_factor_included = false;
  double constant = 0.0;
  double max_abs_residual = 0.0;  // in log space
};

// Least squares on log delta = log c + p log n (+ log log n).
RateFit rate_fit(const std::vector<RatePoint>& series, bool with_log);

// Kolmogorov distance from the normalized n-fold free convolution of `base`
// to the standard semicircle, for each n.
std::vector<RatePoint> clt_delta_series(const Measure& base,
                                        const std::vector<int>& ns,
                                        const CltOptions& options = {});

void write_rate_series(std::ostream& os, const std::vector<RatePoint>& s);
std::vector<RatePoint> read_rate_series(std::istream& is);

}  // namespace freelab
