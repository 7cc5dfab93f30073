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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "freelab/errors.hpp"
#include "freelab/matrix_lab.hpp"

namespace freelab {
namespace {

constexpr double kDeterministicSlack = 1e-9;
constexpr int kMaxNeumannTerms = 200;

CheckStatus verdict(double margin) {
  return margin >= -kDeterministicSlack ? CheckStatus::kHolds
                                        : CheckStatus::kViolated;
}

std::vector<double> resolve_weights(const std::vector<double>& w,
                                    std::size_t n) {
  if (w.empty()) return std::vector<double>(n, 1.0 / static_cast<double>(n));
  if (w.size() != n) {
    throw PreconditionError("weights must have one entry per matrix");
  }
  double total = 0.0;
  for (double x : w) {
    if (!(x >= 0.0)) throw PreconditionError("weights must be nonnegative");
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw PreconditionError("weights must sum to 1");
  }
  return w;
}

CheckResult neumann_check(const HermitianMatrix& v2,
                          const SpectralDecomposition& spec) {
  CheckResult c;
  c.name = "neumann";
  const int N = v2.dim();
  double q = 0.0;
  for (Eigen::Index k = 0; k < spec.eigenvalues.size(); ++k) {
    q = std::max(q, std::abs(1.0 - spec.eigenvalues(k)));
  }
  if (!(q < 1.0)) {
    std::ostringstream os;
    os << "||I - V^2|| = " << q << " is not below 1";
    c.note = os.str();
    return c;
  }
  int terms = kMaxNeumannTerms;
  if (q > 0.0) {
    const double want = std::log(1e-12 * (1.0 - q)) / std::log(q);
    terms = std::clamp(static_cast<int>(std::ceil(want)), 1, kMaxNeumannTerms);
  }
  const CMatrix d = CMatrix::Identity(N, N) - v2.matrix();
  CMatrix power = CMatrix::Identity(N, N);
  CMatrix sum = power;
  for (int k = 1; k <= terms; ++k) {
    power = power * d;
    sum += power;
  }
  const HermitianMatrix inverse =
      spectral_apply(spec, [](double l) { return 1.0 / l; });
  const double err = operator_norm(HermitianMatrix::hermitize(sum - inverse.matrix()));
  const double tail = std::pow(q, terms + 1) / (1.0 - q);
  const double inv_norm = operator_norm(inverse);

  // Both comparisons are equalities in exact arithmetic when q is attained
  // at the smallest eigenvalue, so margins are relative to max(1, rhs).
  c.lhs = err;
  c.rhs = tail + 1e-8;
  const double bound = 1.0 / (1.0 - q);
  c.margin = std::min((c.rhs - c.lhs) / std::max(1.0, c.rhs),
                      (bound - inv_norm) / std::max(1.0, bound));
  c.status = verdict(c.margin);
  std::ostringstream os;
  os << "q = " << q << ", terms = " << terms << ", ||(V^2)^-1|| = " << inv_norm
     << " <= 1/(1-q) = " << bound << " (margin relative)";
  c.note = os.str();
  return c;
}

}  // namespace

double bikchentaev_margin(const std::vector<CMatrix>& ts,
                          const std::vector<double>& weights) {
  if (ts.empty()) throw PreconditionError("bikchentaev: empty family");
  const auto w = resolve_weights(weights, ts.size());
  const auto N = ts.front().rows();
  CMatrix avg = CMatrix::Zero(N, N);
  CMatrix sq = CMatrix::Zero(N, N);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (ts[i].rows() != N || ts[i].cols() != N) {
      throw PreconditionError("bikchentaev: matrices differ in size");
    }
    avg += w[i] * ts[i];
    sq += w[i] * (ts[i].adjoint() * ts[i]);
  }
  CMatrix diff = sq - avg.adjoint() * avg;
  return hermitian_eigenvalues(HermitianMatrix::hermitize(std::move(diff)))(0);
}

const CheckResult& InequalityReport::get(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  throw PreconditionError("no check named " + name);
}

bool InequalityReport::deterministic_ok() const {
  return std::none_of(checks.begin(), checks.end(), [](const CheckResult& c) {
    return !c.statistical && c.status == CheckStatus::kViolated;
  });
}

InequalityReport check_operator_inequalities(
    const std::vector<HermitianMatrix>& xs, const InequalityOptions& opts) {
  if (xs.empty()) throw PreconditionError("inequalities: empty family");
  const int N = xs.front().dim();
  const double n = static_cast<double>(xs.size());
  double b2 = 0.0;
  for (const auto& x : xs) {
    if (x.dim() != N) {
      throw PreconditionError("inequalities: matrices differ in size");
    }
    b2 += x.square().trace_normalized();
  }
  if (!(b2 > 0.0)) throw PreconditionError("inequalities: all matrices vanish");

  // U does not depend on the normalization; S and V^2 are rescaled so that
  // tr_N V^2 = 1.
  const SelfNormalized sn = build_self_normalized(xs, opts.pinv_floor);
  const HermitianMatrix v2 = sn.V2 * (n / b2);
  const HermitianMatrix s = sn.S * std::sqrt(n / b2);
  const SpectralDecomposition v2_spec = hermitian_eigen(v2);

  InequalityReport report;
  report.checks.push_back(neumann_check(v2, v2_spec));

  {
    CheckResult c;
    c.name = "bikchentaev";
    std::vector<CMatrix> ts;
    ts.reserve(xs.size());
    for (const auto& x : xs) ts.push_back(x.matrix());
    c.margin = bikchentaev_margin(ts, opts.weights);
    c.lhs = -c.margin;
    c.status = verdict(c.margin);
    c.note = "smallest eigenvalue of sum w|T|^2 - |sum w T|^2";
    report.checks.push_back(c);
  }

  const double u_norm = operator_norm(sn.U);
  {
    CheckResult c;
    c.name = "norm_u";
    c.lhs = u_norm;
    c.rhs = std::sqrt(n);
    c.margin = c.rhs - c.lhs;
    c.status = verdict(c.margin);
    report.checks.push_back(c);
  }

  {
    CheckResult c;
    c.name = "frobenius_u";
    const double dev =
        normalized_frobenius((v2 - HermitianMatrix::identity(N)).matrix());
    const double s2 = normalized_frobenius(s.matrix());
    c.lhs = normalized_frobenius(sn.U.matrix());
    c.rhs = 2.0 * std::max(1.0, s2) + 3.0 * std::sqrt(2.0 * n) * dev;
    c.margin = c.rhs - c.lhs;
    c.status = verdict(c.margin);
    std::ostringstream os;
    os << "||S||_2 = " << s2 << ", ||V^2 - I||_2 = " << dev
       << ", fixed-constant rhs 2 + 3 sqrt(2n) ||V^2 - I||_2 = "
       << 2.0 + 3.0 * std::sqrt(2.0 * n) * dev;
    c.note = os.str();
    report.checks.push_back(c);
  }

  {
    CheckResult c;
    c.name = "voiculescu";
    c.statistical = true;
    CMatrix total = CMatrix::Zero(N, N);
    double max_norm = 0.0;
    for (const auto& x : xs) {
      total += x.matrix();
      max_norm = std::max(max_norm, operator_norm(x));
    }
    c.lhs = operator_norm(HermitianMatrix::hermitize(std::move(total)));
    c.rhs = max_norm + 2.0 * std::sqrt(b2) + opts.voiculescu_slack;
    c.margin = c.rhs - c.lhs;
    c.status = c.margin >= 0.0 ? CheckStatus::kHolds : CheckStatus::kViolated;
    report.checks.push_back(c);
  }
  return report;
}

}  // namespace freelab
