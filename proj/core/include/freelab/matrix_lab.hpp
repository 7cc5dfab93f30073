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

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "freelab/transforms.hpp"

namespace freelab {

class Rng;

using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

// Dense complex Hermitian matrix. Construction rejects inputs whose
// conjugate-symmetry defect exceeds 1e-12 in max norm, then symmetrizes.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(CMatrix m);

  static HermitianMatrix identity(int n);
  static HermitianMatrix zero(int n);
  static HermitianMatrix diagonal(const RVector& d);
  // Symmetrizes without the defect check; for results of products that are
  // Hermitian in exact arithmetic.
  static HermitianMatrix hermitize(CMatrix m);

  int dim() const { return static_cast<int>(m_.rows()); }
  const CMatrix& matrix() const { return m_; }

  HermitianMatrix operator+(const HermitianMatrix& o) const;
  HermitianMatrix operator-(const HermitianMatrix& o) const;
  HermitianMatrix operator*(double s) const;
  // M^2 = M M* for Hermitian M.
  HermitianMatrix square() const;
  double trace_normalized() const;  // tr_N = trace / N

 private:
  CMatrix m_;
};

struct SpectralDecomposition {
  RVector eigenvalues;   // ascending
  CMatrix eigenvectors;  // columns
  double residual = 0.0;          // ||MQ - Q diag||_F / ||M||_F
  double unitarity_error = 0.0;   // ||Q*Q - I||_max
};

// Householder reduction to real symmetric tridiagonal form followed by
// implicit-shift QL. Throws ConvergenceError after 30 N QL iterations.
SpectralDecomposition hermitian_eigen(const HermitianMatrix& m);
RVector hermitian_eigenvalues(const HermitianMatrix& m);

// f(M) through the spectral decomposition.
template <class F>
HermitianMatrix spectral_apply(const SpectralDecomposition& s, F&& f) {
  RVector d = s.eigenvalues.unaryExpr(f);
  CMatrix m = s.eigenvectors * d.asDiagonal() * s.eigenvectors.adjoint();
  return HermitianMatrix::hermitize(std::move(m));
}

double operator_norm(const HermitianMatrix& m);
double operator_norm(const CMatrix& m);  // largest singular value
// sqrt(tr_N(M* M)).
double normalized_frobenius(const CMatrix& m);

// Diagonal N(0,1)/sqrt(N); off-diagonal real and imaginary parts
// N(0,1/2)/sqrt(N) each, drawn row by row over the upper triangle.
HermitianMatrix sample_gue(int N, Rng& rng);

struct SelfNormalized {
  HermitianMatrix U;
  HermitianMatrix S;   // sum / sqrt(n)
  HermitianMatrix V2;  // sum of squares / n
  RVector v2_eigenvalues;
};

// U = (V^2)^{-1/4} S (V^2)^{-1/4}. pinv_floor defaults to 1e-12 ||V^2||;
// a smallest eigenvalue at or below it is a PreconditionError.
SelfNormalized build_self_normalized(const std::vector<HermitianMatrix>& xs,
                                     std::optional<double> pinv_floor = {});

// (1/N) sum 1/(z - lambda_k).
cplx trace_resolvent(const HermitianMatrix& m, HalfPlanePoint z);
cplx trace_resolvent(const RVector& eigenvalues, HalfPlanePoint z);

enum class CheckStatus { kHolds, kViolated, kNotApplicable };

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::kNotApplicable;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // rhs - lhs, or the quantity compared with 0 (neumann: relative)
  bool statistical = false;
  std::string note;
};

struct InequalityOptions {
  std::vector<double> weights;  // convex weights for (b); default uniform
  double voiculescu_slack = 0.2;
  std::optional<double> pinv_floor;
};

// Five named checks on a family X_1..X_n, normalized so that
// B^2 = sum tr_N X_i^2 and tr_N V^2 = 1:
//   neumann       partial sums of (I - V^2)^k against the inverse
//   bikchentaev   sum w|T|^2 - |sum w T|^2 is positive semidefinite
//   norm_u        ||U|| <= sqrt(n)
//   frobenius_u   ||U||_2 <= 2 max(1, ||S||_2) + 3 sqrt(2n) ||V^2 - I||_2
//   voiculescu    ||sum X|| <= max ||X_i|| + 2 (sum tr_N X_i^2)^{1/2} + slack
// A violated deterministic check is a hard failure for callers; the last one
// is statistical.
struct InequalityReport {
  std::vector<CheckResult> checks;
  const CheckResult& get(const std::string& name) const;
  bool deterministic_ok() const;
};

InequalityReport check_operator_inequalities(
    const std::vector<HermitianMatrix>& xs, const InequalityOptions& opts = {});

// Smallest eigenvalue of sum w_i T_i* T_i - (sum w_i T_i)*(sum w_i T_i) for
// arbitrary square T_i and convex weights.
double bikchentaev_margin(const std::vector<CMatrix>& ts,
                          const std::vector<double>& weights);

// One replica of the GUE self-normalization experiment: n independent
// GUE(N) matrices drawn with derive_seed(seed, replica, i).
struct SelfNormReplica {
  std::uint64_t seed = 0;
  int replica = 0;
  int n = 0;
  int N = 0;
  cplx resolvent;          // tr_N (z - U)^{-1}
  double deviation = 0.0;  // |resolvent - G_omega(z)|
  double v2_min = 0.0;
  double v2_max = 0.0;
  double u_norm = 0.0;
};
SelfNormReplica gue_selfnorm_replica(int n, int N, std::uint64_t seed,
                                     int replica, HalfPlanePoint z);

// Eigenvalues as a one-column CSV.
void write_eigenvalues_csv(std::ostream& os, const RVector& eigenvalues);

}  // namespace freelab
