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
#include <limits>
#include <string>
#include <sstream>

#include "freelab/errors.hpp"
#include "freelab/matrix_lab.hpp"

namespace freelab {
namespace {

// Above this condition number of V^2 the fourth root taken from its
// eigendecomposition loses more than about 1e-10 in U.
constexpr double kDirectConditionLimit = 1e6;
constexpr int kMaxJacobiSweeps = 40;

// One-sided Jacobi on the stacked columns Y = [X_1; ...; X_n], so that
// Y*Y = W diag(col_norms^2) W*. Singular values of Y keep their relative
// accuracy, which forming Y*Y would square away.
void stacked_jacobi(const std::vector<HermitianMatrix>& xs, CMatrix& w,
                    RVector& sq_norms) {
  const int N = xs.front().dim();
  const auto n = static_cast<Eigen::Index>(xs.size());
  CMatrix y(n * N, N);
  for (Eigen::Index i = 0; i < n; ++i) y.middleRows(i * N, N) = xs[i].matrix();
  w = CMatrix::Identity(N, N);
  const double tol = 4.0 * std::numeric_limits<double>::epsilon() * N;
  for (int sweep = 0;; ++sweep) {
    if (sweep == kMaxJacobiSweeps) {
      throw ConvergenceError("self-normalization: one-sided Jacobi did not "
                             "converge in " + std::to_string(kMaxJacobiSweeps) +
                             " sweeps");
    }
    bool rotated = false;
    for (int p = 0; p + 1 < N; ++p) {
      for (int q = p + 1; q < N; ++q) {
        const double a = y.col(p).squaredNorm();
        const double b = y.col(q).squaredNorm();
        const cplx g = y.col(p).dot(y.col(q));
        const double ga = std::abs(g);
        if (!(ga > tol * std::sqrt(a * b))) continue;
        rotated = true;
        const cplx phase = std::conj(g) / ga;  // g * phase is real
        const double zeta = (b - a) / (2.0 * ga);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = c * t;
        for (CMatrix* m : {&y, &w}) {
          const Eigen::VectorXcd cp = m->col(p);
          const Eigen::VectorXcd cq = m->col(q) * phase;
          m->col(p) = c * cp - sn * cq;
          m->col(q) = sn * cp + c * cq;
        }
      }
    }
    if (!rotated) break;
  }
  sq_norms = y.colwise().squaredNorm().transpose();
}

}  // namespace

SelfNormalized build_self_normalized(const std::vector<HermitianMatrix>& xs,
                                     std::optional<double> pinv_floor) {
  if (xs.empty()) throw PreconditionError("self-normalization needs n >= 1");
  const int N = xs.front().dim();
  for (const auto& x : xs) {
    if (x.dim() != N) {
      throw PreconditionError("self-normalization: matrices differ in size");
    }
  }
  const double n = static_cast<double>(xs.size());

  CMatrix s = CMatrix::Zero(N, N);
  CMatrix v2 = CMatrix::Zero(N, N);
  for (const auto& x : xs) {
    s += x.matrix();
    v2.selfadjointView<Eigen::Lower>().rankUpdate(x.matrix());
  }
  v2.triangularView<Eigen::StrictlyUpper>() = v2.adjoint();
  s /= std::sqrt(n);
  v2 /= n;

  SelfNormalized out;
  out.S = HermitianMatrix::hermitize(std::move(s));
  out.V2 = HermitianMatrix::hermitize(std::move(v2));
  SpectralDecomposition spec = hermitian_eigen(out.V2);

  const double top = spec.eigenvalues(spec.eigenvalues.size() - 1);
  const double floor = pinv_floor.value_or(1e-12 * std::abs(top));
  if (spec.eigenvalues(0) * kDirectConditionLimit < top) {
    RVector sq;
    stacked_jacobi(xs, spec.eigenvectors, sq);
    spec.eigenvalues = sq / n;
  }
  out.v2_eigenvalues = spec.eigenvalues;
  std::sort(out.v2_eigenvalues.data(),
            out.v2_eigenvalues.data() + out.v2_eigenvalues.size());
  const double low = out.v2_eigenvalues(0);
  if (!(low > floor)) {
    std::ostringstream os;
    os << "V^2 is not invertible: smallest eigenvalue " << low
       << " is at or below the floor " << floor;
    throw PreconditionError(os.str());
  }
  const HermitianMatrix r =
      spectral_apply(spec, [](double l) { return std::pow(l, -0.25); });
  out.U = HermitianMatrix::hermitize(r.matrix() * out.S.matrix() * r.matrix());
  return out;
}

}  // namespace freelab
