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
#include <numeric>
#include <sstream>

#include "freelab/errors.hpp"
#include "freelab/matrix_lab.hpp"

namespace freelab {
namespace {

using RMatrix = Eigen::MatrixXd;
using CVector = Eigen::VectorXcd;

struct Tridiagonal {
  RVector d;   // diagonal
  RVector e;   // e(k) couples k and k+1; e(n-1) = 0
  CMatrix q;   // A = q T q*, only when vectors were requested
};

// Householder reduction working on the lower triangle. Each reflector
// H = I - beta v v* maps the column below the diagonal onto a multiple of
// e_1; the trailing block is updated as A - v q* - q v* with
// p = beta A v, K = (beta/2) v* p, q = p - K v.
// The complex subdiagonal is then made real and nonnegative by a diagonal
// unitary, which is folded into q.
Tridiagonal tridiagonalize(const CMatrix& input, bool vectors) {
  const Eigen::Index n = input.rows();
  CMatrix a = input;
  CMatrix q;
  if (vectors) q = CMatrix::Identity(n, n);
  CVector sub = CVector::Zero(std::max<Eigen::Index>(n - 1, 0));

  for (Eigen::Index k = 0; k + 2 < n; ++k) {
    const Eigen::Index m = n - k - 1;
    auto x = a.col(k).tail(m);
    const double xnorm = x.norm();
    const double tail = x.tail(m - 1).norm();
    if (tail == 0.0) {
      sub(k) = x(0);
      continue;
    }
    const cplx x0 = x(0);
    const cplx phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : cplx(1.0);
    const cplx alpha = -phase * xnorm;
    CVector v = x;
    v(0) -= alpha;
    const double beta = 2.0 / v.squaredNorm();

    auto block = a.bottomRightCorner(m, m);
    CVector p = beta * (block.selfadjointView<Eigen::Lower>() * v);
    const cplx k_coeff = 0.5 * beta * v.dot(p);  // v* p, real up to rounding
    CVector w = p - k_coeff.real() * v;
    block.selfadjointView<Eigen::Lower>().rankUpdate(v, w, -1.0);

    sub(k) = alpha;
    if (vectors) {
      auto qs = q.rightCols(m);
      CVector qv = qs * v;
      qs.noalias() -= beta * qv * v.adjoint();
    }
  }
  if (n >= 2) sub(n - 2) = a(n - 1, n - 2);

  Tridiagonal t;
  t.d.resize(n);
  t.e = RVector::Zero(n);
  for (Eigen::Index k = 0; k < n; ++k) t.d(k) = a(k, k).real();

  // T = D T_r D* with D = diag(phi), phi_{k+1} = phi_k e_k / |e_k|.
  CVector phi(n);
  phi(0) = 1.0;
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    const double r = std::abs(sub(k));
    t.e(k) = r;
    phi(k + 1) = r > 0.0 ? phi(k) * sub(k) / r : phi(k);
  }
  if (vectors) {
    q = q * phi.asDiagonal();
    t.q = std::move(q);
  }
  return t;
}

// Implicit-shift QL on a real symmetric tridiagonal matrix. z, if given,
// accumulates the rotations column by column.
void ql_implicit(RVector& d, RVector& e, RMatrix* z) {
  const Eigen::Index n = d.size();
  const long cap = 30L * std::max<Eigen::Index>(n, 1);
  long total = 0;
  const double eps = std::numeric_limits<double>::epsilon();
  for (Eigen::Index l = 0; l < n; ++l) {
    Eigen::Index m;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(d(m)) + std::abs(d(m + 1));
        if (std::abs(e(m)) <= eps * dd) break;
      }
      if (m == l) break;
      if (++total > cap) {
        std::ostringstream os;
        os << "QL iteration did not converge within " << cap
           << " sweeps (sub-block starting at index " << l << ")";
        throw ConvergenceError(os.str());
      }
      double g = (d(l + 1) - d(l)) / (2.0 * e(l));
      double r = std::hypot(g, 1.0);
      g = d(m) - d(l) + e(l) / (g + std::copysign(r, g));
      double s = 1.0;
      double c = 1.0;
      double p = 0.0;
      Eigen::Index i;
      bool deflated = false;
      for (i = m - 1; i >= l; --i) {
        double f = s * e(i);
        const double b = c * e(i);
        r = std::hypot(f, g);
        e(i + 1) = r;
        if (r == 0.0) {
          d(i + 1) -= p;
          e(m) = 0.0;
          deflated = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d(i + 1) - p;
        r = (d(i) - g) * s + 2.0 * c * b;
        p = s * r;
        d(i + 1) = g + p;
        g = c * r - b;
        if (z != nullptr) {
          auto zi = z->col(i);
          auto zj = z->col(i + 1);
          for (Eigen::Index k = 0; k < n; ++k) {
            f = zj(k);
            zj(k) = s * zi(k) + c * f;
            zi(k) = c * zi(k) - s * f;
          }
        }
      }
      if (deflated) continue;
      d(l) -= p;
      e(l) = g;
      e(m) = 0.0;
    } while (m != l);
  }
}

void check_input(const HermitianMatrix& m) {
  if (m.dim() == 0) throw PreconditionError("eigensolver: empty matrix");
}

}  // namespace

RVector hermitian_eigenvalues(const HermitianMatrix& m) {
  check_input(m);
  Tridiagonal t = tridiagonalize(m.matrix(), false);
  ql_implicit(t.d, t.e, nullptr);
  std::sort(t.d.data(), t.d.data() + t.d.size());
  return t.d;
}

SpectralDecomposition hermitian_eigen(const HermitianMatrix& m) {
  check_input(m);
  const Eigen::Index n = m.dim();
  Tridiagonal t = tridiagonalize(m.matrix(), true);
  RMatrix z = RMatrix::Identity(n, n);
  ql_implicit(t.d, t.e, &z);

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index a, Eigen::Index b) { return t.d(a) < t.d(b); });
  RMatrix zs(n, n);
  SpectralDecomposition out;
  out.eigenvalues.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto j = order[static_cast<std::size_t>(k)];
    out.eigenvalues(k) = t.d(j);
    zs.col(k) = z.col(j);
  }
  out.eigenvectors = t.q * zs.cast<cplx>();

  const CMatrix& a = m.matrix();
  const double scale = std::max(a.norm(), std::numeric_limits<double>::min());
  out.residual = (a * out.eigenvectors -
                  out.eigenvectors * out.eigenvalues.cast<cplx>().asDiagonal())
                     .norm() /
                 scale;
  out.unitarity_error =
      (out.eigenvectors.adjoint() * out.eigenvectors - CMatrix::Identity(n, n))
          .cwiseAbs()
          .maxCoeff();
  return out;
}

}  // namespace freelab
