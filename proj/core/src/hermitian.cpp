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

#include <cmath>
#include <ostream>
#include <sstream>

#include "freelab/csv.hpp"
#include "freelab/errors.hpp"
#include "freelab/matrix_lab.hpp"

namespace freelab {

HermitianMatrix::HermitianMatrix(CMatrix m) {
  if (m.rows() != m.cols()) {
    throw PreconditionError("Hermitian matrix must be square");
  }
  if (m.rows() == 0) throw PreconditionError("Hermitian matrix is empty");
  if (!m.allFinite()) {
    throw PreconditionError("Hermitian matrix has non-finite entries");
  }
  const double defect = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (defect > 1e-12) {
    std::ostringstream os;
    os << "matrix is not Hermitian: max |M - M*| = " << defect;
    throw PreconditionError(os.str());
  }
  m_ = 0.5 * (m + m.adjoint());
}

HermitianMatrix HermitianMatrix::hermitize(CMatrix m) {
  HermitianMatrix h;
  h.m_ = 0.5 * (m + m.adjoint());
  return h;
}

HermitianMatrix HermitianMatrix::identity(int n) {
  return hermitize(CMatrix::Identity(n, n));
}

HermitianMatrix HermitianMatrix::zero(int n) {
  return hermitize(CMatrix::Zero(n, n));
}

HermitianMatrix HermitianMatrix::diagonal(const RVector& d) {
  return hermitize(d.cast<cplx>().asDiagonal().toDenseMatrix());
}

HermitianMatrix HermitianMatrix::operator+(const HermitianMatrix& o) const {
  HermitianMatrix h;
  h.m_ = m_ + o.m_;
  return h;
}

HermitianMatrix HermitianMatrix::operator-(const HermitianMatrix& o) const {
  HermitianMatrix h;
  h.m_ = m_ - o.m_;
  return h;
}

HermitianMatrix HermitianMatrix::operator*(double s) const {
  HermitianMatrix h;
  h.m_ = s * m_;
  return h;
}

HermitianMatrix HermitianMatrix::square() const {
  CMatrix out = CMatrix::Zero(m_.rows(), m_.cols());
  out.selfadjointView<Eigen::Lower>().rankUpdate(m_);
  out.triangularView<Eigen::StrictlyUpper>() = out.adjoint();
  HermitianMatrix h;
  h.m_ = std::move(out);
  return h;
}

double HermitianMatrix::trace_normalized() const {
  return m_.trace().real() / static_cast<double>(m_.rows());
}

double operator_norm(const HermitianMatrix& m) {
  const RVector ev = hermitian_eigenvalues(m);
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

double operator_norm(const CMatrix& m) {
  // Largest singular value is the square root of the top eigenvalue of M*M.
  CMatrix g = m.adjoint() * m;
  return std::sqrt(std::max(0.0, operator_norm(HermitianMatrix::hermitize(g))));
}

double normalized_frobenius(const CMatrix& m) {
  return m.norm() / std::sqrt(static_cast<double>(m.rows()));
}

cplx trace_resolvent(const RVector& eigenvalues, HalfPlanePoint z) {
  cplx sum = 0.0;
  for (Eigen::Index k = 0; k < eigenvalues.size(); ++k) {
    sum += 1.0 / (z.value() - eigenvalues(k));
  }
  return sum / static_cast<double>(eigenvalues.size());
}

cplx trace_resolvent(const HermitianMatrix& m, HalfPlanePoint z) {
  return trace_resolvent(hermitian_eigenvalues(m), z);
}

void write_eigenvalues_csv(std::ostream& os, const RVector& eigenvalues) {
  CsvWriter w(os);
  w.header({"eigenvalue"});
  for (Eigen::Index k = 0; k < eigenvalues.size(); ++k) w.row({eigenvalues(k)});
}

}  // namespace freelab
