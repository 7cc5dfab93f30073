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

#include <complex>
#include <functional>
#include <iosfwd>
#include <vector>

#include "freelab/measure.hpp"

namespace freelab {

using cplx = std::complex<double>;

// A point of the open upper half-plane.
class HalfPlanePoint {
 public:
  HalfPlanePoint(double re, double im);
  explicit HalfPlanePoint(cplx z) : HalfPlanePoint(z.real(), z.imag()) {}

  double re() const { return z_.real(); }
  double im() const { return z_.imag(); }
  cplx value() const { return z_; }

 private:
  cplx z_;
};

// G(z) = integral of 1/(z - t) dm(t).
cplx cauchy_transform(const Measure& m, HalfPlanePoint z);

// G and dG/dz together; the subordination solver needs both.
struct CauchyValue {
  cplx g;
  cplx dg;
};
CauchyValue cauchy_transform_d(const Measure& m, cplx z);

// (z - sqrt(z^2 - 4 s))/(2 s), the branch with z G(z) -> 1 at infinity.
cplx semicircle_cauchy(HalfPlanePoint z, double variance = 1.0);

using CauchyFunction = std::function<cplx(cplx)>;

struct Inversion {
  Measure measure;
  double eta;
};

// Density -Im g(x + i eta)/pi on `resolution` equally spaced points of the
// window, clamped at zero and renormalized. eta must lie in (1e-6, 1).
Inversion stieltjes_invert(const CauchyFunction& g, Interval window,
                           int resolution, double eta);
// 4 * width / resolution.
double default_eta(Interval window, int resolution);

// One row per point: re(z), im(z), re(G), im(G).
void write_transform_trace(std::ostream& os, const std::vector<cplx>& zs,
                           const std::vector<cplx>& gs);

}  // namespace freelab
