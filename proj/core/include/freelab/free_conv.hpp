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
#include <vector>

#include "freelab/measure.hpp"
#include "freelab/transforms.hpp"

namespace freelab {

struct SubordinationPoint {
  cplx z;
  cplx omega1;
  cplx omega2;
  cplx g;  // Cauchy transform of the convolution at z
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

struct SubordinationResult {
  std::vector<SubordinationPoint> points;
  double tol = 0.0;

  std::size_t failures() const;
  double worst_residual() const;
  int max_iterations() const;
};

struct ConvolutionOptions {
  std::optional<Interval> window;  // default: Minkowski sum of supports +- 1
  int resolution = 32768;
  std::optional<double> eta;       // default: 4 * width / resolution
  double tol = 1e-12;
  int max_iter = 2000;
  unsigned threads = 0;            // 0: one per hardware thread
};

struct ConvolutionResult {
  Measure measure;
  double eta = 0.0;
  Interval window;
  SubordinationResult subordination;
};

// Subordination functions of m1 and m2 at one point of the upper
// half-plane. Throws ZeroDenominatorError if G vanishes on the path.
SubordinationPoint subordinate(const Measure& m1, const Measure& m2, cplx z,
                               double tol = 1e-12, int max_iter = 2000);

Interval convolution_window(const Measure& m1, const Measure& m2);

// Density of m1 boxplus m2 on a grid. More than 1% unconverged points is a
// ConvergenceError naming the worst residual.
ConvolutionResult free_convolve(const Measure& m1, const Measure& m2,
                                const ConvolutionOptions& options = {});

// Subordination for the n-fold power at one point:
// w = zeta + (n - 1) H(w), G_{m^n}(zeta) = G_m(w). omega2 is unused.
SubordinationPoint subordinate_power(const Measure& m, int n, cplx zeta,
                                     double tol = 1e-12, int max_iter = 2000);

enum class FoldStrategy {
  kPowerSubordination,  // one solve per grid point for the whole power
  kBinaryFold,          // balanced tree of pairwise free_convolve calls
};

struct CltOptions {
  std::optional<Interval> window;  // default: +-(2 + M/sqrt(n)) + 0.5
  int resolution = 16384;
  std::optional<double> eta;
  double tol = 1e-12;
  int max_iter = 2000;
  FoldStrategy strategy = FoldStrategy::kPowerSubordination;
  // Grid used for the intermediate convolutions of the binary fold.
  int fold_resolution = 2048;
  unsigned threads = 0;
};

// Law of (X_1 + ... + X_n)/sqrt(n) for free copies of a centered law with
// unit variance (checked within 1e-8). 2 <= n <= 4096.
ConvolutionResult free_clt_distribution(const Measure& base, int n,
                                        const CltOptions& options = {});

// Per-point diagnostics: re_z, im_z, iterations, residual, converged,
// re/im of both subordination functions.
void write_subordination_csv(std::ostream& os, const SubordinationResult& r);

struct AtomList {
  std::vector<double> locations;
  std::vector<double> masses;

  static AtomList of(const Measure& m);
  std::size_t size() const { return locations.size(); }
  bool empty() const { return locations.empty(); }
};

// Atoms of the free convolution: gamma = alpha + beta whenever the masses
// at alpha and beta add up to more than 1, with the excess as mass.
AtomList convolution_atoms(const AtomList& a1, const AtomList& a2);
// Left fold of convolution_atoms over n copies.
AtomList nfold_atoms(const AtomList& a, int n);

}  // namespace freelab
