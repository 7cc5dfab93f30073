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

#include "freelab/errors.hpp"
#include "freelab/matrix_lab.hpp"
#include "freelab/random.hpp"

namespace freelab {

HermitianMatrix sample_gue(int N, Rng& rng) {
  if (N < 1) throw PreconditionError("sample_gue: N must be positive");
  const double scale = 1.0 / std::sqrt(static_cast<double>(N));
  const double off = scale * std::sqrt(0.5);
  CMatrix m(N, N);
  for (int i = 0; i < N; ++i) {
    m(i, i) = scale * rng.normal();
    for (int j = i + 1; j < N; ++j) {
      const double re = rng.normal();
      const double im = rng.normal();
      m(i, j) = off * cplx(re, im);
      m(j, i) = std::conj(m(i, j));
    }
  }
  return HermitianMatrix::hermitize(std::move(m));
}

SelfNormReplica gue_selfnorm_replica(int n, int N, std::uint64_t seed,
                                     int replica, HalfPlanePoint z) {
  if (n < 1) throw PreconditionError("gue_selfnorm: n must be positive");
  std::vector<HermitianMatrix> xs;
  xs.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(replica),
                        static_cast<std::uint64_t>(i)));
    xs.push_back(sample_gue(N, rng));
  }
  const SelfNormalized sn = build_self_normalized(xs);
  const RVector ev = hermitian_eigenvalues(sn.U);

  SelfNormReplica r;
  r.seed = seed;
  r.replica = replica;
  r.n = n;
  r.N = N;
  r.resolvent = trace_resolvent(ev, z);
  r.deviation = std::abs(r.resolvent - semicircle_cauchy(z));
  r.v2_min = sn.v2_eigenvalues(0);
  r.v2_max = sn.v2_eigenvalues(sn.v2_eigenvalues.size() - 1);
  r.u_norm = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
  return r;
}

}  // namespace freelab
