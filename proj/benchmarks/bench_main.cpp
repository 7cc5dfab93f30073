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


#include <benchmark/benchmark.h>

#include "freelab/bai_bounds.hpp"
#include "freelab/free_conv.hpp"
#include "freelab/matrix_lab.hpp"
#include "freelab/measure.hpp"
#include "freelab/random.hpp"
#include "freelab/transforms.hpp"

namespace {

using namespace freelab;

void BM_HermitianEigenvalues(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  Rng rng(1);
  const HermitianMatrix m = sample_gue(N, rng);
  for (auto _ : state) benchmark::DoNotOptimize(hermitian_eigenvalues(m));
}
BENCHMARK(BM_HermitianEigenvalues)->RangeMultiplier(2)->Range(64, 512)
    ->Unit(benchmark::kMillisecond);

void BM_HermitianEigen(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  Rng rng(2);
  const HermitianMatrix m = sample_gue(N, rng);
  for (auto _ : state) benchmark::DoNotOptimize(hermitian_eigen(m));
}
BENCHMARK(BM_HermitianEigen)->RangeMultiplier(2)->Range(64, 512)
    ->Unit(benchmark::kMillisecond);

void BM_CauchyEmpirical(benchmark::State& state) {
  Rng rng(3);
  const RVector ev = hermitian_eigenvalues(sample_gue(static_cast<int>(state.range(0)), rng));
  const Measure m = Measure::empirical({ev.data(), ev.data() + ev.size()});
  double u = -2.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cauchy_transform(m, HalfPlanePoint(u, 1e-2)));
    u = u > 2.5 ? -2.5 : u + 1e-3;
  }
}
BENCHMARK(BM_CauchyEmpirical)->Arg(256)->Arg(1024);

void BM_FreeConvolveBernoulli(benchmark::State& state) {
  const Measure b = Measure::atomic({-1.0, 1.0}, {0.5, 0.5});
  ConvolutionOptions o;
  o.resolution = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(free_convolve(b, b, o));
}
BENCHMARK(BM_FreeConvolveBernoulli)->Arg(4096)->Arg(32768)
    ->Unit(benchmark::kMillisecond);

void BM_FreeConvolveSemicircle(benchmark::State& state) {
  const Measure w = Measure::semicircle();
  ConvolutionOptions o;
  o.resolution = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(free_convolve(w, w, o));
}
BENCHMARK(BM_FreeConvolveSemicircle)->Arg(4096)->Arg(32768)
    ->Unit(benchmark::kMillisecond);

void BM_KolmogorovEmpirical(benchmark::State& state) {
  Rng rng(4);
  const RVector ev = hermitian_eigenvalues(sample_gue(256, rng));
  const Measure m = Measure::empirical({ev.data(), ev.data() + ev.size()});
  const Measure w = Measure::semicircle();
  for (auto _ : state) benchmark::DoNotOptimize(kolmogorov(m, w));
}
BENCHMARK(BM_KolmogorovEmpirical)->Unit(benchmark::kMicrosecond);

void BM_BaiCorollary(benchmark::State& state) {
  Rng rng(5);
  const RVector ev = hermitian_eigenvalues(sample_gue(256, rng));
  const Measure m = Measure::empirical({ev.data(), ev.data() + ev.size()});
  const Measure w = Measure::semicircle();
  const auto p = BaiParameters::make(0.1, 1.2, 2.0, 8.0, 3.0);
  for (auto _ : state) benchmark::DoNotOptimize(bai_bound_corollary(m, w, p));
}
BENCHMARK(BM_BaiCorollary)->Unit(benchmark::kMillisecond);

void BM_SelfNormReplica(benchmark::State& state) {
  int rep = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        gue_selfnorm_replica(static_cast<int>(state.range(0)), 256, 7, rep++,
                             HalfPlanePoint(0.0, 1.0)));
  }
}
BENCHMARK(BM_SelfNormReplica)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
