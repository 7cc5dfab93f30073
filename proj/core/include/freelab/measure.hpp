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

#include <functional>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace freelab {

class Rng;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
};

// Finitely many atoms. points strictly increasing, masses positive, sum 1.
struct Atomic {
  std::vector<double> points;
  std::vector<double> masses;
};

// Piecewise-linear density on a strictly increasing grid, zero outside.
// Normalized so that the trapezoid integral is 1.
struct GridDensity {
  std::vector<double> grid;
  std::vector<double> density;
  std::vector<double> cumulative;  // trapezoid CDF at the grid nodes
};

// Sorted sample, each value carrying mass 1/size. Ties allowed.
struct Empirical {
  std::vector<double> values;
};

// center + sigma * (standard semicircle on [-2, 2]).
struct Semicircle {
  double variance = 1.0;
  double center = 0.0;
};

// shift + sign * Y with Y free Poisson of the given rate and jump size.
struct FreePoisson {
  double rate = 1.0;
  double jump = 1.0;
  double shift = 0.0;
  bool reflected = false;  // sign = -1
};

enum class MeasureKind { kAtomic, kGridDensity, kEmpirical, kSemicircle,
                         kFreePoisson };

// A probability law on the real line. Immutable after construction; the
// factory functions validate and normalize their input.
class Measure {
 public:
  using Payload =
      std::variant<Atomic, GridDensity, Empirical, Semicircle, FreePoisson>;

  // Points need not be sorted; repeated points are merged. Masses must be
  // positive and sum to 1 within 1e-9, after which they are rescaled.
  static Measure atomic(std::vector<double> points, std::vector<double> masses);
  static Measure point_mass(double at);
  // Negative density values are rejected; the result is renormalized.
  static Measure grid_density(std::vector<double> grid,
                              std::vector<double> density);
  static Measure empirical(std::vector<double> samples);
  static Measure semicircle(double variance = 1.0, double center = 0.0);
  static Measure free_poisson(double rate, double jump);
  // Lower-level constructor for shifted or reflected free Poisson laws.
  static Measure free_poisson(const FreePoisson& p);

  const Payload& payload() const { return payload_; }
  MeasureKind kind() const;
  template <class T>
  const T* get_if() const {
    return std::get_if<T>(&payload_);
  }
  // Atomic and empirical laws have no absolutely continuous part.
  bool is_discrete() const;
  std::string describe() const;

 private:
  explicit Measure(Payload p) : payload_(std::move(p)) {}
  Payload payload_;
};

// Right-continuous distribution function F(x) = m((-inf, x]).
double cdf(const Measure& m, double x);
// Left limit F(x-) = m((-inf, x)).
double cdf_left(const Measure& m, double x);
// Lebesgue density; throws for discrete laws. The free Poisson atom at the
// shift point (rate < 1) is excluded.
double density(const Measure& m, double x);
// Locations and masses of the atoms (sorted). Empty for continuous laws.
std::vector<std::pair<double, double>> atoms(const Measure& m);

inline constexpr int kMaxMomentDegree = 16;
// Raw moment of degree 1..16. Degrees above 16 raise PreconditionError.
double moment(const Measure& m, int k);
double mean(const Measure& m);
double variance(const Measure& m);

Interval support_interval(const Measure& m);

Measure dilate(const Measure& m, double c);
Measure shift(const Measure& m, double a);

// Smallest x with F(x) >= p, up to a 1e-12 bracket.
double quantile(const Measure& m, double p);
std::vector<double> sample(const Measure& m, std::size_t count, Rng& rng);

// Kolmogorov distance with an upper bound on how much the true supremum can
// exceed the reported value. resolution is 0 whenever the supremum is known to
// be attained on the evaluated points (any pair involving a discrete law).
struct KolmogorovResult {
  double distance = 0.0;
  double resolution = 0.0;
  double location = 0.0;
};
KolmogorovResult kolmogorov(const Measure& a, const Measure& b);
double kolmogorov_distance(const Measure& a, const Measure& b);
// Distance to a continuous reference CDF given as a callable. The reference
// is sampled on `sweep` uniform points over `support` in addition to the
// measure's own break points.
KolmogorovResult kolmogorov(const Measure& a,
                            const std::function<double(double)>& reference_cdf,
                            Interval support, int sweep = 4096);

// Plain-text key = value block, 17 significant digits.
void write_measure(std::ostream& os, const Measure& m);
Measure read_measure(std::istream& is);
void save_measure(const std::string& path, const Measure& m);
Measure load_measure(const std::string& path);

}  // namespace freelab
