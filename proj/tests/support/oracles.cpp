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

#include "oracles.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <map>
#include <mutex>
#include <cmath>
#include <numbers>

namespace oracle {

constexpr double kPi = std::numbers::pi;

double simpson(const std::function<double(double)>& f, double lo, double hi,
               int panels) {
  if (panels % 2) ++panels;
  const double h = (hi - lo) / panels;
  double s = f(lo) + f(hi);
  for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * f(lo + i * h);
  return s * h / 3.0;
}

std::vector<std::uint64_t> catalan(int k) {
  std::vector<std::uint64_t> c(static_cast<std::size_t>(k + 1), 0);
  c[0] = 1;
  for (int m = 1; m <= k; ++m) {
    for (int i = 0; i < m; ++i) c[m] += c[i] * c[m - 1 - i];
  }
  return c;
}

double semicircle_cdf(double x) {
  if (x <= -2.0) return 0.0;
  if (x >= 2.0) return 1.0;
  const double top = std::asin(x / 2.0);
  return simpson([](double t) { return 2.0 / kPi * std::cos(t) * std::cos(t); },
                 -kPi / 2.0, top, 4000);
}

double semicircle_even_moment(int k) {
  return simpson(
      [k](double t) {
        const double x = 2.0 * std::sin(t);
        return std::pow(x, 2 * k) * 2.0 / kPi * std::cos(t) * std::cos(t);
      },
      -kPi / 2.0, kPi / 2.0, 20000);
}

double arcsine_cdf(double x) {
  if (x <= -2.0) return 0.0;
  if (x >= 2.0) return 1.0;
  return 0.5 + std::asin(x / 2.0) / kPi;
}

double kesten_mckay_density(int n, double x) {
  const double r2 = 4.0 * (n - 1.0);
  if (x * x >= r2) return 0.0;
  return n * std::sqrt(r2 - x * x) / (2.0 * kPi * (n * n - x * x));
}

double kesten_mckay_cdf(int n, double x) {
  // Cumulative Simpson table in the angle variable, built once per n; a
  // query adds a short Simpson piece from the nearest node below.
  constexpr int kNodes = 4096;
  static std::mutex mu;
  static std::map<int, std::vector<double>> tables;
  const double r = 2.0 * std::sqrt(n - 1.0);
  if (x <= -r) return 0.0;
  if (x >= r) return 1.0;
  auto f = [n, r](double t) {
    const double c = std::cos(t);
    const double s = std::sin(t);
    return n * r * r * c * c / (2.0 * kPi * (n * n - r * r * s * s));
  };
  const double h = kPi / kNodes;
  const std::vector<double>* table;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto& t = tables[n];
    if (t.empty()) {
      t.resize(kNodes + 1, 0.0);
      for (int k = 1; k <= kNodes; ++k) {
        const double a = -kPi / 2.0 + (k - 1) * h;
        t[k] = t[k - 1] + simpson(f, a, a + h, 16);
      }
    }
    table = &t;
  }
  const double theta = std::asin(x / r);
  const int k = std::clamp(static_cast<int>((theta + kPi / 2.0) / h), 0, kNodes - 1);
  const double a = -kPi / 2.0 + k * h;
  return (*table)[k] + simpson(f, a, theta, 16);
}

double marchenko_pastur_density(double y, double x) {
  const double a = (1.0 - std::sqrt(y)) * (1.0 - std::sqrt(y));
  const double b = (1.0 + std::sqrt(y)) * (1.0 + std::sqrt(y));
  if (x <= a || x >= b) return 0.0;
  return std::sqrt((b - x) * (x - a)) / (2.0 * kPi * y * x);
}

double kolmogorov_atomic(std::vector<std::pair<double, double>> a,
                         std::vector<std::pair<double, double>> b) {
  std::vector<double> xs;
  for (auto& p : a) xs.push_back(p.first);
  for (auto& p : b) xs.push_back(p.first);
  std::sort(xs.begin(), xs.end());
  auto cdf = [](const std::vector<std::pair<double, double>>& m, double x,
                bool closed) {
    double s = 0.0;
    for (auto& [p, w] : m) {
      if (p < x || (closed && p == x)) s += w;
    }
    return s;
  };
  double d = 0.0;
  for (double x : xs) {
    d = std::max(d, std::abs(cdf(a, x, true) - cdf(b, x, true)));
    d = std::max(d, std::abs(cdf(a, x, false) - cdf(b, x, false)));
  }
  return d;
}

double kolmogorov_sample(std::vector<double> xs,
                         const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max(d, std::abs((i + 1) / n - f));
    d = std::max(d, std::abs(i / n - f));
  }
  return d;
}

Eigen::VectorXd eigenvalues(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

Eigen::VectorXd eigenvalues(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

Eigen::MatrixXcd gue(int N, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXcd a(N, N);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) a(i, j) = cplx(g(rng), g(rng));
  }
  // (A + A*)/2 has off-diagonal variance 1/2 per part and diagonal N(0,1).
  Eigen::MatrixXcd h = 0.5 * (a + a.adjoint());
  return h / std::sqrt(static_cast<double>(N));
}

Eigen::MatrixXd haar_orthogonal(int N, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd a(N, N);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) a(i, j) = g(rng);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd& r = qr.matrixQR();
  for (int j = 0; j < N; ++j) {
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  }
  return q;
}

Eigen::MatrixXcd haar_unitary(int N, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXcd a(N, N);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) a(i, j) = cplx(g(rng), g(rng));
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd& r = qr.matrixQR();
  for (int j = 0; j < N; ++j) {
    const double m = std::abs(r(j, j));
    if (m > 0.0) q.col(j) *= r(j, j) / m;
  }
  return q;
}

Eigen::MatrixXcd random_hermitian(int N, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(-2.0, 1.0);
  Eigen::MatrixXcd a(N, N);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      a(i, j) = std::pow(10.0, u(rng)) * cplx(g(rng), g(rng));
    }
  }
  return 0.5 * (a + a.adjoint());
}

}  // namespace oracle
