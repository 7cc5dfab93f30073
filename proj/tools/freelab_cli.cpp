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


// freelab command line driver. Every subcommand takes --seed, --out and
// --config; config keys are "subcommand.option" and fill in options that
// were not given on the command line.
//
// Exit codes: 0 success, 2 precondition or gate failure (including a
// violated deterministic inequality), 3 non-convergence, 4 I/O, parse or
// configuration error.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "freelab/bai_bounds.hpp"
#include "freelab/config.hpp"
#include "freelab/csv.hpp"
#include "freelab/errors.hpp"
#include "freelab/free_conv.hpp"
#include "freelab/matrix_lab.hpp"
#include "freelab/measure.hpp"
#include "freelab/parallel.hpp"
#include "freelab/random.hpp"
#include "freelab/rates.hpp"
#include "freelab/transforms.hpp"

namespace {

using namespace freelab;

constexpr int kExitPrecondition = 2;
constexpr int kExitConvergence = 3;
constexpr int kExitIo = 4;

struct Common {
  std::uint64_t seed = 1;
  std::string out = "-";
  std::string config;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--seed", c.seed, "Base seed for random draws");
  sub->add_option("--out", c.out, "Output path, '-' for stdout");
  sub->add_option("--config", c.config, "key = value file (subcommand.option)");
}

// Output sink that is either stdout or a file opened on first use.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw IoError("cannot open output file " + path);
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }
  ~Sink() {
    if (file_) file_->flush();
  }

 private:
  std::unique_ptr<std::ofstream> file_;
};

Measure load_or_semicircle(const std::string& path) {
  return path.empty() ? Measure::semicircle() : load_measure(path);
}

void write_law_table(std::ostream& os, const Measure& m, Interval range,
                     int points) {
  CsvWriter w(os);
  w.header({"x", "density", "cdf"});
  for (int i = 0; i < points; ++i) {
    const double x = range.lo + range.width() * i / std::max(1, points - 1);
    w.row({x, m.is_discrete() ? 0.0 : density(m, x), cdf(m, x)});
  }
}

// ---- semicircle ---------------------------------------------------------

struct SemicircleArgs {
  double variance = 1.0;
  double center = 0.0;
  int points = 201;
  std::string save;
};

void run_semicircle(const Common& c, const SemicircleArgs& a) {
  const Measure m = Measure::semicircle(a.variance, a.center);
  if (!a.save.empty()) save_measure(a.save, m);
  Sink sink(c.out);
  CsvWriter w(sink.stream());
  w.run_metadata(c.seed, 0, 0);
  w.metadata("variance", a.variance);
  w.metadata("center", a.center);
  write_law_table(sink.stream(), m, support_interval(m), a.points);
}

// ---- convolve -----------------------------------------------------------

struct ConvolveArgs {
  std::string a, b, save;
  int resolution = 32768;
  double eta = 0.0;
  int points = 401;
};

void run_convolve(const Common& c, const ConvolveArgs& a) {
  const Measure m1 = load_measure(a.a);
  const Measure m2 = load_measure(a.b);
  ConvolutionOptions opts;
  opts.resolution = a.resolution;
  if (a.eta > 0.0) opts.eta = a.eta;
  const ConvolutionResult r = free_convolve(m1, m2, opts);
  if (!a.save.empty()) save_measure(a.save, r.measure);
  Sink sink(c.out);
  CsvWriter w(sink.stream());
  w.run_metadata(c.seed, 2, 0);
  w.metadata("eta", r.eta);
  w.metadata("window_lo", r.window.lo);
  w.metadata("window_hi", r.window.hi);
  w.metadata("unconverged", static_cast<std::int64_t>(r.subordination.failures()));
  w.metadata("worst_residual", r.subordination.worst_residual());
  write_law_table(sink.stream(), r.measure, r.window, a.points);
}

// ---- clt ----------------------------------------------------------------

struct CltArgs {
  std::string base, save;
  std::vector<int> ns{4, 8, 16, 32, 64};
  int resolution = 16384;
  std::string strategy = "power";
};

void run_clt(const Common& c, const CltArgs& a) {
  const Measure base = load_measure(a.base);
  CltOptions opts;
  opts.resolution = a.resolution;
  if (a.strategy == "fold") {
    opts.strategy = FoldStrategy::kBinaryFold;
  } else if (a.strategy != "power") {
    throw IoError("clt: --strategy must be power or fold");
  }
  std::vector<int> ns = a.ns;
  std::sort(ns.begin(), ns.end());
  const auto series = clt_delta_series(base, ns, opts);
  if (!a.save.empty()) {
    save_measure(a.save, free_clt_distribution(base, ns.back(), opts).measure);
  }
  Sink sink(c.out);
  CsvWriter w(sink.stream());
  w.run_metadata(c.seed, ns.back(), 0);
  w.metadata("base", base.describe());
  write_rate_series(sink.stream(), series);
}

// ---- bai ----------------------------------------------------------------

struct BaiArgs {
  std::string mu, nu, variant = "both";
  int gue = 0;
  double v = 0.1, eps = 1.2, a = 2.0, A = 8.0, B = 3.0;
};

void run_bai(const Common& c, const BaiArgs& a) {
  Measure mu = Measure::semicircle();
  if (a.gue > 0) {
    Rng rng(derive_seed(c.seed, 0, 0));
    const RVector ev = hermitian_eigenvalues(sample_gue(a.gue, rng));
    mu = Measure::empirical({ev.data(), ev.data() + ev.size()});
  } else if (!a.mu.empty()) {
    mu = load_measure(a.mu);
  } else {
    throw PreconditionError("bai: give --mu <measure file> or --gue <N>");
  }
  const Measure nu = load_or_semicircle(a.nu);
  if (a.variant != "both" && a.variant != "theorem" && a.variant != "corollary") {
    throw IoError("bai: --variant must be theorem, corollary or both");
  }
  const KolmogorovResult d = kolmogorov(mu, nu);
  Sink sink(c.out);
  CsvWriter w(sink.stream());
  w.run_metadata(c.seed, 0, a.gue);
  w.metadata("kolmogorov", d.distance);
  w.metadata("kolmogorov_resolution", d.resolution);
  write_bai_header(sink.stream());
  if (a.variant != "corollary") {
    write_bai_row(sink.stream(),
                  bai_bound_theorem(mu, nu, BaiParameters::make(a.v, a.eps, a.a)));
  }
  if (a.variant != "theorem") {
    write_bai_row(sink.stream(),
                  bai_bound_corollary(mu, nu, BaiParameters::make(a.v, a.eps, a.a, a.A, a.B)));
  }
}

// ---- gue-selfnorm -------------------------------------------------------

struct SelfNormArgs {
  std::vector<int> ns{4, 16, 64};
  int N = 512;
  int replicas = 5;
  double z_re = 0.0, z_im = 1.0;
};

void run_selfnorm(const Common& c, const SelfNormArgs& a) {
  const HalfPlanePoint z(a.z_re, a.z_im);
  std::vector<std::pair<int, int>> jobs;
  for (int n : a.ns) {
    for (int r = 0; r < a.replicas; ++r) jobs.emplace_back(n, r);
  }
  const auto reps = parallel_map(jobs.size(), [&](std::size_t i) {
    return gue_selfnorm_replica(jobs[i].first, a.N, c.seed, jobs[i].second, z);
  });
  Sink sink(c.out);
  CsvWriter w(sink.stream());
  w.run_metadata(c.seed, a.ns.empty() ? 0 : a.ns.back(), a.N);
  w.metadata("z_re", a.z_re);
  w.metadata("z_im", a.z_im);
  w.header({"seed", "n", "N", "replica", "statistic", "value"});
  for (const auto& r : reps) {
    const auto seed = static_cast<std::int64_t>(r.seed);
    auto emit = [&](const char* name, double value) {
      w.row({seed, std::int64_t{r.n}, std::int64_t{r.N}, std::int64_t{r.replica},
             std::string(name), value});
    };
    emit("resolvent_re", r.resolvent.real());
    emit("resolvent_im", r.resolvent.imag());
    emit("deviation", r.deviation);
    emit("v2_min", r.v2_min);
    emit("v2_max", r.v2_max);
    emit("u_norm", r.u_norm);
  }
}

// ---- ineq ---------------------------------------------------------------

struct IneqArgs {
  int n = 8;
  int N = 64;
  std::string family = "gue";
  double slack = 0.2;
};

HermitianMatrix random_hermitian(int N, Rng& rng) {
  const double scale = std::pow(10.0, 2.0 * rng.uniform() - 1.0);
  CMatrix m(N, N);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) m(i, j) = scale * cplx(rng.normal(), rng.normal());
  }
  return HermitianMatrix::hermitize(m);
}

int run_ineq(const Common& c, const IneqArgs& a) {
  if (a.family != "gue" && a.family != "random") {
    throw IoError("ineq: --family must be gue or random");
  }
  std::vector<HermitianMatrix> xs;
  for (int i = 0; i < a.n; ++i) {
    Rng rng(derive_seed(c.seed, 0, static_cast<std::uint64_t>(i)));
    xs.push_back(a.family == "gue" ? sample_gue(a.N, rng) : random_hermitian(a.N, rng));
  }
  InequalityOptions opts;
  opts.voiculescu_slack = a.slack;
  const InequalityReport rep = check_operator_inequalities(xs, opts);
  Sink sink(c.out);
  CsvWriter w(sink.stream());
  w.run_metadata(c.seed, a.n, a.N);
  w.metadata("family", a.family);
  for (const auto& ch : rep.checks) {
    if (!ch.note.empty()) w.metadata(ch.name + "_note", ch.note);
  }
  w.header({"check", "status", "lhs", "rhs", "margin", "statistical"});
  for (const auto& ch : rep.checks) {
    const char* status = ch.status == CheckStatus::kHolds      ? "holds"
                         : ch.status == CheckStatus::kViolated ? "violated"
                                                               : "not-applicable";
    w.row({ch.name, std::string(status), ch.lhs, ch.rhs, ch.margin,
           std::int64_t{ch.statistical}});
    if (ch.statistical && ch.status == CheckStatus::kViolated) {
      std::cerr << "statistical check " << ch.name << " violated: seed "
                << c.seed << ", margin " << ch.margin << '\n';
    }
  }
  if (!rep.deterministic_ok()) {
    std::cerr << "error: a deterministic inequality is violated\n";
    return kExitPrecondition;
  }
  return 0;
}

// ---- rate-fit -----------------------------------------------------------

struct RateFitArgs {
  std::string in;
  bool with_log = false;
};

void run_rate_fit(const Common& c, const RateFitArgs& a) {
  std::ifstream in(a.in);
  if (!in) throw IoError("cannot open " + a.in);
  const auto series = read_rate_series(in);
  const RateFit f = rate_fit(series, a.with_log);
  Sink sink(c.out);
  CsvWriter w(sink.stream());
  w.run_metadata(c.seed, static_cast<std::int64_t>(series.size()), 0);
  w.header({"exponent", "log_factor_included", "constant", "max_abs_residual"});
  w.row({f.exponent, std::int64_t{f.log_factor_included}, f.constant,
         f.max_abs_residual});
}

// ---- atoms --------------------------------------------------------------

struct AtomsArgs {
  std::string a, b;
  int n = 0;
};

void run_atoms(const Common& c, const AtomsArgs& a) {
  const AtomList l1 = AtomList::of(load_measure(a.a));
  AtomList out;
  if (a.n > 0) {
    out = nfold_atoms(l1, a.n);
  } else if (!a.b.empty()) {
    out = convolution_atoms(l1, AtomList::of(load_measure(a.b)));
  } else {
    throw PreconditionError("atoms: give --b <measure file> or --n <count>");
  }
  Sink sink(c.out);
  CsvWriter w(sink.stream());
  w.run_metadata(c.seed, a.n, 0);
  w.header({"location", "mass"});
  for (std::size_t i = 0; i < out.size(); ++i) {
    w.row({out.locations[i], out.masses[i]});
  }
}

// ---- config injection ---------------------------------------------------

Config::Schema schema_of(const CLI::App& app) {
  Config::Schema s;
  for (const CLI::App* sub : app.get_subcommands({})) {
    auto& opts = s[sub->get_name()];
    for (const CLI::Option* o : sub->get_options()) {
      for (const auto& name : o->get_lnames()) {
        if (name != "help" && name != "config") opts.insert(name);
      }
    }
  }
  return s;
}

bool given(const std::vector<std::string>& args, const std::string& opt) {
  const std::string flag = "--" + opt;
  return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
    return a == flag || a.rfind(flag + "=", 0) == 0;
  });
}

// Appends "--option=value" for config entries of the chosen subcommand that
// the command line does not set.
std::vector<std::string> inject_config(const CLI::App& app,
                                       std::vector<std::string> args) {
  std::string path, sub;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    if (sub.empty() && args[i].rfind("-", 0) != 0) {
      for (const CLI::App* s : app.get_subcommands({})) {
        if (s->get_name() == args[i]) sub = args[i];
      }
    }
  }
  if (path.empty()) return args;
  const Config cfg = Config::load(path);
  cfg.validate(schema_of(app));
  for (const auto& [opt, value] : cfg.section(sub)) {
    if (given(args, opt)) continue;
    // The "=" form is accepted for flags ("--log=true") as well as options.
    args.push_back("--" + opt + "=" + value);
  }
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"free probability numerics and self-normalized sums", "freelab"};
  app.require_subcommand(1);

  Common common;
  SemicircleArgs sc;
  ConvolveArgs cv;
  CltArgs clt;
  BaiArgs bai;
  SelfNormArgs sn;
  IneqArgs iq;
  RateFitArgs rf;
  AtomsArgs at;

  auto* s_sc = app.add_subcommand("semicircle", "Table of a semicircle law");
  add_common(s_sc, common);
  s_sc->add_option("--variance", sc.variance);
  s_sc->add_option("--center", sc.center);
  s_sc->add_option("--points", sc.points)->check(CLI::PositiveNumber);
  s_sc->add_option("--save", sc.save, "Also write the measure file");

  auto* s_cv = app.add_subcommand("convolve", "Free convolution of two measure files");
  add_common(s_cv, common);
  s_cv->add_option("--a", cv.a)->required();
  s_cv->add_option("--b", cv.b)->required();
  s_cv->add_option("--resolution", cv.resolution)->check(CLI::PositiveNumber);
  s_cv->add_option("--eta", cv.eta, "Stieltjes inversion height (0: default)");
  s_cv->add_option("--points", cv.points)->check(CLI::PositiveNumber);
  s_cv->add_option("--save", cv.save, "Write the convolution as a measure file");

  auto* s_clt = app.add_subcommand("clt", "Free CLT distance series");
  add_common(s_clt, common);
  s_clt->add_option("--base", clt.base)->required();
  s_clt->add_option("--n", clt.ns)->delimiter(',');
  s_clt->add_option("--resolution", clt.resolution)->check(CLI::PositiveNumber);
  s_clt->add_option("--strategy", clt.strategy, "power or fold");
  s_clt->add_option("--save", clt.save, "Write the law for the largest n");

  auto* s_bai = app.add_subcommand("bai", "Kolmogorov bound breakdown for a pair");
  add_common(s_bai, common);
  s_bai->add_option("--mu", bai.mu);
  s_bai->add_option("--nu", bai.nu, "Default: standard semicircle");
  s_bai->add_option("--gue", bai.gue, "Use the spectrum of a seeded GUE(N) as mu");
  s_bai->add_option("--variant", bai.variant, "theorem, corollary or both");
  s_bai->add_option("--v", bai.v);
  s_bai->add_option("--eps", bai.eps);
  s_bai->add_option("--a", bai.a);
  s_bai->add_option("--A", bai.A);
  s_bai->add_option("--B", bai.B);

  auto* s_sn = app.add_subcommand("gue-selfnorm", "Self-normalized GUE sums");
  add_common(s_sn, common);
  s_sn->add_option("--n", sn.ns)->delimiter(',');
  s_sn->add_option("--N", sn.N)->check(CLI::PositiveNumber);
  s_sn->add_option("--replicas", sn.replicas)->check(CLI::PositiveNumber);
  s_sn->add_option("--z-re", sn.z_re);
  s_sn->add_option("--z-im", sn.z_im);

  auto* s_iq = app.add_subcommand("ineq", "Operator inequality report");
  add_common(s_iq, common);
  s_iq->add_option("--n", iq.n)->check(CLI::PositiveNumber);
  s_iq->add_option("--N", iq.N)->check(CLI::PositiveNumber);
  s_iq->add_option("--family", iq.family, "gue or random");
  s_iq->add_option("--slack", iq.slack);

  auto* s_rf = app.add_subcommand("rate-fit", "Fit a distance series");
  add_common(s_rf, common);
  s_rf->add_option("--in", rf.in)->required();
  s_rf->add_flag("--log", rf.with_log, "Include a log n factor");

  auto* s_at = app.add_subcommand("atoms", "Atoms of a free convolution");
  add_common(s_at, common);
  s_at->add_option("--a", at.a)->required();
  s_at->add_option("--b", at.b);
  s_at->add_option("--n", at.n, "n-fold power of --a instead");

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = inject_config(app, std::move(args));
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitIo;
  } catch (const freelab::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }

  try {
    if (*s_sc) run_semicircle(common, sc);
    if (*s_cv) run_convolve(common, cv);
    if (*s_clt) run_clt(common, clt);
    if (*s_bai) run_bai(common, bai);
    if (*s_sn) run_selfnorm(common, sn);
    if (*s_iq) return run_ineq(common, iq);
    if (*s_rf) run_rate_fit(common, rf);
    if (*s_at) run_atoms(common, at);
  } catch (const freelab::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    switch (e.kind()) {
      case ErrorKind::kPrecondition: return kExitPrecondition;
      case ErrorKind::kConvergence: return kExitConvergence;
      case ErrorKind::kIo: return kExitIo;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return 0;
}
