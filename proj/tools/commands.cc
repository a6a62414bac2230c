// Copyright 2026 The PBDP Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//


#include "tools/commands.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/string_view.h"
#include "pbdp/accounting.h"
#include "pbdp/config.h"
#include "pbdp/kernels.h"
#include "pbdp/ldp_grr.h"
#include "pbdp/pb_mech.h"
#include "pbdp/planner.h"
#include "pbdp/status_macros.h"
#include "tbb/parallel_for.h"
#include "tbb/task_arena.h"

namespace pbdp::cli {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string Exact(double v) { return absl::StrFormat("%.17g", v); }

std::string ModeName(PrivacyMode mode) {
  return mode == PrivacyMode::kRdp ? "rdp" : "dp";
}

std::vector<double> Range(double first, double last, double step) {
  std::vector<double> out;
  const int n = static_cast<int>(std::floor((last - first) / step + 1e-9));
  for (int i = 0; i <= n; ++i) out.push_back(first + i * step);
  return out;
}

absl::StatusOr<int> ReadThreads(const FlatConfig& config) {
  const int hw = std::max(1u, std::thread::hardware_concurrency());
  PBDP_ASSIGN_OR_RETURN(const int64_t threads,
                        config.GetInt("threads", std::min(hw, 8)));
  if (threads < 1) return absl::InvalidArgumentError("threads must be >= 1");
  return static_cast<int>(threads);
}

// Runs fn(i) for i in [0, n) on at most `threads` workers. Results land at
// their own index, so output order never depends on scheduling.
template <typename T, typename Fn>
absl::StatusOr<std::vector<T>> ParallelMap(int n, int threads, Fn fn) {
  std::vector<absl::StatusOr<T>> results(n, absl::UnknownError("not run"));
  tbb::task_arena arena(threads);
  arena.execute([&] {
    tbb::parallel_for(0, n, [&](int i) { results[i] = fn(i); });
  });
  std::vector<T> out;
  out.reserve(n);
  for (auto& r : results) {
    if (!r.ok()) return r.status();
    out.push_back(*std::move(r));
  }
  return out;
}

absl::StatusOr<RegionKind> ReadRegionKind(const FlatConfig& config) {
  PBDP_ASSIGN_OR_RETURN(const std::string kind,
                        config.GetString("region.kind", "absolute"));
  return ParseRegionKind(kind);
}

// Kernel, region and q as written by `plan`.
struct Mechanism {
  KernelSpec kernel;
  RegionSpec region;
  double q = 0.0;
};

absl::StatusOr<Mechanism> ReadMechanism(const FlatConfig& config) {
  Mechanism m;
  PBDP_ASSIGN_OR_RETURN(m.kernel, KernelSpecFromConfig(config));
  PBDP_ASSIGN_OR_RETURN(m.region, RegionSpecFromConfig(config));
  PBDP_ASSIGN_OR_RETURN(m.q, config.GetDouble("q"));
  if (!(m.q >= 0.0 && m.q <= 1.0)) {
    return absl::InvalidArgumentError("q must lie in [0, 1]");
  }
  return m;
}

std::string PrivacyCell(bool feasible, double eps) {
  return feasible ? FormatCell(eps) : "infeasible";
}

}  // namespace

std::string CsvTable::ToString() const {
  std::string out = absl::StrJoin(header, ",");
  out += "\n";
  for (const auto& row : rows) {
    absl::StrAppend(&out, absl::StrJoin(row, ","), "\n");
  }
  return out;
}

std::string FormatCell(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return absl::StrFormat("%.12g", v);
}

absl::Status ApplyGlobalFlags(const GlobalFlags& flags, FlatConfig& config) {
  if (flags.seed) config.Set("seed", absl::StrCat(*flags.seed));
  if (flags.mode) {
    if (*flags.mode != "dp" && *flags.mode != "rdp") {
      return absl::InvalidArgumentError("--mode must be dp or rdp");
    }
    config.Set("mode", *flags.mode);
  }
  if (flags.delta) config.Set("delta", Exact(*flags.delta));
  if (flags.alpha) config.Set("alpha", Exact(*flags.alpha));
  return absl::OkStatus();
}

absl::Status ApplyOverride(absl::string_view assignment, FlatConfig& config) {
  const size_t eq = assignment.find('=');
  if (eq == absl::string_view::npos) {
    return absl::InvalidArgumentError(
        absl::StrCat("override '", assignment, "' is not key=value"));
  }
  const absl::string_view key =
      absl::StripAsciiWhitespace(assignment.substr(0, eq));
  if (key.empty()) return absl::InvalidArgumentError("override has no key");
  config.Set(key, absl::StripAsciiWhitespace(assignment.substr(eq + 1)));
  return absl::OkStatus();
}

absl::StatusOr<PrivacyMode> ReadMode(const FlatConfig& config) {
  PBDP_ASSIGN_OR_RETURN(const std::string mode,
                        config.GetString("mode", "dp"));
  if (mode == "dp") return PrivacyMode::kApproxDp;
  if (mode == "rdp") return PrivacyMode::kRdp;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown mode '", mode, "'"));
}

absl::StatusOr<PlanRequest> ReadPlanRequest(const FlatConfig& config) {
  PlanRequest req;
  PBDP_ASSIGN_OR_RETURN(const std::string family,
                        config.GetString("family", "gaussian"));
  PBDP_ASSIGN_OR_RETURN(req.kernel_family, ParseKernelFamily(family));
  PBDP_ASSIGN_OR_RETURN(req.sensitivity, config.GetDouble("sensitivity", 1.0));
  PBDP_ASSIGN_OR_RETURN(req.rho, config.GetDouble("rho", 0.9));
  PBDP_ASSIGN_OR_RETURN(req.mode, ReadMode(config));
  PBDP_ASSIGN_OR_RETURN(req.delta, config.GetDouble("delta", 1e-5));
  PBDP_ASSIGN_OR_RETURN(req.alpha, config.GetDouble("alpha", 2.0));
  PBDP_ASSIGN_OR_RETURN(req.eps_max, config.GetDouble("eps_max", 20.0));
  PBDP_ASSIGN_OR_RETURN(req.tol, config.GetDouble("tol", 1e-4));
  PBDP_ASSIGN_OR_RETURN(const int64_t t, config.GetInt("compositions", 1));
  req.compositions = static_cast<int>(t);
  PBDP_ASSIGN_OR_RETURN(const std::string calibration,
                        config.GetString("calibration", "analytic"));
  PBDP_ASSIGN_OR_RETURN(req.calibration, ParseCalibration(calibration));
  if (config.Has("region.tau") || config.Has("region.tau_l")) {
    PBDP_ASSIGN_OR_RETURN(req.region, RegionSpecFromConfig(config));
  } else {
    // No explicit bounds: a region of the given width at its narrowest.
    PBDP_ASSIGN_OR_RETURN(const RegionKind kind, ReadRegionKind(config));
    PBDP_ASSIGN_OR_RETURN(const double width, config.GetDouble("width", 10.0));
    PBDP_ASSIGN_OR_RETURN(const double theta,
                          config.GetDouble("region.theta", 0.1));
    req.region = RegionForWidth(kind, width, theta);
  }
  return req;
}

RegionSpec RegionForWidth(RegionKind kind, double width, double theta) {
  RegionSpec r;
  r.kind = kind;
  if (kind == RegionKind::kFixed) {
    r.tau_l = -width / 2;
    r.tau_u = width / 2;
  } else {
    r.tau = width / 2;
    if (kind == RegionKind::kRelative) r.theta = theta;
  }
  return r;
}

absl::StatusOr<CommandResult> RunPlan(const FlatConfig& config) {
  PBDP_ASSIGN_OR_RETURN(const PlanRequest req, ReadPlanRequest(config));
  PBDP_ASSIGN_OR_RETURN(const PlanResult plan, OptimizeEps0(req));
  FlatConfig record;
  KernelSpec kernel = plan.kernel;
  kernel.calibration = Calibration::kExplicitScale;
  kernel.sensitivity = req.sensitivity;
  kernel.family = req.kernel_family;
  KernelSpecToConfig(kernel, record);
  RegionSpecToConfig(req.region, record);
  record.Set("feasible", plan.feasible ? "true" : "false");
  record.Set("rho", Exact(req.rho));
  record.Set("eps0_opt", Exact(plan.eps0_opt));
  record.Set("q", Exact(plan.q_opt));
  record.Set("min_pS", Exact(plan.min_pS));
  record.Set("L1", Exact(plan.leakage.L1));
  record.Set("L2", Exact(plan.leakage.L2));
  record.Set("W1", Exact(plan.leakage.W1));
  record.Set("W2", Exact(plan.leakage.W2));
  record.Set("W3", Exact(plan.leakage.W3));
  record.Set("total_eps", Exact(plan.total.eps));
  record.Set("compositions", absl::StrCat(req.compositions));
  record.Set("mode", ModeName(req.mode));
  if (req.mode == PrivacyMode::kRdp) {
    record.Set("alpha", Exact(req.alpha));
  } else {
    record.Set("delta", Exact(req.delta));
  }
  CommandResult result;
  result.data = record.Serialize();
  result.report = plan.feasible
                      ? absl::StrFormat("eps0 = %.6g, q = %.6g, total eps = %.6g",
                                        plan.eps0_opt, plan.q_opt,
                                        plan.total.eps)
                      : "no feasible eps0 in (0, eps_max]";
  for (const std::string& note : plan.notes) {
    absl::StrAppend(&result.report, "\nnote: ", note);
  }
  return result;
}

absl::StatusOr<CommandResult> RunSweep(const FlatConfig& config) {
  PBDP_ASSIGN_OR_RETURN(PlanRequest base, ReadPlanRequest(config));
  PBDP_ASSIGN_OR_RETURN(const RegionKind kind, ReadRegionKind(config));
  PBDP_ASSIGN_OR_RETURN(const double theta,
                        config.GetDouble("region.theta", 0.1));
  PBDP_ASSIGN_OR_RETURN(const std::string variable,
                        config.GetString("sweep.variable", "width"));
  std::vector<double> values;
  double width = 0.0;
  if (variable == "width") {
    PBDP_ASSIGN_OR_RETURN(values,
                          config.GetDoubleList("sweep.values", Range(2, 20, 2)));
  } else if (variable == "rho") {
    PBDP_ASSIGN_OR_RETURN(
        values, config.GetDoubleList(
                    "sweep.values",
                    std::vector<double>{0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9,
                                        0.95, 0.99}));
    PBDP_ASSIGN_OR_RETURN(width, config.GetDouble("width", 2.0));
  } else {
    return absl::InvalidArgumentError(
        "sweep.variable must be width or rho");
  }
  if (values.empty()) return absl::InvalidArgumentError("empty sweep");
  PBDP_ASSIGN_OR_RETURN(const int threads, ReadThreads(config));

  auto point = [&](int i) -> absl::StatusOr<std::vector<std::string>> {
    PlanRequest req = base;
    if (variable == "width") {
      req.region = RegionForWidth(kind, values[i], theta);
    } else {
      req.region = RegionForWidth(kind, width, theta);
      req.rho = values[i];
    }
    PBDP_ASSIGN_OR_RETURN(const PlanResult pb, OptimizeEps0(req));
    PBDP_ASSIGN_OR_RETURN(const KernelOnlyResult kernel, KernelOnlyPlan(req));
    return std::vector<std::string>{
        FormatCell(values[i]), PrivacyCell(pb.feasible, pb.total.eps),
        PrivacyCell(kernel.feasible, kernel.total.eps), ModeName(req.mode)};
  };
  CsvTable table;
  table.header = {"x", "eps_pb", "eps_kernel", "mode"};
  PBDP_ASSIGN_OR_RETURN(
      table.rows,
      ParallelMap<std::vector<std::string>>(static_cast<int>(values.size()),
                                            threads, point));
  CommandResult result;
  result.data = table.ToString();
  result.report = absl::StrFormat("%d sweep points over %s (%s region)",
                                  values.size(), variable,
                                  RegionKindName(kind));
  result.table = std::move(table);
  return result;
}

absl::StatusOr<CommandResult> RunCompose(const FlatConfig& config) {
  FlatConfig defaults = config;
  // Defaults: rho 0.9, narrowest region width 10, sensitivity 3.
  if (!config.Has("sensitivity")) defaults.Set("sensitivity", "3");
  PBDP_ASSIGN_OR_RETURN(PlanRequest req, ReadPlanRequest(defaults));
  PBDP_ASSIGN_OR_RETURN(
      const std::vector<double> ts,
      config.GetDoubleList("compose.T", std::vector<double>{1, 10, 100, 1000}));
  PBDP_ASSIGN_OR_RETURN(const int threads, ReadThreads(config));
  for (double t : ts) {
    if (!(t >= 1) || t != std::floor(t)) {
      return absl::InvalidArgumentError("compose.T needs integers >= 1");
    }
  }
  CsvTable table;
  table.header = {"T", "eps_pb", "eps_kernel"};
  if (req.mode == PrivacyMode::kRdp) {
    // RDP composes additively, so one plan serves every T.
    req.compositions = 1;
    PBDP_ASSIGN_OR_RETURN(const PlanResult pb, OptimizeEps0(req));
    PBDP_ASSIGN_OR_RETURN(const KernelOnlyResult kernel, KernelOnlyPlan(req));
    for (double t : ts) {
      const size_t n = static_cast<size_t>(t);
      std::vector<std::string> row = {FormatCell(t), "infeasible",
                                      "infeasible"};
      if (pb.feasible) {
        PBDP_ASSIGN_OR_RETURN(
            const double e, ComposeRdp(std::vector<double>(n, pb.total.eps)));
        row[1] = FormatCell(e);
      }
      if (kernel.feasible) {
        PBDP_ASSIGN_OR_RETURN(
            const double e,
            ComposeRdp(std::vector<double>(n, kernel.total.eps)));
        row[2] = FormatCell(e);
      }
      table.rows.push_back(std::move(row));
    }
  } else {
    auto point = [&](int i) -> absl::StatusOr<std::vector<std::string>> {
      PlanRequest r = req;
      r.compositions = static_cast<int>(ts[i]);
      PBDP_ASSIGN_OR_RETURN(const PlanResult pb, OptimizeEps0(r));
      PBDP_ASSIGN_OR_RETURN(const KernelOnlyResult kernel, KernelOnlyPlan(r));
      return std::vector<std::string>{
          FormatCell(ts[i]), PrivacyCell(pb.feasible, pb.total.eps),
          PrivacyCell(kernel.feasible, kernel.total.eps)};
    };
    PBDP_ASSIGN_OR_RETURN(
        table.rows, ParallelMap<std::vector<std::string>>(
                        static_cast<int>(ts.size()), threads, point));
  }
  CommandResult result;
  result.data = table.ToString();
  result.report = absl::StrFormat("%d composition counts (%s)", ts.size(),
                                  ModeName(req.mode));
  result.table = std::move(table);
  return result;
}

double BoundedProfile(const KernelSpec& k, const RegionSpec& fixed_region,
                      double eps, int points) {
  const double lo = fixed_region.tau_l;
  const double hi = fixed_region.tau_u;
  const double h = (hi - lo) / (points - 1);
  auto divergence = [&](double a, double b) {
    const double za = KernelCdf(k, a, hi) - KernelCdf(k, a, lo);
    const double zb = KernelCdf(k, b, hi) - KernelCdf(k, b, lo);
    const double scale = std::exp(eps);
    double sum = 0.0;
    for (int i = 0; i < points; ++i) {
      const double y = lo + i * h;
      const double gap =
          KernelPdf(k, a, y) / za - scale * KernelPdf(k, b, y) / zb;
      if (gap > 0.0) sum += (i == 0 || i == points - 1 ? 0.5 : 1.0) * gap;
    }
    return sum * h;
  };
  // Answers range over the region, as for the boosted fixed case.
  double worst = 0.0;
  constexpr int kAnswers = 41;
  const double span = std::max(0.0, (hi - lo) - k.sensitivity);
  for (int j = 0; j < kAnswers; ++j) {
    const double a = lo + span * j / (kAnswers - 1);
    const double b = a + k.sensitivity;
    worst = std::max({worst, divergence(a, b), divergence(b, a)});
  }
  return std::min(worst, 1.0);
}

absl::StatusOr<CommandResult> RunFeasibility(const FlatConfig& config) {
  PBDP_ASSIGN_OR_RETURN(const double rho, config.GetDouble("rho", 0.8));
  PBDP_ASSIGN_OR_RETURN(const double eps0, config.GetDouble("eps0", 0.1));
  PBDP_ASSIGN_OR_RETURN(const double delta, config.GetDouble("delta", 1e-5));
  PBDP_ASSIGN_OR_RETURN(const double sensitivity,
                        config.GetDouble("sensitivity", 1.0));
  PBDP_ASSIGN_OR_RETURN(
      const std::vector<double> widths,
      config.GetDoubleList("feasibility.widths",
                           std::vector<double>{20, 100, 200}));
  PBDP_ASSIGN_OR_RETURN(
      const std::vector<double> eps_grid,
      config.GetDoubleList("feasibility.eps", Range(0.0, 2.0, 0.05)));
  PBDP_ASSIGN_OR_RETURN(const double sigma,
                        config.GetDouble("feasibility.sigma", 10.0));
  PBDP_ASSIGN_OR_RETURN(
      const std::vector<double> rhos,
      config.GetDoubleList("feasibility.rhos", Range(0.70, 0.98, 0.02)));
  PBDP_ASSIGN_OR_RETURN(
      const std::vector<double> l1_widths,
      config.GetDoubleList("feasibility.l1_widths",
                           std::vector<double>{20, 100}));
  PBDP_ASSIGN_OR_RETURN(
      const std::vector<double> l1_sensitivities,
      config.GetDoubleList("feasibility.l1_sensitivities",
                           std::vector<double>{1, 30}));
  PBDP_ASSIGN_OR_RETURN(
      const std::vector<double> alphas,
      config.GetDoubleList("feasibility.alphas", std::vector<double>{2, 10}));
  PBDP_ASSIGN_OR_RETURN(const int threads, ReadThreads(config));

  CsvTable table;
  table.header = {"panel", "series", "width", "sensitivity", "alpha", "x",
                  "y"};
  // Profile panel: Gaussian kernel calibrated to (eps0, delta).
  KernelSpec kernel;
  kernel.sensitivity = sensitivity;
  kernel.eps0 = eps0;
  kernel.delta0 = delta;
  kernel.calibration = Calibration::kAnalytic;
  PBDP_ASSIGN_OR_RETURN(kernel, CalibrateKernel(kernel));
  for (double width : widths) {
    const RegionSpec region = RegionForWidth(RegionKind::kFixed, width, 0.0);
    PBDP_ASSIGN_OR_RETURN(const BoostParams boost,
                          ComputeBoostParams(kernel, region, rho));
    if (boost.q >= kMaxBoostingRate) {
      return absl::FailedPreconditionError(absl::StrFormat(
          "width %g cannot reach rho = %g without q = 1", width, rho));
    }
    auto pb_row = [&](int i) -> absl::StatusOr<std::vector<std::string>> {
      PBDP_ASSIGN_OR_RETURN(const double d,
                            PbProfile(kernel, region, boost.q, eps_grid[i]));
      return std::vector<std::string>{"profile", "pb", FormatCell(width),
                                      FormatCell(sensitivity), "",
                                      FormatCell(eps_grid[i]), FormatCell(d)};
    };
    auto bounded_row =
        [&](int i) -> absl::StatusOr<std::vector<std::string>> {
      return std::vector<std::string>{
          "profile", "bounded", FormatCell(width), FormatCell(sensitivity), "",
          FormatCell(eps_grid[i]),
          FormatCell(BoundedProfile(kernel, region, eps_grid[i]))};
    };
    const int n = static_cast<int>(eps_grid.size());
    PBDP_ASSIGN_OR_RETURN(auto pb_rows,
                          ParallelMap<std::vector<std::string>>(n, threads,
                                                                pb_row));
    PBDP_ASSIGN_OR_RETURN(auto bounded_rows,
                          ParallelMap<std::vector<std::string>>(n, threads,
                                                                bounded_row));
    for (auto& r : pb_rows) table.rows.push_back(std::move(r));
    for (auto& r : bounded_rows) table.rows.push_back(std::move(r));
  }
  // Extra-leakage panel: fixed sigma, RDP loss above the kernel's.
  for (double width : l1_widths) {
    const RegionSpec region = RegionForWidth(RegionKind::kFixed, width, 0.0);
    for (double s : l1_sensitivities) {
      KernelSpec k;
      k.scale = sigma;
      k.sensitivity = s;
      for (double alpha : alphas) {
        PBDP_ASSIGN_OR_RETURN(const double kernel_rdp, KernelRdp(k, alpha));
        for (double r : rhos) {
          PBDP_ASSIGN_OR_RETURN(const BoostParams boost,
                                ComputeBoostParams(k, region, r));
          PBDP_ASSIGN_OR_RETURN(const double total,
                                PbRdp(k, region, boost.q, alpha));
          table.rows.push_back({"extra_leakage", "L1", FormatCell(width),
                                FormatCell(s), FormatCell(alpha),
                                FormatCell(r), FormatCell(total - kernel_rdp)});
        }
      }
    }
  }
  CommandResult result;
  result.data = table.ToString();
  result.report = absl::StrFormat(
      "profile curves for %d widths (sigma %.6g); extra leakage at sigma %g",
      widths.size(), kernel.scale, sigma);
  result.table = std::move(table);
  return result;
}

absl::StatusOr<CommandResult> RunBench(const FlatConfig& config) {
  PBDP_ASSIGN_OR_RETURN(PlanRequest req, ReadPlanRequest(config));
  PBDP_ASSIGN_OR_RETURN(
      const std::vector<double> sizes,
      config.GetDoubleList("bench.sizes", Range(10, 50, 10)));
  PBDP_ASSIGN_OR_RETURN(const int64_t samples,
                        config.GetInt("bench.samples", 10000));
  PBDP_ASSIGN_OR_RETURN(const int64_t iterations,
                        config.GetInt("bench.iterations", 100));
  PBDP_ASSIGN_OR_RETURN(const int64_t seed, config.GetInt("seed", 1));
  if (samples < 1 || iterations < 1) {
    return absl::InvalidArgumentError("bench needs samples, iterations >= 1");
  }
  std::vector<PlanResult> plans;
  std::string report;
  for (double size : sizes) {
    req.region = RegionForWidth(RegionKind::kAbsolute, size, 0.0);
    PBDP_ASSIGN_OR_RETURN(PlanResult plan, OptimizeEps0(req));
    if (!plan.feasible) {
      return absl::FailedPreconditionError(
          absl::StrFormat("no feasible plan at |S| = %g", size));
    }
    absl::StrAppendFormat(&report, "|S| = %g: q = %.6g, sigma = %.6g\n", size,
                          plan.q_opt, plan.kernel.scale);
    plans.push_back(std::move(plan));
  }
  using Clock = std::chrono::steady_clock;
  const size_t m = sizes.size();
  std::vector<double> kernel_ns(m), reject_ns(m), inverse_ns(m);
  double sink = 0.0;
  // Sizes are interleaved within each iteration so that clock drift and
  // cache warm-up hit every size alike. Iteration 0 is a discarded warm-up.
  for (int64_t it = 0; it <= iterations; ++it) {
    const uint64_t s = static_cast<uint64_t>(seed) + it;
    for (size_t j = 0; j < m; ++j) {
      const KernelSpec& k = plans[j].kernel;
      const RegionSpec region =
          RegionForWidth(RegionKind::kAbsolute, sizes[j], 0.0);
      auto t0 = Clock::now();
      std::mt19937_64 engine(s);
      std::normal_distribution<double> normal(0.0, k.scale);
      std::vector<double> noise(samples);
      for (double& x : noise) x = normal(engine);
      auto t1 = Clock::now();
      PBDP_ASSIGN_OR_RETURN(const auto rejected,
                            PbSample(k, region, plans[j].q_opt, 0.0, s,
                                     samples, SamplerKind::kRejection));
      auto t2 = Clock::now();
      PBDP_ASSIGN_OR_RETURN(const auto inverted,
                            PbSample(k, region, plans[j].q_opt, 0.0, s,
                                     samples, SamplerKind::kInverseTransform));
      auto t3 = Clock::now();
      sink += noise.back() + rejected.back() + inverted.back();
      if (it == 0) continue;
      kernel_ns[j] += std::chrono::duration<double, std::nano>(t1 - t0).count();
      reject_ns[j] += std::chrono::duration<double, std::nano>(t2 - t1).count();
      inverse_ns[j] +=
          std::chrono::duration<double, std::nano>(t3 - t2).count();
    }
  }
  if (!std::isfinite(sink)) return absl::InternalError("non-finite sample");
  CsvTable table;
  table.header = {"S", "kernel_ns", "pb_reject_ns", "pb_inverse_ns"};
  const double n = static_cast<double>(iterations);
  for (size_t j = 0; j < m; ++j) {
    table.rows.push_back({FormatCell(sizes[j]), FormatCell(kernel_ns[j] / n),
                          FormatCell(reject_ns[j] / n),
                          FormatCell(inverse_ns[j] / n)});
  }
  CommandResult result;
  result.data = table.ToString();
  result.report = report;
  result.table = std::move(table);
  return result;
}

absl::StatusOr<CommandResult> RunLdp(const FlatConfig& config) {
  std::vector<int> ages;
  std::string source;
  if (config.Has("data")) {
    PBDP_ASSIGN_OR_RETURN(const std::string path, config.GetString("data"));
    PBDP_ASSIGN_OR_RETURN(const AgeData data, LoadAdultAges(path));
    ages = data.ages;
    source = absl::StrFormat("%s: %d rows, %d malformed dropped", path,
                             ages.size(), data.malformed_rows);
  } else {
    PBDP_ASSIGN_OR_RETURN(const bool synthetic,
                          config.GetBool("synthetic", false));
    if (!synthetic) {
      return absl::InvalidArgumentError(
          "ldp needs data = <path> or synthetic = true");
    }
    PBDP_ASSIGN_OR_RETURN(const int64_t n, config.GetInt("synthetic.n", 45222));
    PBDP_ASSIGN_OR_RETURN(const int64_t seed, config.GetInt("seed", 1));
    ages = SyntheticAdultAges(static_cast<int>(n), static_cast<uint64_t>(seed));
    source = absl::StrFormat("synthetic ages: %d rows", ages.size());
  }
  PBDP_ASSIGN_OR_RETURN(const int64_t region_size,
                        config.GetInt("region_size", 10));
  PBDP_ASSIGN_OR_RETURN(const double eps, config.GetDouble("eps", 5.0));
  PBDP_ASSIGN_OR_RETURN(
      const std::vector<double> grid,
      config.GetDoubleList("eps0", Range(0.0, eps, eps / 20)));
  PBDP_ASSIGN_OR_RETURN(const int64_t trials, config.GetInt("trials", 100));
  PBDP_ASSIGN_OR_RETURN(const int64_t seed, config.GetInt("seed", 1));
  PBDP_ASSIGN_OR_RETURN(
      const std::vector<MseRow> rows,
      MseSweep(AgesToValues(ages), kAgeDomainSize,
               static_cast<int>(region_size), eps, grid,
               static_cast<int>(trials), static_cast<uint64_t>(seed)));
  CsvTable table;
  table.header = {"eps0", "mse_category", "mse_value"};
  double max_c = 0, max_v = 0;
  for (const MseRow& r : rows) {
    table.rows.push_back({FormatCell(r.eps0), FormatCell(r.mse_category),
                          FormatCell(r.mse_value)});
    max_c = std::max(max_c, r.mse_category);
    if (std::isfinite(r.mse_value)) max_v = std::max(max_v, r.mse_value);
  }
  size_t best_c = 0, best_v = 0, best_t = 0;
  double best_tradeoff = kInf;
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].mse_category < rows[best_c].mse_category) best_c = i;
    if (rows[i].mse_value < rows[best_v].mse_value) best_v = i;
    // Each curve scaled by its largest finite value, then summed.
    const double tradeoff =
        rows[i].mse_category / max_c + rows[i].mse_value / max_v;
    if (tradeoff < best_tradeoff) {
      best_tradeoff = tradeoff;
      best_t = i;
    }
  }
  CommandResult result;
  result.data = table.ToString();
  result.report = absl::StrFormat(
      "%s\nargmin category eps0 = %g\nargmin value eps0 = %g\n"
      "argmin tradeoff eps0 = %g",
      source, rows[best_c].eps0, rows[best_v].eps0, rows[best_t].eps0);
  result.table = std::move(table);
  return result;
}

absl::StatusOr<CommandResult> RunSample(const FlatConfig& config) {
  PBDP_ASSIGN_OR_RETURN(const Mechanism m, ReadMechanism(config));
  PBDP_ASSIGN_OR_RETURN(const double qx, config.GetDouble("qx", 0.0));
  PBDP_ASSIGN_OR_RETURN(const int64_t n, config.GetInt("n", 10));
  PBDP_ASSIGN_OR_RETURN(const int64_t seed, config.GetInt("seed", 1));
  PBDP_ASSIGN_OR_RETURN(const std::string sampler,
                        config.GetString("sampler", "inverse"));
  SamplerKind kind;
  if (sampler == "inverse") {
    kind = SamplerKind::kInverseTransform;
  } else if (sampler == "rejection") {
    kind = SamplerKind::kRejection;
  } else {
    return absl::InvalidArgumentError("sampler must be inverse or rejection");
  }
  PBDP_ASSIGN_OR_RETURN(const std::vector<double> draws,
                        PbSample(m.kernel, m.region, m.q, qx,
                                 static_cast<uint64_t>(seed), n, kind));
  CommandResult result;
  for (double y : draws) absl::StrAppend(&result.data, Exact(y), "\n");
  result.report = absl::StrFormat("%d draws at qx = %g", n, qx);
  return result;
}

absl::StatusOr<VerifyCheck> ParseVerifyCheck(absl::string_view name) {
  if (name == "utility") return VerifyCheck::kUtility;
  if (name == "privacy") return VerifyCheck::kPrivacy;
  if (name == "ldp") return VerifyCheck::kLdp;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown check '", name, "'"));
}

absl::StatusOr<CommandResult> RunVerify(const FlatConfig& config,
                                        VerifyCheck check) {
  CommandResult result;
  if (check == VerifyCheck::kLdp) {
    PBDP_ASSIGN_OR_RETURN(const int64_t domain, config.GetInt("domain_size"));
    PBDP_ASSIGN_OR_RETURN(const int64_t region, config.GetInt("region_size"));
    PBDP_ASSIGN_OR_RETURN(const double eps, config.GetDouble("eps"));
    PBDP_ASSIGN_OR_RETURN(const double eps0, config.GetDouble("eps0", eps));
    PBDP_ASSIGN_OR_RETURN(const std::string map,
                          config.GetString("region_map", "partition"));
    PBDP_ASSIGN_OR_RETURN(const RegionMapKind map_kind, ParseRegionMap(map));
    PBDP_ASSIGN_OR_RETURN(
        const GrrSpec spec,
        GrrParams(static_cast<int>(domain), static_cast<int>(region), eps,
                  eps0, map_kind));
    PBDP_ASSIGN_OR_RETURN(const double ratio, VerifyLdp(spec));
    const double bound = std::exp(eps);
    result.passed = ratio <= bound * (1 + 1e-12);
    result.data = absl::StrFormat(
        "check = ldp\nratio = %.17g\nexp_eps = %.17g\nmargin = %.17g\n"
        "pass = %s\n",
        ratio, bound, bound - ratio, result.passed ? "true" : "false");
    result.report = absl::StrFormat("max ratio %.12g vs e^eps %.12g: %s",
                                    ratio, bound,
                                    result.passed ? "PASS" : "FAIL");
    return result;
  }

  PBDP_ASSIGN_OR_RETURN(const Mechanism m, ReadMechanism(config));
  if (check == VerifyCheck::kUtility) {
    PBDP_ASSIGN_OR_RETURN(const double rho, config.GetDouble("rho"));
    const bool fixed = m.region.kind == RegionKind::kFixed;
    const double reach = 10 * m.kernel.scale + m.kernel.sensitivity;
    PBDP_ASSIGN_OR_RETURN(
        const double lo,
        config.GetDouble("verify.qx_min", fixed ? m.region.tau_l : -reach));
    PBDP_ASSIGN_OR_RETURN(
        const double hi,
        config.GetDouble("verify.qx_max", fixed ? m.region.tau_u : reach));
    std::vector<double> grid(50);
    for (int i = 0; i < 50; ++i) grid[i] = lo + (hi - lo) * i / 49.0;
    PBDP_ASSIGN_OR_RETURN(const UtilityReport u,
                          VerifyUtility(m.kernel, m.region, m.q, grid, rho));
    result.passed = u.pass;
    result.data = absl::StrFormat(
        "check = utility\nrho = %.17g\nmin_margin = %.17g\nworst_qx = %.17g\n"
        "mass_at_qx_star = %.17g\npass = %s\n",
        rho, u.min_margin, u.worst_qx, u.mass_at_qx_star,
        u.pass ? "true" : "false");
    result.report = absl::StrFormat(
        "in-region mass minus rho, worst over 50 answers: %.3g at qx = %g: %s",
        u.min_margin, u.worst_qx, u.pass ? "PASS" : "FAIL");
    if (!u.message.empty()) absl::StrAppend(&result.report, "\n", u.message);
    return result;
  }

  // Privacy: the accounted profile must bound the sampled divergence.
  PBDP_ASSIGN_OR_RETURN(const int64_t n, config.GetInt("verify.samples", 1000000));
  PBDP_ASSIGN_OR_RETURN(const int64_t seed, config.GetInt("seed", 1));
  PBDP_ASSIGN_OR_RETURN(
      const std::vector<double> eps_grid,
      config.GetDoubleList("verify.eps",
                           std::vector<double>{0, 0.5, 1, 2, 3}));
  PBDP_ASSIGN_OR_RETURN(
      const std::vector<McProfilePoint> mc,
      McPrivacyCheck(m.kernel, m.region, m.q, n, static_cast<uint64_t>(seed),
                     eps_grid));
  CsvTable table;
  table.header = {"eps", "delta_profile", "delta_mc", "std_error", "margin"};
  double worst = kInf;
  for (const McProfilePoint& p : mc) {
    PBDP_ASSIGN_OR_RETURN(const double profile,
                          PbProfile(m.kernel, m.region, m.q, p.eps));
    const double margin = profile + 3 * p.std_error - p.delta;
    worst = std::min(worst, margin);
    table.rows.push_back({FormatCell(p.eps), FormatCell(profile),
                          FormatCell(p.delta), FormatCell(p.std_error),
                          FormatCell(margin)});
  }
  result.passed = worst >= 0.0;
  result.data = table.ToString();
  result.report = absl::StrFormat(
      "accounted delta + 3 SE minus sampled delta, worst over %d eps: %.3g: "
      "%s",
      mc.size(), worst, result.passed ? "PASS" : "FAIL");
  result.table = std::move(table);
  return result;
}

std::string GnuplotScript(const CsvTable& table, absl::string_view csv_path,
                          absl::string_view title) {
  std::string plots;
  for (size_t c = 1; c < table.header.size(); ++c) {
    // Skip text columns.
    bool numeric = !table.rows.empty();
    for (const auto& row : table.rows) {
      double v;
      if (!absl::SimpleAtod(row[c], &v) && row[c] != "inf") numeric = false;
    }
    if (!numeric) continue;
    if (!plots.empty()) plots += ", \\\n     ";
    absl::StrAppendFormat(&plots, "'%s' using 1:%d with linespoints title '%s'",
                          csv_path, c + 1, table.header[c]);
  }
  return absl::StrFormat(
      "set datafile separator ','\nset key autotitle columnhead\n"
      "set title '%s'\nset xlabel '%s'\nplot %s\n",
      title, table.header[0], plots);
}

}  // namespace pbdp::cli
