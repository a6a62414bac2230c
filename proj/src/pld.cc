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

#include "pbdp/pld.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_format.h"
#include "boost/math/quadrature/gauss_kronrod.hpp"
#include "pbdp/normal.h"

namespace pbdp {
namespace {

// Number of standard deviations beyond which the analytic PLD is treated as
// having no mass.
constexpr double kAnalyticSpan = 40.0;

double GaussianBinMass(double lo, double hi, double mean, double sd) {
  const double a = (lo - mean) / sd;
  const double b = (hi - mean) / sd;
  if (a > 0.0) return StandardNormalCdf(-a) - StandardNormalCdf(-b);
  return StandardNormalCdf(b) - StandardNormalCdf(a);
}

bool SameStep(double a, double b) {
  return a > 0.0 && b > 0.0 && std::abs(a - b) <= 1e-12 * std::max(a, b);
}

int64_t LatticeIndex(double loss, double step) {
  return static_cast<int64_t>(std::llround(loss / step));
}

// Drops leading and trailing atoms whose cumulative mass is below
// `tail_mass`, folding it into the nearest kept atom.
void TruncateTails(std::vector<double>& masses, int64_t& first_index,
                   double tail_mass) {
  if (masses.size() <= 1) return;
  size_t lo = 0;
  double folded_lo = 0.0;
  while (lo + 1 < masses.size() && folded_lo + masses[lo] < tail_mass) {
    folded_lo += masses[lo];
    ++lo;
  }
  size_t hi = masses.size() - 1;
  double folded_hi = 0.0;
  while (hi > lo && folded_hi + masses[hi] < tail_mass) {
    folded_hi += masses[hi];
    --hi;
  }
  std::vector<double> kept(masses.begin() + lo, masses.begin() + hi + 1);
  kept.front() += folded_lo;
  kept.back() += folded_hi;
  masses = std::move(kept);
  first_index += static_cast<int64_t>(lo);
}

PLDRepr FromLattice(std::vector<double> masses, int64_t first_index,
                    double step, double inf_mass) {
  PLDRepr out;
  out.kind = PLDRepr::Kind::kGrid;
  out.grid_step = step;
  out.inf_mass = inf_mass;
  out.grid_losses.reserve(masses.size());
  for (size_t i = 0; i < masses.size(); ++i) {
    out.grid_losses.push_back(
        static_cast<double>(first_index + static_cast<int64_t>(i)) * step);
  }
  out.grid_masses = std::move(masses);
  return out;
}

}  // namespace

PLDRepr PLDRepr::AnalyticGaussian(double eta) {
  PLDRepr pld;
  pld.kind = Kind::kAnalyticGaussian;
  pld.gauss_mean = eta;
  pld.gauss_var = 2.0 * eta;
  return pld;
}

PLDRepr PLDRepr::PointMass(double loss) {
  PLDRepr pld;
  pld.kind = Kind::kGrid;
  pld.grid_losses = {loss};
  pld.grid_masses = {1.0};
  return pld;
}

double PldTotalMass(const PLDRepr& pld) {
  if (pld.kind == PLDRepr::Kind::kAnalyticGaussian) return 1.0;
  return std::accumulate(pld.grid_masses.begin(), pld.grid_masses.end(),
                         pld.inf_mass);
}

absl::Status ValidatePld(const PLDRepr& pld) {
  if (pld.kind == PLDRepr::Kind::kAnalyticGaussian) {
    if (!(pld.gauss_mean >= 0.0) ||
        std::abs(pld.gauss_var - 2.0 * pld.gauss_mean) >
            1e-12 * std::max(1.0, pld.gauss_var)) {
      return absl::InvalidArgumentError(
          "analytic Gaussian PLD needs mean >= 0 and variance = 2 * mean");
    }
    return absl::OkStatus();
  }
  if (pld.grid_losses.size() != pld.grid_masses.size()) {
    return absl::InvalidArgumentError("grid losses and masses differ in size");
  }
  for (double m : pld.grid_masses) {
    if (!(m >= 0.0 && m <= 1.0)) {
      return absl::InvalidArgumentError("grid mass outside [0, 1]");
    }
  }
  if (!std::is_sorted(pld.grid_losses.begin(), pld.grid_losses.end())) {
    return absl::InvalidArgumentError("grid losses must be sorted");
  }
  const double total = PldTotalMass(pld);
  if (std::abs(total - 1.0) > 1e-9) {
    return absl::InvalidArgumentError(
        absl::StrFormat("PLD mass sums to %.12g, expected 1", total));
  }
  return absl::OkStatus();
}

double PldProfile(const PLDRepr& pld, double eps) {
  if (pld.kind == PLDRepr::Kind::kAnalyticGaussian) {
    const double mean = pld.gauss_mean;
    const double sd = std::sqrt(pld.gauss_var);
    if (sd == 0.0) return eps < mean ? -std::expm1(eps - mean) : 0.0;
    const double upper = mean + kAnalyticSpan * sd;
    if (eps >= upper) return 0.0;
    const double lower = std::max(eps, mean - kAnalyticSpan * sd);
    auto integrand = [&](double g) {
      return -std::expm1(eps - g) * StandardNormalPdf((g - mean) / sd) / sd;
    };
    double value =
        boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
            integrand, lower, upper, 15, 1e-13);
    // Mass below the integration window, where the integrand is ~1.
    if (lower > eps) {
      value += StandardNormalCdf((lower - mean) / sd) *
               -std::expm1(eps - lower);
    }
    return std::clamp(value, 0.0, 1.0);
  }
  double delta = pld.inf_mass;
  for (size_t i = 0; i < pld.grid_losses.size(); ++i) {
    const double loss = pld.grid_losses[i];
    if (loss > eps) delta += pld.grid_masses[i] * -std::expm1(eps - loss);
  }
  return std::clamp(delta, 0.0, 1.0);
}

PLDRepr DiscretizeGaussianPld(double eta, double step, double tail_mass) {
  if (eta <= 0.0) {
    PLDRepr pld = PLDRepr::PointMass(0.0);
    pld.grid_step = step;
    return pld;
  }
  const double sd = std::sqrt(2.0 * eta);
  const double z = -StandardNormalQuantile(tail_mass);
  const int64_t lo = static_cast<int64_t>(std::floor((eta - z * sd) / step));
  const int64_t hi = static_cast<int64_t>(std::ceil((eta + z * sd) / step));
  std::vector<double> masses;
  masses.reserve(hi - lo + 1);
  for (int64_t i = lo; i <= hi; ++i) {
    const double upper = static_cast<double>(i) * step;
    const double lower = upper - step;
    double m;
    if (i == lo && i == hi) {
      m = 1.0;
    } else if (i == lo) {
      m = StandardNormalCdf((upper - eta) / sd);
    } else if (i == hi) {
      m = StandardNormalCdf(-(lower - eta) / sd);
    } else {
      m = GaussianBinMass(lower, upper, eta, sd);
    }
    masses.push_back(m);
  }
  return FromLattice(std::move(masses), lo, step, 0.0);
}

PLDRepr ToGrid(const PLDRepr& pld, double step) {
  if (pld.kind == PLDRepr::Kind::kGrid) return pld;
  return DiscretizeGaussianPld(pld.gauss_mean, step);
}

PLDRepr NormalizeGrid(std::vector<double> losses, std::vector<double> masses,
                      double inf_mass, double grid_step) {
  std::vector<size_t> order(losses.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return losses[a] < losses[b]; });
  PLDRepr out;
  out.kind = PLDRepr::Kind::kGrid;
  out.inf_mass = inf_mass;
  out.grid_step = grid_step;
  for (size_t idx : order) {
    const double loss = losses[idx];
    const bool same =
        !out.grid_losses.empty() &&
        (grid_step > 0.0
             ? LatticeIndex(out.grid_losses.back(), grid_step) ==
                   LatticeIndex(loss, grid_step)
             : out.grid_losses.back() == loss);
    if (same) {
      out.grid_masses.back() += masses[idx];
    } else {
      out.grid_losses.push_back(loss);
      out.grid_masses.push_back(masses[idx]);
    }
  }
  return out;
}

absl::StatusOr<PLDRepr> ComposeGridPlds(const PLDRepr& a, const PLDRepr& b,
                                        double tail_mass) {
  if (a.kind != PLDRepr::Kind::kGrid || b.kind != PLDRepr::Kind::kGrid) {
    return absl::InvalidArgumentError("composition needs grid PLDs");
  }
  if (!SameStep(a.grid_step, b.grid_step)) {
    return absl::InvalidArgumentError(
        "composed grids must share one lattice step");
  }
  if (a.grid_losses.empty() || b.grid_losses.empty()) {
    return absl::InvalidArgumentError("empty grid PLD");
  }
  const double step = a.grid_step;
  auto dense = [step](const PLDRepr& p, int64_t& first) {
    first = LatticeIndex(p.grid_losses.front(), step);
    const int64_t last = LatticeIndex(p.grid_losses.back(), step);
    std::vector<double> out(last - first + 1, 0.0);
    for (size_t i = 0; i < p.grid_losses.size(); ++i) {
      out[LatticeIndex(p.grid_losses[i], step) - first] += p.grid_masses[i];
    }
    return out;
  };
  int64_t first_a = 0;
  int64_t first_b = 0;
  const std::vector<double> da = dense(a, first_a);
  const std::vector<double> db = dense(b, first_b);
  std::vector<double> out(da.size() + db.size() - 1, 0.0);
  for (size_t i = 0; i < da.size(); ++i) {
    if (da[i] == 0.0) continue;
    for (size_t j = 0; j < db.size(); ++j) out[i + j] += da[i] * db[j];
  }
  int64_t first = first_a + first_b;
  TruncateTails(out, first, tail_mass);
  const double inf_mass = a.inf_mass + b.inf_mass - a.inf_mass * b.inf_mass;
  return FromLattice(std::move(out), first, step, inf_mass);
}

absl::StatusOr<PLDRepr> SelfComposePld(const PLDRepr& pld, int times,
                                       double tail_mass) {
  if (times < 0) return absl::InvalidArgumentError("times must be >= 0");
  if (times == 0) {
    PLDRepr identity = PLDRepr::PointMass(0.0);
    identity.grid_step = pld.grid_step;
    return identity;
  }
  PLDRepr base = pld;
  PLDRepr result;
  bool have_result = false;
  while (true) {
    if (times & 1) {
      if (have_result) {
        absl::StatusOr<PLDRepr> next = ComposeGridPlds(result, base, tail_mass);
        if (!next.ok()) return next.status();
        result = *std::move(next);
      } else {
        result = base;
        have_result = true;
      }
    }
    times >>= 1;
    if (times == 0) break;
    absl::StatusOr<PLDRepr> squared = ComposeGridPlds(base, base, tail_mass);
    if (!squared.ok()) return squared.status();
    base = *std::move(squared);
  }
  return result;
}

}  // namespace pbdp
