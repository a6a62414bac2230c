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


#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "pbdp/accounting.h"
#include "pbdp/kernels.h"
#include "pbdp/ldp_grr.h"
#include "pbdp/pb_mech.h"
#include "pbdp/planner.h"
#include "pybind11/pybind11.h"
#include "pybind11/stl.h"

namespace py = pybind11;

namespace {

// Library errors surface as ValueError carrying the status message.
template <typename T>
T Unwrap(absl::StatusOr<T> v) {
  if (!v.ok()) throw py::value_error(std::string(v.status().message()));
  return *std::move(v);
}

}  // namespace

PYBIND11_MODULE(_pbdp, m) {
  using namespace pbdp;
  m.doc() = "Probabilistic boosting for differential privacy";

  py::enum_<KernelFamily>(m, "KernelFamily")
      .value("GAUSSIAN", KernelFamily::kGaussian)
      .value("LAPLACE", KernelFamily::kLaplace);
  py::enum_<Calibration>(m, "Calibration")
      .value("EXPLICIT_SCALE", Calibration::kExplicitScale)
      .value("CLASSICAL", Calibration::kClassical)
      .value("ANALYTIC", Calibration::kAnalytic);
  py::enum_<RegionKind>(m, "RegionKind")
      .value("RELATIVE", RegionKind::kRelative)
      .value("ABSOLUTE", RegionKind::kAbsolute)
      .value("FIXED", RegionKind::kFixed);
  py::enum_<PrivacyMode>(m, "PrivacyMode")
      .value("DP", PrivacyMode::kApproxDp)
      .value("RDP", PrivacyMode::kRdp);
  py::enum_<SamplerKind>(m, "SamplerKind")
      .value("INVERSE_TRANSFORM", SamplerKind::kInverseTransform)
      .value("REJECTION", SamplerKind::kRejection);
  py::enum_<RegionMapKind>(m, "RegionMap")
      .value("PARTITION", RegionMapKind::kPartition)
      .value("SLIDING", RegionMapKind::kSliding);

  py::class_<KernelSpec>(m, "KernelSpec")
      .def(py::init<>())
      .def_readwrite("family", &KernelSpec::family)
      .def_readwrite("scale", &KernelSpec::scale)
      .def_readwrite("sensitivity", &KernelSpec::sensitivity)
      .def_readwrite("delta0", &KernelSpec::delta0)
      .def_readwrite("eps0", &KernelSpec::eps0)
      .def_readwrite("calibration", &KernelSpec::calibration);
  py::class_<RegionSpec>(m, "RegionSpec")
      .def(py::init<>())
      .def_readwrite("kind", &RegionSpec::kind)
      .def_readwrite("theta", &RegionSpec::theta)
      .def_readwrite("tau", &RegionSpec::tau)
      .def_readwrite("tau_l", &RegionSpec::tau_l)
      .def_readwrite("tau_u", &RegionSpec::tau_u);
  py::class_<BoostParams>(m, "BoostParams")
      .def_readonly("rho", &BoostParams::rho)
      .def_readonly("q", &BoostParams::q)
      .def_readonly("min_pS", &BoostParams::min_pS)
      .def_readonly("qx_star", &BoostParams::qx_star);
  py::class_<LeakageParams>(m, "LeakageParams")
      .def(py::init<>())
      .def_readwrite("L1", &LeakageParams::L1)
      .def_readwrite("L2", &LeakageParams::L2)
      .def_readwrite("W1", &LeakageParams::W1)
      .def_readwrite("W2", &LeakageParams::W2)
      .def_readwrite("W3", &LeakageParams::W3);
  py::class_<PrivacyPoint>(m, "PrivacyPoint")
      .def_readonly("mode", &PrivacyPoint::mode)
      .def_readonly("eps", &PrivacyPoint::eps)
      .def_readonly("delta", &PrivacyPoint::delta)
      .def_readonly("alpha", &PrivacyPoint::alpha);
  py::class_<PlanRequest>(m, "PlanRequest")
      .def(py::init<>())
      .def_readwrite("kernel_family", &PlanRequest::kernel_family)
      .def_readwrite("sensitivity", &PlanRequest::sensitivity)
      .def_readwrite("region", &PlanRequest::region)
      .def_readwrite("rho", &PlanRequest::rho)
      .def_readwrite("mode", &PlanRequest::mode)
      .def_readwrite("delta", &PlanRequest::delta)
      .def_readwrite("alpha", &PlanRequest::alpha)
      .def_readwrite("eps_max", &PlanRequest::eps_max)
      .def_readwrite("tol", &PlanRequest::tol)
      .def_readwrite("compositions", &PlanRequest::compositions)
      .def_readwrite("calibration", &PlanRequest::calibration);
  py::class_<PlanResult>(m, "PlanResult")
      .def_readonly("feasible", &PlanResult::feasible)
      .def_readonly("eps0_opt", &PlanResult::eps0_opt)
      .def_readonly("q_opt", &PlanResult::q_opt)
      .def_readonly("min_pS", &PlanResult::min_pS)
      .def_readonly("kernel", &PlanResult::kernel)
      .def_readonly("leakage", &PlanResult::leakage)
      .def_readonly("total", &PlanResult::total)
      .def_readonly("grid_fallback", &PlanResult::grid_fallback)
      .def_readonly("notes", &PlanResult::notes);
  py::class_<KernelOnlyResult>(m, "KernelOnlyResult")
      .def_readonly("feasible", &KernelOnlyResult::feasible)
      .def_readonly("kernel", &KernelOnlyResult::kernel)
      .def_readonly("min_pS", &KernelOnlyResult::min_pS)
      .def_readonly("total", &KernelOnlyResult::total);
  py::class_<GrrSpec>(m, "GrrSpec")
      .def_readonly("domain_size", &GrrSpec::domain_size)
      .def_readonly("region_size", &GrrSpec::region_size)
      .def_readonly("eps", &GrrSpec::eps)
      .def_readonly("eps0", &GrrSpec::eps0)
      .def_readonly("p", &GrrSpec::p)
      .def_readonly("p_s", &GrrSpec::p_s)
      .def_readonly("p_bar", &GrrSpec::p_bar);

  m.attr("MAX_BOOSTING_RATE") = kMaxBoostingRate;

  m.def("calibrate_kernel",
        [](const KernelSpec& k) { return Unwrap(CalibrateKernel(k)); });
  m.def("kernel_profile", &KernelProfile, py::arg("kernel"), py::arg("eps"));
  m.def("compute_boost_params",
        [](const KernelSpec& k, const RegionSpec& r, double rho) {
          return Unwrap(ComputeBoostParams(k, r, rho));
        });
  m.def("pb_pdf",
        [](const KernelSpec& k, const RegionSpec& r, double q, double qx,
           double y) { return Unwrap(PbPdf(k, r, q, qx, y)); });
  m.def("pb_cdf",
        [](const KernelSpec& k, const RegionSpec& r, double q, double qx,
           double y) { return Unwrap(PbCdf(k, r, q, qx, y)); });
  m.def(
      "pb_sample",
      [](const KernelSpec& k, const RegionSpec& r, double q, double qx,
         uint64_t seed, int64_t n, SamplerKind sampler) {
        return Unwrap(PbSample(k, r, q, qx, seed, n, sampler));
      },
      py::arg("kernel"), py::arg("region"), py::arg("q"), py::arg("qx"),
      py::arg("seed"), py::arg("n"),
      py::arg("sampler") = SamplerKind::kInverseTransform);
  m.def("compute_leakage_params",
        [](const KernelSpec& k, const RegionSpec& r, double q) {
          return Unwrap(ComputeLeakageParams(k, r, q));
        });
  m.def("pb_profile",
        [](const KernelSpec& k, const RegionSpec& r, double q, double eps) {
          return Unwrap(PbProfile(k, r, q, eps));
        });
  m.def("pb_rdp",
        [](const KernelSpec& k, const RegionSpec& r, double q, double alpha) {
          return Unwrap(PbRdp(k, r, q, alpha));
        });
  m.def("compose_rdp", [](const std::vector<double>& eps) {
    return Unwrap(ComposeRdp(eps));
  });
  m.def("optimize_eps0",
        [](const PlanRequest& req) { return Unwrap(OptimizeEps0(req)); });
  m.def("kernel_only_plan",
        [](const PlanRequest& req) { return Unwrap(KernelOnlyPlan(req)); });
  m.def("grr_params",
        [](int domain_size, int region_size, double eps, double eps0,
           RegionMapKind map) {
          return Unwrap(GrrParams(domain_size, region_size, eps, eps0, map));
        },
        py::arg("domain_size"), py::arg("region_size"), py::arg("eps"),
        py::arg("eps0"), py::arg("region_map") = RegionMapKind::kPartition);
  m.def("verify_ldp",
        [](const GrrSpec& spec) { return Unwrap(VerifyLdp(spec)); });
}
