// Copyright 2026 The epidiff Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "epidiff/config.hpp"
#include "epidiff/sausage.hpp"

#include <json.hpp>

#include <string>

namespace epidiff {

enum class BoundMethod { ClosedFormBessel, CrudeKernelBound, MonteCarloIntegral, BoundedMotion, GrowthEnvelope };
enum class Certificate { ExtinctionCertified, Inconclusive };

/// Upper estimate of the reproduction number with its certificate. Closed
/// forms carry std_error 0.
struct BoundReport {
  Model model = Model::Delayed;
  BoundMethod method = BoundMethod::ClosedFormBessel;
  double value = 0.0;
  double std_error = 0.0;
  Certificate certificate = Certificate::Inconclusive;
  nlohmann::json inputs = nlohmann::json::object();

  bool certified() const { return certificate == Certificate::ExtinctionCertified; }
};

/// Certified iff value + 3 std_error < 1.
Certificate certify(double value, double std_error);

std::string method_name(BoundMethod method);
nlohmann::json to_json(const BoundReport& report);

/// lambda rho iota(mu) / alpha, with iota the kernel mass.
BoundReport crude_bound_delayed(double lambda, double rho, const KernelSpec& kernel, int dim, double alpha);

/// lambda * z_alpha(alpha). Only for planar standard Brownian motion with
/// the unit-ball kernel; anything else is rejected.
BoundReport r_infinity_closed_form_2d(double lambda, double alpha, int dim = 2,
                                      const DiffusionSpec& diffusion = DiffusionSpec::brownian(),
                                      const KernelSpec& kernel = KernelSpec::unit_ball());

/// lambda E|sausage_T| with T ~ Exp(alpha), by hit-or-miss on one path (two
/// for the diffusion model, whose contact geometry is the difference path)
/// and one lifetime per replicate. options.radius is the ball radius.
BoundReport r_infinity_mc(Model model, const DiffusionSpec& diffusion, int dim, double lambda, double alpha,
                          Index replicates, const SausageOptions& options);

/// lambda E int (1 - exp(-rho int_0^T mu(x - zeta(s)) ds)) dx with T ~
/// Exp(alpha), by hit-or-miss over the path tube dilated by the kernel support.
BoundReport r_rho_mc(Model model, const DiffusionSpec& diffusion, int dim, double lambda, double rho,
                     const KernelSpec& kernel, double alpha, Index replicates, const SausageOptions& options);

/// lambda |B(cap + radius)|: valid when the motion never leaves B(0, cap).
BoundReport bounded_motion_bound(Model model, double lambda, int dim, double cap, double radius);

/// From an envelope E|sausage_t| <= gamma e^{sigma t}: value
/// lambda alpha gamma / (alpha - sigma); certified iff lambda gamma < 1 and
/// alpha > sigma / (1 - lambda gamma).
BoundReport growth_envelope_certificate(double lambda, double alpha, const GrowthFit& fit, Model model);

/// int_0^T mu(x - zeta(s)) ds along the piecewise-linear path: exact
/// occupation time for ball indicators, trapezoid rule otherwise.
double kernel_exposure(SampledPath& path, const Point& x, const KernelSpec& kernel, double horizon);

}  // namespace epidiff
