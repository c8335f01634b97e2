// certificates.hpp — Hessian eigenvalue bounds from RIP constants, explicit
// basin-of-attraction radii, and the Jacobi verification eigensolver.
#pragma once

#include "spikebasin/common.hpp"
#include "spikebasin/kernel.hpp"
#include "spikebasin/objective.hpp"
#include "spikebasin/spike_model.hpp"

#include <optional>
#include <string>
#include <utility>

namespace spikebasin {

enum class ConstantProvenance { empirical, paper_bound, user };

const char* to_string(ConstantProvenance p);

struct RipConstants {
  double gamma = 0.0;  // RIP constant, must be < 1 for a nonvacuous bound
  double mu = 0.0;     // mutual coherence; (k-1) mu < 1 for a nonvacuous bound
  ConstantProvenance gamma_provenance = ConstantProvenance::user;
  ConstantProvenance mu_provenance = ConstantProvenance::user;
};

struct HessianBounds {
  double lambda_max_ub = 0.0;
  double lambda_min_lb = 0.0;
  double xi = 0.0;
  // Set when (k-1) mu >= 1 or gamma >= 1: the lower bound formula carries no
  // information but is still reported.
  bool vacuous_lower = false;
};

struct BasinCertificate {
  double beta_max = 0.0;
  double C1 = 0.0;
  double C2_or_C3 = 0.0;
  double c_h_used = 0.0;
  double q_relaxation = 0.0;
  double L = 0.0;        // gradient Lipschitz bound on the certified ball
  double tau_max = 0.0;  // 1 / L
  std::optional<double> noise_budget;  // noisy case only
  bool noisy = false;
  bool vacuous = false;
  std::string assumptions_log;
};

// xi = 2(d+1) max(max_r |a_r| sqrt(m) D_{A,R}, sqrt(1+Gamma) sqrt(|rho''(0)|))
//      * (residual_gap + noise_norm).
// `sqrt_m_D` is the product sqrt(m) * D_{A,R}.
double xi_bound(const SpikeTrain& theta, double residual_gap, double noise_norm,
                double sqrt_m_D, const RipConstants& rip,
                const RadialKernel& kernel);

// Pointwise eigenvalue bounds:
//   sup u^T H u <= 2(1+Gamma)(1+(k-1)mu) max(1, max_r a_r^2 |rho''(0)|) + xi
//   inf u^T H u >= 2(1-Gamma)(1-(k-1)mu) min(1, min_r a_r^2 |rho''(0)|) - xi
HessianBounds eigen_bounds_at(const SpikeTrain& theta, const RipConstants& rip,
                              const RadialKernel& kernel, double xi);

// Conditioning interval at a noiseless global minimum (F = 0). Requires
// min_r |a_r| > 0, else ZeroAmplitude.
std::pair<double, double> conditioning_bounds(const SpikeTrain& theta,
                                              const RipConstants& rip,
                                              const RadialKernel& kernel);

// Uniform bounds over the open ball of radius beta around theta_star:
// amplitude extremes are replaced by |a_1| - beta and |a_k| + beta, and the
// caller supplies the sup of the residual gap over the ball. Unconstrained
// mode requires beta <= epsilon/4 (stronger RIP at separation epsilon/2),
// and beta < |a_1| always; otherwise BetaTooLarge.
HessianBounds uniform_bounds_on_ball(const SpikeTrain& theta_star, double beta,
                                     const RipConstants& rip,
                                     const RadialKernel& kernel,
                                     double sqrt_m_D, double sup_residual_gap,
                                     double noise_norm, bool constrained);

// Closed-form bound sqrt(1+Gamma) sqrt(1+(k-1)mu) beta
//                   * sqrt(1 + 2 |rho''(0)| ||a*||^2)
// on sup_{||theta-theta*|| <= beta} ||A phi(theta) - A phi(theta*)||.
double residual_gap_analytic_bound(const SpikeTrain& theta_star, double beta,
                                   const RipConstants& rip,
                                   const RadialKernel& kernel);

struct ResidualGapEstimate {
  double empirical_max = 0.0;  // max over sampled points in the ball
  double analytic_bound = 0.0;
  double value = 0.0;  // the safe value used downstream (analytic bound)
};

ResidualGapEstimate sup_residual_gap_estimate(const Objective& obj,
                                              const SpikeTrain& theta_star,
                                              double beta, int samples,
                                              std::uint64_t rng_seed,
                                              const RipConstants& rip,
                                              const RadialKernel& kernel);

// Noiseless basin radius
//   beta_max = min(c_h, |a_1|/2, C1 C2),
//   C1 = (1-Gamma)(1-(k-1)mu) / ((d+1) sqrt(1+Gamma) sqrt(1+(k-1)mu)),
//   C2 = min(1, |a_1|^2 |rho''(0)|/4)
//        / (max(|a_k| sqrt(m) D, sqrt(1+Gamma) sqrt(|rho''(0)|))
//           * sqrt(1 + 2 |rho''(0)| ||a*||^2)).
// D is the raw D_{A,R}; m the measurement count. The certificate carries the
// Lipschitz bound L at beta_max and tau_max = 1/L. Vacuous certificates
// (nonpositive radius, (k-1)mu >= 1, Gamma >= 1) are flagged, not thrown.
BasinCertificate beta_max_noiseless(const SpikeTrain& theta_star,
                                    const RipConstants& rip,
                                    const RadialKernel& kernel, double D, int m,
                                    double c_h, double q_relaxation);

// Noisy variant: C3 replaces C2 with denominator factor
// (1 + sqrt(1 + 2 |rho''(0)| ||a*||^2)); throws NoiseBudgetExceeded when
// noise_norm > sqrt(1+Gamma) sqrt(1+(k-1)mu) beta_max.
BasinCertificate beta_max_noisy(const SpikeTrain& theta_star,
                                const RipConstants& rip,
                                const RadialKernel& kernel, double D, int m,
                                double c_h, double q_relaxation,
                                double noise_norm);

// Cyclic Jacobi eigensolver for small dense symmetric matrices; rotations
// run until the off-diagonal Frobenius mass drops below 1e-12 ||M||_F.
// Eigenvalues returned ascending. Throws NotSymmetric on asymmetric input.
Vec symmetric_eigenvalues(const Mat& M);

// Gerschgorin operator-norm bound max_l ||M_{l,:}||_1; cheap diagnostic used
// alongside the Jacobi spectrum.
double gerschgorin_row_bound(const Mat& M);

}  // namespace spikebasin
