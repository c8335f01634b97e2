// measurement.hpp — weighted Fourier sampling on measures and order-1/2
// distributions, the D_{A,R} constant and empirical RIP estimation.
#pragma once

#include "spikebasin/common.hpp"
#include "spikebasin/kernel.hpp"
#include "spikebasin/spike_model.hpp"

#include <cstdint>

namespace spikebasin {

// alpha_l(t) = (1/sqrt(m)) c_l exp(-i <omega_l, t>). The 1/sqrt(m) factor is
// controlled by `normalize`.
struct FourierOperator {
  Mat frequencies;  // m x d, row l = omega_l
  Vec weights;      // m entries c_l
  bool normalize = true;
  std::uint64_t seed = 0;  // provenance only

  int m() const { return static_cast<int>(frequencies.rows()); }
  int d() const { return static_cast<int>(frequencies.cols()); }
  double norm_factor() const {
    return normalize ? 1.0 / std::sqrt(static_cast<double>(m())) : 1.0;
  }
};

// Frequencies i.i.d. Gaussian with covariance sigma^{-2} I and unit weights,
// so that E |(A delta_t - A delta_s)|^2 matches the sigma-Gaussian kernel
// metric. Deterministic under seed.
FourierOperator draw_random_operator(int m, double sigma, int d,
                                     std::uint64_t rng_seed);

// Deterministic d=1 grid: omega_l = spacing * (l - (m-1)/2), unit weights.
// Provided for regular Fourier sampling experiments; no RIP claim attached.
FourierOperator grid_operator(int m, double spacing);

// A delta_t: one weighted complex exponential per measurement.
CVec apply_dirac(const FourierOperator& op, const Vec& t);

// A phi(theta) = sum_r a_r A delta_{t_r}. Warns (once per process) when a
// position leaves the domain ball; descent iterates may exit it.
CVec apply(const FourierOperator& op, const SpikeTrain& spikes);

// (A delta'_{t,v})_l = (i <omega_l, v> / sqrt(m)) c_l e^{-i<omega_l, t>}.
CVec apply_dirac_derivative(const FourierOperator& op, const Vec& t,
                            const Vec& v);

// (A delta''_{t,v1,v2})_l = (-<omega_l,v1><omega_l,v2>/sqrt(m)) c_l
//                            e^{-i<omega_l,t>}.
CVec apply_dirac_second_derivative(const FourierOperator& op, const Vec& t,
                                   const Vec& v1, const Vec& v2);

// Uniform bound on directional second derivatives of the alpha_l. For the
// Fourier family this is exactly max_l |c_l| ||omega_l||^2 / sqrt(m),
// independent of t.
double compute_D_A_R(const FourierOperator& op);

// A applied to a sum of generalized dipoles.
CVec apply_dipoles(const FourierOperator& op,
                   std::span<const GeneralizedDipole> dipoles);

struct RipEstimate {
  double gamma_lower = 0.0;  // max(1 - ratio_min, ratio_max - 1), >= 0
  double ratio_min = 0.0;    // min observed ||Ax||^2 / ||x||_h^2
  double ratio_max = 0.0;
  int trials = 0;
  std::uint64_t seed = 0;
};

// Samples secant-set elements x = phi(theta1) - phi(theta2) (or sums of
// separated generalized dipoles when include_derivatives) and records the
// extremes of ||Ax||_2^2 / ||x||_h^2. A lower bound on the true RIP constant.
// Trials with ||x||_h^2 < 1e-12 are skipped; throws AllSamplesDegenerate when
// nothing survives. `sampling` controls the amplitude distribution of the
// sampled trains.
RipEstimate estimate_rip(const FourierOperator& op, const ModelConfig& config,
                         const RadialKernel& kernel, int trials,
                         std::uint64_t rng_seed, bool include_derivatives,
                         const SampleOptions& sampling = {{-1.5, 1.5}, false});

}  // namespace spikebasin
