// kernel.hpp — radial translation-invariant kernels and the bilinear kernel
// calculus on sums of generalized dipoles.
#pragma once

#include "spikebasin/common.hpp"
#include "spikebasin/spike_model.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace spikebasin {

// Radial profile rho with rho(0) = 1, rho'(0) = 0, rho''(0) < 0; the kernel
// is h(t1,t2) = rho(||t1 - t2||_2). The Gaussian family carries closed-form
// directional derivatives; generic kernels fall back to the radial chain
// rule on rho', rho''.
struct RadialKernel {
  enum class Family { gaussian, generic };

  std::function<double(double)> rho;
  std::function<double(double)> rho1;
  std::function<double(double)> rho2;
  double rho2_at_0 = -1.0;
  std::string name;
  Family family = Family::generic;
  double sigma = 0.0;       // Gaussian width when family == gaussian
  double conv_scale = 1.0;  // raw rho(0) recorded by kernel_from_convolution

  double rho2_abs() const { return -rho2_at_0; }

  // f(t) = rho(||t||) and its directional derivatives.
  double f(const Vec& t) const;
  double f_dir(const Vec& t, const Vec& v) const;
  double f_dir2(const Vec& t, const Vec& v1, const Vec& v2) const;
};

struct KernelConstants {
  double sigma = 0.0;
  double c_h = 0.0;      // quadratic-domination radius, 0 < c_h <= eps/2
  double mu = 0.0;       // mutual coherence on separated dipoles
  double rho2_abs = 0.0; // |rho''(0)|
};

// rho(u) = exp(-u^2 / (2 sigma^2)); rho''(0) = -1/sigma^2.
RadialKernel gaussian_kernel(double sigma);

// Width sigma_k = sqrt(1 / (2.4 ln(2k-1) + 24)), the unit-separation scaling.
double sigma_from_k(int k);

// Coherence bound 3 / (4(k-1)) for the sigma_k Gaussian at unit separation.
double coherence_bound(int k);

// Closed-form limit of <nu1^eta, nu2^eta>_h for generalized dipoles
// nu = a delta_t + b delta'_{t,v}. Symmetric in its arguments. Requires unit
// direction whenever b != 0.
double dipole_inner(const GeneralizedDipole& nu1, const GeneralizedDipole& nu2,
                    const RadialKernel& kernel);

// sqrt of the full bilinear double sum over the list; tiny negative squares
// are clamped to 0 with a warning on stderr.
double measure_norm_h(std::span<const GeneralizedDipole> dipoles,
                      const RadialKernel& kernel);
double measure_norm_h_sq(std::span<const GeneralizedDipole> dipoles,
                         const RadialKernel& kernel);

// Largest c <= epsilon/2 such that rho(t) <= 1 - q |rho''(0)| t^2 / 2 on a
// dense grid over [0, c] (grid step <= c/1e4). Throws NoValidRadius when even
// an infinitesimal radius fails at the given relaxation q.
double c_h_compute(const RadialKernel& kernel, double epsilon, double q);

// Empirical lower bound on the mutual coherence: max over sampled pairs of
// epsilon-separated generalized dipoles of |<nu1,nu2>| / (||nu1|| ||nu2||).
double coherence_estimate(const RadialKernel& kernel, const ModelConfig& config,
                          int trials, std::uint64_t rng_seed);

// d=1 kernel whose profile is the autocorrelation K*K computed by adaptive
// quadrature (relative tolerance 1e-9), rescaled so rho(0) = 1; the raw
// rho(0) is recorded in conv_scale. Optional analytic derivatives of K feed
// rho' and rho''; otherwise they are finite-differenced from the quadrature.
RadialKernel kernel_from_convolution(
    std::function<double(double)> K, double support_radius,
    std::function<double(double)> K1 = nullptr,
    std::function<double(double)> K2 = nullptr);

// Convenience: convolution kernel with Gaussian profile of the given width.
RadialKernel convolution_of_gaussian(double width);

// Pure-Dirac helper.
GeneralizedDipole dirac(double a, const Vec& t);

}  // namespace spikebasin
