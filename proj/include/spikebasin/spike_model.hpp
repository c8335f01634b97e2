// spike_model.hpp — k-spike parameter vectors, the separated model set and
// generalized dipoles: packing, validation, sampling, perturbation.
#pragma once

#include "spikebasin/common.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <utility>

namespace spikebasin {

struct ModelConfig {
  int k = 1;           // number of spikes
  int d = 1;           // ambient dimension
  double epsilon = 1;  // minimum pairwise separation (l2)
  double R = 1;        // domain ball radius

  int dim() const { return k * (d + 1); }

  // Throws ConfigError on violated invariants (k,d >= 1; epsilon, R > 0;
  // epsilon < 2R so the separated set can be nonempty for k >= 2).
  void validate() const;
};

// Parameter vector theta = (a_1..a_k, t_1..t_k). The canonical packed layout
// is amplitudes first, then positions row-major: amplitude r at index r,
// coordinate j of position r at index k + r*d + j. All gradient/Hessian
// indexing derives from this layout.
struct SpikeTrain {
  Vec amplitudes;  // length k
  Mat positions;   // k x d, row r = t_r
  ModelConfig config;
};

// a*delta_t + b*delta'_{t,v}. A pure Dirac has b = 0 (v then unused).
struct GeneralizedDipole {
  double a = 0.0;
  double b = 0.0;
  Vec t;
  Vec v;
};

Vec pack(const SpikeTrain& spikes);
SpikeTrain unpack(const Vec& theta, const ModelConfig& config);

// Minimum pairwise l2 distance between positions; +inf for k = 1 (no pair
// constraint, k=1 trains are always separated).
double min_separation(const SpikeTrain& spikes);

// Membership in Theta_{k,eps}: min_separation strictly > epsilon and every
// position inside the closed ball of radius R.
bool is_in_theta(const SpikeTrain& spikes);

struct SampleOptions {
  std::pair<double, double> amplitude_range{0.5, 1.5};
  // When set, the amplitude range must exclude 0 (certificates assume
  // min_r |a_r| > 0).
  bool nonvanishing = true;
  std::uint64_t attempt_budget = 1'000'000;
  // Shrinks the sampling radius to R - interior_margin, keeping positions in
  // the interior of the domain ball. Default 0 samples the full ball.
  double interior_margin = 0.0;
};

// Rejection-samples a separated train; deterministic under seed. Throws
// SamplingExhausted once the attempt budget is spent (the separated set is
// empty or very thin for the given k, epsilon, R).
SpikeTrain sample_theta(const ModelConfig& config, const SampleOptions& opts,
                        std::uint64_t rng_seed);

// Uniform draw from the open packed-parameter ball of radius beta around the
// given train (normalized Gaussian direction, radius beta * U^(1/n)).
SpikeTrain perturb(const SpikeTrain& spikes, double beta,
                   std::uint64_t rng_seed);

// Uniform point in the d-dimensional l2 ball of the given radius.
Vec sample_in_ball(int d, double radius, std::uint64_t rng_seed);

}  // namespace spikebasin
