// solver.hpp — fixed-step gradient descent, basin probing, the separation
// repulsion heuristic, and the d=1 interpolation-path check.
#pragma once

#include "spikebasin/common.hpp"
#include "spikebasin/objective.hpp"
#include "spikebasin/spike_model.hpp"

#include <optional>
#include <vector>

namespace spikebasin {

struct DescentSettings {
  double tau = 1e-2;
  int max_iters = 10'000;
  double grad_tol = 1e-9;
  // When a reference train is given and dist_tol > 0, stop once
  // ||theta_n - theta_ref||_2 <= dist_tol.
  double dist_tol = 0.0;
  bool project_separation = false;  // experimental repulsion-projected mode
  bool record_trace = true;
  // Armijo backtracking from tau (factor 0.5, slope 1e-4); an extension used
  // when no certified step size is available.
  bool armijo = false;
};

enum class Termination { GradTol, DistTol, MaxIters, Diverged };

const char* to_string(Termination t);

struct DescentTrace {
  // Per-iteration history (present when record_trace): entry i describes
  // iterate i, starting at the initial point.
  std::vector<Vec> iterates;
  std::vector<double> objective_values;
  std::vector<double> gradient_norms;
  std::vector<double> distances_to_ref;  // empty without a reference
  std::vector<double> min_separations;

  Termination termination = Termination::MaxIters;
  int iterations = 0;  // steps actually taken
  Vec final_theta;
  double final_objective = 0.0;
  double final_gradient_norm = 0.0;
  double final_distance_to_ref = -1.0;  // -1 when no reference
  bool left_reference_ball = false;     // any iterate farther than the start
  // Fraction of steps with nonincreasing distance to the reference.
  double dist_monotone_fraction = 1.0;
};

DescentTrace gradient_descent(const Objective& obj, const SpikeTrain& theta0,
                              const DescentSettings& settings,
                              const std::optional<SpikeTrain>& theta_ref = {});

struct ProbeTrial {
  Termination termination = Termination::MaxIters;
  double final_distance = 0.0;
  double final_gradient_norm = 0.0;
  int iterations = 0;
  // Fraction of recorded steps with nonincreasing distance to theta_star.
  double monotone_fraction = 1.0;
};

struct ProbeStats {
  double beta = 0.0;
  int trials = 0;
  int successes = 0;
  double tau = 0.0;
  std::uint64_t seed = 0;
  std::vector<ProbeTrial> per_trial;
};

// Perturb theta_star at radius beta, descend, count successes
// (final distance <= settings.dist_tol). Trials run with independent derived
// seeds and are reported in trial order.
ProbeStats probe_basin(const Objective& obj, const SpikeTrain& theta_star,
                       double beta, int trials, const DescentSettings& settings,
                       std::uint64_t rng_seed);

// Pushes positions apart until min_separation >= epsilon * (1 + 1e-9).
// d=1 uses the minimal-total-displacement solution (pool-adjacent-violators
// on gap-shifted positions); d>=2 uses an iterative pairwise push-apart
// heuristic. Amplitudes are unchanged. Throws InfeasibleSeparation when k
// spikes cannot fit in the domain ball at spacing epsilon.
SpikeTrain repel_projection(const SpikeTrain& theta);

struct PathPoint {
  double lambda = 0.0;
  SpikeTrain theta;
  double g_value = 0.0;
};

// d=1 intermediate-value construction: sorts both endpoint trains, walks the
// segment theta_lambda = (1-lambda) theta0 + lambda theta1 and returns a
// lambda with |g(theta_lambda) - alpha| <= 1e-8 (1 + alpha). Requires
// g(theta0) <= alpha <= g(theta1) (else AlphaOutOfRange) and asserts strict
// epsilon-separation at every point it evaluates.
PathPoint interpolation_path_check(const Objective& obj,
                                   const SpikeTrain& theta0,
                                   const SpikeTrain& theta1, double alpha,
                                   int grid);

}  // namespace spikebasin
