#include "spikebasin/solver.hpp"

#include "spikebasin/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace spikebasin {

const char* to_string(Termination t) {
  switch (t) {
    case Termination::GradTol: return "grad_tol";
    case Termination::DistTol: return "dist_tol";
    case Termination::MaxIters: return "max_iters";
    case Termination::Diverged: return "diverged";
  }
  return "unknown";
}

DescentTrace gradient_descent(const Objective& obj, const SpikeTrain& theta0,
                              const DescentSettings& settings,
                              const std::optional<SpikeTrain>& theta_ref) {
  if (!(settings.tau > 0)) throw ConfigError("gradient_descent: tau must be > 0");
  if (settings.grad_tol < 0 || settings.dist_tol < 0)
    throw ConfigError("gradient_descent: tolerances must be >= 0");

  const ModelConfig& config = theta0.config;
  const bool has_ref = theta_ref.has_value();
  const Vec ref = has_ref ? pack(*theta_ref) : Vec();

  DescentTrace trace;
  Vec theta = pack(theta0);
  double g = eval(obj, theta0);
  const double g0 = g;
  double initial_dist = has_ref ? (theta - ref).norm() : -1.0;
  double prev_dist = initial_dist;
  int monotone_steps = 0;
  int counted_steps = 0;
  bool diverged_pending = false;

  for (int n = 0;; ++n) {
    const SpikeTrain cur = unpack(theta, config);
    const Vec grad = gradient(obj, cur);
    const double gn = grad.norm();
    const double dist = has_ref ? (theta - ref).norm() : -1.0;

    if (settings.record_trace) {
      trace.iterates.push_back(theta);
      trace.objective_values.push_back(g);
      trace.gradient_norms.push_back(gn);
      trace.min_separations.push_back(min_separation(cur));
      if (has_ref) trace.distances_to_ref.push_back(dist);
    }
    if (has_ref && n > 0) {
      ++counted_steps;
      if (dist <= prev_dist) ++monotone_steps;
      if (dist > initial_dist) trace.left_reference_ball = true;
      prev_dist = dist;
    }

    trace.iterations = n;
    trace.final_theta = theta;
    trace.final_objective = g;
    trace.final_gradient_norm = gn;
    trace.final_distance_to_ref = dist;

    if (diverged_pending) {
      trace.termination = Termination::Diverged;
      break;
    }
    if (gn <= settings.grad_tol) {
      trace.termination = Termination::GradTol;
      break;
    }
    if (has_ref && settings.dist_tol > 0 && dist <= settings.dist_tol) {
      trace.termination = Termination::DistTol;
      break;
    }
    if (n >= settings.max_iters) {
      trace.termination = Termination::MaxIters;
      break;
    }

    double step = settings.tau;
    Vec next = theta - step * grad;
    double g_next = eval(obj, unpack(next, config));
    if (settings.armijo) {
      while (g_next > g - 1e-4 * step * gn * gn && step > 1e-16 * settings.tau) {
        step *= 0.5;
        next = theta - step * grad;
        g_next = eval(obj, unpack(next, config));
      }
    }
    if (settings.project_separation) {
      next = pack(repel_projection(unpack(next, config)));
      g_next = eval(obj, unpack(next, config));
    }

    if (!next.allFinite() || !std::isfinite(g_next) ||
        (g0 > 0 && g_next > 1e6 * g0)) {
      diverged_pending = true;  // record the diverged iterate, then stop
    }
    theta = next;
    g = g_next;
  }

  trace.dist_monotone_fraction =
      counted_steps == 0 ? 1.0
                         : static_cast<double>(monotone_steps) / counted_steps;
  return trace;
}

ProbeStats probe_basin(const Objective& obj, const SpikeTrain& theta_star,
                       double beta, int trials, const DescentSettings& settings,
                       std::uint64_t rng_seed) {
  if (trials < 1) throw ConfigError("probe_basin: trials must be >= 1");
  ProbeStats stats;
  stats.beta = beta;
  stats.trials = trials;
  stats.tau = settings.tau;
  stats.seed = rng_seed;
  stats.per_trial.resize(trials);

  parallel_trials(trials, [&](int trial) {
    const SpikeTrain start = perturb(
        theta_star, beta, mix_seed(rng_seed, static_cast<std::uint64_t>(trial)));
    const DescentTrace trace =
        gradient_descent(obj, start, settings, theta_star);
    ProbeTrial& t = stats.per_trial[trial];
    t.termination = trace.termination;
    t.final_distance = trace.final_distance_to_ref;
    t.final_gradient_norm = trace.final_gradient_norm;
    t.iterations = trace.iterations;
    t.monotone_fraction = trace.dist_monotone_fraction;
  });

  for (const auto& t : stats.per_trial)
    if (t.final_distance <= settings.dist_tol) ++stats.successes;
  return stats;
}

namespace {

// Isotonic (nondecreasing) least-squares fit by pool-adjacent-violators.
std::vector<double> pav_nondecreasing(const std::vector<double>& z) {
  struct Block {
    double sum;
    int count;
    double value() const { return sum / count; }
  };
  std::vector<Block> blocks;
  blocks.reserve(z.size());
  for (double zi : z) {
    blocks.push_back({zi, 1});
    while (blocks.size() >= 2 &&
           blocks[blocks.size() - 2].value() > blocks.back().value()) {
      blocks[blocks.size() - 2].sum += blocks.back().sum;
      blocks[blocks.size() - 2].count += blocks.back().count;
      blocks.pop_back();
    }
  }
  std::vector<double> out;
  out.reserve(z.size());
  for (const auto& b : blocks)
    out.insert(out.end(), b.count, b.value());
  return out;
}

SpikeTrain repel_1d(const SpikeTrain& theta, double gap) {
  const int k = theta.config.k;
  const double R = theta.config.R;
  if ((k - 1) * gap > 2 * R)
    throw InfeasibleSeparation("repel_projection: " + std::to_string(k) +
                               " spikes at spacing " +
                               std::to_string(theta.config.epsilon) +
                               " cannot fit in the domain");

  std::vector<int> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return theta.positions(a, 0) < theta.positions(b, 0);
  });

  std::vector<double> z(k);
  for (int i = 0; i < k; ++i) z[i] = theta.positions(order[i], 0) - i * gap;
  const std::vector<double> zhat = pav_nondecreasing(z);

  std::vector<double> x(k);
  for (int i = 0; i < k; ++i) x[i] = zhat[i] + i * gap;

  // Shift the whole train into [-R, R] if the repulsion pushed it out.
  double shift = 0.0;
  const double lo_req = -R - x.front();
  const double hi_req = R - x.back();
  if (shift < lo_req) shift = lo_req;
  if (shift > hi_req) shift = hi_req;

  SpikeTrain out = theta;
  for (int i = 0; i < k; ++i) out.positions(order[i], 0) = x[i] + shift;
  return out;
}

SpikeTrain repel_nd(const SpikeTrain& theta, double gap) {
  const int k = theta.config.k;
  const int d = theta.config.d;
  const double R = theta.config.R;
  // Necessary packing condition: disjoint balls of radius gap/2 centered in
  // the domain fit inside the ball of radius R + gap/2.
  if (k * std::pow(gap / 2.0, d) > std::pow(R + gap / 2.0, d))
    throw InfeasibleSeparation(
        "repel_projection: spikes cannot fit in the domain at this spacing");

  SpikeTrain out = theta;
  constexpr int kMaxSweeps = 20'000;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool violated = false;
    for (int i = 0; i < k; ++i) {
      for (int j = i + 1; j < k; ++j) {
        Vec diff = (out.positions.row(i) - out.positions.row(j)).transpose();
        double dist = diff.norm();
        if (dist >= gap) continue;
        violated = true;
        Vec dir;
        if (dist < 1e-12) {
          // Coincident points: split along a fixed axis chosen by the pair.
          dir = Vec::Zero(d);
          dir[(i + j) % d] = 1.0;
        } else {
          dir = diff / dist;
        }
        const double push = 0.5 * (gap * (1.0 + 1e-7) - dist);
        out.positions.row(i) += (push * dir).transpose();
        out.positions.row(j) -= (push * dir).transpose();
        for (int r : {i, j}) {
          const double n = out.positions.row(r).norm();
          if (n > R) out.positions.row(r) *= R / n;
        }
      }
    }
    if (!violated) return out;
  }
  throw InfeasibleSeparation(
      "repel_projection: pairwise push-apart did not converge");
}

}  // namespace

SpikeTrain repel_projection(const SpikeTrain& theta) {
  theta.config.validate();
  const double gap = theta.config.epsilon * (1.0 + 1e-9);
  if (theta.config.k < 2 || min_separation(theta) >= gap) return theta;
  return theta.config.d == 1 ? repel_1d(theta, gap) : repel_nd(theta, gap);
}

PathPoint interpolation_path_check(const Objective& obj,
                                   const SpikeTrain& theta0,
                                   const SpikeTrain& theta1, double alpha,
                                   int grid) {
  if (theta0.config.d != 1)
    throw ConfigError("interpolation_path_check: d must be 1");
  if (grid < 2) throw ConfigError("interpolation_path_check: grid must be >= 2");
  if (!is_in_theta(theta0) || !is_in_theta(theta1))
    throw ConfigError(
        "interpolation_path_check: endpoints must lie in the separated set");

  const ModelConfig& config = theta0.config;
  const auto sorted = [&](const SpikeTrain& t) {
    std::vector<int> order(config.k);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return t.positions(a, 0) < t.positions(b, 0); });
    SpikeTrain out = t;
    for (int i = 0; i < config.k; ++i) {
      out.amplitudes[i] = t.amplitudes[order[i]];
      out.positions(i, 0) = t.positions(order[i], 0);
    }
    return out;
  };
  const Vec p0 = pack(sorted(theta0));
  const Vec p1 = pack(sorted(theta1));

  const auto at = [&](double lambda) {
    SpikeTrain t = unpack((1.0 - lambda) * p0 + lambda * p1, config);
    // The sorted-gap interpolation preserves strict separation; this guards
    // the construction on every evaluation.
    if (!is_in_theta(t))
      throw std::logic_error(
          "interpolation_path_check: interpolate left the separated set");
    return t;
  };

  const double g0 = eval(obj, at(0.0));
  const double g1 = eval(obj, at(1.0));
  const double tol = 1e-8 * (1.0 + alpha);
  if (std::abs(g0 - alpha) <= tol) return {0.0, at(0.0), g0};
  if (std::abs(g1 - alpha) <= tol) return {1.0, at(1.0), g1};
  if (alpha < g0 || alpha > g1)
    throw AlphaOutOfRange("interpolation_path_check: alpha=" +
                          std::to_string(alpha) + " outside [g(theta0)=" +
                          std::to_string(g0) + ", g(theta1)=" +
                          std::to_string(g1) + "]");

  // Bracket the first upward crossing of alpha on the grid, then bisect.
  double lo = 0.0, hi = 1.0;
  double v_lo = g0 - alpha;
  for (int i = 1; i <= grid; ++i) {
    const double lambda = static_cast<double>(i) / grid;
    const double v = eval(obj, at(lambda)) - alpha;
    if ((v_lo <= 0.0 && v >= 0.0) || (v_lo >= 0.0 && v <= 0.0)) {
      hi = lambda;
      break;
    }
    lo = lambda;
    v_lo = v;
  }

  double lambda = lo;
  double g_val = v_lo + alpha;
  for (int iter = 0; iter < 200; ++iter) {
    lambda = 0.5 * (lo + hi);
    g_val = eval(obj, at(lambda));
    if (std::abs(g_val - alpha) <= tol) break;
    if ((g_val - alpha > 0.0) == (v_lo > 0.0)) {
      lo = lambda;
      v_lo = g_val - alpha;
    } else {
      hi = lambda;
    }
  }
  if (std::abs(g_val - alpha) > tol)
    throw std::runtime_error(
        "interpolation_path_check: bisection failed to reach tolerance");
  return {lambda, at(lambda), g_val};
}

}  // namespace spikebasin
