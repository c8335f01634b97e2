#include "spikebasin/measurement.hpp"

#include "spikebasin/parallel.hpp"

#include <atomic>
#include <cmath>
#include <iostream>
#include <random>
#include <vector>

namespace spikebasin {

FourierOperator draw_random_operator(int m, double sigma, int d,
                                     std::uint64_t rng_seed) {
  if (m < 1) throw ConfigError("draw_random_operator: m must be >= 1");
  if (!(sigma > 0)) throw ConfigError("draw_random_operator: sigma must be > 0");
  if (d < 1) throw ConfigError("draw_random_operator: d must be >= 1");
  std::mt19937_64 rng(mix_seed(rng_seed, 0xf0f0));
  std::normal_distribution<double> gauss(0.0, 1.0 / sigma);
  FourierOperator op;
  op.frequencies.resize(m, d);
  for (int l = 0; l < m; ++l)
    for (int j = 0; j < d; ++j) op.frequencies(l, j) = gauss(rng);
  op.weights = Vec::Ones(m);
  op.seed = rng_seed;
  return op;
}

FourierOperator grid_operator(int m, double spacing) {
  if (m < 1) throw ConfigError("grid_operator: m must be >= 1");
  FourierOperator op;
  op.frequencies.resize(m, 1);
  for (int l = 0; l < m; ++l)
    op.frequencies(l, 0) = spacing * (l - 0.5 * (m - 1));
  op.weights = Vec::Ones(m);
  return op;
}

CVec apply_dirac(const FourierOperator& op, const Vec& t) {
  const int m = op.m();
  const double nf = op.norm_factor();
  CVec out(m);
  for (int l = 0; l < m; ++l) {
    const double phase = op.frequencies.row(l).dot(t);
    out[l] = nf * op.weights[l] * Complex(std::cos(phase), -std::sin(phase));
  }
  return out;
}

CVec apply(const FourierOperator& op, const SpikeTrain& spikes) {
  static std::atomic<bool> warned{false};
  for (int r = 0; r < spikes.config.k; ++r) {
    if (spikes.positions.row(r).norm() > spikes.config.R) {
      if (!warned.exchange(true))
        std::cerr << "spikebasin: spike position outside the domain ball "
                     "(further warnings suppressed)\n";
      break;
    }
  }
  CVec out = CVec::Zero(op.m());
  for (int r = 0; r < spikes.config.k; ++r)
    out += spikes.amplitudes[r] *
           apply_dirac(op, spikes.positions.row(r).transpose());
  return out;
}

CVec apply_dirac_derivative(const FourierOperator& op, const Vec& t,
                            const Vec& v) {
  if (std::abs(v.norm() - 1.0) > 1e-9)
    throw std::invalid_argument(
        "apply_dirac_derivative: direction must be a unit vector");
  const CVec base = apply_dirac(op, t);
  CVec out(op.m());
  for (int l = 0; l < op.m(); ++l) {
    const double wv = op.frequencies.row(l).dot(v);
    out[l] = Complex(0.0, wv) * base[l];
  }
  return out;
}

CVec apply_dirac_second_derivative(const FourierOperator& op, const Vec& t,
                                   const Vec& v1, const Vec& v2) {
  if (std::abs(v1.norm() - 1.0) > 1e-9 || std::abs(v2.norm() - 1.0) > 1e-9)
    throw std::invalid_argument(
        "apply_dirac_second_derivative: directions must be unit vectors");
  const CVec base = apply_dirac(op, t);
  CVec out(op.m());
  for (int l = 0; l < op.m(); ++l) {
    const double w1 = op.frequencies.row(l).dot(v1);
    const double w2 = op.frequencies.row(l).dot(v2);
    out[l] = -w1 * w2 * base[l];
  }
  return out;
}

double compute_D_A_R(const FourierOperator& op) {
  const double nf = op.norm_factor();
  double best = 0.0;
  for (int l = 0; l < op.m(); ++l)
    best = std::max(best, std::abs(op.weights[l]) *
                              op.frequencies.row(l).squaredNorm());
  return nf * best;
}

CVec apply_dipoles(const FourierOperator& op,
                   std::span<const GeneralizedDipole> dipoles) {
  CVec out = CVec::Zero(op.m());
  for (const auto& nu : dipoles) {
    if (nu.a != 0.0) out += nu.a * apply_dirac(op, nu.t);
    if (nu.b != 0.0) out += nu.b * apply_dirac_derivative(op, nu.t, nu.v);
  }
  return out;
}

RipEstimate estimate_rip(const FourierOperator& op, const ModelConfig& config,
                         const RadialKernel& kernel, int trials,
                         std::uint64_t rng_seed, bool include_derivatives,
                         const SampleOptions& sampling) {
  if (trials < 1) throw ConfigError("estimate_rip: trials must be >= 1");
  config.validate();

  std::vector<double> ratios(trials,
                             std::numeric_limits<double>::quiet_NaN());
  const double amp_span =
      std::max(std::abs(sampling.amplitude_range.first),
               std::abs(sampling.amplitude_range.second));

  parallel_trials(trials, [&](int trial) {
    const std::uint64_t s = mix_seed(rng_seed, static_cast<std::uint64_t>(trial));
    std::vector<GeneralizedDipole> x;
    if (include_derivatives) {
      // One generalized dipole per separated support point.
      const SpikeTrain support = sample_theta(config, sampling, s);
      std::mt19937_64 rng(mix_seed(s, 0xd1));
      std::uniform_real_distribution<double> unif(-amp_span, amp_span);
      std::normal_distribution<double> gauss(0.0, 1.0);
      for (int r = 0; r < config.k; ++r) {
        GeneralizedDipole nu;
        nu.t = support.positions.row(r).transpose();
        nu.a = unif(rng);
        nu.b = unif(rng);
        Vec v(config.d);
        double n = 0.0;
        do {
          for (int j = 0; j < config.d; ++j) v[j] = gauss(rng);
          n = v.norm();
        } while (n == 0.0);
        nu.v = v / n;
        x.push_back(nu);
      }
    } else {
      const SpikeTrain a = sample_theta(config, sampling, mix_seed(s, 1));
      const SpikeTrain b = sample_theta(config, sampling, mix_seed(s, 2));
      for (int r = 0; r < config.k; ++r) {
        x.push_back(dirac(a.amplitudes[r], a.positions.row(r).transpose()));
        x.push_back(dirac(-b.amplitudes[r], b.positions.row(r).transpose()));
      }
    }
    const double h_sq = measure_norm_h_sq(x, kernel);
    if (h_sq < 1e-12) return;  // degenerate sample, skip
    ratios[trial] = norm_sq(apply_dipoles(op, x)) / h_sq;
  });

  RipEstimate est;
  est.trials = trials;
  est.seed = rng_seed;
  bool any = false;
  for (double r : ratios) {
    if (std::isnan(r)) continue;
    if (!any) {
      est.ratio_min = est.ratio_max = r;
      any = true;
    } else {
      est.ratio_min = std::min(est.ratio_min, r);
      est.ratio_max = std::max(est.ratio_max, r);
    }
  }
  if (!any)
    throw AllSamplesDegenerate(
        "estimate_rip: every sampled secant had negligible kernel norm");
  est.gamma_lower =
      std::max({1.0 - est.ratio_min, est.ratio_max - 1.0, 0.0});
  return est;
}

}  // namespace spikebasin
