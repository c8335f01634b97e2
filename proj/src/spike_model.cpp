#include "spikebasin/spike_model.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace spikebasin {

void ModelConfig::validate() const {
  std::ostringstream err;
  if (k < 1) err << "k must be >= 1 (got " << k << "); ";
  if (d < 1) err << "d must be >= 1 (got " << d << "); ";
  if (!(epsilon > 0)) err << "epsilon must be > 0 (got " << epsilon << "); ";
  if (!(R > 0)) err << "R must be > 0 (got " << R << "); ";
  if (k >= 2 && !(epsilon < 2 * R))
    err << "epsilon must be < 2R for k >= 2 (got epsilon=" << epsilon
        << ", R=" << R << "); ";
  const std::string msg = err.str();
  if (!msg.empty()) throw ConfigError("invalid model config: " + msg);
}

Vec pack(const SpikeTrain& spikes) {
  const int k = spikes.config.k;
  const int d = spikes.config.d;
  Vec theta(k * (d + 1));
  theta.head(k) = spikes.amplitudes;
  for (int r = 0; r < k; ++r)
    theta.segment(k + r * d, d) = spikes.positions.row(r).transpose();
  return theta;
}

SpikeTrain unpack(const Vec& theta, const ModelConfig& config) {
  const int k = config.k;
  const int d = config.d;
  if (theta.size() != config.dim())
    throw ConfigError("unpack: theta has length " +
                      std::to_string(theta.size()) + ", expected " +
                      std::to_string(config.dim()));
  SpikeTrain out;
  out.config = config;
  out.amplitudes = theta.head(k);
  out.positions.resize(k, d);
  for (int r = 0; r < k; ++r)
    out.positions.row(r) = theta.segment(k + r * d, d).transpose();
  return out;
}

double min_separation(const SpikeTrain& spikes) {
  const int k = spikes.config.k;
  if (k < 2) return std::numeric_limits<double>::infinity();
  double best = std::numeric_limits<double>::infinity();
  for (int r = 0; r < k; ++r)
    for (int s = r + 1; s < k; ++s) {
      const double dist = (spikes.positions.row(r) - spikes.positions.row(s)).norm();
      if (dist < best) best = dist;
    }
  return best;
}

bool is_in_theta(const SpikeTrain& spikes) {
  if (!(min_separation(spikes) > spikes.config.epsilon)) return false;
  for (int r = 0; r < spikes.config.k; ++r)
    if (spikes.positions.row(r).norm() > spikes.config.R) return false;
  return true;
}

Vec sample_in_ball(int d, double radius, std::uint64_t rng_seed) {
  std::mt19937_64 rng(rng_seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Vec dir(d);
  double n = 0.0;
  do {
    for (int j = 0; j < d; ++j) dir[j] = gauss(rng);
    n = dir.norm();
  } while (n == 0.0);
  const double r = radius * std::pow(unif(rng), 1.0 / d);
  return (r / n) * dir;
}

SpikeTrain sample_theta(const ModelConfig& config, const SampleOptions& opts,
                        std::uint64_t rng_seed) {
  config.validate();
  const auto [lo, hi] = opts.amplitude_range;
  if (lo > hi) throw ConfigError("sample_theta: empty amplitude range");
  if (opts.nonvanishing && lo <= 0.0 && hi >= 0.0)
    throw ConfigError(
        "sample_theta: amplitude range must exclude 0 when nonvanishing");
  const double radius = config.R - opts.interior_margin;
  if (!(radius > 0))
    throw ConfigError("sample_theta: interior margin leaves no domain");

  std::mt19937_64 rng(mix_seed(rng_seed, 0x5a4d));
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  SpikeTrain out;
  out.config = config;
  out.amplitudes.resize(config.k);
  out.positions.resize(config.k, config.d);
  for (int r = 0; r < config.k; ++r)
    out.amplitudes[r] = lo + (hi - lo) * unif(rng);

  for (std::uint64_t attempt = 0; attempt < opts.attempt_budget; ++attempt) {
    for (int r = 0; r < config.k; ++r) {
      Vec dir(config.d);
      double n = 0.0;
      do {
        for (int j = 0; j < config.d; ++j) dir[j] = gauss(rng);
        n = dir.norm();
      } while (n == 0.0);
      const double rad = radius * std::pow(unif(rng), 1.0 / config.d);
      out.positions.row(r) = (rad / n) * dir.transpose();
    }
    if (min_separation(out) > config.epsilon) return out;
  }
  throw SamplingExhausted(
      "sample_theta: no separated configuration found after " +
      std::to_string(opts.attempt_budget) +
      " attempts (epsilon too large for k, R?)");
}

SpikeTrain perturb(const SpikeTrain& spikes, double beta,
                   std::uint64_t rng_seed) {
  if (beta < 0) throw ConfigError("perturb: beta must be >= 0");
  if (beta == 0.0) return spikes;
  const int n = spikes.config.dim();
  std::mt19937_64 rng(mix_seed(rng_seed, 0x9e37));
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Vec dir(n);
  double nrm = 0.0;
  do {
    for (int i = 0; i < n; ++i) dir[i] = gauss(rng);
    nrm = dir.norm();
  } while (nrm == 0.0);
  // U in [0,1) keeps the draw strictly inside the open ball.
  const double radius = beta * std::pow(unif(rng), 1.0 / n);
  return unpack(pack(spikes) + (radius / nrm) * dir, spikes.config);
}

}  // namespace spikebasin
