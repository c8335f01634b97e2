#include "spikebasin/spike_model.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace spikebasin;

TEST_CASE("packing follows the canonical layout") {
  SpikeTrain t;
  t.config = ModelConfig{1, 1, 0.5, 2.0};
  t.amplitudes = Vec::Constant(1, 2.0);
  t.positions = Mat::Constant(1, 1, 0.5);
  const Vec packed = pack(t);
  CHECK(packed.size() == 2);
  CHECK(packed[0] == 2.0);
  CHECK(packed[1] == 0.5);

  SpikeTrain t2;
  t2.config = ModelConfig{2, 2, 0.5, 3.0};
  t2.amplitudes = Vec(2);
  t2.amplitudes << 1.0, -1.0;
  t2.positions = Mat(2, 2);
  t2.positions << 0.0, 0.0, 1.0, 1.0;
  const Vec p2 = pack(t2);
  Vec expect(6);
  expect << 1.0, -1.0, 0.0, 0.0, 1.0, 1.0;
  CHECK((p2 - expect).norm() == 0.0);
}

TEST_CASE("pack/unpack round-trip is exact") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss(0.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int k = 1 + static_cast<int>(rng() % 5);
    const int d = 1 + static_cast<int>(rng() % 3);
    ModelConfig config{k, d, 0.1, 5.0};
    Vec theta(config.dim());
    for (int i = 0; i < theta.size(); ++i) theta[i] = gauss(rng);
    const Vec back = pack(unpack(theta, config));
    CHECK((back - theta).norm() == 0.0);
  }
}

TEST_CASE("min_separation") {
  SpikeTrain t;
  t.config = ModelConfig{3, 1, 0.5, 5.0};
  t.amplitudes = Vec::Ones(3);
  t.positions = Mat(3, 1);
  t.positions << 0.0, 1.0, 3.0;
  CHECK(min_separation(t) == doctest::Approx(1.0));

  SpikeTrain t2;
  t2.config = ModelConfig{2, 2, 0.5, 10.0};
  t2.amplitudes = Vec::Ones(2);
  t2.positions = Mat(2, 2);
  t2.positions << 0.0, 0.0, 3.0, 4.0;
  CHECK(min_separation(t2) == doctest::Approx(5.0));

  SpikeTrain single;
  single.config = ModelConfig{1, 1, 0.5, 1.0};
  single.amplitudes = Vec::Ones(1);
  single.positions = Mat::Zero(1, 1);
  CHECK(std::isinf(min_separation(single)));
}

TEST_CASE("is_in_theta uses strict separation and the closed ball") {
  const auto make = [](double second_pos, double R) {
    SpikeTrain t;
    t.config = ModelConfig{2, 1, 1.0, R};
    t.amplitudes = Vec::Ones(2);
    t.positions = Mat(2, 1);
    t.positions << 0.0, second_pos;
    return t;
  };
  CHECK(is_in_theta(make(1.5, 2.0)));
  CHECK_FALSE(is_in_theta(make(1.0, 2.0)));  // boundary excluded
  CHECK_FALSE(is_in_theta(make(1.5, 1.0)));  // outside the ball
  CHECK(is_in_theta(make(1.0 + 1e-12, 2.0)));
}

TEST_CASE("sample_theta draws separated trains, deterministically") {
  ModelConfig config{3, 1, 0.5, 2.0};
  SampleOptions opts;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const SpikeTrain t = sample_theta(config, opts, seed);
    CHECK(is_in_theta(t));
    for (int r = 0; r < 3; ++r) {
      CHECK(t.amplitudes[r] >= 0.5);
      CHECK(t.amplitudes[r] <= 1.5);
    }
  }
  const SpikeTrain a = sample_theta(config, opts, 42);
  const SpikeTrain b = sample_theta(config, opts, 42);
  CHECK((pack(a) - pack(b)).norm() == 0.0);

  ModelConfig single{1, 2, 0.5, 1.0};
  CHECK(is_in_theta(sample_theta(single, opts, 3)));
}

TEST_CASE("sample_theta exhausts when the separated set is empty") {
  // At most 3 points with spacing > 1 fit in [-1, 1].
  ModelConfig config{10, 1, 1.0, 1.0};
  SampleOptions opts;
  opts.attempt_budget = 20'000;
  CHECK_THROWS_AS(sample_theta(config, opts, 0), SamplingExhausted);
}

TEST_CASE("sample_theta rejects an amplitude range straddling zero") {
  ModelConfig config{2, 1, 0.2, 2.0};
  SampleOptions opts;
  opts.amplitude_range = {-1.0, 1.0};
  opts.nonvanishing = true;
  CHECK_THROWS_AS(sample_theta(config, opts, 0), ConfigError);
  opts.nonvanishing = false;
  CHECK_NOTHROW(sample_theta(config, opts, 0));
}

TEST_CASE("perturb stays in the open ball") {
  ModelConfig config{2, 2, 0.3, 3.0};
  SampleOptions opts;
  const SpikeTrain base = sample_theta(config, opts, 11);

  const SpikeTrain same = perturb(base, 0.0, 5);
  CHECK((pack(same) - pack(base)).norm() == 0.0);

  const double beta = 0.37;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const SpikeTrain p = perturb(base, beta, seed);
    CHECK((pack(p) - pack(base)).norm() < beta);
  }
}

TEST_CASE("perturb radius matches the uniform-ball mean") {
  ModelConfig config{2, 1, 0.3, 3.0};
  SampleOptions opts;
  const SpikeTrain base = sample_theta(config, opts, 13);
  const int n = config.dim();
  const double beta = 1.0;
  const int draws = 10'000;

  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double r = (pack(perturb(base, beta, 1000 + i)) - pack(base)).norm();
    sum += r;
    sum_sq += r * r;
  }
  const double mean = sum / draws;
  const double expect = beta * n / (n + 1.0);
  const double var = beta * beta * n / (n + 2.0) - expect * expect;
  const double se = std::sqrt(var / draws);
  CHECK(std::abs(mean - expect) <= 3.0 * se);
}

TEST_CASE("config invariants") {
  CHECK_THROWS_AS((ModelConfig{0, 1, 0.5, 1.0}.validate()), ConfigError);
  CHECK_THROWS_AS((ModelConfig{1, 0, 0.5, 1.0}.validate()), ConfigError);
  CHECK_THROWS_AS((ModelConfig{1, 1, -0.5, 1.0}.validate()), ConfigError);
  CHECK_THROWS_AS((ModelConfig{2, 1, 2.0, 1.0}.validate()), ConfigError);
  CHECK_NOTHROW((ModelConfig{1, 1, 2.0, 1.0}.validate()));  // k=1: no pair bound
}
