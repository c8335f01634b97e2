#include "spikebasin/measurement.hpp"

#include "spikebasin/validate.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace spikebasin;

namespace {

FourierOperator single_frequency(double omega) {
  FourierOperator op;
  op.frequencies = Mat::Constant(1, 1, omega);
  op.weights = Vec::Ones(1);
  return op;
}

}  // namespace

TEST_CASE("random operator is deterministic and matches the kernel in mean") {
  const FourierOperator a = draw_random_operator(256, 0.8, 2, 42);
  const FourierOperator b = draw_random_operator(256, 0.8, 2, 42);
  CHECK((a.frequencies - b.frequencies).norm() == 0.0);
  const FourierOperator c = draw_random_operator(256, 0.8, 2, 43);
  CHECK((a.frequencies - c.frequencies).norm() != 0.0);

  // E[(A delta_t) . conj(A delta_s)] -> rho(||t-s||) at large m.
  const double sigma = 1.0;
  const FourierOperator big = draw_random_operator(100'000, sigma, 1, 7);
  Vec t = Vec::Constant(1, 0.25), s = Vec::Constant(1, -0.55);
  const double mc = dot_re(apply_dirac(big, t), apply_dirac(big, s));
  const double expect = std::exp(-std::pow(0.25 + 0.55, 2) / (2 * sigma * sigma));
  CHECK(std::abs(mc - expect) <= 0.01);
}

TEST_CASE("zero frequency maps every Dirac to one") {
  const FourierOperator op = single_frequency(0.0);
  for (double t : {-1.0, 0.0, 2.5}) {
    const CVec v = apply_dirac(op, Vec::Constant(1, t));
    CHECK(std::abs(v[0] - Complex(1.0, 0.0)) <= 1e-15);
  }
}

TEST_CASE("apply: unit modulus, linearity, closed value") {
  ModelConfig config{1, 1, 0.1, 2.0};
  SpikeTrain t;
  t.config = config;
  t.amplitudes = Vec::Ones(1);
  t.positions = Mat::Constant(1, 1, 1.0);

  const FourierOperator pi_op = single_frequency(M_PI);
  const CVec v = apply(pi_op, t);
  CHECK(std::abs(v[0] - Complex(-1.0, 0.0)) <= 1e-12);  // e^{-i pi}

  const FourierOperator op = draw_random_operator(64, 1.0, 1, 5);
  const CVec single = apply(op, t);
  for (int l = 0; l < 64; ++l)
    CHECK(std::abs(single[l]) == doctest::Approx(1.0 / 8.0).epsilon(1e-12));

  // Linearity over random superpositions.
  std::mt19937_64 rng(11);
  std::normal_distribution<double> gauss(0.0, 1.0);
  ModelConfig c2{2, 1, 0.1, 2.0};
  for (int trial = 0; trial < 20; ++trial) {
    SpikeTrain x, y;
    for (auto* tr : {&x, &y}) {
      tr->config = c2;
      tr->amplitudes = Vec(2);
      tr->positions = Mat(2, 1);
      for (int r = 0; r < 2; ++r) {
        tr->amplitudes[r] = gauss(rng);
        tr->positions(r, 0) = gauss(rng);
      }
    }
    const double a = gauss(rng), b = gauss(rng);
    SpikeTrain ax = x, by = y;
    ax.amplitudes *= a;
    by.amplitudes *= b;
    const CVec lhs = apply(op, ax) + apply(op, by);
    const CVec rhs = a * apply(op, x) + b * apply(op, y);
    CHECK(std::sqrt(norm_sq(CVec(lhs - rhs))) <= 1e-12);
  }
}

TEST_CASE("dirac derivative: closed form and defining limit") {
  const FourierOperator unit = single_frequency(1.0);
  const CVec v =
      apply_dirac_derivative(unit, Vec::Zero(1), Vec::Ones(1));
  CHECK(std::abs(v[0] - Complex(0.0, 1.0)) <= 1e-15);  // i <omega, v>

  const FourierOperator zero = single_frequency(0.0);
  CHECK(norm_sq(apply_dirac_derivative(zero, Vec::Zero(1), Vec::Ones(1))) ==
        0.0);

  CHECK_THROWS_AS(
      apply_dirac_derivative(unit, Vec::Zero(1), Vec::Constant(1, 2.0)),
      std::invalid_argument);

  // -(delta_{t+eta v} - delta_t)/eta -> delta'_{t,v} under A, order 1.
  const FourierOperator op = draw_random_operator(128, 0.9, 2, 3);
  Vec t(2), dir(2);
  t << 0.2, -0.4;
  dir << 1.0, -2.0;
  dir /= dir.norm();
  const CVec exact = apply_dirac_derivative(op, t, dir);
  const double eta = 1e-5;
  const CVec fd = (apply_dirac(op, t) - apply_dirac(op, Vec(t + eta * dir))) / eta;
  CHECK(std::sqrt(norm_sq(CVec(exact - fd))) <= 1e-3);

  std::vector<double> etas{1e-2, 1e-3, 1e-4}, errs;
  for (double e : etas) {
    const CVec f = (apply_dirac(op, t) - apply_dirac(op, Vec(t + e * dir))) / e;
    errs.push_back(std::sqrt(norm_sq(CVec(exact - f))));
  }
  CHECK(fit_order(etas, errs) >= 0.9);
}

TEST_CASE("dirac second derivative: bound and second-difference oracle") {
  const FourierOperator zero = single_frequency(0.0);
  CHECK(norm_sq(apply_dirac_second_derivative(zero, Vec::Zero(1), Vec::Ones(1),
                                              Vec::Ones(1))) == 0.0);

  const FourierOperator op = draw_random_operator(128, 0.9, 2, 13);
  const double D = compute_D_A_R(op);
  Vec t(2), v(2);
  t << -0.1, 0.3;
  v << 0.6, 0.8;
  const CVec sec = apply_dirac_second_derivative(op, t, v, v);
  CHECK(std::sqrt(norm_sq(sec)) <= std::sqrt(op.m()) * D * (1 + 1e-12));

  // Symmetry in the two directions.
  Vec w(2);
  w << -0.8, 0.6;
  const CVec ab = apply_dirac_second_derivative(op, t, v, w);
  const CVec ba = apply_dirac_second_derivative(op, t, w, v);
  CHECK(std::sqrt(norm_sq(CVec(ab - ba))) == 0.0);

  const double eta = 1e-3;
  const CVec fd2 = (apply_dirac(op, Vec(t + eta * v)) - 2.0 * apply_dirac(op, t) +
                    apply_dirac(op, Vec(t - eta * v))) /
                   (eta * eta);
  CHECK(std::sqrt(norm_sq(CVec(sec - fd2))) <= 1e-2);
}

TEST_CASE("directional-derivative sum lemma") {
  const FourierOperator op = draw_random_operator(96, 1.1, 3, 17);
  std::mt19937_64 rng(19);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec t(3);
  t << 0.1, 0.2, -0.3;
  for (int trial = 0; trial < 20; ++trial) {
    Vec u(3);
    for (int i = 0; i < 3; ++i) u[i] = gauss(rng);
    CVec lhs = CVec::Zero(op.m());
    for (int j = 0; j < 3; ++j) {
      Vec ej = Vec::Zero(3);
      ej[j] = 1.0;
      lhs += u[j] * apply_dirac_derivative(op, t, ej);
    }
    const CVec rhs =
        u.norm() * apply_dirac_derivative(op, t, Vec(u / u.norm()));
    CHECK(std::sqrt(norm_sq(CVec(lhs - rhs))) <= 1e-12);
  }
}

TEST_CASE("D_A_R closed values") {
  CHECK(compute_D_A_R(single_frequency(0.0)) == 0.0);

  FourierOperator op;
  op.frequencies = Mat(1, 2);
  op.frequencies << 3.0, 4.0;
  op.weights = Vec::Ones(1);
  CHECK(compute_D_A_R(op) == doctest::Approx(25.0));
}

TEST_CASE("estimate_rip") {
  ModelConfig config{2, 1, 0.5, 2.0};
  const RadialKernel kern = gaussian_kernel(0.4);
  const FourierOperator op = draw_random_operator(2048, 0.4, 1, 29);

  const RipEstimate est = estimate_rip(op, config, kern, 50, 31, false);
  CHECK(est.gamma_lower >= 0.0);
  CHECK(est.ratio_min <= est.ratio_max);
  CHECK(est.gamma_lower ==
        doctest::Approx(std::max(1.0 - est.ratio_min, est.ratio_max - 1.0)));

  const RipEstimate est2 = estimate_rip(op, config, kern, 50, 31, true);
  CHECK(est2.gamma_lower >= 0.0);

  // Zero-amplitude sampling makes every secant degenerate: all trials are
  // skipped and the estimator reports it.
  SampleOptions zero_amp;
  zero_amp.amplitude_range = {0.0, 0.0};
  zero_amp.nonvanishing = false;
  CHECK_THROWS_AS(estimate_rip(op, config, kern, 1, 31, false, zero_amp),
                  AllSamplesDegenerate);
}

TEST_CASE("rip concentration at large m (advisory)") {
  ModelConfig config{2, 1, 1.0, 2.0};
  const double sigma = sigma_from_k(2);
  const RadialKernel kern = gaussian_kernel(sigma);
  const FourierOperator op = draw_random_operator(20'000, sigma, 1, 37);
  const RipEstimate est = estimate_rip(op, config, kern, 30, 41, false);
  if (est.gamma_lower > 0.3)
    MESSAGE("advisory: gamma_lower=" << est.gamma_lower
                                     << " exceeded the concentration guide 0.3");
  CHECK(est.ratio_min <= 1.1);  // sanity: ratios straddle 1 for an unbiased A
  CHECK(est.ratio_max >= 0.9);
}
