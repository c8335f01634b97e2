#include "spikebasin/kernel.hpp"

#include "spikebasin/parallel.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <atomic>
#include <cmath>
#include <iostream>
#include <random>

namespace spikebasin {

namespace {

void require_unit_direction(const GeneralizedDipole& nu) {
  if (nu.b != 0.0 && std::abs(nu.v.norm() - 1.0) > 1e-9)
    throw std::invalid_argument(
        "generalized dipole direction must be a unit vector when b != 0");
}

}  // namespace

double RadialKernel::f(const Vec& t) const { return rho(t.norm()); }

double RadialKernel::f_dir(const Vec& t, const Vec& v) const {
  if (family == Family::gaussian) {
    const double s2 = sigma * sigma;
    return -(v.dot(t) / s2) * f(t);
  }
  const double r = t.norm();
  if (r < 1e-12) return rho2_at_0 * v.dot(t);
  return rho1(r) * v.dot(t) / r;
}

double RadialKernel::f_dir2(const Vec& t, const Vec& v1, const Vec& v2) const {
  if (family == Family::gaussian) {
    const double s2 = sigma * sigma;
    return (v1.dot(t) * v2.dot(t) / (s2 * s2) - v1.dot(v2) / s2) * f(t);
  }
  const double r = t.norm();
  if (r < 1e-12) return rho2_at_0 * v1.dot(v2);
  const double p1 = v1.dot(t) / r;
  const double p2 = v2.dot(t) / r;
  return rho2(r) * p1 * p2 + (rho1(r) / r) * (v1.dot(v2) - p1 * p2);
}

RadialKernel gaussian_kernel(double sigma) {
  if (!(sigma > 0)) throw ConfigError("gaussian_kernel: sigma must be > 0");
  RadialKernel k;
  const double s2 = sigma * sigma;
  k.rho = [s2](double u) { return std::exp(-u * u / (2 * s2)); };
  k.rho1 = [s2](double u) { return -(u / s2) * std::exp(-u * u / (2 * s2)); };
  k.rho2 = [s2](double u) {
    return (u * u / (s2 * s2) - 1.0 / s2) * std::exp(-u * u / (2 * s2));
  };
  k.rho2_at_0 = -1.0 / s2;
  k.name = "gaussian";
  k.family = RadialKernel::Family::gaussian;
  k.sigma = sigma;
  return k;
}

double sigma_from_k(int k) {
  if (k < 1) throw ConfigError("sigma_from_k: k must be >= 1");
  return std::sqrt(1.0 / (2.4 * std::log(2.0 * k - 1.0) + 24.0));
}

double coherence_bound(int k) {
  if (k < 2) throw ConfigError("coherence_bound: k must be >= 2");
  return 3.0 / (4.0 * (k - 1));
}

double dipole_inner(const GeneralizedDipole& nu1, const GeneralizedDipole& nu2,
                    const RadialKernel& kernel) {
  require_unit_direction(nu1);
  require_unit_direction(nu2);
  const Vec diff = nu1.t - nu2.t;
  double out = nu1.a * nu2.a * kernel.rho(diff.norm());
  if (nu1.b != 0.0) out -= nu2.a * nu1.b * kernel.f_dir(diff, nu1.v);
  if (nu2.b != 0.0) out -= nu1.a * nu2.b * kernel.f_dir(-diff, nu2.v);
  if (nu1.b != 0.0 && nu2.b != 0.0)
    out -= nu1.b * nu2.b * kernel.f_dir2(diff, nu1.v, nu2.v);
  return out;
}

double measure_norm_h_sq(std::span<const GeneralizedDipole> dipoles,
                         const RadialKernel& kernel) {
  if (dipoles.empty())
    throw std::invalid_argument("measure_norm_h: empty dipole list");
  double sq = 0.0;
  double diag = 0.0;
  for (std::size_t i = 0; i < dipoles.size(); ++i) {
    const double self = dipole_inner(dipoles[i], dipoles[i], kernel);
    sq += self;
    diag += std::abs(self);
    for (std::size_t j = i + 1; j < dipoles.size(); ++j)
      sq += 2.0 * dipole_inner(dipoles[i], dipoles[j], kernel);
  }
  if (sq < 0.0) {
    if (sq < -1e-10 * std::max(1.0, diag))
      throw std::runtime_error(
          "measure_norm_h: Gram value significantly negative (" +
          std::to_string(sq) + ")");
    static std::atomic<bool> warned{false};
    if (!warned.exchange(true))
      std::cerr << "spikebasin: clamping tiny negative kernel Gram value "
                << sq << " to 0\n";
    sq = 0.0;
  }
  return sq;
}

double measure_norm_h(std::span<const GeneralizedDipole> dipoles,
                      const RadialKernel& kernel) {
  return std::sqrt(measure_norm_h_sq(dipoles, kernel));
}

double c_h_compute(const RadialKernel& kernel, double epsilon, double q) {
  if (!(epsilon > 0)) throw ConfigError("c_h_compute: epsilon must be > 0");
  if (!(q > 0.0 && q <= 1.0))
    throw ConfigError("c_h_compute: q must lie in (0, 1]");
  const double half = 0.5 * q * kernel.rho2_abs();
  constexpr int kGridPoints = 10'000;
  const auto feasible = [&](double c) {
    for (int i = 1; i <= kGridPoints; ++i) {
      const double t = c * i / kGridPoints;
      if (kernel.rho(t) > 1.0 - half * t * t) return false;
    }
    return true;
  };

  const double cap = epsilon / 2.0;
  if (feasible(cap)) return cap;
  double lo = cap * 1e-9;
  if (!feasible(lo))
    throw NoValidRadius(
        "c_h_compute: the quadratic domination fails at every radius for q=" +
        std::to_string(q));
  double hi = cap;
  while (hi - lo > 1e-13 * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? lo : hi) = mid;
  }
  return lo;
}

double coherence_estimate(const RadialKernel& kernel, const ModelConfig& config,
                          int trials, std::uint64_t rng_seed) {
  if (trials < 1) throw ConfigError("coherence_estimate: trials must be >= 1");
  config.validate();
  std::vector<double> ratios(trials, 0.0);

  parallel_trials(trials, [&](int trial) {
    std::mt19937_64 rng(mix_seed(rng_seed, static_cast<std::uint64_t>(trial)));
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::uniform_real_distribution<double> unif01(0.0, 1.0);

    const auto random_unit = [&] {
      Vec v(config.d);
      double n = 0.0;
      do {
        for (int j = 0; j < config.d; ++j) v[j] = gauss(rng);
        n = v.norm();
      } while (n == 0.0);
      return Vec((1.0 / n) * v);
    };
    const auto random_point = [&] {
      Vec dir = random_unit();
      return Vec(config.R * std::pow(unif01(rng), 1.0 / config.d) * dir);
    };

    // Two positions separated by more than epsilon.
    Vec t1, t2;
    int guard = 0;
    do {
      t1 = random_point();
      t2 = random_point();
      if (++guard > 100'000)
        throw SamplingExhausted(
            "coherence_estimate: could not draw separated supports");
    } while ((t1 - t2).norm() <= config.epsilon);

    const auto draw_dipole = [&](const Vec& t) {
      GeneralizedDipole nu;
      nu.t = t;
      nu.v = random_unit();
      nu.a = unif(rng);
      nu.b = unif01(rng) < 0.25 ? 0.0 : unif(rng);  // keep pure Diracs in the mix
      return nu;
    };
    const GeneralizedDipole nu1 = draw_dipole(t1);
    const GeneralizedDipole nu2 = draw_dipole(t2);
    const double n1 = dipole_inner(nu1, nu1, kernel);
    const double n2 = dipole_inner(nu2, nu2, kernel);
    if (n1 < 1e-12 || n2 < 1e-12) return;
    ratios[trial] =
        std::abs(dipole_inner(nu1, nu2, kernel)) / std::sqrt(n1 * n2);
  });

  double best = 0.0;
  for (double r : ratios) best = std::max(best, r);
  return best;
}

namespace {

double autocorrelation(const std::function<double(double)>& A,
                       const std::function<double(double)>& B, double u,
                       double S, double rel_tol) {
  using boost::math::quadrature::gauss_kronrod;
  double err = 0.0;
  const double val = gauss_kronrod<double, 15>::integrate(
      [&](double t) { return A(t) * B(t + u); }, -S, S, 15, rel_tol, &err);
  if (!(std::isfinite(val)))
    throw QuadratureFailure("kernel_from_convolution: quadrature diverged");
  if (err > 1e-6 * (std::abs(val) + 1.0))
    throw QuadratureFailure(
        "kernel_from_convolution: quadrature did not converge (err=" +
        std::to_string(err) + ")");
  return val;
}

}  // namespace

RadialKernel kernel_from_convolution(std::function<double(double)> K,
                                     double support_radius,
                                     std::function<double(double)> K1,
                                     std::function<double(double)> K2) {
  if (!(support_radius > 0))
    throw ConfigError("kernel_from_convolution: support radius must be > 0");
  constexpr double kRelTol = 1e-9;
  const double S = support_radius;

  const auto raw = [K, S](double u) {
    return autocorrelation(K, K, std::abs(u), S, kRelTol);
  };
  const double scale = raw(0.0);
  if (!(scale > 0))
    throw QuadratureFailure("kernel_from_convolution: K*K(0) must be > 0");

  RadialKernel out;
  out.name = "convolution";
  out.family = RadialKernel::Family::generic;
  out.conv_scale = scale;
  out.rho = [raw, scale](double u) { return raw(u) / scale; };

  if (K1) {
    out.rho1 = [K, K1, S, scale](double u) {
      return autocorrelation(K, K1, u, S, kRelTol) / scale;
    };
  } else {
    auto rho = out.rho;
    const double h = 1e-5 * std::max(1.0, S);
    out.rho1 = [rho, h](double u) { return (rho(u + h) - rho(u - h)) / (2 * h); };
  }

  std::function<double(double)> rho2;
  if (K2) {
    rho2 = [K, K2, S, scale](double u) {
      return autocorrelation(K, K2, u, S, kRelTol) / scale;
    };
  } else if (K1) {
    // (K*K)'' = -(K' star K') up to boundary terms, negligible when K decays
    // inside the support radius.
    rho2 = [K1, S, scale](double u) {
      return -autocorrelation(K1, K1, u, S, kRelTol) / scale;
    };
  } else {
    auto rho = out.rho;
    const double h = 1e-2 * std::max(1.0, S);
    rho2 = [rho, h](double u) {
      return (rho(u + h) - 2.0 * rho(u) + rho(u - h)) / (h * h);
    };
  }
  out.rho2 = rho2;
  out.rho2_at_0 = rho2(0.0);
  if (!(out.rho2_at_0 < 0))
    throw QuadratureFailure(
        "kernel_from_convolution: rho''(0) must be negative");
  return out;
}

RadialKernel convolution_of_gaussian(double width) {
  if (!(width > 0))
    throw ConfigError("convolution_of_gaussian: width must be > 0");
  const double s2 = width * width;
  auto K = [s2](double t) { return std::exp(-t * t / (2 * s2)); };
  auto K1 = [s2](double t) { return -(t / s2) * std::exp(-t * t / (2 * s2)); };
  auto K2 = [s2](double t) {
    return (t * t / (s2 * s2) - 1.0 / s2) * std::exp(-t * t / (2 * s2));
  };
  RadialKernel out = kernel_from_convolution(K, 12.0 * width, K1, K2);
  out.name = "convolution_of_gaussian";
  return out;
}

GeneralizedDipole dirac(double a, const Vec& t) {
  GeneralizedDipole nu;
  nu.a = a;
  nu.t = t;
  nu.v = Vec::Zero(t.size());
  return nu;
}

}  // namespace spikebasin
