#include "spikebasin/certificates.hpp"

#include "spikebasin/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <vector>

namespace spikebasin {

namespace {

struct AmplitudeStats {
  double amin = 0.0;   // |a_1|
  double amax = 0.0;   // |a_k|
  double norm_sq = 0.0;
};

AmplitudeStats amplitude_stats(const SpikeTrain& theta) {
  AmplitudeStats s;
  s.amin = std::numeric_limits<double>::infinity();
  for (int r = 0; r < theta.config.k; ++r) {
    const double a = std::abs(theta.amplitudes[r]);
    s.amin = std::min(s.amin, a);
    s.amax = std::max(s.amax, a);
    s.norm_sq += a * a;
  }
  return s;
}

double big_factor(double amax, double sqrt_m_D, const RipConstants& rip,
                  const RadialKernel& kernel) {
  return std::max(amax * sqrt_m_D,
                  std::sqrt(1.0 + rip.gamma) * std::sqrt(kernel.rho2_abs()));
}

}  // namespace

const char* to_string(ConstantProvenance p) {
  switch (p) {
    case ConstantProvenance::empirical: return "empirical";
    case ConstantProvenance::paper_bound: return "paper_bound";
    case ConstantProvenance::user: return "user";
  }
  return "unknown";
}

double xi_bound(const SpikeTrain& theta, double residual_gap, double noise_norm,
                double sqrt_m_D, const RipConstants& rip,
                const RadialKernel& kernel) {
  if (residual_gap < 0 || noise_norm < 0)
    throw ConfigError("xi_bound: gap and noise must be >= 0");
  const AmplitudeStats a = amplitude_stats(theta);
  const int d = theta.config.d;
  return 2.0 * (d + 1) * big_factor(a.amax, sqrt_m_D, rip, kernel) *
         (residual_gap + noise_norm);
}

HessianBounds eigen_bounds_at(const SpikeTrain& theta, const RipConstants& rip,
                              const RadialKernel& kernel, double xi) {
  const AmplitudeStats a = amplitude_stats(theta);
  const double rho2 = kernel.rho2_abs();
  const double coh = (theta.config.k - 1) * rip.mu;
  HessianBounds out;
  out.xi = xi;
  out.lambda_max_ub = 2.0 * (1.0 + rip.gamma) * (1.0 + coh) *
                          std::max(1.0, a.amax * a.amax * rho2) +
                      xi;
  out.lambda_min_lb = 2.0 * (1.0 - rip.gamma) * (1.0 - coh) *
                          std::min(1.0, a.amin * a.amin * rho2) -
                      xi;
  out.vacuous_lower = (coh >= 1.0) || (rip.gamma >= 1.0);
  return out;
}

std::pair<double, double> conditioning_bounds(const SpikeTrain& theta,
                                              const RipConstants& rip,
                                              const RadialKernel& kernel) {
  const AmplitudeStats a = amplitude_stats(theta);
  if (a.amin <= 0.0)
    throw ZeroAmplitude("conditioning_bounds: requires min_r |a_r| > 0");
  const double rho2 = kernel.rho2_abs();
  const double coh = (theta.config.k - 1) * rip.mu;
  const double maxterm = std::max(1.0, a.amax * a.amax * rho2);
  const double minterm = std::min(1.0, a.amin * a.amin * rho2);
  const double lower =
      (1.0 - rip.gamma) * maxterm / ((1.0 + rip.gamma) * minterm);
  const double upper = (1.0 + rip.gamma) * (1.0 + coh) * maxterm /
                       ((1.0 - rip.gamma) * (1.0 - coh) * minterm);
  return {lower, upper};
}

HessianBounds uniform_bounds_on_ball(const SpikeTrain& theta_star, double beta,
                                     const RipConstants& rip,
                                     const RadialKernel& kernel,
                                     double sqrt_m_D, double sup_residual_gap,
                                     double noise_norm, bool constrained) {
  if (beta < 0) throw ConfigError("uniform_bounds_on_ball: beta must be >= 0");
  const AmplitudeStats a = amplitude_stats(theta_star);
  if (!constrained && beta > theta_star.config.epsilon / 4.0)
    throw BetaTooLarge(
        "uniform_bounds_on_ball: unconstrained mode needs beta <= epsilon/4");
  if (beta >= a.amin && a.amin > 0.0)
    throw BetaTooLarge("uniform_bounds_on_ball: beta must be < |a_1|");

  const double rho2 = kernel.rho2_abs();
  const double coh = (theta_star.config.k - 1) * rip.mu;
  const double xi = 2.0 * (theta_star.config.d + 1) *
                    big_factor(a.amax, sqrt_m_D, rip, kernel) *
                    (sup_residual_gap + noise_norm);
  HessianBounds out;
  out.xi = xi;
  const double hi = a.amax + beta;
  const double lo = a.amin - beta;
  out.lambda_max_ub =
      2.0 * (1.0 + rip.gamma) * (1.0 + coh) * std::max(1.0, hi * hi * rho2) + xi;
  out.lambda_min_lb =
      2.0 * (1.0 - rip.gamma) * (1.0 - coh) * std::min(1.0, lo * lo * rho2) - xi;
  out.vacuous_lower = (coh >= 1.0) || (rip.gamma >= 1.0);
  return out;
}

double residual_gap_analytic_bound(const SpikeTrain& theta_star, double beta,
                                   const RipConstants& rip,
                                   const RadialKernel& kernel) {
  const AmplitudeStats a = amplitude_stats(theta_star);
  const double coh = (theta_star.config.k - 1) * rip.mu;
  return std::sqrt(1.0 + rip.gamma) * std::sqrt(1.0 + coh) * beta *
         std::sqrt(1.0 + 2.0 * kernel.rho2_abs() * a.norm_sq);
}

ResidualGapEstimate sup_residual_gap_estimate(const Objective& obj,
                                              const SpikeTrain& theta_star,
                                              double beta, int samples,
                                              std::uint64_t rng_seed,
                                              const RipConstants& rip,
                                              const RadialKernel& kernel) {
  if (samples < 1)
    throw ConfigError("sup_residual_gap_estimate: samples must be >= 1");
  ResidualGapEstimate out;
  out.analytic_bound = residual_gap_analytic_bound(theta_star, beta, rip, kernel);
  out.value = out.analytic_bound;
  if (beta == 0.0) return out;

  const CVec base = apply(obj.op, theta_star);
  const Vec packed = pack(theta_star);
  std::vector<double> gaps(samples, 0.0);
  parallel_trials(samples, [&](int i) {
    const std::uint64_t s = mix_seed(rng_seed, static_cast<std::uint64_t>(i));
    SpikeTrain probe;
    if (i % 2 == 0) {
      // Boundary draw: the sup over the closed ball is approached there.
      std::mt19937_64 rng(s);
      std::normal_distribution<double> gauss(0.0, 1.0);
      Vec dir(packed.size());
      double n = 0.0;
      do {
        for (int j = 0; j < dir.size(); ++j) dir[j] = gauss(rng);
        n = dir.norm();
      } while (n == 0.0);
      probe = unpack(packed + (beta / n) * dir, theta_star.config);
    } else {
      probe = perturb(theta_star, beta, s);
    }
    CVec delta = apply(obj.op, probe) - base;
    gaps[i] = std::sqrt(norm_sq(delta));
  });
  for (double g : gaps) out.empirical_max = std::max(out.empirical_max, g);
  return out;
}

namespace {

BasinCertificate beta_max_impl(const SpikeTrain& theta_star,
                               const RipConstants& rip,
                               const RadialKernel& kernel, double D, int m,
                               double c_h, double q_relaxation, bool noisy,
                               double noise_norm) {
  theta_star.config.validate();
  if (m < 1) throw ConfigError("beta_max: m must be >= 1");
  if (!(c_h > 0)) throw ConfigError("beta_max: c_h must be > 0");
  const AmplitudeStats a = amplitude_stats(theta_star);
  if (a.amin <= 0.0)
    throw ZeroAmplitude("beta_max: requires min_r |a_r| > 0");

  const int d = theta_star.config.d;
  const double rho2 = kernel.rho2_abs();
  const double coh = (theta_star.config.k - 1) * rip.mu;
  const double sqrt_m_D = std::sqrt(static_cast<double>(m)) * D;
  const double M = big_factor(a.amax, sqrt_m_D, rip, kernel);
  const double spread = std::sqrt(1.0 + 2.0 * rho2 * a.norm_sq);

  BasinCertificate cert;
  cert.noisy = noisy;
  cert.c_h_used = c_h;
  cert.q_relaxation = q_relaxation;

  std::ostringstream log;
  log << "gamma=" << rip.gamma << " (" << to_string(rip.gamma_provenance)
      << "), mu=" << rip.mu << " (" << to_string(rip.mu_provenance)
      << "), (k-1)mu=" << coh << ", |rho''(0)|=" << rho2
      << ", sqrt(m)*D_{A,R}=" << sqrt_m_D << ", c_h=" << c_h
      << " (q=" << q_relaxation << ")";

  if (rip.gamma >= 1.0 || coh >= 1.0) {
    cert.vacuous = true;
    log << "; vacuous: RIP/coherence constants outside the admissible range";
    cert.assumptions_log = log.str();
    return cert;
  }

  cert.C1 = (1.0 - rip.gamma) * (1.0 - coh) /
            ((d + 1) * std::sqrt(1.0 + rip.gamma) * std::sqrt(1.0 + coh));
  const double numer = std::min(1.0, a.amin * a.amin * rho2 / 4.0);
  cert.C2_or_C3 =
      noisy ? numer / (M * (1.0 + spread)) : numer / (M * spread);
  cert.beta_max = std::min({c_h, a.amin / 2.0, cert.C1 * cert.C2_or_C3});

  const double gap =
      residual_gap_analytic_bound(theta_star, cert.beta_max, rip, kernel);
  double noise = 0.0;
  if (noisy) {
    cert.noise_budget = std::sqrt(1.0 + rip.gamma) * std::sqrt(1.0 + coh) *
                        cert.beta_max;
    if (noise_norm > *cert.noise_budget)
      throw NoiseBudgetExceeded("beta_max_noisy: ||e|| = " +
                                std::to_string(noise_norm) +
                                " exceeds the certified budget " +
                                std::to_string(*cert.noise_budget));
    noise = noise_norm;
    log << "; noise_norm=" << noise_norm << ", budget=" << *cert.noise_budget;
  }

  const double xi = 2.0 * (d + 1) * M * (gap + noise);
  const double hi = a.amax + cert.beta_max;
  const double lo = a.amin - cert.beta_max;
  cert.L = 2.0 * (1.0 + rip.gamma) * (1.0 + coh) *
               std::max(1.0, hi * hi * rho2) +
           xi;
  cert.tau_max = 1.0 / cert.L;

  // By construction the certified lower bound is >= 0 at beta_max, with
  // equality exactly when the amplitude min-term clamps at 1; only a
  // meaningfully negative value marks the certificate vacuous.
  const double lb = 2.0 * (1.0 - rip.gamma) * (1.0 - coh) *
                        std::min(1.0, lo * lo * rho2) -
                    xi;
  if (!(cert.beta_max > 0.0) || lb < -1e-12 * std::max(1.0, cert.L)) {
    cert.vacuous = true;
    log << "; vacuous: beta_max=" << cert.beta_max
        << ", lower bound at beta_max=" << lb;
  }
  cert.assumptions_log = log.str();
  return cert;
}

}  // namespace

BasinCertificate beta_max_noiseless(const SpikeTrain& theta_star,
                                    const RipConstants& rip,
                                    const RadialKernel& kernel, double D, int m,
                                    double c_h, double q_relaxation) {
  return beta_max_impl(theta_star, rip, kernel, D, m, c_h, q_relaxation,
                       /*noisy=*/false, 0.0);
}

BasinCertificate beta_max_noisy(const SpikeTrain& theta_star,
                                const RipConstants& rip,
                                const RadialKernel& kernel, double D, int m,
                                double c_h, double q_relaxation,
                                double noise_norm) {
  if (noise_norm < 0) throw ConfigError("beta_max_noisy: noise_norm >= 0");
  return beta_max_impl(theta_star, rip, kernel, D, m, c_h, q_relaxation,
                       /*noisy=*/true, noise_norm);
}

Vec symmetric_eigenvalues(const Mat& M) {
  const int n = static_cast<int>(M.rows());
  if (M.cols() != n) throw NotSymmetric("symmetric_eigenvalues: not square");
  const double scale = M.cwiseAbs().maxCoeff();
  if ((M - M.transpose()).cwiseAbs().maxCoeff() >
      1e-10 * std::max(1.0, scale))
    throw NotSymmetric("symmetric_eigenvalues: matrix is not symmetric");

  Mat A = 0.5 * (M + M.transpose());
  const double frob = A.norm();
  if (frob == 0.0) return Vec::Zero(n);

  const auto off_mass = [&] {
    double s = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) s += 2.0 * A(p, q) * A(p, q);
    return std::sqrt(s);
  };

  for (int sweep = 0; sweep < 100 && off_mass() >= 1e-12 * frob; ++sweep) {
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = A(p, q);
        if (apq == 0.0) continue;
        const double theta = 0.5 * (A(q, q) - A(p, p)) / apq;
        double t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (int i = 0; i < n; ++i) {
          const double aip = A(i, p);
          const double aiq = A(i, q);
          A(i, p) = c * aip - s * aiq;
          A(i, q) = s * aip + c * aiq;
        }
        for (int i = 0; i < n; ++i) {
          const double api = A(p, i);
          const double aqi = A(q, i);
          A(p, i) = c * api - s * aqi;
          A(q, i) = s * api + c * aqi;
        }
      }
    }
  }

  Vec eig(n);
  for (int i = 0; i < n; ++i) eig[i] = A(i, i);
  std::sort(eig.data(), eig.data() + n);
  return eig;
}

double gerschgorin_row_bound(const Mat& M) {
  double best = 0.0;
  for (int i = 0; i < M.rows(); ++i) best = std::max(best, M.row(i).lpNorm<1>());
  return best;
}

}  // namespace spikebasin
