// common.hpp — shared aliases, error types, seeding and summation helpers.
#pragma once

#include <Eigen/Core>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace spikebasin {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using Complex = std::complex<double>;

inline constexpr const char* kVersion = "0.1.0";

// ---------------------------------------------------------------------------
// Error types. Each names a contract failure surfaced to callers.
// ---------------------------------------------------------------------------

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SamplingExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NoValidRadius : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct AllSamplesDegenerate : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ZeroAmplitude : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BetaTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NoiseBudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotSymmetric : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InfeasibleSeparation : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct AlphaOutOfRange : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct QuadratureFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Seeding. Per-task seeds are derived from a base seed and a stream index so
// that parallel trials stay reproducible regardless of scheduling.
// ---------------------------------------------------------------------------

// splitmix64 finalizer; good avalanche, cheap.
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// ---------------------------------------------------------------------------
// Deterministic pairwise summation. Keeps rounding error O(log m) so the
// 1e-10-level oracles stay meaningful at m up to 1e5, and the reduction
// order is fixed for bit-stable reports.
// ---------------------------------------------------------------------------

namespace detail {
template <class F>
double pairwise_sum_impl(std::size_t lo, std::size_t hi, F& term) {
  if (hi - lo <= 16) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += term(i);
    return s;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum_impl(lo, mid, term) + pairwise_sum_impl(mid, hi, term);
}
}  // namespace detail

template <class F>
double pairwise_sum(std::size_t n, F term) {
  return n == 0 ? 0.0 : detail::pairwise_sum_impl<F>(0, n, term);
}

// re<x, y> for the Hermitian product <x,y> = sum_l x_l conj(y_l).
inline double dot_re(const CVec& x, const CVec& y) {
  return pairwise_sum(static_cast<std::size_t>(x.size()), [&](std::size_t l) {
    return x[l].real() * y[l].real() + x[l].imag() * y[l].imag();
  });
}

inline double norm_sq(const CVec& x) {
  return pairwise_sum(static_cast<std::size_t>(x.size()),
                      [&](std::size_t l) { return std::norm(x[l]); });
}

}  // namespace spikebasin
