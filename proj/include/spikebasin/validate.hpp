// validate.hpp — runnable oracle suites (finite differences, kernel identity
// checks, bound sandwiches) shared by the CLI `validate` command and tests.
#pragma once

#include "spikebasin/certificates.hpp"
#include "spikebasin/objective.hpp"

#include <string>
#include <vector>

namespace spikebasin {

struct CheckResult {
  std::string suite;
  std::string name;
  bool pass = false;
  double value = 0.0;      // observed error / statistic
  double threshold = 0.0;  // pass when value <= threshold (unless detail says otherwise)
  std::string detail;
};

// Central finite differences of eval with respect to the packed parameters.
Vec fd_gradient(const Objective& obj, const SpikeTrain& theta, double step);

// Central finite differences of the analytic gradient.
Mat fd_hessian(const Objective& obj, const SpikeTrain& theta, double step);

// Relative Frobenius distance ||a - b|| / max(1, ||b||).
double relative_error(const Vec& a, const Vec& b);
double relative_error(const Mat& a, const Mat& b);

// Least-squares slope of log(err) against log(eta); the observed convergence
// order of a finite-difference family.
double fit_order(const std::vector<double>& etas,
                 const std::vector<double>& errors);

std::vector<CheckResult> validate_derivatives(std::uint64_t seed);
std::vector<CheckResult> validate_kernel(std::uint64_t seed);
std::vector<CheckResult> validate_bounds(std::uint64_t seed);

// suite in {"derivatives", "kernel", "bounds", "all"}.
std::vector<CheckResult> run_validation_suite(const std::string& suite,
                                              std::uint64_t seed);

}  // namespace spikebasin
