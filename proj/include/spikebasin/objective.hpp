// objective.hpp — the least-squares objective g(theta) = ||A phi(theta) - y||^2
// with its analytic gradient and Hessian (G + F split).
#pragma once

#include "spikebasin/common.hpp"
#include "spikebasin/measurement.hpp"
#include "spikebasin/spike_model.hpp"

#include <filesystem>
#include <utility>

namespace spikebasin {

struct Objective {
  FourierOperator op;
  CVec data;  // y, length m
  ModelConfig config;
};

// G collects the residual-free bilinear terms, F the residual-coupled ones;
// H = G + F. Block layout follows the canonical packing: k x k amplitude
// block first, then the kd x kd position block.
struct HessianSplit {
  Mat G;
  Mat F;
  Mat H;
};

// Exact squared residual norm, deterministic pairwise accumulation over l.
double eval(const Objective& obj, const SpikeTrain& theta);

// Packed gradient:
//   d g / d a_r     =  2 re<A delta_{t_r}, A phi(theta) - y>
//   d g / d t_{r,j} = -2 a_r re<A delta'_{t_r,j}, A phi(theta) - y>
Vec gradient(const Objective& obj, const SpikeTrain& theta);

HessianSplit hessian(const Objective& obj, const SpikeTrain& theta);

// Two routes to u^T G u for unit u: the assembled matrix, and the direct
// generalized-dipole evaluation
//   2 || A sum_r (u_r delta_{t_r}
//                 - a_r ||u_{r+k}|| delta'_{t_r, u_{r+k}/||u_{r+k}||}) ||^2.
// Returned as (matrix route, dipole route); a structural test oracle.
std::pair<double, double> quadratic_form_G_identity(const Objective& obj,
                                                    const SpikeTrain& theta,
                                                    const Vec& u);

// Row-major CSV dump of H, G, F with a block-boundary header comment.
void dump_hessian_csv(const HessianSplit& split, const ModelConfig& config,
                      const std::filesystem::path& path);

}  // namespace spikebasin
