#include "spikebasin/objective.hpp"

#include <cmath>
#include <fstream>
#include <vector>

namespace spikebasin {

namespace {

// Dirac columns e_r = A delta_{t_r}, shared by eval/gradient/hessian.
std::vector<CVec> dirac_columns(const Objective& obj, const SpikeTrain& theta) {
  std::vector<CVec> cols;
  cols.reserve(theta.config.k);
  for (int r = 0; r < theta.config.k; ++r)
    cols.push_back(apply_dirac(obj.op, theta.positions.row(r).transpose()));
  return cols;
}

// Accumulated in the same order as apply(), so data produced by the forward
// map cancels bitwise at a noiseless minimum.
CVec residual(const Objective& obj, const SpikeTrain& theta,
              const std::vector<CVec>& cols) {
  CVec res = CVec::Zero(obj.op.m());
  for (int r = 0; r < theta.config.k; ++r)
    res += theta.amplitudes[r] * cols[r];
  res -= obj.data;
  return res;
}

// Derivative column d_{r,j} = i omega_{:,j} .* e_r (canonical direction e_j).
CVec derivative_column(const FourierOperator& op, const CVec& dirac_col, int j) {
  CVec out(op.m());
  for (int l = 0; l < op.m(); ++l)
    out[l] = Complex(0.0, op.frequencies(l, j)) * dirac_col[l];
  return out;
}

CVec second_derivative_column(const FourierOperator& op, const CVec& dirac_col,
                              int j1, int j2) {
  CVec out(op.m());
  for (int l = 0; l < op.m(); ++l)
    out[l] = -op.frequencies(l, j1) * op.frequencies(l, j2) * dirac_col[l];
  return out;
}

}  // namespace

double eval(const Objective& obj, const SpikeTrain& theta) {
  if (obj.data.size() != obj.op.m())
    throw ConfigError("objective: data length does not match operator");
  const auto cols = dirac_columns(obj, theta);
  return norm_sq(residual(obj, theta, cols));
}

Vec gradient(const Objective& obj, const SpikeTrain& theta) {
  const int k = theta.config.k;
  const int d = theta.config.d;
  const auto cols = dirac_columns(obj, theta);
  const CVec res = residual(obj, theta, cols);

  Vec grad(theta.config.dim());
  for (int r = 0; r < k; ++r) {
    grad[r] = 2.0 * dot_re(cols[r], res);
    for (int j = 0; j < d; ++j) {
      const CVec drj = derivative_column(obj.op, cols[r], j);
      grad[k + r * d + j] = -2.0 * theta.amplitudes[r] * dot_re(drj, res);
    }
  }
  return grad;
}

HessianSplit hessian(const Objective& obj, const SpikeTrain& theta) {
  const int k = theta.config.k;
  const int d = theta.config.d;
  const int n = theta.config.dim();
  const Vec& a = theta.amplitudes;
  const auto cols = dirac_columns(obj, theta);
  const CVec res = residual(obj, theta, cols);

  std::vector<std::vector<CVec>> deriv(k);
  for (int r = 0; r < k; ++r) {
    deriv[r].reserve(d);
    for (int j = 0; j < d; ++j)
      deriv[r].push_back(derivative_column(obj.op, cols[r], j));
  }

  HessianSplit out;
  out.G = Mat::Zero(n, n);
  out.F = Mat::Zero(n, n);
  const auto pos = [&](int r, int j) { return k + r * d + j; };

  for (int r = 0; r < k; ++r) {
    for (int s = r; s < k; ++s) {
      const double g1 = 2.0 * dot_re(cols[r], cols[s]);
      out.G(r, s) = g1;
      out.G(s, r) = g1;
    }
  }
  for (int r = 0; r < k; ++r)
    for (int j1 = 0; j1 < d; ++j1)
      for (int s = r; s < k; ++s)
        for (int j2 = (s == r ? j1 : 0); j2 < d; ++j2) {
          const double g2 =
              2.0 * a[r] * a[s] * dot_re(deriv[r][j1], deriv[s][j2]);
          out.G(pos(r, j1), pos(s, j2)) = g2;
          out.G(pos(s, j2), pos(r, j1)) = g2;
        }
  for (int r = 0; r < k; ++r)
    for (int s = 0; s < k; ++s)
      for (int j = 0; j < d; ++j) {
        const double g12 = -2.0 * a[s] * dot_re(cols[r], deriv[s][j]);
        out.G(r, pos(s, j)) = g12;
        out.G(pos(s, j), r) = g12;
      }

  // F carries every residual-coupled term; all entries vanish at a noiseless
  // global minimum.
  for (int r = 0; r < k; ++r) {
    for (int j1 = 0; j1 < d; ++j1) {
      for (int j2 = j1; j2 < d; ++j2) {
        const CVec sec = second_derivative_column(obj.op, cols[r], j1, j2);
        const double f2 = 2.0 * a[r] * dot_re(sec, res);
        out.F(pos(r, j1), pos(r, j2)) = f2;
        out.F(pos(r, j2), pos(r, j1)) = f2;
      }
      const double f12 = -2.0 * dot_re(deriv[r][j1], res);
      out.F(r, pos(r, j1)) = f12;
      out.F(pos(r, j1), r) = f12;
    }
  }

  out.H = out.G + out.F;
  return out;
}

std::pair<double, double> quadratic_form_G_identity(const Objective& obj,
                                                    const SpikeTrain& theta,
                                                    const Vec& u) {
  const int k = theta.config.k;
  const int d = theta.config.d;
  if (u.size() != theta.config.dim())
    throw ConfigError("quadratic_form_G_identity: u has wrong length");

  const HessianSplit split = hessian(obj, theta);
  const double via_matrix = u.dot(split.G * u);

  // Independent route: apply A to the generalized-dipole combination directly.
  CVec w = CVec::Zero(obj.op.m());
  for (int r = 0; r < k; ++r) {
    if (u[r] != 0.0)
      w += u[r] * apply_dirac(obj.op, theta.positions.row(r).transpose());
    const Vec block = u.segment(k + r * d, d);
    const double bn = block.norm();
    if (bn > 0.0)
      w -= theta.amplitudes[r] * bn *
           apply_dirac_derivative(obj.op, theta.positions.row(r).transpose(),
                                  block / bn);
  }
  const double via_dipoles = 2.0 * norm_sq(w);
  return {via_matrix, via_dipoles};
}

void dump_hessian_csv(const HessianSplit& split, const ModelConfig& config,
                      const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << "# blocks: amplitudes [0," << config.k << "), positions ["
      << config.k << "," << config.dim() << ")\n";
  out.precision(17);
  const auto write = [&](const char* tag, const Mat& M) {
    for (int i = 0; i < M.rows(); ++i) {
      out << tag;
      for (int j = 0; j < M.cols(); ++j) out << ',' << M(i, j);
      out << '\n';
    }
  };
  write("H", split.H);
  write("G", split.G);
  write("F", split.F);
}

}  // namespace spikebasin
