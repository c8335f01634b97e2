// Python bindings for the main operations: model sampling, kernel calculus,
// measurement operators, objective derivatives, certificates, descent.
#include "spikebasin/certificates.hpp"
#include "spikebasin/kernel.hpp"
#include "spikebasin/measurement.hpp"
#include "spikebasin/objective.hpp"
#include "spikebasin/scenario.hpp"
#include "spikebasin/solver.hpp"
#include "spikebasin/spike_model.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace spikebasin;

PYBIND11_MODULE(_core, m) {
  m.doc() = "off-the-grid sparse spike estimation: parameter-space objective, "
            "kernel calculus, RIP-based Hessian bounds and basin certificates";

  py::register_exception<ConfigError>(m, "ConfigError");
  py::register_exception<SamplingExhausted>(m, "SamplingExhausted");
  py::register_exception<NoValidRadius>(m, "NoValidRadius");
  py::register_exception<AllSamplesDegenerate>(m, "AllSamplesDegenerate");
  py::register_exception<ZeroAmplitude>(m, "ZeroAmplitude");
  py::register_exception<BetaTooLarge>(m, "BetaTooLarge");
  py::register_exception<NoiseBudgetExceeded>(m, "NoiseBudgetExceeded");
  py::register_exception<NotSymmetric>(m, "NotSymmetric");
  py::register_exception<InfeasibleSeparation>(m, "InfeasibleSeparation");
  py::register_exception<AlphaOutOfRange>(m, "AlphaOutOfRange");

  py::class_<ModelConfig>(m, "ModelConfig")
      .def(py::init([](int k, int d, double epsilon, double R) {
             ModelConfig c{k, d, epsilon, R};
             c.validate();
             return c;
           }),
           py::arg("k"), py::arg("d"), py::arg("epsilon"), py::arg("R"))
      .def_readonly("k", &ModelConfig::k)
      .def_readonly("d", &ModelConfig::d)
      .def_readonly("epsilon", &ModelConfig::epsilon)
      .def_readonly("R", &ModelConfig::R)
      .def("dim", &ModelConfig::dim);

  py::class_<SpikeTrain>(m, "SpikeTrain")
      .def(py::init([](const Vec& amplitudes, const Mat& positions,
                       const ModelConfig& config) {
             if (amplitudes.size() != config.k || positions.rows() != config.k ||
                 positions.cols() != config.d)
               throw ConfigError("SpikeTrain: shape mismatch with config");
             return SpikeTrain{amplitudes, positions, config};
           }),
           py::arg("amplitudes"), py::arg("positions"), py::arg("config"))
      .def_readonly("amplitudes", &SpikeTrain::amplitudes)
      .def_readonly("positions", &SpikeTrain::positions)
      .def_readonly("config", &SpikeTrain::config);

  m.def("pack", &pack, py::arg("spikes"));
  m.def("unpack", &unpack, py::arg("theta"), py::arg("config"));
  m.def("min_separation", &min_separation, py::arg("spikes"));
  m.def("is_in_theta", &is_in_theta, py::arg("spikes"));
  m.def(
      "sample_theta",
      [](const ModelConfig& config, std::pair<double, double> amplitude_range,
         bool nonvanishing, std::uint64_t seed, std::uint64_t budget) {
        SampleOptions opts;
        opts.amplitude_range = amplitude_range;
        opts.nonvanishing = nonvanishing;
        opts.attempt_budget = budget;
        return sample_theta(config, opts, seed);
      },
      py::arg("config"), py::arg("amplitude_range") = std::pair<double, double>{0.5, 1.5},
      py::arg("nonvanishing") = true, py::arg("seed") = 0,
      py::arg("attempt_budget") = 1'000'000);
  m.def("perturb", &perturb, py::arg("spikes"), py::arg("beta"), py::arg("seed"));

  py::class_<RadialKernel>(m, "RadialKernel")
      .def_readonly("name", &RadialKernel::name)
      .def_readonly("sigma", &RadialKernel::sigma)
      .def_readonly("rho2_at_0", &RadialKernel::rho2_at_0)
      .def_readonly("conv_scale", &RadialKernel::conv_scale)
      .def("rho", [](const RadialKernel& k, double u) { return k.rho(u); })
      .def("rho1", [](const RadialKernel& k, double u) { return k.rho1(u); })
      .def("rho2", [](const RadialKernel& k, double u) { return k.rho2(u); });

  m.def("gaussian_kernel", &gaussian_kernel, py::arg("sigma"));
  m.def("sigma_from_k", &sigma_from_k, py::arg("k"));
  m.def("coherence_bound", &coherence_bound, py::arg("k"));
  m.def("convolution_of_gaussian", &convolution_of_gaussian, py::arg("width"));

  py::class_<GeneralizedDipole>(m, "GeneralizedDipole")
      .def(py::init([](double a, double b, const Vec& t, const Vec& v) {
             return GeneralizedDipole{a, b, t, v};
           }),
           py::arg("a"), py::arg("b"), py::arg("t"), py::arg("v"))
      .def_readonly("a", &GeneralizedDipole::a)
      .def_readonly("b", &GeneralizedDipole::b)
      .def_readonly("t", &GeneralizedDipole::t)
      .def_readonly("v", &GeneralizedDipole::v);

  m.def("dipole_inner", &dipole_inner, py::arg("nu1"), py::arg("nu2"),
        py::arg("kernel"));
  m.def(
      "measure_norm_h",
      [](const std::vector<GeneralizedDipole>& dipoles, const RadialKernel& k) {
        return measure_norm_h(dipoles, k);
      },
      py::arg("dipoles"), py::arg("kernel"));
  m.def("c_h_compute", &c_h_compute, py::arg("kernel"), py::arg("epsilon"),
        py::arg("q") = 0.5);
  m.def("coherence_estimate", &coherence_estimate, py::arg("kernel"),
        py::arg("config"), py::arg("trials"), py::arg("seed"));

  py::class_<FourierOperator>(m, "FourierOperator")
      .def_readonly("frequencies", &FourierOperator::frequencies)
      .def_readonly("weights", &FourierOperator::weights)
      .def_property_readonly("m", &FourierOperator::m)
      .def_property_readonly("d", &FourierOperator::d);

  m.def("draw_random_operator", &draw_random_operator, py::arg("m"),
        py::arg("sigma"), py::arg("d"), py::arg("seed"));
  m.def("grid_operator", &grid_operator, py::arg("m"), py::arg("spacing") = 1.0);
  m.def("apply", &apply, py::arg("op"), py::arg("spikes"));
  m.def("apply_dirac", &apply_dirac, py::arg("op"), py::arg("t"));
  m.def("apply_dirac_derivative", &apply_dirac_derivative, py::arg("op"),
        py::arg("t"), py::arg("v"));
  m.def("apply_dirac_second_derivative", &apply_dirac_second_derivative,
        py::arg("op"), py::arg("t"), py::arg("v1"), py::arg("v2"));
  m.def("compute_D_A_R", &compute_D_A_R, py::arg("op"));

  py::class_<RipEstimate>(m, "RipEstimate")
      .def_readonly("gamma_lower", &RipEstimate::gamma_lower)
      .def_readonly("ratio_min", &RipEstimate::ratio_min)
      .def_readonly("ratio_max", &RipEstimate::ratio_max)
      .def_readonly("trials", &RipEstimate::trials);

  m.def(
      "estimate_rip",
      [](const FourierOperator& op, const ModelConfig& config,
         const RadialKernel& kernel, int trials, std::uint64_t seed,
         bool include_derivatives) {
        return estimate_rip(op, config, kernel, trials, seed,
                            include_derivatives);
      },
      py::arg("op"), py::arg("config"), py::arg("kernel"), py::arg("trials"),
      py::arg("seed"), py::arg("include_derivatives") = false);

  py::class_<Objective>(m, "Objective")
      .def(py::init([](const FourierOperator& op, const CVec& y,
                       const ModelConfig& config) {
             return Objective{op, y, config};
           }),
           py::arg("op"), py::arg("data"), py::arg("config"))
      .def_readonly("data", &Objective::data);

  py::class_<HessianSplit>(m, "HessianSplit")
      .def_readonly("G", &HessianSplit::G)
      .def_readonly("F", &HessianSplit::F)
      .def_readonly("H", &HessianSplit::H);

  m.def("eval", &eval, py::arg("objective"), py::arg("theta"));
  m.def("gradient", &gradient, py::arg("objective"), py::arg("theta"));
  m.def("hessian", &hessian, py::arg("objective"), py::arg("theta"));
  m.def("quadratic_form_G_identity", &quadratic_form_G_identity,
        py::arg("objective"), py::arg("theta"), py::arg("u"));

  py::enum_<ConstantProvenance>(m, "ConstantProvenance")
      .value("empirical", ConstantProvenance::empirical)
      .value("paper_bound", ConstantProvenance::paper_bound)
      .value("user", ConstantProvenance::user);

  py::class_<RipConstants>(m, "RipConstants")
      .def(py::init([](double gamma, double mu) {
             RipConstants r;
             r.gamma = gamma;
             r.mu = mu;
             return r;
           }),
           py::arg("gamma"), py::arg("mu"))
      .def_readwrite("gamma", &RipConstants::gamma)
      .def_readwrite("mu", &RipConstants::mu);

  py::class_<HessianBounds>(m, "HessianBounds")
      .def_readonly("lambda_max_ub", &HessianBounds::lambda_max_ub)
      .def_readonly("lambda_min_lb", &HessianBounds::lambda_min_lb)
      .def_readonly("xi", &HessianBounds::xi)
      .def_readonly("vacuous_lower", &HessianBounds::vacuous_lower);

  py::class_<BasinCertificate>(m, "BasinCertificate")
      .def_readonly("beta_max", &BasinCertificate::beta_max)
      .def_readonly("C1", &BasinCertificate::C1)
      .def_readonly("C2_or_C3", &BasinCertificate::C2_or_C3)
      .def_readonly("c_h_used", &BasinCertificate::c_h_used)
      .def_readonly("q_relaxation", &BasinCertificate::q_relaxation)
      .def_readonly("L", &BasinCertificate::L)
      .def_readonly("tau_max", &BasinCertificate::tau_max)
      .def_readonly("noise_budget", &BasinCertificate::noise_budget)
      .def_readonly("noisy", &BasinCertificate::noisy)
      .def_readonly("vacuous", &BasinCertificate::vacuous)
      .def_readonly("assumptions_log", &BasinCertificate::assumptions_log);

  m.def("xi_bound", &xi_bound, py::arg("theta"), py::arg("residual_gap"),
        py::arg("noise_norm"), py::arg("sqrt_m_D"), py::arg("rip"),
        py::arg("kernel"));
  m.def("eigen_bounds_at", &eigen_bounds_at, py::arg("theta"), py::arg("rip"),
        py::arg("kernel"), py::arg("xi") = 0.0);
  m.def("conditioning_bounds", &conditioning_bounds, py::arg("theta"),
        py::arg("rip"), py::arg("kernel"));
  m.def("uniform_bounds_on_ball", &uniform_bounds_on_ball, py::arg("theta_star"),
        py::arg("beta"), py::arg("rip"), py::arg("kernel"), py::arg("sqrt_m_D"),
        py::arg("sup_residual_gap"), py::arg("noise_norm") = 0.0,
        py::arg("constrained") = false);
  m.def("beta_max_noiseless", &beta_max_noiseless, py::arg("theta_star"),
        py::arg("rip"), py::arg("kernel"), py::arg("D"), py::arg("m"),
        py::arg("c_h"), py::arg("q") = 0.5);
  m.def("beta_max_noisy", &beta_max_noisy, py::arg("theta_star"), py::arg("rip"),
        py::arg("kernel"), py::arg("D"), py::arg("m"), py::arg("c_h"),
        py::arg("q"), py::arg("noise_norm"));
  m.def("symmetric_eigenvalues", &symmetric_eigenvalues, py::arg("M"));
  m.def("gerschgorin_row_bound", &gerschgorin_row_bound, py::arg("M"));

  py::enum_<Termination>(m, "Termination")
      .value("GradTol", Termination::GradTol)
      .value("DistTol", Termination::DistTol)
      .value("MaxIters", Termination::MaxIters)
      .value("Diverged", Termination::Diverged);

  py::class_<DescentSettings>(m, "DescentSettings")
      .def(py::init<>())
      .def_readwrite("tau", &DescentSettings::tau)
      .def_readwrite("max_iters", &DescentSettings::max_iters)
      .def_readwrite("grad_tol", &DescentSettings::grad_tol)
      .def_readwrite("dist_tol", &DescentSettings::dist_tol)
      .def_readwrite("project_separation", &DescentSettings::project_separation)
      .def_readwrite("record_trace", &DescentSettings::record_trace)
      .def_readwrite("armijo", &DescentSettings::armijo);

  py::class_<DescentTrace>(m, "DescentTrace")
      .def_readonly("termination", &DescentTrace::termination)
      .def_readonly("iterations", &DescentTrace::iterations)
      .def_readonly("final_theta", &DescentTrace::final_theta)
      .def_readonly("final_objective", &DescentTrace::final_objective)
      .def_readonly("final_gradient_norm", &DescentTrace::final_gradient_norm)
      .def_readonly("final_distance_to_ref", &DescentTrace::final_distance_to_ref)
      .def_readonly("objective_values", &DescentTrace::objective_values)
      .def_readonly("gradient_norms", &DescentTrace::gradient_norms)
      .def_readonly("distances_to_ref", &DescentTrace::distances_to_ref)
      .def_readonly("min_separations", &DescentTrace::min_separations)
      .def_readonly("dist_monotone_fraction", &DescentTrace::dist_monotone_fraction);

  m.def("gradient_descent", &gradient_descent, py::arg("objective"),
        py::arg("theta0"), py::arg("settings"),
        py::arg("theta_ref") = std::optional<SpikeTrain>{});

  py::class_<ProbeTrial>(m, "ProbeTrial")
      .def_readonly("termination", &ProbeTrial::termination)
      .def_readonly("final_distance", &ProbeTrial::final_distance)
      .def_readonly("final_gradient_norm", &ProbeTrial::final_gradient_norm)
      .def_readonly("iterations", &ProbeTrial::iterations)
      .def_readonly("monotone_fraction", &ProbeTrial::monotone_fraction);

  py::class_<ProbeStats>(m, "ProbeStats")
      .def_readonly("beta", &ProbeStats::beta)
      .def_readonly("trials", &ProbeStats::trials)
      .def_readonly("successes", &ProbeStats::successes)
      .def_readonly("tau", &ProbeStats::tau)
      .def_readonly("per_trial", &ProbeStats::per_trial);

  m.def("probe_basin", &probe_basin, py::arg("objective"), py::arg("theta_star"),
        py::arg("beta"), py::arg("trials"), py::arg("settings"), py::arg("seed"));
  m.def("repel_projection", &repel_projection, py::arg("theta"));

  py::class_<PathPoint>(m, "PathPoint")
      .def_readonly("lambda_", &PathPoint::lambda)
      .def_readonly("theta", &PathPoint::theta)
      .def_readonly("g_value", &PathPoint::g_value);

  m.def("interpolation_path_check", &interpolation_path_check,
        py::arg("objective"), py::arg("theta0"), py::arg("theta1"),
        py::arg("alpha"), py::arg("grid") = 64);
}
