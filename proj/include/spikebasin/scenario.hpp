// scenario.hpp — batch experiment inputs: model, kernel, operator, ground
// truth, measured data y = A phi(theta0) + e.
#pragma once

#include "spikebasin/json_io.hpp"

#include <optional>

namespace spikebasin {

struct NoiseSpec {
  double norm = 0.0;
  std::uint64_t seed = 0;
};

struct Scenario {
  ModelConfig config;
  json kernel_spec;
  RadialKernel kernel;
  FourierOperator op;
  SpikeTrain ground_truth;
  std::optional<NoiseSpec> noise;
  CVec y;

  Objective objective() const { return Objective{op, y, config}; }
};

// Builds a scenario from a generate-config object (see README for the
// schema); deterministic under the seeds it contains. `seed_override`
// replaces every embedded seed.
Scenario build_scenario(const json& config,
                        std::optional<std::uint64_t> seed_override = {});

// Complex Gaussian vector rescaled so ||e||_2 equals `norm` exactly.
CVec noise_vector(int m, double norm, std::uint64_t seed);

json scenario_to_json(const Scenario& sc);
Scenario scenario_from_json(const json& j);

void save_scenario(const Scenario& sc, const std::filesystem::path& path);
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace spikebasin
