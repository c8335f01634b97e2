#include "spikebasin/scenario.hpp"

#include <cmath>
#include <random>

namespace spikebasin {

CVec noise_vector(int m, double norm, std::uint64_t seed) {
  if (norm < 0) throw ConfigError("noise: norm must be >= 0");
  CVec e = CVec::Zero(m);
  if (norm == 0.0) return e;
  std::mt19937_64 rng(mix_seed(seed, 0xe0e0));
  std::normal_distribution<double> gauss(0.0, 1.0);
  double total = 0.0;
  do {
    for (int l = 0; l < m; ++l) {
      e[l] = Complex(gauss(rng), gauss(rng));
      total += std::norm(e[l]);
    }
  } while (total == 0.0);
  return e * (norm / std::sqrt(norm_sq(e)));
}

Scenario build_scenario(const json& config,
                        std::optional<std::uint64_t> seed_override) {
  Scenario sc;
  try {
    sc.config.k = config.at("model").at("k").get<int>();
    sc.config.d = config.at("model").at("d").get<int>();
    sc.config.epsilon = config.at("model").at("epsilon").get<double>();
    sc.config.R = config.at("model").at("R").get<double>();
    sc.config.validate();

    sc.kernel_spec = config.at("kernel");
    sc.kernel = kernel_from_spec(sc.kernel_spec, sc.config);

    const json& op_spec = config.at("operator");
    const std::string op_type = op_spec.value("type", "random");
    if (op_type == "random") {
      const int m = op_spec.at("m").get<int>();
      const std::uint64_t seed =
          seed_override.value_or(op_spec.value("seed", std::uint64_t{0}));
      double sigma;
      if (sc.kernel.family == RadialKernel::Family::gaussian) {
        sigma = sc.kernel.sigma;
      } else if (op_spec.contains("sigma")) {
        sigma = op_spec.at("sigma").get<double>();
      } else {
        throw ConfigError(
            "operator: random frequencies need a Gaussian kernel or an "
            "explicit 'sigma'");
      }
      sc.op = draw_random_operator(m, sigma, sc.config.d, seed);
    } else if (op_type == "grid") {
      if (sc.config.d != 1) throw ConfigError("operator: grid type needs d=1");
      sc.op = grid_operator(op_spec.at("m").get<int>(),
                            op_spec.value("spacing", 1.0));
    } else if (op_type == "serialized") {
      sc.op = operator_from_json(op_spec.at("value"));
    } else {
      throw ConfigError("operator: unknown type '" + op_type + "'");
    }
    if (sc.op.d() != sc.config.d)
      throw ConfigError("operator dimension does not match model dimension");

    const json& truth = config.at("ground_truth");
    if (truth.contains("sample")) {
      const json& s = truth.at("sample");
      SampleOptions opts;
      if (s.contains("amplitude_range")) {
        const auto range = s.at("amplitude_range").get<std::vector<double>>();
        if (range.size() != 2)
          throw ConfigError("ground_truth.sample.amplitude_range: need [lo,hi]");
        opts.amplitude_range = {range[0], range[1]};
      }
      opts.nonvanishing = s.value("nonvanishing", true);
      const std::uint64_t seed =
          seed_override.value_or(s.value("seed", std::uint64_t{1}));
      sc.ground_truth = sample_theta(sc.config, opts, seed);
    } else {
      json t = truth;
      t["k"] = sc.config.k;
      t["d"] = sc.config.d;
      t["epsilon"] = sc.config.epsilon;
      t["R"] = sc.config.R;
      sc.ground_truth = spike_train_from_json(t);
    }

    sc.y = apply(sc.op, sc.ground_truth);
    if (config.contains("noise") && !config.at("noise").is_null()) {
      NoiseSpec noise;
      noise.norm = config.at("noise").at("norm").get<double>();
      noise.seed = seed_override.value_or(
          config.at("noise").value("seed", std::uint64_t{2}));
      sc.noise = noise;
      sc.y += noise_vector(sc.op.m(), noise.norm, noise.seed);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario config: ") + e.what());
  }
  return sc;
}

json scenario_to_json(const Scenario& sc) {
  json j{{"version", kVersion},
         {"model",
          {{"k", sc.config.k},
           {"d", sc.config.d},
           {"epsilon", sc.config.epsilon},
           {"R", sc.config.R}}},
         {"kernel", sc.kernel_spec},
         {"operator", to_json(sc.op)},
         {"ground_truth", to_json(sc.ground_truth)},
         {"y", to_json(sc.y)}};
  if (sc.noise)
    j["noise"] = json{{"norm", sc.noise->norm}, {"seed", sc.noise->seed}};
  else
    j["noise"] = nullptr;
  j["config_hash"] = config_hash(j);
  return j;
}

Scenario scenario_from_json(const json& j) {
  Scenario sc;
  try {
    sc.config.k = j.at("model").at("k").get<int>();
    sc.config.d = j.at("model").at("d").get<int>();
    sc.config.epsilon = j.at("model").at("epsilon").get<double>();
    sc.config.R = j.at("model").at("R").get<double>();
    sc.config.validate();
    sc.kernel_spec = j.at("kernel");
    sc.kernel = kernel_from_spec(sc.kernel_spec, sc.config);
    sc.op = operator_from_json(j.at("operator"));
    sc.ground_truth = spike_train_from_json(j.at("ground_truth"));
    if (j.contains("noise") && !j.at("noise").is_null()) {
      NoiseSpec noise;
      noise.norm = j.at("noise").at("norm").get<double>();
      noise.seed = j.at("noise").value("seed", std::uint64_t{0});
      sc.noise = noise;
    }
    sc.y = cvec_from_json(j.at("y"));
    if (sc.y.size() != sc.op.m())
      throw ConfigError("scenario: y length does not match operator");
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario file: ") + e.what());
  }
  return sc;
}

void save_scenario(const Scenario& sc, const std::filesystem::path& path) {
  write_json_file(scenario_to_json(sc), path);
}

Scenario load_scenario(const std::filesystem::path& path) {
  return scenario_from_json(read_json_file(path));
}

}  // namespace spikebasin
