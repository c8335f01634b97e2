#include "spikebasin/json_io.hpp"

#include <fstream>

namespace spikebasin {

namespace {

ModelConfig config_from_json(const json& j) {
  ModelConfig c;
  c.k = j.at("k").get<int>();
  c.d = j.at("d").get<int>();
  c.epsilon = j.at("epsilon").get<double>();
  c.R = j.at("R").get<double>();
  c.validate();
  return c;
}

}  // namespace

json to_json(const SpikeTrain& train) {
  json positions = json::array();
  for (int r = 0; r < train.config.k; ++r) {
    json row = json::array();
    for (int j = 0; j < train.config.d; ++j) row.push_back(train.positions(r, j));
    positions.push_back(row);
  }
  return json{{"k", train.config.k},
              {"d", train.config.d},
              {"epsilon", train.config.epsilon},
              {"R", train.config.R},
              {"amplitudes", std::vector<double>(
                                 train.amplitudes.data(),
                                 train.amplitudes.data() + train.config.k)},
              {"positions", positions}};
}

SpikeTrain spike_train_from_json(const json& j) {
  SpikeTrain train;
  train.config = config_from_json(j);
  const auto amps = j.at("amplitudes").get<std::vector<double>>();
  const auto& positions = j.at("positions");
  if (static_cast<int>(amps.size()) != train.config.k ||
      static_cast<int>(positions.size()) != train.config.k)
    throw ConfigError("spike train JSON: amplitude/position counts"
                      " do not match k");
  train.amplitudes = Eigen::Map<const Vec>(amps.data(), train.config.k);
  train.positions.resize(train.config.k, train.config.d);
  for (int r = 0; r < train.config.k; ++r) {
    const auto row = positions.at(r).get<std::vector<double>>();
    if (static_cast<int>(row.size()) != train.config.d)
      throw ConfigError("spike train JSON: position row has wrong dimension");
    for (int c = 0; c < train.config.d; ++c) train.positions(r, c) = row[c];
  }
  return train;
}

json to_json(const FourierOperator& op) {
  json freqs = json::array();
  for (int l = 0; l < op.m(); ++l) {
    json row = json::array();
    for (int j = 0; j < op.d(); ++j) row.push_back(op.frequencies(l, j));
    freqs.push_back(row);
  }
  return json{{"m", op.m()},
              {"d", op.d()},
              {"frequencies", freqs},
              {"weights", std::vector<double>(op.weights.data(),
                                              op.weights.data() + op.m())},
              {"seed", op.seed}};
}

FourierOperator operator_from_json(const json& j) {
  FourierOperator op;
  const int m = j.at("m").get<int>();
  const int d = j.at("d").get<int>();
  op.frequencies.resize(m, d);
  const auto& freqs = j.at("frequencies");
  if (static_cast<int>(freqs.size()) != m)
    throw ConfigError("operator JSON: frequency count does not match m");
  for (int l = 0; l < m; ++l) {
    const auto row = freqs.at(l).get<std::vector<double>>();
    if (static_cast<int>(row.size()) != d)
      throw ConfigError("operator JSON: frequency row has wrong dimension");
    for (int c = 0; c < d; ++c) op.frequencies(l, c) = row[c];
  }
  const auto weights = j.at("weights").get<std::vector<double>>();
  if (static_cast<int>(weights.size()) != m)
    throw ConfigError("operator JSON: weight count does not match m");
  op.weights = Eigen::Map<const Vec>(weights.data(), m);
  op.seed = j.value("seed", std::uint64_t{0});
  op.normalize = j.value("normalize", true);
  return op;
}

json to_json(const CVec& values) {
  json out = json::array();
  for (int l = 0; l < values.size(); ++l)
    out.push_back(json::array({values[l].real(), values[l].imag()}));
  return out;
}

CVec cvec_from_json(const json& j) {
  CVec out(j.size());
  for (std::size_t l = 0; l < j.size(); ++l)
    out[static_cast<int>(l)] =
        Complex(j.at(l).at(0).get<double>(), j.at(l).at(1).get<double>());
  return out;
}

json to_json(const RipConstants& rip) {
  return json{{"gamma", rip.gamma},
              {"mu", rip.mu},
              {"gamma_provenance", to_string(rip.gamma_provenance)},
              {"mu_provenance", to_string(rip.mu_provenance)}};
}

json to_json(const BasinCertificate& cert) {
  json j{{"beta_max", cert.beta_max},
         {"C1", cert.C1},
         {"C2_or_C3", cert.C2_or_C3},
         {"c_h_used", cert.c_h_used},
         {"q_relaxation", cert.q_relaxation},
         {"L", cert.L},
         {"tau_max", cert.tau_max},
         {"noisy", cert.noisy},
         {"vacuous", cert.vacuous},
         {"assumptions_log", cert.assumptions_log}};
  if (cert.noise_budget) j["noise_budget"] = *cert.noise_budget;
  return j;
}

RadialKernel kernel_from_spec(const json& spec, const ModelConfig& config) {
  const std::string type = spec.at("type").get<std::string>();
  if (type == "gaussian") return gaussian_kernel(spec.at("sigma").get<double>());
  if (type == "gaussian_auto_k")
    return gaussian_kernel(config.epsilon * sigma_from_k(config.k));
  if (type == "convolution") {
    const std::string profile = spec.value("profile", "gaussian");
    if (profile != "gaussian")
      throw ConfigError("kernel spec: unknown convolution profile '" + profile +
                        "'");
    return convolution_of_gaussian(spec.at("width").get<double>());
  }
  throw ConfigError("kernel spec: unknown type '" + type + "'");
}

std::string config_hash(const json& j) {
  const std::string dump = j.dump();
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : dump) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(hash));
  return buf;
}

void write_measurements_csv(const CVec& y, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out.precision(17);
  out << "index,real,imag\n";
  for (int l = 0; l < y.size(); ++l)
    out << l << ',' << y[l].real() << ',' << y[l].imag() << '\n';
}

void write_trace_csv(const DescentTrace& trace,
                     const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out.precision(17);
  out << "iter,g,grad_norm,dist_to_ref,min_separation\n";
  for (std::size_t i = 0; i < trace.objective_values.size(); ++i) {
    out << i << ',' << trace.objective_values[i] << ','
        << trace.gradient_norms[i] << ',';
    if (i < trace.distances_to_ref.size()) out << trace.distances_to_ref[i];
    out << ',' << trace.min_separations[i] << '\n';
  }
}

void write_json_file(const json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << j.dump(2) << '\n';
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

}  // namespace spikebasin
