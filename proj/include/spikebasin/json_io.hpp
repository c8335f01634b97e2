// json_io.hpp — JSON (de)serialization for trains, operators, kernel specs,
// certificates, plus the CSV writers used by the CLI.
#pragma once

#include "spikebasin/certificates.hpp"
#include "spikebasin/common.hpp"
#include "spikebasin/kernel.hpp"
#include "spikebasin/measurement.hpp"
#include "spikebasin/solver.hpp"
#include "spikebasin/spike_model.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>

namespace spikebasin {

using nlohmann::json;

json to_json(const SpikeTrain& train);
SpikeTrain spike_train_from_json(const json& j);

json to_json(const FourierOperator& op);
FourierOperator operator_from_json(const json& j);

json to_json(const CVec& values);
CVec cvec_from_json(const json& j);

json to_json(const RipConstants& rip);
json to_json(const BasinCertificate& cert);

// Kernel construction from a spec object:
//   {"type":"gaussian","sigma":s}
//   {"type":"gaussian_auto_k"}            (sigma = epsilon * sigma_from_k(k))
//   {"type":"convolution","profile":"gaussian","width":w}
RadialKernel kernel_from_spec(const json& spec, const ModelConfig& config);

// FNV-1a over the canonical (key-sorted) dump; embedded in reports so runs
// are attributable to an exact configuration.
std::string config_hash(const json& j);

void write_measurements_csv(const CVec& y, const std::filesystem::path& path);
void write_trace_csv(const DescentTrace& trace, const std::filesystem::path& path);
void write_json_file(const json& j, const std::filesystem::path& path);
json read_json_file(const std::filesystem::path& path);

}  // namespace spikebasin
