#pragma once

#include <iosfwd>
#include <json.hpp>

#include "mqpg/experiment.hpp"
#include "mqpg/scalability.hpp"

// Machine-readable outputs. Every artifact carries a version string and an
// echo of the resolved configuration; nothing time- or host-dependent is
// written, so reruns are byte-identical.

namespace mqpg::io {

inline constexpr const char* kArtifactVersion = "mqpg-sim 1.0.0";

using json = nlohmann::ordered_json;

json config_json(const ExperimentConfig& config);
json mubs_json(const MubSet& mubs);
json pump_summary_json(const PumpSpectrum& pump, const ExperimentConfig& config);
json count_record_json(const CountRecord& record);
json tomography_json(const TomographyRun& run, const ExperimentConfig& config);
json simulate_json(const SimulateResult& result, const ExperimentConfig& config);

// columns: frequency_THz, amplitude_re, amplitude_im (the waveshaper mask)
void write_pump_csv(std::ostream& out, const PumpSpectrum& pump);
// columns: frequency_THz, intensity
void write_spectrum_csv(std::ostream& out, const RealSpectrum& spectrum);
// columns: d, ratio, error, feasible
void write_sweep_csv(std::ostream& out, const SweepResult& result);
// column-normalized channel-vs-input matrix, one row per channel
void write_crosstalk_csv(std::ostream& out, const Eigen::MatrixXd& crosstalk,
                         int basis_index);

}  // namespace mqpg::io
