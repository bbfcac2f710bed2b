#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mqpg/detection.hpp"
#include "mqpg/mqpg.hpp"
#include "mqpg/tomography.hpp"

// Experiment-level pipeline: resolved configurations, the full-comb forward
// model (shape pump -> convert -> spectrograph -> channel counts), and the
// detector-tomography driver.

namespace mqpg {

struct CountingConfig {
  std::int64_t n_pulses = 0;  // 0 = noiseless probabilities
  double mean_photon_number = 0.1;
  double efficiency = 1.0;
  std::uint64_t seed = 1;
};

struct GridConfig {
  double input_center = 193.0, input_span = 4.0;
  double output_center = 347.0, output_span = 6.0;
  double pump_span = 6.0;
  int input_points = 4096, output_points = 8192, pump_points = 8192;
};

struct ExperimentConfig {
  std::string preset_name;  // empty unless built from a preset
  AlphabetSpec alphabet;
  PumpLayout layout = PumpLayout::Standard;
  int basis_index = -1;  // -1 = all measurable bases
  DeviceSpec device;
  SpectrographSpec spectrograph;
  CountingConfig counting;
  GridConfig grids;

  void validate() const;
  FrequencyGrid input_grid() const;
  FrequencyGrid output_grid() const;
  FrequencyGrid pump_grid() const;
  std::vector<int> measured_bases() const;
};

// Table-1 presets: table1-{d3,d5}-{timebins,hg,freqbins,ffb}.
ExperimentConfig preset(const std::string& name);
std::vector<std::string> preset_names();

PumpSpectrum compile_pump_for_basis(const ExperimentConfig& config,
                                    const ModeBasis& fundamental,
                                    const MubSet& mubs, int basis_index,
                                    const FrequencyGrid& pump_grid);

// Forward model for one compiled pump: the full phase-matching comb times the
// pump/input convolution, per fundamental mode. Probe amplitudes follow by
// linearity of the coefficients.
class ForwardModel {
 public:
  ForwardModel(const ExperimentConfig& config, const ModeBasis& fundamental,
               const PumpSpectrum& pump);

  SpectralEnvelope output_amplitude(const Eigen::VectorXcd& coeffs) const;
  RealSpectrum output_intensity(const Eigen::VectorXcd& coeffs) const;
  // smeared intensity binned by the channel bounds
  ChannelBinning probabilities(const Eigen::VectorXcd& coeffs) const;
  RealSpectrum smeared_intensity(const Eigen::VectorXcd& coeffs) const;

  const SpectrographSpec& readout() const { return readout_; }

 private:
  FrequencyGrid out_grid_;
  SpectrographSpec readout_;
  std::vector<ComplexVec> mode_outputs_;  // comb * overlap per fundamental mode
};

struct BasisTomography {
  int basis_index = 0;
  TomographyResult result;
  Eigen::MatrixXd crosstalk;  // measured-basis probes only
  double mean_fidelity = 0.0;
};

struct TomographyRun {
  std::vector<BasisTomography> bases;
  double mean_fidelity = 0.0;
  bool converged = true;
};

// Full detector tomography: for every measured basis, probe with all d(d+1)
// MUB eigenstates, optionally add Poissonian counting noise, reconstruct the
// POVM and score it against the ideal projectors.
TomographyRun run_tomography(const ExperimentConfig& config);

struct SimulateResult {
  ChannelBinning binning;
  RealSpectrum spectrum;  // smeared output intensity
  std::optional<CountRecord> counts;
};

// Single-state pipeline for an eigenstate probe (basis, index).
SimulateResult run_simulate(const ExperimentConfig& config, int probe_basis,
                            int probe_index);
SimulateResult run_simulate(const ExperimentConfig& config,
                            const Eigen::VectorXcd& coeffs);

}  // namespace mqpg
