#include "mqpg/experiment.hpp"

#include <cmath>
#include <stdexcept>

namespace mqpg {

namespace {

ExperimentConfig base_preset(int d, double channel_spacing) {
  ExperimentConfig c;
  c.device = make_device(d, channel_spacing, 347.0, 0.03);
  c.device.pump_bandwidth_limit = 4.5;
  c.spectrograph.resolution = 0.0;
  return c;
}

}  // namespace

void ExperimentConfig::validate() const {
  const int d = alphabet.dimension;
  if (d < 2) throw std::invalid_argument("config: alphabet dimension must be >= 2");
  if (d > device.n_channels)
    throw std::invalid_argument("config: alphabet dimension exceeds device channels");
  if (alphabet.fwhm <= 0.0) throw std::invalid_argument("config: alphabet fwhm must be positive");
  if (alphabet.kind != AlphabetKind::HermiteGauss && alphabet.separation <= 0.0)
    throw std::invalid_argument("config: alphabet separation must be positive");
  device.validate(/*strict_spacing=*/true);
  spectrograph.validate();
  if (layout == PumpLayout::Ffb) {
    if (alphabet.kind != AlphabetKind::FrequencyBins)
      throw std::invalid_argument("config: FFB layout needs a frequency-bin alphabet");
    if (!is_odd_prime(d))
      throw std::invalid_argument("config: FFB layout requires an odd prime dimension");
    if (std::abs(alphabet.separation - device.channel_spacing()) > 1e-9)
      throw std::invalid_argument(
          "config: FFB bin separation must equal the channel spacing");
    if (basis_index >= d)
      throw std::invalid_argument("config: FFB basis index out of range (0..d-1)");
  } else if (basis_index > d) {
    throw std::invalid_argument("config: basis index out of range (0..d)");
  }
  if (counting.n_pulses < 0)
    throw std::invalid_argument("config: n_pulses must be >= 0");
  if (counting.efficiency <= 0.0 || counting.efficiency > 1.0)
    throw std::invalid_argument("config: efficiency must be in (0, 1]");
  if (counting.mean_photon_number < 0.0)
    throw std::invalid_argument("config: mean_photon_number must be >= 0");
  // grid constructors validate spans and power-of-two point counts
  input_grid();
  output_grid();
  pump_grid();
}

FrequencyGrid ExperimentConfig::input_grid() const {
  return make_grid(grids.input_center, grids.input_span, grids.input_points);
}

FrequencyGrid ExperimentConfig::output_grid() const {
  return make_grid(grids.output_center, grids.output_span, grids.output_points);
}

FrequencyGrid ExperimentConfig::pump_grid() const {
  return make_grid(device.resolved_pump_center(), grids.pump_span, grids.pump_points);
}

std::vector<int> ExperimentConfig::measured_bases() const {
  if (basis_index >= 0) return {basis_index};
  if (layout == PumpLayout::Ffb) return ffb_sortable_mubs(alphabet.dimension);
  std::vector<int> all(alphabet.dimension + 1);
  for (size_t b = 0; b < all.size(); ++b) all[b] = static_cast<int>(b);
  return all;
}

ExperimentConfig preset(const std::string& name) {
  if (name == "table1-d3-timebins") {
    ExperimentConfig c = base_preset(3, 0.63);
    c.alphabet = default_alphabet(AlphabetKind::TimeBins, 3);
    c.layout = PumpLayout::Standard;
    c.preset_name = name;
    return c;
  }
  if (name == "table1-d3-hg") {
    ExperimentConfig c = base_preset(3, 0.63);
    c.alphabet = default_alphabet(AlphabetKind::HermiteGauss, 3);
    c.layout = PumpLayout::Standard;
    c.preset_name = name;
    return c;
  }
  if (name == "table1-d3-freqbins") {
    ExperimentConfig c = base_preset(3, 0.63);
    c.alphabet = default_alphabet(AlphabetKind::FrequencyBins, 3);
    c.layout = PumpLayout::Standard;
    c.preset_name = name;
    return c;
  }
  if (name == "table1-d3-ffb") {
    ExperimentConfig c = base_preset(3, 0.63);
    c.alphabet = default_alphabet(AlphabetKind::FrequencyBins, 3, /*ffb=*/true);
    c.layout = PumpLayout::Ffb;
    c.preset_name = name;
    return c;
  }
  if (name == "table1-d5-timebins") {
    ExperimentConfig c = base_preset(5, 0.63);
    c.alphabet = default_alphabet(AlphabetKind::TimeBins, 5);
    c.layout = PumpLayout::Standard;
    c.preset_name = name;
    return c;
  }
  if (name == "table1-d5-hg") {
    ExperimentConfig c = base_preset(5, 0.63);
    c.alphabet = default_alphabet(AlphabetKind::HermiteGauss, 5);
    c.layout = PumpLayout::Standard;
    c.preset_name = name;
    return c;
  }
  if (name == "table1-d5-freqbins") {
    ExperimentConfig c = base_preset(5, 0.63);
    c.alphabet = default_alphabet(AlphabetKind::FrequencyBins, 5);
    c.layout = PumpLayout::Standard;
    c.preset_name = name;
    return c;
  }
  if (name == "table1-d5-ffb") {
    ExperimentConfig c = base_preset(5, 0.5);
    c.alphabet = default_alphabet(AlphabetKind::FrequencyBins, 5, /*ffb=*/true);
    c.layout = PumpLayout::Ffb;
    c.preset_name = name;
    return c;
  }
  throw std::invalid_argument("unknown preset: " + name);
}

std::vector<std::string> preset_names() {
  return {"table1-d3-timebins", "table1-d3-hg", "table1-d3-freqbins",
          "table1-d3-ffb",      "table1-d5-timebins", "table1-d5-hg",
          "table1-d5-freqbins", "table1-d5-ffb"};
}

PumpSpectrum compile_pump_for_basis(const ExperimentConfig& config,
                                    const ModeBasis& fundamental,
                                    const MubSet& mubs, int basis_index,
                                    const FrequencyGrid& pump_grid) {
  if (config.layout == PumpLayout::Ffb)
    return compile_pump_ffb(basis_index, config.alphabet.dimension, fundamental,
                            config.device, pump_grid);
  return compile_pump_standard(mubs.bases[basis_index], fundamental,
                               config.device, pump_grid);
}

ForwardModel::ForwardModel(const ExperimentConfig& config,
                           const ModeBasis& fundamental,
                           const PumpSpectrum& pump)
    : out_grid_(config.output_grid()) {
  readout_ = config.spectrograph;
  if (readout_.channel_bounds.empty())
    readout_.channel_bounds = midpoint_bounds(config.device.channel_centers);

  const SpectralEnvelope comb = phasematching_comb(config.device, out_grid_);
  mode_outputs_.reserve(fundamental.modes.size());
  for (const auto& mode : fundamental.modes) {
    ComplexVec s = conversion_overlap(pump.envelope, mode, out_grid_);
    mode_outputs_.push_back(comb.amplitude.cwiseProduct(s));
  }
}

SpectralEnvelope ForwardModel::output_amplitude(
    const Eigen::VectorXcd& coeffs) const {
  if (coeffs.size() != static_cast<Eigen::Index>(mode_outputs_.size()))
    throw std::invalid_argument("ForwardModel: coefficient count mismatch");
  SpectralEnvelope a{out_grid_, ComplexVec::Zero(out_grid_.n_points)};
  for (Eigen::Index j = 0; j < coeffs.size(); ++j)
    a.amplitude += coeffs[j] * mode_outputs_[j];
  return a;
}

RealSpectrum ForwardModel::output_intensity(const Eigen::VectorXcd& coeffs) const {
  const SpectralEnvelope a = output_amplitude(coeffs);
  return RealSpectrum{out_grid_, a.amplitude.cwiseAbs2()};
}

RealSpectrum ForwardModel::smeared_intensity(const Eigen::VectorXcd& coeffs) const {
  return apply_spectrograph(output_intensity(coeffs), readout_);
}

ChannelBinning ForwardModel::probabilities(const Eigen::VectorXcd& coeffs) const {
  return bin_channels(smeared_intensity(coeffs), readout_);
}

TomographyRun run_tomography(const ExperimentConfig& config) {
  config.validate();
  const int d = config.alphabet.dimension;
  const ModeBasis fund = fundamental_basis(config.alphabet, config.input_grid());
  const MubSet mubs = mub_bases(d);
  const ProbeSet probes = probe_set(d);
  const int n_probes = static_cast<int>(probes.coeffs.rows());
  const int n_ch = config.device.n_channels;

  TomographyRun run;
  std::uint64_t task = 0;
  double fid_sum = 0.0;
  int fid_count = 0;
  for (int b : config.measured_bases()) {
    const PumpSpectrum pump =
        compile_pump_for_basis(config, fund, mubs, b, config.pump_grid());
    const ForwardModel model(config, fund, pump);

    Eigen::MatrixXd probs(n_ch, n_probes);
    for (int xi = 0; xi < n_probes; ++xi) {
      const ChannelBinning bins =
          model.probabilities(probes.coeffs.row(xi).transpose());
      Eigen::VectorXd col = Eigen::Map<const Eigen::VectorXd>(
          bins.probs.data(), static_cast<Eigen::Index>(bins.probs.size()));
      if (config.counting.n_pulses > 0) {
        const CountRecord rec = sample_counts(
            bins.probs, config.counting.mean_photon_number,
            config.counting.n_pulses, config.counting.efficiency,
            derive_seed(config.counting.seed, task));
        for (int c = 0; c < n_ch; ++c) col[c] = static_cast<double>(rec.counts[c]);
      }
      ++task;
      const double sum = col.sum();
      if (sum <= 0.0)
        throw std::runtime_error("run_tomography: probe state produced no signal");
      probs.col(xi) = col / sum;
    }

    BasisTomography bt;
    bt.basis_index = b;
    bt.result = reconstruct_povm(probs.topRows(d), probes);

    bt.result.fidelities.resize(d);
    for (int c = 0; c < d; ++c) {
      const Eigen::VectorXcd target =
          mubs.bases[b].row(pump.channel_targets[c]).transpose();
      bt.result.fidelities[c] = fidelity(bt.result.povm[c], target);
    }
    bt.mean_fidelity = bt.result.fidelities.mean();
    fid_sum += bt.result.fidelities.sum();
    fid_count += d;

    Eigen::MatrixXd same_basis(d, d);
    for (int xi = 0; xi < n_probes; ++xi)
      if (probes.labels[xi].basis == b)
        same_basis.col(probes.labels[xi].index) = probs.col(xi).head(d);
    bt.crosstalk = crosstalk_matrix(same_basis);

    run.converged = run.converged && bt.result.converged;
    run.bases.push_back(std::move(bt));
  }
  run.mean_fidelity = fid_sum / fid_count;
  return run;
}

SimulateResult run_simulate(const ExperimentConfig& config, int probe_basis,
                            int probe_index) {
  const int d = config.alphabet.dimension;
  if (probe_basis < 0 || probe_basis > d)
    throw std::invalid_argument("run_simulate: probe basis out of range");
  if (probe_index < 0 || probe_index >= d)
    throw std::invalid_argument("run_simulate: probe index out of range");
  const MubSet mubs = mub_bases(d);
  return run_simulate(config, mubs.bases[probe_basis].row(probe_index).transpose());
}

SimulateResult run_simulate(const ExperimentConfig& config,
                            const Eigen::VectorXcd& coeffs) {
  config.validate();
  if (std::abs(coeffs.squaredNorm() - 1.0) > 1e-10)
    throw std::invalid_argument("run_simulate: input coefficients not normalized");
  const ModeBasis fund = fundamental_basis(config.alphabet, config.input_grid());
  const MubSet mubs = mub_bases(config.alphabet.dimension);
  const int b = (config.basis_index >= 0) ? config.basis_index : 0;
  const PumpSpectrum pump =
      compile_pump_for_basis(config, fund, mubs, b, config.pump_grid());
  const ForwardModel model(config, fund, pump);

  SimulateResult res;
  res.spectrum = model.smeared_intensity(coeffs);
  res.binning = bin_channels(res.spectrum, model.readout());
  if (config.counting.n_pulses > 0)
    res.counts = sample_counts(res.binning.probs, config.counting.mean_photon_number,
                               config.counting.n_pulses, config.counting.efficiency,
                               config.counting.seed);
  return res;
}

}  // namespace mqpg
