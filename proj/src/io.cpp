#include "mqpg/io.hpp"

#include <cstdio>
#include <ostream>

namespace mqpg::io {

namespace {

const char* kind_name(AlphabetKind k) {
  switch (k) {
    case AlphabetKind::TimeBins: return "time_bins";
    case AlphabetKind::HermiteGauss: return "hg_modes";
    case AlphabetKind::FrequencyBins: return "frequency_bins";
  }
  return "?";
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

json matrix_json(const Eigen::MatrixXcd& m) {
  json re = json::array(), im = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json rrow = json::array(), irow = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      rrow.push_back(m(i, j).real());
      irow.push_back(m(i, j).imag());
    }
    re.push_back(std::move(rrow));
    im.push_back(std::move(irow));
  }
  return json{{"re", std::move(re)}, {"im", std::move(im)}};
}

}  // namespace

json config_json(const ExperimentConfig& c) {
  json j;
  j["artifact_version"] = kArtifactVersion;
  if (!c.preset_name.empty()) j["preset"] = c.preset_name;
  j["alphabet"] = {{"kind", kind_name(c.alphabet.kind)},
                   {"dimension", c.alphabet.dimension},
                   {"fwhm", c.alphabet.fwhm},
                   {"separation", c.alphabet.separation},
                   {"center", c.alphabet.center}};
  j["layout"] = {{"type", c.layout == PumpLayout::Ffb ? "ffb" : "standard"},
                 {"basis", c.basis_index}};
  j["device"] = {{"n_channels", c.device.n_channels},
                 {"channel_centers", c.device.channel_centers},
                 {"pm_fwhm", c.device.pm_fwhm},
                 {"pm_shape", c.device.pm_shape == PmShape::Sinc ? "sinc" : "gaussian"},
                 {"pump_bandwidth_limit", c.device.pump_bandwidth_limit},
                 {"input_center", c.device.input_center},
                 {"pump_center", c.device.resolved_pump_center()},
                 {"relative_delay", c.device.relative_delay}};
  j["spectrograph"] = {{"resolution", c.spectrograph.resolution}};
  j["counting"] = {{"n_pulses", c.counting.n_pulses},
                   {"mean_photon_number", c.counting.mean_photon_number},
                   {"efficiency", c.counting.efficiency},
                   {"seed", c.counting.seed}};
  j["grids"] = {{"input_center", c.grids.input_center},
                {"input_span", c.grids.input_span},
                {"input_points", c.grids.input_points},
                {"output_center", c.grids.output_center},
                {"output_span", c.grids.output_span},
                {"output_points", c.grids.output_points},
                {"pump_span", c.grids.pump_span},
                {"pump_points", c.grids.pump_points}};
  return j;
}

json mubs_json(const MubSet& mubs) {
  json j;
  j["artifact_version"] = kArtifactVersion;
  j["dimension"] = mubs.dimension;
  j["n_bases"] = mubs.bases.size();
  json bases = json::array();
  for (const auto& b : mubs.bases) bases.push_back(matrix_json(b));
  j["bases"] = std::move(bases);
  return j;
}

json pump_summary_json(const PumpSpectrum& pump, const ExperimentConfig& config) {
  json j;
  j["artifact_version"] = kArtifactVersion;
  j["layout"] = pump.layout == PumpLayout::Ffb ? "ffb" : "standard";
  j["bin_count"] = pump.bin_count;
  if (pump.mub_index >= 0) j["mub_index"] = pump.mub_index;
  j["channel_targets"] = pump.channel_targets;
  double lo = 0.0, hi = 0.0;
  const auto& a = pump.envelope.amplitude;
  const double cutoff = 1e-3 * a.cwiseAbs().maxCoeff();
  for (int i = 0; i < pump.envelope.grid.n_points; ++i)
    if (std::abs(a[i]) > cutoff) {
      lo = pump.envelope.grid.value(i);
      break;
    }
  for (int i = pump.envelope.grid.n_points - 1; i >= 0; --i)
    if (std::abs(a[i]) > cutoff) {
      hi = pump.envelope.grid.value(i);
      break;
    }
  j["support_lo_THz"] = lo;
  j["support_hi_THz"] = hi;
  j["span_THz"] = hi - lo;
  j["config"] = config_json(config);
  return j;
}

json count_record_json(const CountRecord& record) {
  return json{{"counts", record.counts},
              {"n_pulses", record.n_pulses},
              {"mean_photon_number", record.mean_photon_number},
              {"seed", record.seed}};
}

json tomography_json(const TomographyRun& run, const ExperimentConfig& config) {
  json j;
  j["artifact_version"] = kArtifactVersion;
  j["mean_fidelity"] = run.mean_fidelity;
  j["converged"] = run.converged;
  json bases = json::array();
  for (const auto& bt : run.bases) {
    json b;
    b["basis"] = bt.basis_index;
    b["mean_fidelity"] = bt.mean_fidelity;
    b["fidelities"] = std::vector<double>(
        bt.result.fidelities.data(),
        bt.result.fidelities.data() + bt.result.fidelities.size());
    b["residual"] = bt.result.residual;
    b["iterations"] = bt.result.iterations;
    b["converged"] = bt.result.converged;
    json povm = json::array();
    for (const auto& el : bt.result.povm) povm.push_back(matrix_json(el.matrix));
    b["povm"] = std::move(povm);
    bases.push_back(std::move(b));
  }
  j["bases"] = std::move(bases);
  j["config"] = config_json(config);
  return j;
}

json simulate_json(const SimulateResult& result, const ExperimentConfig& config) {
  json j;
  j["artifact_version"] = kArtifactVersion;
  j["probabilities"] = result.binning.probs;
  j["loss_fraction"] = result.binning.loss_fraction;
  if (result.counts) j["counts"] = count_record_json(*result.counts);
  j["config"] = config_json(config);
  return j;
}

void write_pump_csv(std::ostream& out, const PumpSpectrum& pump) {
  out << "# " << kArtifactVersion << "\n";
  out << "# layout=" << (pump.layout == PumpLayout::Ffb ? "ffb" : "standard")
      << " bin_count=" << pump.bin_count << "\n";
  out << "frequency_THz,amplitude_re,amplitude_im\n";
  for (int i = 0; i < pump.envelope.grid.n_points; ++i)
    out << fmt(pump.envelope.grid.value(i)) << ","
        << fmt(pump.envelope.amplitude[i].real()) << ","
        << fmt(pump.envelope.amplitude[i].imag()) << "\n";
}

void write_spectrum_csv(std::ostream& out, const RealSpectrum& spectrum) {
  out << "# " << kArtifactVersion << "\n";
  out << "frequency_THz,intensity\n";
  for (int i = 0; i < spectrum.grid.n_points; ++i)
    out << fmt(spectrum.grid.value(i)) << "," << fmt(spectrum.values[i]) << "\n";
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  out << "# " << kArtifactVersion << "\n";
  out << "# pm_fwhm=" << fmt(result.config.pm_fwhm)
      << " separation_factor=" << fmt(result.config.separation_factor)
      << " pm_shape=" << (result.config.pm_shape == PmShape::Sinc ? "sinc" : "gaussian")
      << " spectrograph_resolution=" << fmt(result.config.spectrograph_resolution)
      << " max_grid_points=" << result.config.max_grid_points << "\n";
  out << "d,ratio,error,feasible\n";
  for (const auto& cell : result.cells)
    out << cell.dimension << "," << fmt(cell.ratio) << "," << fmt(cell.error)
        << "," << (cell.feasible ? 1 : 0) << "\n";
}

void write_crosstalk_csv(std::ostream& out, const Eigen::MatrixXd& crosstalk,
                         int basis_index) {
  out << "# " << kArtifactVersion << "\n";
  out << "# basis=" << basis_index << " rows=channels cols=inputs\n";
  for (Eigen::Index r = 0; r < crosstalk.rows(); ++r) {
    for (Eigen::Index c = 0; c < crosstalk.cols(); ++c)
      out << (c ? "," : "") << fmt(crosstalk(r, c));
    out << "\n";
  }
}

}  // namespace mqpg::io
