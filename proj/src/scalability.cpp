#include "mqpg/scalability.hpp"

#include <cmath>
#include <future>
#include <stdexcept>

namespace mqpg {

namespace {

int pow2_at_least(double x, int cap) {
  int n = 2;
  while (n < x && n < cap) n *= 2;
  return n;
}

}  // namespace

SweepGeometry sweep_geometry(int d, double ratio, const SweepConfig& config) {
  SweepGeometry g;
  g.bin_spacing = ratio * config.pm_fwhm / (2 * d - 1);
  g.bin_fwhm = g.bin_spacing / config.separation_factor;

  const double in_span = (d - 1) * g.bin_spacing + 14.0 * g.bin_fwhm;
  const double out_span =
      (d - 1) * g.bin_spacing +
      std::max(30.0 * config.pm_fwhm, 14.0 * g.bin_fwhm) +
      6.0 * config.spectrograph_resolution;
  const double pump_span = (2 * d - 2) * g.bin_spacing + 14.0 * g.bin_fwhm;

  const double target = g.bin_fwhm / 8.0;
  auto build = [&](double center, double span) {
    const int n = pow2_at_least(span / target + 1.0, config.max_grid_points);
    return make_grid(center, span, n);
  };
  g.in_grid = build(193.0, in_span);
  g.out_grid = build(347.0, out_span);
  g.pump_grid = build(347.0 - 193.0, pump_span);

  g.feasible = g.bin_fwhm >= 4.0 * g.in_grid.spacing() &&
               g.bin_fwhm >= 4.0 * g.out_grid.spacing() &&
               g.bin_fwhm >= 4.0 * g.pump_grid.spacing();

  g.device = make_device(d, g.bin_spacing, 347.0, config.pm_fwhm);
  g.device.pm_shape = config.pm_shape;
  g.device.pump_bandwidth_limit = ratio * config.pm_fwhm;
  g.device.validate(/*strict_spacing=*/false);

  g.alphabet.kind = AlphabetKind::FrequencyBins;
  g.alphabet.dimension = d;
  g.alphabet.fwhm = g.bin_fwhm;
  g.alphabet.separation = g.bin_spacing;
  g.alphabet.center = 193.0;
  return g;
}

CellOutcome average_error(int d, double ratio, const SweepConfig& config) {
  if (!is_odd_prime(d))
    throw std::invalid_argument("average_error: d must be an odd prime");
  if (ratio <= 0.0) throw std::invalid_argument("average_error: ratio must be positive");
  if (config.separation_factor < 2.0)
    throw std::invalid_argument("average_error: separation_factor must be >= 2");

  const SweepGeometry g = sweep_geometry(d, ratio, config);
  if (!g.feasible) return CellOutcome{1.0, false};

  const ModeBasis fund = fundamental_basis(g.alphabet, g.in_grid);
  const MubSet mubs = mub_bases(d);

  std::vector<Eigen::VectorXd> peaks;
  peaks.reserve(d);
  for (int c = 0; c < d; ++c)
    peaks.push_back(pm_peak(g.device, c, g.out_grid).amplitude.real());

  SpectrographSpec readout;
  readout.resolution = config.spectrograph_resolution;
  readout.channel_bounds = midpoint_bounds(g.device.channel_centers);

  const double d_out = g.out_grid.spacing();
  double error_sum = 0.0;
  for (int k : ffb_sortable_mubs(d)) {
    const PumpSpectrum pump = compile_pump_ffb(k, d, fund, g.device, g.pump_grid);
    std::vector<ComplexVec> overlaps;
    overlaps.reserve(d);
    for (int j = 0; j < d; ++j)
      overlaps.push_back(
          conversion_overlap(pump.envelope, fund.modes[j], g.out_grid));

    std::vector<int> correct_channel(d, 0);
    for (int c = 0; c < d; ++c) correct_channel[pump.channel_targets[c]] = c;

    for (int m = 0; m < d; ++m) {
      ComplexVec s = ComplexVec::Zero(g.out_grid.n_points);
      for (int j = 0; j < d; ++j) s += mubs.bases[k](m, j) * overlaps[j];

      std::vector<double> p(d, 0.0);
      if (config.spectrograph_resolution == 0.0) {
        // ideal readout: per-channel projection probabilities
        for (int c = 0; c < d; ++c)
          p[c] = (peaks[c].array() * s.array().abs()).matrix().squaredNorm() * d_out;
      } else {
        RealSpectrum total{g.out_grid, Eigen::VectorXd::Zero(g.out_grid.n_points)};
        for (int c = 0; c < d; ++c)
          total.values += (peaks[c].array() * s.array().abs()).square().matrix();
        p = bin_channels(apply_spectrograph(total, readout), readout).probs;
      }

      double sum = 0.0;
      for (double v : p) sum += v;
      if (sum <= 0.0) return CellOutcome{1.0, false};
      error_sum += 1.0 - p[correct_channel[m]] / sum;
    }
  }
  return CellOutcome{error_sum / (static_cast<double>(d) * d), true};
}

SweepResult run_sweep(const SweepConfig& config) {
  SweepResult result;
  result.config = config;
  const size_t n_cells = config.dimensions.size() * config.ratios.size();
  result.cells.resize(n_cells);

  auto fill = [&](size_t idx) {
    const int d = config.dimensions[idx / config.ratios.size()];
    const double ratio = config.ratios[idx % config.ratios.size()];
    const CellOutcome out = average_error(d, ratio, config);
    result.cells[idx] = SweepCell{d, ratio, out.error, out.feasible};
  };

  if (config.threads <= 1) {
    for (size_t i = 0; i < n_cells; ++i) fill(i);
    return result;
  }
  // cells are independent; assembly order is fixed by index
  std::vector<std::future<void>> pending;
  for (size_t i = 0; i < n_cells; ++i) {
    pending.push_back(std::async(std::launch::async, fill, i));
    if (pending.size() >= static_cast<size_t>(config.threads)) {
      for (auto& f : pending) f.get();
      pending.clear();
    }
  }
  for (auto& f : pending) f.get();
  return result;
}

}  // namespace mqpg
