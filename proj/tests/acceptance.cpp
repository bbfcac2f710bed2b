// Acceptance suite: end-to-end checks of the simulator against its contract.
// Each criterion prints one PASS/FAIL line; the exit code is the number of
// failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <vector>

#include "mqpg/config.hpp"
#include "mqpg/io.hpp"
#include "mqpg/scalability.hpp"

using namespace mqpg;

namespace {

struct Criterion {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// FFB frequency-bin experiment at total-bandwidth ratio R: channel spacing
// R * pm / (2d-1), bins a third of the spacing wide.
ExperimentConfig ratio_config(int d, double ratio) {
  const double pm = 0.03;
  const double spacing = ratio * pm / (2 * d - 1);
  ExperimentConfig c;
  c.device = make_device(d, spacing, 347.0, pm);
  c.device.pump_bandwidth_limit = ratio * pm;
  c.alphabet =
      AlphabetSpec{AlphabetKind::FrequencyBins, d, spacing / 3.0, spacing, 193.0};
  c.layout = PumpLayout::Ffb;
  return c;
}

// ---------------------------------------------------------------------------

Criterion criterion1_mubs() {
  Criterion crit;
  for (int d : {3, 5, 7}) {
    const MubSet set = mub_bases(d);
    crit.require(set.bases.size() == static_cast<size_t>(d + 1),
                 "basis count d=" + std::to_string(d));
    double worst_unitary = 0.0, worst_bias = 0.0;
    for (const auto& b : set.bases)
      worst_unitary = std::max(
          worst_unitary, (b * b.adjoint() - Eigen::MatrixXcd::Identity(d, d))
                             .cwiseAbs()
                             .maxCoeff());
    for (size_t b1 = 0; b1 < set.bases.size(); ++b1)
      for (size_t b2 = b1 + 1; b2 < set.bases.size(); ++b2)
        for (int u = 0; u < d; ++u)
          for (int v = 0; v < d; ++v) {
            const Complex ov =
                set.bases[b1].row(u).conjugate().dot(set.bases[b2].row(v).conjugate());
            worst_bias =
                std::max(worst_bias, std::abs(std::norm(ov) - 1.0 / d));
          }
    crit.require(worst_unitary <= 1e-12,
                 "unitarity d=" + std::to_string(d));
    crit.require(worst_bias <= 1e-12,
                 "unbiasedness d=" + std::to_string(d));
  }
  return crit;
}

Criterion criterion2_ffb_structure() {
  Criterion crit;
  for (int d : {3, 5}) {
    const ExperimentConfig c = ratio_config(d, 100.0);
    const ModeBasis fund = fundamental_basis(c.alphabet, c.input_grid());
    const PumpSpectrum pump =
        compile_pump_ffb(1, d, fund, c.device, c.pump_grid());
    crit.require(pump.bin_count == 2 * d - 1,
                 "FFB bin count d=" + std::to_string(d));
    int accepted = 0;
    for (int k = 0; k <= d; ++k) {
      try {
        compile_pump_ffb(k, d, fund, c.device, c.pump_grid());
        ++accepted;
      } catch (const std::invalid_argument&) {
      }
    }
    crit.require(accepted == d, "accepted MUB count d=" + std::to_string(d));
  }
  // standard layout for d=3 frequency bins: d^2 bins
  DeviceSpec dev = make_device(3, 0.63, 347.0, 0.03);
  const FrequencyGrid in_grid = make_grid(193.0, 4.0, 4096);
  const ModeBasis fund =
      fundamental_basis(default_alphabet(AlphabetKind::FrequencyBins, 3), in_grid);
  const PumpSpectrum pump = compile_pump_standard(
      mub_bases(3).bases[1], fund, dev, make_grid(154.0, 6.0, 8192));
  crit.require(pump.bin_count == 9, "standard d=3 bin count");
  return crit;
}

Criterion criterion3_ideal_fidelity() {
  Criterion crit;
  {
    const TomographyRun run = run_tomography(ratio_config(3, 100.0));
    crit.require(run.converged, "d=3 convergence");
    crit.require(run.mean_fidelity >= 0.99,
                 "d=3 mean fidelity " + std::to_string(run.mean_fidelity));
  }
  {
    const TomographyRun run = run_tomography(ratio_config(5, 100.0));
    crit.require(run.converged, "d=5 convergence");
    crit.require(run.mean_fidelity >= 0.98,
                 "d=5 mean fidelity " + std::to_string(run.mean_fidelity));
  }
  return crit;
}

Criterion criterion4_resolution_ordering() {
  Criterion crit;
  for (const std::string& name : preset_names()) {
    ExperimentConfig fine = preset(name);
    fine.spectrograph.resolution = 0.03;
    ExperimentConfig coarse = preset(name);
    coarse.spectrograph.resolution = 0.3;
    const TomographyRun run_fine = run_tomography(fine);
    const TomographyRun run_coarse = run_tomography(coarse);
    crit.require(run_fine.mean_fidelity >= run_coarse.mean_fidelity,
                 name + " ordering");
    bool strict_superposition = false;
    for (size_t b = 0; b < run_fine.bases.size(); ++b)
      if (run_fine.bases[b].basis_index >= 1 &&
          run_fine.bases[b].mean_fidelity > run_coarse.bases[b].mean_fidelity)
        strict_superposition = true;
    crit.require(strict_superposition, name + " strict superposition basis");
  }
  return crit;
}

Criterion criterion5_round_trip() {
  Criterion crit;
  for (int d : {3, 5}) {
    const ProbeSet probes = probe_set(d);
    const MubSet mubs = mub_bases(d);
    std::vector<Eigen::MatrixXcd> truth;
    for (int c = 0; c < d; ++c) {
      const Eigen::VectorXcd v = mubs.bases[1].row(c).transpose();
      truth.push_back(v * v.adjoint());
    }
    Eigen::MatrixXd clean(d, probes.coeffs.rows());
    for (int c = 0; c < d; ++c)
      for (Eigen::Index xi = 0; xi < probes.coeffs.rows(); ++xi) {
        const Eigen::VectorXcd v = probes.coeffs.row(xi).transpose();
        clean(c, xi) = std::max(std::real(v.dot(truth[c] * v)), 0.0);
      }
    const TomographyResult res = reconstruct_povm(clean, probes);
    double worst = 0.0;
    for (int c = 0; c < d; ++c)
      worst = std::max(worst, (res.povm[c].matrix - truth[c]).norm());
    crit.require(worst <= 1e-5, "noiseless d=" + std::to_string(d) +
                                    " frobenius " + std::to_string(worst));

    if (d == 3) {
      // poisson noise at 1e4 expected counts per probe, 50 seeds
      std::vector<double> errors;
      for (int seed = 0; seed < 50; ++seed) {
        std::mt19937_64 rng(derive_seed(2024, seed));
        Eigen::MatrixXd noisy = clean;
        for (Eigen::Index xi = 0; xi < noisy.cols(); ++xi) {
          for (int c = 0; c < d; ++c) {
            std::poisson_distribution<long> dist(1e4 * clean(c, xi) + 1e-12);
            noisy(c, xi) = static_cast<double>(dist(rng));
          }
          const double sum = noisy.col(xi).sum();
          if (sum > 0) noisy.col(xi) /= sum;
        }
        const TomographyResult r = reconstruct_povm(noisy, probes);
        double w = 0.0;
        for (int c = 0; c < d; ++c)
          w = std::max(w, (r.povm[c].matrix - truth[c]).norm());
        errors.push_back(w);
      }
      std::sort(errors.begin(), errors.end());
      const double median = errors[errors.size() / 2];
      crit.require(median <= 0.05,
                   "noisy median frobenius " + std::to_string(median));
    }
  }
  // within-model round trip: theoretical POVM -> probabilities -> reconstruction
  for (int d : {3, 5}) {
    const ExperimentConfig c = ratio_config(d, 100.0);
    const ModeBasis fund = fundamental_basis(c.alphabet, c.input_grid());
    const PumpSpectrum pump =
        compile_pump_ffb(1, d, fund, c.device, c.pump_grid());
    std::vector<ChannelKernel> kernels;
    for (int ch = 0; ch < d; ++ch)
      kernels.push_back(
          channel_kernel(pump, c.device, ch, c.input_grid(), c.output_grid()));
    const auto povm = theoretical_povm(kernels, fund);
    const ProbeSet probes = probe_set(d);
    Eigen::MatrixXd p(d, probes.coeffs.rows());
    for (int ch = 0; ch < d; ++ch)
      for (Eigen::Index xi = 0; xi < probes.coeffs.rows(); ++xi) {
        const Eigen::VectorXcd v = probes.coeffs.row(xi).transpose();
        p(ch, xi) = std::max(std::real(v.dot(povm[ch].matrix * v)), 0.0);
      }
    const TomographyResult res = reconstruct_povm(p, probes);
    double worst = 0.0;
    for (int ch = 0; ch < d; ++ch)
      worst = std::max(worst, (res.povm[ch].matrix - povm[ch].matrix).norm());
    crit.require(worst <= 1e-5, "model round trip d=" + std::to_string(d) +
                                    " frobenius " + std::to_string(worst));
  }
  return crit;
}

Criterion criterion6_scalability() {
  Criterion crit;
  SweepConfig config;
  config.dimensions = {3, 5, 7, 11, 13};
  config.ratios = {10.0, 30.0, 100.0, 300.0};
  const SweepResult grid = run_sweep(config);
  const auto cell = [&](size_t di, size_t ri) {
    return grid.cells[di * config.ratios.size() + ri];
  };
  for (size_t di = 0; di < config.dimensions.size(); ++di)
    for (size_t ri = 0; ri + 1 < config.ratios.size(); ++ri)
      crit.require(cell(di, ri + 1).error <= cell(di, ri).error + 1e-3,
                   "monotone in ratio at d=" +
                       std::to_string(config.dimensions[di]));
  for (size_t ri = 0; ri < config.ratios.size(); ++ri)
    for (size_t di = 0; di + 1 < config.dimensions.size(); ++di)
      crit.require(cell(di + 1, ri).error >= cell(di, ri).error - 1e-3,
                   "monotone in d at ratio " +
                       std::to_string(config.ratios[ri]));
  for (const auto& c : grid.cells) {
    crit.require(c.feasible, "feasibility of the default grid");
    crit.require(c.error >= 0.0 && c.error <= 1.0, "error range");
  }

  // the largest prime with error <= 0.10 at the experimental ratio of 100
  int largest_ok = 0;
  for (int d : {13, 17, 19, 23, 29, 31, 37, 41, 43, 47}) {
    const CellOutcome out = average_error(d, 100.0, config);
    if (out.feasible && out.error <= 0.10) largest_ok = d;
    std::printf("    d=%-3d ratio=100: error=%.4f\n", d, out.error);
    std::fflush(stdout);
  }
  crit.require(largest_ok >= 17 && largest_ok <= 43,
               "largest prime with error <= 0.10 is " +
                   std::to_string(largest_ok));
  return crit;
}

Criterion criterion7_hygiene() {
  Criterion crit;

  // Parseval
  const FrequencyGrid g = make_grid(193.0, 4.0, 4096);
  SpectralEnvelope e = gaussian_envelope(g, 193.2, 0.25);
  for (int i = 0; i < g.n_points; ++i)
    e.amplitude[i] *= std::polar(1.0, 0.4 * std::cos(3.0 * g.value(i)));
  crit.require(std::abs(norm(to_time_domain(e)) - norm(e)) <= 1e-10, "parseval");

  // gaussian overlap closed form
  const SpectralEnvelope a = gaussian_envelope(g, 193.0, 0.1);
  const SpectralEnvelope b = gaussian_envelope(g, 193.1, 0.1);
  crit.require(std::abs(inner_product(a, b).real() - 0.5) <= 1e-8,
               "gaussian overlap 0.5");

  // gram POVM positivity
  const ExperimentConfig c3 = ratio_config(3, 100.0);
  const ModeBasis fund = fundamental_basis(c3.alphabet, c3.input_grid());
  const PumpSpectrum pump =
      compile_pump_ffb(2, 3, fund, c3.device, c3.pump_grid());
  std::vector<ChannelKernel> kernels;
  for (int ch = 0; ch < 3; ++ch)
    kernels.push_back(
        channel_kernel(pump, c3.device, ch, c3.input_grid(), c3.output_grid()));
  for (const auto& el : theoretical_povm(kernels, fund)) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(el.matrix);
    crit.require(es.eigenvalues().minCoeff() >= -1e-10, "gram POVM PSD");
  }

  // poisson sampler 3-sigma mean test
  const std::vector<double> probs{0.45, 0.35, 0.2};
  std::vector<double> sums(3, 0.0);
  const int n_seeds = 100;
  for (int s = 0; s < n_seeds; ++s) {
    const CountRecord rec = sample_counts(probs, 0.1, 1000000, 1.0, 555 + s);
    for (int ch = 0; ch < 3; ++ch) sums[ch] += static_cast<double>(rec.counts[ch]);
  }
  for (int ch = 0; ch < 3; ++ch) {
    const double expected = n_seeds * 1e5 * probs[ch];
    crit.require(std::abs(sums[ch] - expected) <= 3.0 * std::sqrt(expected),
                 "poisson 3-sigma channel " + std::to_string(ch));
  }

  // determinism: byte-identical artifacts under fixed seeds
  ExperimentConfig sim = preset("table1-d3-ffb");
  sim.grids.input_points = 1024;
  sim.grids.output_points = 2048;
  sim.grids.pump_points = 2048;
  sim.counting.n_pulses = 100000;
  const std::string j1 = io::simulate_json(run_simulate(sim, 1, 2), sim).dump(2);
  const std::string j2 = io::simulate_json(run_simulate(sim, 1, 2), sim).dump(2);
  crit.require(j1 == j2, "simulate JSON determinism");

  SweepConfig sweep;
  sweep.dimensions = {3};
  sweep.ratios = {20.0};
  std::ostringstream s1, s2;
  io::write_sweep_csv(s1, run_sweep(sweep));
  io::write_sweep_csv(s2, run_sweep(sweep));
  crit.require(s1.str() == s2.str(), "sweep CSV determinism");

  return crit;
}

int report(int index, const std::string& name, Criterion (*fn)(),
           double budget_s) {
  const auto t0 = std::chrono::steady_clock::now();
  Criterion crit;
  try {
    crit = fn();
  } catch (const std::exception& ex) {
    crit.pass = false;
    crit.detail = std::string("exception: ") + ex.what();
  }
  const double elapsed = seconds_since(t0);
  if (elapsed > budget_s) {
    crit.pass = false;
    crit.detail += (crit.detail.empty() ? "" : "; ") + std::string("over budget");
  }
  std::printf("[%s] criterion %d: %s (%.1fs / budget %.0fs)%s%s\n",
              crit.pass ? "PASS" : "FAIL", index, name.c_str(), elapsed,
              budget_s, crit.detail.empty() ? "" : " - ",
              crit.detail.c_str());
  std::fflush(stdout);
  return crit.pass ? 0 : 1;
}

}  // namespace

int main() {
  int failures = 0;
  failures += report(1, "MUB unitarity and unbiasedness (d=3,5,7)",
                     criterion1_mubs, 1.0);
  failures += report(2, "FFB pump structure and sortable-basis count",
                     criterion2_ffb_structure, 60.0);
  failures += report(3, "ideal-regime tomography fidelity (ratio 100)",
                     criterion3_ideal_fidelity, 300.0);
  failures += report(4, "spectrograph resolution ordering across presets",
                     criterion4_resolution_ordering, 600.0);
  failures += report(5, "tomography round trip, noiseless and poisson",
                     criterion5_round_trip, 300.0);
  failures += report(6, "scalability: monotone error and d~30 at ratio 100",
                     criterion6_scalability, 1800.0);
  failures += report(7, "numerical hygiene suite", criterion7_hygiene, 60.0);
  if (failures == 0)
    std::printf("acceptance: all criteria passed\n");
  else
    std::printf("acceptance: %d criterion(s) failed\n", failures);
  return failures;
}
