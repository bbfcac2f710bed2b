#pragma once

#include <cstdint>
#include <vector>

#include "mqpg/spectral.hpp"

// Readout chain: Gaussian spectrograph response, channel binning, and
// Poissonian photon counting.

namespace mqpg {

struct RealSpectrum {
  FrequencyGrid grid;
  Eigen::VectorXd values;
};

struct SpectrographSpec {
  double resolution = 0.0;             // THz intensity FWHM; 0 = ideal
  std::vector<double> channel_bounds;  // d+1 ascending edges (THz)

  void validate() const;
};

// Midpoints between adjacent centers, extended by half a spacing at the ends.
std::vector<double> midpoint_bounds(const std::vector<double>& centers);

// Convolution with a unit-area Gaussian of the stated FWHM; the total
// integral is preserved and resolution 0 returns the input unchanged.
RealSpectrum apply_spectrograph(const RealSpectrum& intensity,
                                const SpectrographSpec& spec);

struct ChannelBinning {
  std::vector<double> probs;   // integral per channel interval
  double loss_fraction = 0.0;  // energy outside all bounds
};

ChannelBinning bin_channels(const RealSpectrum& intensity,
                            const SpectrographSpec& spec);

struct CountRecord {
  std::vector<std::int64_t> counts;
  std::int64_t n_pulses = 0;
  double mean_photon_number = 0.0;
  std::uint64_t seed = 0;
};

// Per-channel counts ~ Poisson(n_pulses * mean_photon_number * efficiency *
// p_c / sum p), deterministic for a fixed seed.
CountRecord sample_counts(const std::vector<double>& probs,
                          double mean_photon_number, std::int64_t n_pulses,
                          double efficiency, std::uint64_t seed);

// Stable per-task seed derivation for parallel runs.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t task_index);

}  // namespace mqpg
