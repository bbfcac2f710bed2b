#pragma once

#include <string>
#include <vector>

#include "mqpg/alphabets.hpp"
#include "mqpg/spectral.hpp"

// Device core: phase-matching comb, pump compilation (standard and FFB
// layouts), two-frequency channel kernels K_c(nu_out, nu_in) =
// Phi_c(nu_out) * alpha(nu_out - nu_in), conversion amplitudes, Schmidt-mode
// analysis, and the within-model POVM of each output channel.

namespace mqpg {

enum class PmShape { Sinc, Gaussian };
enum class PumpLayout { Standard, Ffb };

struct DeviceSpec {
  int n_channels = 5;
  std::vector<double> channel_centers;  // THz, ascending, uniform spacing
  double pm_fwhm = 0.03;                // THz, intensity FWHM per peak
  PmShape pm_shape = PmShape::Sinc;
  double pump_bandwidth_limit = 4.5;  // THz the waveshaper can carve from
  double input_center = 193.0;        // THz
  double pump_center = 0.0;           // THz; 0 = derive from channels - input
  double relative_delay = 0.0;        // ps, applied as a linear pump phase

  double channel_spacing() const;
  double resolved_pump_center() const;
  // strict_spacing additionally demands spacing > 3 * pm_fwhm (normal
  // operating regime); the scalability sweep deliberately violates it.
  void validate(bool strict_spacing = true) const;
};

// Evenly spaced channels around output_center.
DeviceSpec make_device(int n_channels, double channel_spacing = 0.63,
                       double output_center = 347.0, double pm_fwhm = 0.03);

struct PumpSpectrum {
  SpectralEnvelope envelope;
  PumpLayout layout = PumpLayout::Standard;
  int bin_count = 0;
  int mub_index = -1;               // FFB only
  std::vector<int> channel_targets;  // basis-vector index sorted to channel c
};

// Dense kernel block on a window of (output grid x input grid); entries
// vanish outside the pump/phase-matching support by construction.
struct ChannelKernel {
  int channel = 0;
  FrequencyGrid out_grid, in_grid;
  int out_offset = 0, in_offset = 0;
  Eigen::MatrixXcd block;

  Complex value(int out_index, int in_index) const;
};

struct PovmElement {
  Eigen::MatrixXcd matrix;
  std::string basis_tag;

  void validate(double herm_tol = 1e-12, double psd_tol = 1e-10) const;
};

// Sum of unit-peak phase-matching peaks, one per output channel.
SpectralEnvelope phasematching_comb(const DeviceSpec& device,
                                    const FrequencyGrid& grid);

// The isolated peak of a single channel.
SpectralEnvelope pm_peak(const DeviceSpec& device, int channel,
                         const FrequencyGrid& grid);

// Standard layout: one spectral region per channel, each carrying the
// spectrally reversed conjugate of its target mode, so that the conversion
// amplitude at the channel center equals <gamma_c|xi>. basis_vectors rows are
// the target coefficients per channel.
PumpSpectrum compile_pump_standard(const Eigen::MatrixXcd& basis_vectors,
                                   const ModeBasis& fundamental,
                                   const DeviceSpec& device,
                                   const FrequencyGrid& pump_grid);

// FFB layout: 2d-1 Gaussian bins at the channel spacing. The computational
// basis (mub_index 0) uses a single central bin; quadratic basis k gives bin n
// the phase omega^(-k (n-(d-1))^2), which makes channel c project onto the
// basis-k vector (-2 k c) mod d. The Fourier basis (index d) cannot be
// realized with translation-invariant bins and is rejected.
PumpSpectrum compile_pump_ffb(int mub_index, int d, const ModeBasis& fundamental,
                              const DeviceSpec& device,
                              const FrequencyGrid& pump_grid);

// K_c[o,i] = Phi_c(nu_o) * alpha(nu_o - nu_i), with alpha interpolated
// linearly between pump grid points. window_pm_widths bounds the output
// window around the peak (sinc tails are cut there).
ChannelKernel channel_kernel(const PumpSpectrum& pump, const DeviceSpec& device,
                             int channel, const FrequencyGrid& in_grid,
                             const FrequencyGrid& out_grid,
                             double window_pm_widths = 40.0);

// A_c(nu_o) = sum_i K_c[o,i] xi(nu_i) dnu_in, on the kernel's output grid.
SpectralEnvelope convert(const SpectralEnvelope& input,
                         const ChannelKernel& kernel);

// S(nu_out) = Int alpha(nu_out - nu_in) xi(nu_in) dnu_in — the
// energy-conservation factor shared by all channels; the conversion
// amplitude of channel c is Phi_c(nu_out) * S(nu_out).
ComplexVec conversion_overlap(const SpectralEnvelope& pump,
                              const SpectralEnvelope& input,
                              const FrequencyGrid& out_grid);

// p_c = Int |A_c|^2 dnu_out (relative, unnormalized).
std::vector<double> channel_probabilities(
    const SpectralEnvelope& input, const std::vector<ChannelKernel>& kernels);

struct SchmidtResult {
  Eigen::VectorXd singular_values;   // descending
  double schmidt_number = 0.0;       // (sum s^2)^2 / sum s^4
  SpectralEnvelope dominant_input_mode;
};

SchmidtResult schmidt_analysis(const ChannelKernel& kernel);

// Gram-matrix POVM restricted to the alphabet subspace:
// pi_c[i][j] = <convert(m_i)|convert(m_j)>. All channels are divided by
// norm_scale when positive, otherwise by the largest channel trace, so the
// best-case trace is <= 1 per channel.
std::vector<PovmElement> theoretical_povm(
    const std::vector<ChannelKernel>& kernels, const ModeBasis& fundamental,
    double norm_scale = 0.0);

}  // namespace mqpg
