#include "mqpg/mqpg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mqpg {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kLn2 = 0.6931471805599453;

double peak_amplitude(PmShape shape, double offset, double fwhm) {
  if (shape == PmShape::Gaussian) {
    const double x = offset / fwhm;
    return std::exp(-2.0 * kLn2 * x * x);
  }
  const double w = fwhm / kSincFwhmOverFirstZero;
  const double x = kPi * offset / w;
  return (x == 0.0) ? 1.0 : std::sin(x) / x;
}

// Half-width of the region where a peak is treated as nonzero.
double peak_window(PmShape shape, double fwhm, double window_pm_widths) {
  if (shape == PmShape::Gaussian) return std::min(window_pm_widths, 4.0) * fwhm;
  return window_pm_widths * fwhm;
}

// Width containing the central `fraction` of the envelope energy.
double energy_width(const SpectralEnvelope& e, double fraction) {
  const double total = e.amplitude.squaredNorm();
  if (total <= 0.0) return 0.0;
  const double q = 0.5 * (1.0 - fraction) * total;
  double acc = 0.0;
  int lo = 0, hi = e.grid.n_points - 1;
  for (int i = 0; i < e.grid.n_points; ++i) {
    acc += std::norm(e.amplitude[i]);
    if (acc >= q) {
      lo = i;
      break;
    }
  }
  acc = 0.0;
  for (int i = e.grid.n_points - 1; i >= 0; --i) {
    acc += std::norm(e.amplitude[i]);
    if (acc >= q) {
      hi = i;
      break;
    }
  }
  return std::max(0.0, (hi - lo) * e.grid.spacing());
}

// Support of |a| above threshold * max|a|; returns {lo, hi} grid values.
std::pair<double, double> support_extent(const SpectralEnvelope& e,
                                         double threshold) {
  const double cutoff = threshold * e.amplitude.cwiseAbs().maxCoeff();
  int lo = -1, hi = -1;
  for (int i = 0; i < e.grid.n_points; ++i) {
    if (std::abs(e.amplitude[i]) > cutoff) {
      if (lo < 0) lo = i;
      hi = i;
    }
  }
  if (lo < 0) return {e.grid.center, e.grid.center};
  return {e.grid.value(lo), e.grid.value(hi)};
}

void apply_delay(SpectralEnvelope& pump, double delay_ps) {
  if (delay_ps == 0.0) return;
  for (int i = 0; i < pump.grid.n_points; ++i)
    pump.amplitude[i] *= std::polar(1.0, 2.0 * kPi * pump.grid.value(i) * delay_ps);
}

}  // namespace

double DeviceSpec::channel_spacing() const {
  if (channel_centers.size() < 2) return 0.0;
  return channel_centers[1] - channel_centers[0];
}

double DeviceSpec::resolved_pump_center() const {
  if (pump_center != 0.0) return pump_center;
  double mean = 0.0;
  for (double c : channel_centers) mean += c;
  mean /= static_cast<double>(channel_centers.size());
  return mean - input_center;
}

void DeviceSpec::validate(bool strict_spacing) const {
  if (n_channels < 1 || channel_centers.size() != static_cast<size_t>(n_channels))
    throw std::invalid_argument("DeviceSpec: channel_centers size mismatch");
  if (pm_fwhm <= 0.0) throw std::invalid_argument("DeviceSpec: pm_fwhm must be positive");
  if (pump_bandwidth_limit <= 0.0)
    throw std::invalid_argument("DeviceSpec: pump_bandwidth_limit must be positive");
  if (n_channels >= 2) {
    const double spacing = channel_spacing();
    if (spacing <= 0.0)
      throw std::invalid_argument("DeviceSpec: channel centers must ascend");
    for (size_t c = 1; c < channel_centers.size(); ++c) {
      const double s = channel_centers[c] - channel_centers[c - 1];
      if (std::abs(s - spacing) > 1e-9 * spacing)
        throw std::invalid_argument("DeviceSpec: channel spacing not uniform");
    }
    if (strict_spacing && spacing <= 3.0 * pm_fwhm)
      throw std::invalid_argument(
          "DeviceSpec: channel spacing must exceed 3x the phase-matching width");
  }
}

DeviceSpec make_device(int n_channels, double channel_spacing,
                       double output_center, double pm_fwhm) {
  DeviceSpec d;
  d.n_channels = n_channels;
  d.pm_fwhm = pm_fwhm;
  d.channel_centers.resize(n_channels);
  for (int c = 0; c < n_channels; ++c)
    d.channel_centers[c] = output_center + (c - 0.5 * (n_channels - 1)) * channel_spacing;
  return d;
}

Complex ChannelKernel::value(int out_index, int in_index) const {
  const int o = out_index - out_offset;
  const int i = in_index - in_offset;
  if (o < 0 || o >= block.rows() || i < 0 || i >= block.cols()) return {0.0, 0.0};
  return block(o, i);
}

void PovmElement::validate(double herm_tol, double psd_tol) const {
  if ((matrix - matrix.adjoint()).norm() > herm_tol)
    throw std::runtime_error("PovmElement: not Hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(matrix);
  if (es.eigenvalues().minCoeff() < -psd_tol)
    throw std::runtime_error("PovmElement: negative eigenvalue");
  if (matrix.real().trace() > matrix.rows() + 1e-9)
    throw std::runtime_error("PovmElement: trace exceeds dimension");
}

SpectralEnvelope phasematching_comb(const DeviceSpec& device,
                                    const FrequencyGrid& grid) {
  for (double c : device.channel_centers)
    if (c - 10.0 * device.pm_fwhm < grid.min() || c + 10.0 * device.pm_fwhm > grid.max())
      throw std::invalid_argument("phasematching_comb: channels out of grid");
  ComplexVec a = ComplexVec::Zero(grid.n_points);
  for (double c : device.channel_centers)
    for (int i = 0; i < grid.n_points; ++i)
      a[i] += peak_amplitude(device.pm_shape, grid.value(i) - c, device.pm_fwhm);
  return SpectralEnvelope{grid, std::move(a)};
}

SpectralEnvelope pm_peak(const DeviceSpec& device, int channel,
                         const FrequencyGrid& grid) {
  if (channel < 0 || channel >= device.n_channels)
    throw std::invalid_argument("pm_peak: channel index out of range");
  const double c = device.channel_centers[channel];
  ComplexVec a(grid.n_points);
  for (int i = 0; i < grid.n_points; ++i)
    a[i] = peak_amplitude(device.pm_shape, grid.value(i) - c, device.pm_fwhm);
  return SpectralEnvelope{grid, std::move(a)};
}

PumpSpectrum compile_pump_standard(const Eigen::MatrixXcd& basis_vectors,
                                   const ModeBasis& fundamental,
                                   const DeviceSpec& device,
                                   const FrequencyGrid& pump_grid) {
  const int d = fundamental.spec.dimension;
  if (basis_vectors.rows() != d || basis_vectors.cols() != d)
    throw std::invalid_argument("compile_pump_standard: basis matrix must be d x d");
  if (device.n_channels < d)
    throw std::invalid_argument("compile_pump_standard: more targets than channels");

  const double per_region = device.pump_bandwidth_limit / d;
  std::vector<SpectralEnvelope> regions;
  regions.reserve(d);
  for (int c = 0; c < d; ++c) {
    const SpectralEnvelope gamma =
        synthesize_state(fundamental, basis_vectors.row(c).transpose());
    if (energy_width(gamma, 0.99) > per_region)
      throw std::invalid_argument(
          "compile_pump_standard: target mode exceeds the per-region bandwidth");
    const double nu_c = device.channel_centers[c];
    SpectralEnvelope region{pump_grid, ComplexVec::Zero(pump_grid.n_points)};
    for (int p = 0; p < pump_grid.n_points; ++p)
      region.amplitude[p] = std::conj(sample_linear(gamma, nu_c - pump_grid.value(p)));
    regions.push_back(std::move(region));
  }

  for (int c = 0; c + 1 < d; ++c) {
    const Complex ov = inner_product(regions[c], regions[c + 1]);
    const double n1 = norm(regions[c]), n2 = norm(regions[c + 1]);
    if (n1 > 0.0 && n2 > 0.0 && std::abs(ov) / (n1 * n2) > 0.15)
      throw std::invalid_argument(
          "compile_pump_standard: adjacent target modes collide in pump frequency");
  }

  PumpSpectrum pump;
  pump.envelope = SpectralEnvelope{pump_grid, ComplexVec::Zero(pump_grid.n_points)};
  for (const auto& r : regions) pump.envelope.amplitude += r.amplitude;
  apply_delay(pump.envelope, device.relative_delay);
  pump.layout = PumpLayout::Standard;
  pump.bin_count = (fundamental.spec.kind == AlphabetKind::FrequencyBins) ? d * d : d;
  pump.channel_targets.resize(d);
  for (int c = 0; c < d; ++c) pump.channel_targets[c] = c;

  const auto [lo, hi] = support_extent(pump.envelope, 1e-3);
  if (hi - lo > device.pump_bandwidth_limit)
    throw std::invalid_argument("compile_pump_standard: pump bandwidth limit exceeded");
  return pump;
}

PumpSpectrum compile_pump_ffb(int mub_index, int d, const ModeBasis& fundamental,
                              const DeviceSpec& device,
                              const FrequencyGrid& pump_grid) {
  if (fundamental.spec.kind != AlphabetKind::FrequencyBins)
    throw std::invalid_argument("compile_pump_ffb: needs a frequency-bin alphabet");
  if (fundamental.spec.dimension != d)
    throw std::invalid_argument("compile_pump_ffb: dimension mismatch");
  if (device.n_channels < d)
    throw std::invalid_argument("compile_pump_ffb: fewer channels than dimensions");
  const double spacing = device.channel_spacing();
  if (std::abs(fundamental.spec.separation - spacing) > 1e-9)
    throw std::invalid_argument(
        "compile_pump_ffb: input bin spacing must equal the channel spacing");
  if (mub_index < 0 || mub_index >= d)
    throw std::invalid_argument(
        "compile_pump_ffb: basis not FFB-sortable (only the computational and "
        "quadratic bases can be realized)");

  const double mu0 = device.resolved_pump_center();
  const double wbin = fundamental.spec.fwhm;
  PumpSpectrum pump;
  pump.envelope = SpectralEnvelope{pump_grid, ComplexVec::Zero(pump_grid.n_points)};
  auto add_bin = [&](double center, Complex phase) {
    for (int p = 0; p < pump_grid.n_points; ++p) {
      const double x = (pump_grid.value(p) - center) / wbin;
      pump.envelope.amplitude[p] += phase * std::exp(-2.0 * kLn2 * x * x);
    }
  };
  if (mub_index == 0) {
    add_bin(mu0, 1.0);
    pump.bin_count = 1;
  } else {
    for (int n = 0; n < 2 * d - 1; ++n) {
      const long long q = n - (d - 1);
      const long long e = -static_cast<long long>(mub_index) * q * q;
      const long long r = ((e % d) + d) % d;
      add_bin(mu0 + q * spacing,
              std::polar(1.0, 2.0 * kPi * static_cast<double>(r) / d));
    }
    pump.bin_count = 2 * d - 1;
  }
  apply_delay(pump.envelope, device.relative_delay);
  pump.layout = PumpLayout::Ffb;
  pump.mub_index = mub_index;
  pump.channel_targets.resize(d);
  for (int c = 0; c < d; ++c)
    pump.channel_targets[c] =
        (mub_index == 0) ? c
                         : static_cast<int>((((-2LL * mub_index * c) % d) + d) % d);

  // span counted bin-to-bin: (bins-1) * spacing plus one bin width
  const double span = (pump.bin_count - 1) * spacing + wbin;
  if (span > device.pump_bandwidth_limit)
    throw std::invalid_argument("compile_pump_ffb: pump bandwidth limit exceeded");
  return pump;
}

ChannelKernel channel_kernel(const PumpSpectrum& pump, const DeviceSpec& device,
                             int channel, const FrequencyGrid& in_grid,
                             const FrequencyGrid& out_grid,
                             double window_pm_widths) {
  if (channel < 0 || channel >= device.n_channels)
    throw std::invalid_argument("channel_kernel: channel index out of range");
  const double nu_c = device.channel_centers[channel];
  const double half_window =
      peak_window(device.pm_shape, device.pm_fwhm, window_pm_widths);
  if (nu_c < out_grid.min() || nu_c > out_grid.max())
    throw std::invalid_argument("channel_kernel: channel outside the output grid");

  const double d_out = out_grid.spacing();
  int o_lo = std::max(0, static_cast<int>(std::ceil((nu_c - half_window - out_grid.min()) / d_out)));
  int o_hi = std::min(out_grid.n_points - 1,
                      static_cast<int>(std::floor((nu_c + half_window - out_grid.min()) / d_out)));

  // input window from the pump support: nu_in = nu_out - mu
  const auto [mu_lo, mu_hi] = support_extent(pump.envelope, 1e-9);
  const double pad = 2.0 * pump.envelope.grid.spacing();
  const double in_lo_nu = out_grid.value(o_lo) - (mu_hi + pad);
  const double in_hi_nu = out_grid.value(o_hi) - (mu_lo - pad);
  const double d_in = in_grid.spacing();
  int i_lo = std::max(0, static_cast<int>(std::floor((in_lo_nu - in_grid.min()) / d_in)));
  int i_hi = std::min(in_grid.n_points - 1,
                      static_cast<int>(std::ceil((in_hi_nu - in_grid.min()) / d_in)));

  ChannelKernel kern;
  kern.channel = channel;
  kern.out_grid = out_grid;
  kern.in_grid = in_grid;
  if (o_hi < o_lo || i_hi < i_lo || pump.envelope.amplitude.isZero(0.0)) {
    kern.out_offset = 0;
    kern.in_offset = 0;
    kern.block = Eigen::MatrixXcd::Zero(0, 0);
    return kern;
  }
  kern.out_offset = o_lo;
  kern.in_offset = i_lo;
  kern.block.resize(o_hi - o_lo + 1, i_hi - i_lo + 1);
  for (int o = o_lo; o <= o_hi; ++o) {
    const double nu_o = out_grid.value(o);
    const double phi = peak_amplitude(device.pm_shape, nu_o - nu_c, device.pm_fwhm);
    for (int i = i_lo; i <= i_hi; ++i)
      kern.block(o - o_lo, i - i_lo) =
          phi * sample_linear(pump.envelope, nu_o - in_grid.value(i));
  }
  return kern;
}

SpectralEnvelope convert(const SpectralEnvelope& input,
                         const ChannelKernel& kernel) {
  if (!(input.grid == kernel.in_grid))
    throw std::invalid_argument("convert: input grid mismatch");
  SpectralEnvelope out{kernel.out_grid, ComplexVec::Zero(kernel.out_grid.n_points)};
  if (kernel.block.size() == 0) return out;
  const auto seg = input.amplitude.segment(kernel.in_offset, kernel.block.cols());
  out.amplitude.segment(kernel.out_offset, kernel.block.rows()) =
      kernel.block * seg * input.grid.spacing();
  return out;
}

ComplexVec conversion_overlap(const SpectralEnvelope& pump,
                              const SpectralEnvelope& input,
                              const FrequencyGrid& out_grid) {
  const double d_in = input.grid.spacing();
  const double d_p = pump.grid.spacing();
  const double step = d_in / d_p;
  const int np = pump.grid.n_points;
  const int ni = input.grid.n_points;
  ComplexVec out = ComplexVec::Zero(out_grid.n_points);
  for (int o = 0; o < out_grid.n_points; ++o) {
    // pump sample position for input index i: pos0 - i*step
    const double pos0 = (out_grid.value(o) - input.grid.min() - pump.grid.min()) / d_p;
    const int i_lo = std::max(0, static_cast<int>(std::ceil((pos0 - (np - 1)) / step)));
    const int i_hi = std::min(ni - 1, static_cast<int>(std::floor(pos0 / step)));
    Complex acc{0.0, 0.0};
    for (int i = i_lo; i <= i_hi; ++i) {
      const double pos = pos0 - i * step;
      int k = static_cast<int>(pos);
      if (k > np - 2) k = np - 2;
      const double f = pos - k;
      acc += input.amplitude[i] *
             (pump.amplitude[k] * (1.0 - f) + pump.amplitude[k + 1] * f);
    }
    out[o] = acc * d_in;
  }
  return out;
}

std::vector<double> channel_probabilities(
    const SpectralEnvelope& input, const std::vector<ChannelKernel>& kernels) {
  std::vector<double> probs;
  probs.reserve(kernels.size());
  for (const auto& k : kernels) {
    const SpectralEnvelope a = convert(input, k);
    probs.push_back(a.amplitude.squaredNorm() * a.grid.spacing());
  }
  return probs;
}

SchmidtResult schmidt_analysis(const ChannelKernel& kernel) {
  if (kernel.block.size() == 0 || kernel.block.norm() == 0.0)
    throw std::invalid_argument("schmidt_analysis: zero kernel");
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(
      kernel.block, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SchmidtResult res;
  res.singular_values = svd.singularValues();
  const double s2 = res.singular_values.squaredNorm();
  const double s4 = res.singular_values.array().pow(4).sum();
  res.schmidt_number = s2 * s2 / s4;

  ComplexVec v = svd.matrixV().col(0);
  int imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  v *= std::polar(1.0, -std::arg(v[imax]));  // fixed phase convention
  SpectralEnvelope mode{kernel.in_grid, ComplexVec::Zero(kernel.in_grid.n_points)};
  mode.amplitude.segment(kernel.in_offset, v.size()) = v;
  mode.amplitude /= norm(mode);
  res.dominant_input_mode = std::move(mode);
  return res;
}

std::vector<PovmElement> theoretical_povm(
    const std::vector<ChannelKernel>& kernels, const ModeBasis& fundamental,
    double norm_scale) {
  const int d = fundamental.spec.dimension;
  std::vector<PovmElement> povm;
  povm.reserve(kernels.size());
  double max_trace = 0.0;
  for (const auto& kern : kernels) {
    std::vector<SpectralEnvelope> outs;
    outs.reserve(d);
    for (int j = 0; j < d; ++j) outs.push_back(convert(fundamental.modes[j], kern));
    PovmElement el;
    el.matrix.resize(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        el.matrix(i, j) = inner_product(outs[i], outs[j]);
    el.matrix = 0.5 * (el.matrix + el.matrix.adjoint().eval());  // kill rounding skew
    max_trace = std::max(max_trace, el.matrix.real().trace());
    povm.push_back(std::move(el));
  }
  const double scale = (norm_scale > 0.0) ? norm_scale : max_trace;
  if (scale > 0.0)
    for (auto& el : povm) el.matrix /= scale;
  for (auto& el : povm) el.validate();
  return povm;
}

}  // namespace mqpg
