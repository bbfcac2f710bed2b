#include "mqpg/detection.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace mqpg {

namespace {

constexpr double kLn2 = 0.6931471805599453;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

void SpectrographSpec::validate() const {
  if (resolution < 0.0)
    throw std::invalid_argument("SpectrographSpec: resolution must be >= 0");
  for (size_t i = 1; i < channel_bounds.size(); ++i)
    if (channel_bounds[i] <= channel_bounds[i - 1])
      throw std::invalid_argument("SpectrographSpec: bounds must strictly increase");
}

std::vector<double> midpoint_bounds(const std::vector<double>& centers) {
  if (centers.size() < 2)
    throw std::invalid_argument("midpoint_bounds: need at least two centers");
  const double half = 0.5 * (centers[1] - centers[0]);
  std::vector<double> bounds;
  bounds.reserve(centers.size() + 1);
  bounds.push_back(centers.front() - half);
  for (size_t c = 0; c + 1 < centers.size(); ++c)
    bounds.push_back(0.5 * (centers[c] + centers[c + 1]));
  bounds.push_back(centers.back() + half);
  return bounds;
}

RealSpectrum apply_spectrograph(const RealSpectrum& intensity,
                                const SpectrographSpec& spec) {
  spec.validate();
  if (intensity.values.minCoeff() < 0.0)
    throw std::invalid_argument("apply_spectrograph: negative intensity input");
  if (spec.resolution == 0.0) return intensity;

  const double dnu = intensity.grid.spacing();
  const double sigma = spec.resolution / (2.0 * std::sqrt(2.0 * kLn2));
  const int half = static_cast<int>(std::ceil(6.0 * sigma / dnu));
  Eigen::VectorXd kernel(2 * half + 1);
  for (int k = -half; k <= half; ++k)
    kernel[k + half] = std::exp(-0.5 * (k * dnu) * (k * dnu) / (sigma * sigma));
  kernel /= kernel.sum();  // discrete unit area; integral preserved exactly

  const int n = intensity.grid.n_points;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    const double v = intensity.values[i];
    if (v == 0.0) continue;
    const int lo = std::max(0, i - half), hi = std::min(n - 1, i + half);
    for (int j = lo; j <= hi; ++j) out[j] += v * kernel[j - i + half];
  }
  out = out.cwiseMax(0.0);
  return RealSpectrum{intensity.grid, std::move(out)};
}

ChannelBinning bin_channels(const RealSpectrum& intensity,
                            const SpectrographSpec& spec) {
  spec.validate();
  if (spec.channel_bounds.size() < 2)
    throw std::invalid_argument("bin_channels: channel bounds missing");
  const size_t d = spec.channel_bounds.size() - 1;
  ChannelBinning result;
  result.probs.assign(d, 0.0);
  const double dnu = intensity.grid.spacing();
  double total = 0.0, inside = 0.0;
  for (int i = 0; i < intensity.grid.n_points; ++i) {
    const double nu = intensity.grid.value(i);
    const double e = intensity.values[i] * dnu;
    total += e;
    if (nu < spec.channel_bounds.front() || nu >= spec.channel_bounds.back())
      continue;
    const auto it = std::upper_bound(spec.channel_bounds.begin(),
                                     spec.channel_bounds.end(), nu);
    const size_t c = static_cast<size_t>(it - spec.channel_bounds.begin()) - 1;
    result.probs[c] += e;
    inside += e;
  }
  result.loss_fraction = (total > 0.0) ? 1.0 - inside / total : 0.0;
  return result;
}

CountRecord sample_counts(const std::vector<double>& probs,
                          double mean_photon_number, std::int64_t n_pulses,
                          double efficiency, std::uint64_t seed) {
  if (efficiency <= 0.0 || efficiency > 1.0)
    throw std::invalid_argument("sample_counts: efficiency must be in (0, 1]");
  if (n_pulses < 0) throw std::invalid_argument("sample_counts: negative n_pulses");
  double total = 0.0;
  for (double p : probs) {
    if (p < 0.0) throw std::invalid_argument("sample_counts: negative probability");
    total += p;
  }
  const double flux = static_cast<double>(n_pulses) * mean_photon_number * efficiency;
  if (total == 0.0 && flux > 0.0)
    throw std::invalid_argument(
        "sample_counts: all-zero probabilities with nonzero photon flux");

  CountRecord rec;
  rec.n_pulses = n_pulses;
  rec.mean_photon_number = mean_photon_number;
  rec.seed = seed;
  rec.counts.assign(probs.size(), 0);
  if (flux <= 0.0) return rec;
  std::mt19937_64 rng(splitmix64(seed));
  for (size_t c = 0; c < probs.size(); ++c) {
    const double lambda = flux * probs[c] / total;
    if (lambda <= 0.0) continue;
    std::poisson_distribution<std::int64_t> dist(lambda);
    rec.counts[c] = std::min(dist(rng), n_pulses);
  }
  return rec;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t task_index) {
  return splitmix64(seed ^ splitmix64(task_index + 0x51ed2700215fca05ULL));
}

}  // namespace mqpg
