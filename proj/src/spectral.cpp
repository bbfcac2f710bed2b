#include "mqpg/spectral.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <unsupported/Eigen/FFT>

namespace mqpg {

namespace {

constexpr double kLn2 = 0.6931471805599453;
constexpr double kPi = 3.141592653589793238462643383279502884;

bool is_power_of_two(int n) { return n >= 2 && (n & (n - 1)) == 0; }

void check_finite(const ComplexVec& a, const char* what) {
  if (!a.allFinite()) throw std::runtime_error(std::string(what) + ": non-finite amplitude");
}

void check_shape_args(const FrequencyGrid& grid, double center, double fwhm,
                      const char* what) {
  if (fwhm <= 0.0)
    throw std::invalid_argument(std::string(what) + ": fwhm must be positive");
  if (!grid.contains(center))
    throw std::invalid_argument(std::string(what) + ": center off grid");
  if (fwhm < 4.0 * grid.spacing())
    throw std::invalid_argument(std::string(what) +
                                ": fwhm below 4 grid spacings (undersampled)");
}

}  // namespace

FrequencyGrid make_grid(double center_thz, double span_thz, int n_points) {
  if (span_thz <= 0.0) throw std::invalid_argument("make_grid: span must be positive");
  if (!is_power_of_two(n_points))
    throw std::invalid_argument("make_grid: n_points must be a power of two >= 2");
  return FrequencyGrid{center_thz, span_thz, n_points};
}

double norm(const SpectralEnvelope& e) {
  return std::sqrt(e.amplitude.squaredNorm() * e.grid.spacing());
}

double norm(const TimeEnvelope& e) {
  return std::sqrt(e.amplitude.squaredNorm() * e.grid.spacing());
}

SpectralEnvelope gaussian_envelope(const FrequencyGrid& grid, double center,
                                   double fwhm) {
  check_shape_args(grid, center, fwhm, "gaussian_envelope");
  ComplexVec a(grid.n_points);
  for (int i = 0; i < grid.n_points; ++i) {
    const double x = (grid.value(i) - center) / fwhm;
    a[i] = std::exp(-2.0 * kLn2 * x * x);
  }
  SpectralEnvelope e{grid, std::move(a)};
  e.amplitude /= norm(e);
  return e;
}

SpectralEnvelope hg_envelope(const FrequencyGrid& grid, double center,
                             double fwhm0, int order) {
  check_shape_args(grid, center, fwhm0, "hg_envelope");
  if (order < 0) throw std::invalid_argument("hg_envelope: order must be >= 0");
  const double s = fwhm0 / (2.0 * std::sqrt(kLn2));  // HG0 intensity FWHM = fwhm0
  ComplexVec a(grid.n_points);
  for (int i = 0; i < grid.n_points; ++i) {
    const double x = (grid.value(i) - center) / s;
    double hkm1 = 0.0, hk = 1.0;  // H_0
    for (int k = 0; k < order; ++k) {
      const double hkp1 = 2.0 * x * hk - 2.0 * k * hkm1;
      hkm1 = hk;
      hk = hkp1;
    }
    a[i] = hk * std::exp(-0.5 * x * x);
  }
  // containment: compare the grid quadrature against the analytic norm
  // Int |H_n(x) e^{-x^2/2}|^2 s dx = s sqrt(pi) 2^n n!
  double analytic = s * std::sqrt(kPi);
  for (int k = 1; k <= order; ++k) analytic *= 2.0 * k;
  const double on_grid = a.squaredNorm() * grid.spacing();
  if (on_grid < 0.999 * analytic)
    throw std::invalid_argument("hg_envelope: grid too narrow for requested order");
  SpectralEnvelope e{grid, std::move(a)};
  e.amplitude /= norm(e);
  return e;
}

SpectralEnvelope sinc_peak(const FrequencyGrid& grid, double center,
                           double fwhm) {
  check_shape_args(grid, center, fwhm, "sinc_peak");
  const double w = fwhm / kSincFwhmOverFirstZero;
  ComplexVec a(grid.n_points);
  for (int i = 0; i < grid.n_points; ++i) {
    const double x = kPi * (grid.value(i) - center) / w;
    a[i] = (x == 0.0) ? 1.0 : std::sin(x) / x;
  }
  return SpectralEnvelope{grid, std::move(a)};
}

Complex inner_product(const SpectralEnvelope& a, const SpectralEnvelope& b) {
  if (!(a.grid == b.grid))
    throw std::invalid_argument("inner_product: grid mismatch");
  return a.amplitude.dot(b.amplitude) * a.grid.spacing();
}

TimeEnvelope to_time_domain(const SpectralEnvelope& e) {
  const int n = e.grid.n_points;
  if (!is_power_of_two(n))
    throw std::invalid_argument("to_time_domain: power-of-two grid required");
  check_finite(e.amplitude, "to_time_domain");
  const double dnu = e.grid.spacing();
  const double dt = 1.0 / (n * dnu);
  TimeGrid tg{0.0, (n - 1) * dt, n};
  const double nu0 = e.grid.min();
  const double t0 = tg.min();

  // E(t_k) = dnu * e^{2pi i nu0 t_k} * sum_j [a_j e^{2pi i j dnu t0}] e^{2pi i jk/n}
  std::vector<Complex> in(n), out(n);
  for (int j = 0; j < n; ++j)
    in[j] = e.amplitude[j] * std::polar(1.0, 2.0 * kPi * j * dnu * t0);
  Eigen::FFT<double> fft;
  fft.inv(out, in);  // (1/n) sum_j in_j e^{+2pi i jk/n}
  ComplexVec a(n);
  for (int k = 0; k < n; ++k)
    a[k] = dnu * n * std::polar(1.0, 2.0 * kPi * nu0 * tg.value(k)) * out[k];
  return TimeEnvelope{tg, e.grid, std::move(a)};
}

SpectralEnvelope to_frequency_domain(const TimeEnvelope& e) {
  const int n = e.grid.n_points;
  if (!is_power_of_two(n))
    throw std::invalid_argument("to_frequency_domain: power-of-two grid required");
  check_finite(e.amplitude, "to_frequency_domain");
  if (e.freq_grid.n_points != n)
    throw std::invalid_argument("to_frequency_domain: inconsistent partner grid");
  const double dt = e.grid.spacing();
  const double nu0 = e.freq_grid.min();
  const double dnu = e.freq_grid.spacing();
  const double t0 = e.grid.min();

  std::vector<Complex> in(n), out(n);
  for (int k = 0; k < n; ++k)
    in[k] = e.amplitude[k] * std::polar(1.0, -2.0 * kPi * nu0 * e.grid.value(k));
  Eigen::FFT<double> fft;
  fft.fwd(out, in);  // sum_k in_k e^{-2pi i jk/n}
  ComplexVec a(n);
  for (int j = 0; j < n; ++j)
    a[j] = dt * std::polar(1.0, -2.0 * kPi * j * dnu * t0) * out[j];
  return SpectralEnvelope{e.freq_grid, std::move(a)};
}

Complex sample_linear(const SpectralEnvelope& e, double nu) {
  const double pos = (nu - e.grid.min()) / e.grid.spacing();
  if (pos < 0.0 || pos > e.grid.n_points - 1) return {0.0, 0.0};
  const int i = std::min(static_cast<int>(pos), e.grid.n_points - 2);
  const double f = pos - i;
  return e.amplitude[i] * (1.0 - f) + e.amplitude[i + 1] * f;
}

double intensity_fwhm(const Eigen::VectorXd& intensity, double spacing) {
  int peak = 0;
  intensity.maxCoeff(&peak);
  const double half = 0.5 * intensity[peak];
  auto cross = [&](int from, int step) {
    for (int i = from; i + step >= 0 && i + step < intensity.size(); i += step) {
      const int j = i + step;
      if (intensity[j] <= half) {
        const double f = (intensity[i] - half) / (intensity[i] - intensity[j]);
        return i + step * f;
      }
    }
    throw std::runtime_error("intensity_fwhm: half maximum not reached on grid");
  };
  return (cross(peak, +1) - cross(peak, -1)) * spacing;
}

}  // namespace mqpg
