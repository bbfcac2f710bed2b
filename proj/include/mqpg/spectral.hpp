#pragma once

#include <complex>
#include <Eigen/Dense>

// Spectral toolkit: uniform frequency/time grids, complex envelopes, shape
// generators and norm-preserving transforms. Frequencies are in THz, times in
// ps throughout (THz * ps = 1, so phases are unit-free).
//
// All FWHM parameters refer to the intensity (|a|^2) profile.

namespace mqpg {

using Complex = std::complex<double>;
using ComplexVec = Eigen::VectorXcd;

// Uniform grid over [center - span/2, center + span/2], both endpoints
// included, so spacing = span / (n_points - 1).
struct FrequencyGrid {
  double center = 0.0;  // THz
  double span = 0.0;    // THz
  int n_points = 0;

  double spacing() const { return span / (n_points - 1); }
  double min() const { return center - 0.5 * span; }
  double max() const { return center + 0.5 * span; }
  double value(int i) const { return min() + i * spacing(); }
  bool contains(double nu) const { return nu >= min() && nu <= max(); }
  bool operator==(const FrequencyGrid&) const = default;
};

struct TimeGrid {
  double center = 0.0;  // ps
  double span = 0.0;    // ps
  int n_points = 0;

  double spacing() const { return span / (n_points - 1); }
  double min() const { return center - 0.5 * span; }
  double max() const { return center + 0.5 * span; }
  double value(int i) const { return min() + i * spacing(); }
  bool operator==(const TimeGrid&) const = default;
};

// Throws std::invalid_argument unless n_points is a power of two >= 2 and
// span > 0.
FrequencyGrid make_grid(double center_thz, double span_thz, int n_points);

struct SpectralEnvelope {
  FrequencyGrid grid;
  ComplexVec amplitude;
};

// Time-domain partner of a SpectralEnvelope. Keeps the originating frequency
// grid so a round trip reproduces it exactly.
struct TimeEnvelope {
  TimeGrid grid;
  FrequencyGrid freq_grid;
  ComplexVec amplitude;
};

// L2 norms with rectangle-rule quadrature: sqrt(sum |a_i|^2 * spacing).
double norm(const SpectralEnvelope& e);
double norm(const TimeEnvelope& e);

// Normalized Gaussian amplitude with intensity FWHM `fwhm` centered at
// `center`. Rejects centers off the grid and fwhm < 4 grid spacings.
SpectralEnvelope gaussian_envelope(const FrequencyGrid& grid, double center,
                                   double fwhm);

// Normalized Hermite-Gauss mode H_n(x) exp(-x^2/2); fwhm0 is the intensity
// FWHM of the order-0 mode. At least 99.9% of the mode energy must fall
// inside the grid.
SpectralEnvelope hg_envelope(const FrequencyGrid& grid, double center,
                             double fwhm0, int order);

// Unnormalized sinc(pi (nu-center)/w) with intensity FWHM `fwhm` and peak
// value 1 at the center; the first zero sits at |nu - center| = w.
SpectralEnvelope sinc_peak(const FrequencyGrid& grid, double center,
                           double fwhm);

// fwhm / w for sinc^2, i.e. 2*u/pi with sinc(u)^2 = 1/2.
inline constexpr double kSincFwhmOverFirstZero = 0.8858929413789047;

// <a|b> = sum conj(a_i) b_i * spacing. Grids must be identical.
Complex inner_product(const SpectralEnvelope& a, const SpectralEnvelope& b);

// Unitary transforms with the convention E(t) = Int E(nu) e^{+2pi i nu t} dnu,
// so a spectral phase e^{-2pi i nu t0} delays the pulse by t0. Norms are
// preserved; a round trip reproduces the input to machine precision.
TimeEnvelope to_time_domain(const SpectralEnvelope& e);
SpectralEnvelope to_frequency_domain(const TimeEnvelope& e);

// Linear interpolation of the envelope at an arbitrary frequency; zero
// outside the grid.
Complex sample_linear(const SpectralEnvelope& e, double nu);

// Intensity FWHM of |a|^2 by linear interpolation around the half maximum.
// Used by width-oriented tests and validation, not by the physics paths.
double intensity_fwhm(const Eigen::VectorXd& intensity, double spacing);

}  // namespace mqpg
