#include "mqpg/alphabets.hpp"

#include <cmath>
#include <stdexcept>

namespace mqpg {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kLn2 = 0.6931471805599453;

// Raw bin-type bases overlap slightly (Gaussian tails); beyond this the
// symmetric orthogonalization no longer yields bin-like modes.
constexpr double kMaxRawOverlap = 0.25;

Complex omega_pow(int d, long long e) {
  const long long r = ((e % d) + d) % d;
  return std::polar(1.0, 2.0 * kPi * static_cast<double>(r) / d);
}

std::vector<SpectralEnvelope> raw_modes(const AlphabetSpec& spec,
                                        const FrequencyGrid& grid) {
  const int d = spec.dimension;
  std::vector<SpectralEnvelope> modes;
  modes.reserve(d);
  switch (spec.kind) {
    case AlphabetKind::FrequencyBins: {
      for (int j = 0; j < d; ++j) {
        const double c = spec.center + (j - 0.5 * (d - 1)) * spec.separation;
        modes.push_back(gaussian_envelope(grid, c, spec.fwhm));
      }
      break;
    }
    case AlphabetKind::TimeBins: {
      // Gaussian spectrum with a linear phase per bin; intensity FWHMs of a
      // transform-limited Gaussian satisfy dt * dnu = 2 ln2 / pi.
      const double fwhm_nu = 2.0 * kLn2 / (kPi * spec.fwhm);
      const SpectralEnvelope g = gaussian_envelope(grid, spec.center, fwhm_nu);
      const double t_window = 0.5 / grid.spacing();
      for (int j = 0; j < d; ++j) {
        const double tj = (j - 0.5 * (d - 1)) * spec.separation;
        if (std::abs(tj) + 2.0 * spec.fwhm > t_window)
          throw std::invalid_argument(
              "fundamental_basis: time bin outside the grid's time window");
        SpectralEnvelope m = g;
        for (int i = 0; i < grid.n_points; ++i)
          m.amplitude[i] *= std::polar(1.0, -2.0 * kPi * grid.value(i) * tj);
        modes.push_back(std::move(m));
      }
      break;
    }
    case AlphabetKind::HermiteGauss: {
      for (int j = 0; j < d; ++j)
        modes.push_back(hg_envelope(grid, spec.center, spec.fwhm, j));
      break;
    }
  }
  return modes;
}

}  // namespace

AlphabetSpec default_alphabet(AlphabetKind kind, int d, bool ffb_variant,
                              double center) {
  if (d != 3 && d != 5)
    throw std::invalid_argument("default_alphabet: defaults exist for d in {3,5}");
  AlphabetSpec spec;
  spec.kind = kind;
  spec.dimension = d;
  spec.center = center;
  switch (kind) {
    case AlphabetKind::TimeBins:
      spec.fwhm = 1.5;  // ps
      spec.separation = (d == 3) ? 3.5 : 5.0;
      break;
    case AlphabetKind::HermiteGauss:
      spec.fwhm = (d == 3) ? 0.21 : 0.14;
      spec.separation = 0.0;
      break;
    case AlphabetKind::FrequencyBins:
      if (ffb_variant) {
        spec.fwhm = (d == 3) ? 0.3 : 0.15;
        spec.separation = (d == 3) ? 0.63 : 0.5;
      } else {
        spec.fwhm = (d == 3) ? 0.1 : 0.05;
        spec.separation = (d == 3) ? 0.2 : 0.1;
      }
      break;
  }
  return spec;
}

bool is_odd_prime(int d) {
  if (d < 3 || d % 2 == 0) return false;
  for (int k = 3; k * k <= d; k += 2)
    if (d % k == 0) return false;
  return true;
}

ModeBasis fundamental_basis(const AlphabetSpec& spec, const FrequencyGrid& grid) {
  if (spec.dimension < 2)
    throw std::invalid_argument("fundamental_basis: dimension must be >= 2");
  std::vector<SpectralEnvelope> modes = raw_modes(spec, grid);
  const int d = spec.dimension;

  Eigen::MatrixXcd gram(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      gram(i, j) = inner_product(modes[i], modes[j]);

  double max_off = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (i != j) max_off = std::max(max_off, std::abs(gram(i, j)));
  if (max_off > kMaxRawOverlap)
    throw std::invalid_argument(
        "fundamental_basis: bins too close for the chosen fwhm");

  if (max_off > 1e-10) {
    // Symmetric (Loewdin) orthogonalization: |m_i> = sum_j |raw_j> S^(-1/2)_ji
    // keeps the modes as close to the raw bins as possible while making the
    // grid Gram matrix exactly the identity.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram);
    if (es.eigenvalues().minCoeff() < 0.05)
      throw std::invalid_argument(
          "fundamental_basis: bin overlap matrix is near-singular");
    const Eigen::MatrixXcd inv_sqrt =
        es.eigenvectors() *
        es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
        es.eigenvectors().adjoint();
    std::vector<SpectralEnvelope> ortho;
    ortho.reserve(d);
    for (int i = 0; i < d; ++i) {
      SpectralEnvelope m{grid, ComplexVec::Zero(grid.n_points)};
      for (int j = 0; j < d; ++j) m.amplitude += inv_sqrt(j, i) * modes[j].amplitude;
      ortho.push_back(std::move(m));
    }
    modes = std::move(ortho);
  }
  return ModeBasis{spec, std::move(modes)};
}

MubSet mub_bases(int d) {
  if (!is_odd_prime(d))
    throw std::invalid_argument("mub_bases: d must be an odd prime");
  MubSet set;
  set.dimension = d;
  set.bases.reserve(d + 1);
  set.bases.push_back(Eigen::MatrixXcd::Identity(d, d));
  const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d));
  for (int k = 1; k <= d; ++k) {
    Eigen::MatrixXcd m(d, d);
    for (int row = 0; row < d; ++row)
      for (int j = 0; j < d; ++j)
        m(row, j) =
            inv_sqrt_d * omega_pow(d, static_cast<long long>(k) * j * j +
                                          static_cast<long long>(row) * j);
    set.bases.push_back(std::move(m));
  }
  return set;
}

std::vector<int> ffb_sortable_mubs(int d) {
  if (!is_odd_prime(d))
    throw std::invalid_argument("ffb_sortable_mubs: d must be an odd prime");
  std::vector<int> idx(d);
  for (int k = 0; k < d; ++k) idx[k] = k;
  return idx;
}

SpectralEnvelope synthesize_state(const ModeBasis& basis,
                                  const Eigen::VectorXcd& coeffs) {
  const int d = basis.spec.dimension;
  if (coeffs.size() != d)
    throw std::invalid_argument("synthesize_state: coefficient count mismatch");
  if (std::abs(coeffs.squaredNorm() - 1.0) > 1e-10)
    throw std::invalid_argument("synthesize_state: coefficients not normalized");
  SpectralEnvelope e{basis.modes[0].grid,
                     ComplexVec::Zero(basis.modes[0].grid.n_points)};
  for (int j = 0; j < d; ++j) e.amplitude += coeffs[j] * basis.modes[j].amplitude;
  e.amplitude /= norm(e);
  return e;
}

}  // namespace mqpg
