#pragma once

#include <vector>

#include "mqpg/spectral.hpp"

// Encoding alphabets: d-dimensional fundamental mode bases (time bins,
// Hermite-Gauss modes, frequency bins), the full set of d+1 mutually
// unbiased bases in odd prime dimensions, and superposition synthesis.

namespace mqpg {

enum class AlphabetKind { TimeBins, HermiteGauss, FrequencyBins };

struct AlphabetSpec {
  AlphabetKind kind = AlphabetKind::FrequencyBins;
  int dimension = 3;
  double fwhm = 0.1;        // THz, or ps for TimeBins (intensity FWHM)
  double separation = 0.2;  // THz, or ps for TimeBins; unused for HermiteGauss
  double center = 193.0;    // THz
};

// Default parameter sets for d in {3,5}: bin widths and separations per
// encoding, with the wide-bin frequency alphabet used by the FFB layout as a
// separate variant (its bin spacing matches the device channel spacing).
AlphabetSpec default_alphabet(AlphabetKind kind, int d, bool ffb_variant = false,
                              double center = 193.0);

// d field-orthogonal modes; off-diagonal grid overlaps below 1e-3.
struct ModeBasis {
  AlphabetSpec spec;
  std::vector<SpectralEnvelope> modes;
};

// bases[0] is the computational basis (identity); bases[k], k = 1..d, have
// rows M[m][j] = omega^(k j^2 + m j)/sqrt(d) with omega = exp(2 pi i / d).
// bases[d] carries no quadratic phase, i.e. it is the Fourier basis.
struct MubSet {
  int dimension = 0;
  std::vector<Eigen::MatrixXcd> bases;
};

bool is_odd_prime(int d);

// Builds the fundamental basis on the grid. Bin-type bases are symmetrically
// orthogonalized so that grid inner products are exactly orthonormal; raw bin
// overlaps above 0.25 are rejected as "bins too close".
ModeBasis fundamental_basis(const AlphabetSpec& spec, const FrequencyGrid& grid);

// All d+1 MUBs for odd prime d.
MubSet mub_bases(int d);

// Indices of the d MUBs a translation-invariant (FFB) pump can sort:
// the computational basis plus the quadratic bases k = 1..d-1. The Fourier
// basis (index d) is the one basis left out.
std::vector<int> ffb_sortable_mubs(int d);

// Normalized superposition sum_j coeffs[j] * modes[j]; coeffs must satisfy
// sum |c_j|^2 = 1 within 1e-10.
SpectralEnvelope synthesize_state(const ModeBasis& basis,
                                  const Eigen::VectorXcd& coeffs);

}  // namespace mqpg
