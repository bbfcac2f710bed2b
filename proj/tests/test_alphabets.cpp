#include <doctest.h>

#include <cmath>

#include "mqpg/alphabets.hpp"
#include "oracles.hpp"

using namespace mqpg;

namespace {

void check_mub_set(const MubSet& set) {
  const int d = set.dimension;
  REQUIRE(set.bases.size() == static_cast<size_t>(d + 1));
  for (const auto& b : set.bases) {
    const Eigen::MatrixXcd gram = b * b.adjoint();
    CHECK((gram - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-12);
  }
  for (size_t b1 = 0; b1 < set.bases.size(); ++b1)
    for (size_t b2 = b1 + 1; b2 < set.bases.size(); ++b2)
      for (int u = 0; u < d; ++u)
        for (int v = 0; v < d; ++v) {
          const Complex ov = set.bases[b1].row(u).conjugate().dot(
              set.bases[b2].row(v).conjugate());
          CHECK(std::abs(std::norm(ov) - 1.0 / d) < 1e-12);
        }
}

}  // namespace

TEST_CASE("mub_bases unitarity and unbiasedness for d in {3,5,7}") {
  for (int d : {3, 5, 7}) check_mub_set(mub_bases(d));
}

TEST_CASE("mub_bases d=3 quadratic basis vector") {
  // basis k=1, row m=0: components omega^(j^2) / sqrt(3) = (1, w, w)/sqrt(3)
  const MubSet set = mub_bases(3);
  const Complex w = std::polar(1.0, 2.0 * oracle::kPi / 3.0);
  const double s = 1.0 / std::sqrt(3.0);
  Eigen::Vector3cd expected(s * Complex(1.0, 0.0), s * w, s * w);
  CHECK((set.bases[1].row(0).transpose() - expected).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("mub_bases rejects non-odd-prime dimensions") {
  CHECK_THROWS_AS(mub_bases(2), std::invalid_argument);
  CHECK_THROWS_AS(mub_bases(4), std::invalid_argument);
  CHECK_THROWS_AS(mub_bases(9), std::invalid_argument);
  CHECK_THROWS_AS(mub_bases(1), std::invalid_argument);
  CHECK(is_odd_prime(3));
  CHECK(is_odd_prime(43));
  CHECK(!is_odd_prime(45));
}

TEST_CASE("ffb_sortable_mubs leaves out exactly one basis") {
  for (int d : {3, 5}) {
    const auto idx = ffb_sortable_mubs(d);
    CHECK(idx.size() == static_cast<size_t>(d));
    // the excluded Fourier basis (index d) is unbiased to all returned ones
    const MubSet set = mub_bases(d);
    for (int k : idx)
      for (int u = 0; u < d; ++u)
        for (int v = 0; v < d; ++v) {
          const Complex ov =
              set.bases[k].row(u).conjugate().dot(set.bases[d].row(v).conjugate());
          CHECK(std::abs(std::norm(ov) - 1.0 / d) < 1e-12);
        }
  }
}

TEST_CASE("fundamental_basis frequency bins, table-1 defaults") {
  const FrequencyGrid g = make_grid(193.0, 4.0, 4096);
  for (int d : {3, 5}) {
    const AlphabetSpec spec = default_alphabet(AlphabetKind::FrequencyBins, d);
    CHECK(spec.fwhm == doctest::Approx(d == 3 ? 0.1 : 0.05));
    CHECK(spec.separation == doctest::Approx(d == 3 ? 0.2 : 0.1));
    const ModeBasis basis = fundamental_basis(spec, g);
    REQUIRE(basis.modes.size() == static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) {
      CHECK(std::abs(norm(basis.modes[i]) - 1.0) < 1e-10);
      for (int j = 0; j < d; ++j)
        if (i != j)
          CHECK(std::abs(inner_product(basis.modes[i], basis.modes[j])) < 1e-3);
    }
    // modes stay bin-like: intensity peak at the nominal bin center
    for (int j = 0; j < d; ++j) {
      int peak = 0;
      basis.modes[j].amplitude.cwiseAbs().maxCoeff(&peak);
      const double expect = 193.0 + (j - 0.5 * (d - 1)) * spec.separation;
      CHECK(std::abs(g.value(peak) - expect) < spec.fwhm / 4.0);
    }
  }
}

TEST_CASE("fundamental_basis time bins carry linear spectral phase") {
  const FrequencyGrid g = make_grid(193.0, 4.0, 4096);
  const AlphabetSpec spec = default_alphabet(AlphabetKind::TimeBins, 5);
  CHECK(spec.fwhm == doctest::Approx(1.5));
  CHECK(spec.separation == doctest::Approx(5.0));
  const ModeBasis basis = fundamental_basis(spec, g);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      if (i != j)
        CHECK(std::abs(inner_product(basis.modes[i], basis.modes[j])) < 1e-3);
  // bin j peaks at t_j in the time domain
  for (int j = 0; j < 5; ++j) {
    const TimeEnvelope t = to_time_domain(basis.modes[j]);
    int peak = 0;
    t.amplitude.cwiseAbs().maxCoeff(&peak);
    CHECK(std::abs(t.grid.value(peak) - (j - 2.0) * 5.0) < 0.5);
  }
}

TEST_CASE("fundamental_basis hg modes are analytically orthogonal") {
  const FrequencyGrid g = make_grid(193.0, 4.0, 4096);
  const ModeBasis basis =
      fundamental_basis(default_alphabet(AlphabetKind::HermiteGauss, 3), g);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j)
        CHECK(std::abs(inner_product(basis.modes[i], basis.modes[j])) < 1e-10);
}

TEST_CASE("fundamental_basis rejects bins that are too close") {
  const FrequencyGrid g = make_grid(193.0, 4.0, 4096);
  AlphabetSpec spec;
  spec.kind = AlphabetKind::FrequencyBins;
  spec.dimension = 3;
  spec.fwhm = 0.2;
  spec.separation = 0.2;  // raw overlap exp(-ln2) = 0.5 > 0.25
  CHECK_THROWS_AS(fundamental_basis(spec, g), std::invalid_argument);
}

TEST_CASE("synthesize_state basics and coefficient round trip") {
  const FrequencyGrid g = make_grid(193.0, 4.0, 4096);
  const AlphabetSpec spec = default_alphabet(AlphabetKind::FrequencyBins, 3, true);
  const ModeBasis basis = fundamental_basis(spec, g);

  Eigen::Vector3cd e0(1.0, 0.0, 0.0);
  const SpectralEnvelope m0 = synthesize_state(basis, e0);
  CHECK((m0.amplitude - basis.modes[0].amplitude).cwiseAbs().maxCoeff() < 1e-12);

  Eigen::Vector3cd eq(1.0 / std::sqrt(2.0), 0.0, 1.0 / std::sqrt(2.0));
  CHECK(std::abs(norm(synthesize_state(basis, eq)) - 1.0) < 1e-12);

  // FFB-basis vector: recover the coefficients by projection onto the bins
  const MubSet mubs = mub_bases(3);
  const Eigen::VectorXcd coeffs = mubs.bases[1].row(0).transpose();
  const SpectralEnvelope state = synthesize_state(basis, coeffs);
  for (int j = 0; j < 3; ++j)
    CHECK(std::abs(inner_product(basis.modes[j], state) - coeffs[j]) < 1e-6);

  Eigen::Vector3cd bad(1.0, 1.0, 0.0);
  CHECK_THROWS_AS(synthesize_state(basis, bad), std::invalid_argument);
}

TEST_CASE("synthesize_state is linear before renormalization") {
  const FrequencyGrid g = make_grid(193.0, 4.0, 2048);
  const ModeBasis basis =
      fundamental_basis(default_alphabet(AlphabetKind::FrequencyBins, 3, true), g);
  // linear combination of the mode envelopes directly
  Eigen::Vector3cd c1(0.6, Complex(0.0, 0.8), 0.0);
  Eigen::Vector3cd c2(0.0, 0.6, Complex(-0.8, 0.0));
  const Eigen::Vector3cd mix = (0.3 * c1 + 0.7 * c2).normalized();
  const SpectralEnvelope direct = synthesize_state(basis, mix);
  ComplexVec manual = ComplexVec::Zero(g.n_points);
  for (int j = 0; j < 3; ++j) manual += mix[j] * basis.modes[j].amplitude;
  manual /= std::sqrt(manual.squaredNorm() * g.spacing());
  CHECK((direct.amplitude - manual).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("probe-set sizing per dimension") {
  CHECK(mub_bases(3).bases.size() * 3 == 12);  // d(d+1) probe states
  CHECK(mub_bases(5).bases.size() * 5 == 30);
}
