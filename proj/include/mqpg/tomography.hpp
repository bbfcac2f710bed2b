#pragma once

#include <vector>

#include "mqpg/mqpg.hpp"

// Detector tomography: MUB probe states, constrained weighted least-squares
// POVM reconstruction, fidelity and cross-talk summaries.

namespace mqpg {

struct ProbeLabel {
  int basis = 0;
  int index = 0;
};

// All d(d+1) MUB eigenstates; coeffs rows are probe coefficient vectors in
// the fundamental basis, grouped basis by basis.
struct ProbeSet {
  int dimension = 0;
  std::vector<ProbeLabel> labels;
  Eigen::MatrixXcd coeffs;  // d(d+1) x d
};

ProbeSet probe_set(int d);

struct TomographyOptions {
  double tol = 1e-10;   // relative objective change
  int max_iter = 10000;
};

struct TomographyResult {
  std::vector<PovmElement> povm;
  Eigen::VectorXd fidelities;  // filled once targets are known
  double residual = 0.0;       // summed weighted objective
  int iterations = 0;
  bool converged = false;
  // objective value after every accepted solver step, one list per channel;
  // non-increasing by construction
  std::vector<std::vector<double>> objective_histories;
};

// For each channel independently minimizes
//   sum_xi |p[c,xi] - Tr(rho_xi pi_c)|^2 / max(p[c,xi], 1e-6 max_xi p[c,xi])
// over Hermitian PSD pi_c. probs is d x n_probes. Non-convergence is reported
// through converged=false, never silently.
TomographyResult reconstruct_povm(const Eigen::MatrixXd& probs,
                                  const ProbeSet& probes,
                                  const TomographyOptions& opts = {});

// F = <gamma|pi|gamma> / Tr(pi), clamped into [0,1]. Throws on zero trace.
double fidelity(const PovmElement& pi, const Eigen::VectorXcd& target);

// C[c,xi] = p[c,xi] / sum_c' p[c',xi]; every column sums to one.
Eigen::MatrixXd crosstalk_matrix(const Eigen::MatrixXd& probs);

}  // namespace mqpg
