#include "mqpg/tomography.hpp"

#include <cmath>
#include <stdexcept>

namespace mqpg {

namespace {

// Orthonormal Hermitian operator basis under Tr(A B): d diagonal projectors,
// then (e_ij + e_ji)/sqrt(2) and i(e_ij - e_ji)/sqrt(2) for i < j.
std::vector<Eigen::MatrixXcd> hermitian_basis(int d) {
  std::vector<Eigen::MatrixXcd> basis;
  basis.reserve(d * d);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < d; ++i) {
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(d, d);
    h(i, i) = 1.0;
    basis.push_back(std::move(h));
  }
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      Eigen::MatrixXcd hs = Eigen::MatrixXcd::Zero(d, d);
      hs(i, j) = inv_sqrt2;
      hs(j, i) = inv_sqrt2;
      basis.push_back(std::move(hs));
      Eigen::MatrixXcd ha = Eigen::MatrixXcd::Zero(d, d);
      ha(i, j) = Complex(0.0, inv_sqrt2);
      ha(j, i) = Complex(0.0, -inv_sqrt2);
      basis.push_back(std::move(ha));
    }
  }
  return basis;
}

Eigen::MatrixXcd clip_to_psd(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
      (0.5 * (m + m.adjoint())).eval());
  const Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

ProbeSet probe_set(int d) {
  const MubSet mubs = mub_bases(d);
  ProbeSet probes;
  probes.dimension = d;
  probes.coeffs.resize(d * (d + 1), d);
  probes.labels.reserve(d * (d + 1));
  int row = 0;
  for (int b = 0; b <= d; ++b) {
    for (int m = 0; m < d; ++m, ++row) {
      probes.coeffs.row(row) = mubs.bases[b].row(m);
      probes.labels.push_back(ProbeLabel{b, m});
    }
  }
  return probes;
}

TomographyResult reconstruct_povm(const Eigen::MatrixXd& probs,
                                  const ProbeSet& probes,
                                  const TomographyOptions& opts) {
  const int d = probes.dimension;
  const int n_probes = static_cast<int>(probes.coeffs.rows());
  if (probs.cols() != n_probes)
    throw std::invalid_argument("reconstruct_povm: probe count mismatch");
  if (!probs.allFinite() || probs.minCoeff() < 0.0)
    throw std::invalid_argument("reconstruct_povm: probabilities must be finite and >= 0");

  const auto basis = hermitian_basis(d);
  const int n_par = static_cast<int>(basis.size());

  // design matrix V[xi][a] = <c_xi| H_a |c_xi>
  Eigen::MatrixXd design(n_probes, n_par);
  for (int xi = 0; xi < n_probes; ++xi) {
    const Eigen::VectorXcd c = probes.coeffs.row(xi).transpose();
    for (int a = 0; a < n_par; ++a)
      design(xi, a) = std::real(c.dot(basis[a] * c));
  }

  TomographyResult result;
  result.povm.resize(probs.rows());
  result.objective_histories.resize(probs.rows());
  result.converged = true;
  result.iterations = 0;
  result.residual = 0.0;

  for (int ch = 0; ch < probs.rows(); ++ch) {
    const Eigen::VectorXd p = probs.row(ch).transpose();
    const double pmax = p.maxCoeff();
    auto& history = result.objective_histories[ch];

    if (pmax <= 0.0) {
      result.povm[ch].matrix = Eigen::MatrixXcd::Zero(d, d);
      history.push_back(0.0);
      continue;
    }
    const Eigen::VectorXd weights =
        p.cwiseMax(1e-6 * pmax).cwiseInverse();

    auto objective = [&](const Eigen::MatrixXcd& pi) {
      double f = 0.0;
      for (int xi = 0; xi < n_probes; ++xi) {
        const Eigen::VectorXcd c = probes.coeffs.row(xi).transpose();
        const double r = std::real(c.dot(pi * c)) - p[xi];
        f += weights[xi] * r * r;
      }
      return f;
    };
    auto gradient = [&](const Eigen::MatrixXcd& pi) {
      Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(d, d);
      for (int xi = 0; xi < n_probes; ++xi) {
        const Eigen::VectorXcd c = probes.coeffs.row(xi).transpose();
        const double r = std::real(c.dot(pi * c)) - p[xi];
        g += (2.0 * weights[xi] * r) * (c * c.adjoint());
      }
      return g;
    };

    // unconstrained weighted least-squares step, then PSD projection
    const Eigen::MatrixXd vw = design.transpose() * weights.asDiagonal();
    const Eigen::VectorXd x =
        (vw * design).ldlt().solve(vw * p);
    Eigen::MatrixXcd pi = Eigen::MatrixXcd::Zero(d, d);
    for (int a = 0; a < n_par; ++a) pi += x[a] * basis[a];
    pi = clip_to_psd(pi);

    double f = objective(pi);
    history.push_back(f);
    const double fscale = (weights.array() * p.array().square()).sum();

    // monotone projected-gradient refinement
    double step = 0.5 / (weights.sum() * static_cast<double>(d));
    int it = 0;
    bool converged = (f <= 1e-24 * std::max(fscale, 1e-300));
    while (!converged && it < opts.max_iter) {
      const Eigen::MatrixXcd g = gradient(pi);
      bool accepted = false;
      for (int bt = 0; bt < 60; ++bt) {
        const Eigen::MatrixXcd trial = clip_to_psd(pi - step * g);
        const double ft = objective(trial);
        if (ft < f) {
          const double drop = f - ft;
          pi = trial;
          f = ft;
          history.push_back(f);
          accepted = true;
          ++it;
          step *= 2.0;
          if (drop <= opts.tol * std::max(f, 1e-300) ||
              f <= 1e-24 * std::max(fscale, 1e-300))
            converged = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) {
        converged = true;  // projected stationary point at machine precision
        break;
      }
    }
    result.iterations = std::max(result.iterations, it);
    result.converged = result.converged && (converged || it < opts.max_iter);
    result.residual += f;
    result.povm[ch].matrix = 0.5 * (pi + pi.adjoint().eval());
  }
  return result;
}

double fidelity(const PovmElement& pi, const Eigen::VectorXcd& target) {
  const double tr = pi.matrix.real().trace();
  if (tr <= 0.0) throw std::invalid_argument("fidelity: POVM element has zero trace");
  if (std::abs(target.squaredNorm() - 1.0) > 1e-8)
    throw std::invalid_argument("fidelity: target not normalized");
  const double overlap = std::real(target.dot(pi.matrix * target));
  return std::clamp(overlap / tr, 0.0, 1.0);
}

Eigen::MatrixXd crosstalk_matrix(const Eigen::MatrixXd& probs) {
  Eigen::MatrixXd c = probs;
  for (int col = 0; col < c.cols(); ++col) {
    const double sum = c.col(col).sum();
    if (sum <= 0.0)
      throw std::invalid_argument("crosstalk_matrix: zero probability column");
    c.col(col) /= sum;
  }
  return c;
}

}  // namespace mqpg
