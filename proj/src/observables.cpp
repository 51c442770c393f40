#include "ladder/observables.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ladder {

double fidelity(const Eigen::Ref<const Eigen::VectorXd>& psi_a,
                const Eigen::Ref<const Eigen::VectorXd>& psi_b) {
  if (psi_a.size() != psi_b.size()) {
    throw std::invalid_argument("fidelity: vector lengths differ");
  }
  if (std::abs(psi_a.norm() - 1.0) > 1e-10 || std::abs(psi_b.norm() - 1.0) > 1e-10) {
    throw std::invalid_argument("fidelity: inputs must be unit vectors");
  }
  // identical states have fidelity 1 exactly; the dot product of a vector
  // with itself lands one ulp short of that
  if (psi_a.cwiseEqual(psi_b).all()) return 1.0;
  return std::abs(psi_a.dot(psi_b));
}

double fidelity_susceptibility(double f, double delta, int n_rungs) {
  if (n_rungs < 1) throw std::invalid_argument("fidelity_susceptibility: n_rungs must be >= 1");
  if (delta == 0.0) throw std::invalid_argument("fidelity_susceptibility: delta must be nonzero");
  if (f < -1e-12 || f > 1.0 + 1e-9) {
    throw std::invalid_argument("fidelity_susceptibility: fidelity outside [0,1]");
  }
  return 2.0 * (1.0 - f) / (n_rungs * delta * delta);
}

ReducedDensityMatrix reduced_density_matrix(const Eigen::Ref<const Eigen::VectorXd>& psi,
                                            const SectorBasis& basis,
                                            const std::vector<int>& subsystem_sites) {
  const int n = basis.n_sites();
  const int k = static_cast<int>(subsystem_sites.size());
  if (psi.size() != basis.dimension()) {
    throw std::invalid_argument("reduced_density_matrix: amplitude length mismatch");
  }
  if (k < 1 || k >= n) {
    throw std::invalid_argument("reduced_density_matrix: subsystem must be a proper nonempty subset");
  }
  std::uint64_t mask = 0;
  for (int s : subsystem_sites) {
    if (s < 0 || s >= n) {
      throw std::invalid_argument("reduced_density_matrix: site index out of range");
    }
    const std::uint64_t bit = 1ull << s;
    if (mask & bit) {
      throw std::invalid_argument("reduced_density_matrix: duplicate site index");
    }
    mask |= bit;
  }

  const Eigen::Index dim_a = Eigen::Index{1} << k;
  const Eigen::Index dim = basis.dimension();

  // group states by environment configuration
  std::vector<std::pair<std::uint64_t, Eigen::Index>> keyed(dim);
  for (Eigen::Index i = 0; i < dim; ++i) keyed[i] = {basis.state(i) & ~mask, i};
  std::sort(keyed.begin(), keyed.end());

  Eigen::MatrixXd rho = Eigen::MatrixXd::Zero(dim_a, dim_a);
  Eigen::VectorXd block(dim_a);
  Eigen::Index i = 0;
  while (i < dim) {
    Eigen::Index j = i;
    block.setZero();
    while (j < dim && keyed[j].first == keyed[i].first) {
      const std::uint64_t bits = basis.state(keyed[j].second);
      Eigen::Index a = 0;
      for (int t = 0; t < k; ++t) a |= ((bits >> subsystem_sites[t]) & 1) << t;
      block[a] = psi[keyed[j].second];
      ++j;
    }
    rho.selfadjointView<Eigen::Lower>().rankUpdate(block);
    i = j;
  }
  rho.triangularView<Eigen::StrictlyUpper>() = rho.transpose();
  return ReducedDensityMatrix{subsystem_sites, std::move(rho)};
}

double von_neumann_entropy(const ReducedDensityMatrix& rho) {
  const Eigen::Index d = rho.matrix.rows();
  if (d < 1 || rho.matrix.cols() != d) {
    throw std::invalid_argument("von_neumann_entropy: matrix must be square");
  }
  if (std::abs(rho.matrix.trace() - 1.0) > 1e-10) {
    throw std::invalid_argument("von_neumann_entropy: trace deviates from 1");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(rho.matrix, Eigen::EigenvaluesOnly);
  double entropy = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    const double p = es.eigenvalues()(i);
    if (p < -1e-10) {
      throw std::invalid_argument("von_neumann_entropy: matrix is not positive semidefinite");
    }
    if (p > 1e-14) entropy -= p * std::log2(p);
  }
  return entropy;
}

std::vector<std::pair<double, double>> entropy_derivative(
    const std::vector<std::pair<double, double>>& series) {
  const size_t n = series.size();
  if (n < 3) throw std::invalid_argument("entropy_derivative: need at least 3 points");
  const double h = series[1].first - series[0].first;
  if (h <= 0.0) throw std::invalid_argument("entropy_derivative: grid must be increasing");
  for (size_t i = 1; i + 1 < n; ++i) {
    const double step = series[i + 1].first - series[i].first;
    if (std::abs(step - h) > 1e-9 * std::abs(h)) {
      throw std::invalid_argument("entropy_derivative: grid spacing is not uniform");
    }
  }
  std::vector<std::pair<double, double>> out(n);
  out[0] = {series[0].first, (series[1].second - series[0].second) / h};
  for (size_t i = 1; i + 1 < n; ++i) {
    out[i] = {series[i].first, (series[i + 1].second - series[i - 1].second) / (2.0 * h)};
  }
  out[n - 1] = {series[n - 1].first,
                (series[n - 1].second - series[n - 2].second) / h};
  return out;
}

}  // namespace ladder
