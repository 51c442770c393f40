#pragma once

#include <Eigen/Core>
#include <utility>
#include <vector>

#include "ladder/basis.hpp"

namespace ladder {

// |<a|b>| for unit vectors; throws on length mismatch or norms off by
// more than 1e-10.
double fidelity(const Eigen::Ref<const Eigen::VectorXd>& psi_a,
                const Eigen::Ref<const Eigen::VectorXd>& psi_b);

// Finite-difference estimator 2*(1-f)/(n_rungs*delta^2) of the average
// fidelity susceptibility.
double fidelity_susceptibility(double f, double delta, int n_rungs);

struct ReducedDensityMatrix {
  std::vector<int> subsystem_sites;  // bit t of a row/column index is the
                                     // spin on subsystem_sites[t]
  Eigen::MatrixXd matrix;            // 2^k x 2^k, symmetric, trace 1
};

// Partial trace of |psi><psi| onto the given sites, taken directly in the
// sector basis: amplitudes sharing an environment configuration are
// grouped and accumulated as rank-one updates.
ReducedDensityMatrix reduced_density_matrix(const Eigen::Ref<const Eigen::VectorXd>& psi,
                                            const SectorBasis& basis,
                                            const std::vector<int>& subsystem_sites);

// -sum_i p_i log2 p_i over the eigenvalues of rho; eigenvalues below 1e-14
// are dropped. Validates trace and positive semidefiniteness first.
double von_neumann_entropy(const ReducedDensityMatrix& rho);

// Central differences on a uniform grid, one-sided at the ends. Output
// length equals input length.
std::vector<std::pair<double, double>> entropy_derivative(
    const std::vector<std::pair<double, double>>& series);

}  // namespace ladder
