#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "ladder/geometry.hpp"
#include "ladder/hamiltonian.hpp"

namespace ladder {

struct SolverOptions {
  double tolerance = 1e-12;             // on the residual norm |H v - E v|
  int max_iterations = 1000;            // total applications of H
  Eigen::Index dense_threshold = 4096;  // at or below: dense full diagonalization
  std::uint64_t seed = 12345;           // deterministic start vector
  int krylov_cap = 200;                 // Krylov vectors kept before a restart
};

struct GroundStateResult {
  double energy = 0.0;
  Eigen::VectorXd amplitudes;  // unit norm, largest-|entry| made positive
  double gap = 0.0;            // E1 - E0 estimate, from the second Ritz value
  int iterations = 0;          // applications of H (0 on the dense path)
  double residual = 0.0;       // |H v - E v| of the returned pair
  bool converged = false;
  bool gap_reliable = false;
  bool degenerate = false;     // gap < 1e-8
};

inline constexpr double kDegenerateGap = 1e-8;

// Lowest eigenpair of h. Dimensions at or below opts.dense_threshold are
// solved densely; larger ones by Lanczos with full reorthogonalization,
// started from a seeded pseudo-random unit vector. Deterministic given
// (h, opts). Non-convergence is reported through the converged flag,
// not an exception.
GroundStateResult ground_state(const SparseHamiltonian& h,
                               const SolverOptions& opts = {});

// Same contract with a caller-supplied start vector (the dense path
// ignores it). Rejects zero or wrongly sized starts.
GroundStateResult ground_state_warm(const SparseHamiltonian& h,
                                    const Eigen::VectorXd& start,
                                    const SolverOptions& opts = {});

struct SectorEnergy {
  int sz_twice;
  double energy;
};

// Validation scan across every total-Sz sector at fixed couplings; used to
// confirm the global ground state sits in the Sz=0 sector before a sweep.
std::vector<SectorEnergy> scan_sectors(const LadderGeometry& geom,
                                       const CouplingParams& params,
                                       const SolverOptions& opts = {});

}  // namespace ladder
