#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "ladder/basis.hpp"
#include "ladder/geometry.hpp"

namespace ladder {

// Sector-restricted Hamiltonian, real symmetric. Row-compressed storage;
// the diagonal entry of every row is stored explicitly even when zero.
struct SparseHamiltonian {
  Eigen::SparseMatrix<double, Eigen::RowMajor> matrix;

  Eigen::Index dimension() const { return matrix.rows(); }
};

// Matrix elements per bond (a,b) with coupling J_b and anisotropy D_b
// (D_b = delta on legs, 1 on rungs):
//   diagonal      J_b * D_b * s_a * s_b          with s = +-1/2
//   off-diagonal  J_b / 2                        between states that differ
//                                                by swapping antiparallel
//                                                spins on (a,b)
SparseHamiltonian build_hamiltonian(const LadderGeometry& geom,
                                    const CouplingParams& params,
                                    const SectorBasis& basis);

Eigen::VectorXd apply(const SparseHamiltonian& h,
                      const Eigen::Ref<const Eigen::VectorXd>& x);

}  // namespace ladder
