#include "ladder/hamiltonian.hpp"

#include <stdexcept>

namespace ladder {

SparseHamiltonian build_hamiltonian(const LadderGeometry& geom,
                                    const CouplingParams& params,
                                    const SectorBasis& basis) {
  if (basis.n_sites() != geom.n_sites) {
    throw std::invalid_argument("build_hamiltonian: basis and geometry site counts differ");
  }
  const Eigen::Index dim = basis.dimension();
  Eigen::SparseMatrix<double, Eigen::RowMajor> m(dim, dim);

  // nnz per row: the diagonal plus one entry per antiparallel bond
  Eigen::VectorXi nnz(dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    const std::uint64_t bits = basis.state(k);
    int c = 1;
    for (const Bond& bond : geom.bonds) {
      if (((bits >> bond.a) & 1) != ((bits >> bond.b) & 1)) ++c;
    }
    nnz[k] = c;
  }
  m.reserve(nnz);

  for (Eigen::Index k = 0; k < dim; ++k) {
    const std::uint64_t bits = basis.state(k);
    double diag = 0.0;
    for (const Bond& bond : geom.bonds) {
      const double j = bond.kind == BondKind::Leg ? params.j_leg : params.j_rung;
      const double dz = bond.kind == BondKind::Leg ? params.delta : 1.0;
      const bool up_a = (bits >> bond.a) & 1;
      const bool up_b = (bits >> bond.b) & 1;
      diag += j * dz * (up_a ? 0.5 : -0.5) * (up_b ? 0.5 : -0.5);
      if (up_a != up_b) {
        const std::uint64_t flipped = bits ^ ((1ull << bond.a) | (1ull << bond.b));
        m.insert(k, basis.rank(flipped)) = 0.5 * j;
      }
    }
    m.insert(k, k) = diag;
  }
  m.makeCompressed();
  return SparseHamiltonian{std::move(m)};
}

Eigen::VectorXd apply(const SparseHamiltonian& h,
                      const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (x.size() != h.dimension()) {
    throw std::invalid_argument("apply: vector length does not match dimension");
  }
  return h.matrix * x;
}

}  // namespace ladder
