#include "ladder/geometry.hpp"

#include <stdexcept>

namespace ladder {

LadderGeometry build_geometry(int n_rungs) {
  if (n_rungs < 1) {
    throw std::invalid_argument("build_geometry: n_rungs must be >= 1");
  }
  LadderGeometry geom;
  geom.n_rungs = n_rungs;
  geom.n_sites = 2 * n_rungs;
  geom.bonds.reserve(3 * n_rungs - 2);
  for (int leg = 0; leg < 2; ++leg) {
    for (int i = 0; i + 1 < n_rungs; ++i) {
      geom.bonds.push_back({LadderGeometry::site(leg, i),
                            LadderGeometry::site(leg, i + 1), BondKind::Leg});
    }
  }
  for (int i = 0; i < n_rungs; ++i) {
    geom.bonds.push_back(
        {LadderGeometry::site(0, i), LadderGeometry::site(1, i), BondKind::Rung});
  }
  return geom;
}

}  // namespace ladder
