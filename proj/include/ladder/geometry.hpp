#pragma once

#include <vector>

namespace ladder {

enum class BondKind { Leg, Rung };

struct Bond {
  int a;  // smaller site index
  int b;
  BondKind kind;
};

// Two-leg ladder with open ends. Sites are numbered rung-major,
// site(leg,rung) = 2*rung + leg, so the two sites of a rung occupy
// adjacent bit positions in a basis word.
struct LadderGeometry {
  int n_rungs = 0;
  int n_sites = 0;
  std::vector<Bond> bonds;  // 2*(n_rungs-1) leg bonds followed by n_rungs rung bonds

  static constexpr int site(int leg, int rung) { return 2 * rung + leg; }
};

// Exchange couplings: XX+YY+delta*ZZ along each leg, isotropic
// Heisenberg exchange on every rung.
struct CouplingParams {
  double j_leg = 1.0;
  double delta = -0.5;
  double j_rung = 0.0;
};

LadderGeometry build_geometry(int n_rungs);

}  // namespace ladder
