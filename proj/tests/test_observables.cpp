#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "dense_reference.hpp"
#include "ladder/eigensolver.hpp"
#include "ladder/observables.hpp"

using namespace ladder;

namespace {

GroundStateResult solve_sector(int n_rungs, const CouplingParams& params,
                               int sz_twice = 0) {
  const LadderGeometry geom = build_geometry(n_rungs);
  const SectorBasis basis = enumerate_sector(geom.n_sites, sz_twice);
  return ground_state(build_hamiltonian(geom, params, basis));
}

}  // namespace

TEST_CASE("fidelity basics") {
  Eigen::VectorXd a = Eigen::VectorXd::Unit(4, 0);
  Eigen::VectorXd b = Eigen::VectorXd::Unit(4, 2);
  CHECK(fidelity(a, a) == 1.0);
  CHECK(fidelity(a, -a) == 1.0);  // the global sign drops out
  CHECK(fidelity(a, b) == 0.0);
  CHECK_THROWS_AS(fidelity(a, Eigen::VectorXd::Unit(5, 0)), std::invalid_argument);
  CHECK_THROWS_AS(fidelity(a, 0.9 * b), std::invalid_argument);

  // exactly 1 on identical inputs even when the norm is 1 only to round-off
  std::mt19937_64 gen(23);
  std::normal_distribution<double> gauss;
  for (int t = 0; t < 10; ++t) {
    Eigen::VectorXd x(64);
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = gauss(gen);
    x.normalize();
    CHECK(fidelity(x, x) == 1.0);
    Eigen::VectorXd y = x;
    CHECK(fidelity(x, y) == 1.0);
  }
}

TEST_CASE("susceptibility estimator arithmetic") {
  CHECK(fidelity_susceptibility(1.0, 0.001, 8) == 0.0);
  CHECK(fidelity_susceptibility(0.9998, 0.001, 8) == doctest::Approx(50.0).epsilon(1e-9));
  CHECK_THROWS_AS(fidelity_susceptibility(0.5, 0.0, 8), std::invalid_argument);
  CHECK_THROWS_AS(fidelity_susceptibility(1.5, 0.001, 8), std::invalid_argument);
  CHECK_THROWS_AS(fidelity_susceptibility(0.5, 0.001, 0), std::invalid_argument);
}

TEST_CASE("the rung singlet does not move with the rung coupling") {
  const LadderGeometry geom = build_geometry(1);
  const SectorBasis basis = enumerate_sector(2, 0);
  const double delta = 0.001;
  const auto a = ground_state(build_hamiltonian(geom, {1.0, -0.5, 0.5}, basis));
  const auto b = ground_state(build_hamiltonian(geom, {1.0, -0.5, 0.5 + delta}, basis));
  const double f = fidelity(a.amplitudes, b.amplitudes);
  CHECK(f == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(fidelity_susceptibility(std::min(f, 1.0), delta, 1)) < 1e-9);
}

TEST_CASE("reduced density matrix of the singlet is maximally mixed") {
  const GroundStateResult r = solve_sector(1, {1.0, -0.5, 1.0});
  const SectorBasis basis = enumerate_sector(2, 0);
  const ReducedDensityMatrix rho = reduced_density_matrix(r.amplitudes, basis, {0});
  CHECK(rho.matrix(0, 0) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(rho.matrix(1, 1) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(std::abs(rho.matrix(0, 1)) < 1e-13);
  CHECK(von_neumann_entropy(rho) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("a product basis state reduces to a rank-1 projector") {
  const SectorBasis basis = enumerate_sector(4, 0);
  Eigen::VectorXd psi = Eigen::VectorXd::Zero(basis.dimension());
  psi[basis.rank(0b0101)] = 1.0;  // up-down-up-down
  for (const std::vector<int>& sites :
       {std::vector<int>{0}, std::vector<int>{1, 2}, std::vector<int>{0, 2, 3}}) {
    const ReducedDensityMatrix rho = reduced_density_matrix(psi, basis, sites);
    CHECK((rho.matrix * rho.matrix - rho.matrix).norm() < 1e-14);  // projector
    CHECK(rho.matrix.trace() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(von_neumann_entropy(rho) == 0.0);
  }
}

TEST_CASE("sector-aware partial trace equals the naive full-space trace") {
  const LadderGeometry geom = build_geometry(2);
  const CouplingParams params{1.0, -0.5, 0.2};
  const SectorBasis basis = enumerate_sector(4, 0);
  const GroundStateResult r = ground_state(build_hamiltonian(geom, params, basis));
  const Eigen::VectorXd full = dense_reference::embed(r.amplitudes, basis);

  const std::vector<int> central{2, 3};  // central rung of the 2-rung ladder
  const ReducedDensityMatrix rho = reduced_density_matrix(r.amplitudes, basis, central);
  const Eigen::MatrixXd oracle = dense_reference::naive_partial_trace(full, 4, central);
  CHECK((rho.matrix - oracle).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("partial-trace oracle holds across sectors and subsystems") {
  std::mt19937_64 gen(5);
  std::normal_distribution<double> gauss;
  for (int n_rungs : {2, 3}) {
    const int n = 2 * n_rungs;
    for (int sz : {0, 2}) {
      const SectorBasis basis = enumerate_sector(n, sz);
      Eigen::VectorXd psi(basis.dimension());
      for (Eigen::Index i = 0; i < psi.size(); ++i) psi[i] = gauss(gen);
      psi.normalize();
      const Eigen::VectorXd full = dense_reference::embed(psi, basis);
      for (const std::vector<int>& sites :
           {std::vector<int>{0}, std::vector<int>{n - 1}, std::vector<int>{1, 2},
            std::vector<int>{0, n - 1}, std::vector<int>{2, 1, 3}}) {
        const ReducedDensityMatrix rho = reduced_density_matrix(psi, basis, sites);
        const Eigen::MatrixXd oracle =
            dense_reference::naive_partial_trace(full, n, sites);
        CHECK((rho.matrix - oracle).cwiseAbs().maxCoeff() < 1e-12);
      }
    }
  }
}

TEST_CASE("bipartite entropies match for a pure state") {
  const GroundStateResult r = solve_sector(3, {1.0, -0.5, 0.3});
  const SectorBasis basis = enumerate_sector(6, 0);
  for (std::uint64_t subset = 1; subset < (1u << 6) - 1; ++subset) {
    std::vector<int> sites, rest;
    for (int s = 0; s < 6; ++s) {
      ((subset >> s) & 1 ? sites : rest).push_back(s);
    }
    const double ea =
        von_neumann_entropy(reduced_density_matrix(r.amplitudes, basis, sites));
    const double eb =
        von_neumann_entropy(reduced_density_matrix(r.amplitudes, basis, rest));
    CHECK(std::abs(ea - eb) < 1e-10);
    CHECK(ea >= 0.0);
    CHECK(ea <= static_cast<double>(sites.size()) + 1e-12);
  }
}

TEST_CASE("entropy of explicit spectra") {
  ReducedDensityMatrix rho;
  rho.subsystem_sites = {0};
  rho.matrix = 0.5 * Eigen::MatrixXd::Identity(2, 2);
  CHECK(von_neumann_entropy(rho) == doctest::Approx(1.0).epsilon(1e-15));
  rho.subsystem_sites = {0, 1};
  rho.matrix = 0.25 * Eigen::MatrixXd::Identity(4, 4);
  CHECK(von_neumann_entropy(rho) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("entropy rejects corrupted matrices") {
  ReducedDensityMatrix rho;
  rho.subsystem_sites = {0};
  rho.matrix = Eigen::MatrixXd::Identity(2, 2);  // trace 2
  CHECK_THROWS_AS(von_neumann_entropy(rho), std::invalid_argument);
  rho.matrix << 1.5, 0.0, 0.0, -0.5;  // trace 1 but not PSD
  CHECK_THROWS_AS(von_neumann_entropy(rho), std::invalid_argument);
}

TEST_CASE("partial trace input validation") {
  const SectorBasis basis = enumerate_sector(4, 0);
  const Eigen::VectorXd psi = Eigen::VectorXd::Unit(basis.dimension(), 0);
  CHECK_THROWS_AS(reduced_density_matrix(psi, basis, {}), std::invalid_argument);
  CHECK_THROWS_AS(reduced_density_matrix(psi, basis, {0, 1, 2, 3}), std::invalid_argument);
  CHECK_THROWS_AS(reduced_density_matrix(psi, basis, {0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(reduced_density_matrix(psi, basis, {4}), std::invalid_argument);
}

TEST_CASE("finite-difference derivative of exact polynomials") {
  std::vector<std::pair<double, double>> constant, linear, quadratic;
  const double h = 0.01;
  for (int i = 0; i < 9; ++i) {
    const double x = 0.1 + i * h;
    constant.push_back({x, 3.25});
    linear.push_back({x, 2.0 * x - 1.0});
    quadratic.push_back({x, x * x});
  }
  for (const auto& [x, d] : entropy_derivative(constant)) CHECK(d == 0.0);
  for (const auto& [x, d] : entropy_derivative(linear)) {
    CHECK(d == doctest::Approx(2.0).epsilon(1e-10));
  }
  const auto dq = entropy_derivative(quadratic);
  for (size_t i = 1; i + 1 < dq.size(); ++i) {
    CHECK(dq[i].second == doctest::Approx(2.0 * dq[i].first).epsilon(1e-10));
  }
}

TEST_CASE("derivative grid validation") {
  std::vector<std::pair<double, double>> two = {{0.0, 1.0}, {0.1, 2.0}};
  CHECK_THROWS_AS(entropy_derivative(two), std::invalid_argument);
  std::vector<std::pair<double, double>> jitter = {{0.0, 1.0}, {0.1, 2.0}, {0.25, 3.0}};
  CHECK_THROWS_AS(entropy_derivative(jitter), std::invalid_argument);
}

TEST_CASE("finite-delta susceptibility is stable in delta away from zero coupling") {
  const LadderGeometry geom = build_geometry(4);
  const SectorBasis basis = enumerate_sector(8, 0);
  for (double lambda : {0.2, -0.25}) {
    double s[2];
    int k = 0;
    for (double delta : {0.001, 0.0005}) {
      const auto a = ground_state(build_hamiltonian(geom, {1.0, -0.5, lambda}, basis));
      const auto b =
          ground_state(build_hamiltonian(geom, {1.0, -0.5, lambda + delta}, basis));
      s[k++] = fidelity_susceptibility(fidelity(a.amplitudes, b.amplitudes), delta,
                                       geom.n_rungs);
    }
    CHECK(std::abs(s[0] - s[1]) <= 0.01 * std::max(std::abs(s[0]), std::abs(s[1])));
  }
}
