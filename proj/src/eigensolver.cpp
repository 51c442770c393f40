#include "ladder/eigensolver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace ladder {

namespace {

Eigen::VectorXd seeded_unit_vector(Eigen::Index dim, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v[i] = gauss(gen);
  const double n = v.norm();
  if (n == 0.0) {
    v.setZero();
    v[0] = 1.0;
    return v;
  }
  return v / n;
}

void fix_global_sign(Eigen::VectorXd& v) {
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  if (v[imax] < 0.0) v = -v;
}

// max absolute row sum; cheap operator-norm bound for scale-aware thresholds
double operator_scale(const SparseHamiltonian& h) {
  double s = 0.0;
  for (Eigen::Index r = 0; r < h.matrix.outerSize(); ++r) {
    double row = 0.0;
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(h.matrix, r);
         it; ++it) {
      row += std::abs(it.value());
    }
    s = std::max(s, row);
  }
  return s;
}

// lowest eigenpair of the tridiagonal T(alpha, beta), the second value, and
// the trailing component of the second eigenvector (its residual factor)
void solve_tridiag(const std::vector<double>& alpha, const std::vector<double>& beta,
                   double& theta0, Eigen::VectorXd& y0, double& theta1,
                   double& last1) {
  const Eigen::Index m = static_cast<Eigen::Index>(alpha.size());
  if (m == 1) {
    theta0 = alpha[0];
    theta1 = alpha[0];
    last1 = 1.0;
    y0 = Eigen::VectorXd::Ones(1);
    return;
  }
  Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(alpha.data(), m);
  Eigen::VectorXd sub = Eigen::Map<const Eigen::VectorXd>(beta.data(), m - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  theta0 = es.eigenvalues()(0);
  theta1 = es.eigenvalues()(1);
  last1 = es.eigenvectors()(m - 1, 1);
  y0 = es.eigenvectors().col(0);
}

Eigen::VectorXd combine(const std::vector<Eigen::VectorXd>& basis,
                        const Eigen::VectorXd& coeffs) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(basis.front().size());
  for (size_t i = 0; i < basis.size(); ++i) x += coeffs[static_cast<Eigen::Index>(i)] * basis[i];
  return x;
}

// seeded vector orthonormalized against the current Krylov basis; used to
// continue past an invariant subspace
Eigen::VectorXd orthonormal_injection(Eigen::Index dim,
                                      const std::vector<Eigen::VectorXd>& basis,
                                      std::uint64_t seed, std::uint64_t& counter) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    Eigen::VectorXd w = seeded_unit_vector(dim, seed ^ (0x9e3779b97f4a7c15ull * ++counter));
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& u : basis) w -= u.dot(w) * u;
    }
    const double n = w.norm();
    if (n > 1e-8) return w / n;
  }
  throw std::runtime_error("lanczos: failed to extend past invariant subspace");
}

GroundStateResult finalize(const SparseHamiltonian& h, double energy,
                           Eigen::VectorXd x, double gap, int iterations,
                           const SolverOptions& opts) {
  GroundStateResult r;
  x.normalize();
  fix_global_sign(x);
  r.residual = (h.matrix * x - energy * x).norm();
  r.energy = energy;
  r.amplitudes = std::move(x);
  r.gap = std::max(gap, 0.0);
  r.iterations = iterations;
  r.converged = r.residual <= opts.tolerance;
  r.gap_reliable = iterations >= 10;
  r.degenerate = h.dimension() > 1 && r.gap < kDegenerateGap;
  return r;
}

GroundStateResult solve_dense(const SparseHamiltonian& h, const SolverOptions& opts) {
  const Eigen::Index dim = h.dimension();
  Eigen::MatrixXd dense(h.matrix);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense);
  GroundStateResult r;
  r.energy = es.eigenvalues()(0);
  r.amplitudes = es.eigenvectors().col(0);
  fix_global_sign(r.amplitudes);
  r.gap = dim > 1 ? es.eigenvalues()(1) - es.eigenvalues()(0) : 0.0;
  r.iterations = 0;
  r.residual = (dense * r.amplitudes - r.energy * r.amplitudes).norm();
  r.converged =
      r.residual <= std::max(opts.tolerance, 64.0 * Eigen::NumTraits<double>::epsilon() *
                                                 (operator_scale(h) + 1.0));
  r.gap_reliable = true;  // exact spectrum, not a Ritz estimate
  r.degenerate = dim > 1 && r.gap < kDegenerateGap;
  return r;
}

GroundStateResult solve_lanczos(const SparseHamiltonian& h, Eigen::VectorXd v,
                                const SolverOptions& opts) {
  const Eigen::Index dim = h.dimension();
  const double scale = operator_scale(h) + 1.0;
  const double breakdown_tol = 1e-14 * scale;
  const double drop_tol = std::max(10.0 * opts.tolerance, 1e-13 * scale);
  // the gap column only needs a loose second Ritz pair
  const double gap_res_tol = 1e-6 * scale;
  const int cap =
      static_cast<int>(std::min<Eigen::Index>(std::max(opts.krylov_cap, 2), dim));
  // Small spaces are tridiagonalized completely before any Ritz pair is
  // trusted: a converged interior pair can otherwise mask the true minimum
  // when the start vector has almost no ground-state weight.
  const bool exhaust = dim <= cap;
  const int confirm_window = 16;

  int matvecs = 0;
  std::uint64_t inject_counter = 0;

  while (true) {
    std::vector<Eigen::VectorXd> basis;
    basis.push_back(v);
    std::vector<double> alpha, beta;

    bool have_candidate = false;
    GroundStateResult candidate;
    int confirm_left = -1;

    while (static_cast<int>(alpha.size()) < cap && matvecs < opts.max_iterations) {
      const Eigen::VectorXd& vj = basis.back();
      Eigen::VectorXd w = h.matrix * vj;
      ++matvecs;
      if (!beta.empty()) w -= beta.back() * basis[basis.size() - 2];
      const double a = vj.dot(w);
      alpha.push_back(a);
      w -= a * vj;
      // full reorthogonalization; repeat once more when cancellation was heavy
      const double pre = w.norm();
      for (const auto& u : basis) w -= u.dot(w) * u;
      if (w.norm() < 0.5 * pre) {
        for (const auto& u : basis) w -= u.dot(w) * u;
      }
      const double b = w.norm();
      const int m = static_cast<int>(alpha.size());

      if (exhaust) {
        if (m >= dim || matvecs >= opts.max_iterations) break;
        if (b <= breakdown_tol) {
          basis.push_back(orthonormal_injection(dim, basis, opts.seed, inject_counter));
          beta.push_back(0.0);
        } else {
          basis.push_back(w / b);
          beta.push_back(b);
        }
        continue;
      }

      double theta0 = 0.0, theta1 = 0.0, last1 = 0.0;
      Eigen::VectorXd y0;
      solve_tridiag(alpha, beta, theta0, y0, theta1, last1);
      const double res_est = b * std::abs(y0[m - 1]);
      const bool breakdown = b <= breakdown_tol;

      if (have_candidate && theta0 < candidate.energy - drop_tol) {
        have_candidate = false;  // a lower state surfaced during confirmation
        confirm_left = -1;
      }
      if (!have_candidate && (res_est <= opts.tolerance || breakdown)) {
        GroundStateResult trial =
            finalize(h, theta0, combine(basis, y0), theta1 - theta0, matvecs, opts);
        ++matvecs;  // the residual verification applies H once
        trial.iterations = matvecs;
        if (trial.converged) {
          candidate = std::move(trial);
          have_candidate = true;
          confirm_left = confirm_window;
        }
      }
      if (have_candidate) {
        --confirm_left;
        const bool gap_settled =
            (m >= 2 && b * std::abs(last1) <= gap_res_tol) || m >= dim;
        if (breakdown || matvecs >= opts.max_iterations ||
            (confirm_left <= 0 && gap_settled)) {
          candidate.gap = std::max(theta1 - theta0, 0.0);
          candidate.gap_reliable = matvecs >= 10 && m >= 2;
          candidate.degenerate = candidate.gap < kDegenerateGap;
          candidate.iterations = matvecs;
          return candidate;
        }
      }

      if (m >= dim) break;
      if (b <= breakdown_tol) {
        basis.push_back(orthonormal_injection(dim, basis, opts.seed, inject_counter));
        beta.push_back(0.0);
      } else {
        basis.push_back(w / b);
        beta.push_back(b);
      }
    }

    // T is complete (small space), the Krylov cap was hit, or the budget ran out
    double theta0 = 0.0, theta1 = 0.0;
    Eigen::VectorXd y0;
    solve_tridiag(alpha, beta, theta0, y0, theta1);
    if (exhaust || matvecs >= opts.max_iterations) {
      GroundStateResult r =
          finalize(h, theta0, combine(basis, y0), theta1 - theta0, matvecs, opts);
      r.gap_reliable = (exhaust || matvecs >= 10) && alpha.size() >= 2;
      if (have_candidate && candidate.residual < r.residual) {
        candidate.iterations = matvecs;
        return candidate;
      }
      return r;
    }
    // restart from the best Ritz vector
    v = combine(basis, y0);
    v.normalize();
  }
}

GroundStateResult solve(const SparseHamiltonian& h, Eigen::VectorXd start,
                        const SolverOptions& opts) {
  const Eigen::Index dim = h.dimension();
  if (dim < 1) throw std::invalid_argument("ground_state: dimension must be >= 1");
  if (opts.tolerance <= 0.0) throw std::invalid_argument("ground_state: tolerance must be > 0");
  if (opts.dense_threshold < 1) {
    throw std::invalid_argument("ground_state: dense_threshold must be >= 1");
  }
  if (dim == 1) {
    GroundStateResult r;
    r.energy = h.matrix.coeff(0, 0);
    r.amplitudes = Eigen::VectorXd::Ones(1);
    r.converged = true;
    r.gap_reliable = false;
    return r;
  }
  if (dim <= opts.dense_threshold) return solve_dense(h, opts);
  return solve_lanczos(h, std::move(start), opts);
}

}  // namespace

GroundStateResult ground_state(const SparseHamiltonian& h, const SolverOptions& opts) {
  const Eigen::Index dim = h.dimension();
  if (dim < 1) throw std::invalid_argument("ground_state: dimension must be >= 1");
  return solve(h, seeded_unit_vector(dim, opts.seed), opts);
}

GroundStateResult ground_state_warm(const SparseHamiltonian& h,
                                    const Eigen::VectorXd& start,
                                    const SolverOptions& opts) {
  if (start.size() != h.dimension()) {
    throw std::invalid_argument("ground_state_warm: start vector length mismatch");
  }
  const double n = start.norm();
  if (n == 0.0 || !std::isfinite(n)) {
    throw std::invalid_argument("ground_state_warm: start vector must have nonzero norm");
  }
  return solve(h, start / n, opts);
}

std::vector<SectorEnergy> scan_sectors(const LadderGeometry& geom,
                                       const CouplingParams& params,
                                       const SolverOptions& opts) {
  std::vector<SectorEnergy> out;
  for (int sz = -geom.n_sites; sz <= geom.n_sites; sz += 2) {
    const SectorBasis basis = enumerate_sector(geom.n_sites, sz);
    const SparseHamiltonian h = build_hamiltonian(geom, params, basis);
    out.push_back({sz, ground_state(h, opts).energy});
  }
  return out;
}

}  // namespace ladder
