#include "ladder/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "ladder/hamiltonian.hpp"
#include "ladder/observables.hpp"

namespace ladder {

namespace {

// chunk width is a fixed constant, not derived from the worker count, so
// warm-start chaining gives byte-identical series for any --workers value
constexpr int kChunkSize = 16;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> make_grid(const SweepConfig& c) {
  const auto n = static_cast<long long>(
      std::floor((c.j_rung_max - c.j_rung_min) / c.j_rung_step + 1e-9)) + 1;
  std::vector<double> grid(static_cast<size_t>(n));
  for (long long i = 0; i < n; ++i) {
    grid[static_cast<size_t>(i)] = c.j_rung_min + static_cast<double>(i) * c.j_rung_step;
  }
  return grid;
}

void validate(const SweepConfig& c) {
  if (c.n_rungs < 1) throw ConfigError("n_rungs must be >= 1");
  if (!std::isfinite(c.j_leg) || !std::isfinite(c.delta)) {
    throw ConfigError("couplings must be finite");
  }
  if (!(c.j_rung_min < c.j_rung_max)) throw ConfigError("j_rung_min must be < j_rung_max");
  if (!(c.j_rung_step > 0.0)) throw ConfigError("j_rung_step must be > 0");
  if (!(c.fid_delta > 0.0)) throw ConfigError("fid_delta must be > 0");
  if (!(c.fid_delta < c.j_rung_step)) throw ConfigError("fid_delta must be < j_rung_step");
  if (std::abs(c.sz_twice) > 2 * c.n_rungs || (2 * c.n_rungs + c.sz_twice) % 2 != 0) {
    throw ConfigError("sz_twice outside the valid sector range");
  }
  if (c.workers < 0) throw ConfigError("workers must be >= 0");
  if (c.solver.tolerance <= 0.0) throw ConfigError("solver tolerance must be > 0");
  if (c.solver.dense_threshold < 1) throw ConfigError("dense_threshold must be >= 1");
}

}  // namespace

std::vector<int> resolve_subsystem_sites(const std::string& spec, int n_rungs) {
  const int c = n_rungs / 2;
  if (spec == "central_rung") {
    return {LadderGeometry::site(0, c), LadderGeometry::site(1, c)};
  }
  if (spec == "diag_pair") {
    if (c + 1 >= n_rungs) {
      throw ConfigError("diag_pair needs a rung to the right of the central one");
    }
    return {LadderGeometry::site(0, c), LadderGeometry::site(1, c + 1)};
  }
  if (spec == "diag_pair_left") {
    if (c < 1) throw ConfigError("diag_pair_left needs a rung left of the central one");
    return {LadderGeometry::site(0, c), LadderGeometry::site(1, c - 1)};
  }
  std::vector<int> sites;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      size_t pos = 0;
      const int site = std::stoi(tok, &pos);
      if (pos != tok.size()) throw std::invalid_argument(tok);
      sites.push_back(site);
    } catch (const std::exception&) {
      throw ConfigError("bad site list '" + spec + "'");
    }
  }
  if (sites.empty()) throw ConfigError("empty subsystem spec");
  for (int s : sites) {
    if (s < 0 || s >= 2 * n_rungs) {
      throw ConfigError("subsystem site " + std::to_string(s) + " out of range");
    }
  }
  auto sorted = sites;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ConfigError("duplicate site in subsystem spec '" + spec + "'");
  }
  return sites;
}

int SweepSeries::column_of(const std::string& subsystem_name) const {
  for (size_t i = 0; i < subsystem_names.size(); ++i) {
    if (subsystem_names[i] == subsystem_name) return static_cast<int>(i);
  }
  throw std::out_of_range("no subsystem named '" + subsystem_name + "'");
}

SweepSeries run_sweep(const SweepConfig& config) {
  validate(config);

  std::vector<std::pair<std::string, std::string>> named = config.subsystems;
  if (named.empty()) {
    // a single rung has no proper central-rung subsystem
    if (config.n_rungs >= 2) named.emplace_back("central_rung", "central_rung");
    if (config.n_rungs >= 3) named.emplace_back("diag_pair", "diag_pair");
  }
  std::vector<SubsystemSpec> subsystems;
  for (const auto& [name, spec] : named) {
    subsystems.push_back({name, resolve_subsystem_sites(spec, config.n_rungs)});
  }

  const LadderGeometry geom = build_geometry(config.n_rungs);
  const SectorBasis basis = enumerate_sector(geom.n_sites, config.sz_twice);
  const std::vector<double> grid = make_grid(config);
  const size_t n_points = grid.size();
  const size_t n_chunks = (n_points + kChunkSize - 1) / kChunkSize;

  SweepSeries series;
  for (const auto& s : subsystems) series.subsystem_names.push_back(s.name);
  series.rows.resize(n_points);

  std::atomic<size_t> next_chunk{0};
  std::atomic<bool> abort{false};
  std::mutex fail_mutex;
  size_t fail_index = n_points;
  std::exception_ptr fail_error;

  auto record_failure = [&](size_t index, std::exception_ptr e) {
    std::lock_guard<std::mutex> lock(fail_mutex);
    if (index < fail_index) {
      fail_index = index;
      fail_error = e;
    }
    abort.store(true);
  };

  auto worker = [&]() {
    while (!abort.load()) {
      const size_t chunk = next_chunk.fetch_add(1);
      if (chunk >= n_chunks) return;
      const size_t begin = chunk * kChunkSize;
      const size_t end = std::min(begin + kChunkSize, n_points);
      Eigen::VectorXd prev;
      for (size_t i = begin; i < end && !abort.load(); ++i) {
        try {
          CouplingParams params{config.j_leg, config.delta, grid[i]};
          const SparseHamiltonian h_here = build_hamiltonian(geom, params, basis);
          const GroundStateResult here =
              prev.size() > 0 ? ground_state_warm(h_here, prev, config.solver)
                              : ground_state(h_here, config.solver);
          if (!here.converged) {
            throw SolverError("ground state did not converge at j_rung=" +
                              fmt17(grid[i]) + " (residual " + fmt17(here.residual) +
                              " after " + std::to_string(here.iterations) +
                              " iterations)");
          }
          params.j_rung = grid[i] + config.fid_delta;
          const SparseHamiltonian h_shifted = build_hamiltonian(geom, params, basis);
          const GroundStateResult shifted =
              ground_state_warm(h_shifted, here.amplitudes, config.solver);
          if (!shifted.converged) {
            throw SolverError("ground state did not converge at j_rung=" +
                              fmt17(params.j_rung) + " (residual " +
                              fmt17(shifted.residual) + " after " +
                              std::to_string(shifted.iterations) + " iterations)");
          }

          SweepRow& row = series.rows[i];
          row.j_rung = grid[i];
          row.energy = here.energy;
          row.gap = here.gap;
          row.fidelity = fidelity(here.amplitudes, shifted.amplitudes);
          row.susceptibility =
              fidelity_susceptibility(row.fidelity, config.fid_delta, config.n_rungs);
          row.degenerate = here.degenerate || shifted.degenerate;
          row.entropies.resize(subsystems.size());
          for (size_t s = 0; s < subsystems.size(); ++s) {
            row.entropies[s] = von_neumann_entropy(
                reduced_density_matrix(here.amplitudes, basis, subsystems[s].sites));
          }
          prev = here.amplitudes;
        } catch (...) {
          record_failure(i, std::current_exception());
          return;
        }
      }
    }
  };

  size_t n_workers = config.workers > 0
                         ? static_cast<size_t>(config.workers)
                         : std::max<size_t>(1, std::thread::hardware_concurrency());
  n_workers = std::min(n_workers, n_chunks);
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (size_t t = 0; t < n_workers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (fail_error) std::rethrow_exception(fail_error);

  // derivative columns from the finished entropy columns
  for (size_t s = 0; s < subsystems.size(); ++s) {
    if (n_points >= 3) {
      std::vector<std::pair<double, double>> col(n_points);
      for (size_t i = 0; i < n_points; ++i) {
        col[i] = {series.rows[i].j_rung, series.rows[i].entropies[s]};
      }
      const auto deriv = entropy_derivative(col);
      for (size_t i = 0; i < n_points; ++i) {
        series.rows[i].entropy_derivatives.resize(subsystems.size());
        series.rows[i].entropy_derivatives[s] = deriv[i].second;
      }
    } else {
      const double slope =
          n_points == 2 ? (series.rows[1].entropies[s] - series.rows[0].entropies[s]) /
                              (series.rows[1].j_rung - series.rows[0].j_rung)
                        : 0.0;
      for (size_t i = 0; i < n_points; ++i) {
        series.rows[i].entropy_derivatives.resize(subsystems.size());
        series.rows[i].entropy_derivatives[s] = slope;
      }
    }
  }
  return series;
}

namespace {

// strict interior local maxima; a plateau reports its first index
std::vector<size_t> local_maxima(const std::vector<double>& v) {
  std::vector<size_t> out;
  const size_t n = v.size();
  size_t i = 1;
  while (i + 1 < n) {
    if (v[i] > v[i - 1]) {
      size_t j = i;
      while (j + 1 < n && v[j + 1] == v[i]) ++j;
      if (j + 1 < n && v[j + 1] < v[i]) out.push_back(i);
      i = j + 1;
    } else {
      ++i;
    }
  }
  return out;
}

std::vector<size_t> local_minima(std::vector<double> v) {
  for (double& x : v) x = -x;
  return local_maxima(v);
}

}  // namespace

const char* to_string(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::SusceptibilityPeak: return "susceptibility_peak";
    case FeatureKind::FidelityValley: return "fidelity_valley";
    case FeatureKind::EntropyPeak: return "entropy_peak";
    case FeatureKind::EntropyValley: return "entropy_valley";
    case FeatureKind::EntropyDerivativePeak: return "entropy_derivative_peak";
  }
  return "unknown";
}

CriticalReport detect_critical_points(const SweepSeries& series) {
  const size_t n = series.rows.size();
  if (n < 5) throw std::invalid_argument("detect_critical_points: need at least 5 rows");

  CriticalReport report;
  auto emit = [&](FeatureKind kind, const std::string& subsystem,
                  const std::vector<double>& column, bool maxima) {
    for (size_t i : maxima ? local_maxima(column) : local_minima(column)) {
      report.push_back({kind, subsystem, series.rows[i].j_rung, column[i]});
    }
  };
  auto column = [&](auto&& get) {
    std::vector<double> col(n);
    for (size_t i = 0; i < n; ++i) col[i] = get(series.rows[i]);
    return col;
  };

  emit(FeatureKind::SusceptibilityPeak, "",
       column([](const SweepRow& r) { return r.susceptibility; }), true);
  emit(FeatureKind::FidelityValley, "",
       column([](const SweepRow& r) { return r.fidelity; }), false);
  for (size_t s = 0; s < series.subsystem_names.size(); ++s) {
    const auto ent = column([s](const SweepRow& r) { return r.entropies[s]; });
    const auto der = column([s](const SweepRow& r) { return r.entropy_derivatives[s]; });
    emit(FeatureKind::EntropyPeak, series.subsystem_names[s], ent, true);
    emit(FeatureKind::EntropyValley, series.subsystem_names[s], ent, false);
    emit(FeatureKind::EntropyDerivativePeak, series.subsystem_names[s], der, true);
  }
  return report;
}

std::string format_report(const CriticalReport& report) {
  std::string out;
  for (const auto& f : report) {
    out += to_string(f.kind);
    out += ' ';
    out += f.subsystem.empty() ? "-" : f.subsystem;
    out += ' ';
    out += fmt17(f.j_rung);
    out += ' ';
    out += fmt17(f.value);
    out += '\n';
  }
  return out;
}

void write_csv(const SweepSeries& series, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "j_rung,energy,gap,fidelity,susceptibility";
  for (const auto& name : series.subsystem_names) out << ",E_" << name;
  for (const auto& name : series.subsystem_names) out << ",dE_" << name;
  out << ",degenerate\n";
  for (const SweepRow& r : series.rows) {
    out << fmt17(r.j_rung) << ',' << fmt17(r.energy) << ',' << fmt17(r.gap) << ','
        << fmt17(r.fidelity) << ',' << fmt17(r.susceptibility);
    for (double e : r.entropies) out << ',' << fmt17(e);
    for (double d : r.entropy_derivatives) out << ',' << fmt17(d);
    out << ',' << (r.degenerate ? 1 : 0) << '\n';
  }
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string tok;
  while (std::getline(ss, tok, sep)) out.push_back(tok);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& tok) {
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0') {
    throw IoError("bad numeric field '" + tok + "'");
  }
  return v;
}

}  // namespace

SweepSeries read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty file '" + path + "'");
  const auto header = split(line, ',');
  if (header.size() < 6 || header[0] != "j_rung" || header.back() != "degenerate") {
    throw IoError("unrecognized header in '" + path + "'");
  }
  SweepSeries series;
  size_t col = 5;
  while (col < header.size() - 1 && header[col].rfind("E_", 0) == 0) {
    series.subsystem_names.push_back(header[col].substr(2));
    ++col;
  }
  const size_t n_sub = series.subsystem_names.size();
  if (header.size() != 6 + 2 * n_sub) throw IoError("inconsistent column count");
  for (size_t s = 0; s < n_sub; ++s) {
    if (header[5 + n_sub + s] != "dE_" + series.subsystem_names[s]) {
      throw IoError("derivative column does not match subsystem order");
    }
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != header.size()) throw IoError("row width mismatch");
    SweepRow r;
    r.j_rung = parse_double(f[0]);
    r.energy = parse_double(f[1]);
    r.gap = parse_double(f[2]);
    r.fidelity = parse_double(f[3]);
    r.susceptibility = parse_double(f[4]);
    for (size_t s = 0; s < n_sub; ++s) r.entropies.push_back(parse_double(f[5 + s]));
    for (size_t s = 0; s < n_sub; ++s) {
      r.entropy_derivatives.push_back(parse_double(f[5 + n_sub + s]));
    }
    r.degenerate = parse_double(f[5 + 2 * n_sub]) != 0.0;
    series.rows.push_back(std::move(r));
  }
  return series;
}

}  // namespace ladder
