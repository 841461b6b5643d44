#include "bbq/sweep.hpp"

#include <dlfcn.h>
#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include <json.hpp>

#include "bbq/errors.hpp"
#include "bbq/measures.hpp"
#include "bbq/spectra.hpp"
#include "bbq/states.hpp"
#include "bbq/version.hpp"

namespace bbq {

namespace {

void set_blas_threads(int n) {
  using Fn = void (*)(int);
  static Fn fn = reinterpret_cast<Fn>(dlsym(RTLD_DEFAULT, "openblas_set_num_threads"));
  if (fn) fn(n);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::string format_g(double v, int digits = 12) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return buf;
}

struct PointOutput {
  std::vector<double> values;
  bool degenerate = false;
};

std::vector<std::string> columns_for(const std::vector<MeasureKind>& measures) {
  std::vector<std::string> cols;
  for (MeasureKind m : measures) {
    if (m == MeasureKind::Zhou) {
      cols.emplace_back("zhou_total");
      cols.emplace_back("zhou_classical");
      cols.emplace_back("zhou_quantum");
    } else {
      cols.emplace_back(measure_name(m));
    }
  }
  return cols;
}

bool needs_pair_state(const std::vector<MeasureKind>& ms) {
  for (MeasureKind m : ms)
    if (m == MeasureKind::ConcurrencePartial || m == MeasureKind::EntropyPartial ||
        m == MeasureKind::Zhou)
      return true;
  return false;
}

PointOutput evaluate_point(const ChainTerms& terms, const SweepConfig& cfg, int index) {
  const double theta = cfg.grid.value(index) * std::numbers::pi;
  const SparseSymmetricOperator h = terms.hamiltonian(theta);
  const int length = cfg.length;
  const std::vector<std::int64_t> site_dims(length, 3);

  Eigen::MatrixXd factors;
  Eigen::VectorXd weights;
  DensityMatrix full_state;  // dense; only built on the thermal path
  const bool thermal = cfg.temperature > 0.0;
  PointOutput out;

  if (!thermal) {
    GroundSpace gs;
    if (cfg.force_dense) {
      gs = ground_space(dense_eigh(h), 1e-9);
    } else {
      LanczosOptions lo;
      lo.seed = splitmix64(cfg.seed ^ splitmix64(static_cast<std::uint64_t>(index) + 1));
      gs = solve_ground_space(h, length, lo, 1e-9);
    }
    out.degenerate = gs.degeneracy > 1;
    weights = Eigen::VectorXd::Constant(gs.degeneracy, 1.0 / gs.degeneracy);
    factors = std::move(gs.vectors);
  } else {
    const Spectrum spectrum = dense_eigh(h);
    full_state = thermal_state(spectrum, cfg.temperature);
    const double e0 = spectrum.eigenvalues(0);
    Eigen::VectorXd w(spectrum.eigenvalues.size());
    for (Eigen::Index i = 0; i < w.size(); ++i)
      w(i) = std::exp(-(spectrum.eigenvalues(i) - e0) / cfg.temperature);
    w /= w.sum();
    Eigen::Index r = 0;
    while (r < w.size() && w(r) > 0.0) ++r;
    weights = w.head(r);
    factors = spectrum.eigenvectors.leftCols(r);
  }

  DensityMatrix pair_state;
  if (needs_pair_state(cfg.measures)) {
    const std::vector<int> keep{cfg.partial_sites.first, cfg.partial_sites.second};
    pair_state = thermal ? partial_trace(full_state, keep)
                         : reduced_from_factors(factors, weights, site_dims, keep);
  }

  for (MeasureKind m : cfg.measures) {
    switch (m) {
      case MeasureKind::Negativity:
        out.values.push_back(thermal ? negativity(full_state, Bipartition::leading(1, length))
                                     : negativity_low_rank(factors, weights, 3));
        break;
      case MeasureKind::ConcurrenceTotal: {
        const std::int64_t db = pow3(length - 1);
        const double work = 0.5 * static_cast<double>(db) * (db - 1) *
                            static_cast<double>(weights.size()) * weights.size();
        if (work > 2e8)
          throw resource_limit_error("concurrence_total: state rank too large for streaming path");
        out.values.push_back(concurrence_low_rank(factors, weights, 3).norm());
        break;
      }
      case MeasureKind::ConcurrencePartial:
        out.values.push_back(generalized_concurrence(pair_state, Bipartition::leading(1, 2)).norm());
        break;
      case MeasureKind::EntropyTotal: {
        const DensityMatrix rho_a = thermal ? partial_trace(full_state, {1})
                                            : reduced_from_factors(factors, weights, site_dims, {1});
        out.values.push_back(von_neumann_entropy(rho_a));
        break;
      }
      case MeasureKind::EntropyPartial:
        out.values.push_back(von_neumann_entropy(pair_state));
        break;
      case MeasureKind::Zhou: {
        const ZhouCorrelations z = zhou_correlations(coherence_decomposition(pair_state));
        out.values.push_back(z.total);
        out.values.push_back(z.classical);
        out.values.push_back(z.quantum);
        break;
      }
    }
  }
  return out;
}

}  // namespace

const char* measure_name(MeasureKind m) {
  switch (m) {
    case MeasureKind::Negativity: return "negativity";
    case MeasureKind::ConcurrenceTotal: return "concurrence_total";
    case MeasureKind::ConcurrencePartial: return "concurrence_partial";
    case MeasureKind::EntropyTotal: return "entropy_total";
    case MeasureKind::EntropyPartial: return "entropy_partial";
    case MeasureKind::Zhou: return "zhou";
  }
  return "?";
}

MeasureKind measure_from_name(const std::string& name) {
  for (MeasureKind m : {MeasureKind::Negativity, MeasureKind::ConcurrenceTotal,
                        MeasureKind::ConcurrencePartial, MeasureKind::EntropyTotal,
                        MeasureKind::EntropyPartial, MeasureKind::Zhou})
    if (name == measure_name(m)) return m;
  throw config_error("unknown measure: " + name);
}

double ThetaGrid::value(int i) const {
  return min_over_pi + (max_over_pi - min_over_pi) * static_cast<double>(i) / (steps - 1);
}

void SweepConfig::validate() const {
  if (length < 2) throw config_error("length must be >= 2");
  if (length > 12) throw resource_limit_error("length guarded to <= 12");
  if (grid.steps < 2) throw config_error("grid needs at least 2 steps");
  if (!(grid.min_over_pi < grid.max_over_pi)) throw config_error("grid requires min < max");
  if (temperature < 0.0) throw config_error("temperature must be >= 0");
  if (measures.empty()) throw config_error("at least one measure required");
  const auto [s1, s2] = partial_sites;
  if (s1 < 1 || s2 < 1 || s1 >= s2 || s2 > length)
    throw config_error("partial_sites must be an ascending pair of distinct sites");
  if (jobs < 0) throw config_error("jobs must be >= 0");
  if (temperature > 0.0) {
    if (pow3(length) > 6561)
      throw resource_limit_error("thermal sweeps need the complete spectrum; guarded to L <= 8");
    for (MeasureKind m : measures)
      if (m == MeasureKind::ConcurrenceTotal && length > 5)
        throw resource_limit_error(
            "thermal concurrence_total is guarded to L <= 5 (full-rank streaming cost)");
  }
}

std::vector<double> SweepResult::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw config_error("no such column: " + name);
  const std::size_t c = static_cast<std::size_t>(it - columns.begin());
  std::vector<double> out;
  out.reserve(rows.size());
  for (const SweepRow& r : rows) out.push_back(r.values[c]);
  return out;
}

std::vector<double> SweepResult::thetas_over_pi() const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const SweepRow& r : rows) out.push_back(r.theta_over_pi);
  return out;
}

SweepResult run_sweep(const SweepConfig& config) {
  config.validate();
  const auto t0 = std::chrono::steady_clock::now();

  SweepResult result;
  result.config = config;
  result.columns = columns_for(config.measures);
  result.rows.resize(config.grid.steps);

  ChainTerms terms(config.length, config.boundary);

  std::vector<PointOutput> outputs(config.grid.steps);
  std::vector<std::exception_ptr> errors(config.grid.steps);
  const int n_jobs = config.jobs > 0 ? config.jobs : omp_get_max_threads();

  // per-point numerics stay single-threaded in BLAS so results do not depend
  // on the worker count
  set_blas_threads(1);
#pragma omp parallel for schedule(dynamic) num_threads(n_jobs)
  for (int i = 0; i < config.grid.steps; ++i) {
    try {
      outputs[i] = evaluate_point(terms, config, i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  set_blas_threads(omp_get_max_threads());

  for (int i = 0; i < config.grid.steps; ++i) {
    if (!errors[i]) continue;
    const std::string at = " (at theta/pi = " + format_g(config.grid.value(i), 6) + ")";
    try {
      std::rethrow_exception(errors[i]);
    } catch (const resource_limit_error& e) {
      throw resource_limit_error(e.what() + at);
    } catch (const convergence_error& e) {
      throw convergence_error(e.what() + at, e.best_residual);
    } catch (const std::exception& e) {
      throw config_error(e.what() + at);
    }
  }

  for (int i = 0; i < config.grid.steps; ++i) {
    result.rows[i].theta_over_pi = config.grid.value(i);
    result.rows[i].values = std::move(outputs[i].values);
    if (outputs[i].degenerate) result.degenerate_points.push_back(i);
  }

  if (config.detector.enabled && config.grid.steps >= 5) {
    const std::vector<double> thetas = result.thetas_over_pi();
    for (const std::string& col : result.columns)
      result.transitions[col] = detect_transitions(thetas, result.column(col), config.detector);
    if (std::find(result.columns.begin(), result.columns.end(), "zhou_classical") !=
        result.columns.end()) {
      result.transitions["zhou_crossing"] =
          detect_crossings(thetas, result.column("zhou_classical"), result.column("zhou_quantum"));
    }
  }

  result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

std::vector<TransitionFlag> detect_transitions(const std::vector<double>& theta_over_pi,
                                               const std::vector<double>& values,
                                               const DetectorParams& params) {
  const int n = static_cast<int>(values.size());
  if (n < 5) throw config_error("detect_transitions needs at least 5 grid points");
  if (theta_over_pi.size() != values.size())
    throw config_error("detect_transitions: grid/value size mismatch");
  const double h = (theta_over_pi[n - 1] - theta_over_pi[0]) / (n - 1) * std::numbers::pi;

  std::vector<double> deriv(n, 0.0);
  for (int k = 1; k < n - 1; ++k) deriv[k] = (values[k + 1] - values[k - 1]) / (2.0 * h);
  std::vector<double> mags;
  for (int k = 1; k < n - 1; ++k) mags.push_back(std::abs(deriv[k]));
  std::sort(mags.begin(), mags.end());
  const double median = mags.empty() ? 0.0 : mags[mags.size() / 2];

  struct Cand {
    int index;
    double score;
    const char* kind;
  };
  std::vector<Cand> cands;
  for (int k = 0; k < n - 1; ++k) {
    const double jump = std::abs(values[k + 1] - values[k]);
    if (jump > params.jump_threshold) cands.push_back({k, jump / h, "jump"});
  }
  for (int k = 2; k < n - 2; ++k) {
    const double a = std::abs(deriv[k]);
    if (a > params.derivative_threshold_factor * median && a >= std::abs(deriv[k - 1]) &&
        a >= std::abs(deriv[k + 1]) && a >= std::abs(deriv[k - 2]) && a >= std::abs(deriv[k + 2]))
      cands.push_back({k, a, "derivative-peak"});
  }
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    return a.index != b.index ? a.index < b.index : a.score > b.score;
  });

  // collapse neighbors (within 2 grid steps) to the strongest candidate
  std::vector<Cand> merged;
  for (const Cand& c : cands) {
    if (!merged.empty() && c.index - merged.back().index <= 2) {
      if (c.score > merged.back().score) merged.back() = c;
    } else {
      merged.push_back(c);
    }
  }

  std::vector<TransitionFlag> out;
  for (const Cand& c : merged)
    out.push_back({c.index, theta_over_pi[c.index], c.kind, c.score});
  return out;
}

std::vector<TransitionFlag> detect_transitions(const SweepResult& result, const std::string& column,
                                               const DetectorParams& params) {
  return detect_transitions(result.thetas_over_pi(), result.column(column), params);
}

std::vector<TransitionFlag> detect_crossings(const std::vector<double>& theta_over_pi,
                                             const std::vector<double>& a,
                                             const std::vector<double>& b, double tolerance) {
  const int n = static_cast<int>(a.size());
  if (n < 5) throw config_error("detect_crossings needs at least 5 grid points");
  if (a.size() != b.size() || theta_over_pi.size() != a.size())
    throw config_error("detect_crossings: size mismatch");

  std::vector<double> diff(n), mag(n);
  for (int k = 0; k < n; ++k) {
    diff[k] = a[k] - b[k];
    mag[k] = std::abs(diff[k]);
  }
  std::vector<TransitionFlag> out;
  auto push = [&](int k) { out.push_back({k, theta_over_pi[k], "crossing", mag[k]}); };

  // runs where the curves have converged: long runs flag both endpoints
  // (phase boundaries), short runs flag the interior minimum
  int i = 0;
  while (i < n) {
    if (mag[i] <= tolerance) {
      int j = i;
      while (j + 1 < n && mag[j + 1] <= tolerance) ++j;
      if (j - i >= 4) {
        push(i);
        push(j);
      } else {
        int kmin = i;
        for (int k = i; k <= j; ++k)
          if (mag[k] < mag[kmin]) kmin = k;
        push(kmin);
      }
      i = j + 1;
    } else {
      ++i;
    }
  }
  // genuine sign changes outside converged runs
  for (int k = 1; k < n; ++k)
    if (diff[k] * diff[k - 1] < 0.0 && mag[k] > tolerance && mag[k - 1] > tolerance)
      push(mag[k] < mag[k - 1] ? k : k - 1);

  std::sort(out.begin(), out.end(),
            [](const TransitionFlag& x, const TransitionFlag& y) { return x.index < y.index; });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const TransitionFlag& x, const TransitionFlag& y) {
                          return std::abs(x.index - y.index) <= 1;
                        }),
            out.end());
  return out;
}

void write_csv(const SweepResult& result, const std::string& path) {
  if (result.columns.empty()) throw config_error("write_csv: no measure columns");
  std::string text = "theta_over_pi";
  for (const std::string& c : result.columns) text += "," + c;
  text += "\n";
  for (const SweepRow& r : result.rows) {
    text += format_g(r.theta_over_pi);
    for (double v : r.values) text += "," + format_g(v);
    text += "\n";
  }
  {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw config_error("write_csv: cannot open " + path);
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!f) throw config_error("write_csv: write failed for " + path);
  }

  nlohmann::json meta;
  meta["version"] = version;
  meta["config"] = {
      {"length", result.config.length},
      {"boundary", result.config.boundary == Boundary::Periodic ? "periodic" : "open"},
      {"grid",
       {{"min_over_pi", result.config.grid.min_over_pi},
        {"max_over_pi", result.config.grid.max_over_pi},
        {"steps", result.config.grid.steps}}},
      {"temperature", result.config.temperature},
      {"partial_sites", {result.config.partial_sites.first, result.config.partial_sites.second}},
      {"detector",
       {{"enabled", result.config.detector.enabled},
        {"derivative_threshold_factor", result.config.detector.derivative_threshold_factor},
        {"jump_threshold", result.config.detector.jump_threshold}}},
      {"seed", result.config.seed},
      {"force_dense", result.config.force_dense},
      {"jobs", result.config.jobs}};
  std::vector<std::string> mnames;
  for (MeasureKind m : result.config.measures) mnames.emplace_back(measure_name(m));
  meta["config"]["measures"] = mnames;
  meta["columns"] = result.columns;
  meta["degenerate_points"] = result.degenerate_points;
  meta["wall_seconds"] = result.wall_seconds;
  nlohmann::json flags = nlohmann::json::object();
  for (const auto& [col, list] : result.transitions) {
    nlohmann::json arr = nlohmann::json::array();
    for (const TransitionFlag& f : list)
      arr.push_back({{"index", f.index},
                     {"theta_over_pi", f.theta_over_pi},
                     {"kind", f.kind},
                     {"score", f.score}});
    flags[col] = arr;
  }
  meta["transitions"] = flags;

  std::string meta_path = path;
  if (meta_path.size() > 4 && meta_path.substr(meta_path.size() - 4) == ".csv")
    meta_path = meta_path.substr(0, meta_path.size() - 4);
  meta_path += ".meta.json";
  std::ofstream mf(meta_path, std::ios::binary);
  if (!mf) throw config_error("write_csv: cannot open " + meta_path);
  const std::string dumped = meta.dump(2);
  mf.write(dumped.data(), static_cast<std::streamsize>(dumped.size()));
  mf << "\n";
}

}  // namespace bbq
