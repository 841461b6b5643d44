#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bbq/hamiltonian.hpp"

namespace bbq {

enum class MeasureKind {
  Negativity,         // site 1 | rest of the full state
  ConcurrenceTotal,   // |C| over site 1 | rest
  ConcurrencePartial, // |C| of the reduced pair state rho_{partial_sites}
  EntropyTotal,       // S(rho_1)
  EntropyPartial,     // S(rho_{partial_sites})
  Zhou,               // tau / classical / quantum of rho_{partial_sites}
};

const char* measure_name(MeasureKind m);
MeasureKind measure_from_name(const std::string& name);

/// Inclusive theta grid, expressed as theta/pi.
struct ThetaGrid {
  double min_over_pi = -1.0;
  double max_over_pi = 1.0;
  int steps = 401;  // number of grid points

  double value(int i) const;  // theta/pi at point i
  double step() const { return (max_over_pi - min_over_pi) / (steps - 1); }
};

struct DetectorParams {
  bool enabled = true;
  double derivative_threshold_factor = 5.0;
  double jump_threshold = 0.05;
};

struct SweepConfig {
  int length = 6;
  Boundary boundary = Boundary::Periodic;
  ThetaGrid grid;
  double temperature = 0.0;  // 0 = ground state
  std::vector<MeasureKind> measures;
  std::pair<int, int> partial_sites{1, 2};
  DetectorParams detector;
  std::uint64_t seed = 1;
  bool force_dense = false;  // dense full diagonalization even at T = 0
  int jobs = 0;              // worker threads over grid points; 0 = OpenMP default

  void validate() const;  // throws config_error / resource_limit_error
};

struct TransitionFlag {
  int index = 0;              // grid index
  double theta_over_pi = 0.0;
  std::string kind;           // "jump" | "derivative-peak" | "crossing"
  double score = 0.0;         // |dM/dtheta| at the flag (crossing: residual |C-Q|)
};

struct SweepRow {
  double theta_over_pi = 0.0;
  std::vector<double> values;  // one per column
};

struct SweepResult {
  std::vector<std::string> columns;  // CSV columns after theta_over_pi
  std::vector<SweepRow> rows;        // ascending in theta
  std::map<std::string, std::vector<TransitionFlag>> transitions;  // per column
  std::vector<int> degenerate_points;  // grid indices with ground degeneracy > 1
  SweepConfig config;
  double wall_seconds = 0.0;

  std::vector<double> column(const std::string& name) const;
  std::vector<double> thetas_over_pi() const;
};

/// Evaluates every requested measure on the theta grid (parallel over grid
/// points; per-point results are deterministic for a fixed config and seed,
/// independent of the worker count) and runs the transition detector.
SweepResult run_sweep(const SweepConfig& config);

/// Finite-difference transition detector: `jump` where |M_{k+1} - M_k| >
/// jump_threshold, `derivative-peak` where the central-difference |dM/dtheta|
/// is a local maximum above derivative_threshold_factor x median. Adjacent
/// candidates collapse to the strongest. Needs >= 5 grid points.
std::vector<TransitionFlag> detect_transitions(const std::vector<double>& theta_over_pi,
                                               const std::vector<double>& values,
                                               const DetectorParams& params);
std::vector<TransitionFlag> detect_transitions(const SweepResult& result, const std::string& column,
                                               const DetectorParams& params);

/// Points where two curves meet: endpoints of runs with |a - b| <= tolerance
/// (interior minimum for short runs) plus sign-change local minima of a - b.
std::vector<TransitionFlag> detect_crossings(const std::vector<double>& theta_over_pi,
                                             const std::vector<double>& a,
                                             const std::vector<double>& b,
                                             double tolerance = 0.02);

/// CSV: header `theta_over_pi,<col1>,...`, 12 significant digits, LF line
/// endings; writes a `<path>.meta.json` sidecar with the full config, seed,
/// version, degeneracy flags and transition flags.
void write_csv(const SweepResult& result, const std::string& path);

/// Self-contained SVG with one polyline per requested column, a legend, and
/// dashed vertical markers at flagged transitions. Byte-deterministic for a
/// fixed result.
void write_svg_plot(const SweepResult& result, const std::vector<std::string>& columns,
                    const std::string& path);

}  // namespace bbq
