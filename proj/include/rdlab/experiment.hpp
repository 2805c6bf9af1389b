#pragma once

// Command implementations shared by the C API and the command-line tool.

#include <optional>
#include <string>
#include <vector>

#include "rdlab/config.hpp"
#include "rdlab/diagnostics.hpp"
#include "rdlab/solver.hpp"

namespace rdlab {

GridGeometry build_geometry(const ExperimentConfig& cfg);

/// Initial condition described by cfg.ic (noise or a snapshot with fill).
FieldState build_initial_state(const ExperimentConfig& cfg, const GridGeometry& g);

/// Side length used for mode counting: modes.L when positive, else the width of D1.
double mode_length(const ExperimentConfig& cfg, const GridGeometry& g);

/// Human-readable linear analysis of the configured point.
std::string cmd_analyze(const ExperimentConfig& cfg);

/// CSV of (k, re_lambda_max, im_lambda) with band edges in the header.
std::string cmd_dispersion(const ExperimentConfig& cfg);

struct MapOutput {
  std::string grid_csv;      ///< a,d2,regime
  std::string boundary_csv;  ///< a,d2T
  std::size_t unknown_cells = 0;
};

MapOutput cmd_map(const ExperimentConfig& cfg);

struct SimulateOutput {
  RunResult run;
  PatternClass pattern;
  std::optional<SpectralSummary> spectrum;
  RegionSel spectrum_region = RegionSel::All;
  std::optional<TransientMetrics> transient;
  std::string summary;  ///< also written to summary.txt
};

/// Runs the configured experiment and writes config.txt, series.csv,
/// summary.txt, mask.pgm, final.rds, snapshots and transient.csv (when D2
/// exists) under cfg.output_dir. On BlowUp writes blowup.rds and rethrows.
SimulateOutput cmd_simulate(const ExperimentConfig& cfg);

/// cmd_simulate with the initial condition taken from a settled snapshot.
SimulateOutput cmd_resume(ExperimentConfig cfg, const std::string& snapshot_path, Fill fill);

/// Re-labels saved snapshots. With two or more, the verdict comes from the
/// stationarity check between the last two; with one, from its "verdict"
/// header entry when present, otherwise the morphology is reported as if
/// stationary.
std::string cmd_classify(const std::vector<std::string>& snapshot_paths);

/// Region means recomputed from saved snapshots, as series CSV.
std::string cmd_series(const std::vector<std::string>& snapshot_paths);

}  // namespace rdlab
