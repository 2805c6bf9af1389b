#pragma once

// On-disk formats. Snapshots are a text header ("key = value" lines ending
// with "end_header") followed by the u and v planes as row-major
// little-endian float64, NaN outside the mask. Series are CSV with the
// resolved config as leading '#' lines.

#include <string>
#include <utility>
#include <vector>

#include "rdlab/config.hpp"
#include "rdlab/domain.hpp"
#include "rdlab/rng.hpp"
#include "rdlab/solver.hpp"

namespace rdlab {

using HeaderEntries = std::vector<std::pair<std::string, std::string>>;

struct Snapshot {
  int nx = 0, ny = 0;
  double h = 1.0;
  FieldState state;
  HeaderEntries header;  ///< every header line in file order

  /// Value of a header key; throws Error(Io) when absent.
  const std::string& get(const std::string& key) const;
  bool has(const std::string& key) const;
};

/// Header: nx, ny, h, t, seed, generator, domain, params.*, then the full
/// config under "config.", then `extra`.
void write_snapshot(const std::string& path, const FieldState& state, const GridGeometry& g,
                    const ExperimentConfig& cfg, const HeaderEntries& extra = {});
Snapshot read_snapshot(const std::string& path);

/// Rebuilds the config stored under "config." in a snapshot header.
ExperimentConfig snapshot_config(const Snapshot& snap);

/// Binary PGM of cell labels: 0 outside, 1 D1, 2 corridor, 3 right patch.
void write_mask(const std::string& path, const GridGeometry& g);

std::string series_csv(const TimeSeries& series, const ExperimentConfig& cfg, const HeaderEntries& extra = {});
void write_series(const std::string& path, const TimeSeries& series, const ExperimentConfig& cfg,
                  const HeaderEntries& extra = {});
TimeSeries read_series(const std::string& path);

/// Binary PGM of a field scaled to [0, 255]; NaN maps to 0. With `threshold`
/// the field is binarised at mean + threshold * std instead.
void write_pgm(const std::string& path, const std::vector<double>& field, int nx, int ny, bool binarise = false,
               double threshold = 0.0);

/// Writes `text` to `path`, throwing Error(Io) on failure.
void write_text(const std::string& path, const std::string& text);

/// "# key = value" lines for the config, for embedding in text outputs.
std::string config_comment_block(const ExperimentConfig& cfg, const HeaderEntries& extra = {});

}  // namespace rdlab
