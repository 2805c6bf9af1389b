#pragma once

// Experiment configuration as flat "section.key = value" text.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rdlab/diagnostics.hpp"
#include "rdlab/domain.hpp"
#include "rdlab/kinetics.hpp"
#include "rdlab/linstab.hpp"
#include "rdlab/solver.hpp"

namespace rdlab {

enum class IcKind { Noise, Snapshot };

struct IcSpec {
  IcKind kind = IcKind::Noise;
  RegionSel region = RegionSel::All;  ///< noise only; amplitude is sim.epsilon
  std::string path;                   ///< snapshot only
  Fill fill = Fill::Homogeneous;      ///< snapshot only
  bool operator==(const IcSpec&) const = default;
};

struct ExperimentConfig {
  KineticParams params;
  DiffusionPair diffusion;
  DomainSpec domain = SquareDomain{100.0};
  double h = 1.0;
  SimConfig sim;
  IcSpec ic;
  std::string output_dir = "out";
  bool write_snapshots = true;
  bool write_pgm = false;
  ClassifierThresholds classifier;
  TransientThresholds transient;
  SpectrumWindow window = SpectrumWindow::None;
  double dispersion_k_max = 0.0;  ///< <= 0 selects twice the band's upper edge (or 2)
  int dispersion_samples = 512;
  double map_a_min = 0.5, map_a_max = 3.0;
  double map_d2_min = 0.5, map_d2_max = 20.0;
  int map_res_a = 51, map_res_d2 = 40;
  double modes_L = 0.0;  ///< <= 0 uses the width of D1

  bool operator==(const ExperimentConfig&) const = default;
};

/// Every key with its current value, in a fixed order.
std::vector<std::pair<std::string, std::string>> config_entries(const ExperimentConfig& cfg);

/// Applies one key. Throws Error(Config) for an unknown key or bad value.
void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// "key = value" lines; '#' starts a comment. Keys not given keep defaults.
ExperimentConfig parse_config(const std::string& text);
std::string emit_config(const ExperimentConfig& cfg);

ExperimentConfig load_config(const std::string& path);

/// Applies "key=value" overrides in order.
void apply_overrides(ExperimentConfig& cfg, const std::vector<std::string>& assignments);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double x);
double parse_double(const std::string& text);

}  // namespace rdlab
