#pragma once

// Post-run analyses: morphology labels, spectral wavenumber, corridor
// transient metrics and twin-run divergence.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rdlab/domain.hpp"
#include "rdlab/kinetics.hpp"
#include "rdlab/linstab.hpp"
#include "rdlab/solver.hpp"

namespace rdlab {

enum class PatternTag { HotSpot, ColdSpot, Labyrinthine, Homogeneous, Dynamic };

const char* to_string(PatternTag tag) noexcept;

struct PatternClass {
  PatternTag tag = PatternTag::Homogeneous;
  double confidence = 1.0;  ///< in [0, 1]
  double skewness = 0.0;    ///< of u over interior cells (0 for a flat field)
  double std_dev = 0.0;     ///< of u over interior cells
};

struct ClassifierThresholds {
  double skew = 0.3;                ///< |skewness| above this is a spot pattern
  double homogeneous_rel_std = 1e-4;  ///< std(u) below this times u* is homogeneous
  bool operator==(const ClassifierThresholds&) const = default;
};

/// Dynamic unless the run ended Stationary; Homogeneous for a flat field;
/// otherwise HotSpot / ColdSpot / Labyrinthine by the sign and size of the
/// skewness of u (isolated prey maxima skew the distribution upwards).
PatternClass classify_pattern(const FieldState& state, const Equilibrium& eq, const GridGeometry& g, Verdict verdict,
                              const ClassifierThresholds& th = {});

enum class SpectrumWindow { None, CosineTaper };

struct SpectralSummary {
  double k_peak = 0.0;      ///< centre of the radial bin with the most power
  double k_centroid = 0.0;  ///< power-weighted mean k over the peak bin and two bins either side
  double bin_width = 0.0;
  std::optional<bool> band_ok;  ///< k_peak inside (k1, k2); empty without a band
  int spots_high = 0;       ///< 4-connected components with deviation > +0.5 std
  int spots_low = 0;        ///< 4-connected components with deviation < -0.5 std
  int spot_count = 0;       ///< spots_high + spots_low
  std::vector<double> ring_power;  ///< summed power per radial bin
};

/// Radial power spectrum of the mean-free field on a rectangular region.
/// The transform is the 2-D DCT-II (even extension), whose basis functions
/// cos(n1 pi x/Lx) cos(n2 pi y/Ly) are the zero-flux eigenmodes, so a planted
/// mode lands in a single coefficient without a window. Bins have width
/// pi / min(Lx, Ly); bin i covers [i, i+1) widths. Throws RegionNotRectangular.
SpectralSummary radial_spectrum(std::span<const double> field, const GridGeometry& g, RegionSel region = RegionSel::All,
                                std::optional<UnstableBand> band = std::nullopt,
                                SpectrumWindow window = SpectrumWindow::None);

struct TransientThresholds {
  double onset_rel = 0.05;   ///< |mean_u_D2 - u*| / u* that marks onset
  double settle_rel = 0.10;  ///< relative envelope mismatch accepted as settled
  double smoothing = 100.0;  ///< time window for averaging envelope widths
  bool operator==(const TransientThresholds&) const = default;
};

struct TransientMetrics {
  bool onset = false;  ///< false reports NeverOnset
  double t_onset_d2 = 0.0;
  double t_settle_d2 = 0.0;        ///< NaN when the envelopes never match after onset
  double t_peak_d2 = 0.0;          ///< time of the widest D2 envelope
  double peak_amplitude_d2 = 0.0;  ///< half the widest D2 envelope width
  /// Large-amplitude phase: the run of samples around t_peak_d2 whose
  /// smoothed D2 width stays at or above half its maximum.
  double t_phase_start = 0.0, t_phase_end = 0.0;
  double amplitude_d1_early = 0.0; ///< half the widest D1 envelope width over that phase
  double amplitude_d1_late = 0.0;  ///< half the mean D1 envelope width after t_settle
};

/// Upper-minus-lower envelope through successive local extrema, on the
/// series' own time grid. Zero before the first extremum pair.
std::vector<double> envelope_width(std::span<const double> t, std::span<const double> x);

/// Onset, envelope matching and peak amplitude of the D2 mean against D1.
TransientMetrics transient_metrics(const TimeSeries& series, const Equilibrium& eq, const TransientThresholds& th = {});

struct DivergencePoint {
  double t = 0.0;
  double distance = 0.0;  ///< L2 distance of (u, v) over interior cells, times h
};

/// Runs two initial conditions side by side (stationarity stopping off) and
/// records their distance every cfg.series_every.
std::vector<DivergencePoint> twin_divergence(const SimConfig& cfg, const FieldState& ic, const FieldState& ic_perturbed,
                                             const KineticParams& p, const DiffusionPair& d, const GridGeometry& g);

struct DivergenceSummary {
  double initial = 0.0;
  double maximum = 0.0;
  double final = 0.0;
  double orders_of_growth = 0.0;  ///< log10(maximum / initial), 0 when initial == 0
};

DivergenceSummary summarize_divergence(const std::vector<DivergencePoint>& curve);

}  // namespace rdlab
