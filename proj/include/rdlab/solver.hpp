#pragma once

// Explicit finite-difference integration of the reaction-diffusion system on
// a masked grid with zero-flux (mirror ghost) boundaries.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rdlab/domain.hpp"
#include "rdlab/kinetics.hpp"
#include "rdlab/linstab.hpp"

namespace rdlab {

/// Paired fields on the full nx*ny grid; cells outside the mask hold NaN.
struct FieldState {
  std::vector<double> u;
  std::vector<double> v;
  double t = 0.0;
};

/// Explicit time scheme. Both share the diffusive step bound of forward Euler.
enum class TimeScheme { Euler, Heun };

const char* to_string(TimeScheme scheme) noexcept;
TimeScheme parse_scheme(const std::string& text);

struct SimConfig {
  double dt = 0.0;              ///< <= 0 selects safety * h^2 / (4 max(d1, d2))
  double t_end = 1000.0;
  double snapshot_every = 50.0;
  double series_every = 0.5;
  std::uint64_t seed = 1;
  double epsilon = 0.01;
  double safety = 0.8;
  double stationary_tol = 1e-6;  ///< per unit time, max-norm
  bool stop_on_stationary = true;
  int threads = 1;
  TimeScheme scheme = TimeScheme::Heun;

  bool operator==(const SimConfig&) const = default;
};

struct SeriesRow {
  double t = 0.0;
  double mean_u_d1 = 0.0, mean_v_d1 = 0.0;
  double mean_u_d2 = 0.0, mean_v_d2 = 0.0;  ///< NaN when D2 is empty
  double mean_u_all = 0.0, mean_v_all = 0.0;
};

using TimeSeries = std::vector<SeriesRow>;

enum class Verdict { Stationary, RanToEnd };

const char* to_string(Verdict v) noexcept;

struct RunResult {
  std::vector<FieldState> snapshots;  ///< t = 0 and every snapshot_every
  TimeSeries series;
  Verdict verdict = Verdict::RanToEnd;
  double t_settle = 0.0;  ///< time of the passing stationarity check (Stationary only)
  /// Snapshot time from which every later check on the region passed; NaN
  /// when the last check failed or the region is empty.
  double settle_d1 = 0.0, settle_d2 = 0.0, settle_all = 0.0;
  double dt = 0.0;        ///< step actually used
  std::uint64_t steps = 0;
  int halvings = 0;       ///< steps retried with a reduced dt
};

enum class Fill { Homogeneous, Zero };

const char* to_string(Fill fill) noexcept;
Fill parse_fill(const std::string& text);

/// Largest stable step for the 5-point explicit scheme, times `safety`.
double stable_dt(double h, const DiffusionPair& d, double safety);

/// Step that divides series_every exactly and does not exceed the requested
/// (or stable) step.
double effective_dt(const SimConfig& cfg, double h, const DiffusionPair& d);

/// (u*, v*) + epsilon * N(0, 1) on the region's cells, (u*, v*) elsewhere,
/// negatives clamped to zero. Draw order: all u in row-major cell order, then all v.
FieldState make_ic_noise(const Equilibrium& eq, double epsilon, std::uint64_t seed, const GridGeometry& g,
                         RegionSel region);

/// Copies a settled field onto D1 and fills D2 with (u*, v*) or (0, 0). The
/// source is either on the same grid as `g` or on a grid the size of D1's
/// bounding box. Throws ShapeMismatch otherwise or when a D1 value is missing.
FieldState make_ic_from_snapshot(const FieldState& snap, int snap_nx, int snap_ny, Fill fill, const Equilibrium& eq,
                                 const GridGeometry& g);

FieldState homogeneous_state(const Equilibrium& eq, const GridGeometry& g);

/// 5-point Laplacian with mirror neighbours; outside cells are NaN.
std::vector<double> laplacian(std::span<const double> field, const GridGeometry& g);

/// Pairwise sum in a fixed order.
double stable_sum(std::span<const double> values);

/// Arithmetic mean over the region's interior cells. Throws EmptyRegion.
std::pair<double, double> spatial_average(const FieldState& s, const GridGeometry& g, RegionSel region);

/// Max-norm rate test between two states, optionally restricted to a region.
bool stationarity_check(const FieldState& s1, const FieldState& s2, double tol, const GridGeometry& g,
                        RegionSel region = RegionSel::All);

/// Reusable integrator bound to one geometry and parameter set.
class Simulator {
 public:
  Simulator(const GridGeometry& g, const KineticParams& p, const DiffusionPair& d, double dt, int threads = 1,
            TimeScheme scheme = TimeScheme::Heun, bool reaction = true);

  /// One forward-Euler step of size dt. A negative density makes the step
  /// retry as 2, 4, ... 32 sub-steps; after that, or on a non-finite or
  /// > 1e6 value, throws BlowUp. `state` is untouched on failure.
  void step(FieldState& state);
  void advance(FieldState& state, std::uint64_t steps);

  double dt() const { return dt_; }
  int halvings() const { return halvings_; }
  const GridGeometry& geometry() const { return g_; }

 private:
  enum class Outcome { Ok, Negative, Blown };
  // out = base + dt * (w_prev * prev_rate + w_new * rate(in)); the rate of
  // `in` is also written to `rate` when non-null.
  Outcome kernel(const FieldState& in, const FieldState& base, FieldState& out, double dt, double w_new,
                 const FieldState* prev_rate, double w_prev, FieldState* rate) const;
  Outcome advance_once(const FieldState& in, FieldState& out, double dt);
  bool substep(FieldState& state, double dt, int depth);

  const GridGeometry& g_;
  KineticParams p_;
  DiffusionPair d_;
  double dt_;
  int threads_;
  TimeScheme scheme_;
  bool reaction_;
  FieldState scratch_, stage_, rate_;
  int halvings_ = 0;
};

/// Single step on a copy (convenience form of Simulator::step).
FieldState step(const FieldState& state, const KineticParams& p, const DiffusionPair& d, double dt,
                const GridGeometry& g, TimeScheme scheme = TimeScheme::Heun);

SeriesRow series_row(const FieldState& s, const GridGeometry& g);

/// Integrates to cfg.t_end, sampling region means every series_every and
/// snapshots every snapshot_every; stops early on a passing stationarity
/// check between consecutive snapshots when cfg.stop_on_stationary. Without
/// early stopping the verdict is Stationary when the final check passed.
/// On BlowUp the state reached before the failing step is copied to
/// `last_good` (when given) and the error is rethrown.
RunResult run(const SimConfig& cfg, const FieldState& ic, const KineticParams& p, const DiffusionPair& d,
              const GridGeometry& g, FieldState* last_good = nullptr);

}  // namespace rdlab
