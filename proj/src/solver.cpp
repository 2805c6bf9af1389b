#include "rdlab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rdlab/error.hpp"
#include "rdlab/rng.hpp"

namespace rdlab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kBlowUpLimit = 1e6;
constexpr int kMaxHalvings = 5;

double sum_pairwise(const double* x, std::size_t n) {
  if (n <= 32) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i];
    return acc;
  }
  const std::size_t half = n / 2;
  return sum_pairwise(x, half) + sum_pairwise(x + half, n - half);
}

std::pair<double, double> region_mean(const FieldState& s, const std::vector<std::int32_t>& cells,
                                      std::vector<double>& buf_u, std::vector<double>& buf_v) {
  if (cells.empty()) return {kNaN, kNaN};
  buf_u.resize(cells.size());
  buf_v.resize(cells.size());
  for (std::size_t k = 0; k < cells.size(); ++k) {
    buf_u[k] = s.u[cells[k]];
    buf_v[k] = s.v[cells[k]];
  }
  const double n = static_cast<double>(cells.size());
  return {stable_sum(buf_u) / n, stable_sum(buf_v) / n};
}

// Long-lived per-geometry region lists for series sampling.
struct RegionCells {
  explicit RegionCells(const GridGeometry& g)
      : d1(region_cells(g, RegionSel::D1)), d2(region_cells(g, RegionSel::D2)), all(g.interior_cells()) {}
  std::vector<std::int32_t> d1, d2, all;
};

SeriesRow sample(const FieldState& s, const RegionCells& rc) {
  std::vector<double> bu, bv;
  SeriesRow row;
  row.t = s.t;
  std::tie(row.mean_u_d1, row.mean_v_d1) = region_mean(s, rc.d1, bu, bv);
  std::tie(row.mean_u_d2, row.mean_v_d2) = region_mean(s, rc.d2, bu, bv);
  std::tie(row.mean_u_all, row.mean_v_all) = region_mean(s, rc.all, bu, bv);
  return row;
}

double max_rate(const FieldState& s1, const FieldState& s2, const std::vector<std::int32_t>& cells) {
  const double dt = s2.t - s1.t;
  double worst = 0.0;
  for (const auto c : cells) {
    worst = std::max(worst, std::abs(s2.u[c] - s1.u[c]));
    worst = std::max(worst, std::abs(s2.v[c] - s1.v[c]));
  }
  return worst / dt;
}

}  // namespace

const char* to_string(Verdict v) noexcept { return v == Verdict::Stationary ? "Stationary" : "RanToEnd"; }

const char* to_string(TimeScheme scheme) noexcept { return scheme == TimeScheme::Euler ? "euler" : "heun"; }

TimeScheme parse_scheme(const std::string& text) {
  if (text == "euler") return TimeScheme::Euler;
  if (text == "heun") return TimeScheme::Heun;
  throw Error(ErrorCode::Config, "time scheme must be 'euler' or 'heun', got '" + text + "'");
}

const char* to_string(Fill fill) noexcept { return fill == Fill::Zero ? "zero" : "homogeneous"; }

Fill parse_fill(const std::string& text) {
  if (text == "zero" || text == "Zero") return Fill::Zero;
  if (text == "homogeneous" || text == "Homogeneous") return Fill::Homogeneous;
  throw Error(ErrorCode::Config, "fill must be 'zero' or 'homogeneous', got '" + text + "'");
}

double stable_dt(double h, const DiffusionPair& d, double safety) {
  return safety * h * h / (4.0 * std::max(d.d1, d.d2));
}

double effective_dt(const SimConfig& cfg, double h, const DiffusionPair& d) {
  if (!(cfg.series_every > 0.0) || !(cfg.snapshot_every > 0.0) || !(cfg.t_end >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "cadences must be positive and t_end non-negative");
  }
  if (!(cfg.safety > 0.0) || cfg.safety > 1.0) throw Error(ErrorCode::InvalidArgument, "safety must lie in (0, 1]");
  const double bound = stable_dt(h, d, cfg.safety);
  const double want = (cfg.dt > 0.0) ? std::min(cfg.dt, bound) : bound;
  const double sub = std::ceil(cfg.series_every / want - 1e-9);
  return cfg.series_every / sub;
}

FieldState homogeneous_state(const Equilibrium& eq, const GridGeometry& g) {
  FieldState s;
  s.u.assign(g.cell_count(), kNaN);
  s.v.assign(g.cell_count(), kNaN);
  for (const auto c : g.interior_cells()) {
    s.u[c] = eq.u_star;
    s.v[c] = eq.v_star;
  }
  return s;
}

FieldState make_ic_noise(const Equilibrium& eq, double epsilon, std::uint64_t seed, const GridGeometry& g,
                         RegionSel region) {
  if (!(epsilon >= 0.0)) throw Error(ErrorCode::InvalidArgument, "noise amplitude must be non-negative");
  FieldState s = homogeneous_state(eq, g);
  if (epsilon == 0.0) return s;
  const auto cells = region_cells(g, region);
  CounterRng rng(seed, 0);
  for (const auto c : cells) s.u[c] = std::max(0.0, eq.u_star + epsilon * rng.next_normal());
  for (const auto c : cells) s.v[c] = std::max(0.0, eq.v_star + epsilon * rng.next_normal());
  return s;
}

FieldState make_ic_from_snapshot(const FieldState& snap, int snap_nx, int snap_ny, Fill fill, const Equilibrium& eq,
                                 const GridGeometry& g) {
  const auto snap_cells = static_cast<std::size_t>(snap_nx) * static_cast<std::size_t>(snap_ny);
  if (snap_nx <= 0 || snap_ny <= 0 || snap.u.size() != snap_cells || snap.v.size() != snap_cells) {
    throw Error(ErrorCode::ShapeMismatch, "snapshot planes do not match their stated dimensions");
  }
  const auto d1_box = rectangular_box(g, RegionSel::D1);
  int di = 0, dj = 0;
  if (snap_nx == g.nx() && snap_ny == g.ny()) {
    // same grid
  } else if (d1_box && snap_nx == d1_box->width() && snap_ny == d1_box->height()) {
    di = d1_box->i0;
    dj = d1_box->j0;
  } else {
    std::ostringstream msg;
    msg << "snapshot grid " << snap_nx << "x" << snap_ny << " matches neither the target grid " << g.nx() << "x"
        << g.ny() << " nor its D1 box";
    throw Error(ErrorCode::ShapeMismatch, msg.str());
  }

  FieldState s = homogeneous_state(fill == Fill::Zero ? Equilibrium{0.0, 0.0} : eq, g);
  for (const auto c : region_cells(g, RegionSel::D1)) {
    const int i = c % g.nx() - di, j = c / g.nx() - dj;
    const auto src = static_cast<std::size_t>(j) * snap_nx + i;
    if (!std::isfinite(snap.u[src]) || !std::isfinite(snap.v[src])) {
      throw Error(ErrorCode::ShapeMismatch, "snapshot has no value at a D1 cell");
    }
    s.u[c] = snap.u[src];
    s.v[c] = snap.v[src];
  }
  return s;
}

std::vector<double> laplacian(std::span<const double> field, const GridGeometry& g) {
  if (field.size() != g.cell_count()) throw Error(ErrorCode::ShapeMismatch, "field size does not match the grid");
  std::vector<double> out(g.cell_count(), kNaN);
  const double inv_h2 = 1.0 / (g.h() * g.h());
  const auto& cells = g.interior_cells();
  const auto& nb = g.neighbours();
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const double c = field[cells[k]];
    out[cells[k]] = (field[nb[k][0]] + field[nb[k][1]] + field[nb[k][2]] + field[nb[k][3]] - 4.0 * c) * inv_h2;
  }
  return out;
}

double stable_sum(std::span<const double> values) { return sum_pairwise(values.data(), values.size()); }

std::pair<double, double> spatial_average(const FieldState& s, const GridGeometry& g, RegionSel region) {
  const auto cells = region_cells(g, region);
  if (cells.empty()) throw Error(ErrorCode::EmptyRegion, std::string("region ") + to_string(region) + " is empty");
  std::vector<double> bu, bv;
  return region_mean(s, cells, bu, bv);
}

bool stationarity_check(const FieldState& s1, const FieldState& s2, double tol, const GridGeometry& g,
                        RegionSel region) {
  if (!(s2.t > s1.t)) {
    // Identical states are trivially stationary; otherwise the rate is undefined.
    return s1.u == s2.u && s1.v == s2.v;
  }
  return max_rate(s1, s2, region_cells(g, region)) < tol;
}

Simulator::Simulator(const GridGeometry& g, const KineticParams& p, const DiffusionPair& d, double dt, int threads,
                     TimeScheme scheme, bool reaction)
    : g_(g), p_(p), d_(d), dt_(dt), threads_(std::max(1, threads)), scheme_(scheme), reaction_(reaction) {
  p_.validate();
  d_.validate();
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "time step must be positive");
}

Simulator::Outcome Simulator::kernel(const FieldState& in, const FieldState& base, FieldState& out, double dt,
                                     double w_new, const FieldState* prev_rate, double w_prev,
                                     FieldState* rate) const {
  const auto& cells = g_.interior_cells();
  const auto& nb = g_.neighbours();
  const auto n = static_cast<std::int64_t>(cells.size());
  const double inv_h2 = 1.0 / (g_.h() * g_.h());
  const double du = d_.d1 * inv_h2, dv = d_.d2 * inv_h2;
  const double r = p_.r, f = p_.f, m = p_.m, b = p_.b, c = p_.c, q = p_.q, pp = p_.p, s = p_.s, a = p_.a;
  const double rx = reaction_ ? 1.0 : 0.0;
  const double* __restrict ui = in.u.data();
  const double* __restrict vi = in.v.data();
  const double* __restrict ub = base.u.data();
  const double* __restrict vb = base.v.data();
  const double* __restrict pu = prev_rate ? prev_rate->u.data() : nullptr;
  const double* __restrict pv = prev_rate ? prev_rate->v.data() : nullptr;
  double* __restrict ru = rate ? rate->u.data() : nullptr;
  double* __restrict rv = rate ? rate->v.data() : nullptr;
  double* __restrict uo = out.u.data();
  double* __restrict vo = out.v.data();
  int negative = 0, blown = 0;

#if defined(RDLAB_HAVE_OPENMP)
#pragma omp parallel for schedule(static) num_threads(threads_) reduction(| : negative, blown) if (threads_ > 1)
#endif
  for (std::int64_t k = 0; k < n; ++k) {
    const auto cell = cells[k];
    const auto& e = nb[k];
    const double uc = ui[cell], vc = vi[cell];
    const double lu = ui[e[0]] + ui[e[1]] + ui[e[2]] + ui[e[3]] - 4.0 * uc;
    const double lv = vi[e[0]] + vi[e[1]] + vi[e[2]] + vi[e[3]] - 4.0 * vc;
    const double hu = c * uc / (uc + a);
    const double f1 = uc * (r - f * uc - m / (b + uc)) - hu * vc;
    const double f2 = s * vc * (hu - q - pp * vc);
    const double gu = du * lu + rx * f1;
    const double gv = dv * lv + rx * f2;
    if (ru) {
      ru[cell] = gu;
      rv[cell] = gv;
    }
    const double iu = pu ? w_prev * pu[cell] + w_new * gu : w_new * gu;
    const double iv = pv ? w_prev * pv[cell] + w_new * gv : w_new * gv;
    const double un = ub[cell] + dt * iu;
    const double vn = vb[cell] + dt * iv;
    uo[cell] = un;
    vo[cell] = vn;
    negative |= (un < 0.0) | (vn < 0.0);
    blown |= !(std::abs(un) <= kBlowUpLimit) | !(std::abs(vn) <= kBlowUpLimit);
  }
  if (blown) return Outcome::Blown;
  return negative ? Outcome::Negative : Outcome::Ok;
}

Simulator::Outcome Simulator::advance_once(const FieldState& in, FieldState& out, double dt) {
  if (scheme_ == TimeScheme::Euler) return kernel(in, in, out, dt, 1.0, nullptr, 0.0, nullptr);
  // Heun: predictor with the rate at `in`, corrector averaging both rates.
  const auto predictor = kernel(in, in, stage_, dt, 1.0, nullptr, 0.0, &rate_);
  if (predictor == Outcome::Blown) return predictor;
  return kernel(stage_, in, out, dt, 0.5, &rate_, 0.5, nullptr);
}

bool Simulator::substep(FieldState& state, double dt, int depth) {
  if (scratch_.u.size() != state.u.size()) {
    // Outside cells stay NaN in every buffer; the kernels only touch interior cells.
    scratch_ = state;
    stage_ = state;
    rate_ = state;
  }
  const auto outcome = advance_once(state, scratch_, dt);
  if (outcome == Outcome::Blown) {
    std::ostringstream msg;
    msg << "density left [0, 1e6] or became non-finite at t=" << state.t;
    throw Error(ErrorCode::BlowUp, msg.str());
  }
  if (outcome == Outcome::Ok) {
    std::swap(state.u, scratch_.u);
    std::swap(state.v, scratch_.v);
    return true;
  }
  if (depth >= kMaxHalvings) return false;
  ++halvings_;
  FieldState trial = state;
  for (int half = 0; half < 2; ++half) {
    if (!substep(trial, 0.5 * dt, depth + 1)) return false;
  }
  state.u = std::move(trial.u);
  state.v = std::move(trial.v);
  return true;
}

void Simulator::step(FieldState& state) {
  if (state.u.size() != g_.cell_count() || state.v.size() != g_.cell_count()) {
    throw Error(ErrorCode::ShapeMismatch, "state does not match the simulator grid");
  }
  if (!substep(state, dt_, 0)) {
    std::ostringstream msg;
    msg << "negative density persists after " << kMaxHalvings << " step halvings at t=" << state.t;
    throw Error(ErrorCode::BlowUp, msg.str());
  }
  state.t += dt_;
}

void Simulator::advance(FieldState& state, std::uint64_t steps) {
  for (std::uint64_t i = 0; i < steps; ++i) step(state);
}

FieldState step(const FieldState& state, const KineticParams& p, const DiffusionPair& d, double dt,
                const GridGeometry& g, TimeScheme scheme) {
  Simulator sim(g, p, d, dt, 1, scheme);
  FieldState out = state;
  sim.step(out);
  return out;
}

SeriesRow series_row(const FieldState& s, const GridGeometry& g) { return sample(s, RegionCells(g)); }

RunResult run(const SimConfig& cfg, const FieldState& ic, const KineticParams& p, const DiffusionPair& d,
              const GridGeometry& g, FieldState* last_good) {
  const double dt = effective_dt(cfg, g.h(), d);
  const double ratio = cfg.snapshot_every / cfg.series_every;
  const auto per_snapshot = static_cast<std::uint64_t>(std::llround(ratio));
  if (per_snapshot == 0 || std::abs(ratio - static_cast<double>(per_snapshot)) > 1e-9 * ratio) {
    throw Error(ErrorCode::InvalidArgument, "snapshot_every must be a whole multiple of series_every");
  }
  const auto steps_per_sample = static_cast<std::uint64_t>(std::llround(cfg.series_every / dt));
  const auto total_samples = static_cast<std::uint64_t>(std::floor(cfg.t_end / cfg.series_every + 1e-9));

  Simulator sim(g, p, d, dt, cfg.threads, cfg.scheme);
  const RegionCells rc(g);
  RunResult res;
  res.dt = dt;

  FieldState state = ic;
  state.t = 0.0;
  res.series.push_back(sample(state, rc));
  res.snapshots.push_back(state);

  double last_fail_d1 = -1.0, last_fail_d2 = -1.0, last_fail_all = -1.0;
  bool checked = false;
  for (std::uint64_t n = 1; n <= total_samples; ++n) {
    try {
      sim.advance(state, steps_per_sample);
    } catch (const Error&) {
      if (last_good) *last_good = state;
      throw;
    }
    res.steps += steps_per_sample;
    state.t = static_cast<double>(n) * cfg.series_every;
    res.series.push_back(sample(state, rc));
    if (n % per_snapshot != 0) continue;

    state.t = static_cast<double>(n / per_snapshot) * cfg.snapshot_every;
    const FieldState& prev = res.snapshots.back();
    const double tol = cfg.stationary_tol;
    checked = true;
    if (!(rc.d1.empty() || max_rate(prev, state, rc.d1) < tol)) last_fail_d1 = state.t;
    if (!(rc.d2.empty() || max_rate(prev, state, rc.d2) < tol)) last_fail_d2 = state.t;
    const bool still = max_rate(prev, state, rc.all) < tol;
    if (!still) last_fail_all = state.t;
    res.snapshots.push_back(state);
    if (still && cfg.stop_on_stationary) {
      res.verdict = Verdict::Stationary;
      res.t_settle = state.t;
      break;
    }
  }
  res.halvings = sim.halvings();

  const double t_last = res.snapshots.back().t;
  auto settle = [&](double last_fail, bool empty) {
    if (empty || !checked || last_fail == t_last) return kNaN;
    return last_fail < 0.0 ? res.snapshots[1].t : last_fail + cfg.snapshot_every;
  };
  res.settle_d1 = settle(last_fail_d1, rc.d1.empty());
  res.settle_d2 = settle(last_fail_d2, rc.d2.empty());
  res.settle_all = settle(last_fail_all, false);
  if (res.verdict != Verdict::Stationary && !cfg.stop_on_stationary && !std::isnan(res.settle_all)) {
    res.verdict = Verdict::Stationary;
    res.t_settle = res.settle_all;
  }
  if (res.verdict != Verdict::Stationary) res.t_settle = kNaN;
  return res;
}

}  // namespace rdlab
