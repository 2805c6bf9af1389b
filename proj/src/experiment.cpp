#include "rdlab/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include "rdlab/error.hpp"
#include "rdlab/io.hpp"

namespace rdlab {

namespace {

std::string fmt(double x) { return format_double(x); }

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create output directory '" + dir + "': " + ec.message());
}

std::string snapshot_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snap_%06zu.rds", index);
  return buf;
}

template <class F>
std::string attempt(F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    return std::string("unavailable (") + error_code_name(e.code()) + ": " + e.what() + ")";
  }
}

// First sign change of trace(J*) on a coarse a-grid, refined by bisection.
std::optional<double> scan_hopf_a(const KineticParams& p, double a_lo, double a_hi, int n) {
  double prev_a = 0.0, prev_tr = 0.0;
  bool have = false;
  for (int i = 0; i <= n; ++i) {
    const double a = a_lo + (a_hi - a_lo) * i / n;
    KineticParams q = p;
    q.a = a;
    double tr;
    try {
      tr = jacobian_at(primary_equilibrium(q), q).trace();
    } catch (const Error&) {
      have = false;
      continue;
    }
    if (have && (prev_tr > 0.0) != (tr > 0.0)) {
      try {
        return hopf_threshold_a(p, prev_a, a);
      } catch (const Error&) {
        return std::nullopt;
      }
    }
    prev_a = a;
    prev_tr = tr;
    have = true;
  }
  return std::nullopt;
}

std::string mode_text(const Mode& m) {
  return "(" + std::to_string(m.n1) + "," + std::to_string(m.n2) + ") k=" + fmt(m.k);
}

}  // namespace

GridGeometry build_geometry(const ExperimentConfig& cfg) { return rasterize(cfg.domain, cfg.h); }

FieldState build_initial_state(const ExperimentConfig& cfg, const GridGeometry& g) {
  const Equilibrium eq = primary_equilibrium(cfg.params);
  if (cfg.ic.kind == IcKind::Noise) return make_ic_noise(eq, cfg.sim.epsilon, cfg.sim.seed, g, cfg.ic.region);
  if (cfg.ic.path.empty()) throw Error(ErrorCode::Config, "ic.kind = snapshot needs ic.path");
  const Snapshot snap = read_snapshot(cfg.ic.path);
  return make_ic_from_snapshot(snap.state, snap.nx, snap.ny, cfg.ic.fill, eq, g);
}

double mode_length(const ExperimentConfig& cfg, const GridGeometry& g) {
  if (cfg.modes_L > 0.0) return cfg.modes_L;
  if (const auto box = rectangular_box(g, RegionSel::D1)) return box->width() * g.h();
  for (const auto& [r, label] : labelled_rects(cfg.domain))
    if (label == CellLabel::D1) return r.x1 - r.x0;
  throw Error(ErrorCode::Config, "cannot infer modes.L from the domain");
}

std::string cmd_analyze(const ExperimentConfig& cfg) {
  const KineticParams& p = cfg.params;
  p.validate();
  cfg.diffusion.validate();
  std::ostringstream out;
  out << "parameters: r=" << fmt(p.r) << " f=" << fmt(p.f) << " m=" << fmt(p.m) << " b=" << fmt(p.b)
      << " c=" << fmt(p.c) << " q=" << fmt(p.q) << " p=" << fmt(p.p) << " s=" << fmt(p.s) << " a=" << fmt(p.a) << "\n";
  out << "diffusion: d1=" << fmt(cfg.diffusion.d1) << " d2=" << fmt(cfg.diffusion.d2) << "\n";
  out << "allee regime: " << to_string(allee_regime(p)) << "\n";

  const auto all = coexistence_equilibria(p);
  out << "coexistence equilibria: " << all.size() << "\n";
  for (const auto& e : all) out << "  u*=" << fmt(e.u_star) << " v*=" << fmt(e.v_star) << "\n";
  const Equilibrium eq = primary_equilibrium(p);
  const JacobianEntries j = jacobian_at(eq, p);
  out << "primary equilibrium: u*=" << fmt(eq.u_star) << " v*=" << fmt(eq.v_star) << "\n";
  out << "jacobian: a11=" << fmt(j.a11) << " a12=" << fmt(j.a12) << " a21=" << fmt(j.a21) << " a22=" << fmt(j.a22)
      << "\n";
  out << "trace=" << fmt(j.trace()) << " det=" << fmt(j.det()) << "\n";
  out << "local stability: " << (is_locally_stable(j) ? "stable" : "unstable") << "\n";

  out << "hopf threshold s_H: " << attempt([&] { return fmt(hopf_threshold_s(p)); }) << "\n";
  out << "hopf threshold a_H (s fixed, a in [0.05, 5]): " << attempt([&] {
    const auto a = scan_hopf_a(p, 0.05, 5.0, 200);
    return a ? fmt(*a) : std::string("none in range");
  }) << "\n";
  out << "first lyapunov number at s_H: " << attempt([&] {
    KineticParams q = p;
    q.s = hopf_threshold_s(p);
    const double sigma = first_lyapunov_number(q);
    return fmt(sigma) + (sigma < 0.0 ? " (Hopf-bifurcation is super-critical)" : " (Hopf-bifurcation is sub-critical)");
  }) << "\n";

  out << "turing threshold d2T: " << attempt([&] { return fmt(turing_boundary_d2(j, cfg.diffusion.d1)); }) << "\n";
  const auto band = unstable_band(j, cfg.diffusion);
  if (!band) {
    out << "unstable band: none\n";
  } else {
    out << "unstable band: (" << fmt(band->k1) << ", " << fmt(band->k2) << ")\n";
    const auto curve = dispersion_curve(j, cfg.diffusion);
    out << "dispersion argmax: k=" << fmt(curve.k_argmax) << " re_lambda=" << fmt(curve.re_lambda_at_argmax) << "\n";
  }
  out << "critical wavenumber k_c: " << attempt([&] { return fmt(critical_wavenumber(j, cfg.diffusion)); }) << "\n";
  if (band) {
    out << attempt([&] {
      const GridGeometry g = build_geometry(cfg);
      const double L = mode_length(cfg, g);
      const ModeSet ms = admissible_modes(j, cfg.diffusion, L);
      std::string s = "modes on L=" + fmt(L) + ": " + std::to_string(ms.admissible.size()) + " admissible\n";
      s += "dominant mode: " + mode_text(ms.dominant) + "\n";
      s += "nearest modes (|k - " + fmt(ms.k_argmax) + "| <= " + fmt(ms.nearest_tol) + "): " +
           std::to_string(ms.nearest.size()) + ", closest";
      for (std::size_t i = 0; i < ms.nearest.size() && i < 12; ++i)
        s += " (" + std::to_string(ms.nearest[i].n1) + "," + std::to_string(ms.nearest[i].n2) + ")";
      return s;
    }) << "\n";
  }
  return out.str();
}

std::string cmd_dispersion(const ExperimentConfig& cfg) {
  cfg.params.validate();
  cfg.diffusion.validate();
  if (cfg.dispersion_samples < 2) throw Error(ErrorCode::Config, "dispersion.samples must be at least 2");
  const JacobianEntries j = jacobian_at(primary_equilibrium(cfg.params), cfg.params);
  const auto band = unstable_band(j, cfg.diffusion);
  double k_max = cfg.dispersion_k_max;
  if (k_max <= 0.0) k_max = band ? 2.0 * band->k2 : 2.0;
  const auto res = sample_dispersion(j, cfg.diffusion, k_max, cfg.dispersion_samples);
  std::string out = config_comment_block(cfg);
  if (band) {
    out += "# band = " + fmt(band->k1) + "," + fmt(band->k2) + "\n";
    out += "# k_argmax = " + fmt(res.k_argmax) + "\n";
  } else {
    out += "# no unstable band\n";
  }
  out += "k,re_lambda_max,im_lambda\n";
  for (const auto& s : res.samples) out += fmt(s.k) + "," + fmt(s.re_lambda_max) + "," + fmt(s.im_lambda) + "\n";
  return out;
}

MapOutput cmd_map(const ExperimentConfig& cfg) {
  if (cfg.map_res_a < 1 || cfg.map_res_d2 < 1) throw Error(ErrorCode::Config, "map resolution must be positive");
  if (!(cfg.map_a_min <= cfg.map_a_max) || !(cfg.map_d2_min <= cfg.map_d2_max))
    throw Error(ErrorCode::Config, "map ranges must satisfy min <= max");
  const RegimeMap m = regime_map(cfg.params, cfg.diffusion.d1, {cfg.map_a_min, cfg.map_a_max},
                                 {cfg.map_d2_min, cfg.map_d2_max}, cfg.map_res_a, cfg.map_res_d2);
  MapOutput out;
  out.grid_csv = config_comment_block(cfg);
  if (m.hopf_a) out.grid_csv += "# hopf_a = " + fmt(*m.hopf_a) + "\n";
  out.grid_csv += "a,d2,regime\n";
  for (std::size_t i2 = 0; i2 < m.d2_values.size(); ++i2)
    for (std::size_t ia = 0; ia < m.a_values.size(); ++ia) {
      const Regime r = m.at(ia, i2);
      if (r == Regime::Unknown) ++out.unknown_cells;
      out.grid_csv += fmt(m.a_values[ia]) + "," + fmt(m.d2_values[i2]) + "," + to_string(r) + "\n";
    }
  out.boundary_csv = config_comment_block(cfg) + "a,d2T\n";
  for (const auto& [a, d2] : m.turing_boundary) out.boundary_csv += fmt(a) + "," + fmt(d2) + "\n";
  return out;
}

namespace {

std::string summary_text(const ExperimentConfig& cfg, const SimulateOutput& o, const HeaderEntries& extra) {
  std::string s = config_comment_block(cfg, extra);
  auto kv = [&](const std::string& k, const std::string& v) { s += k + " = " + v + "\n"; };
  const RunResult& r = o.run;
  kv("verdict", to_string(r.verdict));
  kv("t_final", fmt(r.snapshots.back().t));
  kv("t_settle", fmt(r.t_settle));
  kv("settle_D1", fmt(r.settle_d1));
  kv("settle_D2", fmt(r.settle_d2));
  kv("settle_all", fmt(r.settle_all));
  kv("dt", fmt(r.dt));
  kv("steps", std::to_string(r.steps));
  kv("halvings", std::to_string(r.halvings));
  kv("pattern", to_string(o.pattern.tag));
  kv("confidence", fmt(o.pattern.confidence));
  kv("skewness", fmt(o.pattern.skewness));
  kv("std_u", fmt(o.pattern.std_dev));
  if (o.spectrum) {
    kv("spectrum_region", to_string(o.spectrum_region));
    kv("k_peak", fmt(o.spectrum->k_peak));
    kv("k_centroid", fmt(o.spectrum->k_centroid));
    kv("bin_width", fmt(o.spectrum->bin_width));
    kv("band_ok", o.spectrum->band_ok ? (*o.spectrum->band_ok ? "true" : "false") : "n/a");
    kv("spots_high", std::to_string(o.spectrum->spots_high));
    kv("spots_low", std::to_string(o.spectrum->spots_low));
  }
  if (o.transient) {
    const auto& t = *o.transient;
    kv("onset_D2", t.onset ? "true" : "false (NeverOnset)");
    kv("t_onset_D2", fmt(t.t_onset_d2));
    kv("t_settle_D2", fmt(t.t_settle_d2));
    kv("peak_amplitude_D2", fmt(t.peak_amplitude_d2));
    kv("phase_start_D2", fmt(t.t_phase_start));
    kv("phase_end_D2", fmt(t.t_phase_end));
    kv("amplitude_D1_early", fmt(t.amplitude_d1_early));
  }
  return s;
}

SimulateOutput simulate_impl(const ExperimentConfig& cfg, const HeaderEntries& extra) {
  cfg.params.validate();
  cfg.diffusion.validate();
  const GridGeometry g = build_geometry(cfg);
  const Equilibrium eq = primary_equilibrium(cfg.params);
  const FieldState ic = build_initial_state(cfg, g);
  const std::string& dir = cfg.output_dir;
  ensure_dir(dir);
  write_text(join_path(dir, "config.txt"), emit_config(cfg));
  write_mask(join_path(dir, "mask.pgm"), g);

  SimulateOutput o;
  FieldState last_good;
  try {
    o.run = run(cfg.sim, ic, cfg.params, cfg.diffusion, g, &last_good);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::BlowUp && !last_good.u.empty()) {
      HeaderEntries h = extra;
      h.emplace_back("error", e.what());
      write_snapshot(join_path(dir, "blowup.rds"), last_good, g, cfg, h);
    }
    throw;
  }
  const RunResult& r = o.run;

  write_series(join_path(dir, "series.csv"), r.series, cfg, extra);
  if (cfg.write_snapshots)
    for (std::size_t i = 0; i < r.snapshots.size(); ++i)
      write_snapshot(join_path(dir, snapshot_name(i)), r.snapshots[i], g, cfg, extra);

  const FieldState& last = r.snapshots.back();
  o.pattern = classify_pattern(last, eq, g, r.verdict, cfg.classifier);

  const auto band = unstable_band(jacobian_at(eq, cfg.params), cfg.diffusion);
  for (RegionSel region : {RegionSel::All, RegionSel::D1}) {
    if (!rectangular_box(g, region)) continue;
    o.spectrum = radial_spectrum(last.u, g, region, band, cfg.window);
    o.spectrum_region = region;
    break;
  }
  if (!region_cells(g, RegionSel::D2).empty()) {
    o.transient = transient_metrics(r.series, eq, cfg.transient);
    const auto& t = *o.transient;
    std::string csv = config_comment_block(cfg, extra);
    csv += "onset,t_onset_D2,t_settle_D2,t_peak_D2,phase_start_D2,phase_end_D2,peak_amplitude_D2,amplitude_D1_early,amplitude_D1_late\n";
    csv += std::string(t.onset ? "true" : "false") + "," + fmt(t.t_onset_d2) + "," + fmt(t.t_settle_d2) + "," +
           fmt(t.t_peak_d2) + "," + fmt(t.t_phase_start) + "," +
           fmt(t.t_phase_end) + "," + fmt(t.peak_amplitude_d2) + "," + fmt(t.amplitude_d1_early) + "," +
           fmt(t.amplitude_d1_late) + "\n";
    write_text(join_path(dir, "transient.csv"), csv);
  }

  HeaderEntries fin = extra;
  fin.emplace_back("verdict", to_string(r.verdict));
  write_snapshot(join_path(dir, "final.rds"), last, g, cfg, fin);
  if (cfg.write_pgm) {
    write_pgm(join_path(dir, "u_final.pgm"), last.u, g.nx(), g.ny());
    write_pgm(join_path(dir, "u_final_spots.pgm"), last.u, g.nx(), g.ny(), true, 0.5);
  }
  o.summary = summary_text(cfg, o, extra);
  write_text(join_path(dir, "summary.txt"), o.summary);
  return o;
}

}  // namespace

SimulateOutput cmd_simulate(const ExperimentConfig& cfg) { return simulate_impl(cfg, {}); }

SimulateOutput cmd_resume(ExperimentConfig cfg, const std::string& snapshot_path, Fill fill) {
  cfg.ic.kind = IcKind::Snapshot;
  cfg.ic.path = snapshot_path;
  cfg.ic.fill = fill;
  return simulate_impl(cfg, {{"source_snapshot", snapshot_path}, {"fill", to_string(fill)}});
}

namespace {

struct LoadedSnapshot {
  Snapshot snap;
  ExperimentConfig cfg;
  GridGeometry g;
};

LoadedSnapshot load_with_geometry(const std::string& path) {
  LoadedSnapshot out{read_snapshot(path), {}, {}};
  out.cfg = snapshot_config(out.snap);
  out.g = build_geometry(out.cfg);
  if (out.g.nx() != out.snap.nx || out.g.ny() != out.snap.ny)
    throw Error(ErrorCode::ShapeMismatch, "snapshot '" + path + "' does not match its own domain");
  return out;
}

}  // namespace

std::string cmd_classify(const std::vector<std::string>& snapshot_paths) {
  if (snapshot_paths.empty()) throw Error(ErrorCode::InvalidArgument, "classify needs at least one snapshot");
  const auto last = load_with_geometry(snapshot_paths.back());
  Verdict verdict = Verdict::Stationary;
  std::string basis = "assumed (single snapshot without verdict)";
  if (snapshot_paths.size() >= 2) {
    const auto prev = load_with_geometry(snapshot_paths[snapshot_paths.size() - 2]);
    if (!(prev.g == last.g)) throw Error(ErrorCode::ShapeMismatch, "snapshots are on different grids");
    const bool still = stationarity_check(prev.snap.state, last.snap.state, last.cfg.sim.stationary_tol, last.g);
    verdict = still ? Verdict::Stationary : Verdict::RanToEnd;
    basis = "stationarity check between the last two snapshots";
  } else if (last.snap.has("verdict")) {
    verdict = last.snap.get("verdict") == "Stationary" ? Verdict::Stationary : Verdict::RanToEnd;
    basis = "snapshot header";
  }
  const Equilibrium eq = primary_equilibrium(last.cfg.params);
  const PatternClass pc = classify_pattern(last.snap.state, eq, last.g, verdict, last.cfg.classifier);
  std::string s;
  s += "snapshot = " + snapshot_paths.back() + "\n";
  s += "t = " + fmt(last.snap.state.t) + "\n";
  s += "verdict = " + std::string(to_string(verdict)) + "\n";
  s += "verdict_basis = " + basis + "\n";
  s += "pattern = " + std::string(to_string(pc.tag)) + "\n";
  s += "confidence = " + fmt(pc.confidence) + "\n";
  s += "skewness = " + fmt(pc.skewness) + "\n";
  s += "std_u = " + fmt(pc.std_dev) + "\n";
  const auto band = unstable_band(jacobian_at(eq, last.cfg.params), last.cfg.diffusion);
  for (RegionSel region : {RegionSel::All, RegionSel::D1}) {
    if (!rectangular_box(last.g, region)) continue;
    const auto sp = radial_spectrum(last.snap.state.u, last.g, region, band, last.cfg.window);
    s += "spectrum_region = " + std::string(to_string(region)) + "\n";
    s += "k_peak = " + fmt(sp.k_peak) + "\n";
    s += "band_ok = " + std::string(sp.band_ok ? (*sp.band_ok ? "true" : "false") : "n/a") + "\n";
    s += "spot_count = " + std::to_string(sp.spot_count) + "\n";
    break;
  }
  return s;
}

std::string cmd_series(const std::vector<std::string>& snapshot_paths) {
  if (snapshot_paths.empty()) throw Error(ErrorCode::InvalidArgument, "series needs at least one snapshot");
  TimeSeries rows;
  ExperimentConfig cfg;
  for (std::size_t i = 0; i < snapshot_paths.size(); ++i) {
    const auto s = load_with_geometry(snapshot_paths[i]);
    if (i == 0) cfg = s.cfg;
    FieldState st = s.snap.state;
    rows.push_back(series_row(st, s.g));
  }
  return series_csv(rows, cfg);
}

}  // namespace rdlab
