#include "rdlab/diagnostics.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "rdlab/error.hpp"

namespace rdlab {

const char* to_string(PatternTag tag) noexcept {
  switch (tag) {
    case PatternTag::HotSpot: return "HotSpot";
    case PatternTag::ColdSpot: return "ColdSpot";
    case PatternTag::Labyrinthine: return "Labyrinthine";
    case PatternTag::Homogeneous: return "Homogeneous";
    case PatternTag::Dynamic: return "Dynamic";
  }
  return "?";
}

PatternClass classify_pattern(const FieldState& state, const Equilibrium& eq, const GridGeometry& g, Verdict verdict,
                              const ClassifierThresholds& th) {
  const auto& cells = g.interior_cells();
  if (cells.empty()) throw Error(ErrorCode::EmptyRegion, "classify_pattern: no interior cells");
  std::vector<double> values;
  values.reserve(cells.size());
  for (auto c : cells) values.push_back(state.u[c]);
  const double n = static_cast<double>(values.size());
  const double mean = stable_sum(values) / n;
  std::vector<double> d2(values.size()), d3(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double x = values[i] - mean;
    d2[i] = x * x;
    d3[i] = x * x * x;
  }
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double var = *lo == *hi ? 0.0 : stable_sum(d2) / n;
  const double sd = std::sqrt(var);

  PatternClass out;
  out.std_dev = sd;
  out.skewness = var > 0.0 ? (stable_sum(d3) / n) / (var * sd) : 0.0;

  const double flat = th.homogeneous_rel_std * std::abs(eq.u_star);
  if (verdict != Verdict::Stationary) {
    out.tag = PatternTag::Dynamic;
    out.confidence = 1.0;
    return out;
  }
  if (sd < flat) {
    out.tag = PatternTag::Homogeneous;
    out.confidence = flat > 0.0 ? 1.0 - sd / flat : 1.0;
    return out;
  }
  // Logistic in the distance to the nearest decision threshold, scaled by it.
  const double s = out.skewness;
  double margin;
  if (s > th.skew) {
    out.tag = PatternTag::HotSpot;
    margin = s - th.skew;
  } else if (s < -th.skew) {
    out.tag = PatternTag::ColdSpot;
    margin = -th.skew - s;
  } else {
    out.tag = PatternTag::Labyrinthine;
    margin = th.skew - std::abs(s);
  }
  out.confidence = 1.0 / (1.0 + std::exp(-8.0 * margin / th.skew));
  return out;
}

namespace {

int count_components(const std::vector<signed char>& mark, int w, int hgt, signed char which) {
  std::vector<char> seen(mark.size(), 0);
  std::vector<int> stack;
  int count = 0;
  for (int start = 0; start < w * hgt; ++start) {
    if (mark[start] != which || seen[start]) continue;
    ++count;
    seen[start] = 1;
    stack.push_back(start);
    while (!stack.empty()) {
      const int c = stack.back();
      stack.pop_back();
      const int i = c % w, j = c / w;
      const int nb[4][2] = {{i + 1, j}, {i - 1, j}, {i, j + 1}, {i, j - 1}};
      for (const auto& q : nb) {
        if (q[0] < 0 || q[0] >= w || q[1] < 0 || q[1] >= hgt) continue;
        const int k = q[1] * w + q[0];
        if (mark[k] == which && !seen[k]) {
          seen[k] = 1;
          stack.push_back(k);
        }
      }
    }
  }
  return count;
}

double taper(int i, int n) {
  // Cosine ramp over the outer tenth of each side.
  const double edge = std::max(1.0, 0.1 * n);
  const double x = std::min(i + 0.5, n - i - 0.5);
  if (x >= edge) return 1.0;
  return 0.5 * (1.0 - std::cos(std::numbers::pi * x / edge));
}

}  // namespace

SpectralSummary radial_spectrum(std::span<const double> field, const GridGeometry& g, RegionSel region,
                                std::optional<UnstableBand> band, SpectrumWindow window) {
  if (field.size() != g.cell_count()) throw Error(ErrorCode::ShapeMismatch, "radial_spectrum: field size");
  const auto box = rectangular_box(g, region);
  if (!box) throw Error(ErrorCode::RegionNotRectangular, "radial_spectrum: region is not a rectangle");
  const int w = box->width(), hgt = box->height();
  if (w < 2 || hgt < 2) throw Error(ErrorCode::DegenerateDomain, "radial_spectrum: region too small");

  std::vector<double> x(static_cast<std::size_t>(w) * hgt);
  for (int j = 0; j < hgt; ++j)
    for (int i = 0; i < w; ++i) x[static_cast<std::size_t>(j) * w + i] = field[g.index(box->i0 + i, box->j0 + j)];
  const double mean = stable_sum(x) / static_cast<double>(x.size());
  std::vector<double> dev(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) dev[k] = x[k] - mean;
  std::vector<double> sq(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) sq[k] = dev[k] * dev[k];
  const double sd = std::sqrt(stable_sum(sq) / static_cast<double>(x.size()));

  SpectralSummary out;
  {
    std::vector<signed char> mark(x.size(), 0);
    for (std::size_t k = 0; k < x.size(); ++k) {
      if (sd > 0.0 && dev[k] > 0.5 * sd) mark[k] = 1;
      if (sd > 0.0 && dev[k] < -0.5 * sd) mark[k] = -1;
    }
    out.spots_high = count_components(mark, w, hgt, 1);
    out.spots_low = count_components(mark, w, hgt, -1);
    out.spot_count = out.spots_high + out.spots_low;
  }

  std::vector<double> buf(dev);
  if (window == SpectrumWindow::CosineTaper)
    for (int j = 0; j < hgt; ++j)
      for (int i = 0; i < w; ++i) buf[static_cast<std::size_t>(j) * w + i] *= taper(i, w) * taper(j, hgt);
  std::vector<double> coef(buf.size());
  // Row-major with j slowest: FFTW's first dimension is the slow one.
  fftw_plan plan = fftw_plan_r2r_2d(hgt, w, buf.data(), coef.data(), FFTW_REDFT10, FFTW_REDFT10, FFTW_ESTIMATE);
  if (!plan) throw Error(ErrorCode::NumericalFailure, "radial_spectrum: FFTW plan failed");
  fftw_execute(plan);
  fftw_destroy_plan(plan);

  const double h = g.h();
  const double lx = w * h, ly = hgt * h;
  out.bin_width = std::numbers::pi / std::min(lx, ly);
  const double kmax = std::numbers::pi * std::hypot((w - 1) / lx, (hgt - 1) / ly);
  out.ring_power.assign(static_cast<std::size_t>(kmax / out.bin_width) + 2, 0.0);
  for (int n2 = 0; n2 < hgt; ++n2)
    for (int n1 = 0; n1 < w; ++n1) {
      if (n1 == 0 && n2 == 0) continue;
      const double k = std::numbers::pi * std::hypot(n1 / lx, n2 / ly);
      const auto bin = static_cast<std::size_t>(k / out.bin_width);
      const double c = coef[static_cast<std::size_t>(n2) * w + n1];
      out.ring_power[bin] += c * c;
    }

  const auto peak = static_cast<std::size_t>(
      std::max_element(out.ring_power.begin(), out.ring_power.end()) - out.ring_power.begin());
  out.k_peak = (static_cast<double>(peak) + 0.5) * out.bin_width;
  double num = 0.0, den = 0.0;
  const std::size_t lo = peak >= 2 ? peak - 2 : 0;
  const std::size_t hi = std::min(out.ring_power.size() - 1, peak + 2);
  for (std::size_t b = lo; b <= hi; ++b) {
    num += out.ring_power[b] * (static_cast<double>(b) + 0.5) * out.bin_width;
    den += out.ring_power[b];
  }
  out.k_centroid = den > 0.0 ? num / den : out.k_peak;
  if (band) out.band_ok = out.k_peak > band->k1 && out.k_peak < band->k2;
  return out;
}

std::vector<double> envelope_width(std::span<const double> t, std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<double> out(n, 0.0);
  if (n < 3 || t.size() != n) return out;
  std::vector<std::size_t> maxima, minima;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (x[i] > x[i - 1] && x[i] >= x[i + 1]) maxima.push_back(i);
    if (x[i] < x[i - 1] && x[i] <= x[i + 1]) minima.push_back(i);
  }
  if (maxima.empty() || minima.empty()) return out;
  auto interp = [&](const std::vector<std::size_t>& ext, std::size_t i) {
    // Held constant beyond the first and last extremum.
    auto it = std::lower_bound(ext.begin(), ext.end(), i);
    if (it == ext.begin()) return x[ext.front()];
    if (it == ext.end()) return x[ext.back()];
    const std::size_t b = *it, a = *(it - 1);
    const double f = (t[i] - t[a]) / (t[b] - t[a]);
    return x[a] + f * (x[b] - x[a]);
  };
  const std::size_t first = std::max(maxima.front(), minima.front());
  for (std::size_t i = first; i < n; ++i) out[i] = std::max(0.0, interp(maxima, i) - interp(minima, i));
  return out;
}

namespace {

std::vector<double> trailing_mean(std::span<const double> t, std::span<const double> x, double window) {
  std::vector<double> out(x.size(), 0.0);
  double sum = 0.0;
  std::size_t lo = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sum += x[i];
    while (t[i] - t[lo] > window) sum -= x[lo++];
    out[i] = sum / static_cast<double>(i - lo + 1);
  }
  return out;
}

}  // namespace

TransientMetrics transient_metrics(const TimeSeries& series, const Equilibrium& eq, const TransientThresholds& th) {
  TransientMetrics m;
  m.t_onset_d2 = std::numeric_limits<double>::quiet_NaN();
  m.t_settle_d2 = std::numeric_limits<double>::quiet_NaN();
  m.t_peak_d2 = std::numeric_limits<double>::quiet_NaN();
  m.t_phase_start = m.t_phase_end = m.t_peak_d2;
  const std::size_t n = series.size();
  std::vector<double> t(n), x1(n), x2(n);
  for (std::size_t i = 0; i < n; ++i) {
    t[i] = series[i].t;
    x1[i] = series[i].mean_u_d1;
    x2[i] = series[i].mean_u_d2;
  }
  std::size_t onset = n;
  for (std::size_t i = 0; i < n; ++i)
    if (std::abs(x2[i] - eq.u_star) > th.onset_rel * std::abs(eq.u_star)) {
      onset = i;
      break;
    }
  if (onset == n) return m;
  m.onset = true;
  m.t_onset_d2 = t[onset];

  const auto w1 = trailing_mean(t, envelope_width(t, x1), th.smoothing);
  const auto w2 = trailing_mean(t, envelope_width(t, x2), th.smoothing);
  std::size_t peak = onset;
  for (std::size_t i = onset; i < n; ++i)
    if (w2[i] > w2[peak]) peak = i;
  m.t_peak_d2 = t[peak];
  const auto raw2 = envelope_width(t, x2);
  m.peak_amplitude_d2 = 0.5 * *std::max_element(raw2.begin() + static_cast<std::ptrdiff_t>(onset), raw2.end());

  std::size_t settle = n;
  for (std::size_t i = peak; i < n; ++i)
    if (std::abs(w2[i] - w1[i]) <= th.settle_rel * w1[i]) {
      settle = i;
      break;
    }
  std::size_t lo = peak, hi = peak;
  while (lo > onset && w2[lo - 1] >= 0.5 * w2[peak]) --lo;
  while (hi + 1 < n && w2[hi + 1] >= 0.5 * w2[peak]) ++hi;
  m.t_phase_start = t[lo];
  m.t_phase_end = t[hi];
  const auto raw1 = envelope_width(t, x1);
  m.amplitude_d1_early = 0.5 * *std::max_element(raw1.begin() + static_cast<std::ptrdiff_t>(lo),
                                                 raw1.begin() + static_cast<std::ptrdiff_t>(hi) + 1);
  if (settle == n) return m;
  m.t_settle_d2 = t[settle];
  double late = 0.0;
  for (std::size_t i = settle; i < n; ++i) late += raw1[i];
  m.amplitude_d1_late = 0.5 * late / static_cast<double>(n - settle);
  return m;
}

std::vector<DivergencePoint> twin_divergence(const SimConfig& cfg, const FieldState& ic, const FieldState& ic_perturbed,
                                             const KineticParams& p, const DiffusionPair& d, const GridGeometry& g) {
  if (ic.u.size() != g.cell_count() || ic_perturbed.u.size() != g.cell_count())
    throw Error(ErrorCode::ShapeMismatch, "twin_divergence: initial state size");
  const double dt = effective_dt(cfg, g.h(), d);
  const auto per_sample = static_cast<std::uint64_t>(std::llround(cfg.series_every / dt));
  Simulator sa(g, p, d, dt, cfg.threads, cfg.scheme);
  Simulator sb(g, p, d, dt, cfg.threads, cfg.scheme);
  FieldState a = ic, b = ic_perturbed;
  a.t = b.t = 0.0;
  const auto& cells = g.interior_cells();
  std::vector<double> sq(cells.size());
  auto distance = [&] {
    for (std::size_t k = 0; k < cells.size(); ++k) {
      const double du = a.u[cells[k]] - b.u[cells[k]], dv = a.v[cells[k]] - b.v[cells[k]];
      sq[k] = du * du + dv * dv;
    }
    return std::sqrt(stable_sum(sq)) * g.h();
  };
  std::vector<DivergencePoint> out;
  out.push_back({0.0, distance()});
  const auto samples = static_cast<std::uint64_t>(std::floor(cfg.t_end / cfg.series_every + 1e-9));
  for (std::uint64_t s = 1; s <= samples; ++s) {
    sa.advance(a, per_sample);
    sb.advance(b, per_sample);
    out.push_back({static_cast<double>(s) * cfg.series_every, distance()});
  }
  return out;
}

DivergenceSummary summarize_divergence(const std::vector<DivergencePoint>& curve) {
  DivergenceSummary s;
  if (curve.empty()) return s;
  s.initial = curve.front().distance;
  s.final = curve.back().distance;
  for (const auto& p : curve) s.maximum = std::max(s.maximum, p.distance);
  s.orders_of_growth = s.initial > 0.0 ? std::log10(s.maximum / s.initial) : 0.0;
  return s;
}

}  // namespace rdlab
