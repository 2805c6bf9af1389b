#include "rdlab/linstab.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>

#include "rdlab/error.hpp"

namespace rdlab {

namespace {

constexpr int kDefaultSamples = 512;

// Golden-section maximisation of a unimodal function on [lo, hi].
template <class F>
double golden_max(F&& fn, double lo, double hi, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = fn(x1), f2 = fn(x2);
  while (hi - lo > tol) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = fn(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = fn(x1);
    }
  }
  return 0.5 * (lo + hi);
}

double h_min(const JacobianEntries& j, const DiffusionPair& d) {
  const double bsum = d.d2 * j.a11 + d.d1 * j.a22;
  return j.det() - bsum * bsum / (4.0 * d.d1 * d.d2);
}

}  // namespace

void DiffusionPair::validate() const {
  if (!(d1 > 0.0) || !(d2 > 0.0) || !std::isfinite(d1) || !std::isfinite(d2)) {
    throw Error(ErrorCode::InvalidArgument, "diffusion coefficients must be finite and positive");
  }
}

double h_of_k2(double k2_val, const JacobianEntries& j, const DiffusionPair& d) {
  return d.d1 * d.d2 * k2_val * k2_val - (d.d2 * j.a11 + d.d1 * j.a22) * k2_val + j.det();
}

std::pair<std::complex<double>, std::complex<double>> eigenvalues_at_k2(double k2_val, const JacobianEntries& j,
                                                                       const DiffusionPair& d) {
  const double tr = j.trace() - (d.d1 + d.d2) * k2_val;
  const double det = h_of_k2(k2_val, j, d);
  const double disc = tr * tr - 4.0 * det;
  if (disc >= 0.0) {
    // Avoid cancellation: larger-magnitude root first, the other by Vieta.
    const double sq = std::sqrt(disc);
    const double big = 0.5 * (tr + (tr >= 0.0 ? sq : -sq));
    const double small = (big != 0.0) ? det / big : 0.0;
    const double hi = std::max(big, small), lo = std::min(big, small);
    return {{hi, 0.0}, {lo, 0.0}};
  }
  const double im = 0.5 * std::sqrt(-disc);
  return {{0.5 * tr, im}, {0.5 * tr, -im}};
}

std::pair<std::complex<double>, std::complex<double>> eigenvalues_at_k(double k, const JacobianEntries& j,
                                                                      const DiffusionPair& d) {
  return eigenvalues_at_k2(k * k, j, d);
}

double re_lambda_max(double k, const JacobianEntries& j, const DiffusionPair& d) {
  return eigenvalues_at_k(k, j, d).first.real();
}

std::optional<UnstableBand> unstable_band(const JacobianEntries& j, const DiffusionPair& d) {
  const double bsum = d.d2 * j.a11 + d.d1 * j.a22;
  if (!(bsum > 0.0)) return std::nullopt;
  const double disc = bsum * bsum - 4.0 * d.d1 * d.d2 * j.det();
  if (!(disc > 0.0)) return std::nullopt;
  const double sq = std::sqrt(disc);
  const double denom = 2.0 * d.d1 * d.d2;
  // k1^2 via the product of roots to keep precision when det J is small.
  const double k2sq = (bsum + sq) / denom;
  const double k1sq = j.det() / (d.d1 * d.d2 * k2sq);
  if (!(k1sq > 0.0)) return std::nullopt;
  return UnstableBand{std::sqrt(k1sq), std::sqrt(k2sq)};
}

DispersionResult sample_dispersion(const JacobianEntries& j, const DiffusionPair& d, double k_max, int n) {
  d.validate();
  if (n < 2 || !(k_max > 0.0)) throw Error(ErrorCode::InvalidArgument, "dispersion needs n >= 2 and k_max > 0");

  DispersionResult res;
  res.samples.reserve(static_cast<std::size_t>(n));
  std::size_t best = 0;
  for (int i = 0; i < n; ++i) {
    const double k = k_max * static_cast<double>(i) / static_cast<double>(n - 1);
    const auto [l1, l2] = eigenvalues_at_k(k, j, d);
    res.samples.push_back({k, l1.real(), std::abs(l1.imag())});
    if (res.samples.back().re_lambda_max > res.samples[best].re_lambda_max) best = res.samples.size() - 1;
  }
  res.band = unstable_band(j, d);
  const double bsum = d.d2 * j.a11 + d.d1 * j.a22;
  if (bsum > 0.0) res.k_c = std::sqrt(bsum / (2.0 * d.d1 * d.d2));

  const double dk = k_max / static_cast<double>(n - 1);
  const double lo = std::max(0.0, res.samples[best].k - dk);
  const double hi = std::min(k_max, res.samples[best].k + dk);
  res.k_argmax = golden_max([&](double k) { return re_lambda_max(k, j, d); }, lo, hi, 1e-10);
  res.re_lambda_at_argmax = re_lambda_max(res.k_argmax, j, d);
  if (res.samples[best].re_lambda_max > res.re_lambda_at_argmax) {
    res.k_argmax = res.samples[best].k;
    res.re_lambda_at_argmax = res.samples[best].re_lambda_max;
  }
  return res;
}

DispersionResult dispersion_curve(const JacobianEntries& j, const DiffusionPair& d, double k_max, int n) {
  auto res = sample_dispersion(j, d, k_max, n);
  if (!res.band) throw Error(ErrorCode::NoBand, "no diffusively unstable wavenumber band");
  return res;
}

DispersionResult dispersion_curve(const JacobianEntries& j, const DiffusionPair& d) {
  double k_max = 2.0;
  if (const auto band = unstable_band(j, d)) {
    k_max = 2.0 * band->k2;
  } else if (d.d2 * j.a11 + d.d1 * j.a22 > 0.0) {
    k_max = 2.0 * std::sqrt((d.d2 * j.a11 + d.d1 * j.a22) / (2.0 * d.d1 * d.d2));
  }
  return dispersion_curve(j, d, k_max, kDefaultSamples);
}

double critical_wavenumber(const JacobianEntries& j, const DiffusionPair& d) {
  d.validate();
  const double bsum = d.d2 * j.a11 + d.d1 * j.a22;
  if (!(bsum > 0.0)) throw Error(ErrorCode::Infeasible, "critical wavenumber needs d2 a11 + d1 a22 > 0");
  return std::sqrt(bsum / (2.0 * d.d1 * d.d2));
}

double turing_boundary_d2(const JacobianEntries& j, double d1) {
  if (!(d1 > 0.0)) throw Error(ErrorCode::InvalidArgument, "d1 must be positive");
  if (!(j.a11 > 0.0) || !(j.a22 < 0.0) || !(j.det() > 0.0)) {
    throw Error(ErrorCode::Infeasible, "Turing boundary needs a11 > 0, a22 < 0 and det J > 0");
  }
  // a11 x^2 - 2 sqrt(d1 det) x + d1 a22 = 0 with x = sqrt(d2). The constant
  // term is negative, so exactly one root is positive.
  const double bq = -2.0 * std::sqrt(d1 * j.det());
  const double cq = d1 * j.a22;
  const double disc = bq * bq - 4.0 * j.a11 * cq;
  const double sq = std::sqrt(disc);
  // Stable form of the positive root of a x^2 + b x + c with b < 0.
  const double x = (-bq + sq) / (2.0 * j.a11);
  const double d2t = x * x;
  // Instability must hold on the large-d2 side.
  if (!(h_min(j, {d1, d2t * (1.0 + 1e-3)}) < 0.0) || !(h_min(j, {d1, d2t * (1.0 - 1e-3)}) > 0.0)) {
    throw Error(ErrorCode::NumericalFailure, "Turing boundary root failed the side check");
  }
  return d2t;
}

double d2T_mode(int n1, int n2, double L, const JacobianEntries& j, double d1) {
  if (!(L > 0.0) || !(d1 > 0.0) || n1 < 0 || n2 < 0) throw Error(ErrorCode::InvalidArgument, "d2T_mode arguments");
  const double omega = std::numbers::pi / L;
  const double ksq = static_cast<double>(n1 * n1 + n2 * n2) * omega * omega;
  // From h(ksq) = 0 solved for d2: d2 (d1 ksq^2 - a11 ksq) = d1 a22 ksq - det J.
  const double denom = ksq * (d1 * ksq - j.a11);
  if (std::abs(denom) <= 1e-14 * std::max(1.0, std::abs(j.a11 * ksq))) {
    throw Error(ErrorCode::PoleAtMode, "mode wavenumber sits on the d1 k^2 = a11 pole");
  }
  return (ksq * d1 * j.a22 - j.det()) / denom;
}

int default_mode_cap(double L, const UnstableBand& band) {
  return static_cast<int>(std::ceil(L * band.k2 / std::numbers::pi)) + 1;
}

ModeSet admissible_modes(const JacobianEntries& j, const DiffusionPair& d, double L, int n_cap, double nearest_tol) {
  if (!(L > 0.0)) throw Error(ErrorCode::InvalidArgument, "domain length must be positive");
  const auto disp = dispersion_curve(j, d);
  const auto band = *disp.band;
  if (n_cap <= 0) n_cap = default_mode_cap(L, band);
  if (!(nearest_tol > 0.0)) nearest_tol = std::numbers::pi / (2.0 * L);

  ModeSet set;
  set.L = L;
  set.k_argmax = disp.k_argmax;
  set.nearest_tol = nearest_tol;
  const double omega = std::numbers::pi / L;
  for (int n1 = 0; n1 <= n_cap; ++n1) {
    for (int n2 = 0; n2 <= n_cap; ++n2) {
      const double k = omega * std::sqrt(static_cast<double>(n1 * n1 + n2 * n2));
      if (band.k1 < k && k < band.k2) set.admissible.push_back({n1, n2, k});
    }
  }
  if (set.admissible.empty()) return set;

  auto key = [&](const Mode& m) {
    return std::make_tuple(std::abs(m.k - disp.k_argmax), std::abs(m.n1 - m.n2), m.n1);
  };
  set.dominant = *std::min_element(set.admissible.begin(), set.admissible.end(),
                                   [&](const Mode& x, const Mode& y) { return key(x) < key(y); });
  for (const auto& m : set.admissible) {
    if (std::abs(m.k - disp.k_argmax) <= nearest_tol) set.nearest.push_back(m);
  }
  std::sort(set.nearest.begin(), set.nearest.end(), [&](const Mode& x, const Mode& y) { return key(x) < key(y); });
  return set;
}

const char* to_string(Regime regime) noexcept {
  switch (regime) {
    case Regime::HomogeneousStable: return "HomogeneousStable";
    case Regime::PureTuring: return "PureTuring";
    case Regime::TuringHopf: return "TuringHopf";
    case Regime::HopfOnly: return "HopfOnly";
    case Regime::Unknown: return "Unknown";
  }
  return "Unknown";
}

namespace {

Regime label_cell(const JacobianEntries& jac, const DiffusionPair& d) {
  if (!(jac.det() > 0.0)) return Regime::Unknown;
  const bool band = unstable_band(jac, d).has_value();
  if (jac.trace() < 0.0) return band ? Regime::PureTuring : Regime::HomogeneousStable;
  return band ? Regime::TuringHopf : Regime::HopfOnly;
}

}  // namespace

Regime classify_regime(const KineticParams& p, const DiffusionPair& d) {
  return label_cell(jacobian_at(primary_equilibrium(p), p), d);
}

RegimeMap regime_map(const KineticParams& base, double d1, std::pair<double, double> a_range,
                     std::pair<double, double> d2_range, int resolution_a, int resolution_d2) {
  if (resolution_a < 1 || resolution_d2 < 1) throw Error(ErrorCode::InvalidArgument, "regime map resolution must be >= 1");
  auto axis = [](std::pair<double, double> r, int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[i] = (n == 1) ? r.first : r.first + (r.second - r.first) * i / (n - 1);
    return v;
  };
  RegimeMap map;
  map.a_values = axis(a_range, resolution_a);
  map.d2_values = axis(d2_range, resolution_d2);
  map.labels.assign(map.a_values.size() * map.d2_values.size(), Regime::Unknown);

  std::vector<std::optional<JacobianEntries>> jacs(map.a_values.size());
  for (std::size_t ia = 0; ia < map.a_values.size(); ++ia) {
    KineticParams p = base;
    p.a = map.a_values[ia];
    try {
      jacs[ia] = jacobian_at(primary_equilibrium(p), p);
    } catch (const Error&) {
      continue;
    }
    try {
      map.turing_boundary.emplace_back(p.a, turing_boundary_d2(*jacs[ia], d1));
    } catch (const Error&) {
    }
  }

  for (std::size_t id = 0; id < map.d2_values.size(); ++id) {
    const DiffusionPair d{d1, map.d2_values[id]};
    for (std::size_t ia = 0; ia < map.a_values.size(); ++ia) {
      if (jacs[ia]) map.labels[id * map.a_values.size() + ia] = label_cell(*jacs[ia], d);
    }
  }

  for (std::size_t ia = 1; ia < map.a_values.size(); ++ia) {
    if (!jacs[ia - 1] || !jacs[ia]) continue;
    if (std::signbit(jacs[ia - 1]->trace()) != std::signbit(jacs[ia]->trace())) {
      try {
        map.hopf_a = hopf_threshold_a(base, map.a_values[ia - 1], map.a_values[ia]);
      } catch (const Error&) {
      }
      break;
    }
  }
  return map;
}

}  // namespace rdlab
