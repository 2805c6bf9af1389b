#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "rdlab/error.hpp"
#include "rdlab/linstab.hpp"

using namespace rdlab;

namespace {

JacobianEntries jac(double a, double s = 3.0) {
  const auto p = reference_params(s, a);
  return jacobian_at(primary_equilibrium(p), p);
}

// Largest real part of the eigenvalues of J - k^2 diag(d1, d2), from the
// 2x2 matrix directly.
double brute_re_lambda(double k, const JacobianEntries& j, const DiffusionPair& d) {
  const double m11 = j.a11 - d.d1 * k * k, m22 = j.a22 - d.d2 * k * k;
  const double tr = m11 + m22, det = m11 * m22 - j.a12 * j.a21;
  const std::complex<double> disc = std::sqrt(std::complex<double>(tr * tr - 4 * det));
  return std::max(((tr + disc) / 2.0).real(), ((tr - disc) / 2.0).real());
}

// Zero crossings of brute_re_lambda on a fine grid, refined by bisection.
std::vector<double> brute_crossings(const JacobianEntries& j, const DiffusionPair& d, double k_max) {
  std::vector<double> out;
  const int n = 200000;
  double prev = brute_re_lambda(0.0, j, d);
  for (int i = 1; i <= n; ++i) {
    const double k = k_max * i / n;
    const double cur = brute_re_lambda(k, j, d);
    if ((prev > 0) != (cur > 0)) {
      out.push_back(oracle::bisect([&](double x) { return brute_re_lambda(x, j, d); }, k_max * (i - 1) / n, k));
    }
    prev = cur;
  }
  return out;
}

}  // namespace

TEST_CASE("unstable band and argmax at d2 = 10") {
  const auto j = jac(1.65);
  const DiffusionPair d{0.15, 10.0};
  const auto band = unstable_band(j, d);
  REQUIRE(band);
  CHECK(std::abs(band->k1 - 0.49) < 0.01);
  CHECK(std::abs(band->k2 - 1.21) < 0.01);
  const auto curve = dispersion_curve(j, d);
  CHECK(std::abs(curve.k_argmax - 0.773) < 0.005);
}

TEST_CASE("marginal band at d2 = 4.986") {
  const auto j = jac(1.65);
  const DiffusionPair d{0.15, 4.986};
  const auto band = unstable_band(j, d);
  REQUIRE(band);
  CHECK(std::abs(band->k1 - 0.911) < 0.005);
  CHECK(std::abs(band->k2 - 0.921) < 0.005);
  CHECK(std::abs(dispersion_curve(j, d).k_argmax - 0.916) < 0.005);
}

TEST_CASE("closed-form band edges agree with a brute-force eigenvalue scan") {
  for (double a : {1.65, 2.0, 2.2}) {
    for (double d2 : {12.0, 20.0, 40.0}) {
      const auto j = jac(a);
      const DiffusionPair d{0.15, d2};
      const auto band = unstable_band(j, d);
      const auto cross = brute_crossings(j, d, 4.0);
      CAPTURE(a);
      CAPTURE(d2);
      REQUIRE(band);
      REQUIRE(cross.size() == 2);
      CHECK(band->k1 == doctest::Approx(cross[0]).epsilon(1e-8));
      CHECK(band->k2 == doctest::Approx(cross[1]).epsilon(1e-8));
    }
  }
}

TEST_CASE("eigenvalues satisfy the characteristic polynomial") {
  const auto j = jac(1.65);
  const DiffusionPair d{0.15, 10.0};
  for (double k : {0.0, 0.3, 0.77, 1.5}) {
    const auto [l1, l2] = eigenvalues_at_k(k, j, d);
    const double k2 = k * k;
    for (auto l : {l1, l2}) {
      const auto res = l * l - (j.trace() - (d.d1 + d.d2) * k2) * l + h_of_k2(k2, j, d);
      CHECK(std::abs(res) < 1e-12);
    }
    CHECK(l1.real() >= l2.real());
    CHECK(re_lambda_max(k, j, d) == doctest::Approx(brute_re_lambda(k, j, d)).epsilon(1e-12));
  }
}

TEST_CASE("homogeneous mode is damped and oscillatory at a = 1.65, s = 3") {
  const auto j = jac(1.65);
  const auto [l1, l2] = eigenvalues_at_k(0.0, j, DiffusionPair{0.15, 10.0});
  CHECK(l1.real() == doctest::Approx(-0.02743).epsilon(1e-3));
  CHECK(std::abs(l1.imag()) > 0.5);
}

TEST_CASE("no band below the Turing threshold, and dispersion_curve reports it") {
  const auto j = jac(1.65);
  const DiffusionPair d{0.15, 2.0};
  CHECK_FALSE(unstable_band(j, d));
  const auto s = sample_dispersion(j, d, 2.0, 64);
  CHECK_FALSE(s.band);
  CHECK(s.samples.size() == 64);
  try {
    dispersion_curve(j, d, 2.0, 64);
    FAIL("expected NoBand");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoBand);
  }
}

TEST_CASE("two-sample dispersion covers both ends") {
  const auto s = sample_dispersion(jac(1.65), DiffusionPair{0.15, 10.0}, 2.0, 2);
  REQUIRE(s.samples.size() == 2);
  CHECK(s.samples.front().k == 0.0);
  CHECK(s.samples.back().k == 2.0);
}

TEST_CASE("Turing threshold matches a bisection on min h") {
  const auto j = jac(1.65);
  const double d1 = 0.15;
  const double d2t = turing_boundary_d2(j, d1);
  CHECK(d2t >= 4.9);
  CHECK(d2t <= 5.05);
  auto h_min = [&](double d2) {
    const double bq = d2 * j.a11 + d1 * j.a22;
    return bq > 0 ? j.det() - bq * bq / (4 * d1 * d2) : j.det();
  };
  const double ref = oracle::bisect(h_min, 1.0, 20.0);
  CHECK(std::abs(d2t - ref) <= 1e-6 * ref);
  // At threshold the band collapses onto the critical wavenumber.
  const DiffusionPair d{d1, d2t * (1 + 1e-9)};
  const auto band = unstable_band(j, d);
  REQUIRE(band);
  CHECK(band->k2 - band->k1 < 1e-3);
  CHECK(critical_wavenumber(j, d) == doctest::Approx(0.5 * (band->k1 + band->k2)).epsilon(1e-4));
}

TEST_CASE("Turing threshold needs an activator-inhibitor Jacobian") {
  JacobianEntries j{-0.1, -0.5, 1.0, -0.3};
  CHECK_THROWS_AS(turing_boundary_d2(j, 0.15), Error);
}

TEST_CASE("mode threshold makes its own mode marginal") {
  const auto j = jac(1.65);
  const double d1 = 0.15, L = 200.0;
  for (auto [n1, n2] : {std::pair{19, 55}, {35, 35}, {10, 60}}) {
    const double d2 = d2T_mode(n1, n2, L, j, d1);
    const double k2 = (n1 * n1 + n2 * n2) * std::pow(std::numbers::pi / L, 2);
    CHECK(std::abs(h_of_k2(k2, j, DiffusionPair{d1, d2})) < 1e-12);
  }
  // The pole sits where d1 k^2 equals a11.
  const double k_pole = std::sqrt(j.a11 / d1);
  const double Lp = std::numbers::pi * 5.0 / k_pole;
  CHECK_THROWS_AS(d2T_mode(3, 4, Lp, j, d1), Error);
}

TEST_CASE("mode arithmetic on L = 200") {
  const double k = std::numbers::pi / 200.0 * std::sqrt(19.0 * 19.0 + 55.0 * 55.0);
  CHECK(std::abs(k - 0.914) < 5e-4);
  const auto j = jac(1.65);
  const auto marginal = admissible_modes(j, DiffusionPair{0.15, 4.986}, 200.0);
  CHECK(std::find(marginal.admissible.begin(), marginal.admissible.end(), Mode{19, 55, 0.0}) !=
        marginal.admissible.end());
  const auto wide = admissible_modes(j, DiffusionPair{0.15, 10.0}, 200.0);
  CHECK(std::find(wide.nearest.begin(), wide.nearest.end(), Mode{35, 35, 0.0}) != wide.nearest.end());
}

TEST_CASE("admissible modes all lie inside the band, and the dominant one is closest to the argmax") {
  const auto j = jac(2.0);
  const DiffusionPair d{0.15, 10.0};
  const auto band = *unstable_band(j, d);
  const auto ms = admissible_modes(j, d, 100.0);
  REQUIRE_FALSE(ms.admissible.empty());
  double best = 1e9;
  for (const auto& m : ms.admissible) {
    CHECK(m.k > band.k1);
    CHECK(m.k < band.k2);
    CHECK(m.k == doctest::Approx(std::numbers::pi / 100.0 * std::hypot(m.n1, m.n2)));
    best = std::min(best, std::abs(m.k - ms.k_argmax));
  }
  CHECK(std::abs(ms.dominant.k - ms.k_argmax) == doctest::Approx(best));
  for (const auto& m : ms.nearest) CHECK(std::abs(m.k - ms.k_argmax) <= ms.nearest_tol);
}

TEST_CASE("band widens monotonically with d2") {
  const auto j = jac(1.65);
  double prev = 0.0;
  for (double d2 = 5.0; d2 <= 40.0; d2 += 1.0) {
    const auto band = unstable_band(j, DiffusionPair{0.15, d2});
    REQUIRE(band);
    const double w = band->k2 - band->k1;
    CHECK(w > prev);
    prev = w;
  }
}

TEST_CASE("regime labels") {
  CHECK(classify_regime(reference_params(3.0, 1.65), DiffusionPair{0.15, 10.0}) == Regime::PureTuring);
  const Regime below = classify_regime(reference_params(3.0, 1.65), DiffusionPair{0.15, 2.0});
  CHECK(below != Regime::PureTuring);
  CHECK(below != Regime::TuringHopf);
  CHECK(classify_regime(reference_params(3.0, 1.2), DiffusionPair{0.15, 10.0}) == Regime::TuringHopf);
  CHECK(classify_regime(reference_params(3.0, 1.2), DiffusionPair{0.15, 0.2}) == Regime::HopfOnly);
}

TEST_CASE("regime map has the requested shape and a Hopf crossing") {
  const auto m = regime_map(reference_params(3.0, 1.0), 0.15, {1.0, 3.0}, {1.0, 20.0}, 21, 11);
  CHECK(m.a_values.size() == 21);
  CHECK(m.d2_values.size() == 11);
  CHECK(m.labels.size() == 231);
  REQUIRE(m.hopf_a);
  CHECK(*m.hopf_a == doctest::Approx(1.4671359).epsilon(1e-6));
  for (const auto& [a, d2] : m.turing_boundary) {
    KineticParams p = reference_params(3.0, a);
    CHECK(turing_boundary_d2(jacobian_at(primary_equilibrium(p), p), 0.15) == doctest::Approx(d2));
  }
}
