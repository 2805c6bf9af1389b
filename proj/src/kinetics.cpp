#include "rdlab/kinetics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "rdlab/error.hpp"

namespace rdlab {

namespace {

constexpr int kScanIntervals = 20000;
constexpr double kBisectionWidth = 1e-12;
constexpr double kPolyResidual = 1e-10;
constexpr double kMergeDistance = 1e-8;
constexpr double kNullclineResidual = 1e-9;

double horner(const std::array<double, 5>& c, double x) {
  double acc = 0.0;
  for (double coef : c) acc = acc * x + coef;
  return acc;
}

// u g(u) = r u - f u^2 - m + m b/(b+u); derivatives of order 1..3.
double prey_growth_d(int order, double u, const KineticParams& p) {
  const double w = p.b + u;
  switch (order) {
    case 1: return p.r - 2.0 * p.f * u - p.m * p.b / (w * w);
    case 2: return -2.0 * p.f + 2.0 * p.m * p.b / (w * w * w);
    case 3: return -6.0 * p.m * p.b / (w * w * w * w);
    default: return 0.0;
  }
}

// h(u) = c - c a/(u+a); derivatives of order 0..3.
double response_d(int order, double u, const KineticParams& p) {
  const double w = u + p.a;
  switch (order) {
    case 0: return p.c * u / w;
    case 1: return p.c * p.a / (w * w);
    case 2: return -2.0 * p.c * p.a / (w * w * w);
    case 3: return 6.0 * p.c * p.a / (w * w * w * w);
    default: return 0.0;
  }
}

double trace_at(const KineticParams& p) {
  return jacobian_at(primary_equilibrium(p), p).trace();
}

}  // namespace

void KineticParams::validate() const {
  const double all[] = {r, f, m, b, c, q, p, s, a};
  for (double x : all) {
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw Error(ErrorCode::InvalidArgument, "kinetic parameters must be finite and strictly positive");
    }
  }
}

KineticParams reference_params(double s, double a) {
  KineticParams p;
  p.s = s;
  p.a = a;
  return p;
}

const char* to_string(AlleeRegime regime) noexcept {
  switch (regime) {
    case AlleeRegime::Strong: return "strong";
    case AlleeRegime::Weak: return "weak";
    case AlleeRegime::None: return "none";
  }
  return "none";
}

double growth_g(double u, const KineticParams& p) { return p.r - p.f * u - p.m / (p.b + u); }

double growth_g_prime(double u, const KineticParams& p) {
  const double w = p.b + u;
  return -p.f + p.m / (w * w);
}

double functional_h(double u, const KineticParams& p) { return p.c * u / (u + p.a); }

double functional_h_prime(double u, const KineticParams& p) { return response_d(1, u, p); }

double mortality_m(double v, const KineticParams& p) { return p.q + p.p * v; }

std::pair<double, double> reaction_rates(double u, double v, const KineticParams& p) {
  const double h = functional_h(u, p);
  return {u * growth_g(u, p) - h * v, p.s * (h - mortality_m(v, p)) * v};
}

AlleeRegime allee_regime(const KineticParams& p) {
  const double lower = p.b * p.b * p.r * p.f;
  const double br = p.b * p.r;
  const double one_minus = 1.0 - p.b * p.f;
  const double upper = (p.r * p.r * one_minus * one_minus + 4.0 * p.b * p.r * p.r * p.f) / (4.0 * p.r * p.f);
  if (lower < br && br < p.m && p.m < upper) return AlleeRegime::Strong;
  if (lower < p.m && p.m < br) return AlleeRegime::Weak;
  return AlleeRegime::None;
}

std::array<double, 5> equilibrium_quartic(const KineticParams& p) {
  // Eliminating v between g(u) = c v/(u+a) and v = (h(u) - q)/p and clearing
  // the denominators (b+u)(u+a)^2 gives this quartic. For r = 1 it coincides
  // term by term with the commonly quoted form, which carries a spurious
  // factor r on the f-terms.
  const double a = p.a, b = p.b, r = p.r, f = p.f, m = p.m, c = p.c, q = p.q, pp = p.p;
  const double cq = c * (c - q);
  return {
      pp * f,
      pp * ((2.0 * a + b) * f - r),
      a * (a + 2.0 * b) * pp * f + m * pp + cq - (2.0 * a + b) * r * pp,
      a * a * b * pp * f + 2.0 * a * m * pp + b * cq - a * (a + 2.0 * b) * r * pp - a * c * q,
      a * a * pp * (m - b * r) - a * b * c * q,
  };
}

std::vector<Equilibrium> coexistence_equilibria(const KineticParams& p) {
  p.validate();
  const auto coef = equilibrium_quartic(p);
  const double hi = p.r / p.f;
  const double step = hi / kScanIntervals;

  std::vector<double> roots;
  double x0 = 0.0;
  double f0 = horner(coef, x0);
  for (int i = 1; i <= kScanIntervals; ++i) {
    const double x1 = (i == kScanIntervals) ? hi : step * i;
    const double f1 = horner(coef, x1);
    if (f1 == 0.0) {
      if (x1 > 0.0) roots.push_back(x1);
    } else if (f0 != 0.0 && std::signbit(f0) != std::signbit(f1)) {
      double lo = x0, up = x1, flo = f0;
      while (up - lo > kBisectionWidth) {
        const double mid = 0.5 * (lo + up);
        const double fm = horner(coef, mid);
        if (fm == 0.0) { lo = up = mid; break; }
        if (std::signbit(fm) == std::signbit(flo)) { lo = mid; flo = fm; } else { up = mid; }
      }
      const double root = 0.5 * (lo + up);
      if (std::abs(horner(coef, root)) > kPolyResidual) {
        std::ostringstream msg;
        msg << "equilibrium quartic root near u=" << root << " did not converge";
        throw Error(ErrorCode::NumericalFailure, msg.str());
      }
      roots.push_back(root);
    }
    x0 = x1;
    f0 = f1;
  }

  std::vector<Equilibrium> out;
  for (double u : roots) {
    if (!out.empty() && std::abs(u - out.back().u_star) < kMergeDistance) continue;
    const double v = (functional_h(u, p) - p.q) / p.p;
    // v* > 0  <=>  c > q and u* > a q/(c - q)
    if (!(v > 0.0)) continue;
    const auto [du, dv] = reaction_rates(u, v, p);
    if (std::abs(du) > kNullclineResidual || std::abs(dv) > kNullclineResidual) {
      std::ostringstream msg;
      msg << "equilibrium candidate (" << u << ", " << v << ") misses the nullclines by " << std::max(std::abs(du), std::abs(dv));
      throw Error(ErrorCode::NumericalFailure, msg.str());
    }
    out.push_back({u, v});
  }
  if (out.empty()) throw Error(ErrorCode::EmptyResult, "no feasible coexistence equilibrium");
  return out;
}

Equilibrium primary_equilibrium(const KineticParams& p) { return coexistence_equilibria(p).front(); }

JacobianEntries jacobian_at(const Equilibrium& eq, const KineticParams& p) {
  const double u = eq.u_star, v = eq.v_star;
  const double hp = functional_h_prime(u, p);
  return {
      growth_g(u, p) + u * growth_g_prime(u, p) - hp * v,
      -functional_h(u, p),
      p.s * hp * v,
      -p.s * p.p * v,
  };
}

bool is_locally_stable(const JacobianEntries& j) { return j.trace() < 0.0 && j.det() > 0.0; }

double hopf_threshold_s(const KineticParams& p, const Equilibrium& eq) {
  const double a11 = jacobian_at(eq, p).a11;  // s-free
  if (!(a11 > 0.0)) throw Error(ErrorCode::Infeasible, "a11 <= 0: equilibrium is stable for every s");
  const double s_h = a11 / (p.p * eq.v_star);
  KineticParams at = p;
  at.s = s_h;
  if (!(jacobian_at(eq, at).det() > 0.0)) throw Error(ErrorCode::Infeasible, "det(J*) <= 0 at the Hopf threshold");
  return s_h;
}

double hopf_threshold_s(const KineticParams& p) { return hopf_threshold_s(p, primary_equilibrium(p)); }

double trace_slope_in_s(const KineticParams& p, const Equilibrium& eq) { return -p.p * eq.v_star; }

double hopf_threshold_a(const KineticParams& p, double a_lo, double a_hi) {
  if (!(a_lo > 0.0) || !(a_hi > a_lo)) throw Error(ErrorCode::InvalidArgument, "hopf_threshold_a: need 0 < a_lo < a_hi");
  KineticParams lo = p, hi = p;
  lo.a = a_lo;
  hi.a = a_hi;
  double t_lo = trace_at(lo);
  const double t_hi = trace_at(hi);
  if (t_lo == 0.0) return a_lo;
  if (t_hi == 0.0) return a_hi;
  if (std::signbit(t_lo) == std::signbit(t_hi)) {
    throw Error(ErrorCode::NoSignChange, "trace(J*) does not change sign on the a-bracket");
  }
  KineticParams mid = p;
  for (int it = 0; it < 200 && hi.a - lo.a > 1e-13; ++it) {
    mid.a = 0.5 * (lo.a + hi.a);
    const double t_mid = trace_at(mid);
    if (t_mid == 0.0) return mid.a;
    if (std::signbit(t_mid) == std::signbit(t_lo)) {
      lo.a = mid.a;
      t_lo = t_mid;
    } else {
      hi.a = mid.a;
    }
  }
  mid.a = 0.5 * (lo.a + hi.a);
  if (std::abs(trace_at(mid)) > 1e-8) throw Error(ErrorCode::NumericalFailure, "a-threshold bisection stalled");
  return mid.a;
}

TaylorCoefficients taylor_coefficients(const Equilibrium& eq, const KineticParams& p) {
  const double u = eq.u_star, v = eq.v_star, s = p.s;
  const double h0 = response_d(0, u, p), h1 = response_d(1, u, p), h2 = response_d(2, u, p), h3 = response_d(3, u, p);
  TaylorCoefficients tc;
  auto& B = tc.beta;
  auto& G = tc.gamma;
  // F1 = u g(u) - h(u) v is linear in v.
  B[1][0] = prey_growth_d(1, u, p) - h1 * v;
  B[0][1] = -h0;
  B[2][0] = (prey_growth_d(2, u, p) - h2 * v) / 2.0;
  B[1][1] = -h1;
  B[3][0] = (prey_growth_d(3, u, p) - h3 * v) / 6.0;
  B[2][1] = -h2 / 2.0;
  // F2 = s v h(u) - s q v - s p v^2 is quadratic in v.
  G[1][0] = s * h1 * v;
  G[0][1] = s * (h0 - p.q - 2.0 * p.p * v);
  G[2][0] = s * h2 * v / 2.0;
  G[1][1] = s * h1;
  G[0][2] = -s * p.p;
  G[3][0] = s * h3 * v / 6.0;
  G[2][1] = s * h2 / 2.0;
  return tc;
}

double first_lyapunov_number(const KineticParams& p, const Equilibrium& eq) {
  const auto j = jacobian_at(eq, p);
  if (std::abs(j.trace()) > 1e-8) throw Error(ErrorCode::Infeasible, "first Lyapunov number requires trace(J*) = 0");
  if (!(j.det() > 0.0)) throw Error(ErrorCode::Infeasible, "first Lyapunov number requires det(J*) > 0");

  const auto tc = taylor_coefficients(eq, p);
  const double b10 = tc.b(1, 0), b01 = tc.b(0, 1), b20 = tc.b(2, 0), b11 = tc.b(1, 1), b02 = tc.b(0, 2);
  const double b30 = tc.b(3, 0), b21 = tc.b(2, 1), b12 = tc.b(1, 2);
  const double g10 = tc.g(1, 0), g01 = tc.g(0, 1), g20 = tc.g(2, 0), g11 = tc.g(1, 1), g02 = tc.g(0, 2);
  const double g03 = tc.g(0, 3), g21 = tc.g(2, 1), g12 = tc.g(1, 2);
  const double delta = b10 * g01 - b01 * g10;

  const double bracket =
      b10 * g10 * (b11 * b11 + b11 * g02 + b02 * g11) + b10 * b01 * (g11 * g11 + b20 * g11 + b11 * g02) +
      g10 * g10 * (b11 * b02 + 2.0 * b02 * g02) - 2.0 * b10 * g10 * (g02 * g02 - b02 * b20) -
      2.0 * b10 * b01 * (b20 * b20 - g20 * g02) - b01 * b01 * (2.0 * b20 * g20 + g11 * g20) +
      (b01 * g10 - 2.0 * b10 * b10) * (g11 * g02 - b11 * b20) -
      (b10 * b10 + b01 * g10) *
          (3.0 * (g10 * g03 - b01 * b30) + 2.0 * b10 * (b21 + g12) + (g10 * b12 - b01 * g21));

  return -3.0 * std::numbers::pi / (2.0 * b01 * std::pow(delta, 1.5)) * bracket;
}

double first_lyapunov_number(const KineticParams& p) { return first_lyapunov_number(p, primary_equilibrium(p)); }

}  // namespace rdlab
