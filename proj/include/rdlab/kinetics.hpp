#pragma once

// Temporal (well-mixed) prey-predator kinetics with an additive Allee term in
// prey growth and a saturating functional response:
//
//   du/dt = u g(u) - h(u) v,        g(u) = r - f u - m/(b+u),  h(u) = c u/(u+a)
//   dv/dt = s (h(u) - mort(v)) v,   mort(v) = q + p v
//
// Everything here is a pure function of its arguments.

#include <array>
#include <optional>
#include <utility>
#include <vector>

namespace rdlab {

struct KineticParams {
  double r = 1.0;     ///< intrinsic prey growth rate
  double f = 0.1;     ///< prey intra-specific competition
  double m = 0.1;     ///< Allee severity
  double b = 0.9;     ///< Allee strength
  double c = 1.0;     ///< capture rate
  double q = 0.35;    ///< predator natural death rate
  double p = 0.0425;  ///< predator density-dependent death
  double s = 3.0;     ///< feed-concentration multiplier
  double a = 1.65;    ///< half-saturation density

  /// Throws Error(InvalidArgument) unless all nine constants are strictly positive and finite.
  void validate() const;

  bool operator==(const KineticParams&) const = default;
};

/// The fixed constants used throughout the reference experiments, with the given (s, a).
KineticParams reference_params(double s, double a);

struct Equilibrium {
  double u_star = 0.0;
  double v_star = 0.0;
};

struct JacobianEntries {
  double a11 = 0.0, a12 = 0.0, a21 = 0.0, a22 = 0.0;

  double trace() const { return a11 + a22; }
  double det() const { return a11 * a22 - a12 * a21; }
};

enum class AlleeRegime { Strong, Weak, None };

const char* to_string(AlleeRegime regime) noexcept;

/// Coefficients of the cubic Taylor expansion of the kinetics about an
/// equilibrium. beta(i, j) multiplies u1^i v1^j in the prey equation and
/// gamma(i, j) in the predator equation, i.e. the true Taylor coefficient
/// (1/(i! j!)) d^{i+j}F/du^i dv^j. Entries with i + j > 3 or i + j == 0 are zero.
struct TaylorCoefficients {
  std::array<std::array<double, 4>, 4> beta{};
  std::array<std::array<double, 4>, 4> gamma{};

  double b(int i, int j) const { return beta[i][j]; }
  double g(int i, int j) const { return gamma[i][j]; }
};

double growth_g(double u, const KineticParams& p);
double growth_g_prime(double u, const KineticParams& p);
double functional_h(double u, const KineticParams& p);
double functional_h_prime(double u, const KineticParams& p);
double mortality_m(double v, const KineticParams& p);

/// Right-hand sides (du/dt, dv/dt) of the temporal model.
std::pair<double, double> reaction_rates(double u, double v, const KineticParams& p);

AlleeRegime allee_regime(const KineticParams& p);

/// Coefficients A0..A4 (highest degree first) of the quartic whose positive
/// roots are the prey components of coexistence equilibria.
std::array<double, 5> equilibrium_quartic(const KineticParams& p);

/// All feasible coexistence equilibria with u* in (0, r/f] and v* > 0, sorted
/// by u*. Throws EmptyResult when there are none and NumericalFailure when a
/// root cannot be refined onto both nullclines.
std::vector<Equilibrium> coexistence_equilibria(const KineticParams& p);

/// First (smallest u*) coexistence equilibrium.
Equilibrium primary_equilibrium(const KineticParams& p);

JacobianEntries jacobian_at(const Equilibrium& eq, const KineticParams& p);

/// Routh-Hurwitz: trace < 0 and det > 0.
bool is_locally_stable(const JacobianEntries& j);

/// s at which trace(J*) vanishes; s itself is ignored in `p`. Throws
/// Infeasible when a11 <= 0 or det(J*) <= 0 at the threshold.
double hopf_threshold_s(const KineticParams& p, const Equilibrium& eq);
double hopf_threshold_s(const KineticParams& p);

/// d/ds trace(J*) = -p v*; nonzero is the transversality condition.
double trace_slope_in_s(const KineticParams& p, const Equilibrium& eq);

/// Value of a in [a_lo, a_hi] at which trace(J*) = 0 with s held fixed.
/// Throws NoSignChange when the bracket does not straddle a root.
double hopf_threshold_a(const KineticParams& p, double a_lo, double a_hi);

TaylorCoefficients taylor_coefficients(const Equilibrium& eq, const KineticParams& p);

/// Sign-determining first Lyapunov number at a Hopf point; negative means a
/// stable (super-critical) limit cycle is born. Requires |trace(J*)| < 1e-8
/// and det(J*) > 0, else throws Infeasible.
double first_lyapunov_number(const KineticParams& p, const Equilibrium& eq);
double first_lyapunov_number(const KineticParams& p);

}  // namespace rdlab
