#pragma once

// Linear stability of the homogeneous coexistence state under diffusion.
// A perturbation ~ exp(lambda t) cos(k1 x) cos(k2 y) with k^2 = k1^2 + k2^2
// has lambda solving
//
//   lambda^2 - (tr J - (d1 + d2) k^2) lambda + h(k^2) = 0,
//   h(k^2) = d1 d2 k^4 - (d2 a11 + d1 a22) k^2 + det J.

#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include "rdlab/kinetics.hpp"

namespace rdlab {

struct DiffusionPair {
  double d1 = 0.15;
  double d2 = 10.0;

  void validate() const;
  bool operator==(const DiffusionPair&) const = default;
};

struct DispersionSample {
  double k = 0.0;
  double re_lambda_max = 0.0;
  double im_lambda = 0.0;  ///< |Im lambda| (zero when both roots are real)
};

struct UnstableBand {
  double k1 = 0.0;
  double k2 = 0.0;
};

struct DispersionResult {
  std::vector<DispersionSample> samples;
  std::optional<UnstableBand> band;  ///< empty when h(k^2) >= 0 for every k
  double k_argmax = 0.0;             ///< refined maximiser of Re lambda_max over [0, k_max]
  double re_lambda_at_argmax = 0.0;
  std::optional<double> k_c;         ///< vertex of h(k^2), when d2 a11 + d1 a22 > 0
};

struct Mode {
  int n1 = 0;
  int n2 = 0;
  double k = 0.0;
  bool operator==(const Mode& o) const { return n1 == o.n1 && n2 == o.n2; }
};

struct ModeSet {
  double L = 0.0;
  std::vector<Mode> admissible;  ///< ordered by (n1, n2)
  Mode dominant;
  std::vector<Mode> nearest;     ///< admissible modes with |k - k_argmax| <= nearest_tol, by distance
  double k_argmax = 0.0;
  double nearest_tol = 0.0;
};

double h_of_k2(double k2_val, const JacobianEntries& j, const DiffusionPair& d);

/// Both roots of the characteristic quadratic, larger real part first.
std::pair<std::complex<double>, std::complex<double>> eigenvalues_at_k(double k, const JacobianEntries& j,
                                                                      const DiffusionPair& d);

/// Same roots with k^2 supplied directly (e.g. a discrete Laplacian eigenvalue).
std::pair<std::complex<double>, std::complex<double>> eigenvalues_at_k2(double k2_val, const JacobianEntries& j,
                                                                       const DiffusionPair& d);

double re_lambda_max(double k, const JacobianEntries& j, const DiffusionPair& d);

/// Closed-form band edges; nullopt when d2 a11 + d1 a22 <= 0 or the
/// discriminant is negative.
std::optional<UnstableBand> unstable_band(const JacobianEntries& j, const DiffusionPair& d);

/// Uniform k-grid on [0, k_max] with n samples. Never throws NoBand.
DispersionResult sample_dispersion(const JacobianEntries& j, const DiffusionPair& d, double k_max, int n);

/// As sample_dispersion, but throws NoBand when no unstable band exists.
DispersionResult dispersion_curve(const JacobianEntries& j, const DiffusionPair& d, double k_max, int n);

/// Dispersion on the default grid: 512 samples on [0, 2 k2] (or [0, 2 k_c]
/// / [0, 2] when there is no band).
DispersionResult dispersion_curve(const JacobianEntries& j, const DiffusionPair& d);

double critical_wavenumber(const JacobianEntries& j, const DiffusionPair& d);

/// Threshold d2 above which the homogeneous state is diffusively unstable,
/// d2 a11 + d1 a22 = 2 sqrt(d1 d2 det J). The a22 entry must not depend on d2
/// (it does not). Throws Infeasible unless a11 > 0, a22 < 0, det J > 0.
double turing_boundary_d2(const JacobianEntries& j, double d1);

/// d2 at which the single mode k^2 = (n1^2 + n2^2)(pi/L)^2 is marginal.
/// Throws PoleAtMode when d1 k^2 == a11.
double d2T_mode(int n1, int n2, double L, const JacobianEntries& j, double d1);

/// Default enumeration cap ceil(L k2/pi) + 1.
int default_mode_cap(double L, const UnstableBand& band);

/// Modes (n1, n2) in [0, n_cap]^2 with k1 < (pi/L) sqrt(n1^2 + n2^2) < k2.
/// The dominant mode is the one closest to k_argmax, tie-broken by smaller
/// |n1 - n2| and then smaller n1. n_cap <= 0 selects default_mode_cap.
/// nearest_tol <= 0 selects pi/(2L). Throws NoBand.
ModeSet admissible_modes(const JacobianEntries& j, const DiffusionPair& d, double L, int n_cap = 0,
                         double nearest_tol = 0.0);

enum class Regime { HomogeneousStable, PureTuring, TuringHopf, HopfOnly, Unknown };

const char* to_string(Regime regime) noexcept;

/// Regime of one (params, diffusion) point from the k = 0 stability and band existence.
Regime classify_regime(const KineticParams& p, const DiffusionPair& d);

struct RegimeMap {
  std::vector<double> a_values;
  std::vector<double> d2_values;
  std::vector<Regime> labels;  ///< row-major: labels[i_d2 * a_values.size() + i_a]
  std::vector<std::pair<double, double>> turing_boundary;  ///< (a, d2T(a)) where defined
  std::optional<double> hopf_a;  ///< a at which trace(J*) crosses zero inside the a-range, if any

  Regime at(std::size_t i_a, std::size_t i_d2) const { return labels[i_d2 * a_values.size() + i_a]; }
};

/// Labels a resolution_a x resolution_d2 grid of (a, d2) on inclusive ranges.
/// Cells whose equilibrium cannot be computed are labelled Unknown.
RegimeMap regime_map(const KineticParams& base, double d1, std::pair<double, double> a_range,
                     std::pair<double, double> d2_range, int resolution_a, int resolution_d2);

}  // namespace rdlab
