#ifndef FT_RIEMANN_HPP
#define FT_RIEMANN_HPP

#include "ft/algebra.hpp"
#include "ft/system.hpp"

#include <utility>
#include <vector>

namespace ft {

enum class WaveKind { Shock, Rarefaction, Contact };

/// One elementary piece of a wave fan. For shocks and contacts the two speeds
/// coincide with the Rankine-Hugoniot speed; a rarefaction spans
/// [speed_left, speed_right].
struct SubWave {
  WaveKind kind = WaveKind::Shock;
  Vec left, right;
  double speed_left = 0.0, speed_right = 0.0;
  double size = 0.0;  // signed, in the curve parameter of its family
};

struct FanEntry {
  int family = 0;
  double size = 0.0;
  std::vector<SubWave> sub;  // ordered by speed
};

/// Self-similar solution of a Riemann problem: left state, right state and
/// the per-family entries in order of increasing family index.
struct WaveFan {
  Vec left, right;
  std::vector<FanEntry> entries;
};

struct RiemannOptions {
  double newton_tol = 1e-12;
  int max_newton_iter = 50;
  double curve_radius = 0.5;       // |s| cap for elementary curves
  int ode_steps = 32;              // RK4 steps per curve radius
  int envelope_samples_per_unit = 4096;
  double solve_tol = 1e-9;         // acceptance tolerance for solve_riemann
  double domain_pad = 1e-7;
};

/// Hugoniot point of the i-th family: state and RH speed at curve parameter
/// s = l_i(uL) . (uR - uL).
std::pair<Vec, double> hugoniot_point(const SystemSpec& sys, const Vec& uL,
                                      int family, double s,
                                      const RiemannOptions& opt = {});

/// RH speed along the i-th Hugoniot curve.
double hugoniot_speed(const SystemSpec& sys, const Vec& uL, int family,
                      double s, const RiemannOptions& opt = {});

/// Point on the i-th rarefaction (integral) curve, parameter matched to
/// l_i(uL) . (u - uL) = s.
Vec rarefaction_point(const SystemSpec& sys, const Vec& uL, int family,
                      double s, const RiemannOptions& opt = {});

/// Elementary Lax curve: rarefaction branch for s >= 0, shock branch for
/// s < 0 on genuinely nonlinear families; the Hugoniot curve on linearly
/// degenerate ones. Unclassified families are rejected.
std::pair<Vec, WaveKind> lax_curve(const SystemSpec& sys, const Vec& uL,
                                   int family, double s,
                                   const RiemannOptions& opt = {});

/// Speed sigma_{x,i}(tau) along the elementary curve issued at uL, tau signed
/// with the same convention as s (shock branch: RH speed; rarefaction branch:
/// characteristic speed).
double sigma_along_curve(const SystemSpec& sys, const Vec& uL, int family,
                         double tau, const RiemannOptions& opt = {});

/// Full Riemann solver. For scalar unclassified fluxes the fan comes from the
/// flux envelope; otherwise sizes (s_1..s_N) are found by Newton on the
/// composite Lax map.
WaveFan solve_riemann(const SystemSpec& sys, const Vec& uL, const Vec& uR,
                      const RiemannOptions& opt = {});

/// Scalar Riemann problem via the convex (uL < uR) or concave (uL > uR)
/// envelope of the sampled flux.
WaveFan scalar_envelope_solve(const SystemSpec& sys, double uL, double uR,
                              const RiemannOptions& opt = {});

/// A front produced by fan discretization, ready for insertion into the
/// engine: shocks and contacts keep their exact speed, rarefactions are cut
/// into slices of size <= eps whose speed is the midpoint of the slice's
/// characteristic range.
struct FrontSeed {
  int family = 0;
  double size = 0.0;
  double speed = 0.0;
  Vec left, right;
  WaveKind kind = WaveKind::Shock;
};

std::vector<FrontSeed> discretize_fan(const SystemSpec& sys, const WaveFan& fan,
                                      double eps,
                                      const RiemannOptions& opt = {});

}  // namespace ft

#endif  // FT_RIEMANN_HPP
