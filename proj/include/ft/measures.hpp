#ifndef FT_MEASURES_HPP
#define FT_MEASURES_HPP

#include "ft/riemann.hpp"
#include "ft/system.hpp"

#include <span>
#include <vector>

namespace ft {

// ---------------------------------------------------------------------------
// Signed atomic measure on the line
// ---------------------------------------------------------------------------

struct Atom1D {
  double x = 0.0;
  double w = 0.0;
  long front_id = -1;
  int family = 0;
};

struct AtomicMeasure1D {
  double t = 0.0;
  std::vector<Atom1D> atoms;  // sorted by x

  void sort();
  double total() const;      // signed
  double total_abs() const;  // |mu|(R)
  /// Signed mass of the closed interval [a,b].
  double value(double a, double b) const;
  double positive_value(double a, double b) const;
  double negative_value(double a, double b) const;  // >= 0
  AtomicMeasure1D positive_part() const;
  AtomicMeasure1D negative_part() const;  // nonnegative weights
  AtomicMeasure1D restricted(double a, double b) const;
};

// ---------------------------------------------------------------------------
// Nonnegative / signed atomic measures on the (t,x)-plane
// ---------------------------------------------------------------------------

enum class MeasureKind {
  Interaction,
  InteractionCancellation,
  Source,
  WaveBalance,     // signed
  JumpBalanceAbs,  // |mu_i^jump|
  ICS,             // mu^IC + mu^source
  ICJS,            // mu^IC + sum_i |mu_i^jump| + mu^source
};

struct SpaceTimeAtom {
  double t = 0.0, x = 0.0, w = 0.0;
  int family = 0;
  long node_id = -1;
};

struct SpaceTimeMeasure {
  MeasureKind kind = MeasureKind::Interaction;
  std::vector<SpaceTimeAtom> atoms;

  double total() const;
  double total_abs() const;
  /// Mass of the strip (t1, t2] x R (absolute values for signed kinds).
  double strip_mass(double t1, double t2) const;
  /// Mass of atoms selected by an arbitrary region predicate.
  template <class Pred>
  double region_mass(Pred&& inside) const {
    double m = 0.0;
    for (const auto& a : atoms)
      if (inside(a.t, a.x)) m += std::abs(a.w);
    return m;
  }
  void append(double t, double x, double w, int family, long node);
};

// ---------------------------------------------------------------------------
// Glimm functionals
// ---------------------------------------------------------------------------

/// Per-front data the functionals need. `sigma` samples the wave speed along
/// the front's elementary curve at uniform parameters in [0, |size|]
/// (Rankine-Hugoniot speeds on shock branches, characteristic speeds on
/// rarefaction branches). Nonphysical fronts carry family N+1, their strength
/// in `size` and a single flat sigma sample at lambda_hat.
struct WaveSample {
  int family = 0;
  double pos = 0.0;
  double size = 0.0;  // signed; nonphysical: +strength
  std::vector<double> sigma;
};

/// sigma samples for a newly built front (n_samples+1 values).
std::vector<double> sample_sigma(const SystemSpec& sys, const Vec& uL,
                                 int family, double size, WaveKind kind,
                                 int n_samples,
                                 const RiemannOptions& opt = {});

struct GlimmOptions {
  double kappa = 10.0;
  bool approaching_only_quadratic = false;  // config switch, see docs
};

/// Total wave strength V = sum |s| (nonphysical strengths included).
double glimm_V(std::span<const WaveSample> waves);

/// Interaction potential: linear term over approaching different-family
/// pairs plus the quadratic same-family term
/// (1/4) sum int int |sigma(tau') - sigma(tau'')|.
double glimm_Q(std::span<const WaveSample> waves, const GlimmOptions& opt = {});

double upsilon(std::span<const WaveSample> waves, double kappa,
               const GlimmOptions& opt = {});

/// Exact integral of |sigma' - sigma''| over the parameter rectangle of two
/// piecewise-affine speed profiles (used by the quadratic Glimm term).
double mutual_speed_integral(const WaveSample& a, const WaveSample& b);

// ---------------------------------------------------------------------------
// Amount of interaction
// ---------------------------------------------------------------------------

struct InteractionAmount {
  double amount = 0.0;
  bool extended_rule = false;  // same-family case outside the two stated ones
};

/// I(s', s'') for a left front `a` hitting a right front `b`. Different
/// families (nonphysical counts as N+1): |s's''|. Same-family same-sign
/// shocks: |s's''| |sigma' - sigma''|. Other same-family cases use the
/// |s's''| extension and are flagged.
InteractionAmount interaction_amount(const SystemSpec& sys, int family_a,
                                     double size_a, double speed_a,
                                     int family_b, double size_b,
                                     double speed_b);

/// Same-family cancellation |s'| + |s''| - |s' + s''|.
double cancellation_amount(int family_a, double size_a, int family_b,
                           double size_b);

// ---------------------------------------------------------------------------
// Wave measures
// ---------------------------------------------------------------------------

/// i-th wave measure of a snapshot: one atom per front with weight
/// l~_i(uL,uR) . (uR - uL) from the averaged-matrix left eigenvector.
AtomicMeasure1D wave_measure(const SystemSpec& sys, const Snapshot& snap,
                             int family);

/// All families at once (saves the averaged eigendecompositions).
std::vector<AtomicMeasure1D> wave_measures(const SystemSpec& sys,
                                           const Snapshot& snap);

}  // namespace ft

#endif  // FT_MEASURES_HPP
