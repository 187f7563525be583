#ifndef FT_SYSTEM_HPP
#define FT_SYSTEM_HPP

#include <Eigen/Dense>

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ft {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// ---------------------------------------------------------------------------
// Errors. Each names the condition it reports; catch sites dispatch on type.
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define FT_DEFINE_ERROR(Name)                                 \
  struct Name : Error {                                       \
    explicit Name(const std::string& msg) : Error(msg) {}     \
  }

FT_DEFINE_ERROR(NonHyperbolic);
FT_DEFINE_ERROR(OutOfDomain);
FT_DEFINE_ERROR(DerivativeNoise);
FT_DEFINE_ERROR(NewtonDiverged);
FT_DEFINE_ERROR(CurveLeftDomain);
FT_DEFINE_ERROR(OdeStepRejected);
FT_DEFINE_ERROR(UnclassifiedFamily);
FT_DEFINE_ERROR(GridTooCoarse);
FT_DEFINE_ERROR(RiemannFailure);
FT_DEFINE_ERROR(NPBudgetExceeded);
FT_DEFINE_ERROR(FrontExplosion);
FT_DEFINE_ERROR(TimeOutOfRange);
FT_DEFINE_ERROR(StateLeftDomain);
FT_DEFINE_ERROR(TVBlowup);
FT_DEFINE_ERROR(InconsistentNode);
FT_DEFINE_ERROR(ZeroJumpDenominator);
FT_DEFINE_ERROR(QuadratureFailure);
FT_DEFINE_ERROR(UnknownSystem);
FT_DEFINE_ERROR(IoError);
FT_DEFINE_ERROR(SchemaMismatch);

#undef FT_DEFINE_ERROR

// ---------------------------------------------------------------------------
// System description
// ---------------------------------------------------------------------------

enum class FieldClass { GenuinelyNonlinear, LinearlyDegenerate, Unclassified };

/// Axis-aligned state-space box the solver is allowed to work in.
struct Box {
  Vec lo, hi;

  bool contains(const Vec& u, double pad = 0.0) const {
    for (int i = 0; i < u.size(); ++i)
      if (u[i] < lo[i] - pad || u[i] > hi[i] + pad) return false;
    return true;
  }
  double diameter() const { return (hi - lo).norm(); }
};

/// A conservative system u_t + F(u)_x = g(t,x,u) on a state box.
///
/// `jacobian` may be empty, in which case DF is formed by central differences
/// of `flux`. `source` may be empty (homogeneous system). `source_x_bound` is
/// the integrable bound alpha with |g_x(t,x,u)| <= alpha(x).
struct SystemSpec {
  std::string name;
  int dim = 1;
  std::function<Vec(const Vec&)> flux;
  std::function<Mat(const Vec&)> jacobian;
  std::function<Vec(double, double, const Vec&)> source;
  std::function<double(double)> source_x_bound;
  double alpha_l1 = 0.0;          // L1 norm of alpha
  double source_lipschitz = 0.0;  // Lipschitz bound of g in (x,u)
  Box domain;
  std::vector<FieldClass> field_class;

  bool has_source() const { return static_cast<bool>(source); }

  Vec flux_at(const Vec& u) const { return flux(u); }

  Mat jacobian_at(const Vec& u) const {
    if (jacobian) return jacobian(u);
    // central differences column by column
    const int n = dim;
    Mat J(n, n);
    for (int j = 0; j < n; ++j) {
      const double h = 1e-6 * (1.0 + std::abs(u[j]));
      Vec up = u, um = u;
      up[j] += h;
      um[j] -= h;
      J.col(j) = (flux(up) - flux(um)) / (2.0 * h);
    }
    return J;
  }

  Vec source_at(double t, double x, const Vec& u) const {
    if (!source) return Vec::Zero(dim);
    return source(t, x, u);
  }

  double alpha_at(double x) const {
    if (!source_x_bound) return 0.0;
    return source_x_bound(x);
  }

  bool is_np_family(int family) const { return family == dim + 1; }
};

// ---------------------------------------------------------------------------
// Piecewise-constant profiles
// ---------------------------------------------------------------------------

/// A BV piecewise-constant profile: m strictly increasing breakpoints and
/// m+1 states. states[k] is the value on (xs[k-1], xs[k]).
struct PiecewiseConstant {
  double t = 0.0;
  std::vector<double> xs;
  std::vector<Vec> states;

  int jumps() const { return static_cast<int>(xs.size()); }

  const Vec& value_left_of(int k) const { return states[k]; }
  const Vec& value_right_of(int k) const { return states[k + 1]; }

  /// Right-continuous evaluation.
  const Vec& operator()(double x) const {
    std::size_t k = 0;
    while (k < xs.size() && xs[k] <= x) ++k;
    return states[k];
  }

  double total_variation() const {
    double tv = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k)
      tv += (states[k + 1] - states[k]).lpNorm<1>();
    return tv;
  }

  void check_valid() const {
    if (states.size() != xs.size() + 1)
      throw Error("PiecewiseConstant: states/breakpoints size mismatch");
    for (std::size_t k = 1; k < xs.size(); ++k)
      if (!(xs[k - 1] < xs[k]))
        throw Error("PiecewiseConstant: breakpoints not strictly increasing");
  }
};

/// One discontinuity of a snapshot, with full left/right state data.
/// family in 1..N for physical fronts, N+1 for nonphysical ones.
struct FrontView {
  long id = -1;
  int family = 0;
  double pos = 0.0;
  double speed = 0.0;
  double size = 0.0;  // signed wave size; 0 for nonphysical fronts
  Vec uL, uR;

  double strength() const {
    return size != 0.0 ? std::abs(size) : (uR - uL).norm();
  }
};

/// Profile at a fixed time with per-front annotations (sorted by position).
struct Snapshot {
  double t = 0.0;
  Vec left_state;
  std::vector<FrontView> fronts;

  PiecewiseConstant profile() const {
    PiecewiseConstant pc;
    pc.t = t;
    pc.states.push_back(left_state);
    for (std::size_t k = 0; k < fronts.size(); ++k) {
      // merge coincident positions (outgoing fans sampled at a node time)
      if (!pc.xs.empty() && !(pc.xs.back() < fronts[k].pos)) {
        pc.states.back() = fronts[k].uR;
      } else {
        pc.xs.push_back(fronts[k].pos);
        pc.states.push_back(fronts[k].uR);
      }
    }
    return pc;
  }

  double total_variation() const {
    double tv = 0.0;
    for (const auto& f : fronts) tv += (f.uR - f.uL).lpNorm<1>();
    return tv;
  }
};

}  // namespace ft

#endif  // FT_SYSTEM_HPP
