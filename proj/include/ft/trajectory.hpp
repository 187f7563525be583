#ifndef FT_TRAJECTORY_HPP
#define FT_TRAJECTORY_HPP

#include "ft/measures.hpp"
#include "ft/system.hpp"

#include <limits>
#include <string>
#include <vector>

namespace ft {

enum class NodeKind { Birth, Interaction, Update };
enum class SolverMode { None, Accurate, Simplified };

/// One straight discontinuity line of the run. Fronts are immutable: an
/// interaction or update kills its incoming fronts and creates new ones, so a
/// physical shock persisting through nodes is a chain of records linked by
/// the node log.
struct FrontRecord {
  long id = -1;
  int family = 0;  // 1..N physical, N+1 nonphysical
  bool np = false;
  double speed = 0.0;
  double size = 0.0;  // signed curve parameter; 0 for nonphysical fronts
  Vec uL, uR;
  double birth_t = 0.0, birth_x = 0.0;
  double death_t = std::numeric_limits<double>::infinity();
  long birth_node = -1, death_node = -1;
  // kinematic anchor; equals the birth point unless a simultaneity nudge hit
  double anchor_t = 0.0, anchor_x = 0.0;
  unsigned kin_ver = 0;       // bumped by nudges, invalidates queued events
  std::vector<double> sigma;  // speed samples along the elementary curve

  double pos_at(double t) const { return anchor_x + speed * (t - anchor_t); }
  bool alive_at(double t) const { return birth_t <= t && t < death_t; }
  double strength() const { return np ? (uR - uL).norm() : std::abs(size); }
  double signed_size() const { return np ? strength() : size; }
};

struct NodeRecord {
  long id = -1;
  NodeKind kind = NodeKind::Interaction;
  double t = 0.0, x = 0.0;
  std::vector<long> in, out;
  double amount = 0.0;        // I(s', s'')
  double cancellation = 0.0;  // same-family cancellation
  bool extended_rule = false;
  SolverMode mode = SolverMode::None;
  double V_pre = std::numeric_limits<double>::quiet_NaN();
  double Q_pre = std::numeric_limits<double>::quiet_NaN();
  double V_post = std::numeric_limits<double>::quiet_NaN();
  double Q_post = std::numeric_limits<double>::quiet_NaN();
};

struct FunctionalRow {
  double t = 0.0;
  double V = 0.0, Q = 0.0, Ups = 0.0, TV = 0.0;
  Vec mass;
  long n_fronts = 0;
  double np_strength = 0.0;
};

/// Full event history of one run.
struct Trajectory {
  SystemSpec system;
  double eps = 0.0, tau = 0.0, beta = 0.0, kappa = 10.0, lambda_hat = 0.0;
  double T = 0.0;
  std::string config_echo;

  std::vector<FrontRecord> fronts;  // id == index
  std::vector<NodeRecord> nodes;    // id == index
  std::vector<std::pair<double, Vec>> left_states;  // valid from t (sorted)
  SpaceTimeMeasure mu_interaction{MeasureKind::Interaction, {}};
  SpaceTimeMeasure mu_ic{MeasureKind::InteractionCancellation, {}};
  SpaceTimeMeasure mu_source{MeasureKind::Source, {}};
  std::vector<FunctionalRow> series;

  Vec left_state_at(double t) const;
  /// Profile just after time t (right-continuous representative).
  Snapshot snapshot(double t) const;
  /// Profile just before time t.
  Snapshot snapshot_pre(double t) const;
  std::vector<WaveSample> wave_samples(double t) const;
  std::vector<double> node_times() const;  // sorted, unique
};

// ---------------------------------------------------------------------------
// (beta, i)-approximate discontinuity curves
// ---------------------------------------------------------------------------

enum class CurveTermination { Horizon, StrengthFloor, Cancelled, Merged };

struct CurveSegment {
  long front_id = -1;
  double t0 = 0.0, t1 = 0.0;
  double size = 0.0;
};

/// Maximal leftmost polygonal chain of i-fronts with |s| >= beta/4 throughout
/// and |s| >= beta at some time.
struct DiscontinuityCurve {
  int family = 0;
  double beta = 0.0;
  std::vector<CurveSegment> segments;  // consecutive in time
  CurveTermination termination = CurveTermination::Horizon;
  double max_strength = 0.0;

  double t_start() const { return segments.front().t0; }
  double t_end() const { return segments.back().t1; }
  /// Front occupying the curve at time t (post convention), or -1.
  long front_at(double t) const;
  bool covers(double t) const { return t >= t_start() && t < t_end(); }
};

std::vector<DiscontinuityCurve> track_beta_discontinuities(
    const Trajectory& traj, double beta, int family);

/// Splits a wave measure into the part carried by tracked curves and the
/// remainder. Atoms are matched by front id; the parts sum to the input
/// exactly.
std::pair<AtomicMeasure1D, AtomicMeasure1D> split_jump_cont(
    const AtomicMeasure1D& ups, const std::vector<DiscontinuityCurve>& curves,
    double t);

// ---------------------------------------------------------------------------
// Wave-balance measures
// ---------------------------------------------------------------------------

/// nu-i-wave-balance measures: one atom per node and family, equal to the
/// outgoing minus incoming i-sizes, plus the projection differences of
/// nonphysical jumps.
std::vector<SpaceTimeMeasure> wave_balance_measures(const Trajectory& traj);

/// Jump part of the wave balance restricted to tracked curves, by the node
/// case table (-s' at terminal nodes, s at births, s-s'-s'' at triple points,
/// s-s' otherwise).
SpaceTimeMeasure jump_balance_measure(
    const Trajectory& traj, const std::vector<DiscontinuityCurve>& curves,
    int family);

struct CompositeMeasures {
  SpaceTimeMeasure ics;   // mu^IC + mu^source
  SpaceTimeMeasure icjs;  // mu^IC + sum_i |mu_i^jump| + mu^source
  std::vector<SpaceTimeMeasure> jump_balance;  // per family
};

CompositeMeasures composite_measures(
    const Trajectory& traj,
    const std::vector<std::vector<DiscontinuityCurve>>& curves_per_family);

}  // namespace ft

#endif  // FT_TRAJECTORY_HPP
