#ifndef FT_ENGINE_HPP
#define FT_ENGINE_HPP

#include "ft/riemann.hpp"
#include "ft/trajectory.hpp"

#include <optional>
#include <queue>

namespace ft {

struct EngineConfig {
  double eps = 0.01;
  double lambda_hat = 0.0;  // 0 = pick max sampled speed + 1
  double rho = -1.0;        // simplified-solver threshold; < 0 = eps^3
  double kappa = 10.0;
  long front_cap = 1000000;
  int sigma_samples = 6;
  bool full_functionals = true;  // V and Q at every node
  bool assert_glimm = false;     // throw when Upsilon increases at a node
  double glimm_tol = 1e-12;
  RiemannOptions riemann;
};

struct PredictedEvent {
  double t = 0.0, x = 0.0;
  long left = -1, right = -1;
};

/// Event-driven front tracking for the homogeneous system. The engine owns a
/// Trajectory and appends every front, node and measure atom to it. The
/// fracstep layer drives the update-time mutations through the replace/insert
/// API below.
class Engine {
 public:
  Engine(const SystemSpec& sys, const PiecewiseConstant& datum,
         const EngineConfig& cfg, Trajectory* out);

  double clock() const { return clock_; }
  double np_total_strength() const { return np_strength_; }
  long live_count() const { return static_cast<long>(live_.size()); }

  /// Earliest collision strictly after the clock, or nothing.
  std::optional<PredictedEvent> next_event();

  /// Resolves all events up to and including t_target, then advances the
  /// clock.
  void run_to(double t_target);

  Snapshot snapshot() const;
  std::vector<WaveSample> wave_samples() const;
  std::vector<long> live_ids() const { return live_; }

  Trajectory& trajectory() { return *traj_; }
  const SystemSpec& system() const { return sys_; }
  const EngineConfig& config() const { return cfg_; }

  // --- update-step support (fracstep) ------------------------------------

  /// Kills `id` and inserts `seeds` at its position; logs a node of `kind`.
  long replace_front(long id, const std::vector<FrontSeed>& seeds,
                     NodeKind kind);
  /// Inserts fronts at position x (no incoming); logs a node of `kind`.
  long insert_fronts(double x, const std::vector<FrontSeed>& seeds,
                     NodeKind kind);
  void set_left_state(const Vec& v);
  /// Nudges fronts within `tol` of a multiple of `cell` by `shift`.
  int nudge_off_grid(double cell, double tol = 1e-12, double shift = 1e-13);
  /// Drops and re-predicts every queued event (after bulk mutations).
  void rebuild_queue();
  /// Appends a functional-series row at the current clock.
  void emit_series_row();

  double v_current() const;
  double q_current() const;

 private:
  struct QueuedEvent {
    double t, x;
    int fam;
    long a, b;
    unsigned va, vb;
    bool operator>(const QueuedEvent& o) const {
      if (t != o.t) return t > o.t;
      if (x != o.x) return x > o.x;
      if (fam != o.fam) return fam > o.fam;
      if (a != o.a) return a > o.a;
      return b > o.b;
    }
  };

  const FrontRecord& rec(long id) const { return traj_->fronts[id]; }
  FrontRecord& rec(long id) { return traj_->fronts[id]; }

  long spawn_front(const FrontSeed& seed, double t, double x, long node);
  void kill_front(long id, double t, long node);
  int live_index(long id) const;
  void predict_pair(int k);  // adjacent pair (live_[k], live_[k+1])
  void predict_around(int k);
  void resolve(const QueuedEvent& ev);
  std::vector<FrontSeed> outgoing_seeds(const FrontRecord& l,
                                        const FrontRecord& r, SolverMode mode,
                                        double t);
  void check_np_budget() const;
  void log_functionals(NodeRecord& nd, bool pre);

  SystemSpec sys_;
  EngineConfig cfg_;
  Trajectory* traj_;
  double clock_ = 0.0;
  double np_strength_ = 0.0;
  std::vector<long> live_;  // sorted by position
  std::priority_queue<QueuedEvent, std::vector<QueuedEvent>,
                      std::greater<QueuedEvent>>
      queue_;
};

}  // namespace ft

#endif  // FT_ENGINE_HPP
