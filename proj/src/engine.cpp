#include "ft/engine.hpp"

#include <algorithm>
#include <cmath>

namespace ft {

namespace {

double auto_lambda_hat(const SystemSpec& sys, const PiecewiseConstant& datum) {
  double lmax = -std::numeric_limits<double>::infinity();
  auto probe = [&](const Vec& u) {
    try {
      const EigenStructure es = eigen(sys, u);
      lmax = std::max(lmax, es.lambda.maxCoeff());
    } catch (const Error&) {
    }
  };
  for (const auto& s : datum.states) probe(s);
  // box corners and center
  const int n = sys.dim;
  for (long mask = 0; mask < (1L << n); ++mask) {
    Vec u(n);
    for (int d = 0; d < n; ++d)
      u[d] = (mask >> d) & 1 ? sys.domain.hi[d] : sys.domain.lo[d];
    probe(u);
  }
  probe(0.5 * (sys.domain.lo + sys.domain.hi));
  if (!std::isfinite(lmax)) throw Error("could not sample wave speeds");
  return lmax + 1.0;
}

}  // namespace

Engine::Engine(const SystemSpec& sys, const PiecewiseConstant& datum,
               const EngineConfig& cfg, Trajectory* out)
    : sys_(sys), cfg_(cfg), traj_(out) {
  if (!traj_) throw Error("engine needs a trajectory sink");
  datum.check_valid();
  if (cfg_.rho < 0) cfg_.rho = cfg_.eps * cfg_.eps * cfg_.eps;
  if (cfg_.lambda_hat <= 0) cfg_.lambda_hat = auto_lambda_hat(sys_, datum);
  traj_->system = sys_;
  traj_->eps = cfg_.eps;
  traj_->kappa = cfg_.kappa;
  traj_->lambda_hat = cfg_.lambda_hat;
  clock_ = datum.t;
  traj_->left_states.emplace_back(clock_, datum.states.front());

  for (int k = 0; k < datum.jumps(); ++k) {
    const Vec& uL = datum.states[k];
    const Vec& uR = datum.states[k + 1];
    if ((uR - uL).lpNorm<Eigen::Infinity>() == 0.0) continue;
    WaveFan fan;
    try {
      fan = solve_riemann(sys_, uL, uR, cfg_.riemann);
    } catch (const Error& e) {
      throw RiemannFailure("init: Riemann problem failed at x = " +
                           std::to_string(datum.xs[k]) + ": " + e.what());
    }
    const auto seeds = discretize_fan(sys_, fan, cfg_.eps, cfg_.riemann);
    insert_fronts(datum.xs[k], seeds, NodeKind::Birth);
  }
  rebuild_queue();
  emit_series_row();
}

int Engine::live_index(long id) const {
  const auto it = std::find(live_.begin(), live_.end(), id);
  return it == live_.end() ? -1 : static_cast<int>(it - live_.begin());
}

long Engine::spawn_front(const FrontSeed& seed, double t, double x,
                         long node) {
  if (static_cast<long>(traj_->fronts.size()) >= cfg_.front_cap)
    throw FrontExplosion("front cap exceeded (" +
                         std::to_string(cfg_.front_cap) + ")");
  FrontRecord f;
  f.id = static_cast<long>(traj_->fronts.size());
  f.family = seed.family;
  f.np = seed.family == sys_.dim + 1;
  f.speed = seed.speed;
  f.size = f.np ? 0.0 : seed.size;
  f.uL = seed.left;
  f.uR = seed.right;
  f.birth_t = f.anchor_t = t;
  f.birth_x = f.anchor_x = x;
  f.birth_node = node;
  f.sigma = sample_sigma(sys_, seed.left, seed.family, f.size, seed.kind,
                         cfg_.sigma_samples, cfg_.riemann);
  if (f.np) np_strength_ += f.strength();
  traj_->fronts.push_back(std::move(f));
  return traj_->fronts.back().id;
}

void Engine::kill_front(long id, double t, long node) {
  FrontRecord& f = rec(id);
  f.death_t = t;
  f.death_node = node;
  if (f.np) np_strength_ -= f.strength();
}

void Engine::predict_pair(int k) {
  if (k < 0 || k + 1 >= static_cast<int>(live_.size())) return;
  const FrontRecord& l = rec(live_[k]);
  const FrontRecord& r = rec(live_[k + 1]);
  const double dv = l.speed - r.speed;
  if (dv <= 1e-14) return;
  const double gap = r.pos_at(clock_) - l.pos_at(clock_);
  double tc = clock_ + std::max(gap, 0.0) / dv;
  QueuedEvent ev;
  ev.t = tc;
  ev.x = l.pos_at(tc);
  ev.fam = std::min(l.family, r.family);
  ev.a = l.id;
  ev.b = r.id;
  ev.va = l.kin_ver;
  ev.vb = r.kin_ver;
  queue_.push(ev);
}

void Engine::predict_around(int k) {
  predict_pair(k - 1);
  predict_pair(k);
}

std::optional<PredictedEvent> Engine::next_event() {
  while (!queue_.empty()) {
    const QueuedEvent ev = queue_.top();
    const FrontRecord& a = rec(ev.a);
    const FrontRecord& b = rec(ev.b);
    const bool alive = !std::isfinite(a.death_t) && !std::isfinite(b.death_t);
    bool valid = alive && a.kin_ver == ev.va && b.kin_ver == ev.vb;
    if (valid) {
      const int ia = live_index(ev.a);
      valid = ia >= 0 && ia + 1 < static_cast<int>(live_.size()) &&
              live_[ia + 1] == ev.b;
    }
    if (!valid) {
      queue_.pop();
      continue;
    }
    PredictedEvent out;
    out.t = std::max(ev.t, clock_);
    out.x = ev.x;
    out.left = ev.a;
    out.right = ev.b;
    return out;
  }
  return std::nullopt;
}

void Engine::run_to(double t_target) {
  if (t_target < clock_ - 1e-12)
    throw TimeOutOfRange("run_to: target before the clock");
  while (true) {
    auto ev = next_event();
    if (!ev || ev->t > t_target) break;
    QueuedEvent q = queue_.top();
    queue_.pop();
    q.t = std::max(q.t, clock_);
    resolve(q);
  }
  clock_ = std::max(clock_, t_target);
}

std::vector<FrontSeed> Engine::outgoing_seeds(const FrontRecord& l,
                                              const FrontRecord& r,
                                              SolverMode mode, double) {
  const Vec uL = l.uL;
  const Vec uR = r.uR;
  std::vector<FrontSeed> seeds;

  auto elementary_seed = [&](const Vec& from, int family,
                             double s) -> FrontSeed {
    FrontSeed f;
    f.family = family;
    f.size = s;
    f.left = from;
    auto [u, kind] = lax_curve(sys_, from, family, s, cfg_.riemann);
    f.right = u;
    f.kind = kind;
    if (kind == WaveKind::Rarefaction) {
      const double l0 = eigen(sys_, from).lambda[family - 1];
      const double l1 = eigen(sys_, u).lambda[family - 1];
      f.speed = 0.5 * (l0 + l1);
    } else {
      f.speed = hugoniot_speed(sys_, from, family, s, cfg_.riemann);
    }
    return f;
  };

  auto append_np = [&](const Vec& from) {
    const double scale = 1.0 + from.norm() + uR.norm();
    if ((uR - from).norm() <= 1e-13 * scale) return;
    FrontSeed f;
    f.family = sys_.dim + 1;
    f.size = 0.0;
    f.speed = cfg_.lambda_hat;
    f.left = from;
    f.right = uR;
    f.kind = WaveKind::Contact;
    seeds.push_back(std::move(f));
  };

  if (mode == SolverMode::Accurate) {
    WaveFan fan;
    try {
      fan = solve_riemann(sys_, uL, uR, cfg_.riemann);
    } catch (const Error& e) {
      throw RiemannFailure(std::string("interaction: ") + e.what());
    }
    seeds = discretize_fan(sys_, fan, cfg_.eps, cfg_.riemann);
  } else if (l.np) {
    // nonphysical front overtakes a physical one: the physical wave keeps its
    // size, the residual is carried on by the nonphysical front
    const FrontSeed phys = elementary_seed(uL, r.family, r.size);
    const Vec u1 = phys.right;
    seeds.push_back(phys);
    append_np(u1);
  } else {
    const int kl = l.family, kr = r.family;
    if (kl == kr) {
      const double s = l.size + r.size;
      Vec u1 = uL;
      if (std::abs(s) > 1e-14) {
        const FrontSeed w = elementary_seed(uL, kl, s);
        u1 = w.right;
        seeds.push_back(w);
      }
      append_np(u1);
    } else {
      // crossing: the slower family leaves first, sizes unchanged
      const FrontSeed w1 = elementary_seed(uL, kr, r.size);
      const FrontSeed w2 = elementary_seed(w1.right, kl, l.size);
      seeds.push_back(w1);
      seeds.push_back(w2);
      append_np(w2.right);
    }
  }
  std::stable_sort(seeds.begin(), seeds.end(),
                   [](const FrontSeed& a, const FrontSeed& b) {
                     return a.speed < b.speed;
                   });
  return seeds;
}

void Engine::resolve(const QueuedEvent& ev) {
  clock_ = std::max(clock_, ev.t);
  const int k = live_index(ev.a);
  const double x_star = rec(ev.a).pos_at(clock_);

  // simultaneity guard: nudge third fronts off the collision point
  for (int j : {k - 1, k + 2}) {
    if (j < 0 || j >= static_cast<int>(live_.size())) continue;
    FrontRecord& g = rec(live_[j]);
    if (std::abs(g.pos_at(clock_) - x_star) <= 1e-12) {
      g.anchor_x = g.pos_at(clock_);
      g.anchor_t = clock_;
      g.speed += 1e-13;
      ++g.kin_ver;
      predict_around(j);
    }
  }

  const FrontRecord& l = rec(ev.a);
  const FrontRecord& r = rec(ev.b);

  const InteractionAmount ia =
      interaction_amount(sys_, l.family, l.signed_size(), l.speed, r.family,
                         r.signed_size(), r.speed);
  const double cancel =
      (l.np || r.np) ? 0.0
                     : cancellation_amount(l.family, l.size, r.family, r.size);
  const SolverMode mode = (l.np || r.np || ia.amount < cfg_.rho)
                              ? SolverMode::Simplified
                              : SolverMode::Accurate;

  NodeRecord nd;
  nd.id = static_cast<long>(traj_->nodes.size());
  nd.kind = NodeKind::Interaction;
  nd.t = clock_;
  nd.x = x_star;
  nd.in = {ev.a, ev.b};
  nd.amount = ia.amount;
  nd.cancellation = cancel;
  nd.extended_rule = ia.extended_rule;
  nd.mode = mode;
  if (cfg_.full_functionals) {
    nd.V_pre = v_current();
    nd.Q_pre = q_current();
  }

  const auto seeds = outgoing_seeds(l, r, mode, clock_);

  kill_front(ev.a, clock_, nd.id);
  kill_front(ev.b, clock_, nd.id);
  live_.erase(live_.begin() + k, live_.begin() + k + 2);
  int at = k;
  for (const auto& seed : seeds) {
    const long id = spawn_front(seed, clock_, x_star, nd.id);
    live_.insert(live_.begin() + at, id);
    nd.out.push_back(id);
    ++at;
  }

  if (cfg_.full_functionals) {
    nd.V_post = v_current();
    nd.Q_post = q_current();
    if (cfg_.assert_glimm) {
      const double dUps = (nd.V_post - nd.V_pre) +
                          cfg_.kappa * (nd.Q_post - nd.Q_pre);
      if (dUps > cfg_.glimm_tol)
        throw Error("Upsilon increased by " + std::to_string(dUps) +
                    " at node " + std::to_string(nd.id));
    }
  }

  if (ia.amount > 0.0)
    traj_->mu_interaction.append(clock_, x_star, ia.amount, 0, nd.id);
  if (ia.amount + cancel > 0.0)
    traj_->mu_ic.append(clock_, x_star, ia.amount + cancel, 0, nd.id);

  traj_->nodes.push_back(std::move(nd));
  check_np_budget();

  for (int j = k - 1; j <= at - 1; ++j) predict_pair(j);
  emit_series_row();
}

void Engine::check_np_budget() const {
  if (np_strength_ > cfg_.eps * (1.0 + 1e-9))
    throw NPBudgetExceeded("total nonphysical strength " +
                           std::to_string(np_strength_) + " exceeds eps = " +
                           std::to_string(cfg_.eps));
}

Snapshot Engine::snapshot() const {
  Snapshot s;
  s.t = clock_;
  s.left_state = traj_->left_states.back().second;
  for (long id : live_) {
    const FrontRecord& f = rec(id);
    FrontView fv;
    fv.id = f.id;
    fv.family = f.family;
    fv.pos = f.pos_at(clock_);
    fv.speed = f.speed;
    fv.size = f.size;
    fv.uL = f.uL;
    fv.uR = f.uR;
    s.fronts.push_back(std::move(fv));
  }
  return s;
}

std::vector<WaveSample> Engine::wave_samples() const {
  std::vector<WaveSample> ws;
  ws.reserve(live_.size());
  for (long id : live_) {
    const FrontRecord& f = rec(id);
    WaveSample w;
    w.family = f.family;
    w.pos = f.pos_at(clock_);
    w.size = f.signed_size();
    w.sigma = f.sigma;
    ws.push_back(std::move(w));
  }
  return ws;
}

double Engine::v_current() const {
  double v = 0.0;
  for (long id : live_) v += rec(id).strength();
  return v;
}

double Engine::q_current() const {
  GlimmOptions go;
  go.kappa = cfg_.kappa;
  const auto ws = wave_samples();
  return glimm_Q(ws, go);
}

long Engine::replace_front(long id, const std::vector<FrontSeed>& seeds,
                           NodeKind kind) {
  const int k = live_index(id);
  if (k < 0) throw Error("replace_front: front not live");
  const double x = rec(id).pos_at(clock_);
  NodeRecord nd;
  nd.id = static_cast<long>(traj_->nodes.size());
  nd.kind = kind;
  nd.t = clock_;
  nd.x = x;
  nd.in = {id};
  kill_front(id, clock_, nd.id);
  live_.erase(live_.begin() + k);
  int at = k;
  for (const auto& seed : seeds) {
    const long nid = spawn_front(seed, clock_, x, nd.id);
    live_.insert(live_.begin() + at, nid);
    nd.out.push_back(nid);
    ++at;
  }
  traj_->nodes.push_back(std::move(nd));
  return traj_->nodes.back().id;
}

long Engine::insert_fronts(double x, const std::vector<FrontSeed>& seeds,
                           NodeKind kind) {
  NodeRecord nd;
  nd.id = static_cast<long>(traj_->nodes.size());
  nd.kind = kind;
  nd.t = clock_;
  nd.x = x;
  int at = 0;
  while (at < static_cast<int>(live_.size()) &&
         rec(live_[at]).pos_at(clock_) <= x)
    ++at;
  for (const auto& seed : seeds) {
    const long nid = spawn_front(seed, clock_, x, nd.id);
    live_.insert(live_.begin() + at, nid);
    nd.out.push_back(nid);
    ++at;
  }
  traj_->nodes.push_back(std::move(nd));
  check_np_budget();
  return traj_->nodes.back().id;
}

void Engine::set_left_state(const Vec& v) {
  const Vec& cur = traj_->left_states.back().second;
  if ((v - cur).lpNorm<Eigen::Infinity>() == 0.0) return;
  traj_->left_states.emplace_back(clock_, v);
}

int Engine::nudge_off_grid(double cell, double tol, double shift) {
  int count = 0;
  for (long id : live_) {
    FrontRecord& f = rec(id);
    const double x = f.pos_at(clock_);
    const double j = std::round(x / cell);
    if (std::abs(x - j * cell) <= tol) {
      f.anchor_x = x + shift;
      f.anchor_t = clock_;
      ++f.kin_ver;
      ++count;
    }
  }
  return count;
}

void Engine::rebuild_queue() {
  queue_ = {};
  for (int k = 0; k + 1 < static_cast<int>(live_.size()); ++k) predict_pair(k);
}

void Engine::emit_series_row() {
  FunctionalRow row;
  row.t = clock_;
  row.V = v_current();
  row.Q = cfg_.full_functionals ? q_current()
                                : std::numeric_limits<double>::quiet_NaN();
  row.Ups = row.V + cfg_.kappa * row.Q;
  const Snapshot s = snapshot();
  row.TV = s.total_variation();
  row.mass = Vec::Zero(sys_.dim);
  const PiecewiseConstant pc = s.profile();
  for (int k = 1; k + 1 < static_cast<int>(pc.states.size()); ++k)
    row.mass += (pc.states[k] - s.left_state) * (pc.xs[k] - pc.xs[k - 1]);
  row.n_fronts = live_count();
  row.np_strength = np_strength_;
  traj_->series.push_back(std::move(row));
}

}  // namespace ft
