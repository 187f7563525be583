#include "ft/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace ft {

Vec Trajectory::left_state_at(double t) const {
  if (left_states.empty()) throw Error("trajectory has no left state");
  Vec v = left_states.front().second;
  for (const auto& [tk, s] : left_states) {
    if (tk <= t) v = s;
    else break;
  }
  return v;
}

namespace {

Snapshot build_snapshot(const Trajectory& traj, double t, bool pre) {
  if (t < -1e-12 || t > traj.T + 1e-9)
    throw TimeOutOfRange("sample time outside [0, T]");
  Snapshot s;
  s.t = t;
  std::vector<const FrontRecord*> alive;
  for (const auto& f : traj.fronts) {
    const bool in = pre ? (f.birth_t < t && f.death_t >= t)
                        : (f.birth_t <= t && f.death_t > t);
    if (in) alive.push_back(&f);
  }
  std::vector<std::pair<double, const FrontRecord*>> pos;
  pos.reserve(alive.size());
  for (const auto* f : alive) pos.emplace_back(f->pos_at(t), f);
  std::stable_sort(pos.begin(), pos.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    if (a.second->speed != b.second->speed)
      return a.second->speed < b.second->speed;
    return a.second->id < b.second->id;
  });
  // left state: last recorded value before (pre) / up to (post) time t
  Vec v = traj.left_states.front().second;
  for (const auto& [tk, st] : traj.left_states) {
    if (pre ? (tk < t) : (tk <= t)) v = st;
    else break;
  }
  s.left_state = v;
  for (const auto& [x, f] : pos) {
    FrontView fv;
    fv.id = f->id;
    fv.family = f->family;
    fv.pos = x;
    fv.speed = f->speed;
    fv.size = f->size;
    fv.uL = f->uL;
    fv.uR = f->uR;
    s.fronts.push_back(std::move(fv));
  }
  return s;
}

}  // namespace

Snapshot Trajectory::snapshot(double t) const {
  return build_snapshot(*this, t, false);
}

Snapshot Trajectory::snapshot_pre(double t) const {
  return build_snapshot(*this, t, true);
}

std::vector<WaveSample> Trajectory::wave_samples(double t) const {
  const Snapshot s = snapshot(t);
  std::vector<WaveSample> ws;
  ws.reserve(s.fronts.size());
  for (const auto& fv : s.fronts) {
    const FrontRecord& f = fronts[fv.id];
    WaveSample w;
    w.family = f.family;
    w.pos = fv.pos;
    w.size = f.signed_size();
    w.sigma = f.sigma;
    ws.push_back(std::move(w));
  }
  return ws;
}

std::vector<double> Trajectory::node_times() const {
  std::vector<double> ts;
  ts.reserve(nodes.size());
  for (const auto& n : nodes) ts.push_back(n.t);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  return ts;
}

// ---------------------------------------------------------------------------
// Discontinuity curves
// ---------------------------------------------------------------------------

long DiscontinuityCurve::front_at(double t) const {
  for (const auto& seg : segments)
    if (t >= seg.t0 && t < seg.t1) return seg.front_id;
  return -1;
}

std::vector<DiscontinuityCurve> track_beta_discontinuities(
    const Trajectory& traj, double beta, int family) {
  if (!(beta > 0)) throw Error("track_beta_discontinuities: beta must be > 0");
  const double floor = beta / 4.0;
  auto strong = [&](long id) {
    const FrontRecord& f = traj.fronts[id];
    return !f.np && f.family == family && std::abs(f.size) >= floor;
  };

  // per node: strong incoming (spatial order preserved from the log) and the
  // leftmost strong outgoing
  std::map<long, long> continuation;  // incoming front -> outgoing front
  std::map<long, bool> is_continued;  // outgoing front came from a curve
  std::map<long, CurveTermination> term_reason;
  for (const auto& nd : traj.nodes) {
    std::vector<long> sin, sout;
    for (long id : nd.in)
      if (strong(id)) sin.push_back(id);
    for (long id : nd.out)
      if (strong(id)) sout.push_back(id);
    if (sout.size() > 1) {
      // leftmost outgoing branch (lowest speed leaves the node leftmost)
      std::sort(sout.begin(), sout.end(), [&](long a, long b) {
        if (traj.fronts[a].speed != traj.fronts[b].speed)
          return traj.fronts[a].speed < traj.fronts[b].speed;
        return a < b;
      });
      sout.resize(1);
    }
    if (!sin.empty()) {
      if (!sout.empty()) {
        continuation[sin[0]] = sout[0];
        is_continued[sout[0]] = true;
        for (std::size_t k = 1; k < sin.size(); ++k)
          term_reason[sin[k]] = CurveTermination::Merged;
      } else {
        // does a weak i-front survive? then the curve hit the strength floor
        bool weak_out = false;
        for (long id : nd.out)
          if (!traj.fronts[id].np && traj.fronts[id].family == family)
            weak_out = true;
        for (long id : sin)
          term_reason[id] = weak_out ? CurveTermination::StrengthFloor
                                     : CurveTermination::Cancelled;
      }
    }
  }

  std::vector<DiscontinuityCurve> curves;
  for (const auto& f : traj.fronts) {
    if (!strong(f.id)) continue;
    if (is_continued.count(f.id)) continue;  // not a chain head
    DiscontinuityCurve c;
    c.family = family;
    c.beta = beta;
    long id = f.id;
    while (true) {
      const FrontRecord& g = traj.fronts[id];
      CurveSegment seg;
      seg.front_id = id;
      seg.t0 = g.birth_t;
      seg.t1 = std::min(g.death_t, traj.T);
      seg.size = g.size;
      c.max_strength = std::max(c.max_strength, std::abs(g.size));
      c.segments.push_back(seg);
      auto it = continuation.find(id);
      if (it == continuation.end()) break;
      id = it->second;
    }
    const FrontRecord& last = traj.fronts[c.segments.back().front_id];
    if (last.death_t > traj.T) {
      c.termination = CurveTermination::Horizon;
    } else {
      auto it = term_reason.find(last.id);
      c.termination =
          it != term_reason.end() ? it->second : CurveTermination::Cancelled;
    }
    if (c.max_strength >= beta) curves.push_back(std::move(c));
  }
  std::sort(curves.begin(), curves.end(),
            [](const DiscontinuityCurve& a, const DiscontinuityCurve& b) {
              return a.segments.front().front_id <
                     b.segments.front().front_id;
            });
  return curves;
}

std::pair<AtomicMeasure1D, AtomicMeasure1D> split_jump_cont(
    const AtomicMeasure1D& ups, const std::vector<DiscontinuityCurve>& curves,
    double t) {
  std::set<long> tracked;
  for (const auto& c : curves) {
    const long id = c.front_at(t);
    if (id >= 0) tracked.insert(id);
  }
  AtomicMeasure1D jump, cont;
  jump.t = ups.t;
  cont.t = ups.t;
  for (const auto& a : ups.atoms) {
    if (tracked.count(a.front_id)) jump.atoms.push_back(a);
    else cont.atoms.push_back(a);
  }
  return {jump, cont};
}

// ---------------------------------------------------------------------------
// Wave-balance measures
// ---------------------------------------------------------------------------

std::vector<SpaceTimeMeasure> wave_balance_measures(const Trajectory& traj) {
  const int N = traj.system.dim;
  std::vector<SpaceTimeMeasure> ms(N);
  for (auto& m : ms) m.kind = MeasureKind::WaveBalance;

  auto np_projection = [&](const FrontRecord& f, int i) {
    const EigenStructure es = averaged_eigen(traj.system, f.uL, f.uR);
    return es.left.row(i - 1).dot(f.uR - f.uL);
  };

  for (const auto& nd : traj.nodes) {
    for (int i = 1; i <= N; ++i) {
      double w = 0.0;
      for (long id : nd.out) {
        const FrontRecord& f = traj.fronts[id];
        if (f.np) w += np_projection(f, i);
        else if (f.family == i) w += f.size;
      }
      for (long id : nd.in) {
        const FrontRecord& f = traj.fronts[id];
        if (f.np) w -= np_projection(f, i);
        else if (f.family == i) w -= f.size;
      }
      if (std::abs(w) > 1e-15)
        ms[i - 1].append(nd.t, nd.x, w, i, nd.id);
    }
  }
  return ms;
}

SpaceTimeMeasure jump_balance_measure(
    const Trajectory& traj, const std::vector<DiscontinuityCurve>& curves,
    int family) {
  SpaceTimeMeasure m;
  m.kind = MeasureKind::WaveBalance;
  std::set<long> member;
  for (const auto& c : curves)
    for (const auto& seg : c.segments) member.insert(seg.front_id);

  for (const auto& nd : traj.nodes) {
    std::vector<double> sin;
    double sout = 0.0;
    bool has_out = false;
    for (long id : nd.in)
      if (member.count(id)) sin.push_back(traj.fronts[id].size);
    for (long id : nd.out)
      if (member.count(id)) {
        sout = traj.fronts[id].size;
        has_out = true;
      }
    if (sin.empty() && !has_out) continue;
    double w;
    if (has_out) {
      w = sout;
      for (double s : sin) w -= s;  // s, s-s', or s-s'-s'' per the case table
    } else {
      w = 0.0;
      for (double s : sin) w -= s;  // -s' at terminal nodes
    }
    if (std::abs(w) > 1e-15) m.append(nd.t, nd.x, w, family, nd.id);
  }
  return m;
}

CompositeMeasures composite_measures(
    const Trajectory& traj,
    const std::vector<std::vector<DiscontinuityCurve>>& curves_per_family) {
  CompositeMeasures cm;
  cm.ics.kind = MeasureKind::ICS;
  cm.icjs.kind = MeasureKind::ICJS;
  for (const auto& a : traj.mu_ic.atoms) cm.ics.atoms.push_back(a);
  for (const auto& a : traj.mu_source.atoms) cm.ics.atoms.push_back(a);
  cm.icjs.atoms = cm.ics.atoms;
  for (int i = 1; i <= traj.system.dim; ++i) {
    const auto& curves = curves_per_family.at(i - 1);
    SpaceTimeMeasure jb = jump_balance_measure(traj, curves, i);
    for (auto& a : jb.atoms) {
      SpaceTimeAtom b = a;
      b.w = std::abs(b.w);
      cm.icjs.atoms.push_back(b);
    }
    cm.jump_balance.push_back(std::move(jb));
  }
  return cm;
}

}  // namespace ft
