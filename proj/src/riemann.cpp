#include "ft/riemann.hpp"

#include <algorithm>
#include <cmath>

namespace ft {

namespace {

FieldClass field_class_of(const SystemSpec& sys, int family) {
  if (family < 1 || family > sys.dim) throw Error("bad family index");
  if (static_cast<int>(sys.field_class.size()) < family)
    return FieldClass::Unclassified;
  return sys.field_class[family - 1];
}

double scalar_chord_speed(const SystemSpec& sys, double a, double b) {
  if (std::abs(b - a) < 1e-14) return sys.jacobian_at(Vec::Constant(1, a))(0, 0);
  const double fa = sys.flux(Vec::Constant(1, a))[0];
  const double fb = sys.flux(Vec::Constant(1, b))[0];
  return (fb - fa) / (b - a);
}

}  // namespace

std::pair<Vec, double> hugoniot_point(const SystemSpec& sys, const Vec& uL,
                                      int family, double s,
                                      const RiemannOptions& opt) {
  const int n = sys.dim;
  const double pad = opt.domain_pad * (1.0 + sys.domain.diameter());
  if (!sys.domain.contains(uL, pad))
    throw OutOfDomain("hugoniot_point: left state outside domain");
  const EigenStructure es = eigen(sys, uL);
  if (s == 0.0) return {uL, es.lambda[family - 1]};
  if (std::abs(s) > opt.curve_radius)
    throw CurveLeftDomain("hugoniot_point: |s| beyond curve radius");

  if (n == 1) {
    const double r = es.right(0, 0);  // +-1
    const double uR = uL[0] + s * r;
    Vec v = Vec::Constant(1, uR);
    if (!sys.domain.contains(v, pad))
      throw CurveLeftDomain("hugoniot_point: curve left the domain");
    return {v, scalar_chord_speed(sys, uL[0], uR)};
  }

  const Vec ell = es.left.row(family - 1).transpose();
  Vec uR = uL + s * es.right.col(family - 1);
  double sigma = es.lambda[family - 1];
  const Vec FL = sys.flux(uL);
  const double scale = 1.0 + uL.norm();

  auto residual = [&](const Vec& u, double sg) {
    Vec R(n + 1);
    R.head(n) = sg * (u - uL) - (sys.flux(u) - FL);
    R[n] = ell.dot(u - uL) - s;
    return R;
  };

  Vec R = residual(uR, sigma);
  for (int it = 0; it < opt.max_newton_iter; ++it) {
    if (R.norm() <= opt.newton_tol * scale) break;
    Mat J(n + 1, n + 1);
    J.topLeftCorner(n, n) = sigma * Mat::Identity(n, n) - sys.jacobian_at(uR);
    J.block(0, n, n, 1) = uR - uL;
    J.block(n, 0, 1, n) = ell.transpose();
    J(n, n) = 0.0;
    const Vec step = J.fullPivLu().solve(-R);
    double damp = 1.0;
    for (int half = 0; half < 30; ++half) {
      const Vec u_try = uR + damp * step.head(n);
      const double sg_try = sigma + damp * step[n];
      const Vec R_try = residual(u_try, sg_try);
      if (R_try.norm() < R.norm() || damp < 1e-6) {
        uR = u_try;
        sigma = sg_try;
        R = R_try;
        break;
      }
      damp *= 0.5;
    }
  }
  if (R.norm() > 1e-9 * scale)
    throw NewtonDiverged("hugoniot_point: Newton did not converge");
  if (!sys.domain.contains(uR, pad))
    throw CurveLeftDomain("hugoniot_point: curve left the domain");
  return {uR, sigma};
}

double hugoniot_speed(const SystemSpec& sys, const Vec& uL, int family,
                      double s, const RiemannOptions& opt) {
  return hugoniot_point(sys, uL, family, s, opt).second;
}

namespace {

// Oriented eigenvector continued along a curve: never flips against `prev`.
Vec continued_eigvec(const SystemSpec& sys, const Vec& u, int family,
                     const Vec& prev) {
  const EigenStructure es = eigen(sys, u);
  Vec r = es.right.col(family - 1);
  if (r.dot(prev) < 0.0) r = -r;
  return r;
}

}  // namespace

Vec rarefaction_point(const SystemSpec& sys, const Vec& uL, int family,
                      double s, const RiemannOptions& opt) {
  if (s == 0.0) return uL;
  if (std::abs(s) > opt.curve_radius)
    throw CurveLeftDomain("rarefaction_point: |s| beyond curve radius");
  const double pad = opt.domain_pad * (1.0 + sys.domain.diameter());
  const EigenStructure es0 = eigen(sys, uL);
  const Vec ell = es0.left.row(family - 1).transpose();
  Vec dir0 = es0.right.col(family - 1);

  // du/dxi = r(u) / (l_i(uL) . r(u)) keeps l_i(uL).(u - uL) = xi exactly.
  auto rhs = [&](const Vec& u, const Vec& prev) {
    const Vec r = continued_eigvec(sys, u, family, prev);
    const double den = ell.dot(r);
    if (std::abs(den) < 0.1)
      throw OdeStepRejected("rarefaction_point: curve turned too far");
    return Vec((r / den).eval());
  };

  const int nsteps = std::max(
      4, static_cast<int>(std::ceil(opt.ode_steps * std::abs(s) / opt.curve_radius)));
  const double h = s / nsteps;
  Vec u = uL;
  Vec prev = dir0;
  for (int k = 0; k < nsteps; ++k) {
    const Vec k1 = rhs(u, prev);
    const Vec k2 = rhs(u + 0.5 * h * k1, k1);
    const Vec k3 = rhs(u + 0.5 * h * k2, k2);
    const Vec k4 = rhs(u + h * k3, k3);
    u += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    prev = k4.normalized();  // rhs is a positive multiple of the continued r
    if (!sys.domain.contains(u, pad))
      throw CurveLeftDomain("rarefaction_point: curve left the domain");
  }
  return u;
}

std::pair<Vec, WaveKind> lax_curve(const SystemSpec& sys, const Vec& uL,
                                   int family, double s,
                                   const RiemannOptions& opt) {
  switch (field_class_of(sys, family)) {
    case FieldClass::GenuinelyNonlinear:
      if (s >= 0.0) return {rarefaction_point(sys, uL, family, s, opt),
                            WaveKind::Rarefaction};
      return {hugoniot_point(sys, uL, family, s, opt).first, WaveKind::Shock};
    case FieldClass::LinearlyDegenerate:
      return {hugoniot_point(sys, uL, family, s, opt).first,
              WaveKind::Contact};
    case FieldClass::Unclassified:
      break;
  }
  throw UnclassifiedFamily(
      sys.name + ": family " + std::to_string(family) +
      " is neither genuinely nonlinear nor linearly degenerate");
}

double sigma_along_curve(const SystemSpec& sys, const Vec& uL, int family,
                         double tau, const RiemannOptions& opt) {
  const FieldClass fc = field_class_of(sys, family);
  if (fc == FieldClass::LinearlyDegenerate || tau < 0.0)
    return hugoniot_speed(sys, uL, family, tau, opt);
  if (fc == FieldClass::GenuinelyNonlinear || sys.dim == 1) {
    const Vec u = rarefaction_point(sys, uL, family, tau, opt);
    return eigen(sys, u).lambda[family - 1];
  }
  throw UnclassifiedFamily("sigma_along_curve: unclassified family");
}

// ---------------------------------------------------------------------------
// Scalar envelope solver
// ---------------------------------------------------------------------------

WaveFan scalar_envelope_solve(const SystemSpec& sys, double uL, double uR,
                              const RiemannOptions& opt) {
  if (sys.dim != 1) throw Error("scalar_envelope_solve needs a scalar system");
  WaveFan fan;
  fan.left = Vec::Constant(1, uL);
  fan.right = Vec::Constant(1, uR);
  if (uL == uR) return fan;

  const double a = std::min(uL, uR), b = std::max(uL, uR);
  const int M = std::max(
      64, static_cast<int>(std::ceil(opt.envelope_samples_per_unit * (b - a)))) + 1;
  std::vector<double> us(M), fs(M);
  for (int j = 0; j < M; ++j) {
    us[j] = a + (b - a) * j / (M - 1);
    fs[j] = sys.flux(Vec::Constant(1, us[j]))[0];
  }
  us.front() = a;
  us.back() = b;

  // lower hull for uL < uR (convex envelope), upper hull for uL > uR
  const bool convex = uL < uR;
  std::vector<int> hull;
  auto keep = [&](int i, int j, int k) {
    // cross(i->j, i->k); middle sample j stays on the lower hull iff the turn
    // is counterclockwise, on the upper hull iff clockwise
    const double c = (us[j] - us[i]) * (fs[k] - fs[i]) -
                     (fs[j] - fs[i]) * (us[k] - us[i]);
    return convex ? c > 0.0 : c < 0.0;
  };
  for (int k = 0; k < M; ++k) {
    while (hull.size() >= 2 &&
           !keep(hull[hull.size() - 2], hull[hull.size() - 1], k))
      hull.pop_back();
    hull.push_back(k);
  }

  // Walk the hull from uL towards uR.
  std::vector<int> path = hull;
  if (!convex) std::reverse(path.begin(), path.end());

  FanEntry entry;
  entry.family = 1;
  const double ell = eigen(sys, fan.left).left(0, 0);  // +-1

  auto deriv = [&](double u) {
    return sys.jacobian_at(Vec::Constant(1, u))(0, 0);
  };

  std::size_t p = 0;
  double prev_speed = -std::numeric_limits<double>::infinity();
  while (p + 1 < path.size()) {
    const bool raref_cell = std::abs(path[p + 1] - path[p]) == 1;
    if (raref_cell) {
      std::size_t q = p;
      while (q + 1 < path.size() && std::abs(path[q + 1] - path[q]) == 1) ++q;
      SubWave w;
      w.kind = WaveKind::Rarefaction;
      w.left = Vec::Constant(1, us[path[p]]);
      w.right = Vec::Constant(1, us[path[q]]);
      w.speed_left = deriv(us[path[p]]);
      w.speed_right = deriv(us[path[q]]);
      w.size = ell * (us[path[q]] - us[path[p]]);
      if (w.speed_right < w.speed_left - 1e-8 * (1.0 + std::abs(w.speed_left)))
        throw GridTooCoarse("scalar_envelope_solve: rarefaction speeds not monotone");
      entry.sub.push_back(std::move(w));
      p = q;
    } else {
      SubWave w;
      w.kind = WaveKind::Shock;
      w.left = Vec::Constant(1, us[path[p]]);
      w.right = Vec::Constant(1, us[path[p + 1]]);
      const double sp = scalar_chord_speed(sys, w.left[0], w.right[0]);
      w.speed_left = w.speed_right = sp;
      w.size = ell * (w.right[0] - w.left[0]);
      entry.sub.push_back(std::move(w));
      ++p;
    }
    const SubWave& w = entry.sub.back();
    if (w.speed_left < prev_speed - 1e-8 * (1.0 + std::abs(prev_speed)))
      throw GridTooCoarse("scalar_envelope_solve: envelope speeds not monotone");
    prev_speed = w.speed_right;
  }
  for (const auto& w : entry.sub) entry.size += w.size;
  if (!entry.sub.empty()) fan.entries.push_back(std::move(entry));
  return fan;
}

// ---------------------------------------------------------------------------
// Full Riemann solver
// ---------------------------------------------------------------------------

namespace {

Vec compose_lax(const SystemSpec& sys, const Vec& uL, const Vec& s,
                const RiemannOptions& opt) {
  Vec u = uL;
  for (int i = 0; i < sys.dim; ++i)
    if (s[i] != 0.0) u = lax_curve(sys, u, i + 1, s[i], opt).first;
  return u;
}

}  // namespace

WaveFan solve_riemann(const SystemSpec& sys, const Vec& uL, const Vec& uR,
                      const RiemannOptions& opt) {
  WaveFan fan;
  fan.left = uL;
  fan.right = uR;
  const double scale = 1.0 + uL.norm() + uR.norm();
  if ((uR - uL).lpNorm<Eigen::Infinity>() < 1e-14 * scale) return fan;

  if (sys.dim == 1 &&
      field_class_of(sys, 1) == FieldClass::Unclassified)
    return scalar_envelope_solve(sys, uL[0], uR[0], opt);

  for (int i = 1; i <= sys.dim; ++i)
    if (field_class_of(sys, i) == FieldClass::Unclassified)
      throw UnclassifiedFamily(sys.name +
                               ": solve_riemann requires classified families");

  const int n = sys.dim;
  Vec s(n);
  {
    const EigenStructure mid = averaged_eigen(sys, uL, uR);
    for (int i = 0; i < n; ++i) s[i] = mid.left.row(i).dot(uR - uL);
  }

  auto residual = [&](const Vec& sv) { return Vec(compose_lax(sys, uL, sv, opt) - uR); };

  Vec R = residual(s);
  for (int it = 0; it < opt.max_newton_iter; ++it) {
    if (R.norm() <= opt.newton_tol * scale) break;
    Mat J(n, n);
    for (int j = 0; j < n; ++j) {
      const double h = 1e-7 * (1.0 + std::abs(s[j]));
      Vec sp = s, sm = s;
      sp[j] += h;
      sm[j] -= h;
      J.col(j) = (residual(sp) - residual(sm)) / (2.0 * h);
    }
    const Vec step = J.fullPivLu().solve(-R);
    double damp = 1.0;
    bool accepted = false;
    for (int half = 0; half < 30; ++half) {
      const Vec s_try = s + damp * step;
      Vec R_try;
      try {
        R_try = residual(s_try);
      } catch (const Error&) {
        damp *= 0.5;
        continue;
      }
      if (R_try.norm() < R.norm() || damp < 1e-6) {
        s = s_try;
        R = R_try;
        accepted = true;
        break;
      }
      damp *= 0.5;
    }
    if (!accepted) break;
  }
  if (R.norm() > opt.solve_tol * scale)
    throw NewtonDiverged("solve_riemann: states too far apart");

  Vec u = uL;
  for (int i = 1; i <= n; ++i) {
    if (std::abs(s[i - 1]) < 1e-14) continue;
    FanEntry entry;
    entry.family = i;
    entry.size = s[i - 1];
    auto [u_next, kind] = lax_curve(sys, u, i, s[i - 1], opt);
    SubWave w;
    w.kind = kind;
    w.left = u;
    w.right = u_next;
    w.size = s[i - 1];
    if (kind == WaveKind::Rarefaction) {
      w.speed_left = eigen(sys, u).lambda[i - 1];
      w.speed_right = eigen(sys, u_next).lambda[i - 1];
    } else {
      w.speed_left = w.speed_right =
          hugoniot_speed(sys, u, i, s[i - 1], opt);
    }
    entry.sub.push_back(std::move(w));
    fan.entries.push_back(std::move(entry));
    u = u_next;
  }
  return fan;
}

// ---------------------------------------------------------------------------
// Fan discretization
// ---------------------------------------------------------------------------

std::vector<FrontSeed> discretize_fan(const SystemSpec& sys, const WaveFan& fan,
                                      double eps, const RiemannOptions& opt) {
  if (!(eps > 0.0)) throw Error("discretize_fan: eps must be positive");
  std::vector<FrontSeed> out;
  for (const auto& entry : fan.entries) {
    for (const auto& w : entry.sub) {
      if (w.kind != WaveKind::Rarefaction) {
        FrontSeed f;
        f.family = entry.family;
        f.size = w.size;
        f.speed = w.speed_left;
        f.left = w.left;
        f.right = w.right;
        f.kind = w.kind;
        out.push_back(std::move(f));
        continue;
      }
      const double spread = w.speed_right - w.speed_left;
      const int m = std::max<int>(
          {1, static_cast<int>(std::ceil(std::abs(w.size) / eps)),
           static_cast<int>(std::ceil(std::max(spread, 0.0) / (2.0 * eps)))});
      Vec prev = w.left;
      double lam_prev = w.speed_left;
      for (int k = 1; k <= m; ++k) {
        const double xi = w.size * static_cast<double>(k) / m;
        const Vec uk = (k == m) ? w.right
                                : rarefaction_point(sys, w.left, entry.family,
                                                    xi, opt);
        const double lam_k =
            (k == m) ? w.speed_right
                     : eigen(sys, uk).lambda[entry.family - 1];
        FrontSeed f;
        f.family = entry.family;
        f.kind = WaveKind::Rarefaction;
        f.left = prev;
        f.right = uk;
        // size in the slice's own curve parameter, exact for the curve relation
        f.size = eigen(sys, prev).left.row(entry.family - 1).dot(uk - prev);
        f.speed = 0.5 * (lam_prev + lam_k);
        out.push_back(std::move(f));
        prev = uk;
        lam_prev = lam_k;
      }
    }
  }
  return out;
}

}  // namespace ft
