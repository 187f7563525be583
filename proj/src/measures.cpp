#include "ft/measures.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace ft {

// ---------------------------------------------------------------------------
// AtomicMeasure1D
// ---------------------------------------------------------------------------

void AtomicMeasure1D::sort() {
  std::stable_sort(atoms.begin(), atoms.end(),
                   [](const Atom1D& a, const Atom1D& b) { return a.x < b.x; });
}

double AtomicMeasure1D::total() const {
  double s = 0.0;
  for (const auto& a : atoms) s += a.w;
  return s;
}

double AtomicMeasure1D::total_abs() const {
  double s = 0.0;
  for (const auto& a : atoms) s += std::abs(a.w);
  return s;
}

double AtomicMeasure1D::value(double a, double b) const {
  double s = 0.0;
  for (const auto& at : atoms)
    if (at.x >= a && at.x <= b) s += at.w;
  return s;
}

double AtomicMeasure1D::positive_value(double a, double b) const {
  double s = 0.0;
  for (const auto& at : atoms)
    if (at.x >= a && at.x <= b && at.w > 0) s += at.w;
  return s;
}

double AtomicMeasure1D::negative_value(double a, double b) const {
  double s = 0.0;
  for (const auto& at : atoms)
    if (at.x >= a && at.x <= b && at.w < 0) s -= at.w;
  return s;
}

AtomicMeasure1D AtomicMeasure1D::positive_part() const {
  AtomicMeasure1D m;
  m.t = t;
  for (const auto& a : atoms)
    if (a.w > 0) m.atoms.push_back(a);
  return m;
}

AtomicMeasure1D AtomicMeasure1D::negative_part() const {
  AtomicMeasure1D m;
  m.t = t;
  for (const auto& a : atoms)
    if (a.w < 0) {
      Atom1D b = a;
      b.w = -b.w;
      m.atoms.push_back(b);
    }
  return m;
}

AtomicMeasure1D AtomicMeasure1D::restricted(double a, double b) const {
  AtomicMeasure1D m;
  m.t = t;
  for (const auto& at : atoms)
    if (at.x >= a && at.x <= b) m.atoms.push_back(at);
  return m;
}

// ---------------------------------------------------------------------------
// SpaceTimeMeasure
// ---------------------------------------------------------------------------

double SpaceTimeMeasure::total() const {
  double s = 0.0;
  for (const auto& a : atoms) s += a.w;
  return s;
}

double SpaceTimeMeasure::total_abs() const {
  double s = 0.0;
  for (const auto& a : atoms) s += std::abs(a.w);
  return s;
}

double SpaceTimeMeasure::strip_mass(double t1, double t2) const {
  double s = 0.0;
  for (const auto& a : atoms)
    if (a.t > t1 && a.t <= t2) s += std::abs(a.w);
  return s;
}

void SpaceTimeMeasure::append(double t, double x, double w, int family,
                              long node) {
  atoms.push_back({t, x, w, family, node});
}

// ---------------------------------------------------------------------------
// sigma sampling
// ---------------------------------------------------------------------------

std::vector<double> sample_sigma(const SystemSpec& sys, const Vec& uL,
                                 int family, double size, WaveKind kind,
                                 int n_samples, const RiemannOptions& opt) {
  std::vector<double> s(n_samples + 1);
  if (family == sys.dim + 1) {
    // nonphysical fronts travel at a flat supersonic speed; the value is
    // irrelevant for Q (same-family terms vanish) so use 0 as a placeholder
    std::fill(s.begin(), s.end(), 0.0);
    return s;
  }
  if (size == 0.0) {
    std::fill(s.begin(), s.end(), eigen(sys, uL).lambda[family - 1]);
    return s;
  }
  for (int k = 0; k <= n_samples; ++k) {
    const double tau = size * static_cast<double>(k) / n_samples;
    if (kind == WaveKind::Rarefaction) {
      const Vec u = rarefaction_point(sys, uL, family, tau, opt);
      s[k] = eigen(sys, u).lambda[family - 1];
    } else {
      s[k] = hugoniot_speed(sys, uL, family, tau, opt);
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Glimm functionals
// ---------------------------------------------------------------------------

namespace {

// integral of |c0 + c1 x + c2 y| over [0,w] x [0,h], exact
double integral_abs_affine(double c0, double c1, double c2, double w,
                           double h) {
  if (w <= 0.0 || h <= 0.0) return 0.0;
  auto D = [&](double x, double y) { return c0 + c1 * x + c2 * y; };
  // clip the rectangle with D >= 0
  std::array<std::pair<double, double>, 8> poly{
      {{0, 0}, {w, 0}, {w, h}, {0, h}}};
  int npoly = 4;
  std::array<std::pair<double, double>, 8> out;
  int nout = 0;
  for (int i = 0; i < npoly; ++i) {
    const auto& P = poly[i];
    const auto& Q = poly[(i + 1) % npoly];
    const double dP = D(P.first, P.second);
    const double dQ = D(Q.first, Q.second);
    if (dP >= 0) out[nout++] = P;
    if ((dP >= 0) != (dQ >= 0)) {
      const double th = dP / (dP - dQ);
      out[nout++] = {P.first + th * (Q.first - P.first),
                     P.second + th * (Q.second - P.second)};
    }
  }
  double area = 0.0, cx = 0.0, cy = 0.0;
  for (int i = 0; i < nout; ++i) {
    const auto& P = out[i];
    const auto& Q = out[(i + 1) % nout];
    const double cr = P.first * Q.second - Q.first * P.second;
    area += cr;
    cx += (P.first + Q.first) * cr;
    cy += (P.second + Q.second) * cr;
  }
  area *= 0.5;
  double Ipos = 0.0;
  if (std::abs(area) > 0.0) {
    cx /= (6.0 * area);
    cy /= (6.0 * area);
    Ipos = std::abs(area) * D(cx, cy);
  }
  const double Itot = w * h * D(0.5 * w, 0.5 * h);
  return 2.0 * Ipos - Itot;
}

}  // namespace

double mutual_speed_integral(const WaveSample& a, const WaveSample& b) {
  const double A = std::abs(a.size), B = std::abs(b.size);
  if (A == 0.0 || B == 0.0) return 0.0;
  const int Ma = static_cast<int>(a.sigma.size()) - 1;
  const int Mb = static_cast<int>(b.sigma.size()) - 1;
  if (Ma < 1 || Mb < 1) return 0.0;
  const double wa = A / Ma, wb = B / Mb;
  double I = 0.0;
  for (int i = 0; i < Ma; ++i) {
    const double sa0 = a.sigma[i];
    const double sa1 = a.sigma[i + 1];
    const double c1 = (sa1 - sa0) / wa;
    for (int j = 0; j < Mb; ++j) {
      const double sb0 = b.sigma[j];
      const double sb1 = b.sigma[j + 1];
      const double c2 = -(sb1 - sb0) / wb;
      I += integral_abs_affine(sa0 - sb0, c1, c2, wa, wb);
    }
  }
  return I;
}

double glimm_V(std::span<const WaveSample> waves) {
  double v = 0.0;
  for (const auto& w : waves) v += std::abs(w.size);
  return v;
}

double glimm_Q(std::span<const WaveSample> waves, const GlimmOptions& opt) {
  const std::size_t n = waves.size();
  double q = 0.0;
  for (std::size_t l = 0; l < n; ++l) {
    for (std::size_t r = l + 1; r < n; ++r) {
      // waves are ordered by position: `l` lies to the left of `r`
      const WaveSample& L = waves[l];
      const WaveSample& R = waves[r];
      if (L.family != R.family) {
        // approaching iff the faster family sits behind
        if (L.family > R.family) q += std::abs(L.size) * std::abs(R.size);
      } else {
        if (opt.approaching_only_quadratic && L.size > 0 && R.size > 0)
          continue;  // two rarefactions of one family never approach
        // ordered pairs (l,r) and (r,l) carry 1/4 each
        q += 0.5 * mutual_speed_integral(L, R);
      }
    }
  }
  return q;
}

double upsilon(std::span<const WaveSample> waves, double kappa,
               const GlimmOptions& opt) {
  return glimm_V(waves) + kappa * glimm_Q(waves, opt);
}

// ---------------------------------------------------------------------------
// Interaction amounts
// ---------------------------------------------------------------------------

InteractionAmount interaction_amount(const SystemSpec& sys, int family_a,
                                     double size_a, double speed_a,
                                     int family_b, double size_b,
                                     double speed_b) {
  InteractionAmount ia;
  const double prod = std::abs(size_a) * std::abs(size_b);
  if (family_a != family_b) {
    ia.amount = prod;
    return ia;
  }
  const bool physical = family_a <= sys.dim;
  const bool shocks = size_a < 0.0 && size_b < 0.0;
  const bool gnl =
      physical && family_a - 1 < static_cast<int>(sys.field_class.size()) &&
      sys.field_class[family_a - 1] == FieldClass::GenuinelyNonlinear;
  if (physical && shocks && gnl) {
    ia.amount = prod * std::abs(speed_a - speed_b);
    return ia;
  }
  ia.amount = prod;
  ia.extended_rule = true;
  return ia;
}

double cancellation_amount(int family_a, double size_a, int family_b,
                           double size_b) {
  if (family_a != family_b) return 0.0;
  return std::abs(size_a) + std::abs(size_b) - std::abs(size_a + size_b);
}

// ---------------------------------------------------------------------------
// Wave measures
// ---------------------------------------------------------------------------

std::vector<AtomicMeasure1D> wave_measures(const SystemSpec& sys,
                                           const Snapshot& snap) {
  std::vector<AtomicMeasure1D> ms(sys.dim);
  for (auto& m : ms) m.t = snap.t;
  for (const auto& f : snap.fronts) {
    const Vec du = f.uR - f.uL;
    if (du.lpNorm<Eigen::Infinity>() == 0.0) continue;
    const EigenStructure es = averaged_eigen(sys, f.uL, f.uR);
    for (int i = 0; i < sys.dim; ++i) {
      const double w = es.left.row(i).dot(du);
      ms[i].atoms.push_back({f.pos, w, f.id, f.family});
    }
  }
  return ms;
}

AtomicMeasure1D wave_measure(const SystemSpec& sys, const Snapshot& snap,
                             int family) {
  return wave_measures(sys, snap)[family - 1];
}

}  // namespace ft
