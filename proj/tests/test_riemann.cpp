#include "doctest.h"

#include "ft/catalog.hpp"
#include "ft/riemann.hpp"

#include <cmath>
#include <random>

using namespace ft;

namespace {

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

Vec v1(double a) { return Vec::Constant(1, a); }

// Exact scalar Riemann profile at slope xi: minimizer (uL < uR) or maximizer
// (uL > uR) of F(u) - xi*u over the dense grid between the states.
double scalar_riemann_oracle(const SystemSpec& sys, double uL, double uR,
                             double xi) {
  const double a = std::min(uL, uR), b = std::max(uL, uR);
  const int M = 20001;
  double best_u = a;
  double best = std::numeric_limits<double>::infinity();
  const double sgn = uL < uR ? 1.0 : -1.0;
  for (int j = 0; j < M; ++j) {
    const double u = a + (b - a) * j / (M - 1);
    const double val = sgn * (sys.flux(v1(u))[0] - xi * u);
    if (val < best) {
      best = val;
      best_u = u;
    }
  }
  return best_u;
}

// Value of a scalar fan at slope xi (self-similar profile).
double fan_value(const WaveFan& fan, double xi) {
  double u = fan.left[0];
  for (const auto& entry : fan.entries) {
    for (const auto& w : entry.sub) {
      if (xi < w.speed_left) return u;
      if (w.kind == WaveKind::Rarefaction && xi <= w.speed_right) {
        // locate the state with characteristic speed xi by bisection in u
        double lo = w.left[0], hi = w.right[0];
        for (int it = 0; it < 60; ++it) {
          const double mid = 0.5 * (lo + hi);
          const double th = (mid - w.left[0]) /
                            (w.right[0] - w.left[0] + 1e-300);
          const double s = w.speed_left + th * (w.speed_right - w.speed_left);
          (s < xi ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
      }
      u = w.right[0];
    }
  }
  return u;
}

}  // namespace

TEST_CASE("hugoniot points") {
  const SystemSpec burgers = catalog_system("burgers");
  {
    auto [uR, sigma] = hugoniot_point(burgers, v1(1.0), 1, -1.0);
    CHECK(uR[0] == doctest::Approx(0.0).epsilon(0).scale(1));
    CHECK(sigma == doctest::Approx(0.5));  // RH closed form (uL+uR)/2
  }
  {
    auto [uR, sigma] = hugoniot_point(burgers, v1(0.3), 1, 0.0);
    CHECK(uR[0] == 0.3);
    CHECK(sigma == doctest::Approx(0.3));
  }
  const SystemSpec tri = catalog_system("triangular_counterexample");
  {
    auto [uR, sigma] = hugoniot_point(tri, v2(0, 0), 2, -0.2);
    CHECK(uR[0] == doctest::Approx(0.0).epsilon(0).scale(1e-10));
    CHECK(uR[1] == doctest::Approx(-0.2));
    CHECK(sigma == doctest::Approx(0.8));  // scalar RH in v: sigma = 1 + vR
  }
}

TEST_CASE("Rankine-Hugoniot residual on fuzzed curves") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ds(-0.15, 0.15);
  for (const char* id :
       {"burgers", "elasticity_damped", "triangular_counterexample"}) {
    const SystemSpec sys = catalog_system(id);
    const Vec mid = 0.5 * (sys.domain.lo + sys.domain.hi);
    for (int k = 0; k < 40; ++k) {
      const int fam = 1 + static_cast<int>(rng() % sys.dim);
      const double s = ds(rng);
      auto [uR, sigma] = hugoniot_point(sys, mid, fam, s);
      const Vec res = sigma * (uR - mid) - (sys.flux(uR) - sys.flux(mid));
      CHECK(res.lpNorm<Eigen::Infinity>() < 1e-10);
      const double sparam = eigen(sys, mid).left.row(fam - 1).dot(uR - mid);
      CHECK(std::abs(sparam - s) < 1e-10);
    }
  }
}

TEST_CASE("rarefaction points") {
  const SystemSpec burgers = catalog_system("burgers");
  CHECK(rarefaction_point(burgers, v1(0.25), 1, 0.0)[0] == 0.25);
  CHECK(rarefaction_point(burgers, v1(0.0), 1, 1.0)[0] ==
        doctest::Approx(1.0).epsilon(1e-12));

  const SystemSpec tri = catalog_system("triangular_counterexample");
  const Vec u = rarefaction_point(tri, v2(0, 0), 2, 0.3);
  CHECK(u[0] == doctest::Approx(0.0).epsilon(0).scale(1e-10));
  CHECK(u[1] == doctest::Approx(0.3).epsilon(1e-10));
}

TEST_CASE("lax curve branches") {
  const SystemSpec burgers = catalog_system("burgers");
  {
    auto [u, kind] = lax_curve(burgers, v1(0.0), 1, 0.5);
    CHECK(u[0] == doctest::Approx(0.5));
    CHECK(kind == WaveKind::Rarefaction);
  }
  {
    auto [u, kind] = lax_curve(burgers, v1(1.0), 1, -0.5);
    CHECK(u[0] == doctest::Approx(0.5));
    CHECK(kind == WaveKind::Shock);
    CHECK(hugoniot_speed(burgers, v1(1.0), 1, -0.5) == doctest::Approx(0.75));
  }
  const SystemSpec tri = catalog_system("triangular_counterexample");
  {
    auto [u, kind] = lax_curve(tri, v2(0, 0), 1, 0.2);
    CHECK(kind == WaveKind::Contact);
    CHECK(std::abs(hugoniot_speed(tri, v2(0, 0), 1, 0.2)) < 1e-10);
    CHECK(u[1] == doctest::Approx(0.0).epsilon(0).scale(1e-9));
  }
  const SystemSpec quartic = catalog_system("quartic");
  CHECK_THROWS_AS(lax_curve(quartic, v1(0.0), 1, 0.1), UnclassifiedFamily);
}

TEST_CASE("solve_riemann basics") {
  const SystemSpec burgers = catalog_system("burgers");
  CHECK(solve_riemann(burgers, v1(0.4), v1(0.4)).entries.empty());
  {
    const WaveFan fan = solve_riemann(burgers, v1(1.0), v1(-1.0));
    REQUIRE(fan.entries.size() == 1);
    REQUIRE(fan.entries[0].sub.size() == 1);
    CHECK(fan.entries[0].sub[0].kind == WaveKind::Shock);
    CHECK(fan.entries[0].sub[0].speed_left ==
          doctest::Approx(0.0).epsilon(0).scale(1e-10));
  }
  const SystemSpec tri = catalog_system("triangular_counterexample");
  {
    const WaveFan fan = solve_riemann(tri, v2(0, 0), v2(0.1, 0.1));
    REQUIRE(fan.entries.size() == 2);
    CHECK(std::abs(fan.entries[0].size) > 1e-8);
    CHECK(std::abs(fan.entries[1].size) > 1e-8);
    // forward re-composition reaches uR
    Vec u = v2(0, 0);
    for (const auto& e : fan.entries)
      u = lax_curve(tri, u, e.family, e.size).first;
    CHECK((u - v2(0.1, 0.1)).lpNorm<Eigen::Infinity>() < 1e-9);
  }
}

TEST_CASE("solve_riemann round trip on fuzzed sizes") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> ds(-0.04, 0.04);
  for (const char* id : {"elasticity_damped", "triangular_counterexample"}) {
    const SystemSpec sys = catalog_system(id);
    const Vec mid = 0.5 * (sys.domain.lo + sys.domain.hi);
    for (int k = 0; k < 30; ++k) {
      Vec s(sys.dim);
      for (int i = 0; i < sys.dim; ++i) s[i] = ds(rng);
      Vec u = mid;
      for (int i = 1; i <= sys.dim; ++i)
        u = lax_curve(sys, u, i, s[i - 1]).first;
      const WaveFan fan = solve_riemann(sys, mid, u);
      Vec got = Vec::Zero(sys.dim);
      for (const auto& e : fan.entries) got[e.family - 1] = e.size;
      CHECK((got - s).lpNorm<Eigen::Infinity>() < 1e-7);
    }
  }
}

TEST_CASE("scalar envelope solver") {
  const SystemSpec burgers = catalog_system("burgers");
  {
    const WaveFan fan = scalar_envelope_solve(burgers, 0.0, 1.0);
    REQUIRE(fan.entries.size() == 1);
    REQUIRE(fan.entries[0].sub.size() == 1);
    const SubWave& w = fan.entries[0].sub[0];
    CHECK(w.kind == WaveKind::Rarefaction);
    CHECK(w.speed_left == doctest::Approx(0.0).epsilon(0).scale(1e-9));
    CHECK(w.speed_right == doctest::Approx(1.0));
  }
  CHECK(scalar_envelope_solve(burgers, 0.3, 0.3).entries.empty());

  // the envelope route agrees with the Lax-curve route for the convex flux
  {
    const WaveFan env = scalar_envelope_solve(burgers, 1.0, -0.5);
    const WaveFan lax = solve_riemann(burgers, v1(1.0), v1(-0.5));
    REQUIRE(env.entries.size() == 1);
    REQUIRE(env.entries[0].sub.size() == 1);
    CHECK(env.entries[0].sub[0].speed_left ==
          doctest::Approx(lax.entries[0].sub[0].speed_left).epsilon(1e-9));
  }

  // cubic flux: shock from -1 detaching tangentially at u* = 1/2
  const SystemSpec cubic = catalog_system("cubic");
  {
    const WaveFan fan = scalar_envelope_solve(cubic, -1.0, 1.0);
    REQUIRE(fan.entries.size() == 1);
    REQUIRE(fan.entries[0].sub.size() == 2);
    const SubWave& sh = fan.entries[0].sub[0];
    const SubWave& rf = fan.entries[0].sub[1];
    CHECK(sh.kind == WaveKind::Shock);
    CHECK(rf.kind == WaveKind::Rarefaction);
    CHECK(sh.right[0] == doctest::Approx(0.5).epsilon(1e-3));
    CHECK(sh.speed_left == doctest::Approx(0.25).epsilon(1e-3));
    CHECK(rf.right[0] == doctest::Approx(1.0));
  }

  // quartic is convex (F'' = 3u^2 >= 0): increasing data give one rarefaction
  const SystemSpec quartic = catalog_system("quartic");
  {
    const WaveFan fan = scalar_envelope_solve(quartic, -1.0, 1.0);
    REQUIRE(fan.entries.size() == 1);
    REQUIRE(fan.entries[0].sub.size() == 1);
    CHECK(fan.entries[0].sub[0].kind == WaveKind::Rarefaction);
  }

  // profile agreement with the argmin/argmax oracle away from shock slopes
  for (auto [uL, uR] : std::initializer_list<std::pair<double, double>>{
           {-1.0, 1.0}, {1.0, -1.0}, {-1.2, 0.7}, {0.9, -0.3}}) {
    for (const char* id : {"cubic", "quartic", "burgers"}) {
      const SystemSpec sys = catalog_system(id);
      const WaveFan fan = id == std::string("burgers")
                              ? solve_riemann(sys, v1(uL), v1(uR))
                              : scalar_envelope_solve(sys, uL, uR);
      std::vector<double> shock_speeds;
      for (const auto& e : fan.entries)
        for (const auto& w : e.sub)
          if (w.kind != WaveKind::Rarefaction)
            shock_speeds.push_back(w.speed_left);
      for (double xi = -2.0; xi <= 2.0; xi += 0.037) {
        bool near_shock = false;
        for (double s : shock_speeds)
          if (std::abs(xi - s) < 0.02) near_shock = true;
        if (near_shock) continue;
        const double got = fan_value(fan, xi);
        const double want = scalar_riemann_oracle(sys, uL, uR, xi);
        CHECK(std::abs(got - want) < 3e-3);
      }
    }
  }
}

TEST_CASE("fan discretization") {
  const SystemSpec burgers = catalog_system("burgers");
  const WaveFan fan = solve_riemann(burgers, v1(0.0), v1(1.0));
  {
    const auto fronts = discretize_fan(burgers, fan, 0.25);
    REQUIRE(fronts.size() == 4);
    for (int k = 0; k < 4; ++k) {
      CHECK(fronts[k].size == doctest::Approx(0.25).epsilon(1e-12));
      CHECK(fronts[k].speed ==
            doctest::Approx(0.125 + 0.25 * k).epsilon(1e-12));
    }
  }
  {
    const auto fronts = discretize_fan(burgers, fan, 2.0);
    REQUIRE(fronts.size() == 1);
    CHECK(fronts[0].size == doctest::Approx(1.0));
  }
  {
    const WaveFan shock = solve_riemann(burgers, v1(1.0), v1(-1.0));
    const auto fronts = discretize_fan(burgers, shock, 0.25);
    REQUIRE(fronts.size() == 1);
    CHECK(fronts[0].size == doctest::Approx(-2.0));
  }

  // signed sizes per family telescope to the fan entry size (straight curves)
  const SystemSpec tri = catalog_system("triangular_counterexample");
  const WaveFan f2 = solve_riemann(tri, v2(0.0, -0.1), v2(0.1, 0.15));
  const auto fronts = discretize_fan(tri, f2, 0.02);
  Vec sums = Vec::Zero(2);
  for (const auto& f : fronts) sums[f.family - 1] += f.size;
  for (const auto& e : f2.entries)
    CHECK(sums[e.family - 1] == doctest::Approx(e.size).epsilon(1e-11));

  // rarefaction front speeds stay within 2*eps of the slice speeds
  for (const auto& f : fronts) {
    if (f.kind != WaveKind::Rarefaction) continue;
    const double l0 = eigen(tri, f.left).lambda[f.family - 1];
    const double l1 = eigen(tri, f.right).lambda[f.family - 1];
    CHECK(std::abs(f.speed - l0) <= 2 * 0.02);
    CHECK(std::abs(f.speed - l1) <= 2 * 0.02);
  }
}
