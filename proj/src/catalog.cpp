#include "ft/catalog.hpp"

#include <cmath>

namespace ft {

namespace {

double param(const std::map<std::string, double>& p, const std::string& key,
             double fallback) {
  const auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

Box box2(double l0, double h0, double l1, double h1) {
  Box b;
  b.lo = Vec(2);
  b.hi = Vec(2);
  b.lo << l0, l1;
  b.hi << h0, h1;
  return b;
}

Box box1(double lo, double hi) {
  Box b;
  b.lo = Vec::Constant(1, lo);
  b.hi = Vec::Constant(1, hi);
  return b;
}

SystemSpec make_burgers() {
  SystemSpec s;
  s.name = "burgers";
  s.dim = 1;
  s.flux = [](const Vec& u) { return Vec(0.5 * u.array().square()); };
  s.jacobian = [](const Vec& u) { return Mat(u.asDiagonal()); };
  s.domain = box1(-2.0, 2.0);
  s.field_class = {FieldClass::GenuinelyNonlinear};
  return s;
}

SystemSpec make_scalar_power(const std::string& name, int p, double lo,
                             double hi) {
  SystemSpec s;
  s.name = name;
  s.dim = 1;
  s.flux = [p](const Vec& u) {
    return Vec(Vec::Constant(1, std::pow(u[0], p) / p));
  };
  s.jacobian = [p](const Vec& u) {
    return Mat(Mat::Constant(1, 1, std::pow(u[0], p - 1)));
  };
  s.domain = box1(lo, hi);
  s.field_class = {FieldClass::Unclassified};
  return s;
}

SystemSpec make_elasticity(double a, const Box& box, FieldClass fc) {
  // state (v, u): v_t - u_x = 0, u_t - sigma(v)_x = -a u, sigma = v + v^3
  SystemSpec s;
  s.name = "elasticity_damped";
  s.dim = 2;
  s.flux = [](const Vec& w) {
    Vec f(2);
    f << -w[1], -(w[0] + w[0] * w[0] * w[0]);
    return f;
  };
  s.jacobian = [](const Vec& w) {
    Mat J(2, 2);
    J << 0.0, -1.0, -(1.0 + 3.0 * w[0] * w[0]), 0.0;
    return J;
  };
  if (a != 0.0) {
    s.source = [a](double, double, const Vec& w) {
      Vec g(2);
      g << 0.0, -a * w[1];
      return g;
    };
    s.source_x_bound = [](double) { return 0.0; };
    s.alpha_l1 = 0.0;
    s.source_lipschitz = a;
  }
  s.domain = box;
  s.field_class = {fc, fc};
  return s;
}

SystemSpec make_granular() {
  // state (h, p)
  SystemSpec s;
  s.name = "granular";
  s.dim = 2;
  s.flux = [](const Vec& w) {
    Vec f(2);
    f << w[0] * w[1], (w[1] - 1.0) * w[0];
    return f;
  };
  s.jacobian = [](const Vec& w) {
    Mat J(2, 2);
    J << w[1], w[0], w[1] - 1.0, w[0];
    return J;
  };
  s.source = [](double, double, const Vec& w) {
    Vec g(2);
    g << (w[1] - 1.0) * w[0], 0.0;
    return g;
  };
  s.source_x_bound = [](double) { return 0.0; };
  s.alpha_l1 = 0.0;
  s.source_lipschitz = 1.3;  // |g_h| <= |p-1|, |g_p| <= h on the box
  s.domain = box2(0.02, 0.15, 0.85, 1.15);
  s.field_class = {FieldClass::Unclassified, FieldClass::Unclassified};
  return s;
}

SystemSpec make_arz(double rho_max, double q_star, double relax,
                    double v_max) {
  // state (rho, q), v = (1/rho - 1/rho_max) q
  SystemSpec s;
  s.name = "arz_traffic";
  s.dim = 2;
  auto vel = [rho_max](double rho, double q) {
    return (1.0 / rho - 1.0 / rho_max) * q;
  };
  s.flux = [vel, q_star](const Vec& w) {
    const double v = vel(w[0], w[1]);
    Vec f(2);
    f << w[0] * v, (w[1] - q_star) * v;
    return f;
  };
  if (relax > 0.0) {
    s.source = [vel, relax, v_max, rho_max](double, double, const Vec& w) {
      const double v = vel(w[0], w[1]);
      const double V = v_max * (1.0 - w[0] / rho_max);
      Vec g(2);
      g << 0.0, (V - v) * w[0] / relax;
      return g;
    };
    s.source_x_bound = [](double) { return 0.0; };
    s.alpha_l1 = 0.0;
    s.source_lipschitz = (v_max + 2.0) / relax;
  }
  s.domain = box2(0.3, 0.7, 0.3, 0.7);
  s.field_class = {FieldClass::Unclassified, FieldClass::Unclassified};
  return s;
}

SystemSpec make_triangular() {
  // state (u, v): u_t = 0, v_t + ((1+u+v)v)_x = 0
  SystemSpec s;
  s.name = "triangular_counterexample";
  s.dim = 2;
  s.flux = [](const Vec& w) {
    Vec f(2);
    f << 0.0, (1.0 + w[0] + w[1]) * w[1];
    return f;
  };
  s.jacobian = [](const Vec& w) {
    Mat J(2, 2);
    J << 0.0, 0.0, w[1], 1.0 + w[0] + 2.0 * w[1];
    return J;
  };
  s.domain = box2(-0.3, 0.3, -0.3, 0.3);
  s.field_class = {FieldClass::LinearlyDegenerate,
                   FieldClass::GenuinelyNonlinear};
  return s;
}

}  // namespace

SystemSpec elasticity_wide_box(double a) {
  return make_elasticity(a, box2(-0.9, 0.9, -0.9, 0.9),
                         FieldClass::Unclassified);
}

SystemSpec catalog_system(const std::string& id,
                          const std::map<std::string, double>& params) {
  if (id == "burgers") return make_burgers();
  if (id == "quartic") return make_scalar_power("quartic", 4, -1.5, 1.5);
  if (id == "cubic") return make_scalar_power("cubic", 3, -1.5, 1.5);
  if (id == "elasticity_damped") {
    const double a = param(params, "a", 0.5);
    return make_elasticity(a, box2(0.2, 1.2, -1.0, 1.0),
                           FieldClass::GenuinelyNonlinear);
  }
  if (id == "granular") return make_granular();
  if (id == "arz_traffic")
    return make_arz(param(params, "rho_max", 1.0), param(params, "q_star", 0.5),
                    param(params, "relax", 0.0), param(params, "v_max", 1.0));
  if (id == "triangular_counterexample") return make_triangular();
  throw UnknownSystem(
      "unknown system '" + id +
      "'; known: burgers, quartic, cubic, elasticity_damped, granular, "
      "arz_traffic, triangular_counterexample");
}

}  // namespace ft
