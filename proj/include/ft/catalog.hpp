#ifndef FT_CATALOG_HPP
#define FT_CATALOG_HPP

#include "ft/system.hpp"

#include <map>
#include <string>

namespace ft {

/// Built-in systems:
///   burgers                   u_t + (u^2/2)_x = 0
///   quartic                   u_t + (u^4/4)_x = 0 (degenerate convex minimum)
///   cubic                     u_t + (u^3/3)_x = 0 (non-convex)
///   elasticity_damped         v_t - u_x = 0, u_t - sigma(v)_x = -a u,
///                             sigma(v) = v + v^3, on a box with v > 0
///   granular                  h_t + (hp)_x = (p-1)h, p_t + ((p-1)h)_x = 0
///   arz_traffic               rho_t + (rho v)_x = 0, q_t + ((q - q*)v)_x = 0,
///                             v = (1/rho - 1/rho_M) q; optional relaxation
///   triangular_counterexample u_t = 0, v_t + ((1+u+v)v)_x = 0
/// Parameters not supplied fall back to documented defaults.
SystemSpec catalog_system(const std::string& id,
                          const std::map<std::string, double>& params = {});

/// The p-system of elasticity_damped on a box containing v = 0, where its
/// fields lose genuine nonlinearity; classified Unclassified, algebra only.
SystemSpec elasticity_wide_box(double a = 0.5);

}  // namespace ft

#endif  // FT_CATALOG_HPP
