#ifndef FT_ALGEBRA_HPP
#define FT_ALGEBRA_HPP

#include "ft/system.hpp"

#include <optional>

namespace ft {

/// Eigenstructure of DF(u) (or of an averaged matrix): ascending real
/// eigenvalues, unit right eigenvectors (columns), dual left eigenvectors
/// (rows) with left.row(h) * right.col(k) = delta_hk.
struct EigenStructure {
  Vec lambda;
  Mat right;
  Mat left;
};

struct AlgebraOptions {
  double gap_rtol = 1e-8;    // hyperbolicity gap threshold, relative to max|lambda|
  double fd_scale = 1e-6;    // gradient step is fd_scale*(1+|u|)
};

/// Eigenstructure of the flux Jacobian at u. Orientation is deterministic:
/// genuinely-nonlinear families point uphill in lambda, others fix the first
/// nonzero component positive.
EigenStructure eigen(const SystemSpec& sys, const Vec& u,
                     const AlgebraOptions& opt = {});

/// Eigenstructure of an arbitrary matrix, oriented with the rules of the
/// system evaluated at `orient_at`. Used for averaged matrices.
EigenStructure eigen_of_matrix(const SystemSpec& sys, const Mat& A,
                               const Vec& orient_at,
                               const AlgebraOptions& opt = {});

/// Gradient of the i-th eigenvalue, by central differences of eigen().
Vec lambda_gradient(const SystemSpec& sys, const Vec& u, int family,
                    const AlgebraOptions& opt = {});

/// grad(lambda_i) . r_i at u; zero identically on linearly degenerate fields.
double gnl_indicator(const SystemSpec& sys, const Vec& u, int family,
                     const AlgebraOptions& opt = {});

/// Smallest k <= max_order with pi_i^(k)(u) != 0, where pi^(1) = grad(lambda_i).r_i
/// and pi^(k+1) = grad(pi^(k)).r_i. nullopt means degenerate up to max_order.
std::optional<int> nondegeneracy_order(const SystemSpec& sys, const Vec& u,
                                       int family, int max_order,
                                       const AlgebraOptions& opt = {});

/// Eigenstructure of the averaged matrix  int_0^1 DF(theta uL + (1-theta) uR) dtheta,
/// 16-point Gauss-Legendre in theta.
EigenStructure averaged_eigen(const SystemSpec& sys, const Vec& uL,
                              const Vec& uR, const AlgebraOptions& opt = {});

struct TransversalityPoint {
  Vec u;
  double indicator;      // pi^(1)(u)
  double angle;          // angle (radians) between r_i and the local tangent of Z_i
  bool degenerate;       // all pi^(k) up to the probe order vanish
  bool flagged;          // angle below tolerance or degenerate
};

struct TransversalityReport {
  int family = 0;
  std::vector<TransversalityPoint> zero_set;
  int flagged_count = 0;
  bool zero_set_fills_grid = false;  // indicator vanished at every sample
};

/// Samples grad(lambda_i).r_i on a tensor grid with `samples_per_axis` points,
/// locates its zero set and reports transversality of r_i against it.
TransversalityReport transversality_check(const SystemSpec& sys, int family,
                                          int samples_per_axis,
                                          double zero_tol = 1e-7,
                                          double angle_tol = 1e-3,
                                          const AlgebraOptions& opt = {});

}  // namespace ft

#endif  // FT_ALGEBRA_HPP
