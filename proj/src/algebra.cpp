#include "ft/algebra.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace ft {

namespace {

// 16-point Gauss-Legendre rule on [0,1].
constexpr int kGL = 16;
constexpr double kGLx[kGL / 2] = {
    0.0950125098376374401853, 0.2816035507792589132304,
    0.4580167776572273863424, 0.6178762444026437484467,
    0.7554044083550030338951, 0.8656312023878317438805,
    0.9445750230732325760780, 0.9894009349916499325962};
constexpr double kGLw[kGL / 2] = {
    0.1894506104550684962854, 0.1826034150449235888667,
    0.1691565193950025381893, 0.1495959888165767320815,
    0.1246289712555338720525, 0.0951585116824927848099,
    0.0622535239386478928628, 0.0271524594117540948518};

void gl16_unit(double* nodes, double* weights) {
  for (int k = 0; k < kGL / 2; ++k) {
    nodes[2 * k] = 0.5 * (1.0 - kGLx[k]);
    nodes[2 * k + 1] = 0.5 * (1.0 + kGLx[k]);
    weights[2 * k] = 0.5 * kGLw[k];
    weights[2 * k + 1] = 0.5 * kGLw[k];
  }
}

Vec sorted_real_eigenvalues(const Mat& A, double gap_rtol) {
  const int n = static_cast<int>(A.rows());
  if (n == 1) {
    Vec l(1);
    l[0] = A(0, 0);
    return l;
  }
  Eigen::EigenSolver<Mat> es(A);
  const auto ev = es.eigenvalues();
  double scale = 0.0;
  for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(ev[i]));
  Vec l(n);
  for (int i = 0; i < n; ++i) {
    if (std::abs(ev[i].imag()) > 1e-9 * std::max(scale, 1.0))
      throw NonHyperbolic("complex eigenvalue encountered");
    l[i] = ev[i].real();
  }
  std::sort(l.data(), l.data() + n);
  const double gap_thr = gap_rtol * std::max(scale, 1e-12);
  for (int i = 0; i + 1 < n; ++i)
    if (l[i + 1] - l[i] < gap_thr)
      throw NonHyperbolic("eigenvalue gap below threshold");
  return l;
}

void orient_columns(const SystemSpec& sys, const Vec& orient_at, Mat& R,
                    const AlgebraOptions& opt) {
  const int n = static_cast<int>(R.cols());
  for (int i = 0; i < n; ++i) {
    bool flipped = false;
    if (i < static_cast<int>(sys.field_class.size()) &&
        sys.field_class[i] == FieldClass::GenuinelyNonlinear) {
      const Vec g = lambda_gradient(sys, orient_at, i + 1, opt);
      const double d = g.dot(R.col(i));
      if (std::abs(d) > 1e-10) {
        if (d < 0) R.col(i) = -R.col(i);
        flipped = true;
      }
    }
    if (!flipped) {
      for (int k = 0; k < n; ++k) {
        if (std::abs(R(k, i)) > 1e-12) {
          if (R(k, i) < 0) R.col(i) = -R.col(i);
          break;
        }
      }
    }
  }
}

}  // namespace

EigenStructure eigen_of_matrix(const SystemSpec& sys, const Mat& A,
                               const Vec& orient_at,
                               const AlgebraOptions& opt) {
  const int n = static_cast<int>(A.rows());
  EigenStructure s;
  s.lambda = sorted_real_eigenvalues(A, opt.gap_rtol);
  if (n == 1) {
    s.right = Mat::Ones(1, 1);
    s.left = Mat::Ones(1, 1);
    orient_columns(sys, orient_at, s.right, opt);
    s.left(0, 0) = s.right(0, 0);
    return s;
  }
  Eigen::EigenSolver<Mat> es(A);
  const auto evals = es.eigenvalues();
  const auto evecs = es.eigenvectors();
  // match solver order to the sorted eigenvalues
  std::vector<int> order(n);
  std::vector<bool> used(n, false);
  for (int i = 0; i < n; ++i) {
    int best = -1;
    double bd = 0.0;
    for (int j = 0; j < n; ++j) {
      if (used[j]) continue;
      const double d = std::abs(evals[j].real() - s.lambda[i]);
      if (best < 0 || d < bd) {
        best = j;
        bd = d;
      }
    }
    used[best] = true;
    order[i] = best;
  }
  Mat R(n, n);
  for (int i = 0; i < n; ++i) {
    Vec v = evecs.col(order[i]).real();
    const double nv = v.norm();
    if (nv < 1e-14) throw NonHyperbolic("degenerate eigenvector");
    R.col(i) = v / nv;
  }
  orient_columns(sys, orient_at, R, opt);
  s.right = R;
  s.left = R.inverse();
  return s;
}

EigenStructure eigen(const SystemSpec& sys, const Vec& u,
                     const AlgebraOptions& opt) {
  if (!sys.domain.contains(u, 1e-9 * (1.0 + sys.domain.diameter())))
    throw OutOfDomain(sys.name + ": state outside the domain box");
  return eigen_of_matrix(sys, sys.jacobian_at(u), u, opt);
}

Vec lambda_gradient(const SystemSpec& sys, const Vec& u, int family,
                    const AlgebraOptions& opt) {
  const int n = sys.dim;
  Vec g(n);
  for (int j = 0; j < n; ++j) {
    const double h = opt.fd_scale * (1.0 + std::abs(u[j]));
    Vec up = u, um = u;
    up[j] += h;
    um[j] -= h;
    const Vec lp = sorted_real_eigenvalues(sys.jacobian_at(up), opt.gap_rtol);
    const Vec lm = sorted_real_eigenvalues(sys.jacobian_at(um), opt.gap_rtol);
    g[j] = (lp[family - 1] - lm[family - 1]) / (2.0 * h);
  }
  return g;
}

double gnl_indicator(const SystemSpec& sys, const Vec& u, int family,
                     const AlgebraOptions& opt) {
  const EigenStructure es = eigen(sys, u, opt);
  return lambda_gradient(sys, u, family, opt).dot(es.right.col(family - 1));
}

namespace {

// pi^(k) by nested central differences along the local eigenvector field.
double pi_order(const SystemSpec& sys, const Vec& u, int family, int k,
                double step_scale, const AlgebraOptions& opt) {
  if (k == 1) return gnl_indicator(sys, u, family, opt);
  const EigenStructure es = eigen_of_matrix(sys, sys.jacobian_at(u), u, opt);
  const Vec dir = es.right.col(family - 1);
  const double h = step_scale * (1.0 + u.norm());
  const double a = pi_order(sys, u + h * dir, family, k - 1, step_scale, opt);
  const double b = pi_order(sys, u - h * dir, family, k - 1, step_scale, opt);
  return (a - b) / (2.0 * h);
}

}  // namespace

std::optional<int> nondegeneracy_order(const SystemSpec& sys, const Vec& u,
                                       int family, int max_order,
                                       const AlgebraOptions& opt) {
  const double tol = 1e-5;
  for (int k = 1; k <= max_order; ++k) {
    const double a = pi_order(sys, u, family, k, opt.fd_scale, opt);
    const double b = pi_order(sys, u, family, k, opt.fd_scale / 2.0, opt);
    const double mag = std::max(std::abs(a), std::abs(b));
    if (std::abs(a - b) > 0.25 * mag && mag > tol / 2.0)
      throw DerivativeNoise(
          "finite-difference estimate unstable at order " + std::to_string(k) +
          "; orders above 3 require analytic derivatives");
    if (mag > tol) return k;
  }
  return std::nullopt;
}

EigenStructure averaged_eigen(const SystemSpec& sys, const Vec& uL,
                              const Vec& uR, const AlgebraOptions& opt) {
  const double pad = 1e-9 * (1.0 + sys.domain.diameter());
  if (!sys.domain.contains(uL, pad) || !sys.domain.contains(uR, pad))
    throw OutOfDomain(sys.name + ": segment endpoint outside the domain box");
  double nodes[kGL], weights[kGL];
  gl16_unit(nodes, weights);
  Mat A = Mat::Zero(sys.dim, sys.dim);
  for (int k = 0; k < kGL; ++k) {
    const Vec u = nodes[k] * uL + (1.0 - nodes[k]) * uR;
    A += weights[k] * sys.jacobian_at(u);
  }
  return eigen_of_matrix(sys, A, 0.5 * (uL + uR), opt);
}

TransversalityReport transversality_check(const SystemSpec& sys, int family,
                                          int samples_per_axis,
                                          double zero_tol, double angle_tol,
                                          const AlgebraOptions& opt) {
  TransversalityReport rep;
  rep.family = family;
  const int n = sys.dim;
  const int m = std::max(samples_per_axis, 2);
  std::vector<int> idx(n, 0);
  long total = 0, zeros = 0;
  const double grad_tol = 1e-6;
  while (true) {
    Vec u(n);
    for (int d = 0; d < n; ++d) {
      const double th = static_cast<double>(idx[d]) / (m - 1);
      u[d] = sys.domain.lo[d] + th * (sys.domain.hi[d] - sys.domain.lo[d]);
    }
    ++total;
    const double pi1 = gnl_indicator(sys, u, family, opt);
    if (std::abs(pi1) <= zero_tol) {
      ++zeros;
      TransversalityPoint pt;
      pt.u = u;
      pt.indicator = pi1;
      // gradient of pi^(1) along the axes
      Vec g(n);
      for (int d = 0; d < n; ++d) {
        const double h = opt.fd_scale * (1.0 + std::abs(u[d]));
        Vec up = u, um = u;
        up[d] += h;
        um[d] -= h;
        g[d] = (gnl_indicator(sys, up, family, opt) -
                gnl_indicator(sys, um, family, opt)) /
               (2.0 * h);
      }
      const EigenStructure es = eigen(sys, u, opt);
      const Vec r = es.right.col(family - 1);
      pt.degenerate = false;
      if (g.norm() > grad_tol) {
        pt.angle = std::asin(std::min(1.0, std::abs(g.dot(r)) / (g.norm() * r.norm())));
      } else {
        // zero set not a smooth graph here; probe higher directional orders
        bool some_nonzero = false;
        for (int k = 2; k <= 4 && !some_nonzero; ++k)
          some_nonzero = std::abs(pi_order(sys, u, family, k, opt.fd_scale, opt)) > 1e-5;
        if (some_nonzero) {
          pt.angle = std::asin(1.0);  // isolated zero, transversal by higher order
        } else {
          pt.angle = 0.0;
          pt.degenerate = true;
        }
      }
      pt.flagged = pt.degenerate || pt.angle < angle_tol;
      if (pt.flagged) ++rep.flagged_count;
      rep.zero_set.push_back(std::move(pt));
    }
    int d = 0;
    while (d < n && ++idx[d] == m) idx[d++] = 0;
    if (d == n) break;
  }
  rep.zero_set_fills_grid = (zeros == total);
  return rep;
}

}  // namespace ft
