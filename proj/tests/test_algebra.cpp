#include "doctest.h"

#include "ft/algebra.hpp"
#include "ft/catalog.hpp"

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

}  // namespace

TEST_CASE("eigenstructure of the triangular system at the origin") {
  const SystemSpec sys = catalog_system("triangular_counterexample");
  const EigenStructure es = eigen(sys, v2(0.0, 0.0));
  CHECK(es.lambda[0] == doctest::Approx(0.0).epsilon(0).scale(1));
  CHECK(es.lambda[1] == doctest::Approx(1.0));
  CHECK(es.right.col(0).isApprox(v2(1, 0), 1e-10));
  CHECK(es.right.col(1).isApprox(v2(0, 1), 1e-10));
  CHECK(es.left.row(0).transpose().isApprox(v2(1, 0), 1e-8));
  CHECK(es.left.row(1).transpose().isApprox(v2(0, 1), 1e-8));
}

TEST_CASE("scalar Burgers eigenstructure") {
  const SystemSpec sys = catalog_system("burgers");
  const EigenStructure es = eigen(sys, v1(0.7));
  CHECK(es.lambda[0] == doctest::Approx(0.7));
  CHECK(es.right(0, 0) == doctest::Approx(1.0));
  CHECK(es.left(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("p-system eigenvalues match the symbolic +-sqrt(sigma')") {
  const SystemSpec sys = elasticity_wide_box();
  const EigenStructure at0 = eigen(sys, v2(0.0, 0.0));
  CHECK(at0.lambda[0] == doctest::Approx(-1.0));
  CHECK(at0.lambda[1] == doctest::Approx(1.0));
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dv(-0.8, 0.8);
  for (int k = 0; k < 20; ++k) {
    const double v = dv(rng), u = dv(rng);
    const double c = std::sqrt(1.0 + 3.0 * v * v);  // symbolic oracle
    const EigenStructure es = eigen(sys, v2(v, u));
    CHECK(es.lambda[0] == doctest::Approx(-c).epsilon(1e-10));
    CHECK(es.lambda[1] == doctest::Approx(c).epsilon(1e-10));
  }
}

TEST_CASE("eigenstructure invariants on the catalog") {
  for (const char* id : {"burgers", "quartic", "elasticity_damped", "granular",
                         "arz_traffic", "triangular_counterexample"}) {
    const SystemSpec sys = catalog_system(id);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> th(0.05, 0.95);
    for (int k = 0; k < 25; ++k) {
      Vec u(sys.dim);
      for (int d = 0; d < sys.dim; ++d)
        u[d] = sys.domain.lo[d] +
               th(rng) * (sys.domain.hi[d] - sys.domain.lo[d]);
      const EigenStructure es = eigen(sys, u);
      for (int i = 0; i < sys.dim; ++i)
        CHECK(std::abs(es.right.col(i).norm() - 1.0) < 1e-10);
      const Mat prod = es.left * es.right;
      CHECK((prod - Mat::Identity(sys.dim, sys.dim))
                .lpNorm<Eigen::Infinity>() < 1e-8);
      for (int i = 0; i + 1 < sys.dim; ++i)
        CHECK(es.lambda[i] < es.lambda[i + 1]);
      // reconstruction of the Jacobian from the spectral data
      const Mat J = sys.jacobian_at(u);
      Mat R = Mat::Zero(sys.dim, sys.dim);
      for (int i = 0; i < sys.dim; ++i)
        R += es.lambda[i] * es.right.col(i) * es.left.row(i);
      CHECK((J - R).norm() <= 1e-6 * J.norm());
      // declared GNL families point uphill
      for (int i = 0; i < sys.dim; ++i)
        if (sys.field_class[i] == FieldClass::GenuinelyNonlinear)
          CHECK(lambda_gradient(sys, u, i + 1).dot(es.right.col(i)) > 0.0);
    }
  }
}

TEST_CASE("eigen errors") {
  const SystemSpec burgers = catalog_system("burgers");
  CHECK_THROWS_AS(eigen(burgers, v1(5.0)), OutOfDomain);

  SystemSpec rot;  // flux with a rotational Jacobian: complex eigenvalues
  rot.name = "rotation";
  rot.dim = 2;
  rot.flux = [](const Vec& u) { return v2(-u[1], u[0]); };
  rot.domain.lo = v2(-1, -1);
  rot.domain.hi = v2(1, 1);
  rot.field_class = {FieldClass::Unclassified, FieldClass::Unclassified};
  CHECK_THROWS_AS(eigen(rot, v2(0.1, 0.1)), NonHyperbolic);
}

TEST_CASE("gnl indicator") {
  const SystemSpec tri = catalog_system("triangular_counterexample");
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(-0.25, 0.25);
  for (int k = 0; k < 10; ++k)
    CHECK(std::abs(gnl_indicator(tri, v2(d(rng), d(rng)), 1)) < 1e-8);
  CHECK(gnl_indicator(tri, v2(0, 0), 2) == doctest::Approx(2.0).epsilon(1e-6));

  const SystemSpec burgers = catalog_system("burgers");
  CHECK(gnl_indicator(burgers, v1(0.3), 1) == doctest::Approx(1.0));

  // Richardson stability under halving of the step
  AlgebraOptions coarse, fine;
  fine.fd_scale = coarse.fd_scale / 2.0;
  const SystemSpec el = catalog_system("elasticity_damped");
  const Vec u = v2(0.6, 0.1);
  for (int i = 1; i <= 2; ++i)
    CHECK(std::abs(gnl_indicator(el, u, i, coarse) -
                   gnl_indicator(el, u, i, fine)) < 1e-4);
}

TEST_CASE("nondegeneracy orders") {
  const SystemSpec burgers = catalog_system("burgers");
  CHECK(nondegeneracy_order(burgers, v1(0.0), 1, 3) == 1);
  CHECK(nondegeneracy_order(burgers, v1(-0.8), 1, 3) == 1);

  const SystemSpec quartic = catalog_system("quartic");
  CHECK(nondegeneracy_order(quartic, v1(0.0), 1, 4) == 3);
  CHECK(nondegeneracy_order(quartic, v1(0.5), 1, 4) == 1);

  const SystemSpec tri = catalog_system("triangular_counterexample");
  CHECK(!nondegeneracy_order(tri, v2(0.1, -0.05), 1, 5).has_value());
}

TEST_CASE("averaged matrix eigenstructure") {
  const SystemSpec burgers = catalog_system("burgers");
  // average of DF over the segment [0,1] has the midpoint slope
  const EigenStructure av = averaged_eigen(burgers, v1(1.0), v1(0.0));
  CHECK(av.lambda[0] == doctest::Approx(0.5).epsilon(1e-12));

  const SystemSpec tri = catalog_system("triangular_counterexample");
  const EigenStructure av2 = averaged_eigen(tri, v2(0, 0), v2(0, 0.3));
  // closed form of the averaged Jacobian: [[0,0],[0.15, 1.3]]
  CHECK(av2.lambda[1] == doctest::Approx(1.3).epsilon(1e-12));
  CHECK(av2.lambda[0] == doctest::Approx(0.0).epsilon(0).scale(1));

  // averaged_eigen(u,u) == eigen(u) componentwise
  for (const char* id : {"burgers", "elasticity_damped",
                         "triangular_counterexample"}) {
    const SystemSpec sys = catalog_system(id);
    const Vec u = 0.5 * (sys.domain.lo + sys.domain.hi);
    const EigenStructure a = eigen(sys, u);
    const EigenStructure b = averaged_eigen(sys, u, u);
    CHECK((a.lambda - b.lambda).lpNorm<Eigen::Infinity>() < 1e-10);
    CHECK((a.right - b.right).lpNorm<Eigen::Infinity>() < 1e-10);
    CHECK((a.left - b.left).lpNorm<Eigen::Infinity>() < 1e-10);
  }
}

TEST_CASE("transversality of the nonlinearity zero set") {
  const SystemSpec burgers = catalog_system("burgers");
  const TransversalityReport r1 = transversality_check(burgers, 1, 41);
  CHECK(r1.zero_set.empty());

  const SystemSpec quartic = catalog_system("quartic");
  const TransversalityReport r2 = transversality_check(quartic, 1, 41);
  REQUIRE(!r2.zero_set.empty());
  CHECK(r2.flagged_count == 0);
  CHECK(!r2.zero_set_fills_grid);
  for (const auto& p : r2.zero_set) {
    CHECK(std::abs(p.u[0]) < 0.05);
    CHECK(p.angle == doctest::Approx(std::asin(1.0)));
  }

  const SystemSpec tri = catalog_system("triangular_counterexample");
  const TransversalityReport r3 = transversality_check(tri, 1, 9);
  CHECK(r3.zero_set_fills_grid);
  CHECK(r3.flagged_count == static_cast<int>(r3.zero_set.size()));
  CHECK(r3.flagged_count == 81);
}
