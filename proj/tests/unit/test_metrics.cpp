#include <doctest.h>

#include <cmath>

#include "hypsing/metrics.hpp"

using namespace hypsing;

TEST_CASE("closed-form densities") {
  const Complex z(0.3, -0.2);
  const double r = std::abs(z);
  CHECK(hyperbolic_density(Model::Disk, z) == doctest::Approx(4.0 / std::pow(1 - r * r, 2)));
  CHECK(hyperbolic_density(Model::HalfPlane, Complex(1.0, 0.5)) == doctest::Approx(4.0));
  const double th = 0.4;
  const double conical = 4 * th * th * std::pow(r, 2 * th - 2) / std::pow(1 - std::pow(r, 2 * th), 2);
  CHECK(conical_density(th, z) == doctest::Approx(conical).epsilon(1e-14));
  CHECK(cusp_density(z) == doctest::Approx(1.0 / (r * r * std::log(r) * std::log(r))).epsilon(1e-14));
  CHECK(conical_density(1.0, z) == doctest::Approx(hyperbolic_density(Model::Disk, z)));
}

TEST_CASE("log density agrees with density") {
  const ConformalMetric metrics[] = {ConformalMetric::hyperbolic_disk(), ConformalMetric::conical(2.5),
                                     ConformalMetric::cusp()};
  for (const auto& m : metrics) {
    const Complex z(0.05, 0.6);
    CHECK(std::exp(2 * log_density(m, z)) == doctest::Approx(density(m, z)).epsilon(1e-13));
  }
}

TEST_CASE("pullbacks through the normal forms give the local models") {
  for (double th : {0.2, 0.5, 1.5, 3.0}) {
    const ConformalMetric p = ConformalMetric::pullback(DevelopingMapSpec::power(th), ConformalMetric::hyperbolic_disk());
    for (Complex z : {Complex(0.2, 0.1), Complex(-0.7, 0.3), Complex(0.01, -0.02)}) {
      CHECK(density(p, z) == doctest::Approx(conical_density(th, z)).epsilon(1e-12));
    }
  }
  const ConformalMetric c = ConformalMetric::pullback(DevelopingMapSpec::log(), ConformalMetric::hyperbolic_half_plane());
  for (Complex z : {Complex(0.2, 0.1), Complex(-0.7, 0.3), Complex(1e-4, 0.0)}) {
    CHECK(density(c, z) == doctest::Approx(cusp_density(z)).epsilon(1e-12));
  }
}

TEST_CASE("curvature -1 on exact metrics with second-order convergence") {
  const ConformalMetric metrics[] = {ConformalMetric::conical(0.1), ConformalMetric::conical(3.0),
                                     ConformalMetric::cusp()};
  for (const auto& m : metrics) {
    const Complex z = std::polar(0.4, 0.7);
    const double coarse = log_density_gradient_check(m, z, 2e-3);
    const double fine = log_density_gradient_check(m, z, 1e-3);
    CHECK(coarse < 1e-3);
    CHECK(coarse / fine == doctest::Approx(4.0).epsilon(0.05));
  }
  CHECK(log_density_gradient_check(ConformalMetric::hyperbolic_half_plane(), Complex(0.3, 1.0), 1e-3) < 1e-5);
}

TEST_CASE("a metric that is not hyperbolic has a large residual") {
  // 4/(1-|z|^2)^2 scaled by 4 has curvature -1/4.
  GridSampled g{-0.5, 0.5, 101, -0.5, 0.5, 101, {}};
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const Complex z(g.x0 + i * 0.01, g.y0 + j * 0.01);
      g.u.push_back(0.5 * std::log(16.0 / std::pow(1 - std::norm(z), 2)));
    }
  }
  const ConformalMetric m = ConformalMetric::grid(g);
  CHECK(log_density_gradient_check(m, Complex(0.1, 0.05), 0.01) > 0.5);
}

TEST_CASE("grid metric interpolates its samples") {
  GridSampled g{-0.5, 0.5, 201, -0.5, 0.5, 201, {}};
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const Complex z(g.x0 + i * 0.005, g.y0 + j * 0.005);
      g.u.push_back(log_density(ConformalMetric::hyperbolic_disk(), z));
    }
  }
  const ConformalMetric m = ConformalMetric::grid(g);
  const Complex z(0.1, -0.2);
  CHECK(log_density(m, z) == doctest::Approx(log_density(ConformalMetric::hyperbolic_disk(), z)).epsilon(1e-4));
  CHECK(log_density_gradient_check(m, z, 0.01) < 1e-2);
  CHECK_THROWS_AS(density(m, Complex(0.6, 0.0)), Error);
  g.u.pop_back();
  CHECK_THROWS_AS(ConformalMetric::grid(g), Error);
}

TEST_CASE("lengths of geodesic segments") {
  const Complex radial[] = {0.0, 0.6};
  CHECK(curve_length(ConformalMetric::hyperbolic_disk(), radial, 2000) ==
        doctest::Approx(2 * std::atanh(0.6)).epsilon(1e-6));
  const Complex vertical[] = {Complex(0.0, 1.0), Complex(0.0, 5.0)};
  CHECK(curve_length(ConformalMetric::hyperbolic_half_plane(), vertical, 4000) ==
        doctest::Approx(std::log(5.0)).epsilon(1e-6));
  const Complex through[] = {-0.5, 0.5};
  CHECK_THROWS_AS(curve_length(ConformalMetric::cusp(), through, 2), Error);
}

TEST_CASE("grids") {
  const auto a = annulus_grid(0.1, 0.5, 3, 4);
  REQUIRE(a.size() == 12);
  CHECK(std::abs(a[0]) == doctest::Approx(0.1));
  CHECK(std::abs(a[4]) == doctest::Approx(0.3));
  CHECK(std::abs(a[11]) == doctest::Approx(0.5));
  const auto r = rect_grid(0.0, 1.0, 3, 2.0, 3.0, 2);
  REQUIRE(r.size() == 6);
  CHECK(r[1] == Complex(0.5, 2.0));
  CHECK(r[3] == Complex(0.0, 3.0));
  CHECK(rect_grid(0.2, 0.4, 1, 0.3, 0.5, 1).size() == 1);
}

TEST_CASE("guards") {
  CHECK_THROWS_AS(ConformalMetric::conical(1.0), Error);
  CHECK_THROWS_AS(ConformalMetric::conical(-0.5), Error);
  CHECK_THROWS_AS(density(ConformalMetric::cusp(), 0.0), Error);
  CHECK_THROWS_AS(density(ConformalMetric::hyperbolic_disk(), 1.0), Error);
  CHECK_THROWS_AS(log_density_gradient_check(ConformalMetric::conical(0.5), 0.005, 1e-3), Error);
  CHECK_THROWS_AS(log_density_gradient_check(ConformalMetric::hyperbolic_disk(), 0.9995, 1e-3), Error);
  CHECK_THROWS_AS(annulus_grid(0.0, 0.5, 2, 2), Error);
}
