#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "projgeom/path.hpp"
#include "projgeom/sampling.hpp"

using namespace projgeom;

TEST_CASE("geodesic hits its endpoints", "[geodesic]") {
  Rng rng(31);
  const RandomPair rp = random_pair_with_distance(rng, 8, 3, 0.8);
  const ProjectionPath g = geodesic(rp.p, rp.q, 33);
  REQUIRE(g.samples() == 33);
  CHECK(distance(g.points.front(), rp.p) < 1e-11);
  CHECK(distance(g.points.back(), rp.q) < 1e-9);
  CHECK(g.times.front() == 0.0);
  CHECK(g.times.back() == Catch::Approx(std::asin(0.8)).margin(1e-9));
}

TEST_CASE("identical endpoints give a constant path", "[geodesic]") {
  Rng rng(32);
  const Projection p = random_projection(rng, 5, 2);
  const ProjectionPath g = geodesic(p, p, 21);
  CHECK(g.samples() == 1);
  const LengthReport rep = verify_arcsine_law(g);
  CHECK(rep.polygonal == 0.0);
  CHECK(rep.endpoints_arcsin == 0.0);
  CHECK(rep.arcsine_law_ok);
}

TEST_CASE("geodesic distance law on the parameter grid", "[geodesic]") {
  Rng rng(33);
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 5 + static_cast<int>(rng() % 4);
    const int r = 1 + static_cast<int>(rng() % (n - 1));
    const double s = 0.2 + 0.7 * (static_cast<double>(rng() % 1000) / 1000.0);
    const RandomPair rp = random_pair_with_distance(rng, n, r, s);
    const ProjectionPath g = geodesic(rp.p, rp.q, 15);
    double worst = 0.0;
    for (int i = 0; i < g.samples(); ++i)
      for (int j = i + 1; j < g.samples(); ++j) {
        const double chord = distance(g.points[i], g.points[j]);
        worst = std::max(
            worst, std::abs(chord - std::sin(g.times[j] - g.times[i])));
      }
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("geodesic velocities are exact and of constant speed", "[geodesic]") {
  Rng rng(34);
  const RandomPair rp = random_pair_with_distance(rng, 7, 2, 0.75);
  const ProjectionPath g = geodesic(rp.p, rp.q, 201);
  REQUIRE(g.has_velocity());
  const double l = std::asin(0.75);
  for (int j = 0; j < g.samples(); ++j)
    CHECK(std::abs(operator_norm(g.velocities[j]) - 1.0) < 1e-9);
  // central finite differences reproduce the analytic velocity
  const int mid = 100;
  const double dt = g.times[mid + 1] - g.times[mid - 1];
  const Matrix fd =
      (g.points[mid + 1].matrix() - g.points[mid - 1].matrix()) * (1.0 / dt);
  CHECK(operator_norm(fd - g.velocities[mid]) < 1e-4);
  const LengthReport rep = verify_arcsine_law(g);
  REQUIRE(rep.riemannian.has_value());
  CHECK(*rep.riemannian == Catch::Approx(l).margin(1e-10));
  CHECK(rep.endpoints_arcsin == Catch::Approx(l).margin(1e-10));
  CHECK(rep.arcsine_law_ok);
}

TEST_CASE("arcsine law on conjugation paths", "[path]") {
  Rng rng(35);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 4 + static_cast<int>(rng() % 3);
    const int r = 1 + static_cast<int>(rng() % (n - 1));
    const ProjectionPath path = conjugation_path(rng, n, r, 0.5, 101);
    const LengthReport rep = verify_arcsine_law(path);
    REQUIRE(rep.riemannian.has_value());
    CHECK(rep.endpoints_arcsin <= *rep.riemannian + 1e-5);
    CHECK(rep.arcsine_law_ok);
  }
}

TEST_CASE("polygonal length grows under refinement", "[path]") {
  Rng rng(36);
  const ProjectionPath fine = conjugation_path(rng, 5, 2, 0.8, 65);
  ProjectionPath coarse;
  for (int j = 0; j < fine.samples(); j += 2) {
    coarse.times.push_back(fine.times[j]);
    coarse.points.push_back(fine.points[j]);
  }
  CHECK(polygonal_length(coarse) <= polygonal_length(fine) + 1e-14);
}

TEST_CASE("riemannian length falls back to finite differences", "[path]") {
  Rng rng(37);
  ProjectionPath path = conjugation_path(rng, 5, 2, 0.6, 81);
  const double with_velocity = riemannian_length(path);
  path.velocities.clear();
  const double with_fd = riemannian_length(path);
  CHECK(std::abs(with_velocity - with_fd) < 1e-3);
}

TEST_CASE("velocity inequality on confined paths", "[path]") {
  Rng rng(38);
  int confined = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const ProjectionPath path = conjugation_path(rng, 6, 2, 0.6, 201);
    double excursion = 0.0;
    for (const auto& pt : path.points)
      excursion = std::max(excursion, distance(path.points.front(), pt));
    if (excursion > 0.9) continue;
    CHECK(velocity_inequality_check(path) <= 1e-3);
    ++confined;
  }
  CHECK(confined >= 5);
}

TEST_CASE("path validation rejects bad grids", "[path]") {
  Rng rng(39);
  ProjectionPath path = conjugation_path(rng, 4, 2, 0.5, 11);
  path.times[5] = path.times[4];  // not strictly increasing
  CHECK_THROWS_AS(path.validate(), PreconditionError);
  ProjectionPath mismatched = conjugation_path(rng, 4, 2, 0.5, 11);
  mismatched.times.pop_back();
  CHECK_THROWS_AS(mismatched.validate(), DimensionError);
}

TEST_CASE("length metric agrees with geodesic length", "[path]") {
  Rng rng(40);
  const RandomPair rp = random_pair_with_distance(rng, 6, 2, 0.65);
  const RhoResult r = rho(rp.p, rp.q);
  const ProjectionPath g = geodesic(rp.p, rp.q, 101);
  const LengthReport rep = verify_arcsine_law(g);
  REQUIRE(rep.riemannian.has_value());
  REQUIRE(r.finite());
  CHECK(r.value == Catch::Approx(*rep.riemannian).margin(1e-10));
}
