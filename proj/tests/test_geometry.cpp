#include "doctest.h"

#include <cmath>

#include "horo/geometry.hpp"
#include "horo/rng.hpp"
#include "horo/sampling.hpp"
#include "horo/verification.hpp"
#include "oracles.hpp"

using namespace horo;
using geom::BoundaryPoint;
using geom::Model;
using geom::ModelPoint;

namespace {
const ModelPoint kBase = ModelPoint::half_plane(0.0, 1.0);
}

TEST_CASE("half-plane distance against the arclength oracle") {
  CHECK(geom::distance(kBase, kBase) == 0.0);

  const ModelPoint q = ModelPoint::half_plane(0.0, std::exp(1.0));
  CHECK(geom::distance(kBase, q) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(geom::distance(kBase, q) ==
        doctest::Approx(oracles::vertical_arclength(1.0, std::exp(1.0))).epsilon(1e-9));

  // generic pair on the unit semicircle: endpoints at angles
  const ModelPoint a = ModelPoint::half_plane(std::cos(2.0), std::sin(2.0));
  const ModelPoint b = ModelPoint::half_plane(std::cos(0.9), std::sin(0.9));
  CHECK(geom::distance(a, b) ==
        doctest::Approx(oracles::semicircle_arclength(0.9, 2.0)).epsilon(1e-9));
}

TEST_CASE("tree distance is the path length") {
  const ModelPoint root = ModelPoint::tree({});
  const ModelPoint deep = ModelPoint::tree({0, 1, 2, 1});
  CHECK(geom::distance(root, deep) == 4.0);
  const ModelPoint other = ModelPoint::tree({0, 1, 0});
  CHECK(geom::distance(deep, other) == 3.0);  // meet at depth 2
  CHECK_THROWS_AS(geom::distance(root, kBase), DomainError);
}

TEST_CASE("geodesic between interior points") {
  SUBCASE("vertical line") {
    const ModelPoint q = ModelPoint::half_plane(0.0, std::exp(1.0));
    const geom::Geodesic g = geom::geodesic_between(kBase, q);
    const ModelPoint mid = g.eval(0.5);
    CHECK(mid.x == doctest::Approx(0.0));
    CHECK(mid.y == doctest::Approx(std::exp(0.5)).epsilon(1e-12));
    CHECK(geom::distance(g.eval(g.tmax), q) <= 1e-12);
  }
  SUBCASE("symmetric semicircle: time midpoint on the axis") {
    const ModelPoint a = ModelPoint::half_plane(-1.0, 1.0);
    const ModelPoint b = ModelPoint::half_plane(1.0, 1.0);
    const geom::Geodesic g = geom::geodesic_between(a, b);
    const double d = geom::distance(a, b);
    CHECK(g.eval(0.5 * d).x == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(geom::distance(g.eval(0.0), a) <= 1e-12);
    CHECK(geom::distance(g.eval(d), b) <= 1e-9);
  }
  SUBCASE("tree path") {
    const ModelPoint u = ModelPoint::tree({0, 1});
    const ModelPoint v = ModelPoint::tree({0, 2, 0});
    const geom::Geodesic g = geom::geodesic_between(u, v);
    CHECK(g.tmax == 3.0);
    CHECK(g.eval(0.0).addr == u.addr);
    CHECK(g.eval(3.0).addr == v.addr);
    CHECK(g.eval(1.0).addr == geom::Word{0});
  }
  SUBCASE("degenerate input") {
    CHECK_THROWS_AS(geom::geodesic_between(kBase, kBase), DomainError);
  }
}

TEST_CASE("unit speed of geodesics") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const ModelPoint a = sampling::random_point(Model::HalfPlane, rng);
    ModelPoint b = sampling::random_point(Model::HalfPlane, rng);
    while (geom::distance(a, b) < 1e-6) b = sampling::random_point(Model::HalfPlane, rng);
    const geom::Geodesic g = geom::geodesic_between(a, b);
    for (int i = 0; i < 5; ++i) {
      const double s = rng.uniform(-5.0, 5.0);
      const double t = rng.uniform(-5.0, 5.0);
      CHECK(geom::distance(g.eval(s), g.eval(t)) ==
            doctest::Approx(std::abs(s - t)).epsilon(1e-9));
    }
  }
  // tree: integer parameters along a complete line
  Rng rng2(12);
  for (int trial = 0; trial < 30; ++trial) {
    const BoundaryPoint xi = sampling::random_boundary(Model::Tree, rng2);
    BoundaryPoint eta = sampling::random_boundary(Model::Tree, rng2);
    while (geom::boundary_equal(xi, eta))
      eta = sampling::random_boundary(Model::Tree, rng2);
    const geom::Geodesic g = geom::geodesic_between_boundary(
        eta, xi, geom::default_base_point(Model::Tree));
    for (int s = -6; s <= 6; s += 2)
      for (int t = -6; t <= 6; t += 3)
        CHECK(geom::distance(g.eval(s), g.eval(t)) == std::abs(s - t));
  }
}

TEST_CASE("rays reach their boundary point") {
  SUBCASE("vertical ray to infinity") {
    const geom::Geodesic g =
        geom::ray_to_boundary(kBase, BoundaryPoint::half_plane_infinity());
    const ModelPoint q = g.eval(2.0);
    CHECK(q.x == doctest::Approx(0.0));
    CHECK(q.y == doctest::Approx(std::exp(2.0)).epsilon(1e-12));
    CHECK(geom::boundary_equal(g.forward_endpoint(),
                               BoundaryPoint::half_plane_infinity()));
  }
  SUBCASE("generic rays: reported endpoint equals the target") {
    Rng rng(13);
    for (int trial = 0; trial < 100; ++trial) {
      for (Model model : {Model::HalfPlane, Model::Tree}) {
        const ModelPoint a = sampling::random_point(model, rng);
        const BoundaryPoint xi = sampling::random_boundary(model, rng);
        const geom::Geodesic g = geom::ray_to_boundary(a, xi);
        // eval(0) reconstructs a through the parametrization round trip
        CHECK(geom::distance(g.eval(0.0), a) <= 1e-8);
        CHECK(geom::boundary_equal(g.forward_endpoint(), xi, 1e-9));
      }
    }
  }
  SUBCASE("tree ray follows the end") {
    const ModelPoint a = ModelPoint::tree({2});
    const BoundaryPoint xi = BoundaryPoint::tree_end({0}, {1, 2});
    const geom::Geodesic g = geom::ray_to_boundary(a, xi);
    CHECK(g.eval(1.0).addr == geom::Word{});
    CHECK(g.eval(2.0).addr == geom::Word{0});
    CHECK(g.eval(3.0).addr == geom::Word{0, 1});
  }
}

TEST_CASE("geodesics between boundary points") {
  SUBCASE("unit semicircle") {
    const geom::Geodesic g = geom::geodesic_between_boundary(
        BoundaryPoint::half_plane(-1.0), BoundaryPoint::half_plane(1.0), kBase);
    CHECK(geom::boundary_equal(g.backward_endpoint(), BoundaryPoint::half_plane(-1.0)));
    CHECK(geom::boundary_equal(g.forward_endpoint(), BoundaryPoint::half_plane(1.0)));
    // anchored at the closest point to the base point: the apex
    CHECK(g.eval(0.0).x == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(g.eval(0.0).y == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("imaginary axis") {
    const geom::Geodesic g = geom::geodesic_between_boundary(
        BoundaryPoint::half_plane(0.0), BoundaryPoint::half_plane_infinity(), kBase);
    CHECK(g.eval(0.0).x == doctest::Approx(0.0));
    CHECK(g.eval(0.0).y == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(g.eval(1.5).y == doctest::Approx(std::exp(1.5)).epsilon(1e-12));
  }
  SUBCASE("tree line through the confluence vertex") {
    const BoundaryPoint alpha = BoundaryPoint::tree_end({0, 1}, {0, 1});
    const BoundaryPoint beta = BoundaryPoint::tree_end({0, 2}, {0, 2});
    const geom::Geodesic g = geom::geodesic_between_boundary(
        beta, alpha, geom::default_base_point(Model::Tree));
    CHECK(g.eval(0.0).addr == geom::Word{0});
    CHECK(g.eval(1.0).addr == geom::Word{0, 1});
    CHECK(g.eval(-1.0).addr == geom::Word{0, 2});
    CHECK(geom::boundary_equal(g.forward_endpoint(), alpha));
    CHECK(geom::boundary_equal(g.backward_endpoint(), beta));
  }
  SUBCASE("degenerate input") {
    CHECK_THROWS_AS(
        geom::geodesic_between_boundary(BoundaryPoint::half_plane(1.0),
                                        BoundaryPoint::half_plane(1.0), kBase),
        DomainError);
  }
}

TEST_CASE("gromov product, interior") {
  CHECK(geom::gromov_product(kBase, ModelPoint::half_plane(2.0, 1.0), kBase) == 0.0);

  // collinear case: y on [p, x]
  const ModelPoint p = kBase;
  const ModelPoint y = ModelPoint::half_plane(0.0, std::exp(1.0));
  const ModelPoint x = ModelPoint::half_plane(0.0, std::exp(2.5));
  CHECK(geom::gromov_product(x, y, p) ==
        doctest::Approx(geom::distance(y, p)).epsilon(1e-12));

  // tree: product at the root is the confluence depth
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const ModelPoint u = sampling::random_point(Model::Tree, rng);
    const ModelPoint v = sampling::random_point(Model::Tree, rng);
    const int meet = geom::lcp_length(u.addr, v.addr);
    CHECK(geom::gromov_product(u, v, geom::default_base_point(Model::Tree)) ==
          static_cast<double>(meet));
  }
}

TEST_CASE("gromov product extended to the boundary") {
  SUBCASE("coincident ends give infinity") {
    const BoundaryPoint xi = BoundaryPoint::half_plane(0.5);
    CHECK(std::isinf(geom::gromov_product_boundary(xi, xi, kBase).value));
    CHECK(geom::boundary_metric(xi, xi, kBase, 1.0) == 0.0);
  }
  SUBCASE("tree ends: confluence depth, exactly") {
    Rng rng(17);
    const ModelPoint root = geom::default_base_point(Model::Tree);
    for (int trial = 0; trial < 100; ++trial) {
      const BoundaryPoint xi = sampling::random_boundary(Model::Tree, rng);
      const BoundaryPoint eta = sampling::random_boundary(Model::Tree, rng);
      if (geom::boundary_equal(xi, eta)) continue;
      const auto gp = geom::gromov_product_boundary(xi, eta, root);
      CHECK(gp.value == static_cast<double>(oracles::end_confluence(xi, eta)));
      CHECK(gp.convergence == 0.0);
      CHECK(geom::boundary_metric(xi, eta, root, 1.0) ==
            doctest::Approx(std::exp(-gp.value)).epsilon(1e-12));
    }
  }
  SUBCASE("half-plane: self-convergence at the evaluation horizon") {
    Rng rng(18);
    for (int trial = 0; trial < 100; ++trial) {
      const BoundaryPoint xi = sampling::random_boundary(Model::HalfPlane, rng);
      const BoundaryPoint eta = sampling::random_boundary(Model::HalfPlane, rng);
      if (geom::boundary_gap(xi, eta) < 1e-3) continue;
      const auto gp = geom::gromov_product_boundary(xi, eta, kBase);
      CHECK(gp.convergence <= 1e-8);
    }
  }
}

TEST_CASE("busemann values") {
  SUBCASE("vanishes at the base point") {
    Rng rng(19);
    for (Model model : {Model::HalfPlane, Model::Tree}) {
      for (int trial = 0; trial < 20; ++trial) {
        const ModelPoint p = sampling::random_point(model, rng);
        const BoundaryPoint alpha = sampling::random_boundary(model, rng);
        CHECK(std::abs(geom::busemann(p, alpha, p)) <= 1e-12);
      }
    }
  }
  SUBCASE("frozen example with the limit oracle") {
    const BoundaryPoint inf = BoundaryPoint::half_plane_infinity();
    const ModelPoint h = ModelPoint::half_plane(0.0, 2.0);
    CHECK(geom::busemann(kBase, inf, h) ==
          doctest::Approx(-std::log(2.0)).epsilon(1e-12));
    // limit oracle along x_n = (0, e^n)
    const ModelPoint xn = ModelPoint::half_plane(0.0, std::exp(30.0));
    const double oracle = geom::distance(xn, h) - geom::distance(xn, kBase);
    CHECK(geom::busemann(kBase, inf, h) == doctest::Approx(oracle).epsilon(1e-9));
  }
  SUBCASE("closed form vs defining limit on random data") {
    Rng rng(20);
    for (Model model : {Model::HalfPlane, Model::Tree}) {
      for (int trial = 0; trial < 100; ++trial) {
        const ModelPoint p = sampling::random_point(model, rng);
        const ModelPoint h = sampling::random_point(model, rng);
        const BoundaryPoint alpha = sampling::random_boundary(model, rng);
        const double fast = geom::busemann(p, alpha, h);
        const double limit = geom::busemann_limit(p, alpha, h, 30);
        CHECK(std::abs(fast - limit) <= 1e-7);
        if (model == Model::Tree) CHECK(fast == limit);
      }
    }
  }
}

TEST_CASE("boundary metric symmetry and tree confluence value") {
  Rng rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const BoundaryPoint xi = sampling::random_boundary(Model::HalfPlane, rng);
    const BoundaryPoint eta = sampling::random_boundary(Model::HalfPlane, rng);
    CHECK(geom::boundary_metric(xi, eta, kBase, 1.0) ==
          doctest::Approx(geom::boundary_metric(eta, xi, kBase, 1.0)).epsilon(1e-12));
  }
  const BoundaryPoint a = BoundaryPoint::tree_end({0, 1, 0}, {1, 2});
  const BoundaryPoint b = BoundaryPoint::tree_end({0, 1, 2}, {0, 2});
  CHECK(geom::boundary_metric(a, b, geom::default_base_point(Model::Tree), 1.0) ==
        doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
}

TEST_CASE("strong hyperbolicity sampling finds no violations") {
  for (Model model : {Model::HalfPlane, Model::Tree}) {
    const auto report = geom::strong_hyperbolicity_check(
        geom::default_base_point(model), 1.0, 2000, 31);
    CHECK(report.violations == 0);
    CHECK(report.worst_margin >= 0.0);
  }
}

TEST_CASE("slimness estimates") {
  // collinear points in the half-plane
  const ModelPoint a = ModelPoint::half_plane(0.0, 1.0);
  const ModelPoint b = ModelPoint::half_plane(0.0, 2.0);
  const ModelPoint c = ModelPoint::half_plane(0.0, 5.0);
  CHECK(geom::slimness_estimate(a, b, c, 64) <= 1e-9);

  // tree triangles are tripods
  Rng rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const ModelPoint x = sampling::random_point(Model::Tree, rng);
    const ModelPoint y = sampling::random_point(Model::Tree, rng);
    const ModelPoint z = sampling::random_point(Model::Tree, rng);
    if (x.addr == y.addr || y.addr == z.addr || x.addr == z.addr) continue;
    CHECK(geom::slimness_estimate(x, y, z, 8) == 0.0);
  }

  // half-plane triangles stay uniformly slim
  Rng rng2(24);
  for (int trial = 0; trial < 20; ++trial) {
    const ModelPoint x = sampling::random_point(Model::HalfPlane, rng2);
    const ModelPoint y = sampling::random_point(Model::HalfPlane, rng2);
    const ModelPoint z = sampling::random_point(Model::HalfPlane, rng2);
    if (geom::distance(x, y) < 1e-3 || geom::distance(y, z) < 1e-3 ||
        geom::distance(x, z) < 1e-3)
      continue;
    CHECK(geom::slimness_estimate(x, y, z, 96) <= 1.0);
  }
}

TEST_CASE("isometries act isometrically and validate unimodularity") {
  CHECK_THROWS_AS(geom::Isometry::half_plane(2.0, 0.0, 0.0, 1.0), DomainError);

  const geom::Isometry id = geom::Isometry::identity(Model::HalfPlane);
  CHECK(geom::distance(geom::apply_isometry(id, kBase), kBase) == 0.0);

  // diag(sqrt(l), 1/sqrt(l)) scales: (0,1) -> (0,l), fixes 0 and infinity
  const double l = 2.7;
  const geom::Isometry diag =
      geom::Isometry::half_plane(std::sqrt(l), 0.0, 0.0, 1.0 / std::sqrt(l));
  const ModelPoint image = geom::apply_isometry(diag, kBase);
  CHECK(image.x == doctest::Approx(0.0));
  CHECK(image.y == doctest::Approx(l).epsilon(1e-12));
  CHECK(geom::boundary_equal(
      geom::boundary_action(diag, BoundaryPoint::half_plane_infinity()),
      BoundaryPoint::half_plane_infinity()));
  CHECK(geom::boundary_equal(geom::boundary_action(diag, BoundaryPoint::half_plane(0.0)),
                             BoundaryPoint::half_plane(0.0)));

  Rng rng(25);
  for (Model model : {Model::HalfPlane, Model::Tree}) {
    for (int trial = 0; trial < 2000; ++trial) {
      const geom::Isometry g = sampling::random_isometry(model, rng);
      const ModelPoint u = sampling::random_point(model, rng);
      const ModelPoint v = sampling::random_point(model, rng);
      const double before = geom::distance(u, v);
      const double after =
          geom::distance(geom::apply_isometry(g, u), geom::apply_isometry(g, v));
      CHECK(std::abs(after - before) <= 1e-12 * (1.0 + before));
    }
  }
}

TEST_CASE("tree isometries compose and invert") {
  Rng rng(26);
  for (int trial = 0; trial < 200; ++trial) {
    const geom::Isometry g = sampling::random_isometry(Model::Tree, rng);
    const geom::Isometry h = sampling::random_isometry(Model::Tree, rng);
    const ModelPoint x = sampling::random_point(Model::Tree, rng);
    CHECK(geom::apply_isometry(g.compose(h), x).addr ==
          geom::apply_isometry(g, geom::apply_isometry(h, x)).addr);
    CHECK(geom::apply_isometry(g.compose(g.inverse()), x).addr == x.addr);
    CHECK(g.compose(g.inverse()).is_identity());
  }
}

TEST_CASE("boundary chart consistency and identity coset") {
  // the two charts agree where both are finite
  Rng rng(27);
  for (int trial = 0; trial < 100; ++trial) {
    const BoundaryPoint xi = sampling::random_boundary(Model::HalfPlane, rng);
    if (std::abs(xi.u) < 1e-6 || std::abs(xi.v) < 1e-6) continue;
    const double chart1 = xi.u / xi.v;
    const double chart2 = -xi.v / xi.u;  // value in the -1/z chart
    CHECK(chart2 == doctest::Approx(-1.0 / chart1).epsilon(1e-12));
  }
  // -I acts identically
  const geom::Isometry minus = geom::Isometry::half_plane(-1.0, 0.0, 0.0, -1.0);
  CHECK(minus.is_identity());
  CHECK(geom::distance(geom::apply_isometry(minus, kBase), kBase) <= 1e-12);
}

TEST_CASE("horosphere membership") {
  const BoundaryPoint inf = BoundaryPoint::half_plane_infinity();
  const geom::Horosphere sphere{kBase, inf, -std::log(2.0)};
  CHECK(sphere.contains(ModelPoint::half_plane(0.0, 2.0)));
  CHECK(sphere.contains(ModelPoint::half_plane(3.0, 2.0)));  // same height
  CHECK_FALSE(sphere.contains(ModelPoint::half_plane(0.0, 1.0)));
}

TEST_CASE("verification suites pass in both models") {
  for (Model model : {Model::HalfPlane, Model::Tree}) {
    const auto busemann = verification::busemann_suite(model, 40, 101, 1e-8);
    CHECK(busemann.pass());
    if (model == Model::Tree)
      for (const auto& item : busemann.items) CHECK(item.statistic == 0.0);

    const auto actions = verification::boundary_action_suite(model, 40, 102, 1e-9);
    CHECK(actions.pass());

    const auto strong =
        verification::strong_hyperbolicity_suite(model, 1.0, 2000, 50, 103);
    CHECK(strong.pass());

    const auto regularity = verification::regularity_suite(model, 10, 104);
    CHECK(regularity.pass());
  }
}

TEST_CASE("probe sets have the advertised size and radius") {
  for (Model model : {Model::HalfPlane, Model::Tree}) {
    const ModelPoint p = geom::default_base_point(model);
    const auto probes = geom::default_probe_points(model, p);
    CHECK(probes.size() == 8);
    for (const auto& q : probes) CHECK(geom::distance(p, q) <= 3.0);
    CHECK(geom::default_boundary_probes(model).size() == 8);
  }
}
