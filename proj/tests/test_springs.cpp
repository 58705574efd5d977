#include "softgrid/springs.hpp"

#include <cmath>
#include <random>

#include "doctest.h"
#include "softgrid/errors.hpp"

using namespace softgrid;

namespace {

Material linear_material(double modulus, double nu) {
  return Material(build_from_points({{0.0, 0.0}, {1.0, modulus}}, JoinRule::Linear, "linear"), nu);
}

// Eq-by-eq transcription of the edge tension law in its nested-fraction form,
// kept independent of the library's multiplied-through evaluation.
double edge_force_printed_form(const SpringEval& ev, const Material& mat) {
  const double strain = ev.elongation() / ev.rest_length;
  if (ev.elongation() < 0.0) return ev.section * mat.model.eval(strain);
  const double nu = mat.nu;
  const double denom = (1.0 + nu) * ev.rest_length / ev.current_length - nu;
  return ev.section * (mat.model.eval(strain) + mat.model.eval(-nu * strain) / denom);
}

}  // namespace

TEST_CASE("linear spring law") {
  CHECK(linear_spring_force(1.0, {2.0, 0.0}, 2.0) == Vec2{0.0, 0.0});
  const Vec2 stretched = linear_spring_force(3.0, {3.0, 0.0}, 2.0);
  CHECK(stretched.x == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(stretched.y == 0.0);
  const Vec2 compressed = linear_spring_force(1.0, {0.0, 1.0}, 2.0);
  CHECK(compressed.x == 0.0);
  CHECK(compressed.y == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(linear_spring_force(5.0, {0.0, 0.0}, 1.0) == Vec2{0.0, 0.0});  // degenerate
}

TEST_CASE("diagonal rest length is sqrt(2) times the edge") {
  CHECK(diag_rest_length(1.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(diag_rest_length(2.0) == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-15));
  CHECK(diag_rest_length(0.5) == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-15));
}

TEST_CASE("stretched diagonal length") {
  CHECK(stretched_diag_length(1.0, 0.0, 0.3) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(stretched_diag_length(1.0, 1.0, 0.0) == doctest::Approx(std::sqrt(5.0)).epsilon(1e-15));
  CHECK(stretched_diag_length(1.0, 1.0, 0.5) == doctest::Approx(std::sqrt(4.25)).epsilon(1e-15));
}

TEST_CASE("J is zero at rest") {
  for (double rest : {0.7, std::sqrt(2.0), 3.0}) {
    for (double nu : {0.0, 0.3, 0.49, 0.9}) {
      CHECK(compute_J(rest, 0.0, nu) == doctest::Approx(0.0).epsilon(1e-14));
    }
  }
}

TEST_CASE("J inverts the stretched diagonal at nu = 0") {
  const double rest = 4.2;
  const double stretched = std::sqrt(2.5) * rest;
  CHECK(compute_J(rest, stretched - rest, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("J round trip against the geometric construction") {
  for (double eps : {0.1, 0.5, 1.0}) {
    for (double nu : {0.0, 0.3, 0.49}) {
      const double edge = 1.7;
      const double diag0 = diag_rest_length(edge);
      const double diag1 = stretched_diag_length(edge, eps * edge, nu);
      CHECK(compute_J(diag0, diag1 - diag0, nu) == doctest::Approx(eps).epsilon(1e-10));
    }
  }
}

TEST_CASE("J round trip property over random samples") {
  std::mt19937 rng(7321);
  std::uniform_real_distribution<double> eps_dist(0.0, 1.0);
  std::uniform_real_distribution<double> nu_dist(0.0, 0.49);
  for (int i = 0; i < 10000; ++i) {
    const double eps = eps_dist(rng);
    const double nu = nu_dist(rng);
    const double diag0 = diag_rest_length(1.0);
    const double diag1 = stretched_diag_length(1.0, eps, nu);
    CHECK(std::abs(compute_J(diag0, diag1 - diag0, nu) - eps) <= 1e-10);
  }
}

TEST_CASE("J rejects diagonals shorter than any consistent state") {
  CHECK_THROWS_AS(compute_J(1.0, -0.9, 0.3), SingularConfigError);
}

TEST_CASE("edge force scalar") {
  const Material mat = linear_material(1.0, 0.5);

  SUBCASE("zero at rest") {
    CHECK(edge_force_scalar({1.0, 1.0, 1.0}, mat) == doctest::Approx(0.0).epsilon(1e-14));
  }
  SUBCASE("nu = 0 reduces to the plain nonlinear law") {
    const Material skin = preset_skin(0.0);
    const SpringEval ev{2.0, 2.7, 1.5};
    CHECK(edge_force_scalar(ev, skin) ==
          doctest::Approx(1.5 * skin.model.eval(0.35)).epsilon(1e-14));
  }
  SUBCASE("hand-substituted tension value") {
    // E=1, nu=0.5, L=1, dL=0.2, Sq=1: 0.2 - 0.1/0.75 = 1/15
    const SpringEval ev{1.0, 1.2, 1.0};
    CHECK(edge_force_scalar(ev, mat) == doctest::Approx(1.0 / 15.0).epsilon(1e-12));
  }
  SUBCASE("compression branch is the plain law") {
    const SpringEval ev{1.0, 0.8, 2.0};
    CHECK(edge_force_scalar(ev, mat) == doctest::Approx(2.0 * -0.2).epsilon(1e-12));
  }
  SUBCASE("singular transverse denominator") {
    // dL/L = 1/nu = 2 makes (1+nu)L/(L+dL) - nu vanish
    const SpringEval ev{1.0, 3.0, 1.0};
    CHECK_THROWS_AS(edge_force_scalar(ev, mat), SingularConfigError);
  }
  SUBCASE("invalid eval rejected") {
    CHECK_THROWS_AS(edge_force_scalar({0.0, 1.0, 1.0}, mat), std::invalid_argument);
    CHECK_THROWS_AS(edge_force_scalar({1.0, 1.0, -1.0}, mat), std::invalid_argument);
  }
}

TEST_CASE("multiplied-through edge evaluation matches the nested-fraction form") {
  const Material skin = preset_skin(0.45);
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> strain_dist(0.0, 1.2);
  for (int i = 0; i < 1000; ++i) {
    const double eps = strain_dist(rng);
    const SpringEval ev{1.0, 1.0 + eps, 1.0};
    const double a = edge_force_scalar(ev, skin);
    const double b = edge_force_printed_form(ev, skin);
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
  }
}

TEST_CASE("diagonal force scalar") {
  SUBCASE("zero at rest") {
    const Material mat = linear_material(1.0, 0.5);
    const double d = diag_rest_length(1.0);
    CHECK(diag_force_scalar({d, d, 1.0}, mat) == doctest::Approx(0.0).epsilon(1e-14));
  }
  SUBCASE("nu = 0 carries no diagonal tension") {
    const Material mat = linear_material(3.0, 0.0);
    const double d = diag_rest_length(1.0);
    CHECK(diag_force_scalar({d, 2.0 * d, 1.0}, mat) == doctest::Approx(0.0).epsilon(1e-14));
  }
  SUBCASE("chained hand value via the geometric construction") {
    // E=1, nu=0.5, edge strain 0.2: new diag = sqrt(1.44+0.81) = 1.5,
    // J = 0.2, force = sqrt(2)*0.1*1.5/(0.9*sqrt(2)) = 1/6
    const Material mat = linear_material(1.0, 0.5);
    const double d0 = diag_rest_length(1.0);
    const double d1 = stretched_diag_length(1.0, 0.2, 0.5);
    CHECK(d1 == doctest::Approx(1.5).epsilon(1e-15));
    const SpringEval ev{d0, d1, 1.0};
    CHECK(diag_force_scalar(ev, mat) == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  }
  SUBCASE("compression uses the edge compression rule") {
    const Material mat = linear_material(2.0, 0.4);
    const double d = diag_rest_length(1.0);
    const SpringEval ev{d, 0.9 * d, 1.5};
    CHECK(diag_force_scalar(ev, mat) == doctest::Approx(1.5 * 2.0 * -0.1).epsilon(1e-12));
  }
}

TEST_CASE("spring force vector") {
  const Material mat = preset_skin(0.45);

  SUBCASE("rest separation gives zero forces") {
    const auto f = spring_force_vector(SpringKind::Edge, {0, 0}, {1, 0}, 1.0, 1.0, mat);
    CHECK(f.on_a.norm() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(f.on_b.norm() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK_FALSE(f.degenerate);
  }
  SUBCASE("stretched edge pulls the endpoints together, third law exact") {
    const auto f = spring_force_vector(SpringKind::Edge, {0, 0}, {1.4, 0}, 1.0, 1.0, mat);
    CHECK(f.on_a.x > 0.0);
    CHECK(f.on_b.x < 0.0);
    CHECK(f.on_a + f.on_b == Vec2{0.0, 0.0});
  }
  SUBCASE("diagonal force is collinear with the segment") {
    const Vec2 pa{0.3, 0.1}, pb{1.5, 1.4};
    const auto f =
        spring_force_vector(SpringKind::Diagonal, pa, pb, diag_rest_length(1.0), 1.0, mat);
    const Vec2 d = pb - pa;
    const double cross = f.on_a.x * d.y - f.on_a.y * d.x;
    CHECK(std::abs(cross) <= 1e-12 * d.norm() * std::max(1.0, f.on_a.norm()));
  }
  SUBCASE("coincident endpoints flag degeneracy with zero forces") {
    const auto f = spring_force_vector(SpringKind::Edge, {1, 1}, {1, 1}, 1.0, 1.0, mat);
    CHECK(f.degenerate);
    CHECK(f.on_a == Vec2{0.0, 0.0});
    CHECK(f.on_b == Vec2{0.0, 0.0});
  }
}

TEST_CASE("third law holds exactly over random states") {
  const Material mat = preset_adipose(0.3);
  std::mt19937 rng(4242);
  std::uniform_real_distribution<double> coord(-2.0, 2.0);
  for (int i = 0; i < 2000; ++i) {
    const Vec2 pa{coord(rng), coord(rng)};
    const Vec2 pb{coord(rng), coord(rng)};
    if (pa == pb) continue;
    const SpringKind kind = i % 2 == 0 ? SpringKind::Edge : SpringKind::Diagonal;
    const double rest = kind == SpringKind::Edge ? 1.0 : diag_rest_length(1.0);
    // stay inside the tension branch's valid stretch range
    if ((pb - pa).norm() / rest > 2.0) continue;
    const auto f = spring_force_vector(kind, pa, pb, rest, 1.0, mat);
    CHECK(f.on_a + f.on_b == Vec2{0.0, 0.0});
  }
}

TEST_CASE("branch continuity at zero elongation") {
  for (const Material& mat : {preset_skin(0.45), preset_adipose(0.2), linear_material(2.0, 0.49)}) {
    for (SpringKind kind : {SpringKind::Edge, SpringKind::Diagonal}) {
      const double rest = kind == SpringKind::Edge ? 1.0 : diag_rest_length(1.0);
      const SpringEval just_under{rest, rest * (1.0 - 1e-12), 1.0};
      const SpringEval just_over{rest, rest * (1.0 + 1e-12), 1.0};
      const double f_under = kind == SpringKind::Edge ? edge_force_scalar(just_under, mat)
                                                      : diag_force_scalar(just_under, mat);
      const double f_over = kind == SpringKind::Edge ? edge_force_scalar(just_over, mat)
                                                     : diag_force_scalar(just_over, mat);
      CHECK(std::abs(f_under) <= 1e-10);
      CHECK(std::abs(f_over) <= 1e-10);
    }
  }
}

TEST_CASE("forces are frame invariant under rigid rotation") {
  const Material mat = preset_skin(0.45);
  std::mt19937 rng(515);
  std::uniform_real_distribution<double> angle(-3.14159, 3.14159);
  std::uniform_real_distribution<double> coord(-1.5, 1.5);
  for (int i = 0; i < 500; ++i) {
    const Vec2 pa{coord(rng), coord(rng)};
    const Vec2 pb{coord(rng), coord(rng)};
    if ((pb - pa).norm() < 0.05 || (pb - pa).norm() > 2.0) continue;
    const double th = angle(rng);
    const double c = std::cos(th), s = std::sin(th);
    auto rot = [&](Vec2 v) { return Vec2{c * v.x - s * v.y, s * v.x + c * v.y}; };
    const SpringKind kind = i % 2 == 0 ? SpringKind::Edge : SpringKind::Diagonal;
    const double rest = kind == SpringKind::Edge ? 1.0 : diag_rest_length(1.0);
    const auto f0 = spring_force_vector(kind, pa, pb, rest, 1.0, mat);
    const auto f1 = spring_force_vector(kind, rot(pa), rot(pb), rest, 1.0, mat);
    const Vec2 want = rot(f0.on_a);
    CHECK(std::abs(f1.on_a.x - want.x) <= 1e-12 * std::max(1.0, want.norm()));
    CHECK(std::abs(f1.on_a.y - want.y) <= 1e-12 * std::max(1.0, want.norm()));
  }
}
