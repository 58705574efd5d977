#include "softgrid/springs.hpp"

#include <cmath>
#include <stdexcept>

#include "softgrid/errors.hpp"

namespace softgrid {

namespace {

constexpr double kDenomTol = 1e-12;

void validate(const SpringEval& ev) {
  if (!(ev.rest_length > 0.0) || !(ev.current_length > 0.0) || !(ev.section > 0.0)) {
    throw std::invalid_argument("SpringEval: lengths and section must be positive");
  }
}

}  // namespace

Vec2 linear_spring_force(double stiffness, Vec2 x12, double rest_length) {
  const double len = x12.norm();
  if (len == 0.0) return {0.0, 0.0};
  return x12 * (stiffness * (len - rest_length) / len);
}

double diag_rest_length(double edge_rest) { return edge_rest * std::sqrt(2.0); }

double stretched_diag_length(double edge_rest, double edge_elongation, double nu) {
  const double a = edge_rest + edge_elongation;
  const double b = edge_rest - nu * edge_elongation;
  return std::sqrt(a * a + b * b);
}

double compute_J(double diag_rest, double diag_elongation, double nu) {
  const double ratio = (diag_rest + diag_elongation) / diag_rest;
  const double nu2 = nu * nu;
  const double radicand = 2.0 * (1.0 + nu2) * ratio * ratio - (1.0 + 2.0 * nu + nu2);
  if (radicand < 0.0) {
    throw SingularConfigError("compute_J: diagonal length inconsistent with any stretch state");
  }
  return (nu - 1.0 + std::sqrt(radicand)) / (1.0 + nu2);
}

double edge_force_scalar(const SpringEval& ev, const Material& mat) {
  validate(ev);
  if (ev.elongation() == 0.0) return 0.0;  // both branches vanish at rest
  const double strain = ev.elongation() / ev.rest_length;
  if (ev.elongation() < 0.0) {
    return ev.section * mat.model.eval(strain);
  }
  const double nu = mat.nu;
  const double denom = (1.0 + nu) * ev.rest_length / ev.current_length - nu;
  if (std::abs(denom) < kDenomTol) {
    throw SingularConfigError("edge_force_scalar: transverse coupling denominator vanished");
  }
  // Multiplied-through form of Ef(-nu*e) / ((1+nu)L/(L+dL) - nu); same zero.
  const double scaled = (1.0 + nu) * ev.rest_length - nu * ev.current_length;
  return ev.section *
         (mat.model.eval(strain) + mat.model.eval(-nu * strain) * ev.current_length / scaled);
}

double diag_force_scalar(const SpringEval& ev, const Material& mat) {
  validate(ev);
  const double dl = ev.elongation();
  if (dl == 0.0) return 0.0;
  if (dl < 0.0) {
    // Same substitute rule as compressed edges.
    return ev.section * mat.model.eval(dl / ev.rest_length);
  }
  const double nu = mat.nu;
  const double j = compute_J(ev.rest_length, dl, nu);
  const double denom = 1.0 - nu * j;
  if (denom <= kDenomTol) {
    throw SingularConfigError("diag_force_scalar: 1 - nu*J vanished (extreme stretch)");
  }
  return ev.section * (-std::sqrt(2.0) * mat.model.eval(-nu * j) * ev.current_length) /
         (denom * ev.rest_length);
}

SpringForces spring_force_vector(SpringKind kind, Vec2 pa, Vec2 pb, double rest_length,
                                 double section, const Material& mat) {
  const Vec2 d = pb - pa;
  const double len = d.norm();
  if (len == 0.0) {
    return {{0.0, 0.0}, {0.0, 0.0}, true};
  }
  const SpringEval ev{rest_length, len, section};
  const double s =
      kind == SpringKind::Edge ? edge_force_scalar(ev, mat) : diag_force_scalar(ev, mat);
  const Vec2 on_a = d * (s / len);
  return {on_a, -on_a, false};
}

}  // namespace softgrid
