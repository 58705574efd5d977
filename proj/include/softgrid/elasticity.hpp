#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace softgrid {

// Curve pieces. All coefficients are in absolute strain coordinates.
struct LinearForm {
  double slope = 0.0;
  double intercept = 0.0;
};

struct CubicForm {
  // c0 + c1*e + c2*e^2 + c3*e^3
  double c0 = 0.0, c1 = 0.0, c2 = 0.0, c3 = 0.0;
};

struct AtanForm {
  // amplitude * atan(rate * (e - eps0)) + offset
  double amplitude = 0.0;
  double rate = 0.0;
  double eps0 = 0.0;
  double offset = 0.0;
};

using PieceForm = std::variant<LinearForm, CubicForm, AtanForm>;

double form_value(const PieceForm& form, double strain);
double form_slope(const PieceForm& form, double strain);

// One smooth chunk of the curve, owning the half-open strain interval [lo, hi).
struct ElasticityPiece {
  double lo = 0.0;
  double hi = 0.0;
  PieceForm form;
};

/// Piecewise-smooth nonlinear modulus: stress per unit section as a function
/// of strain.
///
/// Pieces must be contiguous, cover at least [-1, 1], agree at interior knots
/// (C0 within 1e-9 relative) and pass through (0, 0). Outside the covered
/// interval the boundary piece's end slope continues linearly, so eval() is
/// total and continuous everywhere. Instances are immutable after
/// construction and eval() is pure: concurrent use needs no synchronization.
class ElasticityModel {
 public:
  ElasticityModel(std::vector<ElasticityPiece> pieces, std::string name);

  double eval(double strain) const;
  double slope(double strain) const;

  const std::string& name() const { return name_; }
  const std::vector<ElasticityPiece>& pieces() const { return pieces_; }
  double covered_lo() const { return pieces_.front().lo; }
  double covered_hi() const { return pieces_.back().hi; }

  // Extrema over [lo, hi], computed from per-piece analytic critical points.
  double max_abs_slope(double lo = -1.0, double hi = 1.0) const;
  double max_abs_value(double lo = -1.0, double hi = 1.0) const;

 private:
  std::vector<ElasticityPiece> pieces_;
  std::string name_;
};

enum class JoinRule { Linear, Cubic };

/// Builds a model through marked (strain, stress) points.
///
/// Strains must be non-negative and strictly increasing; the curve must pass
/// through (0, 0), which is prepended when missing. `joins` gives the rule
/// for each gap between consecutive (augmented) points: straight segments, or
/// cubics with clamped end slopes (taken from an adjacent straight segment
/// where there is one, otherwise from the centered secant) so spline joins
/// are C1. The compression side is the mirror k0*e with k0 the slope at 0+,
/// and a terminal linear piece continues the end slope, extending coverage to
/// at least [-2, 2].
ElasticityModel build_from_points(const std::vector<std::pair<double, double>>& points,
                                  const std::vector<JoinRule>& joins,
                                  std::string name = "custom");
ElasticityModel build_from_points(const std::vector<std::pair<double, double>>& points,
                                  JoinRule join = JoinRule::Linear,
                                  std::string name = "custom");

/// A tissue: its stress-strain curve plus the Poisson ratio coupling the
/// transverse contraction, 0 <= nu < 1.
struct Material {
  ElasticityModel model;
  double nu;

  Material(ElasticityModel model_, double nu_);
};

// Tissue presets on a normalized stress scale. Skin: constant modulus 1.0
// below strain 0.4, a C1 cubic rise on [0.4, 0.7], constant modulus 5.0
// above. Adipose: 0.125*atan(8*e), near-linear initially with a stress
// plateau past strain 0.6.
Material preset_skin(double nu = 0.45);
Material preset_adipose(double nu = 0.45);

}  // namespace softgrid
