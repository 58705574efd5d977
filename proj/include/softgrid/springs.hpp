#pragma once

#include "softgrid/elasticity.hpp"
#include "softgrid/vec2.hpp"

namespace softgrid {

enum class SpringKind { Edge, Diagonal };

// Scalar state of one spring. section is the 2D cross-section per unit
// thickness multiplying the stress, so the laws hold for any element size.
struct SpringEval {
  double rest_length = 0.0;     // L
  double current_length = 0.0;  // L + dL
  double section = 0.0;         // Sq

  double elongation() const { return current_length - rest_length; }
};

// Plain linear law k * (|x12| - l12) * x12/|x12|, returning the force on the
// vertex the displacement vector x12 points away from; the other vertex gets
// the negation. Coincident endpoints have no direction: returns zero.
Vec2 linear_spring_force(double stiffness, Vec2 x12, double rest_length);

// Diagonal of a square cell at rest: L_edge * sqrt(2).
double diag_rest_length(double edge_rest);

// Diagonal length of a cell whose edge stretched by edge_elongation while the
// transverse pair contracted by -nu * edge_elongation:
// sqrt((L+dL)^2 + (L - nu*dL)^2).
double stretched_diag_length(double edge_rest, double edge_elongation, double nu);

// Recovers the edge strain J implied by an observed diagonal elongation under
// the contracted deformation state, i.e. inverts stretched_diag_length so
// that dL_edge = L_edge * J. Throws SingularConfigError when the diagonal is
// shorter than any consistent state allows (negative radicand); callers use
// it on the tension branch only.
double compute_J(double diag_rest, double diag_elongation, double nu);

// Signed force magnitude along the spring axis; positive pulls the endpoints
// together. Tension branch couples the transverse contraction through the
// compressed-side modulus; compression is the plain law Sq * Ef(dL/L).
double edge_force_scalar(const SpringEval& ev, const Material& mat);
double diag_force_scalar(const SpringEval& ev, const Material& mat);

struct SpringForces {
  Vec2 on_a;
  Vec2 on_b;
  bool degenerate = false;  // coincident endpoints, forces zeroed
};

// Directionalizes the scalar law along the segment a->b. The two forces are
// exact negations.
SpringForces spring_force_vector(SpringKind kind, Vec2 pa, Vec2 pb, double rest_length,
                                 double section, const Material& mat);

}  // namespace softgrid
