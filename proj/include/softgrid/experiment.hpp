#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "softgrid/elasticity.hpp"
#include "softgrid/mesh.hpp"
#include "softgrid/solver.hpp"

namespace softgrid {

enum class Axis { X, Y };

// Uniaxial tension protocol: square sample of cells x cells unit squares,
// force ramp applied to the two sides perpendicular to the axis, one
// relaxation per ramp step from the undeformed state.
struct TensionProtocol {
  Material material;
  int cells = 4;
  double cell_size = 1.0;
  double node_mass = 1.0;
  Axis axis = Axis::X;
  std::vector<double> force_ramp;  // per-cell-vertex force magnitudes, strictly increasing
  SolverConfig solver;             // dt/damping left unset are derived from the material

  explicit TensionProtocol(Material mat) : material(std::move(mat)) {}
};

struct ExperimentRecord {
  int step = 0;
  double force = 0.0;          // per-cell-vertex F
  double sigma = 0.0;          // nominal stress, F / cell_size
  double eps_long = 0.0;       // bounding-box strain along the pull axis
  double eps_trans = 0.0;      // signed, negative = contraction
  double eps_trans_mid = 0.0;  // secondary channel: mid-line width strain
  double residual = 0.0;
  int iterations = 0;
};

struct TensionResult {
  std::vector<ExperimentRecord> records;
  std::string error;      // empty on full success; partial records are kept
  int failed_step = -1;
};

struct PoissonEstimate {
  std::vector<double> ratios;  // -eps_trans/eps_long per record with eps_long > 0
  double mean = 0.0;
  int skipped = 0;  // records with eps_long <= 0
};

struct CurveComparison {
  std::vector<double> stress_rel_err;   // per record
  std::vector<double> poisson_ratio;    // per record with eps_long > 0
  std::vector<double> poisson_rel_err;  // same subset, empty when nu == 0
  double median_stress_err = 0.0;
  double max_stress_err = 0.0;
  double median_poisson_err = 0.0;
  double max_poisson_err = 0.0;
  double mean_poisson_ratio = 0.0;
};

// The protocol's solver settings with unset dt/damping filled in from the
// material-derived defaults; what run_tension actually uses.
SolverConfig resolved_solver(const TensionProtocol& protocol);

// Outward per-node forces on the two sides perpendicular to the axis, scaled
// by the node's owning-cell multiplicity (corners 1x, interior boundary 2x).
LoadCase build_load(const GridMesh& mesh, Axis axis, double force);

// Nominal stress equivalent to the per-cell-vertex force F: the uniform
// strain state of the per-cell lattice satisfies sigma = Ef(eps) exactly
// under sigma = F / cell_size (cross-checked by single_cell_oracle).
double nominal_stress(double force, double cell_size);

// (eps_long, eps_trans) from the axis-aligned extents of the two boxes.
std::pair<double, double> measure_strains(const Box& initial, const Box& final_box, Axis axis);

// Geometric ramp of `steps` per-cell-vertex forces spanning strains from
// about 0.015 to just past 1.0 for the given material.
std::vector<double> make_default_ramp(const Material& mat, double cell_size, int steps = 16);

// Runs the ramp; stops after the first record with eps_long >= 1.0. A solver
// failure ends the run, keeping the records gathered so far. The optional
// sink receives frames when protocol.solver.record_every > 0.
using StepFrameSink = std::function<void(int ramp_step, int iteration, const GridMesh&)>;
TensionResult run_tension(const TensionProtocol& protocol, const StepFrameSink& sink = {});

PoissonEstimate estimate_poisson(const std::vector<ExperimentRecord>& records);

// Relative stress error vs Ef(eps_long) per record (floored denominator) and
// Poisson ratio errors vs the configured nu.
CurveComparison compare_to_model(const std::vector<ExperimentRecord>& records,
                                 const Material& mat);

// Static equilibrium of one unit cell under nominal stress sigma, solved by
// nested bisection on the assembled corner-node residuals; no time stepping.
// Throws BracketError when sigma exceeds what the material can carry.
std::pair<double, double> single_cell_oracle(const Material& mat, double sigma);

// Results CSV with the fixed column set; byte-stable across identical runs.
void write_records_csv(const std::vector<ExperimentRecord>& records, const Material& mat,
                       std::ostream& out);
std::vector<ExperimentRecord> read_records_csv(std::istream& in);

// Comparison summary as JSON text (includes solver settings and any error).
std::string comparison_json(const CurveComparison& cmp, const Material& mat,
                            const TensionResult& result, const SolverConfig& solver);

}  // namespace softgrid
