#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "softgrid/elasticity.hpp"
#include "softgrid/mesh.hpp"

namespace softgrid {

// Dynamic relaxation settings. dt <= 0 or damping < 0 mean "derive from the
// material" where a resolver runs (run_tension, the CLI); relax() itself
// requires resolved positive values. convergence_tol = 0 disables the
// residual early stop, reproducing a fixed iteration count exactly.
struct SolverConfig {
  double dt = 0.0;
  double damping = -1.0;
  int iterations = 15000;
  double convergence_tol = 0.0;
  int record_every = 0;  // frame stride for the sink passed to relax; 0 = off
};

// dt = 0.2*sqrt(m/k_max) from the steepest modulus slope on [-1, 1];
// damping = half the critical estimate, sqrt(m*k_typ) with k_typ the initial
// modulus. Both scale with section/length = 1 for square cells.
SolverConfig default_solver_config(const Material& mat, double cell_size = 1.0,
                                   double node_mass = 1.0);

// Constant external forces per node index.
struct LoadCase {
  std::vector<std::pair<int, Vec2>> forces;
};

// Sums spring forces over every instance (fixed order), adds external loads
// and -damping*velocity, into each node's force scratch.
void accumulate_forces(GridMesh& mesh, const Material& mat, const LoadCase& load,
                       double damping = 0.0);

// One semi-implicit Euler update: v += (F/m)*dt, then x += v*dt. Returns the
// static residual (max |spring + load| per node, damping excluded) of the
// state before the update. Throws DivergedError with the given iteration
// index when the state turns non-finite.
double step(GridMesh& mesh, const Material& mat, const LoadCase& load, const SolverConfig& cfg,
            int iteration = 0);

struct RelaxReport {
  double residual = 0.0;  // static residual of the final state
  int iterations_used = 0;
  bool converged_early = false;
  std::vector<double> residual_trace;  // sampled every trace_stride iterations
  int trace_stride = 1;
};

using FrameSink = std::function<void(int iteration, const GridMesh&)>;

// Runs cfg.iterations steps (or stops early once the residual drops under
// convergence_tol, when set). Deterministic: fixed node and spring order.
RelaxReport relax(GridMesh& mesh, const Material& mat, const LoadCase& load,
                  const SolverConfig& cfg, const FrameSink& sink = {});

}  // namespace softgrid
