#include "softgrid/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "softgrid/errors.hpp"

namespace softgrid {

SolverConfig default_solver_config(const Material& mat, double cell_size, double node_mass) {
  if (!(cell_size > 0.0) || !(node_mass > 0.0)) {
    throw std::invalid_argument("default_solver_config: cell_size and node_mass must be positive");
  }
  // Per-spring stiffness is Ef' * Sq / L; Sq = cell_size = L cancels.
  const double k_max = mat.model.max_abs_slope(-1.0, 1.0);
  if (!(k_max > 0.0)) {
    throw std::invalid_argument("default_solver_config: material has zero stiffness on [-1, 1]");
  }
  double k_typ = std::abs(mat.model.slope(0.0));
  if (k_typ <= 0.0) k_typ = k_max;

  SolverConfig cfg;
  cfg.dt = 0.2 * std::sqrt(node_mass / k_max);
  cfg.damping = std::sqrt(node_mass * k_typ);
  return cfg;
}

void accumulate_forces(GridMesh& mesh, const Material& mat, const LoadCase& load, double damping) {
  for (auto& n : mesh.nodes) n.force = {0.0, 0.0};
  for (const auto& s : mesh.springs) {
    const SpringForces f = spring_force_vector(s.kind, mesh.nodes[s.a].pos, mesh.nodes[s.b].pos,
                                               s.rest_length, s.section, mat);
    mesh.nodes[s.a].force += f.on_a;
    mesh.nodes[s.b].force += f.on_b;
  }
  for (const auto& [idx, f] : load.forces) {
    if (idx < 0 || static_cast<size_t>(idx) >= mesh.nodes.size()) {
      throw std::invalid_argument("LoadCase: node index " + std::to_string(idx) + " out of range");
    }
    mesh.nodes[idx].force += f;
  }
  if (damping != 0.0) {
    for (auto& n : mesh.nodes) n.force -= n.vel * damping;
  }
}

double step(GridMesh& mesh, const Material& mat, const LoadCase& load, const SolverConfig& cfg,
            int iteration) {
  accumulate_forces(mesh, mat, load, 0.0);
  double residual = 0.0;
  for (const auto& n : mesh.nodes) {
    residual = std::max(residual, n.force.norm());
  }
  for (size_t i = 0; i < mesh.nodes.size(); ++i) {
    Node& n = mesh.nodes[i];
    const Vec2 f = n.force - n.vel * cfg.damping;
    n.vel += f * (cfg.dt / n.mass);
    n.pos += n.vel * cfg.dt;
    if (!std::isfinite(n.pos.x) || !std::isfinite(n.pos.y) || !std::isfinite(n.vel.x) ||
        !std::isfinite(n.vel.y)) {
      throw DivergedError(iteration, static_cast<int>(i), cfg.dt);
    }
  }
  return residual;
}

RelaxReport relax(GridMesh& mesh, const Material& mat, const LoadCase& load,
                  const SolverConfig& cfg, const FrameSink& sink) {
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) {
    throw std::invalid_argument("relax: dt must be positive (resolve the config first)");
  }
  if (cfg.damping < 0.0) {
    throw std::invalid_argument("relax: damping must be >= 0");
  }
  if (cfg.iterations < 1) {
    throw std::invalid_argument("relax: iterations must be >= 1");
  }

  RelaxReport report;
  report.trace_stride = std::max(1, cfg.iterations / 1000);
  const bool record_frames = sink && cfg.record_every > 0;
  if (record_frames) sink(0, mesh);

  for (int i = 0; i < cfg.iterations; ++i) {
    const double r = step(mesh, mat, load, cfg, i);
    if (i % report.trace_stride == 0) report.residual_trace.push_back(r);
    report.iterations_used = i + 1;
    if (record_frames && (i + 1) % cfg.record_every == 0) sink(i + 1, mesh);
    if (cfg.convergence_tol > 0.0 && r < cfg.convergence_tol) {
      report.converged_early = true;
      break;
    }
  }
  if (record_frames && report.iterations_used % cfg.record_every != 0) {
    sink(report.iterations_used, mesh);
  }

  accumulate_forces(mesh, mat, load, 0.0);
  double final_residual = 0.0;
  for (const auto& n : mesh.nodes) {
    final_residual = std::max(final_residual, n.force.norm());
  }
  report.residual = final_residual;
  return report;
}

}  // namespace softgrid
