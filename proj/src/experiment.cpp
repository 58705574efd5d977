#include "softgrid/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "softgrid/errors.hpp"
#include "softgrid/format.hpp"

namespace softgrid {

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Transverse extent of the node line at the sample's longitudinal middle.
double midline_extent(const GridMesh& mesh, Axis axis) {
  double lo = 0.0, hi = 0.0;
  bool first = true;
  if (axis == Axis::X) {
    const int ix = mesh.nx / 2;
    for (int iy = 0; iy <= mesh.ny; ++iy) {
      const double y = mesh.nodes[mesh.node_index(ix, iy)].pos.y;
      lo = first ? y : std::min(lo, y);
      hi = first ? y : std::max(hi, y);
      first = false;
    }
  } else {
    const int iy = mesh.ny / 2;
    for (int ix = 0; ix <= mesh.nx; ++ix) {
      const double x = mesh.nodes[mesh.node_index(ix, iy)].pos.x;
      lo = first ? x : std::min(lo, x);
      hi = first ? x : std::max(hi, x);
      first = false;
    }
  }
  return hi - lo;
}

}  // namespace

SolverConfig resolved_solver(const TensionProtocol& p) {
  SolverConfig cfg = p.solver;
  if (cfg.dt <= 0.0 || cfg.damping < 0.0) {
    const SolverConfig d = default_solver_config(p.material, p.cell_size, p.node_mass);
    if (cfg.dt <= 0.0) cfg.dt = d.dt;
    if (cfg.damping < 0.0) cfg.damping = d.damping;
  }
  return cfg;
}

LoadCase build_load(const GridMesh& mesh, Axis axis, double force) {
  if (!(force > 0.0)) {
    throw std::invalid_argument("build_load: force must be positive");
  }
  LoadCase load;
  const Side lo_side = axis == Axis::X ? Side::Left : Side::Bottom;
  const Side hi_side = axis == Axis::X ? Side::Right : Side::Top;
  const Vec2 outward = axis == Axis::X ? Vec2{1.0, 0.0} : Vec2{0.0, 1.0};
  for (const auto& bn : boundary_nodes(mesh, lo_side)) {
    load.forces.emplace_back(bn.node, -outward * (bn.multiplicity * force));
  }
  for (const auto& bn : boundary_nodes(mesh, hi_side)) {
    load.forces.emplace_back(bn.node, outward * (bn.multiplicity * force));
  }
  return load;
}

double nominal_stress(double force, double cell_size) {
  if (!(force > 0.0)) {
    throw std::invalid_argument("nominal_stress: force must be positive");
  }
  if (!(cell_size > 0.0)) {
    throw std::invalid_argument("nominal_stress: cell_size must be positive");
  }
  return force / cell_size;
}

std::pair<double, double> measure_strains(const Box& initial, const Box& final_box, Axis axis) {
  const double w0 = initial.width(), h0 = initial.height();
  if (!(w0 > 0.0) || !(h0 > 0.0)) {
    throw std::invalid_argument("measure_strains: degenerate initial box");
  }
  const double eps_w = (final_box.width() - w0) / w0;
  const double eps_h = (final_box.height() - h0) / h0;
  return axis == Axis::X ? std::make_pair(eps_w, eps_h) : std::make_pair(eps_h, eps_w);
}

std::vector<double> make_default_ramp(const Material& mat, double cell_size, int steps) {
  if (steps < 2) {
    throw std::invalid_argument("make_default_ramp: need at least 2 steps");
  }
  const double f_lo = mat.model.eval(0.015) * cell_size;
  const double f_hi = mat.model.eval(1.04) * cell_size;
  if (!(f_lo > 0.0) || !(f_hi > f_lo)) {
    throw std::invalid_argument("make_default_ramp: material is not increasing on [0, 1]");
  }
  const double ratio = std::pow(f_hi / f_lo, 1.0 / (steps - 1));
  std::vector<double> ramp(steps);
  for (int i = 0; i < steps; ++i) {
    ramp[i] = f_lo * std::pow(ratio, i);
  }
  return ramp;
}

TensionResult run_tension(const TensionProtocol& protocol, const StepFrameSink& sink) {
  if (protocol.cells < 1) {
    throw std::invalid_argument("run_tension: cells must be >= 1");
  }
  if (protocol.force_ramp.empty()) {
    throw std::invalid_argument("run_tension: empty force ramp");
  }
  for (size_t i = 0; i < protocol.force_ramp.size(); ++i) {
    if (!(protocol.force_ramp[i] > 0.0)) {
      throw std::invalid_argument("run_tension: ramp forces must be positive");
    }
    if (i > 0 && !(protocol.force_ramp[i] > protocol.force_ramp[i - 1])) {
      throw std::invalid_argument("run_tension: ramp must be strictly increasing");
    }
  }
  const SolverConfig cfg = resolved_solver(protocol);

  TensionResult out;
  for (size_t i = 0; i < protocol.force_ramp.size(); ++i) {
    const double force = protocol.force_ramp[i];
    GridMesh mesh = build_grid(protocol.cells, protocol.cells, protocol.cell_size,
                               protocol.node_mass);
    const Box box0 = bounding_box(mesh);
    const double mid0 = midline_extent(mesh, protocol.axis);
    const LoadCase load = build_load(mesh, protocol.axis, force);

    RelaxReport report;
    try {
      FrameSink frame_sink;
      if (sink) {
        const int ramp_step = static_cast<int>(i);
        frame_sink = [&sink, ramp_step](int iter, const GridMesh& m) { sink(ramp_step, iter, m); };
      }
      report = relax(mesh, protocol.material, load, cfg, frame_sink);
    } catch (const DivergedError& e) {
      out.error = e.what();
      out.failed_step = static_cast<int>(i);
      break;
    } catch (const SingularConfigError& e) {
      out.error = e.what();
      out.failed_step = static_cast<int>(i);
      break;
    }

    const Box box1 = bounding_box(mesh);
    const auto [eps_long, eps_trans] = measure_strains(box0, box1, protocol.axis);
    ExperimentRecord rec;
    rec.step = static_cast<int>(i);
    rec.force = force;
    rec.sigma = nominal_stress(force, protocol.cell_size);
    rec.eps_long = eps_long;
    rec.eps_trans = eps_trans;
    rec.eps_trans_mid = mid0 > 0.0 ? (midline_extent(mesh, protocol.axis) - mid0) / mid0 : 0.0;
    rec.residual = report.residual;
    rec.iterations = report.iterations_used;
    if (!std::isfinite(rec.eps_long) || !std::isfinite(rec.eps_trans) || rec.eps_long <= -1.0) {
      out.error = "non-physical strain at ramp step " + std::to_string(i);
      out.failed_step = static_cast<int>(i);
      break;
    }
    out.records.push_back(rec);
    if (eps_long >= 1.0) break;
  }
  return out;
}

PoissonEstimate estimate_poisson(const std::vector<ExperimentRecord>& records) {
  PoissonEstimate est;
  double sum = 0.0;
  for (const auto& r : records) {
    if (r.eps_long > 0.0) {
      est.ratios.push_back(-r.eps_trans / r.eps_long);
      sum += est.ratios.back();
    } else {
      ++est.skipped;
    }
  }
  if (!est.ratios.empty()) est.mean = sum / est.ratios.size();
  return est;
}

CurveComparison compare_to_model(const std::vector<ExperimentRecord>& records,
                                 const Material& mat) {
  if (records.empty()) {
    throw std::invalid_argument("compare_to_model: no records");
  }
  CurveComparison cmp;
  const double floor = 1e-6 * mat.model.max_abs_value(-1.0, 1.0);
  for (const auto& r : records) {
    const double ef = mat.model.eval(r.eps_long);
    cmp.stress_rel_err.push_back(std::abs(r.sigma - ef) / std::max(std::abs(ef), floor));
    if (r.eps_long > 0.0) {
      const double ratio = -r.eps_trans / r.eps_long;
      cmp.poisson_ratio.push_back(ratio);
      if (mat.nu > 0.0) {
        cmp.poisson_rel_err.push_back(std::abs(ratio - mat.nu) / mat.nu);
      }
    }
  }
  cmp.median_stress_err = median(cmp.stress_rel_err);
  cmp.max_stress_err =
      cmp.stress_rel_err.empty()
          ? 0.0
          : *std::max_element(cmp.stress_rel_err.begin(), cmp.stress_rel_err.end());
  cmp.median_poisson_err = median(cmp.poisson_rel_err);
  cmp.max_poisson_err =
      cmp.poisson_rel_err.empty()
          ? 0.0
          : *std::max_element(cmp.poisson_rel_err.begin(), cmp.poisson_rel_err.end());
  if (!cmp.poisson_ratio.empty()) {
    double sum = 0.0;
    for (double v : cmp.poisson_ratio) sum += v;
    cmp.mean_poisson_ratio = sum / cmp.poisson_ratio.size();
  }
  return cmp;
}

namespace {

// Net force on the right-bottom corner of a unit cell deformed affinely to
// width 1+a, height 1+b, with external pull f on each corner.
Vec2 cell_corner_residual(const Material& mat, double f, double a, double b) {
  const double w = 1.0 + a;
  const double h = 1.0 + b;
  const Vec2 n00{0.0, 0.0}, n10{w, 0.0}, n01{0.0, h}, n11{w, h};
  const double diag = diag_rest_length(1.0);
  Vec2 total{f, 0.0};
  total += spring_force_vector(SpringKind::Edge, n00, n10, 1.0, 1.0, mat).on_b;
  total += spring_force_vector(SpringKind::Edge, n10, n11, 1.0, 1.0, mat).on_a;
  total += spring_force_vector(SpringKind::Diagonal, n10, n01, diag, 1.0, mat).on_a;
  return total;
}

// Scan for a sign change, then bisect to machine precision. Probes may sit
// outside the force laws' valid range (extreme stretch); those evaluate to
// NaN and count as the high side, since invalidity always adjoins it here.
template <typename F>
double scan_bisect(F fn, double lo, double hi, const char* what) {
  constexpr int kScan = 120;
  auto probe = [&fn](double x) -> double {
    try {
      return fn(x);
    } catch (const SingularConfigError&) {
      return std::numeric_limits<double>::quiet_NaN();
    } catch (const BracketError&) {
      return std::numeric_limits<double>::quiet_NaN();
    }
  };
  double prev_x = lo;
  double prev_f = probe(lo);
  if (prev_f == 0.0) return lo;
  double a = 0.0, b = 0.0, fa = 0.0;
  bool bracketed = false;
  for (int i = 1; i <= kScan && !std::isnan(prev_f); ++i) {
    const double x = lo + (hi - lo) * i / kScan;
    const double fx = probe(x);
    if (fx == 0.0) return x;
    if (!std::isnan(fx) && (prev_f < 0.0) != (fx < 0.0)) {
      a = prev_x;
      b = x;
      fa = prev_f;
      bracketed = true;
      break;
    }
    prev_x = x;
    prev_f = fx;
  }
  if (!bracketed) {
    throw BracketError(std::string("single_cell_oracle: no root bracket for ") + what);
  }
  for (int i = 0; i < 200 && b - a > 1e-15 * std::max(1.0, std::abs(a)); ++i) {
    const double m = 0.5 * (a + b);
    const double fm = probe(m);
    if (fm == 0.0) return m;
    if (!std::isnan(fm) && (fa < 0.0) == (fm < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

std::pair<double, double> single_cell_oracle(const Material& mat, double sigma) {
  if (sigma < 0.0) {
    throw std::invalid_argument("single_cell_oracle: sigma must be >= 0");
  }
  if (sigma == 0.0) return {0.0, 0.0};
  const double f = sigma;  // unit cell: F = sigma * cell_size, cell_size = 1

  auto transverse_root = [&](double a) {
    return scan_bisect([&](double b) { return cell_corner_residual(mat, f, a, b).y; }, -0.97, 0.5,
                       "transverse balance");
  };
  const double a_star = scan_bisect(
      [&](double a) { return cell_corner_residual(mat, f, a, transverse_root(a)).x; }, 0.0, 3.0,
      "longitudinal balance");
  return {a_star, transverse_root(a_star)};
}

void write_records_csv(const std::vector<ExperimentRecord>& records, const Material& mat,
                       std::ostream& out) {
  out << "step,F,sigma,eps_long,eps_trans,poisson_ratio_est,ef_at_eps,rel_err_stress,residual,"
         "iterations\n";
  const double floor = 1e-6 * mat.model.max_abs_value(-1.0, 1.0);
  for (const auto& r : records) {
    const double ef = mat.model.eval(r.eps_long);
    const double ratio = r.eps_long > 0.0 ? -r.eps_trans / r.eps_long : 0.0;
    const double rel_err = std::abs(r.sigma - ef) / std::max(std::abs(ef), floor);
    out << r.step << ',' << fmt_g17(r.force) << ',' << fmt_g17(r.sigma) << ','
        << fmt_g17(r.eps_long) << ',' << fmt_g17(r.eps_trans) << ',' << fmt_g17(ratio) << ','
        << fmt_g17(ef) << ',' << fmt_g17(rel_err) << ',' << fmt_g17(r.residual) << ','
        << r.iterations << '\n';
  }
}

std::vector<ExperimentRecord> read_records_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("records csv: empty input");
  }
  const auto header = split_csv_line(line);
  std::map<std::string, size_t> col;
  for (size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  for (const char* required : {"step", "F", "sigma", "eps_long", "eps_trans", "residual",
                               "iterations"}) {
    if (col.find(required) == col.end()) {
      throw std::runtime_error(std::string("records csv: missing column '") + required + "'");
    }
  }
  std::vector<ExperimentRecord> records;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cols = split_csv_line(line);
    if (cols.size() < header.size()) {
      throw std::runtime_error("records csv, line " + std::to_string(lineno) + ": short row");
    }
    try {
      ExperimentRecord r;
      r.step = std::stoi(cols[col["step"]]);
      r.force = std::stod(cols[col["F"]]);
      r.sigma = std::stod(cols[col["sigma"]]);
      r.eps_long = std::stod(cols[col["eps_long"]]);
      r.eps_trans = std::stod(cols[col["eps_trans"]]);
      r.residual = std::stod(cols[col["residual"]]);
      r.iterations = std::stoi(cols[col["iterations"]]);
      records.push_back(r);
    } catch (const std::exception&) {
      throw std::runtime_error("records csv, line " + std::to_string(lineno) + ": bad number");
    }
  }
  return records;
}

std::string comparison_json(const CurveComparison& cmp, const Material& mat,
                            const TensionResult& result, const SolverConfig& solver) {
  nlohmann::json j;
  j["material"] = mat.model.name();
  j["nu"] = mat.nu;
  j["records"] = result.records.size();
  j["stress"]["median_rel_err"] = cmp.median_stress_err;
  j["stress"]["max_rel_err"] = cmp.max_stress_err;
  j["poisson"]["mean_ratio"] = cmp.mean_poisson_ratio;
  j["poisson"]["median_rel_err"] = cmp.median_poisson_err;
  j["poisson"]["max_rel_err"] = cmp.max_poisson_err;
  const auto est = estimate_poisson(result.records);
  j["poisson"]["skipped_records"] = est.skipped;
  double mid_sum = 0.0;
  int mid_n = 0;
  for (const auto& r : result.records) {
    if (r.eps_long > 0.0) {
      mid_sum += -r.eps_trans_mid / r.eps_long;
      ++mid_n;
    }
  }
  j["midline"]["mean_ratio"] = mid_n > 0 ? mid_sum / mid_n : 0.0;
  j["solver"]["dt"] = solver.dt;
  j["solver"]["damping"] = solver.damping;
  j["solver"]["iterations"] = solver.iterations;
  j["error"] = result.error;
  j["failed_step"] = result.failed_step;
  return j.dump(2) + "\n";
}

}  // namespace softgrid
