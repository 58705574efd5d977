#include "softgrid/elasticity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace softgrid {

namespace {

constexpr double kKnotTol = 1e-9;

double piece_end_value(const ElasticityPiece& p, double at) { return form_value(p.form, at); }

void validate_pieces(const std::vector<ElasticityPiece>& pieces, const std::string& name) {
  if (pieces.empty()) {
    throw std::invalid_argument("ElasticityModel '" + name + "': no pieces");
  }
  for (const auto& p : pieces) {
    if (!(p.lo < p.hi) || !std::isfinite(p.lo) || !std::isfinite(p.hi)) {
      throw std::invalid_argument("ElasticityModel '" + name + "': piece domain must satisfy lo < hi");
    }
  }
  for (size_t i = 0; i + 1 < pieces.size(); ++i) {
    const double hi = pieces[i].hi;
    const double lo = pieces[i + 1].lo;
    if (std::abs(hi - lo) > 1e-12 * std::max(1.0, std::abs(hi))) {
      throw std::invalid_argument("ElasticityModel '" + name + "': pieces are not contiguous");
    }
    const double left = piece_end_value(pieces[i], hi);
    const double right = piece_end_value(pieces[i + 1], hi);
    const double scale = std::max({1.0, std::abs(left), std::abs(right)});
    if (std::abs(left - right) > kKnotTol * scale) {
      throw std::invalid_argument("ElasticityModel '" + name + "': C0 break at knot " +
                                  std::to_string(hi));
    }
  }
  if (pieces.front().lo > -1.0 || pieces.back().hi < 1.0) {
    throw std::invalid_argument("ElasticityModel '" + name + "': pieces must cover [-1, 1]");
  }
  for (const auto& p : pieces) {
    for (double at : {p.lo, 0.5 * (p.lo + p.hi), p.hi}) {
      if (!std::isfinite(form_value(p.form, at))) {
        throw std::invalid_argument("ElasticityModel '" + name + "': non-finite piece value");
      }
    }
  }
}

}  // namespace

double form_value(const PieceForm& form, double strain) {
  return std::visit(
      [strain](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, LinearForm>) {
          return f.slope * strain + f.intercept;
        } else if constexpr (std::is_same_v<T, CubicForm>) {
          return f.c0 + strain * (f.c1 + strain * (f.c2 + strain * f.c3));
        } else {
          return f.amplitude * std::atan(f.rate * (strain - f.eps0)) + f.offset;
        }
      },
      form);
}

double form_slope(const PieceForm& form, double strain) {
  return std::visit(
      [strain](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, LinearForm>) {
          return f.slope;
        } else if constexpr (std::is_same_v<T, CubicForm>) {
          return f.c1 + strain * (2.0 * f.c2 + strain * 3.0 * f.c3);
        } else {
          const double u = f.rate * (strain - f.eps0);
          return f.amplitude * f.rate / (1.0 + u * u);
        }
      },
      form);
}

ElasticityModel::ElasticityModel(std::vector<ElasticityPiece> pieces, std::string name)
    : pieces_(std::move(pieces)), name_(std::move(name)) {
  validate_pieces(pieces_, name_);
  // Snap shared knots so ownership of every strain value is exact.
  for (size_t i = 0; i + 1 < pieces_.size(); ++i) {
    pieces_[i + 1].lo = pieces_[i].hi;
  }
  const double at_zero = eval(0.0);
  const double scale = std::max(1.0, max_abs_value(covered_lo(), covered_hi()));
  if (std::abs(at_zero) > kKnotTol * scale) {
    throw std::invalid_argument("ElasticityModel '" + name_ + "': Ef(0) must be 0, got " +
                                std::to_string(at_zero));
  }
}

double ElasticityModel::eval(double strain) const {
  const ElasticityPiece& first = pieces_.front();
  const ElasticityPiece& last = pieces_.back();
  if (strain < first.lo) {
    return form_value(first.form, first.lo) + form_slope(first.form, first.lo) * (strain - first.lo);
  }
  if (strain >= last.hi) {
    return form_value(last.form, last.hi) + form_slope(last.form, last.hi) * (strain - last.hi);
  }
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), strain,
                             [](double v, const ElasticityPiece& p) { return v < p.lo; });
  --it;
  return form_value(it->form, strain);
}

double ElasticityModel::slope(double strain) const {
  const ElasticityPiece& first = pieces_.front();
  const ElasticityPiece& last = pieces_.back();
  if (strain < first.lo) return form_slope(first.form, first.lo);
  if (strain >= last.hi) return form_slope(last.form, last.hi);
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), strain,
                             [](double v, const ElasticityPiece& p) { return v < p.lo; });
  --it;
  return form_slope(it->form, strain);
}

namespace {

// Collects per-piece candidate abscissae for extrema of `value` (critical
// points of each form) or of `slope` (critical points of the derivative),
// restricted to [lo, hi].
template <typename Eval>
double max_abs_over(const std::vector<ElasticityPiece>& pieces, double lo, double hi, Eval eval_at,
                    bool of_slope) {
  double best = 0.0;
  auto consider = [&](double at) {
    if (at < lo || at > hi) return;
    best = std::max(best, std::abs(eval_at(at)));
  };
  consider(lo);
  consider(hi);
  for (const auto& p : pieces) {
    const double a = std::max(p.lo, lo);
    const double b = std::min(p.hi, hi);
    if (a > b) continue;
    consider(a);
    consider(b);
    std::visit(
        [&](const auto& f) {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, CubicForm>) {
            if (of_slope) {
              // slope' = 2 c2 + 6 c3 e
              if (f.c3 != 0.0) consider(-f.c2 / (3.0 * f.c3));
            } else {
              // value' = c1 + 2 c2 e + 3 c3 e^2
              const double qa = 3.0 * f.c3, qb = 2.0 * f.c2, qc = f.c1;
              if (qa != 0.0) {
                const double disc = qb * qb - 4.0 * qa * qc;
                if (disc >= 0.0) {
                  const double r = std::sqrt(disc);
                  consider((-qb + r) / (2.0 * qa));
                  consider((-qb - r) / (2.0 * qa));
                }
              } else if (qb != 0.0) {
                consider(-qc / qb);
              }
            }
          } else if constexpr (std::is_same_v<T, AtanForm>) {
            if (of_slope) consider(f.eps0);  // slope peaks at eps0
          }
        },
        p.form);
  }
  return best;
}

}  // namespace

double ElasticityModel::max_abs_slope(double lo, double hi) const {
  return max_abs_over(
      pieces_, lo, hi, [this](double e) { return slope(e); }, true);
}

double ElasticityModel::max_abs_value(double lo, double hi) const {
  return max_abs_over(
      pieces_, lo, hi, [this](double e) { return eval(e); }, false);
}

namespace {

// Hermite cubic on [x0, x1] through (x0,y0),(x1,y1) with end slopes m0, m1,
// expanded to absolute power-basis coefficients.
CubicForm hermite_cubic(double x0, double y0, double x1, double y1, double m0, double m1) {
  const double h = x1 - x0;
  const double delta = (y1 - y0) / h;
  const double a2 = (3.0 * delta - 2.0 * m0 - m1) / h;
  const double a3 = (m0 + m1 - 2.0 * delta) / (h * h);
  CubicForm c;
  c.c3 = a3;
  c.c2 = a2 - 3.0 * a3 * x0;
  c.c1 = m0 - 2.0 * a2 * x0 + 3.0 * a3 * x0 * x0;
  c.c0 = y0 - m0 * x0 + a2 * x0 * x0 - a3 * x0 * x0 * x0;
  return c;
}

}  // namespace

ElasticityModel build_from_points(const std::vector<std::pair<double, double>>& points,
                                  const std::vector<JoinRule>& joins, std::string name) {
  if (points.empty()) {
    throw std::invalid_argument("build_from_points: no points");
  }
  std::vector<std::pair<double, double>> pts = points;
  if (pts.front().first != 0.0) {
    if (pts.front().first < 0.0) {
      throw std::invalid_argument("build_from_points: strain abscissae must be >= 0");
    }
    pts.insert(pts.begin(), {0.0, 0.0});
  } else if (pts.front().second != 0.0) {
    throw std::invalid_argument("build_from_points: curve must pass through (0, 0)");
  }
  if (pts.size() < 2) {
    throw std::invalid_argument("build_from_points: need at least 2 points");
  }
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    if (pts[i].first == pts[i + 1].first) {
      throw std::invalid_argument("build_from_points: duplicate strain abscissa " +
                                  std::to_string(pts[i].first));
    }
    if (pts[i].first > pts[i + 1].first) {
      throw std::invalid_argument("build_from_points: strains must be strictly increasing");
    }
  }
  const size_t gaps = pts.size() - 1;
  if (joins.size() != gaps) {
    throw std::invalid_argument("build_from_points: need one join rule per gap (" +
                                std::to_string(gaps) + " after (0,0) augmentation), got " +
                                std::to_string(joins.size()));
  }

  std::vector<double> secant(gaps);
  for (size_t g = 0; g < gaps; ++g) {
    secant[g] = (pts[g + 1].second - pts[g].second) / (pts[g + 1].first - pts[g].first);
  }
  // Knot slopes used to clamp cubic gaps: an adjacent straight segment wins
  // (C1 against it); between two cubics the centered secant keeps both sides
  // agreeing.
  auto knot_slope = [&](size_t i) -> double {
    if (i == 0) return secant.front();
    if (i == pts.size() - 1) return secant.back();
    const JoinRule left = joins[i - 1];
    const JoinRule right = joins[i];
    if (left == JoinRule::Linear && right != JoinRule::Linear) return secant[i - 1];
    if (right == JoinRule::Linear && left != JoinRule::Linear) return secant[i];
    const double hl = pts[i].first - pts[i - 1].first;
    const double hr = pts[i + 1].first - pts[i].first;
    return (secant[i - 1] * hl + secant[i] * hr) / (hl + hr);
  };

  std::vector<ElasticityPiece> pieces;
  pieces.reserve(gaps + 2);
  for (size_t g = 0; g < gaps; ++g) {
    ElasticityPiece p;
    p.lo = pts[g].first;
    p.hi = pts[g + 1].first;
    if (joins[g] == JoinRule::Linear) {
      LinearForm f;
      f.slope = secant[g];
      f.intercept = pts[g].second - f.slope * pts[g].first;
      p.form = f;
    } else {
      p.form = hermite_cubic(pts[g].first, pts[g].second, pts[g + 1].first, pts[g + 1].second,
                             knot_slope(g), knot_slope(g + 1));
    }
    pieces.push_back(p);
  }

  const double cover = std::max(2.0, pts.back().first + 1.0);
  // Compression side: mirror with the initial tension modulus.
  const double k0 = form_slope(pieces.front().form, 0.0);
  ElasticityPiece comp;
  comp.lo = -cover;
  comp.hi = 0.0;
  comp.form = LinearForm{k0, 0.0};
  // Terminal extension continuing the end slope.
  const ElasticityPiece& lastp = pieces.back();
  const double end_slope = form_slope(lastp.form, lastp.hi);
  const double end_value = form_value(lastp.form, lastp.hi);
  ElasticityPiece ext;
  ext.lo = lastp.hi;
  ext.hi = cover;
  ext.form = LinearForm{end_slope, end_value - end_slope * lastp.hi};

  std::vector<ElasticityPiece> all;
  all.reserve(pieces.size() + 2);
  all.push_back(comp);
  all.insert(all.end(), pieces.begin(), pieces.end());
  if (ext.lo < ext.hi) all.push_back(ext);
  return ElasticityModel(std::move(all), std::move(name));
}

ElasticityModel build_from_points(const std::vector<std::pair<double, double>>& points,
                                  JoinRule join, std::string name) {
  if (points.empty()) {
    throw std::invalid_argument("build_from_points: no points");
  }
  const size_t gaps = points.front().first != 0.0 ? points.size() : points.size() - 1;
  return build_from_points(points, std::vector<JoinRule>(gaps, join), std::move(name));
}

Material::Material(ElasticityModel model_, double nu_) : model(std::move(model_)), nu(nu_) {
  if (!(nu >= 0.0 && nu < 1.0)) {
    throw std::invalid_argument("Material: Poisson ratio must be in [0, 1), got " +
                                std::to_string(nu));
  }
}

Material preset_skin(double nu) {
  auto model = build_from_points({{0.0, 0.0}, {0.4, 0.4}, {0.7, 1.0}, {1.0, 2.5}},
                                 {JoinRule::Linear, JoinRule::Cubic, JoinRule::Linear}, "skin");
  return Material(std::move(model), nu);
}

Material preset_adipose(double nu) {
  std::vector<ElasticityPiece> pieces;
  pieces.push_back({-2.0, 0.0, LinearForm{1.0, 0.0}});
  pieces.push_back({0.0, 2.0, AtanForm{0.125, 8.0, 0.0, 0.0}});
  return Material(ElasticityModel(std::move(pieces), "adipose"), nu);
}

}  // namespace softgrid
