#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "softgrid/elasticity.hpp"

namespace softgrid {

// Material card: JSON {name, nu, pieces: [{lo, hi, form, coeffs}]} with form
// one of "linear" [slope, intercept], "cubic" [c0, c1, c2, c3],
// "atan" [amplitude, rate, eps0, offset].
Material material_from_json(const std::string& text);
std::string material_to_json(const Material& mat);

Material load_material_card(const std::string& path);
void save_material_card(const Material& mat, const std::string& path);

// Two-column knot list (strain, stress), optional header row.
std::vector<std::pair<double, double>> load_knots_csv(const std::string& path);

}  // namespace softgrid
