#include "softgrid/material_io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "softgrid/format.hpp"

namespace softgrid {

namespace {

using nlohmann::json;

PieceForm form_from_json(const json& jp) {
  const std::string kind = jp.at("form").get<std::string>();
  const auto& c = jp.at("coeffs");
  auto need = [&](size_t n) {
    if (!c.is_array() || c.size() != n) {
      throw std::runtime_error("form '" + kind + "' needs " + std::to_string(n) + " coeffs");
    }
  };
  if (kind == "linear") {
    need(2);
    return LinearForm{c[0].get<double>(), c[1].get<double>()};
  }
  if (kind == "cubic") {
    need(4);
    return CubicForm{c[0].get<double>(), c[1].get<double>(), c[2].get<double>(), c[3].get<double>()};
  }
  if (kind == "atan") {
    need(4);
    return AtanForm{c[0].get<double>(), c[1].get<double>(), c[2].get<double>(), c[3].get<double>()};
  }
  throw std::runtime_error("unknown form '" + kind + "'");
}

json form_to_json(const PieceForm& form) {
  json j;
  std::visit(
      [&](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, LinearForm>) {
          j["form"] = "linear";
          j["coeffs"] = {f.slope, f.intercept};
        } else if constexpr (std::is_same_v<T, CubicForm>) {
          j["form"] = "cubic";
          j["coeffs"] = {f.c0, f.c1, f.c2, f.c3};
        } else {
          j["form"] = "atan";
          j["coeffs"] = {f.amplitude, f.rate, f.eps0, f.offset};
        }
      },
      form);
  return j;
}

}  // namespace

Material material_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("material card: ") + e.what());
  }
  try {
    const std::string name = j.at("name").get<std::string>();
    const double nu = j.at("nu").get<double>();
    std::vector<ElasticityPiece> pieces;
    for (const auto& jp : j.at("pieces")) {
      ElasticityPiece p;
      p.lo = jp.at("lo").get<double>();
      p.hi = jp.at("hi").get<double>();
      p.form = form_from_json(jp);
      pieces.push_back(p);
    }
    return Material(ElasticityModel(std::move(pieces), name), nu);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("material card: ") + e.what());
  }
}

std::string material_to_json(const Material& mat) {
  json j;
  j["name"] = mat.model.name();
  j["nu"] = mat.nu;
  j["pieces"] = json::array();
  for (const auto& p : mat.model.pieces()) {
    json jp = form_to_json(p.form);
    jp["lo"] = p.lo;
    jp["hi"] = p.hi;
    j["pieces"].push_back(jp);
  }
  return j.dump(2) + "\n";
}

Material load_material_card(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("material card: cannot open '" + path + "'");
  }
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return material_from_json(buf.str());
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string(e.what()) + " (file '" + path + "')");
  }
}

void save_material_card(const Material& mat, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("material card: cannot write '" + path + "'");
  }
  out << material_to_json(mat);
}

std::vector<std::pair<double, double>> load_knots_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("knot list: cannot open '" + path + "'");
  }
  std::vector<std::pair<double, double>> knots;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto cols = split_csv_line(line);
    if (cols.size() != 2) {
      throw std::runtime_error("knot list '" + path + "', line " + std::to_string(lineno) +
                               ": expected 2 columns");
    }
    try {
      knots.emplace_back(std::stod(cols[0]), std::stod(cols[1]));
    } catch (const std::exception&) {
      if (lineno == 1) continue;  // header row
      throw std::runtime_error("knot list '" + path + "', line " + std::to_string(lineno) +
                               ": bad number");
    }
  }
  if (knots.empty()) {
    throw std::runtime_error("knot list '" + path + "': no data rows");
  }
  return knots;
}

}  // namespace softgrid
