#pragma once

#include <string>
#include <vector>

namespace softgrid {

// Round-trip-exact, locale-independent double formatting ("%.17g"). All CSV
// emitters use it so identical runs produce byte-identical files.
std::string fmt_g17(double v);

// Shorter "%g" rendering for names and labels.
std::string fmt_g(double v);

std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace softgrid
