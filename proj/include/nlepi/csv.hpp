// CSV helpers. Numbers are written in the shortest decimal form that
// round-trips to the same double.
#pragma once

#include <string>
#include <vector>

namespace nlepi::csv {

std::string format_double(double v);
bool try_parse_double(const std::string& text, double& out);
std::vector<std::string> split_line(const std::string& line, char sep = ',');
std::string trim(const std::string& s);

}  // namespace nlepi::csv
