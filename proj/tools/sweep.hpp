#pragma once

#include <string>
#include <vector>

#include "riskrev/polytope.hpp"

namespace riskrev::cli {

enum class Scale { Linear, Log };

struct SweepSpec {
  double start;
  double stop;
  int points;
  Scale scale = Scale::Linear;
};

void validate(const SweepSpec& s);

/// "start:stop:points[:linear|log]".
SweepSpec parse_sweep(const std::string& text);

/// Grid values; the endpoints are reproduced exactly.
std::vector<double> expand(const SweepSpec& s);

/// Either a sweep spec or a comma-separated list of numbers.
std::vector<double> parse_grid(const std::string& text);

double parse_number(const std::string& text);
std::vector<double> parse_list(const std::string& text, char sep = ',');

/// "a,b,..." as a point.
Point parse_point(const std::string& text);

/// "1,0;0,1" as a list of points.
std::vector<Point> parse_points(const std::string& text);

}  // namespace riskrev::cli
