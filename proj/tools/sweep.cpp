#include "sweep.hpp"

#include <cmath>
#include <cstdlib>

#include "riskrev/errors.hpp"

namespace riskrev::cli {
namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string::size_type begin = 0;
  while (true) {
    const auto end = text.find(sep, begin);
    out.push_back(text.substr(begin, end == std::string::npos ? std::string::npos : end - begin));
    if (end == std::string::npos) break;
    begin = end + 1;
  }
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

}  // namespace

double parse_number(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) throw InvalidArgument("expected a number, got an empty string");
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || !std::isfinite(v)) {
    throw InvalidArgument("not a finite number: '" + text + "'");
  }
  return v;
}

std::vector<double> parse_list(const std::string& text, char sep) {
  std::vector<double> out;
  for (const auto& part : split(text, sep)) out.push_back(parse_number(part));
  return out;
}

Point parse_point(const std::string& text) {
  const auto v = parse_list(text);
  Point p(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) p[static_cast<Eigen::Index>(i)] = v[i];
  return p;
}

std::vector<Point> parse_points(const std::string& text) {
  std::vector<Point> out;
  for (const auto& part : split(text, ';')) out.push_back(parse_point(part));
  return out;
}

void validate(const SweepSpec& s) {
  if (!(s.start < s.stop)) throw InvalidArgument("sweep: start must be < stop");
  if (s.points < 2) throw InvalidArgument("sweep: at least 2 points required");
  if (s.scale == Scale::Log && !(s.start > 0.0)) {
    throw InvalidArgument("sweep: log scale requires start > 0");
  }
}

SweepSpec parse_sweep(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3 && parts.size() != 4) {
    throw InvalidArgument("sweep must look like start:stop:points[:linear|log], got '" + text + "'");
  }
  SweepSpec s{parse_number(parts[0]), parse_number(parts[1]), 0, Scale::Linear};
  const double pts = parse_number(parts[2]);
  if (pts != std::floor(pts) || pts > 1e8) throw InvalidArgument("sweep: points must be an integer");
  s.points = static_cast<int>(pts);
  if (parts.size() == 4) {
    const std::string scale = trim(parts[3]);
    if (scale == "log") {
      s.scale = Scale::Log;
    } else if (scale != "linear") {
      throw InvalidArgument("sweep: scale must be linear or log, got '" + scale + "'");
    }
  }
  validate(s);
  return s;
}

std::vector<double> expand(const SweepSpec& s) {
  validate(s);
  std::vector<double> out(static_cast<std::size_t>(s.points));
  const double n = s.points - 1;
  for (int i = 0; i < s.points; ++i) {
    const double t = i / n;
    if (s.scale == Scale::Linear) {
      out[static_cast<std::size_t>(i)] = s.start + t * (s.stop - s.start);
    } else {
      out[static_cast<std::size_t>(i)] =
          std::exp(std::log(s.start) + t * (std::log(s.stop) - std::log(s.start)));
    }
  }
  out.front() = s.start;
  out.back() = s.stop;
  return out;
}

std::vector<double> parse_grid(const std::string& text) {
  if (text.find(':') != std::string::npos) return expand(parse_sweep(text));
  auto v = parse_list(text);
  if (v.empty()) throw InvalidArgument("empty grid");
  return v;
}

}  // namespace riskrev::cli
