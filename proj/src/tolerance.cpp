#include "amalgam/tolerance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

namespace amalgam {

namespace {

double read_tolerance() {
  constexpr double kDefault = 1e-12;
  const char* env = std::getenv("AMALGAM_TOL");
  if (env == nullptr || *env == '\0') return kDefault;
  try {
    const double v = std::stod(env);
    if (std::isfinite(v) && v > 0.0) return v;
  } catch (...) {
  }
  return kDefault;
}

}  // namespace

double tolerance() {
  static const double tol = read_tolerance();
  return tol;
}

bool approx_equal(double a, double b, double scale) {
  return std::abs(a - b) <= tolerance() * scale;
}

bool approx_leq(double a, double b) {
  return a <= b + tolerance() * std::max(std::abs(a), std::abs(b));
}

}  // namespace amalgam
