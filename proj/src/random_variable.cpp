#include "amalgam/random_variable.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace amalgam {

namespace {

void require_same_size(const RandomVariable& a, const RandomVariable& b) {
  if (a.size() != b.size()) throw std::invalid_argument("random variables live on different spaces");
}

}  // namespace

double RandomVariable::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double RandomVariable::max() const {
  double m = -std::numeric_limits<double>::infinity();
  for (double v : values_) m = std::max(m, v);
  return m;
}

double RandomVariable::min() const {
  double m = std::numeric_limits<double>::infinity();
  for (double v : values_) m = std::min(m, v);
  return m;
}

RandomVariable& RandomVariable::operator+=(const RandomVariable& other) {
  require_same_size(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

RandomVariable& RandomVariable::operator-=(const RandomVariable& other) {
  require_same_size(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

RandomVariable& RandomVariable::operator*=(double c) {
  for (double& v : values_) v *= c;
  return *this;
}

RandomVariable abs(const RandomVariable& x) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::abs(x[i]);
  return RandomVariable(std::move(out));
}

RandomVariable hadamard(const RandomVariable& a, const RandomVariable& b) {
  require_same_size(a, b);
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return RandomVariable(std::move(out));
}

RandomVariable indicator(const Event& event) {
  std::vector<double> out(event.size());
  for (std::size_t i = 0; i < event.size(); ++i) out[i] = event[i] ? 1.0 : 0.0;
  return RandomVariable(std::move(out));
}

}  // namespace amalgam
