#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace amalgam {

/// Real-valued function on the outcomes of a finite space, indexed by
/// outcome position.
class RandomVariable {
 public:
  RandomVariable() = default;
  explicit RandomVariable(std::vector<double> values) : values_(std::move(values)) {}

  static RandomVariable constant(std::size_t size, double c) {
    return RandomVariable(std::vector<double>(size, c));
  }
  static RandomVariable zeros(std::size_t size) { return constant(size, 0.0); }

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  std::span<const double> values() const { return values_; }
  const std::vector<double>& vector() const { return values_; }

  double max_abs() const;
  double max() const;
  double min() const;

  RandomVariable& operator+=(const RandomVariable& other);
  RandomVariable& operator-=(const RandomVariable& other);
  RandomVariable& operator*=(double c);

  friend RandomVariable operator+(RandomVariable a, const RandomVariable& b) { return a += b; }
  friend RandomVariable operator-(RandomVariable a, const RandomVariable& b) { return a -= b; }
  friend RandomVariable operator*(RandomVariable a, double c) { return a *= c; }
  friend RandomVariable operator*(double c, RandomVariable a) { return a *= c; }
  friend bool operator==(const RandomVariable&, const RandomVariable&) = default;

 private:
  std::vector<double> values_;
};

RandomVariable abs(const RandomVariable& x);

/// Pointwise product.
RandomVariable hadamard(const RandomVariable& a, const RandomVariable& b);

/// Membership table of an outcome subset.
using Event = std::vector<bool>;

RandomVariable indicator(const Event& event);

}  // namespace amalgam
