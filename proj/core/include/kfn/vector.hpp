#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <variant>
#include <vector>

namespace kfn {

/// Finite real sequence. Entries are always finite and the dimension is at
/// least one; both are checked on construction.
class Vector {
public:
  explicit Vector(std::vector<double> entries);
  Vector(std::initializer_list<double> entries);

  static Vector zeros(std::size_t dim);
  static Vector basis(std::size_t dim, std::size_t k, double scale = 1.0);
  static Vector constant(std::size_t dim, double value);

  std::size_t size() const noexcept { return entries_.size(); }
  double operator[](std::size_t i) const { return entries_[i]; }
  std::span<const double> entries() const noexcept { return entries_; }
  const std::vector<double>& data() const noexcept { return entries_; }

  bool is_zero() const noexcept;

  Vector& operator+=(const Vector& other);
  Vector& operator-=(const Vector& other);
  Vector& operator*=(double s);

  friend Vector operator+(Vector a, const Vector& b) { return a += b; }
  friend Vector operator-(Vector a, const Vector& b) { return a -= b; }
  friend Vector operator*(Vector a, double s) { return a *= s; }
  friend Vector operator*(double s, Vector a) { return a *= s; }
  friend bool operator==(const Vector&, const Vector&) = default;

private:
  std::vector<double> entries_;
};

/// Samples of a function on n >= 2 equispaced nodes of [a, b], both endpoints
/// included.
class GridFunction {
public:
  GridFunction(double a, double b, Vector values);

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  std::size_t nodes() const noexcept { return values_.size(); }
  double spacing() const noexcept { return (b_ - a_) / static_cast<double>(nodes() - 1); }
  double node(std::size_t i) const noexcept {
    return a_ + static_cast<double>(i) * spacing();
  }
  const Vector& values() const noexcept { return values_; }

  /// Same grid, new samples.
  GridFunction with_values(Vector values) const { return {a_, b_, std::move(values)}; }

private:
  double a_;
  double b_;
  Vector values_;
};

/// Anything a K-functional can be evaluated on.
using Element = std::variant<Vector, GridFunction>;

/// The raw samples of an element (the vector itself, or the grid values).
const Vector& samples_of(const Element& e);
Element with_samples(const Element& like, Vector samples);
Element scaled(const Element& e, double s);

}  // namespace kfn
