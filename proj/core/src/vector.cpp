#include "kfn/vector.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kfn/error.hpp"

namespace kfn {

namespace {

void check_entries(const std::vector<double>& v) {
  if (v.empty()) detail::fail_domain("vector dimension must be at least 1");
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) {
      detail::fail_domain("non-finite vector entry at index " + std::to_string(i));
    }
  }
}

void check_same_size(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) {
    detail::fail_domain("dimension mismatch: " + std::to_string(a.size()) + " vs " +
                        std::to_string(b.size()));
  }
}

}  // namespace

Vector::Vector(std::vector<double> entries) : entries_(std::move(entries)) {
  check_entries(entries_);
}

Vector::Vector(std::initializer_list<double> entries) : entries_(entries) {
  check_entries(entries_);
}

Vector Vector::zeros(std::size_t dim) { return Vector(std::vector<double>(dim, 0.0)); }

Vector Vector::basis(std::size_t dim, std::size_t k, double scale) {
  if (k >= dim) detail::fail_domain("basis index out of range");
  std::vector<double> v(dim, 0.0);
  v[k] = scale;
  return Vector(std::move(v));
}

Vector Vector::constant(std::size_t dim, double value) {
  return Vector(std::vector<double>(dim, value));
}

bool Vector::is_zero() const noexcept {
  return std::all_of(entries_.begin(), entries_.end(), [](double x) { return x == 0.0; });
}

Vector& Vector::operator+=(const Vector& other) {
  check_same_size(*this, other);
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
  check_entries(entries_);
  return *this;
}

Vector& Vector::operator-=(const Vector& other) {
  check_same_size(*this, other);
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= other.entries_[i];
  check_entries(entries_);
  return *this;
}

Vector& Vector::operator*=(double s) {
  for (double& x : entries_) x *= s;
  check_entries(entries_);
  return *this;
}

GridFunction::GridFunction(double a, double b, Vector values)
    : a_(a), b_(b), values_(std::move(values)) {
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
    detail::fail_domain("grid interval must satisfy a < b");
  }
  if (values_.size() < 2) detail::fail_domain("grid function needs at least 2 nodes");
}

const Vector& samples_of(const Element& e) {
  if (const auto* v = std::get_if<Vector>(&e)) return *v;
  return std::get<GridFunction>(e).values();
}

Element with_samples(const Element& like, Vector samples) {
  if (const auto* g = std::get_if<GridFunction>(&like)) {
    if (samples.size() != g->nodes()) detail::fail_domain("grid sample count mismatch");
    return g->with_values(std::move(samples));
  }
  return samples;
}

Element scaled(const Element& e, double s) { return with_samples(e, samples_of(e) * s); }

}  // namespace kfn
