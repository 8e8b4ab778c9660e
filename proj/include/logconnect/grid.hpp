#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace logconnect {

/// Row-major square array. Holds exact residues and matrices of rational
/// functions, where a full linear-algebra type would be overkill.
template <class T>
class Grid {
 public:
  Grid() = default;
  explicit Grid(std::size_t n, const T& fill = T{}) : n_(n), cells_(n * n, fill) {}

  std::size_t size() const { return n_; }

  T& operator()(std::size_t i, std::size_t j) { return cells_[i * n_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return cells_[i * n_ + j]; }

  auto begin() { return cells_.begin(); }
  auto end() { return cells_.end(); }
  auto begin() const { return cells_.begin(); }
  auto end() const { return cells_.end(); }

  template <class F>
  auto map(F&& f) const {
    using U = std::decay_t<decltype(f(std::declval<const T&>()))>;
    Grid<U> out;
    out.n_ = n_;
    out.cells_.reserve(cells_.size());
    for (const auto& c : cells_) out.cells_.push_back(f(c));
    return out;
  }

  friend bool operator==(const Grid& a, const Grid& b) { return a.n_ == b.n_ && a.cells_ == b.cells_; }

  template <class U>
  friend class Grid;

 private:
  std::size_t n_ = 0;
  std::vector<T> cells_;
};

template <class T>
Grid<T> operator+(const Grid<T>& a, const Grid<T>& b) {
  if (a.size() != b.size()) raise(ErrorCode::DimensionMismatch, "grid sizes differ");
  Grid<T> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) out(i, j) = a(i, j) + b(i, j);
  return out;
}

template <class T>
Grid<T> operator-(const Grid<T>& a, const Grid<T>& b) {
  if (a.size() != b.size()) raise(ErrorCode::DimensionMismatch, "grid sizes differ");
  Grid<T> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) out(i, j) = a(i, j) - b(i, j);
  return out;
}

template <class T>
Grid<T> operator*(const Grid<T>& a, const Grid<T>& b) {
  if (a.size() != b.size()) raise(ErrorCode::DimensionMismatch, "grid sizes differ");
  const std::size_t n = a.size();
  Grid<T> out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      T acc = a(i, 0) * b(0, j);
      for (std::size_t k = 1; k < n; ++k) acc = acc + a(i, k) * b(k, j);
      out(i, j) = acc;
    }
  return out;
}

}  // namespace logconnect
