#pragma once

#include <cstddef>
#include <vector>

#include "soliton/rat.hpp"

namespace soliton {

/// Square matrix of exact rationals, row-major.
class RatMatrix {
 public:
  RatMatrix() = default;
  explicit RatMatrix(std::size_t order) : order_(order), entries_(order * order) {}

  static RatMatrix identity(std::size_t order);

  std::size_t order() const { return order_; }

  Rat& operator()(std::size_t row, std::size_t col) { return entries_[row * order_ + col]; }
  const Rat& operator()(std::size_t row, std::size_t col) const {
    return entries_[row * order_ + col];
  }

 private:
  std::size_t order_ = 0;
  std::vector<Rat> entries_;
};

/// Exact determinant. Each row is scaled to integers by the lcm of its
/// denominators, then reduced by Bareiss fraction-free elimination, so every
/// intermediate division is exact. The empty matrix has determinant 1.
Rat det(const RatMatrix& m);

}  // namespace soliton
