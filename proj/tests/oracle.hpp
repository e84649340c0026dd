#pragma once

// Independent reference computations for the unit and acceptance tests. Nothing
// here shares code paths with the library beyond the Rat value type.

#include <random>
#include <vector>

#include "soliton/rat.hpp"

namespace oracle {

using soliton::Rat;
using Matrix = std::vector<std::vector<Rat>>;

/// Laplace expansion along the first row.
inline Rat laplace_det(const Matrix& m) {
  const std::size_t n = m.size();
  if (n == 0) return Rat(1);
  if (n == 1) return m[0][0];
  Rat total(0);
  for (std::size_t col = 0; col < n; ++col) {
    Matrix minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<Rat> row;
      for (std::size_t c = 0; c < n; ++c) {
        if (c != col) row.push_back(m[r][c]);
      }
      minor.push_back(std::move(row));
    }
    const Rat term = m[0][col] * laplace_det(minor);
    total = (col % 2 == 0) ? total + term : total - term;
  }
  return total;
}

/// Integer power by repeated multiplication.
inline Rat power(const Rat& base, long e) {
  Rat out(1);
  const Rat factor = e < 0 ? Rat(1) / base : base;
  for (long i = 0; i < (e < 0 ? -e : e); ++i) out = out * factor;
  return out;
}

/// Closed one-soliton x_n^t from the constants A, B, C, D.
inline Rat one_soliton_x(const Rat& A, const Rat& B, const Rat& C, const Rat& D, long t, long n) {
  const Rat w = C * power(A, t) * power(B, n);
  return (Rat(1) + w) * (Rat(1) + D * w * B) / ((Rat(1) + D * w) * (Rat(1) + w * B));
}

inline Rat random_rat(std::mt19937_64& rng, long num_range, long den_max) {
  std::uniform_int_distribution<long> num(-num_range, num_range);
  std::uniform_int_distribution<long> den(1, den_max);
  return Rat(num(rng), den(rng));
}

inline Rat random_positive_rat(std::mt19937_64& rng, long num_max, long den_max) {
  std::uniform_int_distribution<long> num(1, num_max);
  std::uniform_int_distribution<long> den(1, den_max);
  return Rat(num(rng), den(rng));
}

}  // namespace oracle
