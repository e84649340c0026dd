#include "soliton/rat_matrix.hpp"

#include <utility>

namespace soliton {

RatMatrix RatMatrix::identity(std::size_t order) {
  RatMatrix m(order);
  for (std::size_t i = 0; i < order; ++i) m(i, i) = Rat(1);
  return m;
}

Rat det(const RatMatrix& m) {
  const std::size_t n = m.order();
  if (n == 0) return Rat(1);
  if (n == 1) return m(0, 0);

  std::vector<mpz_class> a(n * n);
  mpz_class scale = 1;
  for (std::size_t i = 0; i < n; ++i) {
    mpz_class row_lcm = 1;
    for (std::size_t j = 0; j < n; ++j) {
      mpz_lcm(row_lcm.get_mpz_t(), row_lcm.get_mpz_t(), m(i, j).denominator().get_mpz_t());
    }
    for (std::size_t j = 0; j < n; ++j) {
      const Rat& e = m(i, j);
      a[i * n + j] = e.numerator() * (row_lcm / e.denominator());
    }
    scale *= row_lcm;
  }
  auto at = [&](std::size_t r, std::size_t c) -> mpz_class& { return a[r * n + c]; };

  int sign = 1;
  mpz_class prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (at(k, k) == 0) {
      std::size_t swap_row = k + 1;
      while (swap_row < n && at(swap_row, k) == 0) ++swap_row;
      if (swap_row == n) return Rat(0);
      for (std::size_t c = k; c < n; ++c) std::swap(at(k, c), at(swap_row, c));
      sign = -sign;
    }
    const mpz_class& pivot = at(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        mpz_class v = at(i, j) * pivot - at(i, k) * at(k, j);
        mpz_divexact(at(i, j).get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
      }
      at(i, k) = 0;
    }
    prev = pivot;
  }
  mpz_class d = at(n - 1, n - 1);
  if (sign < 0) d = -d;
  return Rat(d, scale);
}

}  // namespace soliton
