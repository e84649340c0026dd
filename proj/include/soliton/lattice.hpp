#pragma once

#include <cmath>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "soliton/error.hpp"
#include "soliton/rat.hpp"

namespace soliton {

/// The (alpha, beta) pair of the generalized discrete KdV map, with
/// Delta = 1 - alpha - beta cached. Both parameters lie strictly in (0, 1).
class SystemParams {
 public:
  SystemParams(Rat alpha, Rat beta);

  const Rat& alpha() const { return alpha_; }
  const Rat& beta() const { return beta_; }
  const Rat& delta_cap() const { return delta_cap_; }

 private:
  Rat alpha_;
  Rat beta_;
  Rat delta_cap_;
};

inline double to_double(const Rat& r) { return r.to_double(); }
inline double to_double(double d) { return d; }

template <class T>
T convert(const Rat& r) {
  if constexpr (std::is_same_v<T, Rat>) {
    return r;
  } else {
    return static_cast<T>(r.to_double());
  }
}

/// Coefficients of the gKdV site map in the scalar type T.
template <class T>
struct GkdvCoeffs {
  T alpha;
  T beta;
  T one_minus_alpha;
  T one_minus_beta;

  static GkdvCoeffs from(const SystemParams& p) {
    return {convert<T>(p.alpha()), convert<T>(p.beta()), convert<T>(Rat(1) - p.alpha()),
            convert<T>(Rat(1) - p.beta())};
  }
};

template <class T>
struct SitePair {
  T first;
  T second;
};

/// One site of the generalized dKdV map: (x_n^t, y_n^t) -> (x_n^{t+1}, y_{n+1}^t).
template <class T>
SitePair<T> gkdv_site(const T& x, const T& y, const GkdvCoeffs<T>& c, long site = 0) {
  const T s = x * y;
  const T num = c.one_minus_beta + c.beta * s;
  const T den = c.one_minus_alpha + c.alpha * s;
  if (num == T(0) || den == T(0)) {
    throw Error(ErrorCode::ZeroDenominator, "vanishing gKdV denominator at site " + std::to_string(site), site);
  }
  return {num / den * y, den / num * x};
}

/// One site of the coupled discrete KdV map with parameter delta.
template <class T>
SitePair<T> dkdv_site(const T& x, const T& y, const T& delta, long site = 0) {
  const T one_plus = T(1) + delta;
  const T den = T(1) + delta * x * y;
  if (one_plus == T(0) || den == T(0)) {
    throw Error(ErrorCode::ZeroDenominator, "vanishing dKdV denominator at site " + std::to_string(site), site);
  }
  return {one_plus * y / den, den * x / one_plus};
}

/// The Yang-Baxter map R(b, a): (u, v) -> (u_n^{t+1}, v_{n+1}^t).
template <class T>
SitePair<T> yb_map(const T& u, const T& v, const T& a, const T& b) {
  const T s = u * v;
  const T da = T(1) + a * s;
  const T db = T(1) + b * s;
  if (da == T(0) || db == T(0)) throw Error(ErrorCode::ZeroDenominator, "vanishing Yang-Baxter denominator");
  return {db * v / da, da * u / db};
}

struct YbCoordinates {
  Rat u;
  Rat v;
  Rat a;
  Rat b;
};

/// x = (1-beta) u, y = (1-alpha) v, a = alpha (1-beta), b = beta (1-alpha).
YbCoordinates scale_to_yb(const Rat& x, const Rat& y, const SystemParams& params);

/// Result of sweeping one time row left to right.
template <class T>
struct Sweep {
  std::vector<T> y;       // y_n^t for n in [n_lo, n_hi]; y[0] is the inflow
  std::vector<T> x_next;  // x_n^{t+1}
  T y_out;                // y_{n_hi+1}^t, past the window; discarded by callers
};

template <class T, class SiteMap>
Sweep<T> sweep_row(std::span<const T> x, const T& inflow, long n_lo, SiteMap&& site_map) {
  if (x.empty()) throw Error(ErrorCode::WindowTooSmall, "empty lattice window");
  Sweep<T> out;
  out.y.reserve(x.size());
  out.x_next.reserve(x.size());
  T y = inflow;
  for (std::size_t i = 0; i < x.size(); ++i) {
    out.y.push_back(y);
    auto [x_next, y_next] = site_map(x[i], y, n_lo + static_cast<long>(i));
    out.x_next.push_back(std::move(x_next));
    y = std::move(y_next);
  }
  out.y_out = std::move(y);
  return out;
}

/// One time step of the generalized dKdV equation over the window.
template <class T>
Sweep<T> step_gkdv(std::span<const T> x, const SystemParams& params, const T& inflow = T(1),
                   long n_lo = 0) {
  const auto c = GkdvCoeffs<T>::from(params);
  return sweep_row<T>(x, inflow, n_lo,
                      [&](const T& xv, const T& yv, long n) { return gkdv_site(xv, yv, c, n); });
}

/// One time step of the coupled discrete KdV equation.
template <class T>
Sweep<T> step_dkdv(std::span<const T> x, const T& delta, const T& inflow = T(1), long n_lo = 0) {
  return sweep_row<T>(x, inflow, n_lo,
                      [&](const T& xv, const T& yv, long n) { return dkdv_site(xv, yv, delta, n); });
}

/// Time history of a windowed lattice. rows[k] holds x and y at time t0 + k.
template <class T>
struct LatticeField {
  long n_lo = 0;
  long t0 = 0;
  std::vector<std::vector<T>> x;
  std::vector<std::vector<T>> y;
  bool escaped = false;  // some row had |x_{n_hi} - 1| > escape_tolerance

  long n_hi() const { return n_lo + static_cast<long>(x.empty() ? 0 : x.front().size()) - 1; }
  long t_last() const { return t0 + static_cast<long>(x.size()) - 1; }
};

inline constexpr double escape_tolerance = 1e-6;

/// y_{n_lo}^t supplier; the default boundary is constant 1.
template <class T>
using InflowFn = std::function<T(long t)>;

/// Evolves x^{t0} for `steps` steps of the gKdV equation. The returned field
/// has steps + 1 rows with y filled in for every row.
template <class T>
LatticeField<T> evolve_gkdv(std::vector<T> x0, long n_lo, long t0, long steps,
                            const SystemParams& params, InflowFn<T> inflow = {}) {
  if (x0.empty()) throw Error(ErrorCode::WindowTooSmall, "empty lattice window");
  LatticeField<T> field;
  field.n_lo = n_lo;
  field.t0 = t0;
  field.x.push_back(std::move(x0));
  for (long k = 0; k <= steps; ++k) {
    const long t = t0 + k;
    const T in = inflow ? inflow(t) : T(1);
    auto sw = step_gkdv<T>(field.x.back(), params, in, n_lo);
    if (std::abs(to_double(field.x.back().back()) - 1.0) > escape_tolerance) field.escaped = true;
    field.y.push_back(std::move(sw.y));
    if (k < steps) field.x.push_back(std::move(sw.x_next));
  }
  return field;
}

/// Field export as CSV `n,t,x,y`. Exact fields write "p/q"; float output uses
/// `precision` significant digits.
void write_field_csv(std::ostream& os, const LatticeField<Rat>& field, bool exact, int precision = 12);
void write_field_csv(std::ostream& os, const LatticeField<double>& field, int precision = 12);

/// Discrepancy between one Yang-Baxter step (carried to zeta/xi variables)
/// and one dKdV step with delta = 1/b, for a fixed dKdV-side pair (zeta, xi).
struct LimitChainEntry {
  double a;
  double discrepancy;
};

struct LimitChainReport {
  std::vector<LimitChainEntry> entries;
  bool non_increasing = true;
  bool strictly_decreasing = true;
};

LimitChainReport limit_chain_check(double zeta, double xi, std::span<const double> a_values, double b);

}  // namespace soliton
