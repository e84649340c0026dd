#include "soliton/lattice.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace soliton {

SystemParams::SystemParams(Rat alpha, Rat beta)
    : alpha_(std::move(alpha)), beta_(std::move(beta)) {
  if (alpha_ <= Rat(0) || alpha_ >= Rat(1)) {
    throw Error(ErrorCode::ParamOutOfRange, "alpha must lie in (0, 1), got " + alpha_.to_string());
  }
  if (beta_ <= Rat(0) || beta_ >= Rat(1)) {
    throw Error(ErrorCode::ParamOutOfRange, "beta must lie in (0, 1), got " + beta_.to_string());
  }
  delta_cap_ = Rat(1) - alpha_ - beta_;
}

YbCoordinates scale_to_yb(const Rat& x, const Rat& y, const SystemParams& params) {
  const Rat one_minus_alpha = Rat(1) - params.alpha();
  const Rat one_minus_beta = Rat(1) - params.beta();
  return {x / one_minus_beta, y / one_minus_alpha, params.alpha() * one_minus_beta,
          params.beta() * one_minus_alpha};
}

namespace {

std::string format_double(double v, int precision) {
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

template <class T, class Fmt>
void write_rows(std::ostream& os, const LatticeField<T>& field, Fmt&& fmt) {
  os << "n,t,x,y\n";
  for (std::size_t k = 0; k < field.x.size(); ++k) {
    const long t = field.t0 + static_cast<long>(k);
    for (std::size_t i = 0; i < field.x[k].size(); ++i) {
      os << field.n_lo + static_cast<long>(i) << ',' << t << ',' << fmt(field.x[k][i]) << ','
         << fmt(field.y[k][i]) << '\n';
    }
  }
}

}  // namespace

void write_field_csv(std::ostream& os, const LatticeField<Rat>& field, bool exact, int precision) {
  if (exact) {
    write_rows(os, field, [](const Rat& r) { return r.to_string(); });
  } else {
    write_rows(os, field, [precision](const Rat& r) { return format_double(r.to_double(), precision); });
  }
}

void write_field_csv(std::ostream& os, const LatticeField<double>& field, int precision) {
  write_rows(os, field, [precision](double v) { return format_double(v, precision); });
}

LimitChainReport limit_chain_check(double zeta, double xi, std::span<const double> a_values, double b) {
  if (!(b > 0)) throw Error(ErrorCode::NonPositiveParameter, "b must be positive");
  double prev_a = 0;
  for (double a : a_values) {
    if (!(a > prev_a)) {
      throw Error(ErrorCode::NonPositiveParameter, "a values must be positive and increasing");
    }
    prev_a = a;
  }

  const double delta = 1.0 / b;
  const auto reference = dkdv_site(zeta, xi, delta);

  LimitChainReport report;
  for (double a : a_values) {
    const double zeta_scale = std::sqrt(a * (b + 1.0));
    const double xi_scale = std::sqrt(a * b * b / (b + 1.0));
    const auto [u_next, v_next] = yb_map(zeta / zeta_scale, xi / xi_scale, a, b);
    const double discrepancy = std::max(std::abs(zeta_scale * u_next - reference.first),
                                        std::abs(xi_scale * v_next - reference.second));
    if (!report.entries.empty()) {
      const double last = report.entries.back().discrepancy;
      if (discrepancy > last) report.non_increasing = false;
      if (!(discrepancy < last)) report.strictly_decreasing = false;
    }
    report.entries.push_back({a, discrepancy});
  }
  return report;
}

}  // namespace soliton
