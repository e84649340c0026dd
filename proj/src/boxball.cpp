#include "soliton/boxball.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace soliton {

long BBSCState::ball_count() const {
  long total = 0;
  for (long v : u) total += v;
  return total;
}

BBSCState parse_boxes(std::string_view digits, long c_box, std::optional<long> c_carrier) {
  BBSCState state{{}, c_box, c_carrier};
  for (char ch : digits) {
    if (ch == '.') {
      state.u.push_back(0);
    } else if (ch >= '0' && ch <= '9') {
      state.u.push_back(ch - '0');
    } else {
      throw Error(ErrorCode::ParseError, "box string may only contain digits and '.'");
    }
  }
  return state;
}

namespace {

void check_capacities(const BBSCState& state) {
  if (state.c_box < 1) throw Error(ErrorCode::CapacityViolation, "box capacity must be positive");
  if (state.c_carrier && *state.c_carrier < 1) {
    throw Error(ErrorCode::CapacityViolation, "carrier capacity must be positive");
  }
  for (std::size_t n = 0; n < state.u.size(); ++n) {
    if (state.u[n] < 0 || state.u[n] > state.c_box) {
      throw Error(ErrorCode::CapacityViolation,
                  "box " + std::to_string(n) + " holds " + std::to_string(state.u[n]) +
                      " balls, capacity " + std::to_string(state.c_box),
                  static_cast<long>(n));
    }
  }
}

BBSCSweep sweep(const BBSCState& state, std::optional<long> carrier_capacity) {
  check_capacities(state);
  BBSCSweep out;
  out.next.c_box = state.c_box;
  out.next.c_carrier = state.c_carrier;
  long load = 0;
  for (std::size_t n = 0; n < state.u.size() || load > 0; ++n) {
    const long here = n < state.u.size() ? state.u[n] : 0;
    long next = std::min(state.c_box - here, load);
    if (carrier_capacity) next += std::max(0L, here + load - *carrier_capacity);
    out.carrier.push_back(load);
    out.next.u.push_back(next);
    load = here + load - next;
  }
  return out;
}

}  // namespace

BBSCSweep bbsc_sweep(const BBSCState& state) { return sweep(state, state.c_carrier); }

BBSCState bbsc_step(const BBSCState& state) { return sweep(state, state.c_carrier).next; }

BBSCState bbs_step(const BBSCState& state) { return sweep(state, std::nullopt).next; }

std::vector<BBSCState> simulate_bbsc(const BBSCState& initial, long steps) {
  std::vector<BBSCState> history{initial};
  for (long k = 0; k < steps; ++k) history.push_back(bbsc_step(history.back()));
  return history;
}

void render_ascii(std::ostream& os, const std::vector<BBSCState>& history) {
  std::size_t width = 0;
  for (const auto& s : history) {
    if (s.c_box > 9) throw Error(ErrorCode::ParamOutOfRange, "ASCII rendering needs C_B <= 9");
    width = std::max(width, s.u.size());
  }
  for (const auto& s : history) {
    std::string line(width, '.');
    for (std::size_t n = 0; n < s.u.size(); ++n) {
      if (s.u[n] > 0) line[n] = static_cast<char>('0' + s.u[n]);
    }
    os << line << '\n';
  }
}

void write_bbsc_csv(std::ostream& os, const std::vector<BBSCState>& history) {
  os << "t,n,u\n";
  for (std::size_t t = 0; t < history.size(); ++t) {
    for (std::size_t n = 0; n < history[t].u.size(); ++n) {
      os << t << ',' << n << ',' << history[t].u[n] << '\n';
    }
  }
}

// ---- Ultradiscrete bridge -----------------------------------------------------

SitePair<double> tropical_site(double X, double Y, double A, double B) {
  const double x_next = std::min(-X, B + Y) + std::max(X + Y + A, 0.0) - A;
  return {x_next, X + Y - x_next};
}

namespace {

double log_add_exp(double a, double b) {
  const double hi = std::max(a, b);
  if (hi == -std::numeric_limits<double>::infinity()) return hi;
  return hi + std::log1p(std::exp(-std::abs(a - b)));
}

}  // namespace

SitePair<double> gkdv_site_log(double X, double Y, double A, double B, double eps) {
  const double log_alpha = -A / eps;
  const double log_beta = -B / eps;
  const double log_x = -X / eps;
  const double log_y = -Y / eps;
  const double log_xy = log_x + log_y;
  const double log_num = log_add_exp(std::log1p(-std::exp(log_beta)), log_beta + log_xy);
  const double log_den = log_add_exp(std::log1p(-std::exp(log_alpha)), log_alpha + log_xy);
  return {-eps * (log_num - log_den + log_y), -eps * (log_den - log_num + log_x)};
}

UDLimitReport ud_limit_check(const UDField& field, const std::vector<double>& epsilons) {
  if (!(field.A > 0) || !(field.B > 0)) {
    throw Error(ErrorCode::NonPositiveParameter, "ultradiscrete parameters A, B must be positive");
  }
  if (field.X.size() != field.Y.size()) {
    throw Error(ErrorCode::WindowTooSmall, "X and Y must have the same length");
  }
  for (double eps : epsilons) {
    if (!(eps > 0)) throw Error(ErrorCode::NonPositiveEpsilon, "epsilon must be positive");
  }

  UDLimitReport report;
  for (double eps : epsilons) {
    double worst = 0;
    for (std::size_t n = 0; n < field.X.size(); ++n) {
      const auto tropical = tropical_site(field.X[n], field.Y[n], field.A, field.B);
      const auto discrete = gkdv_site_log(field.X[n], field.Y[n], field.A, field.B, eps);
      worst = std::max({worst, std::abs(discrete.first - tropical.first),
                        std::abs(discrete.second - tropical.second)});
    }
    if (!report.entries.empty() && !(worst < report.entries.back().max_deviation)) {
      report.strictly_decreasing = false;
    }
    report.entries.push_back({eps, worst});
  }
  return report;
}

SitePair<std::vector<double>> shift_to_uv(const UDField& field) {
  SitePair<std::vector<double>> out;
  out.first.reserve(field.X.size());
  out.second.reserve(field.Y.size());
  for (double x : field.X) out.first.push_back(x + field.A);
  for (double y : field.Y) out.second.push_back(y + field.B);
  return out;
}

UDField ud_field_from_bbsc(const BBSCState& state) {
  if (!state.c_carrier) {
    throw Error(ErrorCode::InconsistentCapacities, "ultradiscrete field needs a finite carrier capacity");
  }
  const auto sw = bbsc_sweep(state);
  UDField field;
  field.A = static_cast<double>(state.c_box);
  field.B = static_cast<double>(*state.c_carrier);
  for (std::size_t n = 0; n < sw.carrier.size(); ++n) {
    const long u = n < state.u.size() ? state.u[n] : 0;
    field.X.push_back(static_cast<double>(u) - field.A);
    field.Y.push_back(static_cast<double>(sw.carrier[n]) - field.B);
  }
  return field;
}

const char* to_string(CapacityOrdering ordering) {
  switch (ordering) {
    case CapacityOrdering::BoxGreater: return "B_gt_C";
    case CapacityOrdering::Equal: return "B_eq_C";
    case CapacityOrdering::CarrierGreater: return "B_lt_C";
  }
  return "unknown";
}

CapacityOrdering param_correspondence(const SystemParams& params) {
  // C_B = -eps log alpha and C_C = -eps log beta, so beta > alpha iff C_B > C_C.
  if (params.beta() > params.alpha()) return CapacityOrdering::BoxGreater;
  if (params.beta() < params.alpha()) return CapacityOrdering::CarrierGreater;
  return CapacityOrdering::Equal;
}

}  // namespace soliton
