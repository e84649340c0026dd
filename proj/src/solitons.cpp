#include "soliton/solitons.hpp"

#include <cmath>
#include <json.hpp>

#include "soliton/parallel.hpp"

namespace soliton {

namespace {

std::string index_text(std::size_t i) { return "soliton " + std::to_string(i); }

void check_p_range(const SystemParams& params, const Rat& p) {
  const Rat width = p_interval(params);
  if (width <= Rat(0)) {
    throw Error(ErrorCode::InvalidInterval, "alpha + beta must exceed 1");
  }
  if (p <= Rat(0) || p >= width) {
    throw Error(ErrorCode::POutOfRange,
                "p = " + p.to_string() + " outside (0, " + width.to_string() + ")");
  }
}

bool is_midpoint(const SystemParams& params, const Rat& p) {
  return p * Rat(2) == p_interval(params);
}

}  // namespace

Rat p_interval(const SystemParams& params) { return params.alpha() + params.beta() - Rat(1); }

Rat base_a(const SystemParams& params, const Rat& p) {
  return (params.beta() - p) / (p + Rat(1) - params.alpha());
}

Rat base_b(const SystemParams& params, const Rat& p) {
  return (p + Rat(1) - params.beta()) / (params.alpha() - p);
}

Rat factor_d(const SystemParams& params, const Rat& p) {
  return (-params.delta_cap() - p) / p;
}

std::vector<OneSolitonConstants> validate(const SystemParams& params, const SolitonSpec& spec) {
  const Rat width = p_interval(params);
  if (width <= Rat(0)) throw Error(ErrorCode::InvalidInterval, "alpha + beta must exceed 1");
  const Rat mid = width / Rat(2);

  std::vector<OneSolitonConstants> out;
  out.reserve(spec.size());
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const auto& [p, gamma] = spec.solitons[i];
    const long idx = static_cast<long>(i);
    if (p <= Rat(0) || p >= width) {
      throw Error(ErrorCode::POutOfRange, index_text(i) + ": p outside (0, alpha+beta-1)", idx);
    }
    if (p == mid) {
      throw Error(ErrorCode::DegenerateP, index_text(i) + ": p at the interval midpoint", idx);
    }
    if ((gamma * (p - mid)).sign() <= 0) {
      throw Error(ErrorCode::GammaSignCondition,
                  index_text(i) + ": gamma must have the sign of p - (alpha+beta-1)/2", idx);
    }
    for (std::size_t j = 0; j < i; ++j) {
      const Rat& pj = spec.solitons[j].p;
      if (pj == p) {
        throw Error(ErrorCode::DuplicateP, "solitons " + std::to_string(j) + " and " +
                                               std::to_string(i) + " share p",
                    static_cast<long>(j), idx);
      }
      if ((pj + p + params.delta_cap()).is_zero()) {
        throw Error(ErrorCode::DenominatorClash, "p_i + p_j + Delta vanishes for solitons " +
                                                     std::to_string(j) + " and " + std::to_string(i),
                    static_cast<long>(j), idx);
      }
    }
    out.push_back({base_a(params, p), base_b(params, p),
                   gamma / (Rat(2) * p + params.delta_cap()), factor_d(params, p)});
  }
  return out;
}

double velocity(const SystemParams& params, const Rat& p) {
  check_p_range(params, p);
  if (is_midpoint(params, p)) return 1.0;
  return -std::log(base_a(params, p).to_double()) / std::log(base_b(params, p).to_double());
}

double amplitude(const SystemParams& params, const Rat& p) {
  check_p_range(params, p);
  if (is_midpoint(params, p)) return 0.0;
  const double b = base_b(params, p).to_double();
  const double d = factor_d(params, p).to_double();
  const double bd = std::sqrt(b * d);
  const double trough = (1.0 + 1.0 / bd) * (1.0 + bd) /
                        ((1.0 + std::sqrt(d / b)) * (1.0 + std::sqrt(b / d)));
  return std::abs(trough - 1.0);
}

TauSampler::TauSampler(const SystemParams& params, const SolitonSpec& spec)
    : params_(params), spec_(spec), constants_(validate(params, spec)) {
  const std::size_t n = spec_.size();
  coupling_.assign(n, std::vector<Rat>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      coupling_[i][j] =
          spec_.solitons[i].gamma / (spec_.solitons[i].p + spec_.solitons[j].p + params_.delta_cap());
    }
  }
}

Rat TauSampler::tau(long t, long n, bool with_d) const {
  const std::size_t order = spec_.size();
  RatMatrix m = RatMatrix::identity(order);
  for (std::size_t i = 0; i < order; ++i) {
    const auto& k = constants_[i];
    Rat wave = pow(k.A, t) * pow(k.B, n);
    if (with_d) wave *= k.D;
    for (std::size_t j = 0; j < order; ++j) m(i, j) += coupling_[i][j] * wave;
  }
  return det(m);
}

Rat TauSampler::f(long t, long n) const { return tau(t, n, false); }
Rat TauSampler::g(long t, long n) const { return tau(t, n, true); }

SitePair<Rat> TauSampler::sample(long t, long n) const {
  const Rat f0 = f(t, n);
  const Rat g0 = g(t, n);
  const Rat fn = f(t, n + 1);
  const Rat gn = g(t, n + 1);
  const Rat ft = f(t + 1, n);
  const Rat gt = g(t + 1, n);
  if (f0.is_zero() || g0.is_zero() || fn.is_zero() || gt.is_zero()) {
    throw Error(ErrorCode::ZeroTau,
                "tau vanishes near (t, n) = (" + std::to_string(t) + ", " + std::to_string(n) + ")", t, n);
  }
  return {f0 * gn / (g0 * fn), g0 * ft / (f0 * gt)};
}

std::vector<Rat> TauSampler::x_row(long t, long n_lo, long n_hi) const {
  std::vector<Rat> row;
  row.reserve(static_cast<std::size_t>(std::max(0L, n_hi - n_lo + 1)));
  for (long n = n_lo; n <= n_hi; ++n) row.push_back(sample(t, n).first);
  return row;
}

LatticeField<Rat> TauSampler::field(long n_lo, long n_hi, long t_begin, long t_end) const {
  if (n_hi < n_lo || t_end < t_begin) throw Error(ErrorCode::WindowTooSmall, "empty sampling window");
  LatticeField<Rat> out;
  out.n_lo = n_lo;
  out.t0 = t_begin;
  const auto rows = static_cast<std::size_t>(t_end - t_begin + 1);
  out.x.resize(rows);
  out.y.resize(rows);
  parallel_for(rows, [&](std::size_t k) {
    const long t = t_begin + static_cast<long>(k);
    for (long n = n_lo; n <= n_hi; ++n) {
      auto [x, y] = sample(t, n);
      out.x[k].push_back(std::move(x));
      out.y[k].push_back(std::move(y));
    }
  });
  for (const auto& row : out.x) {
    if (std::abs(row.back().to_double() - 1.0) > escape_tolerance) out.escaped = true;
  }
  return out;
}

Rat tau_f(const SystemParams& params, const SolitonSpec& spec, long t, long n) {
  return TauSampler(params, spec).f(t, n);
}

Rat tau_g(const SystemParams& params, const SolitonSpec& spec, long t, long n) {
  return TauSampler(params, spec).g(t, n);
}

SitePair<Rat> sample_xy(const SystemParams& params, const SolitonSpec& spec, long t, long n) {
  return TauSampler(params, spec).sample(t, n);
}

SolitonSpec translate_origin(const SystemParams& params, const SolitonSpec& spec, long dt, long dn) {
  const auto constants = validate(params, spec);
  SolitonSpec out = spec;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    out.solitons[i].gamma *= pow(constants[i].A, dt) * pow(constants[i].B, dn);
  }
  return out;
}

SitePair<Rat> gkdv_residual(const TauSampler& sampler, long t, long n) {
  const auto here = sampler.sample(t, n);
  const auto c = GkdvCoeffs<Rat>::from(sampler.params());
  const auto [x_next, y_next] = gkdv_site(here.first, here.second, c, n);
  return {sampler.sample(t + 1, n).first - x_next, sampler.sample(t, n + 1).second - y_next};
}

// ---- KP ---------------------------------------------------------------------

void validate_kp(const KPParams& kp) {
  std::vector<Rat> values{kp.a1, kp.a2, kp.b, kp.c};
  for (const auto& tr : kp.triples) {
    values.push_back(tr.p);
    values.push_back(tr.q);
  }
  for (std::size_t i = 4; i < values.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (values[i] == values[j]) {
        throw Error(ErrorCode::DenominatorClash, "KP parameters must be pairwise distinct (value " +
                                                     values[i].to_string() + " repeats)",
                    static_cast<long>(j), static_cast<long>(i));
      }
    }
  }
}

Rat kp_tau(const KPParams& kp, const KPPoint& pt) {
  validate_kp(kp);
  const std::size_t order = kp.triples.size();
  RatMatrix m = RatMatrix::identity(order);
  for (std::size_t i = 0; i < order; ++i) {
    const auto& [p, q, gamma] = kp.triples[i];
    const Rat wave = pow((q - kp.a1) / (p - kp.a1), pt.l1) * pow((q - kp.a2) / (p - kp.a2), pt.l2) *
                     pow((q - kp.b) / (p - kp.b), pt.t) * pow((q - kp.c) / (p - kp.c), pt.n);
    for (std::size_t j = 0; j < order; ++j) m(i, j) += gamma / (p - kp.triples[j].q) * wave;
  }
  return det(m);
}

SitePair<Rat> check_kp_bilinear(const KPParams& kp, const KPPoint& pt) {
  auto tau = [&](long dl1, long dl2, long dt, long dn) {
    return kp_tau(kp, {pt.l1 + dl1, pt.l2 + dl2, pt.t + dt, pt.n + dn});
  };
  const Rat t_n = tau(0, 0, 0, 1);
  const Rat t_t = tau(0, 0, 1, 0);
  const Rat t_tn = tau(0, 0, 1, 1);
  const Rat first = (kp.a1 - kp.b) * tau(1, 0, 1, 0) * t_n + (kp.b - kp.c) * tau(1, 0, 0, 0) * t_tn +
                    (kp.c - kp.a1) * tau(1, 0, 0, 1) * t_t;
  const Rat second = (kp.a2 - kp.b) * tau(0, 1, 1, 0) * t_n + (kp.b - kp.c) * tau(0, 1, 0, 0) * t_tn +
                     (kp.c - kp.a2) * tau(0, 1, 0, 1) * t_t;
  return {first, second};
}

Rat check_reduction(const KPParams& kp, const KPPoint& pt) {
  for (std::size_t i = 0; i < kp.triples.size(); ++i) {
    if (kp.triples[i].q != kp.a1 + kp.a2 - kp.triples[i].p) {
      throw Error(ErrorCode::ConstraintViolated, "q_i != a1 + a2 - p_i", static_cast<long>(i));
    }
  }
  return kp_tau(kp, {pt.l1 + 1, pt.l2 + 1, pt.t, pt.n}) - kp_tau(kp, pt);
}

// ---- Scan -------------------------------------------------------------------

ScanReport scan_monotonicity(const SystemParams& params, int grid_size) {
  const Rat width = p_interval(params);
  if (width <= Rat(0)) throw Error(ErrorCode::InvalidInterval, "alpha + beta must exceed 1");
  if (grid_size < 3) throw Error(ErrorCode::ParamOutOfRange, "grid size must be at least 3");

  const auto count = static_cast<std::size_t>(grid_size);
  std::vector<Rat> grid(count);
  ScanReport report{params.alpha(), params.beta(), grid_size, {}, {}, {}, {}, std::nullopt, 0.0};
  report.p.resize(count);
  report.v.resize(count);
  report.w.resize(count);
  parallel_for(count, [&](std::size_t k) {
    grid[k] = width * Rat(static_cast<long>(k) + 1, grid_size + 1);
    report.p[k] = grid[k].to_double();
    report.v[k] = velocity(params, grid[k]);
    report.w[k] = amplitude(params, grid[k]);
  });

  const Rat mid = width / Rat(2);
  const int v_trend = params.alpha() < params.beta() ? 1 : (params.beta() < params.alpha() ? -1 : 0);
  auto flag = [&](const char* quantity, std::size_t i, const std::vector<double>& values) {
    report.violations.push_back(
        {quantity, i, report.p[i], report.p[i + 1], values[i], values[i + 1]});
  };
  constexpr double kConstantTolerance = 1e-12;

  for (std::size_t i = 0; i + 1 < count; ++i) {
    const bool left = grid[i + 1] <= mid;
    const bool right = grid[i] >= mid;
    if (!left && !right) continue;  // pair straddles the midpoint

    // W falls towards the midpoint and rises after it.
    const bool w_ok = left ? report.w[i + 1] < report.w[i] : report.w[i + 1] > report.w[i];
    if (!w_ok) flag("w", i, report.w);

    bool v_ok = true;
    if (v_trend == 0) {
      v_ok = std::abs(report.v[i] - 1.0) <= kConstantTolerance &&
             std::abs(report.v[i + 1] - 1.0) <= kConstantTolerance;
    } else {
      const bool rising = left ? v_trend > 0 : v_trend < 0;
      v_ok = rising ? report.v[i + 1] > report.v[i] : report.v[i + 1] < report.v[i];
    }
    if (!v_ok) flag("v", i, report.v);
  }

  std::size_t w_best = 0;
  std::size_t v_best = 0;
  for (std::size_t i = 1; i < count; ++i) {
    if (report.w[i] < report.w[w_best]) w_best = i;
    if (v_trend > 0 ? report.v[i] > report.v[v_best] : report.v[i] < report.v[v_best]) v_best = i;
  }
  report.w_extremum_p = report.p[w_best];
  if (v_trend != 0) report.v_extremum_p = report.p[v_best];
  return report;
}

std::string scan_report_json(const ScanReport& report) {
  nlohmann::json violations = nlohmann::json::array();
  for (const auto& v : report.violations) {
    violations.push_back({{"quantity", v.quantity},
                          {"index", v.index},
                          {"p_left", v.p_left},
                          {"p_right", v.p_right},
                          {"value_left", v.value_left},
                          {"value_right", v.value_right}});
  }
  nlohmann::json j = {{"alpha", report.alpha.to_string()},
                      {"beta", report.beta.to_string()},
                      {"grid", report.grid},
                      {"violations", violations},
                      {"v_extremum_p", nullptr},
                      {"w_extremum_p", report.w_extremum_p}};
  if (report.v_extremum_p) j["v_extremum_p"] = *report.v_extremum_p;
  return j.dump(2);
}

}  // namespace soliton
