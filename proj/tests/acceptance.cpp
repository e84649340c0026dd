// Acceptance suite: one PASS/FAIL line per criterion. Exit status is nonzero if
// any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "oracle.hpp"
#include "soliton/boxball.hpp"
#include "soliton/measurement.hpp"
#include "soliton/solitons.hpp"

using namespace soliton;

namespace {

const SystemParams kRef(Rat(5, 6), Rat(14, 15));
const Soliton kP1{Rat(2, 15), Rat(-1, 6)};
const Soliton kP2{Rat(1, 30), Rat(-1, 30)};

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void criterion(int number, const char* title, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!o.pass) ++failures;
  std::printf("criterion %2d %s  %s: %s [%.2fs]\n", number, o.pass ? "PASS" : "FAIL", title, o.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(const char* format, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c, d);
  return buf;
}

FloatField simulate(const SystemParams& params, const SolitonSpec& spec, long n_lo, long n_hi, long steps) {
  const TauSampler sampler(params, spec);
  std::vector<double> x0;
  for (const auto& v : sampler.x_row(0, n_lo, n_hi)) x0.push_back(v.to_double());
  return to_float_field(evolve_gkdv<double>(x0, n_lo, 0, steps, params));
}

Outcome closed_velocity() {
  const double v1 = velocity(kRef, kP1.p);
  const double v2 = velocity(kRef, kP2.p);
  const bool ok = std::abs(v1 - 0.783) <= 1e-3 && std::abs(v2 - 0.723) <= 1e-3 &&
                  std::abs(v1 - std::log(8.0 / 3.0) / std::log(3.5)) <= 1e-12 &&
                  std::abs(v2 - std::log(4.5) / std::log(8.0)) <= 1e-12;
  return {ok, fmt("v(2/15)=%.6f (0.783), v(1/30)=%.6f (0.723), tol 1e-3", v1, v2)};
}

Outcome closed_amplitude() {
  const double w1 = amplitude(kRef, kP1.p);
  const double w2 = amplitude(kRef, kP2.p);
  const bool ok = std::abs(w1 - 0.363) <= 1e-3 && std::abs(w2 - 0.722) <= 1e-3;
  return {ok, fmt("W(2/15)=%.6f (0.363), W(1/30)=%.6f (0.722), tol 1e-3", w1, w2)};
}

Outcome exact_residual() {
  std::size_t zero = 0;
  std::size_t total = 0;
  for (const SolitonSpec& spec : {SolitonSpec{{kP1}}, SolitonSpec{{kP1, kP2}}}) {
    const TauSampler sampler(kRef, spec);
    for (long t = -20; t < 20; ++t) {
      for (long n = -20; n < 20; ++n) {
        const auto r = gkdv_residual(sampler, t, n);
        zero += r.first.is_zero() && r.second.is_zero() ? 1 : 0;
        ++total;
      }
    }
  }
  return {zero == total && total == 3200,
          "N=1,2 on 40x40: exact zero residual at " + std::to_string(zero) + "/" + std::to_string(total)};
}

Outcome overtaking() {
  // Free propagation on the literal window t in [0, 60].
  const auto tracks = track_troughs(simulate(kRef, {{kP1, kP2}}, -30, 90, 60));
  if (tracks.size() != 2) return {false, "expected 2 tracks, found " + std::to_string(tracks.size())};
  const auto& shallow = tracks[0].depth < tracks[1].depth ? tracks[0] : tracks[1];
  const auto& deep = tracks[0].depth < tracks[1].depth ? tracks[1] : tracks[0];
  const double v_s = measure_velocity(shallow);
  const double v_d = measure_velocity(deep);
  const bool measured = std::abs(v_s - 0.783) <= 0.01 && std::abs(v_d - 0.723) <= 0.01 &&
                        std::abs(shallow.depth - 0.363) <= 0.005 && std::abs(deep.depth - 0.722) <= 0.005;

  // Same solution with the origin moved by (-30, -30) so the window spans the collision.
  const auto moved = translate_origin(kRef, {{kP1, kP2}}, -30, -30);
  const auto report = overtake_report(track_troughs(simulate(kRef, moved, -30, 90, 60)));
  const bool anomaly = report.crossing && report.anomaly == Anomaly::SmallerFaster;
  return {measured && anomaly,
          fmt("v=%.4f,%.4f (0.783,0.723 +-0.01) W=%.4f,%.4f (0.363,0.722 +-0.005)", v_s, v_d, shallow.depth,
              deep.depth) +
              ", collision run: crossing=" + (report.crossing ? "yes" : "no") +
              ", anomaly=" + (report.anomaly == Anomaly::SmallerFaster ? "smaller_faster" : "none")};
}

Outcome degeneration() {
  const SystemParams equal(Rat(5, 6), Rat(5, 6));
  std::mt19937_64 rng(5);
  bool exchange = true;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Rat> x;
    for (int i = 0; i < 12; ++i) x.push_back(oracle::random_positive_rat(rng, 9, 7));
    const Rat inflow = oracle::random_positive_rat(rng, 9, 7);
    const auto sw = step_gkdv<Rat>(x, equal, inflow);
    for (std::size_t n = 0; n < x.size(); ++n) {
      exchange = exchange && sw.x_next[n] == sw.y[n];
      const Rat& y_next = n + 1 < x.size() ? sw.y[n + 1] : sw.y_out;
      exchange = exchange && y_next == x[n];
    }
  }
  const auto tracks =
      track_troughs(simulate(equal, {{{Rat(1, 15), Rat(-20)}, {Rat(1, 30), Rat(-1, 60)}}}, -30, 90, 60));
  double worst = 0;
  for (const auto& tr : tracks) worst = std::max(worst, std::abs(measure_velocity(tr) - 1.0));
  return {exchange && tracks.size() == 2 && worst <= 1e-6,
          std::string("exchange step exact: ") + (exchange ? "yes" : "no") + ", " + std::to_string(tracks.size()) +
              " tracks" + fmt(", max |speed-1| = %.2e (tol 1e-6)", worst)};
}

Outcome bbsc_speeds() {
  const auto initial = parse_boxes("300010", 3, 1);
  const auto history = simulate_bbsc(initial, 9);
  const auto tracks = detect_bbsc_solitons(history);
  bool conserved = true;
  for (const auto& s : simulate_bbsc(initial, 40)) conserved = conserved && s.ball_count() == 4;
  for (const auto& s : simulate_bbsc(parse_boxes("1..3", 3, 1), 40)) conserved = conserved && s.ball_count() == 4;
  if (tracks.size() != 2) return {false, "expected 2 clusters, found " + std::to_string(tracks.size())};
  const Rat s3 = cluster_speed(tracks[0].amplitude == 3 ? tracks[0] : tracks[1]);
  const Rat s1 = cluster_speed(tracks[0].amplitude == 1 ? tracks[0] : tracks[1]);
  return {s3 == Rat(1, 3) && s1 == Rat(1) && conserved,
          "C_B=3 C_C=1: speed(3 balls)=" + s3.to_string() + " speed(1 ball)=" + s1.to_string() +
              ", ball count conserved over 40 steps: " + (conserved ? "yes" : "no")};
}

Outcome ud_bridge() {
  const auto report = ud_limit_check(ud_field_from_bbsc(parse_boxes("300010", 3, 1)), {1.0, 1e-1, 1e-2, 1e-3});
  std::ostringstream os;
  for (const auto& e : report.entries) os << e.epsilon << ":" << fmt("%.3e", e.max_deviation) << ' ';
  os << "strictly decreasing=" << (report.strictly_decreasing ? "yes" : "no") << ", threshold 1e-2";
  return {report.strictly_decreasing && report.entries.back().max_deviation < 1e-2, os.str()};
}

KPParams random_kp(std::mt19937_64& rng, std::size_t order, bool constrained) {
  for (;;) {
    KPParams kp{oracle::random_rat(rng, 9, 4), oracle::random_rat(rng, 9, 4), oracle::random_rat(rng, 9, 4),
                oracle::random_rat(rng, 9, 4), {}};
    for (std::size_t i = 0; i < order; ++i) {
      const Rat p = oracle::random_rat(rng, 9, 5);
      const Rat q = constrained ? kp.a1 + kp.a2 - p : oracle::random_rat(rng, 9, 5);
      kp.triples.push_back({p, q, oracle::random_positive_rat(rng, 5, 3)});
    }
    try {
      validate_kp(kp);
      return kp;
    } catch (const Error&) {
    }
  }
}

Outcome kp_identities() {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<long> d(-4, 4);
  std::size_t zero = 0;
  std::size_t total = 0;
  for (std::size_t order = 1; order <= 2; ++order) {
    const auto kp = random_kp(rng, order, false);
    const auto reduced = random_kp(rng, order, true);
    for (int i = 0; i < 20; ++i) {
      const KPPoint pt{d(rng), d(rng), d(rng), d(rng)};
      const auto [r1, r2] = check_kp_bilinear(kp, pt);
      const auto [s1, s2] = check_kp_bilinear(reduced, pt);
      const bool ok = r1.is_zero() && r2.is_zero() && s1.is_zero() && s2.is_zero() &&
                      check_reduction(reduced, pt).is_zero();
      zero += ok ? 1 : 0;
      ++total;
    }
  }
  return {zero == total, "N=1,2: bilinear pair and reduction exactly zero at " + std::to_string(zero) + "/" +
                             std::to_string(total) + " points"};
}

Outcome monotonicity_scans() {
  std::ostringstream os;
  bool ok = true;
  for (const auto& [a, b] : {std::pair{Rat(5, 6), Rat(14, 15)}, std::pair{Rat(14, 15), Rat(5, 6)},
                             std::pair{Rat(5, 6), Rat(5, 6)}}) {
    const auto report = scan_monotonicity(SystemParams(a, b), 101);
    ok = ok && report.violations.empty();
    os << "(" << a << "," << b << ") violations=" << report.violations.size() << "; ";
  }

  std::mt19937_64 rng(0);
  std::uniform_int_distribution<long> step(1, 9999);
  std::size_t agree = 0;
  std::size_t total = 0;
  for (const auto& params : {SystemParams(Rat(14, 15), Rat(5, 6)), SystemParams(Rat(5, 6), Rat(14, 15))}) {
    const Rat width = p_interval(params);
    const int expected = params.alpha() > params.beta() ? 1 : -1;
    for (int i = 0; i < 100; ++i) {
      const Rat p = width * Rat(step(rng), 10000);
      const Rat q = width * Rat(step(rng), 10000);
      const double dv = velocity(params, p) - velocity(params, q);
      const double dw = amplitude(params, p) - amplitude(params, q);
      const int sv = std::abs(dv) <= 1e-12 ? 0 : (dv > 0 ? 1 : -1);
      const int sw = std::abs(dw) <= 1e-12 ? 0 : (dw > 0 ? 1 : -1);
      agree += sv == expected * sw ? 1 : 0;
      ++total;
    }
  }
  os << "sign relation " << agree << "/" << total;
  return {ok && agree == total, os.str()};
}

Outcome conservation() {
  std::size_t sites = 0;
  std::size_t exact = 0;
  auto check_field = [&](const LatticeField<Rat>& f) {
    for (std::size_t k = 0; k + 1 < f.x.size(); ++k) {
      for (std::size_t i = 0; i + 1 < f.x[k].size(); ++i) {
        exact += f.x[k + 1][i] * f.y[k][i + 1] == f.x[k][i] * f.y[k][i] ? 1 : 0;
        ++sites;
      }
    }
  };
  const std::vector<std::pair<SystemParams, SolitonSpec>> corpus{
      {kRef, {{kP1}}},
      {kRef, {{kP1, kP2}}},
      {SystemParams(Rat(14, 15), Rat(5, 6)), {{kP1, kP2}}},
      {SystemParams(Rat(5, 6), Rat(5, 6)), {{{Rat(1, 15), Rat(-20)}, {Rat(1, 30), Rat(-1, 60)}}}}};
  for (const auto& [params, spec] : corpus) {
    const TauSampler sampler(params, spec);
    check_field(evolve_gkdv<Rat>(sampler.x_row(0, -8, 8), -8, 0, 6, params));
  }
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Rat> x;
    for (int i = 0; i < 8; ++i) x.push_back(oracle::random_positive_rat(rng, 7, 5));
    const SystemParams params(Rat(1 + trial % 8, 10), Rat(9 - trial % 7, 10));
    check_field(evolve_gkdv<Rat>(x, 0, 0, 4, params));
  }

  std::size_t runs_ok = 0;
  for (int run = 0; run < 200; ++run) {
    const long cb = 1 + run % 4;
    const std::optional<long> cc = run % 4 == 3 ? std::nullopt : std::optional<long>(1 + run % 5);
    std::uniform_int_distribution<long> occ(0, cb);
    std::bernoulli_distribution filled(0.35);
    BBSCState s{{}, cb, cc};
    for (int n = 0; n < 24; ++n) s.u.push_back(filled(rng) ? occ(rng) : 0);
    const long balls = s.ball_count();
    bool ok = true;
    for (int t = 0; t < 20; ++t) {
      const auto sw = bbsc_sweep(s);
      for (long v : sw.carrier) ok = ok && v >= 0 && (!cc || v <= *cc);
      s = sw.next;
      ok = ok && s.ball_count() == balls;
      for (long u : s.u) ok = ok && u >= 0 && u <= cb;
    }
    runs_ok += ok ? 1 : 0;
  }
  return {exact == sites && runs_ok == 200, "product invariant exact at " + std::to_string(exact) + "/" +
                                                 std::to_string(sites) + " sites, box-ball runs ok " +
                                                 std::to_string(runs_ok) + "/200"};
}

}  // namespace

int main() {
  criterion(1, "closed-form velocity", closed_velocity);
  criterion(2, "closed-form amplitude", closed_amplitude);
  criterion(3, "exact solution property", exact_residual);
  criterion(4, "overtaking reproduction", overtaking);
  criterion(5, "alpha = beta degeneration", degeneration);
  criterion(6, "box-ball with carrier speeds", bbsc_speeds);
  criterion(7, "ultradiscrete limit", ud_bridge);
  criterion(8, "KP bilinear identities", kp_identities);
  criterion(9, "monotonicity scans", monotonicity_scans);
  criterion(10, "conservation", conservation);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
