#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <fstream>
#include <json.hpp>
#include <random>
#include <sstream>

#include "soliton/boxball.hpp"
#include "soliton/measurement.hpp"
#include "soliton/parallel.hpp"
#include "soliton/solitons.hpp"

namespace soliton::cli {

namespace {

using nlohmann::json;

struct Range {
  long lo = 0;
  long hi = 0;
};

Range parse_range(const std::string& text, const char* flag) {
  const auto colon = text.find(':', 1);
  if (colon == std::string::npos) {
    throw Error(ErrorCode::ParseError, std::string(flag) + " expects lo:hi, got '" + text + "'");
  }
  Range r;
  try {
    std::size_t used = 0;
    r.lo = std::stol(text.substr(0, colon), &used);
    if (used != colon) throw std::invalid_argument(text);
    const std::string hi = text.substr(colon + 1);
    r.hi = std::stol(hi, &used);
    if (used != hi.size()) throw std::invalid_argument(text);
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::ParseError, std::string(flag) + " expects integers lo:hi, got '" + text + "'");
  }
  if (r.hi < r.lo) throw Error(ErrorCode::WindowTooSmall, std::string(flag) + " range is empty: " + text);
  return r;
}

Soliton parse_soliton(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw Error(ErrorCode::ParseError, "--soliton expects p:gamma, got '" + text + "'");
  return {Rat::parse(text.substr(0, colon)), Rat::parse(text.substr(colon + 1))};
}

std::optional<long> parse_carrier(const std::string& text) {
  if (text == "inf") return std::nullopt;
  const Rat value = Rat::parse(text);
  if (value.denominator() != 1) throw Error(ErrorCode::ParseError, "--cc must be an integer or inf");
  return value.numerator().get_si();
}

struct Options {
  std::string alpha;
  std::string beta;
  std::vector<std::string> solitons;
  std::string n_range = "-30:90";
  std::string t_range = "0:60";
  std::string out;
  std::string format = "csv";
  int precision = 12;
  bool rational = false;
  long cb = 1;
  std::string cc = "inf";
  std::string init;
  long steps = 9;
  std::string render = "ascii";
  int grid = 101;
  std::uint64_t seed = 0;
  std::string suite = "all";

  SystemParams params() const { return SystemParams(Rat::parse(alpha), Rat::parse(beta)); }

  SolitonSpec spec() const {
    SolitonSpec s;
    for (const auto& text : solitons) s.solitons.push_back(parse_soliton(text));
    return s;
  }

  BBSCState boxes() const { return parse_boxes(init, cb, parse_carrier(cc)); }
};

class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw Error(ErrorCode::ParseError, "cannot open output file " + path);
      stream_ = &file_;
    }
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

void add_params(CLI::App* cmd, Options& o) {
  cmd->add_option("--alpha", o.alpha, "alpha in (0,1) as p/q or decimal")->required();
  cmd->add_option("--beta", o.beta, "beta in (0,1) as p/q or decimal")->required();
}

void add_solitons(CLI::App* cmd, Options& o) {
  cmd->add_option("--soliton", o.solitons, "soliton parameters p:gamma (repeatable)");
}

void add_window(CLI::App* cmd, Options& o) {
  cmd->add_option("--n", o.n_range, "site window lo:hi");
  cmd->add_option("--t", o.t_range, "time range a:b");
}

void add_output(CLI::App* cmd, Options& o, const std::vector<std::string>& formats) {
  cmd->add_option("--out", o.out, "output file (default stdout)");
  cmd->add_option("--format", o.format, "output format")->check(CLI::IsMember(formats));
  cmd->add_option("--precision", o.precision, "digits for floating output")->check(CLI::PositiveNumber);
}

void add_boxes(CLI::App* cmd, Options& o, bool required) {
  auto* init = cmd->add_option("--init", o.init, "initial occupancies, e.g. 300010");
  if (required) init->required();
  cmd->add_option("--cb", o.cb, "box capacity");
  cmd->add_option("--cc", o.cc, "carrier capacity or inf");
  cmd->add_option("--steps", o.steps, "time steps")->check(CLI::NonNegativeNumber);
}

json field_json(const LatticeField<Rat>& field, bool exact, int precision) {
  auto cell = [&](const Rat& v) -> json {
    if (exact) return v.to_string();
    std::ostringstream os;
    os.precision(precision);
    os << v.to_double();
    return json::parse(os.str());
  };
  json x = json::array();
  json y = json::array();
  for (std::size_t k = 0; k < field.x.size(); ++k) {
    json xr = json::array();
    json yr = json::array();
    for (std::size_t i = 0; i < field.x[k].size(); ++i) {
      xr.push_back(cell(field.x[k][i]));
      yr.push_back(cell(field.y[k][i]));
    }
    x.push_back(std::move(xr));
    y.push_back(std::move(yr));
  }
  return {{"n_lo", field.n_lo}, {"t0", field.t0}, {"x", x}, {"y", y}};
}

json field_json(const LatticeField<double>& field, int precision) {
  json x = json::array();
  json y = json::array();
  auto cell = [&](double v) {
    std::ostringstream os;
    os.precision(precision);
    os << v;
    return json::parse(os.str());
  };
  for (std::size_t k = 0; k < field.x.size(); ++k) {
    json xr = json::array();
    json yr = json::array();
    for (std::size_t i = 0; i < field.x[k].size(); ++i) {
      xr.push_back(cell(field.x[k][i]));
      yr.push_back(cell(field.y[k][i]));
    }
    x.push_back(std::move(xr));
    y.push_back(std::move(yr));
  }
  return {{"n_lo", field.n_lo}, {"t0", field.t0}, {"x", x}, {"y", y}};
}

void warn_escape(bool escaped, std::ostream& err) {
  if (escaped) err << "warning: field left the window (|x - 1| > 1e-6 at the right edge)\n";
}

int cmd_exact(const Options& o, std::ostream& out, std::ostream& err) {
  const auto n = parse_range(o.n_range, "--n");
  const auto t = parse_range(o.t_range, "--t");
  const TauSampler sampler(o.params(), o.spec());
  const auto field = sampler.field(n.lo, n.hi, t.lo, t.hi);
  warn_escape(field.escaped, err);
  Output sink(o.out, out);
  if (o.format == "json") {
    *sink << field_json(field, o.rational, o.precision).dump() << '\n';
  } else {
    write_field_csv(*sink, field, o.rational, o.precision);
  }
  return kOk;
}

int cmd_evolve(const Options& o, std::ostream& out, std::ostream& err) {
  const auto n = parse_range(o.n_range, "--n");
  const auto t = parse_range(o.t_range, "--t");
  const auto params = o.params();
  const TauSampler sampler(params, o.spec());
  const auto x0 = sampler.x_row(t.lo, n.lo, n.hi);
  Output sink(o.out, out);
  if (o.rational) {
    const auto field = evolve_gkdv<Rat>(x0, n.lo, t.lo, t.hi - t.lo, params);
    warn_escape(field.escaped, err);
    if (o.format == "json") {
      *sink << field_json(field, true, o.precision).dump() << '\n';
    } else {
      write_field_csv(*sink, field, true, o.precision);
    }
    return kOk;
  }
  std::vector<double> start;
  for (const auto& v : x0) start.push_back(v.to_double());
  const auto field = evolve_gkdv<double>(start, n.lo, t.lo, t.hi - t.lo, params);
  warn_escape(field.escaped, err);
  if (o.format == "json") {
    *sink << field_json(field, o.precision).dump() << '\n';
  } else {
    write_field_csv(*sink, field, o.precision);
  }
  return kOk;
}

int cmd_bbsc(const Options& o, std::ostream& out, std::ostream& err) {
  const auto history = simulate_bbsc(o.boxes(), o.steps);
  Output sink(o.out, out);
  if (o.render == "ascii" && o.cb <= 9) {
    render_ascii(*sink, history);
  } else {
    if (o.render == "ascii") err << "note: C_B > 9, writing CSV instead of ASCII\n";
    write_bbsc_csv(*sink, history);
  }
  return kOk;
}

json report_json(const OvertakeReport& report) { return json::parse(overtake_report_json(report)); }

int cmd_analyze(const Options& o, std::ostream& out, std::ostream& err) {
  json doc;
  if (!o.init.empty()) {
    const auto history = simulate_bbsc(o.boxes(), o.steps);
    const auto tracks = detect_bbsc_solitons(history);
    json list = json::array();
    for (const auto& tr : tracks) {
      json entry = {{"amplitude", tr.amplitude}, {"first_t", tr.first_t()}, {"last_t", tr.last_t()}};
      if (tr.samples.size() > 1) entry["speed"] = cluster_speed(tr).to_string();
      list.push_back(std::move(entry));
    }
    doc = {{"balls", history.front().ball_count()}, {"tracks", list}};
    if (tracks.size() == 2) doc["overtake"] = report_json(overtake_report(tracks));
  } else {
    const auto n = parse_range(o.n_range, "--n");
    const auto t = parse_range(o.t_range, "--t");
    const auto params = o.params();
    const auto spec = o.spec();
    const TauSampler sampler(params, spec);
    json closed = json::array();
    double v_max = 0;
    for (const auto& s : spec.solitons) {
      const double v = velocity(params, s.p);
      v_max = std::max(v_max, std::abs(v));
      closed.push_back({{"p", s.p.to_string()},
                        {"gamma", s.gamma.to_string()},
                        {"velocity", v},
                        {"amplitude", amplitude(params, s.p)}});
    }
    std::vector<double> start;
    for (const auto& v : sampler.x_row(t.lo, n.lo, n.hi)) start.push_back(v.to_double());
    const auto field = evolve_gkdv<double>(start, n.lo, t.lo, t.hi - t.lo, params);
    warn_escape(field.escaped, err);
    TrackerOptions opts;
    opts.max_jump = jump_for_speed(v_max);
    const auto tracks = track_troughs(to_float_field(field), opts);
    json measured = json::array();
    for (const auto& tr : tracks) {
      json entry = {{"amplitude", tr.depth}, {"first_t", tr.first_t()}, {"last_t", tr.last_t()}};
      try {
        entry["speed"] = measure_velocity(tr);
      } catch (const Error&) {
        entry["speed"] = nullptr;
      }
      measured.push_back(std::move(entry));
    }
    doc = {{"alpha", params.alpha().to_string()},
           {"beta", params.beta().to_string()},
           {"closed_form", closed},
           {"tracks", measured},
           {"escaped", field.escaped}};
    if (tracks.size() == 2) doc["overtake"] = report_json(overtake_report(tracks));
  }
  Output sink(o.out, out);
  *sink << doc.dump(2) << '\n';
  return kOk;
}

int cmd_scan(const Options& o, std::ostream& out, std::ostream&) {
  const auto report = scan_monotonicity(o.params(), o.grid);
  Output sink(o.out, out);
  *sink << scan_report_json(report) << '\n';
  return report.violations.empty() ? kOk : kVerifyFailed;
}

// ---- verify -------------------------------------------------------------------

struct SuiteResult {
  std::string name;
  bool passed;
  std::string summary;
};

SuiteResult verify_exactness(const Options& o) {
  const TauSampler sampler(o.params(), o.spec());
  const long g = o.grid;
  const auto total = static_cast<std::size_t>(g * g);
  std::atomic<std::size_t> zero{0};
  parallel_for(total, [&](std::size_t i) {
    const long t = static_cast<long>(i) / g - g / 2;
    const long n = static_cast<long>(i) % g - g / 2;
    const auto r = gkdv_residual(sampler, t, n);
    if (r.first.is_zero() && r.second.is_zero()) ++zero;
  });
  return {"exactness", zero == total,
          "residual 0 at " + std::to_string(zero.load()) + "/" + std::to_string(total) + " points"};
}

KPParams random_kp(std::mt19937_64& rng, std::size_t order, bool constrained) {
  std::uniform_int_distribution<long> num(-9, 9);
  std::uniform_int_distribution<long> den(1, 5);
  auto draw = [&] { return Rat(num(rng), den(rng)); };
  for (;;) {
    KPParams kp{draw(), draw(), draw(), draw(), {}};
    for (std::size_t i = 0; i < order; ++i) {
      const Rat p = draw();
      const Rat q = constrained ? kp.a1 + kp.a2 - p : draw();
      Rat gamma = draw();
      if (gamma.is_zero()) gamma = Rat(1);
      kp.triples.push_back({p, q, gamma});
    }
    try {
      validate_kp(kp);
      return kp;
    } catch (const Error&) {
    }
  }
}

KPPoint random_point(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> d(-4, 4);
  return {d(rng), d(rng), d(rng), d(rng)};
}

SuiteResult verify_kp(const Options& o, bool reduction) {
  std::mt19937_64 rng(o.seed + (reduction ? 1 : 0));
  std::size_t zero = 0;
  std::size_t total = 0;
  for (std::size_t order = 1; order <= 2; ++order) {
    const auto kp = random_kp(rng, order, reduction);
    for (int i = 0; i < 20; ++i) {
      const auto pt = random_point(rng);
      bool ok = false;
      if (reduction) {
        ok = check_reduction(kp, pt).is_zero();
      } else {
        const auto [r1, r2] = check_kp_bilinear(kp, pt);
        ok = r1.is_zero() && r2.is_zero();
      }
      zero += ok ? 1 : 0;
      ++total;
    }
  }
  return {reduction ? "reduction" : "kp", zero == total,
          "residual 0 at " + std::to_string(zero) + "/" + std::to_string(total) + " points"};
}

SuiteResult verify_ud(const Options& o) {
  const BBSCState state = o.init.empty() ? parse_boxes("300010", 3, 1) : o.boxes();
  const auto report = ud_limit_check(ud_field_from_bbsc(state), {1.0, 1e-1, 1e-2, 1e-3});
  std::ostringstream summary;
  summary << "max deviation";
  for (const auto& e : report.entries) summary << ' ' << e.epsilon << ":" << e.max_deviation;
  const bool ok = report.strictly_decreasing && report.entries.back().max_deviation < 1e-2;
  return {"ud", ok, summary.str()};
}

int cmd_verify(const Options& o, std::ostream& out, std::ostream&) {
  std::vector<SuiteResult> results;
  const bool all = o.suite == "all";
  if (all || o.suite == "exactness") results.push_back(verify_exactness(o));
  if (all || o.suite == "kp") results.push_back(verify_kp(o, false));
  if (all || o.suite == "reduction") results.push_back(verify_kp(o, true));
  if (all || o.suite == "ud") results.push_back(verify_ud(o));
  bool ok = true;
  for (const auto& r : results) {
    out << r.name << ": " << (r.passed ? "ok" : "FAILED") << ", " << r.summary << '\n';
    ok = ok && r.passed;
  }
  return ok ? kOk : kVerifyFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("Generalized discrete KdV solitons and the box-ball system with carrier", "soliton_lab");
  app.require_subcommand(1);
  Options o;

  auto* exact = app.add_subcommand("exact", "write the tau-sampled N-soliton field");
  add_params(exact, o);
  add_solitons(exact, o);
  add_window(exact, o);
  add_output(exact, o, {"csv", "json"});
  exact->add_flag("--rational", o.rational, "write exact p/q values");

  auto* evolve = app.add_subcommand("evolve", "step the sampled t0 slice with the lattice map");
  add_params(evolve, o);
  add_solitons(evolve, o);
  add_window(evolve, o);
  add_output(evolve, o, {"csv", "json"});
  evolve->add_flag("--rational", o.rational, "evolve in exact arithmetic");

  auto* bbsc = app.add_subcommand("bbsc", "simulate the box-ball system with carrier");
  add_boxes(bbsc, o, true);
  bbsc->add_option("--render", o.render, "ascii or csv")->check(CLI::IsMember({"ascii", "csv"}));
  bbsc->add_option("--out", o.out, "output file (default stdout)");

  auto* analyze = app.add_subcommand("analyze", "closed-form and measured velocities and amplitudes");
  analyze->add_option("--alpha", o.alpha, "alpha in (0,1)");
  analyze->add_option("--beta", o.beta, "beta in (0,1)");
  add_solitons(analyze, o);
  add_window(analyze, o);
  add_boxes(analyze, o, false);
  analyze->add_option("--out", o.out, "output file (default stdout)");

  auto* scan = app.add_subcommand("scan", "check velocity/amplitude monotonicity over p");
  add_params(scan, o);
  scan->add_option("--grid", o.grid, "interior grid points")->check(CLI::PositiveNumber);
  scan->add_option("--out", o.out, "output file (default stdout)");

  auto* verify = app.add_subcommand("verify", "run exact verification suites");
  verify->add_option("suite", o.suite, "exactness, kp, reduction, ud or all")
      ->check(CLI::IsMember({"exactness", "kp", "reduction", "ud", "all"}));
  verify->add_option("--alpha", o.alpha, "alpha in (0,1)")->default_str("5/6");
  verify->add_option("--beta", o.beta, "beta in (0,1)")->default_str("14/15");
  add_solitons(verify, o);
  verify->add_option("--grid", o.grid, "exactness grid side")->check(CLI::PositiveNumber);
  verify->add_option("--rng-seed", o.seed, "seed for randomized suites");
  add_boxes(verify, o, false);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalid;
  }

  try {
    if (*exact) return cmd_exact(o, out, err);
    if (*evolve) return cmd_evolve(o, out, err);
    if (*bbsc) return cmd_bbsc(o, out, err);
    if (*analyze) {
      if (o.init.empty() && (o.alpha.empty() || o.beta.empty())) {
        err << "error: analyze needs --alpha and --beta, or --init for a box-ball run\n";
        return kInvalid;
      }
      return cmd_analyze(o, out, err);
    }
    if (*scan) return cmd_scan(o, out, err);
    if (*verify) {
      if (o.alpha.empty()) o.alpha = "5/6";
      if (o.beta.empty()) o.beta = "14/15";
      if (o.solitons.empty() && (o.suite == "exactness" || o.suite == "all")) {
        o.solitons = {"2/15:-1/6", "1/30:-1/30"};
      }
      if (verify->count("--grid") == 0) o.grid = 20;
      return cmd_verify(o, out, err);
    }
  } catch (const Error& e) {
    err << "error: " << e.what();
    if (e.site()) err << " (site " << *e.site() << (e.other() ? ", " + std::to_string(*e.other()) : "") << ")";
    err << '\n';
    return kInvalid;
  }
  return kInvalid;
}

}  // namespace soliton::cli
