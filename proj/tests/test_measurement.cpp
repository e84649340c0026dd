#include <doctest.h>

#include <cmath>

#include "soliton/measurement.hpp"
#include "soliton/solitons.hpp"

using namespace soliton;

namespace {

const SystemParams kRef(Rat(5, 6), Rat(14, 15));

// Double evolution from the sampled t = 0 slice on n in [-30, 90].
FloatField simulate(const SystemParams& params, const SolitonSpec& spec, long steps) {
  const TauSampler sampler(params, spec);
  std::vector<double> x0;
  for (const auto& v : sampler.x_row(0, -30, 90)) x0.push_back(v.to_double());
  return to_float_field(evolve_gkdv<double>(x0, -30, 0, steps, params));
}

// x = 1 - depth * exp(-(n - c - v t)^2 / 4).
FloatField gaussian_field(double v, double c, double depth, long steps) {
  FloatField f{-20, 0, {}};
  for (long t = 0; t <= steps; ++t) {
    std::vector<double> row;
    for (long n = -20; n <= 60; ++n) {
      const double z = static_cast<double>(n) - c - v * static_cast<double>(t);
      row.push_back(1.0 - depth * std::exp(-z * z / 4));
    }
    f.rows.push_back(std::move(row));
  }
  return f;
}

}  // namespace

TEST_CASE("trough finder") {
  const std::vector<double> row{1, 0.9, 0.5, 0.9, 1, 1, 0.99999, 1};
  const auto troughs = find_troughs(row, 10, 3, 1e-3);
  REQUIRE(troughs.size() == 1);
  CHECK(troughs[0].position == doctest::Approx(12.0));
  CHECK(troughs[0].t == 3);
  CHECK(troughs[0].depth == doctest::Approx(0.5));

  const std::vector<double> skew{1, 0.6, 0.5, 0.8, 1};
  const auto s = find_troughs(skew, 0, 0, 1e-3);
  REQUIRE(s.size() == 1);
  CHECK(s[0].position > 1.5);
  CHECK(s[0].position < 2.0);
  CHECK(s[0].depth >= 0.5);
}

TEST_CASE("tracking a synthetic unit-speed trough") {
  const auto tracks = track_troughs(gaussian_field(1.0, 0.0, 0.4, 30));
  REQUIRE(tracks.size() == 1);
  CHECK(measure_velocity(tracks[0]) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(tracks[0].depth == doctest::Approx(0.4).epsilon(1e-3));
  CHECK(tracks[0].samples.size() == 31);
}

TEST_CASE("empty and flat fields") {
  CHECK_THROWS_AS(track_troughs(FloatField{}), Error);
  FloatField flat{0, 0, {std::vector<double>(10, 1.0), std::vector<double>(10, 1.0)}};
  CHECK(track_troughs(flat).empty());
  CHECK(measure_amplitude(flat.rows[0]) == 0.0);
  CHECK_THROWS_AS(measure_amplitude(std::vector<double>{}), Error);
  CHECK(jump_for_speed(0.5) == 2.0);
  CHECK(jump_for_speed(1.6) == 4.0);
}

TEST_CASE("one-soliton tracks match the closed forms") {
  for (const Soliton& s : {Soliton{Rat(2, 15), Rat(-1, 6)}, Soliton{Rat(1, 30), Rat(-1, 30)}}) {
    const auto field = simulate(kRef, {{s}}, 60);
    const auto tracks = track_troughs(field);
    REQUIRE(tracks.size() == 1);
    CHECK(std::abs(measure_velocity(tracks[0]) - velocity(kRef, s.p)) < 0.01);
    CHECK(std::abs(tracks[0].depth - amplitude(kRef, s.p)) < 0.005);

    // Row amplitude at the time whose trough sits closest to a lattice site.
    std::size_t best = 0;
    double offset = 1;
    for (std::size_t i = 0; i < tracks[0].samples.size(); ++i) {
      const double pos = tracks[0].samples[i].position;
      const double d = std::abs(pos - std::round(pos));
      if (d < offset) {
        offset = d;
        best = i;
      }
    }
    const auto t = static_cast<std::size_t>(tracks[0].samples[best].t);
    CHECK(std::abs(measure_amplitude(field.rows[t]) - amplitude(kRef, s.p)) < 0.005);
  }
}

TEST_CASE("two-soliton collision: overtaking by the shallower soliton") {
  const SolitonSpec spec{{{Rat(2, 15), Rat(-1, 6)}, {Rat(1, 30), Rat(-1, 30)}}};
  const auto tracks = track_troughs(simulate(kRef, translate_origin(kRef, spec, -30, -30), 60));
  REQUIRE(tracks.size() == 2);
  const auto report = overtake_report(tracks);
  CHECK(report.crossing);
  CHECK(report.anomaly == Anomaly::SmallerFaster);
  const std::size_t smaller = report.tracks[0].amplitude < report.tracks[1].amplitude ? 0 : 1;
  CHECK(report.final_leader == smaller);
  CHECK(report.tracks[smaller].speed > report.tracks[1 - smaller].speed);
  CHECK(overtake_report_json(report).find("\"anomaly\": \"smaller_faster\"") != std::string::npos);
}

TEST_CASE("swapped parameters: the deeper soliton is faster") {
  const SystemParams swapped(Rat(14, 15), Rat(5, 6));
  const Rat p1(2, 15);
  const Rat p2(1, 30);
  CHECK(velocity(swapped, p2) > velocity(swapped, p1));
  CHECK(amplitude(swapped, p2) > amplitude(swapped, p1));
  const SolitonSpec spec{{{p1, Rat(-1, 6)}, {p2, Rat(-1, 30)}}};
  const auto tracks = track_troughs(simulate(swapped, translate_origin(swapped, spec, -30, -30), 60));
  REQUIRE(tracks.size() == 2);
  CHECK(overtake_report(tracks).anomaly == Anomaly::None);
}

TEST_CASE("equal parameters: both troughs move at unit speed without crossing") {
  const SystemParams equal(Rat(5, 6), Rat(5, 6));
  const SolitonSpec spec{{{Rat(1, 15), Rat(-20)}, {Rat(1, 30), Rat(-1, 60)}}};
  const auto tracks = track_troughs(simulate(equal, spec, 60));
  REQUIRE(tracks.size() == 2);
  for (const auto& tr : tracks) CHECK(std::abs(measure_velocity(tr) - 1.0) < 1e-6);
  const auto report = overtake_report(tracks);
  CHECK_FALSE(report.crossing);
  CHECK(report.anomaly == Anomaly::None);
}

TEST_CASE("overtake report needs two tracks") {
  CHECK_THROWS_AS(overtake_report(std::vector<TroughTrack>{}), Error);
  CHECK_THROWS_AS(overtake_report(std::vector<ClusterTrack>(3)), Error);
}

TEST_CASE("box-ball cluster speeds") {
  const auto history = simulate_bbsc(parse_boxes("300010", 3, 1), 9);
  const auto tracks = detect_bbsc_solitons(history);
  REQUIRE(tracks.size() == 2);
  CHECK(tracks[0].amplitude == 3);
  CHECK(cluster_speed(tracks[0]) == Rat(1, 3));
  CHECK(tracks[1].amplitude == 1);
  CHECK(cluster_speed(tracks[1]) == Rat(1));

  const auto plain = detect_bbsc_solitons(simulate_bbsc(parse_boxes("11", 1, std::nullopt), 6));
  REQUIRE(plain.size() == 1);
  CHECK(cluster_speed(plain[0]) == Rat(2));

  auto mixed = history;
  mixed.back().c_box = 4;
  CHECK_THROWS_AS(detect_bbsc_solitons(mixed), Error);
  CHECK(detect_bbsc_solitons({}).empty());
}

TEST_CASE("box-ball overtaking with a small carrier") {
  // The single ball is faster than the three-ball cluster ahead of it.
  const auto history = simulate_bbsc(parse_boxes("1..3", 3, 1), 30);
  const auto tracks = detect_bbsc_solitons(history);
  REQUIRE(tracks.size() == 2);
  const auto report = overtake_report(tracks);
  CHECK(report.crossing);
  CHECK(report.anomaly == Anomaly::SmallerFaster);
}
