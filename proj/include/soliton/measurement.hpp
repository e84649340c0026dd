#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "soliton/boxball.hpp"
#include "soliton/lattice.hpp"

namespace soliton {

/// Float-valued x history: rows[k] is x^{t0+k} over n in [n_lo, ...].
struct FloatField {
  long n_lo = 0;
  long t0 = 0;
  std::vector<std::vector<double>> rows;
};

FloatField to_float_field(const LatticeField<Rat>& field);
FloatField to_float_field(const LatticeField<double>& field);

struct TrackerOptions {
  double threshold = 1e-3;             // minima must lie below 1 - threshold
  double max_jump = 2.0;               // per-step linking radius, in lattice units
  double collision_separation = 5.0;   // samples closer than this to another track are excluded
  std::size_t min_samples = 3;         // shorter tracks are dropped
};

/// Jump radius for a given maximal expected speed: max(2, ceil(2 v_max)).
double jump_for_speed(double v_max);

struct TroughSample {
  long t;
  double position;  // parabolic log-x interpolation about the discrete minimum
  double depth;     // |x - 1| at the interpolated minimum
  bool isolated;    // false while colliding with another track
};

struct TroughTrack {
  std::vector<TroughSample> samples;  // strictly increasing t
  double depth = 0;                   // max depth over isolated samples

  long first_t() const { return samples.front().t; }
  long last_t() const { return samples.back().t; }
};

/// Local minima of one row below 1 - threshold, with interpolated position
/// (absolute lattice coordinate) and depth.
std::vector<TroughSample> find_troughs(std::span<const double> row, long n_lo, long t, double threshold);

std::vector<TroughTrack> track_troughs(const FloatField& field, const TrackerOptions& options = {});

/// Least-squares slope over isolated samples, one intercept per contiguous
/// isolated segment. Throws TooFewSamples below two usable samples.
double measure_velocity(const TroughTrack& track);

/// max_n |x_n - 1| of a single row.
double measure_amplitude(std::span<const double> row);

struct ClusterSample {
  long t;
  long leftmost;
  long rightmost;
  int segment;  // increments after each collision gap
};

struct ClusterTrack {
  std::vector<ClusterSample> samples;
  long amplitude = 0;

  long first_t() const { return samples.front().t; }
  long last_t() const { return samples.back().t; }
};

/// Maximal runs of occupied boxes linked across time. Tracks interrupted by a
/// collision are stitched to the cluster that re-emerges with the same ball
/// count; transient merged clusters are dropped.
std::vector<ClusterTrack> detect_bbsc_solitons(const std::vector<BBSCState>& history);

/// Displacement of the leftmost box over the first contiguous segment,
/// divided by its duration. Throws TooFewSamples for a single sample.
Rat cluster_speed(const ClusterTrack& track);

enum class Anomaly { None, SmallerFaster };

struct TrackSummary {
  double amplitude;
  double speed;
  long first_t;
  long last_t;
};

struct OvertakeReport {
  std::vector<TrackSummary> tracks;
  std::size_t initial_leader;  // index of the track ahead at the first common time
  std::size_t final_leader;
  bool crossing;
  Anomaly anomaly;
};

OvertakeReport overtake_report(const std::vector<TroughTrack>& tracks);
OvertakeReport overtake_report(const std::vector<ClusterTrack>& tracks);

std::string overtake_report_json(const OvertakeReport& report);

}  // namespace soliton
