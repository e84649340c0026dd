#include "soliton/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>

namespace soliton {

namespace {

template <class T>
FloatField convert_field(const LatticeField<T>& field) {
  FloatField out{field.n_lo, field.t0, {}};
  out.rows.reserve(field.x.size());
  for (const auto& row : field.x) {
    std::vector<double> r;
    r.reserve(row.size());
    for (const auto& v : row) r.push_back(to_double(v));
    out.rows.push_back(std::move(r));
  }
  return out;
}

struct Line {
  double slope;
  double intercept;
};

// Ordinary least squares; requires two distinct times.
std::optional<Line> fit_line(const std::vector<std::pair<double, double>>& pts) {
  if (pts.size() < 2) return std::nullopt;
  double mt = 0;
  double mx = 0;
  for (const auto& [t, x] : pts) {
    mt += t;
    mx += x;
  }
  mt /= static_cast<double>(pts.size());
  mx /= static_cast<double>(pts.size());
  double sxy = 0;
  double sxx = 0;
  for (const auto& [t, x] : pts) {
    sxy += (t - mt) * (x - mx);
    sxx += (t - mt) * (t - mt);
  }
  if (sxx == 0) return std::nullopt;
  return Line{sxy / sxx, mx - sxy / sxx * mt};
}

struct Building {
  std::vector<TroughSample> samples;

  double predict(long t) const {
    const std::size_t k = std::min<std::size_t>(samples.size(), 8);
    std::vector<std::pair<double, double>> tail;
    for (std::size_t i = samples.size() - k; i < samples.size(); ++i) {
      tail.emplace_back(static_cast<double>(samples[i].t), samples[i].position);
    }
    if (const auto line = fit_line(tail)) return line->slope * static_cast<double>(t) + line->intercept;
    return samples.back().position;
  }
};

}  // namespace

FloatField to_float_field(const LatticeField<Rat>& field) { return convert_field(field); }
FloatField to_float_field(const LatticeField<double>& field) { return convert_field(field); }

double jump_for_speed(double v_max) { return std::max(2.0, std::ceil(2.0 * v_max)); }

std::vector<TroughSample> find_troughs(std::span<const double> row, long n_lo, long t, double threshold) {
  std::vector<TroughSample> out;
  for (std::size_t i = 1; i + 1 < row.size(); ++i) {
    const double here = row[i];
    if (!(here < row[i - 1] && here <= row[i + 1] && here < 1.0 - threshold)) continue;
    double offset = 0;
    double minimum = here;
    if (row[i - 1] > 0 && here > 0 && row[i + 1] > 0) {
      const double l0 = std::log(row[i - 1]);
      const double l1 = std::log(here);
      const double l2 = std::log(row[i + 1]);
      const double curvature = l0 - 2 * l1 + l2;
      if (curvature > 0) {
        offset = 0.5 * (l0 - l2) / curvature;
        minimum = std::exp(l1 - (l0 - l2) * (l0 - l2) / (8 * curvature));
      }
    }
    out.push_back({t, static_cast<double>(n_lo + static_cast<long>(i)) + offset, std::abs(minimum - 1.0),
                   true});
  }
  return out;
}

namespace {

double median_depth(const std::vector<TroughSample>& samples) {
  std::vector<double> d;
  for (const auto& s : samples) d.push_back(s.depth);
  std::sort(d.begin(), d.end());
  return d[d.size() / 2];
}

// Greedy nearest-neighbour linking of troughs against each track's predicted position.
std::vector<Building> link_phase(const std::vector<std::vector<TroughSample>>& troughs, std::size_t begin,
                                 std::size_t end, double max_jump) {
  std::vector<Building> building;
  for (std::size_t k = begin; k < end; ++k) {
    const long t = troughs[k].empty() ? 0 : troughs[k].front().t;
    struct Candidate {
      double distance;
      std::size_t track;
      std::size_t trough;
    };
    std::vector<Candidate> candidates;
    for (std::size_t i = 0; i < building.size(); ++i) {
      const double predicted = building[i].predict(t);
      for (std::size_t j = 0; j < troughs[k].size(); ++j) {
        const double d = std::abs(troughs[k][j].position - predicted);
        if (d <= max_jump) candidates.push_back({d, i, j});
      }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
      return a.distance != b.distance ? a.distance < b.distance
                                      : (a.track != b.track ? a.track < b.track : a.trough < b.trough);
    });
    std::vector<bool> track_used(building.size(), false);
    std::vector<bool> trough_used(troughs[k].size(), false);
    for (const auto& c : candidates) {
      if (track_used[c.track] || trough_used[c.trough]) continue;
      track_used[c.track] = trough_used[c.trough] = true;
      building[c.track].samples.push_back(troughs[k][c.trough]);
    }
    for (std::size_t j = 0; j < troughs[k].size(); ++j) {
      if (!trough_used[j]) building.push_back({{troughs[k][j]}});
    }
  }
  return building;
}

}  // namespace

std::vector<TroughTrack> track_troughs(const FloatField& field, const TrackerOptions& options) {
  if (field.rows.empty()) throw Error(ErrorCode::EmptyField, "no rows to track");

  const std::size_t steps = field.rows.size();
  std::vector<std::vector<TroughSample>> troughs(steps);
  for (std::size_t k = 0; k < steps; ++k) {
    troughs[k] = find_troughs(field.rows[k], field.n_lo, field.t0 + static_cast<long>(k), options.threshold);
  }

  // Number of solitons: the largest count held for min_samples consecutive steps.
  std::size_t concurrent = 0;
  const std::size_t run_needed = std::max<std::size_t>(options.min_samples, 1);
  for (std::size_t c = 1;; ++c) {
    std::size_t run = 0;
    bool found = false;
    for (std::size_t k = 0; k < steps && !found; ++k) {
      run = troughs[k].size() >= c ? run + 1 : 0;
      found = run >= run_needed;
    }
    if (!found) break;
    concurrent = c;
  }
  if (concurrent == 0) return {};

  // Clean phases: maximal runs of steps showing exactly `concurrent` troughs.
  // Between phases solitons are merged; pieces are chained across by depth rank.
  std::vector<std::vector<TroughSample>> chains;
  for (std::size_t k = 0; k < steps;) {
    if (troughs[k].size() != concurrent) {
      ++k;
      continue;
    }
    std::size_t end = k;
    while (end < steps && troughs[end].size() == concurrent) ++end;
    auto pieces = link_phase(troughs, k, end, options.max_jump);
    k = end;

    std::sort(pieces.begin(), pieces.end(), [](const Building& a, const Building& b) {
      return median_depth(a.samples) < median_depth(b.samples);
    });
    if (chains.empty()) {
      for (auto& piece : pieces) chains.push_back(std::move(piece.samples));
      continue;
    }
    if (pieces.size() != chains.size()) continue;  // linking broke inside the phase
    std::vector<std::size_t> order(chains.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::vector<double> chain_depth;
    for (const auto& c : chains) {
      // Depth of the most recent phase only.
      std::vector<TroughSample> tail;
      for (auto it = c.rbegin(); it != c.rend() && (tail.empty() || it->t + 1 == tail.back().t); ++it) {
        tail.push_back(*it);
      }
      chain_depth.push_back(median_depth(tail));
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return chain_depth[a] < chain_depth[b]; });
    for (std::size_t r = 0; r < order.size(); ++r) {
      auto& chain = chains[order[r]];
      chain.insert(chain.end(), pieces[r].samples.begin(), pieces[r].samples.end());
    }
  }

  std::vector<TroughTrack> tracks;
  for (auto& c : chains) {
    if (c.size() >= options.min_samples) tracks.push_back({std::move(c), 0.0});
  }

  for (std::size_t i = 0; i < tracks.size(); ++i) {
    for (auto& s : tracks[i].samples) {
      s.isolated = true;
      for (const auto& o : troughs[static_cast<std::size_t>(s.t - field.t0)]) {
        if (o.position != s.position && std::abs(o.position - s.position) < options.collision_separation) {
          s.isolated = false;
        }
      }
    }
    double depth = 0;
    bool any_isolated = false;
    for (const auto& s : tracks[i].samples) {
      if (s.isolated) {
        depth = std::max(depth, s.depth);
        any_isolated = true;
      }
    }
    if (!any_isolated) {
      for (const auto& s : tracks[i].samples) depth = std::max(depth, s.depth);
    }
    tracks[i].depth = depth;
  }
  std::sort(tracks.begin(), tracks.end(), [](const TroughTrack& a, const TroughTrack& b) {
    return a.samples.front().position < b.samples.front().position;
  });
  return tracks;
}

namespace {

// Common slope with one intercept per contiguous run of accepted samples.
std::optional<double> segmented_slope(const TroughTrack& track, bool isolated_only) {
  std::vector<std::vector<std::pair<double, double>>> segments;
  long last_t = 0;
  bool open = false;
  for (const auto& s : track.samples) {
    if (isolated_only && !s.isolated) {
      open = false;
      continue;
    }
    if (!open || s.t != last_t + 1) segments.emplace_back();
    segments.back().emplace_back(static_cast<double>(s.t), s.position);
    last_t = s.t;
    open = true;
  }

  double sxy = 0;
  double sxx = 0;
  for (const auto& seg : segments) {
    if (seg.size() < 2) continue;
    double mt = 0;
    double mx = 0;
    for (const auto& [t, x] : seg) {
      mt += t;
      mx += x;
    }
    mt /= static_cast<double>(seg.size());
    mx /= static_cast<double>(seg.size());
    for (const auto& [t, x] : seg) {
      sxy += (t - mt) * (x - mx);
      sxx += (t - mt) * (t - mt);
    }
  }
  if (sxx == 0) return std::nullopt;
  return sxy / sxx;
}

}  // namespace

double measure_velocity(const TroughTrack& track) {
  const auto slope = segmented_slope(track, true);
  if (!slope) throw Error(ErrorCode::TooFewSamples, "track has fewer than two consecutive isolated samples");
  return *slope;
}

double measure_amplitude(std::span<const double> row) {
  if (row.empty()) throw Error(ErrorCode::EmptyField, "empty row");
  double best = 0;
  for (double x : row) best = std::max(best, std::abs(x - 1.0));
  return best;
}

// ---- BBSC clusters ------------------------------------------------------------

namespace {

struct Cluster {
  long left;
  long right;
  long balls;
};

std::vector<Cluster> clusters_of(const BBSCState& state) {
  std::vector<Cluster> out;
  for (std::size_t n = 0; n < state.u.size(); ++n) {
    if (state.u[n] == 0) continue;
    if (!out.empty() && out.back().right + 1 == static_cast<long>(n)) {
      out.back().right = static_cast<long>(n);
      out.back().balls += state.u[n];
    } else {
      out.push_back({static_cast<long>(n), static_cast<long>(n), state.u[n]});
    }
  }
  return out;
}

constexpr long kClusterGap = 2;

long interval_gap(long l1, long r1, long l2, long r2) {
  return std::max({0L, l2 - r1 - 1, l1 - r2 - 1});
}

}  // namespace

std::vector<ClusterTrack> detect_bbsc_solitons(const std::vector<BBSCState>& history) {
  std::vector<ClusterTrack> tracks;
  if (history.empty()) return tracks;
  for (const auto& s : history) {
    if (s.c_box != history.front().c_box || s.c_carrier != history.front().c_carrier) {
      throw Error(ErrorCode::InconsistentCapacities, "history mixes box or carrier capacities");
    }
  }

  for (std::size_t k = 0; k < history.size(); ++k) {
    const long t = static_cast<long>(k);
    const auto clusters = clusters_of(history[k]);

    struct Candidate {
      long distance;
      std::size_t track;
      std::size_t cluster;
    };
    std::vector<Candidate> live;
    std::vector<Candidate> dormant;
    for (std::size_t i = 0; i < tracks.size(); ++i) {
      const auto& last = tracks[i].samples.back();
      for (std::size_t j = 0; j < clusters.size(); ++j) {
        if (clusters[j].balls != tracks[i].amplitude) continue;
        const long d = std::abs(clusters[j].left - last.leftmost);
        if (last.t == t - 1) {
          if (interval_gap(last.leftmost, last.rightmost, clusters[j].left, clusters[j].right) <= kClusterGap) {
            live.push_back({d, i, j});
          }
        } else {
          dormant.push_back({d, i, j});
        }
      }
    }
    auto by_distance = [](const Candidate& a, const Candidate& b) {
      return a.distance != b.distance ? a.distance < b.distance
                                      : (a.track != b.track ? a.track < b.track : a.cluster < b.cluster);
    };
    std::sort(live.begin(), live.end(), by_distance);
    std::sort(dormant.begin(), dormant.end(), by_distance);

    std::vector<bool> track_used(tracks.size(), false);
    std::vector<bool> cluster_used(clusters.size(), false);
    auto assign = [&](const std::vector<Candidate>& cands, bool new_segment) {
      for (const auto& c : cands) {
        if (track_used[c.track] || cluster_used[c.cluster]) continue;
        track_used[c.track] = cluster_used[c.cluster] = true;
        auto& tr = tracks[c.track];
        const int segment = tr.samples.back().segment + (new_segment ? 1 : 0);
        tr.samples.push_back({t, clusters[c.cluster].left, clusters[c.cluster].right, segment});
      }
    };
    assign(live, false);
    assign(dormant, true);
    for (std::size_t j = 0; j < clusters.size(); ++j) {
      if (cluster_used[j]) continue;
      tracks.push_back({{{t, clusters[j].left, clusters[j].right, 0}}, clusters[j].balls});
    }
  }

  // Clusters first seen after the initial state are collision transients.
  std::erase_if(tracks, [](const ClusterTrack& tr) { return tr.first_t() > 0; });
  return tracks;
}

Rat cluster_speed(const ClusterTrack& track) {
  if (track.samples.empty()) throw Error(ErrorCode::TooFewSamples, "empty cluster track");
  const auto& first = track.samples.front();
  const ClusterSample* last = &first;
  for (const auto& s : track.samples) {
    if (s.segment != first.segment) break;
    last = &s;
  }
  if (last->t == first.t) throw Error(ErrorCode::TooFewSamples, "cluster track has a single sample");
  return Rat(last->leftmost - first.leftmost, last->t - first.t);
}

// ---- Overtaking -----------------------------------------------------------------

namespace {

struct Path {
  std::vector<std::pair<long, double>> points;  // (t, position), increasing t

  double at(long t) const {
    if (t <= points.front().first) return points.front().second;
    if (t >= points.back().first) return points.back().second;
    const auto hi = std::lower_bound(points.begin(), points.end(), t,
                                     [](const auto& p, long v) { return p.first < v; });
    if (hi->first == t) return hi->second;
    const auto lo = std::prev(hi);
    const double w = static_cast<double>(t - lo->first) / static_cast<double>(hi->first - lo->first);
    return lo->second + w * (hi->second - lo->second);
  }
};

OvertakeReport compare(std::vector<TrackSummary> summaries, const std::vector<Path>& paths) {
  const long start = std::max(summaries[0].first_t, summaries[1].first_t);
  const long end = std::min(summaries[0].last_t, summaries[1].last_t);
  const long t_initial = std::min(start, end);
  const long t_final = std::max(start, end);

  OvertakeReport report;
  report.initial_leader = paths[1].at(t_initial) > paths[0].at(t_initial) ? 1 : 0;
  report.final_leader = paths[1].at(t_final) > paths[0].at(t_final) ? 1 : 0;
  report.crossing = report.initial_leader != report.final_leader;
  report.anomaly = Anomaly::None;
  if (report.crossing && summaries[0].amplitude != summaries[1].amplitude) {
    const std::size_t smaller = summaries[0].amplitude < summaries[1].amplitude ? 0 : 1;
    if (report.final_leader == smaller) report.anomaly = Anomaly::SmallerFaster;
  }
  report.tracks = std::move(summaries);
  return report;
}

void require_two(std::size_t count) {
  if (count != 2) {
    throw Error(ErrorCode::WrongTrackCount, "overtake report needs exactly two tracks, got " + std::to_string(count));
  }
}

}  // namespace

OvertakeReport overtake_report(const std::vector<TroughTrack>& tracks) {
  require_two(tracks.size());
  std::vector<TrackSummary> summaries;
  std::vector<Path> paths;
  for (const auto& tr : tracks) {
    Path path;
    for (const auto& s : tr.samples) path.points.emplace_back(s.t, s.position);
    // Never isolated: fall back to all samples.
    const double speed = segmented_slope(tr, true).value_or(segmented_slope(tr, false).value_or(0.0));
    summaries.push_back({tr.depth, speed, tr.first_t(), tr.last_t()});
    paths.push_back(std::move(path));
  }
  return compare(std::move(summaries), paths);
}

OvertakeReport overtake_report(const std::vector<ClusterTrack>& tracks) {
  require_two(tracks.size());
  std::vector<TrackSummary> summaries;
  std::vector<Path> paths;
  for (const auto& tr : tracks) {
    Path path;
    for (const auto& s : tr.samples) path.points.emplace_back(s.t, static_cast<double>(s.leftmost));
    double speed = 0;
    if (tr.samples.size() > 1) speed = cluster_speed(tr).to_double();
    summaries.push_back({static_cast<double>(tr.amplitude), speed, tr.first_t(), tr.last_t()});
    paths.push_back(std::move(path));
  }
  return compare(std::move(summaries), paths);
}

std::string overtake_report_json(const OvertakeReport& report) {
  nlohmann::json tracks = nlohmann::json::array();
  for (const auto& s : report.tracks) {
    tracks.push_back({{"amplitude", s.amplitude}, {"speed", s.speed}, {"first_t", s.first_t}, {"last_t", s.last_t}});
  }
  const nlohmann::json j = {{"tracks", tracks},
                            {"initial_leader", report.initial_leader},
                            {"final_leader", report.final_leader},
                            {"crossing", report.crossing},
                            {"anomaly", report.anomaly == Anomaly::SmallerFaster ? "smaller_faster" : "none"}};
  return j.dump(2);
}

}  // namespace soliton
