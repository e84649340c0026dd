#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "soliton/lattice.hpp"

namespace soliton {

/// Box occupancies u_n for n = 0, 1, ... (boxes beyond the vector are empty)
/// with box capacity C_B and carrier capacity C_C; an empty carrier capacity
/// means C_C = infinity, i.e. the plain box-ball system.
struct BBSCState {
  std::vector<long> u;
  long c_box = 1;
  std::optional<long> c_carrier;

  long ball_count() const;
  friend bool operator==(const BBSCState&, const BBSCState&) = default;
};

/// Parses a digit string such as "300010" into occupancies.
BBSCState parse_boxes(std::string_view digits, long c_box, std::optional<long> c_carrier);

/// Per-step sweep record: the new state and the carrier load V_n entering each box.
struct BBSCSweep {
  BBSCState next;
  std::vector<long> carrier;  // V_n^t for n in [0, next.u.size())
};

/// One step of the box-ball system with carrier, sweeping left to right with an
/// empty carrier. Boxes are appended on the right until the carrier is empty.
BBSCSweep bbsc_sweep(const BBSCState& state);
BBSCState bbsc_step(const BBSCState& state);

/// Plain BBS step: the C_C = infinity rule regardless of the state's carrier
/// capacity, which is carried through unchanged.
BBSCState bbs_step(const BBSCState& state);

std::vector<BBSCState> simulate_bbsc(const BBSCState& initial, long steps);

/// One line per time step; '.' for an empty box, the digit otherwise. All
/// lines are padded to the widest state. Requires C_B <= 9.
void render_ascii(std::ostream& os, const std::vector<BBSCState>& history);
void write_bbsc_csv(std::ostream& os, const std::vector<BBSCState>& history);

// ---- Ultradiscrete bridge -----------------------------------------------------

/// Ultradiscrete variables X, Y with parameters A, B > 0; alpha = exp(-A/eps),
/// beta = exp(-B/eps) in the discrete picture.
struct UDField {
  std::vector<double> X;
  std::vector<double> Y;
  double A = 0;
  double B = 0;
};

/// The tropical site map X' = min[-X, B+Y] + max[X+Y+A, 0] - A and
/// Y_{n+1} = X + Y - X'.
SitePair<double> tropical_site(double X, double Y, double A, double B);

/// The gKdV site map evaluated in log coordinates at scale eps, returning
/// (-eps log x', -eps log y').
SitePair<double> gkdv_site_log(double X, double Y, double A, double B, double eps);

struct UDLimitEntry {
  double epsilon;
  double max_deviation;
};

struct UDLimitReport {
  std::vector<UDLimitEntry> entries;
  bool strictly_decreasing = true;
};

UDLimitReport ud_limit_check(const UDField& field, const std::vector<double>& epsilons);

/// U = X + A, V = Y + B elementwise.
SitePair<std::vector<double>> shift_to_uv(const UDField& field);

/// UD field of a BBSC state: X = U - C_B, Y = V - C_C with V the carrier sweep.
UDField ud_field_from_bbsc(const BBSCState& state);

enum class CapacityOrdering { BoxGreater, Equal, CarrierGreater };

const char* to_string(CapacityOrdering ordering);

/// beta vs alpha maps to C_B vs C_C.
CapacityOrdering param_correspondence(const SystemParams& params);

}  // namespace soliton
