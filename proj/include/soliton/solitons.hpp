#pragma once

#include <optional>
#include <string>
#include <vector>

#include "soliton/lattice.hpp"
#include "soliton/rat.hpp"
#include "soliton/rat_matrix.hpp"

namespace soliton {

struct Soliton {
  Rat p;
  Rat gamma;
};

/// Parameters (p_i, gamma_i) of an N-soliton solution.
struct SolitonSpec {
  std::vector<Soliton> solitons;

  std::size_t size() const { return solitons.size(); }
  bool empty() const { return solitons.empty(); }
};

/// A = (-p+beta)/(p+1-alpha), B = (p+1-beta)/(-p+alpha), C = gamma/(2p+Delta),
/// D = (-Delta-p)/p. The one-soliton field is x = (1+CA^tB^n)(1+CDA^tB^{n+1})
/// / ((1+CDA^tB^n)(1+CA^tB^{n+1})).
struct OneSolitonConstants {
  Rat A;
  Rat B;
  Rat C;
  Rat D;
};

/// A and B depend on p alone; C needs gamma.
Rat base_a(const SystemParams& params, const Rat& p);
Rat base_b(const SystemParams& params, const Rat& p);
Rat factor_d(const SystemParams& params, const Rat& p);

/// Checks the admissibility conditions (per soliton plus pairwise clashes)
/// and returns the per-soliton constants, all positive.
std::vector<OneSolitonConstants> validate(const SystemParams& params, const SolitonSpec& spec);

/// alpha + beta - 1, the length of the admissible p interval.
Rat p_interval(const SystemParams& params);

/// Free-propagation speed -log A / log B (1 at the midpoint p = (alpha+beta-1)/2).
double velocity(const SystemParams& params, const Rat& p);

/// Trough depth |x_min - 1| of the one-soliton profile (0 at the midpoint).
double amplitude(const SystemParams& params, const Rat& p);

/// Determinant tau functions f and g at lattice point (t, n). The spec is
/// validated on every call.
Rat tau_f(const SystemParams& params, const SolitonSpec& spec, long t, long n);
Rat tau_g(const SystemParams& params, const SolitonSpec& spec, long t, long n);

/// Precomputed evaluator for repeated sampling of one solution.
class TauSampler {
 public:
  TauSampler(const SystemParams& params, const SolitonSpec& spec);

  Rat f(long t, long n) const;
  Rat g(long t, long n) const;

  /// x = f g_n / (g f_n), y = g f_t / (f g_t); throws ZeroTau.
  SitePair<Rat> sample(long t, long n) const;

  /// x^t over n in [n_lo, n_hi].
  std::vector<Rat> x_row(long t, long n_lo, long n_hi) const;

  /// Exact field over the window with y filled from the sampler.
  LatticeField<Rat> field(long n_lo, long n_hi, long t_begin, long t_end) const;

  const SystemParams& params() const { return params_; }
  const std::vector<OneSolitonConstants>& constants() const { return constants_; }

 private:
  Rat tau(long t, long n, bool with_d) const;

  SystemParams params_;
  SolitonSpec spec_;
  std::vector<OneSolitonConstants> constants_;
  std::vector<std::vector<Rat>> coupling_;  // gamma_i / (p_i + p_j + Delta)
};

SitePair<Rat> sample_xy(const SystemParams& params, const SolitonSpec& spec, long t, long n);

/// Same solution with the lattice origin moved: the returned spec sampled at
/// (t, n) equals `spec` sampled at (t + dt, n + dn). Only the gammas change.
SolitonSpec translate_origin(const SystemParams& params, const SolitonSpec& spec, long dt, long dn);

/// Residuals of both gKdV equations at (t, n) for the sampled field. Zero for
/// an exact solution.
SitePair<Rat> gkdv_residual(const TauSampler& sampler, long t, long n);

// ---- Four-component discrete KP tau function -------------------------------

struct KPTriple {
  Rat p;
  Rat q;
  Rat gamma;
};

struct KPParams {
  Rat a1;
  Rat a2;
  Rat b;
  Rat c;
  std::vector<KPTriple> triples;
};

struct KPPoint {
  long l1 = 0;
  long l2 = 0;
  long t = 0;
  long n = 0;
};

/// Rejects coinciding parameters that would zero a determinant entry
/// denominator or an exponent base (throws DenominatorClash).
void validate_kp(const KPParams& kp);

Rat kp_tau(const KPParams& kp, const KPPoint& point);

/// Left-hand sides of the two bilinear equations (both vanish for kp_tau).
SitePair<Rat> check_kp_bilinear(const KPParams& kp, const KPPoint& point);

/// tau(l1+1, l2+1, t, n) - tau(l1, l2, t, n) under q_i = a1 + a2 - p_i.
Rat check_reduction(const KPParams& kp, const KPPoint& point);

// ---- Monotonicity scan -------------------------------------------------------

struct ScanViolation {
  std::string quantity;  // "v" or "w"
  std::size_t index;     // pair (index, index + 1)
  double p_left;
  double p_right;
  double value_left;
  double value_right;
};

struct ScanReport {
  Rat alpha;
  Rat beta;
  int grid;
  std::vector<double> p;
  std::vector<double> v;
  std::vector<double> w;
  std::vector<ScanViolation> violations;
  std::optional<double> v_extremum_p;  // empty when v is constant
  double w_extremum_p;
};

/// Samples v and W at grid_size interior points of (0, alpha+beta-1) and
/// checks the unimodal patterns about the midpoint. Sampling fans out over
/// worker threads.
ScanReport scan_monotonicity(const SystemParams& params, int grid_size);

std::string scan_report_json(const ScanReport& report);

}  // namespace soliton
