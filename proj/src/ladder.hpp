#ifndef RW_LADDER_HPP
#define RW_LADDER_HPP

#include <vector>

#include "law.hpp"

namespace rw {

// Killed evolution: the walk starts at 0 and is absorbed on first entry
// into [1, inf).  Surviving states live on [-2H, 0]; absorbed mass is
// collected into entrance bins [1, H].  Both the occupation partial sums
// (expected visits per site, n = 0 included) and the entrance partial
// sums are snapshotted at five dyadic, period-aligned checkpoints and
// extrapolated with two Aitken stages, so the n^{-beta} approach to the
// limit costs two extra orders instead of an unreachable step count.
struct KilledRunOptions {
  long long H = 0;  // half window: states [-2H, 0], entrance bins [1, H]
  int steps = 0;    // evolution steps, rounded to the checkpoint grid
  // zero means: choose by tail regime
};

struct KilledRun {
  long long H = 0;
  int steps = 0;
  // occupation[d] ~ expected visits to -d before absorption, d in [0, 2H];
  // equals the Green function of the killed walk at (0, -d)
  std::vector<double> occupation, occupation_tol;
  // entrance[k-1] ~ P[first point in [1, inf) equals k], k in [1, H]
  std::vector<double> entrance, entrance_tol;
  double entrance_mass = 0;  // extrapolated total absorbed mass
  double escaped = 0;    // mass lost to window or kernel truncation
  double noise = 0;      // accumulated fp slack
  double surviving = 0;  // in-window mass still alive after the last step
  double mass_gap = 0;   // |1 - surviving - collected - escaped| bookkeeping
  // final-step consistency of the two accumulations: the entrance partial
  // sums must equal the occupation partial sums pushed through one step,
  // E_N(k) = sum_d O_{N-1}(d) p(k + d)
  double conv_residual = 0;
};

KilledRun killed_run(const Law& law, KilledRunOptions opt = {});

// The ladder apparatus over the window [0, Y]: strict ascending and
// descending entrance laws, the two renewal sequences, the Spitzer
// constant, and the harmonic views built from them.
//
// The ascending run (kill on [1, inf)) yields the law of Z and, as its
// occupation measure, the weak descending renewal sequence v^-.  The
// descending run (the ascending run of the mirrored walk) yields hatZ
// and v/c.  The published v and v^- are rebuilt from the entrance laws
// by the exact renewal recursions
//     v(x)   = sum_k P[Z = k] v(x - k),        v(0)   = 1
//     v^-(x) = sum_j P[-hatZ = j] v^-(x - j),  v^-(0) = 1/c
// which reach any depth with first-order error tracking, while the
// occupation measures stay as independent shallow cross-checks.
//
// When exactly one side of the law is heavy, that side's entrance is not
// taken from its killed run (a run collects entrance height j soundly
// only once the horizon exceeds ~ j^alpha steps): it is rebuilt from the
// light side through the factorization identities
//     P[Z = k]     = sum_y v^-(y) p(k + y)
//     P[hatZ = -j] = v^-(0) sum_y v(y) p(-j - y)
// with the analytic tail model supplying everything beyond the table.
// Its tolerances come from replaying the construction over the light
// atoms' error polytope, and the heavy-side run stays as an independent
// shallow probe exercised by the report.
struct LadderTables {
  long long Y = 0;
  double c = 0, c_tol = 0;

  // strict ascending height Z >= 1: Z_pmf[k-1] = P[Z = k]
  std::vector<double> Z_pmf, Z_pmf_tol;
  // strict descending height hatZ <= -1: hatZ_pmf[j-1] = P[hatZ = -j]
  std::vector<double> hatZ_pmf, hatZ_pmf_tol;

  std::vector<double> v, v_tol;              // index x in [0, Y]
  std::vector<double> v_minus, v_minus_tol;  // index x in [0, Y]

  bool EZ_finite = false;
  double EZ = 0, EZ_tol = 0;
  bool EhatZ_finite = false;
  double EhatZ = 0, EhatZ_tol = 0;

  // unlocated entrance-law error per side (rounding noise plus potential
  // window re-entry); zero on a rebuilt side, whose per-entry tolerances
  // are complete
  double residual_up = 0;
  double residual_down = 0;

  // f_r(x) = v^-(0) + ... + v^-(x-1) for x >= 1, f_r(0) = 1, and
  // f_r(x) = P[Z > -x] for x <= 0: the harmonic function of the walk
  // killed on (-inf, 0].  Valid for -Kz <= x <= Y + 1.
  double f_r(long long x) const;
  double f_r_tol(long long x) const;
  // mirrored counterpart: f_l(x) = (1/c)[v(0) + ... + v(x-1)] for x >= 1,
  // f_l(0) = 1, f_l(x) = P[-hatZ > -x] for x <= 0
  double f_l(long long x) const;
  double f_l_tol(long long x) const;
  // renewal function of the weak ascending walk: U_as(x) = v(0)+...+v(x),
  // V_as(x) = U_as(x) / c, both for 0 <= x <= Y
  double U_as(long long x) const;
  double V_as(long long x) const;

  double v_at(long long x) const;
  double v_minus_at(long long x) const;

  KilledRun up, down;  // raw runs; down is in mirrored coordinates

private:
  friend LadderTables ladder_tables(const Law&, long long,
                                    KilledRunOptions, KilledRunOptions);
  std::vector<double> cum_v_, cum_v_tol_;    // prefix sums of v
  std::vector<double> cum_vm_, cum_vm_tol_;  // prefix sums of v_minus
  std::vector<double> z_tail_, z_tail_tol_;  // P[Z > j], j in [0, Kz]
  std::vector<double> hz_tail_, hz_tail_tol_;
};

LadderTables ladder_tables(const Law& law, long long Y,
                           KilledRunOptions up_opt = {},
                           KilledRunOptions down_opt = {});

// Residuals of the cross identities between independently computed
// pieces, each with the slack implied by the inputs' certified errors.
// A residual materially above its slack means an identity failed.
struct LadderReport {
  // P[Z = k] (ascending run) vs sum_y v^-(y) p(k + y) (descending data);
  // on a rebuilt side the raw run is compared with the published law over
  // the shallow range where its collection is sound
  double entrance_asc = 0, entrance_asc_slack = 0;
  // P[hatZ = -j] (descending run) vs v^-(0) sum_y v(y) p(-j - y)
  double entrance_desc = 0, entrance_desc_slack = 0;
  // P[hatZ < -t] vs v^-(0) sum_y v(y) P[X < -t - y] (cumulative form)
  double entrance_desc_cum = 0, entrance_desc_cum_slack = 0;
  // P[Z > x] vs sum_{y>=1} f_r(y) p(x + y)
  double asc_tail = 0, asc_tail_slack = 0;
  // f_r(x) = sum_{y>=1} f_r(y) p(y - x) on x in [1, x_hi]
  double harmonic = 0, harmonic_slack = 0;
  // sum_{y>=1} f_r(y) P[X >= y] vs EZ (finite-mean case)
  double mean_id = 0, mean_id_slack = 0;
  // 2 c E[-hatZ] EZ vs sigma^2 (all moments finite)
  double mean_product = 0, mean_product_slack = 0;
  // renewal-built sequences vs killed-run occupation measures
  double cross_v = 0, cross_v_slack = 0;
  double cross_v_minus = 0, cross_v_minus_slack = 0;
  // both occupation measures at the origin measure 1/c
  double c_up = 0, c_up_slack = 0;
  double c_down = 0, c_down_slack = 0;
  // structure: v(x+y) >= v(x) v(y); f_r(ceil(n/2)) >= f_r(n)/2;
  // v <= 1 and v^- <= 1/c; violations beyond slack accumulate here
  double super_mult = 0;
  double half_ratio = 0;
  double bracket = 0;
  // |total entrance mass - 1| vs the runs' residual accounting; on a
  // rebuilt side the audit is cumulative at the deepest sound collection
  // depth, with the published tail covering the remainder
  double mass_up = 0, mass_up_slack = 0;
  double mass_down = 0, mass_down_slack = 0;
  // v(Y) vs 1/EZ and v^-(Y) vs 1/(c E[-hatZ]) (monitors, slow limits)
  double v_limit_gap = -1;
  double v_minus_limit_gap = -1;
  // heavy-left fatigue monitor: (c f_r(x+1)/x) * sum_{t<x} P[hatZ < -t]
  // sits in [1, 2] as x grows when sigma_-^2 = inf but E|X_-| < inf
  bool drift_ratio_applies = false;
  double drift_ratio_lo = 0, drift_ratio_hi = 0;
};

LadderReport ladder_report(const Law& law, const LadderTables& t);

}  // namespace rw

#endif
