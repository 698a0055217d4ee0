#ifndef RW_GREEN_HPP
#define RW_GREEN_HPP

#include <functional>
#include <vector>

#include "kernel.hpp"
#include "ladder.hpp"
#include "law.hpp"

namespace rw {

// Green function of the walk killed on (-inf, 0]: expected visits to y
// before the first entry, started from x.  For x, y >= 1 it is the
// two-sided product sum over the strict ascending / weak descending
// renewal sequences; valid for 1 <= x, y <= Y + 1.
Certified green_half_line(const LadderTables& t, long long x, long long y);

// The same function on all of Z.  For x <= 0 it satisfies the one-step
// relation g(x, y) = sum_{w >= 1} p(w - x) g(w, y) + [x == y], so a
// start inside the killing set still counts its own visit and one jump.
Certified green_half_line_ext(const Law& law, const LadderTables& t,
                              long long x, long long y);

// Green function of the walk killed at the origin:
// g(x, y) = [x == y and x == 0] + a(x) + a(-y) - a(x - y).
Certified green_origin(const PotentialTable& pot, long long x, long long y);

// g(x, infinity) = f_r(x) / EZ, the limit of the half-line Green
// function in its second argument; identically zero when EZ = inf.
Certified limit_green(const LadderTables& t, long long x);

// Entrance law into (-inf, 0] from x > 0, tabulated on [y_lo, 0]; the
// mass below y_lo is enclosed by a certified upper bound.
struct HittingDist {
  long long x = 0;
  long long y_lo = 0;
  std::vector<double> prob, tol;  // index -y for y in [y_lo, 0]
  double tail_mass = 0.0;         // bound on P[S_T < y_lo]

  double at(long long y) const;
  double tol_at(long long y) const;
};

// depth = 0 picks the natural support when the left side is bounded and
// the ladder window otherwise; depth > 0 forces y_lo = -depth.
HittingDist hitting_dist_low(const Law& law, const LadderTables& t,
                             long long x, long long depth = 0);

// sum_y H(y) phi(y).  phi_tail_sup must dominate |phi| below y_lo; when
// the distribution carries tail mass and no finite dominating constant
// is supplied the sum is not certifiable and the call fails with
// RW_ERR_UNBOUNDED.
Certified hitting_functional(const HittingDist& h,
                             const std::function<double(long long)>& phi,
                             double phi_tail_sup);

// H^{-inf}(y) = P[Z > y] / EZ, the entrance law into [0, inf) from far
// below, for y >= 0.  Also evaluated through the independent form
// (1/EZ) sum_{w >= 1} f_r(w) p(y + w); the two must agree within their
// combined slack.  Fails with RW_ERR_NOT_APPLICABLE when EZ = inf.
Certified limit_hitting_minus_inf(const Law& law, const LadderTables& t,
                                  long long y);

// Limit of the potential kernel far on a heavy left side.  When the
// left tail is heavy with EhatZ = -inf, the right side is bounded and
// EZ < inf, a(-w) approaches sum_{u >= 0} P[Z > u] a(u) / EZ, and the
// distance from the limit at depth w is controlled by the deviation of
// the ascending renewal sequence at w minus the right support radius.
// err bounds |a(-w) - value| uniformly over w >= w_min.
struct DeepPotential {
  bool valid = false;
  double value = 0.0;
  double err = 0.0;
  long long w_min = 0;
};
DeepPotential deep_left_potential(const Law& law, const LadderTables& t,
                                  const PotentialTable& pot,
                                  long long w_min);

// E_x[a(S_T - shift)], the entrance functional of the shifted potential
// kernel, for any x <= Y with |shift| <= W/2.  The part of the entrance
// law below the tabulated window is summed against the deep plateau;
// laws whose left tail is heavy without a plateau (bounded descending
// mean, or a heavy right side as well) are rejected with
// RW_ERR_NOT_APPLICABLE.
Certified hitting_potential(const Law& law, const LadderTables& t,
                            const PotentialTable& pot, long long x,
                            long long shift);

// Residual of a(x-y) - E_x[a(S_T - y)] + g(x, y) = A g(x, inf) at one
// point: value is the defect, err the certified slack implied by every
// input tolerance and truncation remainder.
Certified verify_eqPS(const Law& law, const LadderTables& t,
                      const PotentialTable& pot, long long x, long long y);

// max - min over ys of a(x-y) - E_x[a(S_T - y)] + g(x, y), which the
// identity above makes independent of y.
Certified eqPS_y_spread(const Law& law, const LadderTables& t,
                        const PotentialTable& pot, long long x,
                        const std::vector<long long>& ys);

// Residual of a(x) = E_x[a(S_T)] + A f_r(x)/EZ (EZ < inf) or of
// a(x) = E_x[a(S_T)] (EZ = inf), for x >= 1.
Certified verify_corollary1(const Law& law, const LadderTables& t,
                            const PotentialTable& pot, long long x);

}  // namespace rw

#endif
