#include "green.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "status.hpp"

namespace rw {
namespace {

// P[X < v] for v <= 0
double cdf_below(const Law& law, long long v) {
  return law.tail_prob(double(-v), Side::Left);
}

// Deviation certificate for the ascending renewal sequence far beyond
// the published window.  The published ascending-height law is
// mass-exact (its defect lives in the per-atom tolerances), so the
// renewal recursion run from those atoms tracks the true sequence with
// a flat error: the recursion is an average of earlier values, a
// zero-sum atom perturbation cannot compound along it.
struct VDeep {
  bool valid = false;
  double vinf = 0.0;
  double base = 0.0;
  long long cap = 0;
  std::vector<double> sufdev;  // sufdev[t] = max_{s in [t, D]} |v(s) - vinf|

  // upper bound on sup_{s >= t} |v(s) - 1/EZ|; the blind value 1 is
  // always true since both terms lie in [0, 1]
  double dev(long long t) const {
    if (!valid) return 1.0;
    long long i = std::clamp<long long>(t, 0, cap);
    return sufdev[size_t(i)] + 4.0 * sufdev[size_t(cap)] + base;
  }
};

VDeep build_vdeep(const Law& law, const LadderTables& t) {
  VDeep d;
  if (law.heavy(Side::Right) || !t.EZ_finite || t.Z_pmf.empty()) return d;

  const std::vector<double>& z = t.Z_pmf;
  const long long D = std::max<long long>(4 * t.Y, 1024);
  std::vector<double> v(size_t(D + 1), 0.0);
  v[0] = 1.0;
  for (long long s = 1; s <= D; ++s) {
    double acc = 0.0;
    for (size_t k = 0; k < z.size() && (long long)k < s; ++k)
      acc += z[k] * v[size_t(s - 1 - (long long)k)];
    v[size_t(s)] = acc;
  }

  double ez = 0.0, ez_wtol = 0.0;
  for (size_t k = 0; k < z.size(); ++k) {
    ez += double(k + 1) * z[k];
    ez_wtol += double(k + 1) * t.Z_pmf_tol[k];
  }
  d.vinf = 1.0 / ez;

  // flat atom-driven uncertainty: first order the limit moves by
  // vinf^2 * sum (k+1) dz_k and the transient moves by the same grade;
  // the published sequence gives an independent floor on the overlap
  d.base = 2.0 * d.vinf * d.vinf * ez_wtol;
  double floor = 0.0;
  for (long long s = std::max<long long>(0, t.Y - 16); s <= t.Y; ++s)
    floor = std::max(floor,
                     std::abs(v[size_t(s)] - t.v[size_t(s)]) +
                         t.v_tol[size_t(s)]);
  d.base = std::max(d.base, floor);

  d.cap = D - 64;
  d.sufdev.assign(size_t(d.cap + 1), 0.0);
  double run = 0.0;
  for (long long s = D; s >= 0; --s) {
    run = std::max(run, std::abs(v[size_t(s)] - d.vinf));
    if (s <= d.cap) d.sufdev[size_t(s)] = run;
  }
  d.valid = true;
  return d;
}

// one row of the half-line Green function, g(x, z) for z in [1, zcap]
struct GreenRow {
  long long x = 0, zcap = 0;
  std::vector<double> g, tol;  // index z - 1
  double glim = 0.0, glim_tol = 0.0;
  double fr = 0.0, fr_tol = 0.0;
};

// z entries beyond y - support_min never meet the left side of the law,
// so a bounded left side needs only a short row
long long row_cap(const Law& law, const LadderTables& t) {
  if (law.heavy(Side::Left)) return t.Y + 1;
  return std::min<long long>(t.Y + 1, -law.support_min());
}

GreenRow make_row(const LadderTables& t, long long x, long long zcap) {
  if (x < 1 || x > t.Y + 1)
    fail(RW_ERR_WINDOW_EXCEEDED, "green row: x outside [1, Y + 1]");
  GreenRow r;
  r.x = x;
  r.zcap = std::max<long long>(1, std::min(zcap, t.Y + 1));
  r.g.resize(size_t(r.zcap));
  r.tol.resize(size_t(r.zcap));
  for (long long z = 1; z <= r.zcap; ++z) {
    KahanSum s, st;
    long long m = std::min(x, z);
    for (long long zz = 1; zz <= m; ++zz) {
      double vm = t.v_minus[size_t(x - zz)], vv = t.v[size_t(z - zz)];
      s.add(vm * vv);
      st.add(t.v_minus_tol[size_t(x - zz)] * vv +
             vm * t.v_tol[size_t(z - zz)]);
    }
    r.g[size_t(z - 1)] = s.value();
    r.tol[size_t(z - 1)] = st.value();
  }
  r.fr = t.f_r(x);
  r.fr_tol = t.f_r_tol(x);
  if (t.EZ_finite) {
    r.glim = r.fr / t.EZ;
    r.glim_tol = r.fr_tol / t.EZ + r.fr * t.EZ_tol / (t.EZ * t.EZ);
  }
  return r;
}

// H^x(y) = sum_z g(x, z) p(y - z) for y <= 0; the z tail beyond the
// table rides on g(x, z) = g(x, inf) +- f_r(x) dev(z - x)
Certified hit_val(const Law& law, const LadderTables& t, const GreenRow& r,
                  const VDeep& vd, long long y) {
  KahanSum s, st;
  for (long long z = 1; z <= r.zcap; ++z) {
    double p = law.pmf(y - z);
    if (p == 0.0) continue;
    s.add(r.g[size_t(z - 1)] * p);
    st.add(r.tol[size_t(z - 1)] * p);
  }
  if (r.zcap == t.Y + 1) {
    double tp = law.tail_prob(double(t.Y + 1 - y), Side::Left);
    if (tp > 0.0) {
      s.add(r.glim * tp);
      st.add(r.glim_tol * tp + r.fr * vd.dev(t.Y + 2 - r.x) * tp);
    }
  }
  return {s.value(), st.value()};
}

// sum_{y < yb} H^x(y): each z contributes its whole one-step mass into
// (-inf, yb), and sum_{z > Y+1} tail_prob(z - yb) telescopes exactly to
// tail_excess(Y + 2 - yb)
Certified mass_below(const Law& law, const LadderTables& t,
                     const GreenRow& r, const VDeep& vd, long long yb) {
  KahanSum s, st;
  for (long long z = 1; z <= r.zcap; ++z) {
    double tp = cdf_below(law, yb - z);
    if (tp == 0.0) continue;
    s.add(r.g[size_t(z - 1)] * tp);
    st.add(r.tol[size_t(z - 1)] * tp);
  }
  if (r.zcap == t.Y + 1) {
    double exc = law.tail_excess(t.Y + 2 - yb, Side::Left);
    if (exc > 0.0) {
      s.add(r.glim * exc);
      st.add(r.glim_tol * exc + r.fr * vd.dev(t.Y + 2 - r.x) * exc);
    }
  }
  return {s.value(), st.value()};
}

[[noreturn]] void fail_no_plateau(const Law& law, const LadderTables& t) {
  if (law.heavy(Side::Right) || t.EhatZ_finite || !t.EZ_finite)
    fail(RW_ERR_NOT_APPLICABLE,
         "entrance functional of the potential kernel: the left tail is "
         "heavy but the kernel has no deep plateau there");
  fail(RW_ERR_WINDOW_TOO_SMALL,
       "entrance functional of the potential kernel: the table is too "
       "short for the deep plateau");
}

// E_x[a(S_T - shift)] for x >= 1
Certified hp_pos(const Law& law, const LadderTables& t,
                 const PotentialTable& pot, const VDeep& vd,
                 const DeepPotential& deep, const GreenRow& row,
                 long long shift) {
  long long yb = -(pot.W - std::llabs(shift));
  KahanSum s, st;
  for (long long y = yb; y <= 0; ++y) {
    Certified h = hit_val(law, t, row, vd, y);
    if (h.value == 0.0 && h.err == 0.0) continue;
    double a = pot.at(y - shift), ae = pot.err_at(y - shift);
    s.add(h.value * a);
    st.add(h.err * std::abs(a) + (std::abs(h.value) + h.err) * ae);
  }
  Certified m0 = mass_below(law, t, row, vd, yb);
  if (m0.value + m0.err > 0.0) {
    if (!deep.valid) fail_no_plateau(law, t);
    if (std::llabs(yb) - std::llabs(shift) < deep.w_min)
      fail(RW_ERR_INTERNAL, "deep plateau engaged above its floor");
    s.add(deep.value * m0.value);
    st.add(deep.err * (m0.value + m0.err) +
           std::abs(deep.value) * m0.err);
  }
  return {s.value(), st.value()};
}

// bound on |a(y - shift)| over the entrance range of a bounded left side
double a_box(const Law& law, const PotentialTable& pot, long long shift) {
  double b = 0.0;
  for (long long y = law.support_min() + 1; y <= 0; ++y)
    b = std::max(b, std::abs(pot.at(y - shift)) + pot.err_at(y - shift));
  return b;
}

Certified hp_any(const Law& law, const LadderTables& t,
                 const PotentialTable& pot, long long x, long long shift) {
  if (2 * std::llabs(shift) > pot.W)
    fail(RW_ERR_WINDOW_EXCEEDED,
         "entrance functional: |shift| above half the table");
  VDeep vd = build_vdeep(law, t);
  DeepPotential deep;
  if (law.heavy(Side::Left))
    deep = deep_left_potential(law, t, pot,
                               pot.W - 2 * std::llabs(shift));
  if (x >= 1) {
    if (x > t.Y)
      fail(RW_ERR_WINDOW_EXCEEDED, "entrance functional: x above Y");
    GreenRow row = make_row(t, x, row_cap(law, t));
    return hp_pos(law, t, pot, vd, deep, row, shift);
  }

  // x <= 0: one direct step into the set plus one step up and the
  // positive-start functional from there
  long long yb = -(pot.W - std::llabs(shift));
  if (x <= yb)
    fail(RW_ERR_WINDOW_EXCEEDED, "entrance functional: x below the table");
  KahanSum s, st;
  for (long long y = yb; y <= 0; ++y) {
    double p = law.pmf(y - x);
    if (p == 0.0) continue;
    s.add(p * pot.at(y - shift));
    st.add(p * pot.err_at(y - shift));
  }
  double dm = cdf_below(law, yb - x);
  if (dm > 0.0) {
    if (!deep.valid) fail_no_plateau(law, t);
    s.add(dm * deep.value);
    st.add(dm * deep.err);
  }
  bool hr = law.heavy(Side::Right);
  long long whi = hr ? t.Y : std::min(t.Y, x + law.support_max());
  for (long long w = 1; w <= whi; ++w) {
    double p = law.pmf(w - x);
    if (p == 0.0) continue;
    GreenRow row = make_row(t, w, row_cap(law, t));
    Certified hw = hp_pos(law, t, pot, vd, deep, row, shift);
    s.add(p * hw.value);
    st.add(p * hw.err);
  }
  if (hr)
    st.add(law.tail_prob(double(whi - x), Side::Right) *
           a_box(law, pot, shift));
  return {s.value(), st.value()};
}

Certified limit_green_raw(const LadderTables& t, long long x) {
  if (!t.EZ_finite) return {0.0, 0.0};
  return {t.f_r(x) / t.EZ,
          t.f_r_tol(x) / t.EZ + t.f_r(x) * t.EZ_tol / (t.EZ * t.EZ)};
}

}  // namespace

Certified green_half_line(const LadderTables& t, long long x, long long y) {
  if (x < 1 || y < 1)
    fail(RW_ERR_PRECONDITION, "half-line Green function: x, y >= 1");
  if (x > t.Y + 1 || y > t.Y + 1)
    fail(RW_ERR_WINDOW_EXCEEDED, "half-line Green function: beyond Y + 1");
  KahanSum s, st;
  long long m = std::min(x, y);
  for (long long zz = 1; zz <= m; ++zz) {
    double vm = t.v_minus[size_t(x - zz)], vv = t.v[size_t(y - zz)];
    s.add(vm * vv);
    st.add(t.v_minus_tol[size_t(x - zz)] * vv +
           vm * t.v_tol[size_t(y - zz)]);
  }
  return {s.value(), st.value()};
}

Certified green_half_line_ext(const Law& law, const LadderTables& t,
                              long long x, long long y) {
  if (x >= 1) {
    if (y >= 1) return green_half_line(t, x, y);
    return {0.0, 0.0};
  }
  if (y <= 0) return {x == y ? 1.0 : 0.0, 0.0};
  // x <= 0 < y: one step up, then the interior function
  bool hr = law.heavy(Side::Right);
  long long whi = hr ? t.Y + 1 : std::min(t.Y + 1, x + law.support_max());
  KahanSum s, st;
  for (long long w = 1; w <= whi; ++w) {
    double p = law.pmf(w - x);
    if (p == 0.0) continue;
    Certified g = green_half_line(t, w, y);
    s.add(p * g.value);
    st.add(p * g.err);
  }
  if (hr) {
    // g(w, y) <= y * max v^- * max v for every w
    double vmax = 0.0, vmmax = 0.0;
    for (size_t i = 0; i < t.v.size(); ++i) {
      vmax = std::max(vmax, t.v[i] + t.v_tol[i]);
      vmmax = std::max(vmmax, t.v_minus[i] + t.v_minus_tol[i]);
    }
    st.add(law.tail_prob(double(whi - x), Side::Right) * double(y) * vmax *
           vmmax);
  }
  return {s.value(), st.value()};
}

Certified green_origin(const PotentialTable& pot, long long x, long long y) {
  if (std::llabs(x) > pot.W || std::llabs(y) > pot.W ||
      std::llabs(x - y) > pot.W)
    fail(RW_ERR_WINDOW_EXCEEDED, "origin Green function: beyond the table");
  double v = pot.a_dagger(x) + pot.at(-y) - pot.at(x - y);
  double e = pot.err_at(x) + pot.err_at(-y) + pot.err_at(x - y);
  return {v, e};
}

Certified limit_green(const LadderTables& t, long long x) {
  if (x > t.Y + 1)
    fail(RW_ERR_WINDOW_EXCEEDED, "limit Green function: x above Y + 1");
  return limit_green_raw(t, x);
}

double HittingDist::at(long long y) const {
  if (y > 0 || y < y_lo) return 0.0;
  return prob[size_t(-y)];
}

double HittingDist::tol_at(long long y) const {
  if (y > 0 || y < y_lo) return 0.0;
  return tol[size_t(-y)];
}

HittingDist hitting_dist_low(const Law& law, const LadderTables& t,
                             long long x, long long depth) {
  if (x < 1) fail(RW_ERR_PRECONDITION, "entrance law: x >= 1");
  if (x > t.Y) fail(RW_ERR_WINDOW_EXCEEDED, "entrance law: x above Y");
  if (depth < 0) fail(RW_ERR_INVALID_ARGUMENT, "entrance law: depth >= 0");
  if (depth > (1 << 22)) fail(RW_ERR_CAP_EXCEEDED, "entrance law: depth");
  HittingDist h;
  h.x = x;
  if (depth > 0)
    h.y_lo = -depth;
  else if (!law.heavy(Side::Left))
    h.y_lo = law.support_min() + 1;
  else
    h.y_lo = -t.Y;
  VDeep vd = build_vdeep(law, t);
  GreenRow row = make_row(t, x, row_cap(law, t));
  h.prob.resize(size_t(-h.y_lo) + 1);
  h.tol.resize(size_t(-h.y_lo) + 1);
  for (long long y = h.y_lo; y <= 0; ++y) {
    Certified c = hit_val(law, t, row, vd, y);
    h.prob[size_t(-y)] = c.value;
    h.tol[size_t(-y)] = c.err;
  }
  Certified m = mass_below(law, t, row, vd, h.y_lo);
  h.tail_mass = std::max(0.0, m.value) + m.err;
  return h;
}

Certified hitting_functional(const HittingDist& h,
                             const std::function<double(long long)>& phi,
                             double phi_tail_sup) {
  if (h.tail_mass > 0.0 &&
      !(std::isfinite(phi_tail_sup) && phi_tail_sup >= 0.0))
    fail(RW_ERR_UNBOUNDED,
         "entrance functional: tail mass present and no finite bound on "
         "the integrand below the table");
  KahanSum s, st;
  for (long long y = h.y_lo; y <= 0; ++y) {
    double f = phi(y);
    s.add(h.prob[size_t(-y)] * f);
    st.add(h.tol[size_t(-y)] * std::abs(f));
  }
  if (h.tail_mass > 0.0) st.add(h.tail_mass * phi_tail_sup);
  return {s.value(), st.value()};
}

Certified limit_hitting_minus_inf(const Law& law, const LadderTables& t,
                                  long long y) {
  if (y < 0) fail(RW_ERR_PRECONDITION, "deep entrance law: y >= 0");
  if (!t.EZ_finite)
    fail(RW_ERR_NOT_APPLICABLE,
         "deep entrance law: the ascending height has infinite mean");
  Certified main = {t.f_r(-y) / t.EZ,
                    t.f_r_tol(-y) / t.EZ +
                        t.f_r(-y) * t.EZ_tol / (t.EZ * t.EZ)};

  // independent route through the harmonic function: the two must agree
  KahanSum s, st;
  for (long long w = 1; w <= t.Y + 1; ++w) {
    double p = law.pmf(y + w);
    if (p == 0.0) continue;
    s.add(t.f_r(w) * p);
    st.add(t.f_r_tol(w) * p);
  }
  double vmsup = 0.0;
  for (size_t i = 0; i < t.v_minus.size(); ++i)
    vmsup = std::max(vmsup, t.v_minus[i] + t.v_minus_tol[i]);
  st.add(t.f_r(t.Y + 1) * law.tail_prob(double(t.Y + 1 + y), Side::Right) +
         vmsup * law.tail_excess(t.Y + 1 + y, Side::Right));
  double alt = s.value() / t.EZ;
  double alt_tol =
      st.value() / t.EZ + s.value() * t.EZ_tol / (t.EZ * t.EZ);
  if (std::abs(alt - main.value) > alt_tol + main.err + 1e-12)
    fail(RW_ERR_INTERNAL, "deep entrance law: routes disagree");
  return main;
}

DeepPotential deep_left_potential(const Law& law, const LadderTables& t,
                                  const PotentialTable& pot,
                                  long long w_min) {
  DeepPotential d;
  d.w_min = w_min;
  if (!law.heavy(Side::Left) || law.heavy(Side::Right) || !t.EZ_finite ||
      t.EhatZ_finite)
    return d;
  long long rmax = law.support_max();
  if (w_min <= rmax || pot.W < rmax) return d;
  VDeep vd = build_vdeep(law, t);
  if (!vd.valid) return d;

  // limit value sum_u P[Z > u] a(u) / EZ; the same sum without the
  // normalisation multiplies the renewal deviation at depth w - rmax
  KahanSum num, numtol;
  for (long long u = 1; u < (long long)t.Z_pmf.size(); ++u) {
    double fr = t.f_r(-u), a = pot.at(u);
    num.add(fr * a);
    numtol.add(t.f_r_tol(-u) * std::abs(a) + fr * pot.err_at(u));
  }
  d.value = num.value() / t.EZ;
  double vtol = numtol.value() / t.EZ +
                std::abs(d.value) * t.EZ_tol / t.EZ;
  d.err = vtol + (num.value() + numtol.value()) * vd.dev(w_min - rmax);
  d.valid = true;
  return d;
}

Certified hitting_potential(const Law& law, const LadderTables& t,
                            const PotentialTable& pot, long long x,
                            long long shift) {
  return hp_any(law, t, pot, x, shift);
}

Certified verify_eqPS(const Law& law, const LadderTables& t,
                      const PotentialTable& pot, long long x, long long y) {
  Certified hp = hp_any(law, t, pot, x, y);
  Certified g = green_half_line_ext(law, t, x, y);
  Certified lg = limit_green_raw(t, x);
  double lhs = pot.at(x - y) - hp.value + g.value;
  double rhs = pot.A * lg.value;
  double slack =
      pot.err_at(x - y) + hp.err + g.err + pot.A * lg.err;
  return {std::abs(lhs - rhs), slack};
}

Certified eqPS_y_spread(const Law& law, const LadderTables& t,
                        const PotentialTable& pot, long long x,
                        const std::vector<long long>& ys) {
  if (ys.size() < 2)
    fail(RW_ERR_INVALID_ARGUMENT, "spread needs at least two points");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo, emax = 0.0;
  for (long long y : ys) {
    Certified hp = hp_any(law, t, pot, x, y);
    Certified g = green_half_line_ext(law, t, x, y);
    double l = pot.at(x - y) - hp.value + g.value;
    double e = pot.err_at(x - y) + hp.err + g.err;
    lo = std::min(lo, l);
    hi = std::max(hi, l);
    emax = std::max(emax, e);
  }
  return {hi - lo, 2.0 * emax};
}

Certified verify_corollary1(const Law& law, const LadderTables& t,
                            const PotentialTable& pot, long long x) {
  if (x < 1) fail(RW_ERR_PRECONDITION, "x >= 1");
  Certified hp = hp_any(law, t, pot, x, 0);
  Certified lg = limit_green_raw(t, x);
  double res = pot.at(x) - hp.value - pot.A * lg.value;
  double slack = pot.err_at(x) + hp.err + pot.A * lg.err;
  return {std::abs(res), slack};
}

}  // namespace rw
