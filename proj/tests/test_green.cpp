#include <cmath>
#include <limits>

#include "doctest.h"
#include "green.hpp"
#include "kernel.hpp"
#include "ladder.hpp"
#include "law.hpp"
#include "status.hpp"
#include "zeta.hpp"

using rw::Certified;
using rw::HittingDist;
using rw::LadderTables;
using rw::Law;
using rw::PotentialTable;
using rw::Side;
using rw::TailModel;

namespace {

Law srw() { return Law::build({{-1, 0.5}, {1, 0.5}}, {}, {}); }

Law lc23() { return Law::build({{-1, 2.0 / 3.0}, {2, 1.0 / 3.0}}, {}, {}); }

Law asym1() {
  return Law::build(
      {{-3, 0.1}, {-1, 0.3}, {0, 0.1}, {1, 0.4}, {2, 0.1}}, {}, {});
}

Law heavy_left(double alpha) {
  double t0 = rw::hurwitz_tail(alpha + 1.0, 2).value;
  double t1 = rw::hurwitz_tail(alpha, 2).value;
  double A = (3.0 * 0.25 + 2.0 * 0.35 - 1.0) / (t1 - t0);
  double qm1 = 1.0 - 0.25 - 0.35 - A * t0;
  return Law::build({{-1, qm1}, {1, 0.35}, {2, 0.25}},
                    TailModel{true, alpha, A, 2}, {}, 1e-10, 1e-9);
}

Law bothheavy() {
  double t0 = rw::hurwitz_tail(2.5, 2).value;
  double A = 0.15 / t0;
  return Law::build({{-1, 0.25}, {0, 0.2}, {1, 0.25}},
                    TailModel{true, 1.5, A, 2}, TailModel{true, 1.5, A, 2},
                    1e-10, 1e-9);
}

template <typename F>
int code_of(F&& f) {
  try {
    f();
  } catch (const rw::Error& e) {
    return e.code();
  }
  return -1;
}

// worst residual and slack of the pointwise identity over a grid
struct Worst {
  double res = 0.0, slack = 0.0;
  bool certified = true;
  void take(const Certified& c) {
    res = std::max(res, c.value);
    slack = std::max(slack, c.err);
    if (c.value > c.err + 1e-12) certified = false;
  }
};

}  // namespace

TEST_CASE("simple walk: Green functions and entrance laws in closed form") {
  Law law = srw();
  LadderTables t = rw::ladder_tables(law, 64);
  PotentialTable pot = rw::potential_kernel(law, 96, 1e-9);

  // g(x, y) = 2 min(x, y); the value at (1, 1) is 1/c
  for (long long x = 1; x <= 8; ++x)
    for (long long y = 1; y <= 8; ++y) {
      Certified g = rw::green_half_line(t, x, y);
      CHECK(std::fabs(g.value - 2.0 * double(std::min(x, y))) <=
            g.err + 1e-7);
    }
  Certified g11 = rw::green_half_line(t, 1, 1);
  CHECK(std::fabs(g11.value - 1.0 / t.c) <= g11.err + t.c_tol + 1e-7);

  // start inside the killing set: the own visit plus one step
  CHECK(rw::green_half_line_ext(law, t, 0, 0).value == 1.0);
  CHECK(rw::green_half_line_ext(law, t, -2, -2).value == 1.0);
  CHECK(rw::green_half_line_ext(law, t, -2, 0).value == 0.0);
  CHECK(rw::green_half_line_ext(law, t, 3, -1).value == 0.0);
  Certified g01 = rw::green_half_line_ext(law, t, 0, 1);
  CHECK(std::fabs(g01.value - 1.0) <= g01.err + 1e-7);

  // origin-killed walk: g(x, y) = a!(x) + a(-y) - a(x - y)
  CHECK(rw::green_origin(pot, 3, 3).value == doctest::Approx(6.0));
  CHECK(rw::green_origin(pot, 1, -1).value == doctest::Approx(0.0));
  CHECK(rw::green_origin(pot, 0, 0).value == doctest::Approx(1.0));
  CHECK(rw::green_origin(pot, 2, 5).value == doctest::Approx(4.0));

  // the walk can only enter at the boundary point
  HittingDist h = rw::hitting_dist_low(law, t, 3);
  CHECK(h.y_lo == 0);
  CHECK(h.tail_mass == 0.0);
  CHECK(std::fabs(h.at(0) - 1.0) <= h.tol_at(0) + 1e-7);

  Certified mean =
      rw::hitting_functional(h, [](long long y) { return double(y); }, 0.0);
  CHECK(std::fabs(mean.value) <= mean.err + 1e-9);

  // H^{-inf} is the single atom at 0
  Certified l0 = rw::limit_hitting_minus_inf(law, t, 0);
  CHECK(std::fabs(l0.value - 1.0) <= l0.err + 1e-7);
  Certified l1 = rw::limit_hitting_minus_inf(law, t, 1);
  CHECK(std::fabs(l1.value) <= l1.err + 1e-12);

  // g(x, inf) = f_r(x)/EZ = 2x
  for (long long x = 1; x <= 8; ++x) {
    Certified lg = rw::limit_green(t, x);
    CHECK(std::fabs(lg.value - 2.0 * double(x)) <= lg.err + 1e-6);
  }

  Worst ps, c1;
  for (long long x = -4; x <= 8; ++x)
    for (long long y = -5; y <= 5; ++y)
      ps.take(rw::verify_eqPS(law, t, pot, x, y));
  for (long long x = 1; x <= 8; ++x)
    c1.take(rw::verify_corollary1(law, t, pot, x));
  MESSAGE("srw: eqPS " << ps.res << "/" << ps.slack << " cor1 " << c1.res
                       << "/" << c1.slack);
  CHECK(ps.certified);
  CHECK(ps.res <= 1e-8);
  CHECK(c1.certified);
  CHECK(c1.res <= 1e-8);

  Certified sp = rw::eqPS_y_spread(law, t, pot, 3, {-4, -2, -1, 0, 1, 2});
  CHECK(sp.value <= sp.err + 1e-12);
  CHECK(sp.value <= 1e-8);

  CHECK(code_of([&] { rw::green_half_line(t, 0, 1); }) ==
        RW_ERR_PRECONDITION);
  CHECK(code_of([&] { rw::green_half_line(t, 1, t.Y + 2); }) ==
        RW_ERR_WINDOW_EXCEEDED);
  CHECK(code_of([&] { rw::hitting_dist_low(law, t, 0); }) ==
        RW_ERR_PRECONDITION);
  CHECK(code_of([&] { rw::limit_hitting_minus_inf(law, t, -1); }) ==
        RW_ERR_PRECONDITION);
  CHECK(code_of([&] { rw::hitting_potential(law, t, pot, 2, 80); }) ==
        RW_ERR_WINDOW_EXCEEDED);
}

TEST_CASE("left-continuous walk: entrance concentrates at the boundary") {
  Law law = lc23();
  LadderTables t = rw::ladder_tables(law, 200);
  PotentialTable pot = rw::potential_kernel(law, 64, 1e-10);

  HittingDist h = rw::hitting_dist_low(law, t, 4);
  CHECK(h.y_lo == 0);
  CHECK(h.tail_mass == 0.0);
  CHECK(std::fabs(h.at(0) - 1.0) <= h.tol_at(0) + 1e-8);

  Worst ps, c1;
  for (long long x = -2; x <= 10; ++x)
    for (long long y = -4; y <= 4; ++y)
      ps.take(rw::verify_eqPS(law, t, pot, x, y));
  for (long long x = 1; x <= 12; ++x)
    c1.take(rw::verify_corollary1(law, t, pot, x));
  MESSAGE("lc23: eqPS " << ps.res << "/" << ps.slack << " cor1 " << c1.res
                        << "/" << c1.slack);
  CHECK(ps.certified);
  CHECK(ps.res <= 1e-7);
  CHECK(c1.certified);
  CHECK(c1.res <= 1e-7);
}

TEST_CASE("bounded asymmetric walk: identities, duality, reversal") {
  Law law = asym1();
  LadderTables t = rw::ladder_tables(law, 200);
  PotentialTable pot = rw::potential_kernel(law, 96, 1e-9);

  // defining one-step relation, independently of the product formula
  for (long long x = 1; x <= 6; ++x)
    for (long long y = 1; y <= 6; ++y) {
      Certified g = rw::green_half_line(t, x, y);
      double s = 0.0, se = 0.0;
      for (long long w = std::max<long long>(1, x - 3); w <= x + 2; ++w) {
        double p = law.pmf(w - x);
        if (p == 0.0) continue;
        Certified gw = rw::green_half_line(t, w, y);
        s += p * gw.value;
        se += p * gw.err;
      }
      if (x == y) s += 1.0;
      CHECK(std::fabs(g.value - s) <= g.err + se + 1e-10);
    }

  // path reversal: killed visits of the mirrored walk swap the roles
  Law mir = law.mirrored();
  LadderTables tm = rw::ladder_tables(mir, 200);
  for (long long x = 1; x <= 10; ++x)
    for (long long y = 1; y <= 10; ++y) {
      Certified g = rw::green_half_line(t, x, y);
      Certified gr = rw::green_half_line(tm, y, x);
      CHECK(std::fabs(g.value - gr.value) <= g.err + gr.err + 1e-9);
    }

  // entrance from 1 is the strict descending height shifted by one
  HittingDist h1 = rw::hitting_dist_low(law, t, 1);
  CHECK(h1.tail_mass == 0.0);
  for (long long y = -2; y <= 0; ++y)
    CHECK(std::fabs(h1.at(y) - t.hatZ_pmf[size_t(-y)]) <=
          h1.tol_at(y) + t.hatZ_pmf_tol[size_t(-y)] + 1e-10);

  // total mass one, and E_1[S_T] = 1 + E[hatZ]
  Certified mass =
      rw::hitting_functional(h1, [](long long) { return 1.0; }, 0.0);
  CHECK(std::fabs(mass.value - 1.0) <= mass.err + 1e-8);
  Certified mean =
      rw::hitting_functional(h1, [](long long y) { return double(y); }, 0.0);
  CHECK(std::fabs(mean.value - (1.0 + t.EhatZ)) <=
        mean.err + t.EhatZ_tol + 1e-7);

  // the deep entrance law is positive at 0 exactly when EZ < inf
  Certified l0 = rw::limit_hitting_minus_inf(law, t, 0);
  CHECK(l0.value > 0.1);
  Certified l2 = rw::limit_hitting_minus_inf(law, t, 2);
  CHECK(std::fabs(l2.value) <= l2.err + 1e-12);

  Worst ps, c1;
  for (long long x = -3; x <= 8; ++x)
    for (long long y = -4; y <= 4; ++y)
      ps.take(rw::verify_eqPS(law, t, pot, x, y));
  for (long long x = 1; x <= 32; ++x)
    c1.take(rw::verify_corollary1(law, t, pot, x));
  MESSAGE("asym1: eqPS " << ps.res << "/" << ps.slack << " cor1 " << c1.res
                         << "/" << c1.slack);
  CHECK(ps.certified);
  CHECK(ps.res <= 1e-7);
  CHECK(c1.certified);
  CHECK(c1.res <= 1e-7);

  Certified sp =
      rw::eqPS_y_spread(law, t, pot, 2, {-8, -4, -2, -1, 0, 1, 2, 3});
  CHECK(sp.value <= sp.err + 1e-12);
  CHECK(sp.value <= 1e-7);
}

TEST_CASE("heavy left tail 3/2: deep plateau carries the entrance sums") {
  Law law = heavy_left(1.5);
  LadderTables t = rw::ladder_tables(law, 600);
  PotentialTable pot = rw::potential_kernel(law, 600, 1e-6);

  REQUIRE(t.EZ_finite);
  REQUIRE(!t.EhatZ_finite);

  // the potential kernel flattens on the heavy side; the plateau value
  // must sit under the far end of the table and tighten with depth
  rw::DeepPotential dp = rw::deep_left_potential(law, t, pot, 300);
  REQUIRE(dp.valid);
  CHECK(dp.err <= 1e-4);
  double gap300 = std::fabs(dp.value - pot.at(-300));
  double gap600 = std::fabs(dp.value - pot.at(-600));
  MESSAGE("heavy15 plateau: " << dp.value << " +- " << dp.err << " gap300 "
                              << gap300 << " gap600 " << gap600);
  CHECK(gap600 <= gap300 + 1e-3);
  CHECK(gap600 <= 0.1);

  // entrance from 1 is the strict descending height shifted by one
  HittingDist h1 = rw::hitting_dist_low(law, t, 1);
  CHECK(h1.tail_mass > 0.0);
  for (long long y = -40; y <= 0; ++y)
    CHECK(std::fabs(h1.at(y) - t.hatZ_pmf[size_t(-y)]) <=
          h1.tol_at(y) + t.hatZ_pmf_tol[size_t(-y)] + 1e-10);
  double total = h1.tail_mass, toltot = 0.0;
  for (size_t i = 0; i < h1.prob.size(); ++i) {
    total += h1.prob[i];
    toltot += h1.tol[i];
  }
  CHECK(total >= 1.0 - toltot - 1e-9);
  CHECK(total - h1.tail_mass <= 1.0 + toltot);

  // an unbounded integrand over a distribution with tail mass has no
  // certified sum
  CHECK(code_of([&] {
          rw::hitting_functional(
              h1, [](long long y) { return double(y); },
              std::numeric_limits<double>::infinity());
        }) == RW_ERR_UNBOUNDED);
  Certified mass = rw::hitting_functional(
      h1, [](long long) { return 1.0; }, 1.0);
  CHECK(std::fabs(mass.value - 1.0) <= mass.err + 1e-9);

  CHECK(rw::limit_hitting_minus_inf(law, t, 0).value > 0.2);

  Worst ps, c1;
  for (long long x : {1, 2, 3, 5, 8, 12})
    for (long long y : {-6, -3, -1, 0, 1, 2})
      ps.take(rw::verify_eqPS(law, t, pot, x, y));
  for (long long x : {0, -1})
    for (long long y : {-2, 0, 1})
      ps.take(rw::verify_eqPS(law, t, pot, x, y));
  for (long long x : {1, 2, 3, 4, 6, 8, 12})
    c1.take(rw::verify_corollary1(law, t, pot, x));
  MESSAGE("heavy15: eqPS " << ps.res << "/" << ps.slack << " cor1 "
                           << c1.res << "/" << c1.slack);
  CHECK(ps.certified);
  CHECK(ps.res <= 1e-6);
  CHECK(c1.certified);
  CHECK(c1.res <= 1e-6);

  Certified sp =
      rw::eqPS_y_spread(law, t, pot, 3, {-16, -8, -4, -2, -1, 0, 1, 2});
  CHECK(sp.value <= sp.err + 1e-12);
  CHECK(sp.value <= 1e-6);

  // far left of a bounded-right walk the set cannot be overflown
  CHECK(rw::green_half_line_ext(law, t, -2, 5).value == 0.0);
}

TEST_CASE("heavy left tail 9/5: same apparatus at a slower tail") {
  Law law = heavy_left(1.8);
  LadderTables t = rw::ladder_tables(law, 600);
  PotentialTable pot = rw::potential_kernel(law, 600, 1e-6);

  REQUIRE(t.EZ_finite);
  REQUIRE(!t.EhatZ_finite);

  Worst ps, c1;
  for (long long x : {1, 2, 3, 5, 8, 12})
    for (long long y : {-4, -1, 0, 2})
      ps.take(rw::verify_eqPS(law, t, pot, x, y));
  for (long long x : {1, 2, 3, 6, 12})
    c1.take(rw::verify_corollary1(law, t, pot, x));
  MESSAGE("heavy18: eqPS " << ps.res << "/" << ps.slack << " cor1 "
                           << c1.res << "/" << c1.slack);
  CHECK(ps.certified);
  CHECK(ps.res <= 1e-6);
  CHECK(c1.certified);
  CHECK(c1.res <= 1e-6);

  Certified sp = rw::eqPS_y_spread(law, t, pot, 2, {-8, -2, 0, 1});
  CHECK(sp.value <= sp.err + 1e-12);
  CHECK(sp.value <= 1e-6);
}

TEST_CASE("heavy right tail: infinite ascending mean branch") {
  Law law = heavy_left(1.5).mirrored();
  LadderTables t = rw::ladder_tables(law, 200);
  PotentialTable pot = rw::potential_kernel(law, 160, 1e-6);

  REQUIRE(!t.EZ_finite);

  // with EZ = inf the Green function vanishes at infinity and the
  // potential kernel is invariant under the entrance law
  CHECK(rw::limit_green(t, 5).value == 0.0);
  CHECK(code_of([&] { rw::limit_hitting_minus_inf(law, t, 0); }) ==
        RW_ERR_NOT_APPLICABLE);

  HittingDist h = rw::hitting_dist_low(law, t, 5);
  CHECK(h.y_lo == -1);
  CHECK(h.tail_mass == 0.0);
  double mass = h.at(0) + h.at(-1);
  CHECK(std::fabs(mass - 1.0) <= h.tol_at(0) + h.tol_at(-1) + 1e-6);

  Worst c1;
  for (long long x = 1; x <= 100; x += 3)
    c1.take(rw::verify_corollary1(law, t, pot, x));
  MESSAGE("heavy right: cor1 " << c1.res << "/" << c1.slack);
  CHECK(c1.certified);
  CHECK(c1.res <= 1e-4);

  Worst ps;
  for (long long y : {-1, 0, 1, 3})
    ps.take(rw::verify_eqPS(law, t, pot, 2, y));
  MESSAGE("heavy right: eqPS " << ps.res << "/" << ps.slack);
  CHECK(ps.certified);
}

TEST_CASE("two heavy tails: entrance functionals are refused honestly") {
  Law law = bothheavy();
  LadderTables t =
      rw::ladder_tables(law, 256, rw::KilledRunOptions{512, 256},
                        rw::KilledRunOptions{512, 256});
  PotentialTable pot = rw::potential_kernel(law, 96, 1e-5);
  CHECK(code_of([&] { rw::hitting_potential(law, t, pot, 3, 0); }) ==
        RW_ERR_NOT_APPLICABLE);
  CHECK(!rw::deep_left_potential(law, t, pot, 80).valid);
}
