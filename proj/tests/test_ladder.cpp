#include <cmath>
#include <sstream>

#include "doctest.h"
#include "kernel.hpp"
#include "ladder.hpp"
#include "law.hpp"
#include "status.hpp"
#include "zeta.hpp"

using rw::KilledRunOptions;
using rw::LadderReport;
using rw::LadderTables;
using rw::Law;
using rw::Side;
using rw::TailModel;

namespace {

Law srw() { return Law::build({{-1, 0.5}, {1, 0.5}}, {}, {}); }

Law lc23() { return Law::build({{-1, 2.0 / 3.0}, {2, 1.0 / 3.0}}, {}, {}); }

Law asym1() {
  return Law::build(
      {{-3, 0.1}, {-1, 0.3}, {0, 0.1}, {1, 0.4}, {2, 0.1}}, {}, {});
}

Law heavy15() {
  double t0 = rw::hurwitz_tail(2.5, 2).value;
  double t1 = rw::hurwitz_tail(1.5, 2).value;
  double A = (3.0 * 0.25 + 2.0 * 0.35 - 1.0) / (t1 - t0);
  double qm1 = 1.0 - 0.25 - 0.35 - A * t0;
  return Law::build({{-1, qm1}, {1, 0.35}, {2, 0.25}},
                    TailModel{true, 1.5, A, 2}, {}, 1e-10, 1e-9);
}

Law bothheavy() {
  // symmetric, so the mean vanishes by construction
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

std::string describe(const LadderTables& t, const LadderReport& r) {
  std::ostringstream os;
  os.precision(3);
  os << "res_up " << t.residual_up << " res_dn " << t.residual_down
     << " | ea " << r.entrance_asc << "/" << r.entrance_asc_slack << " ed "
     << r.entrance_desc << "/" << r.entrance_desc_slack << " edc "
     << r.entrance_desc_cum << "/" << r.entrance_desc_cum_slack << " at "
     << r.asc_tail << "/" << r.asc_tail_slack << " harm " << r.harmonic
     << "/" << r.harmonic_slack << " mean " << r.mean_id << "/"
     << r.mean_id_slack << " prod " << r.mean_product << "/"
     << r.mean_product_slack << " xv " << r.cross_v << "/" << r.cross_v_slack
     << " xvm " << r.cross_v_minus << "/" << r.cross_v_minus_slack << " cu "
     << r.c_up << "/" << r.c_up_slack << " cd " << r.c_down << "/"
     << r.c_down_slack << " mu " << r.mass_up << "/" << r.mass_up_slack
     << " md " << r.mass_down << "/" << r.mass_down_slack << " vg "
     << r.v_limit_gap << " vmg " << r.v_minus_limit_gap << " cres_u "
     << t.up.conv_residual << " cres_d " << t.down.conv_residual
     << " gap_u " << t.up.mass_gap << " gap_d " << t.down.mass_gap;
  return os.str();
}

void check_within_slack(const LadderReport& r) {
  CHECK(r.entrance_asc <= r.entrance_asc_slack);
  CHECK(r.entrance_desc <= r.entrance_desc_slack);
  CHECK(r.entrance_desc_cum <= r.entrance_desc_cum_slack);
  CHECK(r.asc_tail <= r.asc_tail_slack);
  CHECK(r.harmonic <= r.harmonic_slack);
  CHECK(r.mean_id <= r.mean_id_slack);
  CHECK(r.mean_product <= r.mean_product_slack);
  CHECK(r.cross_v <= r.cross_v_slack);
  CHECK(r.cross_v_minus <= r.cross_v_minus_slack);
  CHECK(r.c_up <= r.c_up_slack);
  CHECK(r.c_down <= r.c_down_slack);
  CHECK(r.mass_up <= r.mass_up_slack);
  CHECK(r.mass_down <= r.mass_down_slack);
  CHECK(r.super_mult == 0.0);
  CHECK(r.half_ratio == 0.0);
  CHECK(r.bracket == 0.0);
}

}  // namespace

TEST_CASE("simple walk: every ladder object is known in closed form") {
  Law law = srw();
  LadderTables t = rw::ladder_tables(law, 64);

  CHECK(t.c == doctest::Approx(0.5).epsilon(1e-8));
  REQUIRE(t.Z_pmf.size() == 1);
  CHECK(t.Z_pmf[0] == 1.0);
  CHECK(t.Z_pmf_tol[0] == 0.0);
  REQUIRE(t.hatZ_pmf.size() == 1);
  CHECK(t.hatZ_pmf[0] == 1.0);
  CHECK(t.residual_up == 0.0);
  CHECK(t.residual_down == 0.0);

  for (long long x = 0; x <= 64; ++x) {
    CHECK(std::fabs(t.v_at(x) - 1.0) <= t.v_tol[size_t(x)] + 1e-12);
    CHECK(std::fabs(t.v_minus_at(x) - 2.0) <=
          t.v_minus_tol[size_t(x)] + 1e-7);
    CHECK(t.U_as(x) == doctest::Approx(double(x + 1)).epsilon(1e-10));
    CHECK(t.V_as(x) == doctest::Approx(2.0 * double(x + 1)).epsilon(1e-7));
  }
  CHECK(t.f_r(0) == 1.0);
  CHECK(t.f_r(-1) == 0.0);
  CHECK(t.f_l(0) == 1.0);
  CHECK(t.f_l(-1) == 0.0);
  for (long long x = 1; x <= 65; ++x) {
    CHECK(t.f_r(x) == doctest::Approx(2.0 * double(x)).epsilon(1e-7));
    CHECK(t.f_l(x) == doctest::Approx(2.0 * double(x)).epsilon(1e-7));
  }
  CHECK(t.f_r(0) < t.f_r(1));

  CHECK(t.EZ_finite);
  CHECK(t.EZ == 1.0);
  CHECK(t.EZ_tol == 0.0);
  CHECK(t.EhatZ_finite);
  CHECK(t.EhatZ == -1.0);

  CHECK(t.up.mass_gap <= 1e-9);
  CHECK(t.down.mass_gap <= 1e-9);
  CHECK(t.up.conv_residual <= 1e-9);
  CHECK(t.down.conv_residual <= 1e-9);

  LadderReport r = rw::ladder_report(law, t);
  MESSAGE("srw: " << describe(t, r));
  check_within_slack(r);
  CHECK(!r.drift_ratio_applies);
  CHECK(r.v_limit_gap <= 1e-7);
  CHECK(r.v_minus_limit_gap <= 1e-7);
  CHECK(r.harmonic <= 1e-8);
  CHECK(r.mean_product <= 1e-8);
}

TEST_CASE("up jumps of size two, unit down steps: descending side exact") {
  Law law = lc23();
  LadderTables t = rw::ladder_tables(law, 200);

  // the walk steps down through every level, so the strict descending
  // ladder height is one and v^- is flat at 1/c
  REQUIRE(t.hatZ_pmf.size() == 1);
  CHECK(t.hatZ_pmf[0] == 1.0);
  CHECK(t.residual_down == 0.0);
  CHECK(t.EhatZ == -1.0);
  for (long long x = 0; x <= 200; ++x)
    CHECK(t.v_minus_at(x) == doctest::Approx(1.0 / t.c).epsilon(1e-9));

  // ascending entrance lives on {1, 2}
  REQUIRE(t.Z_pmf.size() == 2);
  CHECK(t.Z_pmf[0] + t.Z_pmf[1] ==
        doctest::Approx(1.0).epsilon(1e-7));

  // sigma^2 = 2 with E[-hatZ] = 1 forces c EZ = 1
  CHECK(t.EZ_finite);
  CHECK(t.c * t.EZ == doctest::Approx(1.0).epsilon(1e-7));

  LadderReport r = rw::ladder_report(law, t);
  MESSAGE("lc23: " << describe(t, r));
  check_within_slack(r);
  CHECK(r.harmonic <= 1e-8);
  CHECK(r.mean_product <= 1e-8);
  CHECK(r.v_limit_gap <= 1e-6);
}

TEST_CASE("two-sided bounded law: all identities through the killed runs") {
  Law law = asym1();
  LadderTables t = rw::ladder_tables(law, 200);

  CHECK(t.Z_pmf.size() == 2);
  CHECK(t.hatZ_pmf.size() == 3);
  CHECK(t.EZ_finite);
  CHECK(t.EhatZ_finite);

  LadderReport r = rw::ladder_report(law, t);
  MESSAGE("asym1: " << describe(t, r));
  check_within_slack(r);
  CHECK(r.entrance_asc <= 1e-8);
  CHECK(r.entrance_desc <= 1e-8);
  CHECK(r.asc_tail <= 1e-8);
  CHECK(r.harmonic <= 1e-8);
  CHECK(r.mean_id <= 1e-8);
  CHECK(r.mean_product <= 1e-8);
  CHECK(!r.drift_ratio_applies);
}

TEST_CASE("heavy left tail: finite ascending mean, infinite descending") {
  Law law = heavy15();
  LadderTables t = rw::ladder_tables(law, 600);

  REQUIRE(t.Z_pmf.size() == 2);  // bounded up moves
  CHECK(t.EZ_finite);
  CHECK(!t.EhatZ_finite);
  // the descending entrance is rebuilt from v, one entry per height
  REQUIRE(t.hatZ_pmf.size() == 600);
  CHECK(t.residual_down == 0.0);

  LadderReport r = rw::ladder_report(law, t);
  MESSAGE("heavy15: " << describe(t, r));
  check_within_slack(r);
  CHECK(r.entrance_asc <= 1e-5);
  CHECK(r.entrance_desc <= 1e-5);
  CHECK(r.entrance_desc_cum <= 5e-5);
  CHECK(r.asc_tail <= 1e-5);
  CHECK(r.harmonic <= 1e-5);
  CHECK(r.mean_id <= 1e-5);
  CHECK(r.mean_product == 0.0);  // sigma^2 infinite: not applicable
  CHECK(r.v_limit_gap <= 1e-6);
  CHECK(r.drift_ratio_applies);
  CHECK(r.drift_ratio_lo >= 0.8);
  CHECK(r.drift_ratio_hi <= 2.2);

  // the mirrored walk swaps the two ladders
  Law mir = law.mirrored();
  LadderTables m = rw::ladder_tables(mir, 600);
  REQUIRE(m.Z_pmf.size() == 600);
  REQUIRE(m.hatZ_pmf.size() == 2);
  CHECK(!m.EZ_finite);
  CHECK(m.EhatZ_finite);
  double gap = 0.0, budget = 0.0;
  for (size_t j = 0; j < 600; ++j) {
    gap = std::max(gap, std::fabs(m.Z_pmf[j] - t.hatZ_pmf[j]));
    budget = std::max(budget, m.Z_pmf_tol[j] + t.hatZ_pmf_tol[j]);
  }
  MESSAGE("heavy15 mirror: entrance gap " << gap << " budget " << budget);
  CHECK(gap <= budget + 1e-9);
  LadderReport rm = rw::ladder_report(mir, m);
  MESSAGE("heavy15 mirror: " << describe(m, rm));
  check_within_slack(rm);
  CHECK(rm.entrance_asc <= 1e-5);
  CHECK(rm.entrance_desc <= 1e-5);
  CHECK(!rm.drift_ratio_applies);
}

TEST_CASE("ladder argument validation") {
  CHECK(code_of([] { rw::ladder_tables(srw(), 0); }) ==
        RW_ERR_INVALID_ARGUMENT);
  CHECK(code_of([] { rw::ladder_tables(srw(), 20000); }) ==
        RW_ERR_INVALID_ARGUMENT);
  // heavy on both sides: the window must cover the requested table
  CHECK(code_of([] {
          rw::ladder_tables(bothheavy(), 700, KilledRunOptions{512, 256},
                            KilledRunOptions{512, 256});
        }) == RW_ERR_INVALID_ARGUMENT);
  // window narrower than a single jump
  CHECK(code_of([] {
          rw::killed_run(asym1(), KilledRunOptions{2, 256});
        }) == RW_ERR_INVALID_ARGUMENT);
}
