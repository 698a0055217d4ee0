#include <cmath>

#include "doctest.h"
#include "kernel.hpp"
#include "law.hpp"
#include "status.hpp"
#include "zeta.hpp"

using rw::Law;
using rw::PotentialTable;
using rw::Side;
using rw::TailModel;

namespace {

Law srw() { return Law::build({{-1, 0.5}, {1, 0.5}}, {}, {}); }

// left-continuous: down-steps of size 1 only, so a(x) = x/sigma^2 = x/2
// for x > 0 exactly
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

const PotentialTable& srw_table() {
  static PotentialTable t = rw::potential_kernel(srw(), 200, 1e-8);
  return t;
}

const PotentialTable& heavy_table() {
  static PotentialTable t = rw::potential_kernel(heavy15(), 200, 1e-6);
  return t;
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

void check_subadditive(const PotentialTable& t) {
  for (long long x = -t.W; x <= t.W; ++x)
    for (long long y = -t.W; y <= t.W; ++y) {
      long long s = x + y;
      if (s < -t.W || s > t.W) continue;
      double slack = t.err_at(x) + t.err_at(y) + t.err_at(s) + 1e-12;
      REQUIRE(t.at(s) <= t.at(x) + t.at(y) + slack);
    }
}

}  // namespace

TEST_CASE("srw potential kernel is |x|") {
  const PotentialTable& t = srw_table();
  CHECK(t.at(0) == 0.0);
  CHECK(t.err_at(0) == 0.0);
  CHECK(t.sigma2_finite);
  CHECK(t.sigma2 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(t.A == 0.5);
  for (long long x = -200; x <= 200; ++x) {
    double exact = double(std::llabs(x));
    CHECK(std::fabs(t.at(x) - exact) <= 1e-8);
    // certified bound honesty against the closed form
    CHECK(std::fabs(t.at(x) - exact) <= t.err_at(x) + 1e-13);
    CHECK(t.err_at(x) <= 1e-8);
  }
  CHECK(t.a_dagger(0) == 1.0);
  CHECK(t.a_dagger(3) == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(t.abar(7) == t.abar(-7));
}

TEST_CASE("left-continuous law: a(x) = x/2 for x > 0") {
  PotentialTable t = rw::potential_kernel(lc23(), 60, 1e-10);
  CHECK(t.sigma2 == doctest::Approx(2.0).epsilon(1e-14));
  for (long long x = 1; x <= 60; ++x)
    CHECK(std::fabs(t.at(x) - 0.5 * double(x)) <= t.err_at(x) + 1e-10);
  // negative side from the harmonicity recursion, exact rationals
  CHECK(t.at(-1) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(t.at(-2) == doctest::Approx(1.25).epsilon(1e-9));
  CHECK(t.at(-3) == doctest::Approx(1.875).epsilon(1e-9));
  CHECK(t.at(-4) == doctest::Approx(2.3125).epsilon(1e-9));
}

TEST_CASE("potential kernel positivity and symmetry of abar") {
  for (const PotentialTable& t : {srw_table(), heavy_table()}) {
    for (long long x = -t.W; x <= t.W; ++x) {
      if (x == 0) continue;
      CHECK(t.at(x) > 0.0);
      CHECK(t.abar(x) == t.abar(-x));
    }
  }
}

TEST_CASE("subadditivity over all in-window triples") {
  check_subadditive(srw_table());
  PotentialTable t = rw::potential_kernel(asym1(), 96, 1e-9);
  check_subadditive(t);
  check_subadditive(heavy_table());
}

TEST_CASE("harmonicity residuals within certified budget") {
  CHECK(rw::check_harmonicity(srw(), srw_table(), 200) <= 1e-10);
  PotentialTable ta = rw::potential_kernel(asym1(), 96, 1e-9);
  CHECK(rw::check_harmonicity(asym1(), ta, 96) <= 1e-9);
  CHECK(rw::check_harmonicity(heavy15(), heavy_table(), 100) <= 1e-9);
}

TEST_CASE("series oracle agrees with closed form and reports honest tol") {
  rw::OracleValue o = rw::potential_series_oracle(srw(), 5, 2048, 1024);
  CHECK(std::fabs(o.value - 5.0) <= o.tol);
  CHECK(o.tol < 0.05);
  rw::OracleValue oz = rw::potential_series_oracle(srw(), 0, 256, 512);
  CHECK(std::fabs(oz.value) <= oz.tol + 1e-12);
}

TEST_CASE("spitzer constant") {
  CHECK(std::fabs(rw::constant_c(srw(), 1e-10) - 0.5) <= 1e-8);
  double ca = rw::constant_c(asym1(), 1e-9);
  CHECK(ca > 0.0);
  CHECK(ca < 1.0);
  double ch = rw::constant_c(heavy15(), 1e-8);
  CHECK(ch > 0.0);
  CHECK(ch < 1.0);
}

TEST_CASE("heavy-tail kernel: infinite-variance flags") {
  const PotentialTable& t = heavy_table();
  CHECK_FALSE(t.sigma2_finite);
  CHECK(t.A == 1.0);
  CHECK(std::isinf(t.sigma2));
  // sublinear growth on the light side once past the local regime
  CHECK(t.at(200) / 200.0 < t.at(32) / 32.0);
}

TEST_CASE("finite-variance slope: a(x)/|x| approaches 1/sigma^2") {
  PotentialTable t = rw::potential_kernel(asym1(), 96, 1e-9);
  double inv = 1.0 / t.sigma2;
  double g32 = std::fabs(t.at(32) / 32.0 - inv);
  double g96 = std::fabs(t.at(96) / 96.0 - inv);
  CHECK(g96 <= g32 + 1e-12);
  double gm32 = std::fabs(t.at(-32) / 32.0 - inv);
  double gm96 = std::fabs(t.at(-96) / 96.0 - inv);
  CHECK(gm96 <= gm32 + 1e-12);
}

TEST_CASE("kernel argument validation") {
  CHECK(code_of([] { rw::potential_kernel(srw(), 0, 1e-8); }) ==
        RW_ERR_INVALID_ARGUMENT);
  CHECK(code_of([] { rw::potential_kernel(srw(), 10, 0.0); }) ==
        RW_ERR_INVALID_ARGUMENT);
  CHECK(code_of([] { srw_table().at(201); }) == RW_ERR_INVALID_ARGUMENT);
  CHECK(code_of([] { rw::potential_series_oracle(srw(), 600, 64, 1024); }) ==
        RW_ERR_INVALID_ARGUMENT);
}
