#include <cmath>

#include "doctest.h"
#include "om/orlicz.hpp"

using namespace om;

TEST_CASE("power closed forms") {
  OrliczFunction phi = OrliczFunction::power(0.5);
  CHECK(phi(4.0) == doctest::Approx(2.0));
  CHECK(phi.inverse(4.0) == doctest::Approx(16.0));
  CHECK(phi.inverse(0.0) == 0.0);
  CHECK(phi(0.0) == 0.0);
  CHECK_THROWS_AS(phi(-1.0), NegativeInput);
  CHECK_THROWS_AS(phi.inverse(-1.0), NegativeInput);
}

TEST_CASE("inverse round trip for non-power kinds") {
  OrliczFunction phi = OrliczFunction::power_log(0.5, 1.0, 0.5, 2.0);
  for (double t : {0.1, 1.0, 10.0}) {
    CHECK(phi.inverse(phi(t)) == doctest::Approx(t).epsilon(1e-10));
  }
}

TEST_CASE("type verification") {
  CHECK(OrliczFunction::power(0.5).verify_type().pass);
  CHECK(OrliczFunction::power(1.0).verify_type().pass);
  // Power(1/2) declared with lower type 0.9 fails for small t.
  CHECK_FALSE(OrliczFunction::power(0.5, 0.9, 1.0).verify_type().pass);
  // PowerLog passes once c_phi absorbs the worst grid ratio.
  OrliczFunction pl = OrliczFunction::power_log(0.5, 1.0, 0.5, 1.0);
  auto rep = pl.verify_type();
  OrliczFunction fixed = pl.with_c_phi(std::max(1.0, rep.worst_ratio * 1.0001));
  CHECK(fixed.verify_type().pass);
}

TEST_CASE("index estimates") {
  auto idx = OrliczFunction::power(0.5).index();
  CHECK(idx.exact);
  CHECK(idx.lower == 0.5);
  CHECK(idx.upper == 0.5);
  auto inv = OrliczFunction::power(0.5).inverse_index();
  CHECK(inv.lower == 2.0);
  CHECK(inv.upper == 2.0);
  auto one = OrliczFunction::power(1.0).index();
  CHECK(one.lower == 1.0);
  CHECK(one.upper == 1.0);
  // PowerLog(1/2, 1): inverse indices bracket 2.
  auto plinv = OrliczFunction::power_log(0.5, 1.0, 0.5, 2.0).inverse_index();
  CHECK(plinv.lower <= 2.0 + 1e-6);
  CHECK(plinv.upper >= 2.0 - 1e-6);
  CHECK(plinv.upper < 64.0);
}

TEST_CASE("dual weight") {
  DualWeight w = dual_weight(OrliczFunction::power(0.5));
  CHECK(w(0.25) == doctest::Approx(0.25));
  CHECK(w(3.0) == doctest::Approx(3.0));
  DualWeight one = dual_weight(OrliczFunction::power(1.0));
  CHECK(one(0.5) == doctest::Approx(1.0));
  OrliczFunction pl = OrliczFunction::power_log(0.5, 1.0, 0.5, 2.0);
  CHECK(dual_weight(pl)(1.0) == doctest::Approx(1.0 / pl.inverse(1.0)));
}

TEST_CASE("piecewise linear concave validation") {
  using Knot = OrliczFunction::Knot;
  OrliczFunction ok = OrliczFunction::piecewise_linear(
      {Knot{1, 1}, Knot{2, 1.5}, Knot{4, 2}}, 0.25, 4.0);
  CHECK(ok(1.0) == doctest::Approx(1.0));
  CHECK(ok(3.0) == doctest::Approx(1.75));
  CHECK(ok.inverse(1.75) == doctest::Approx(3.0).epsilon(1e-9));
  CHECK_THROWS_AS(OrliczFunction::piecewise_linear(
                      {Knot{1, 1}, Knot{2, 3}, Knot{4, 10}}, 0.5, 1.0),
                  BadValue);  // increasing slopes are not concave
}
