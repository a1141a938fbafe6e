#include <random>

#include "doctest.h"
#include "om/corpus.hpp"
#include "om/io.hpp"

using namespace om;

namespace {

Martingale worked() {
  FiltrationPtr f2 = FiniteFiltration::dyadic(2);
  return Martingale::from_terminal(
      RandomVariable{f2, {Rat(2), Rat(0), Rat(-1), Rat(-1)}});
}

}  // namespace

TEST_CASE("filtration json round trip") {
  for (FiltrationPtr space :
       {FiniteFiltration::dyadic(3), FiniteFiltration::random(3, 3, 0.7, 13)}) {
    Json j = filtration_to_json(*space);
    CHECK(j["depth"] == space->depth());
    FiltrationPtr back = filtration_from_json(j);
    CHECK(filtration_to_json(*back) == j);
    CHECK(back->outcome_count() == space->outcome_count());
    CHECK(back->regularity_constant() == space->regularity_constant());
  }
  Json broken = filtration_to_json(*FiniteFiltration::dyadic(1));
  broken["outcomes"][0]["p"] = "not-a-rational";
  CHECK_THROWS_AS(filtration_from_json(broken), ConfigParse);
  CHECK_THROWS_AS(filtration_from_json(Json::object()), ConfigParse);
}

TEST_CASE("martingale json round trip") {
  Martingale f = worked();
  Json j = martingale_to_json(f);
  Martingale back = martingale_from_json(f.space(), j);
  CHECK(back.terminal().values == f.terminal().values);
  CHECK(back.value(1, 0) == f.value(1, 0));
  Json bad = j;
  bad["terminal"].erase(bad["terminal"].begin());
  CHECK_THROWS_AS(martingale_from_json(f.space(), bad), ConfigParse);
}

TEST_CASE("stopping time json round trip") {
  FiltrationPtr space = FiniteFiltration::dyadic(2);
  StoppingTime nu = StoppingTime::from_antichain(space, {{1, 0}, {2, 2}});
  Json j = stopping_to_json(nu);
  CHECK(j.is_array());
  CHECK(stopping_from_json(space, j) == nu);
  CHECK(stopping_from_json(space, Json::array()) ==
        StoppingTime::never(space));
}

TEST_CASE("decomposition json shape") {
  AtomicDecomposition d = decompose_s(worked());
  Json j = decomposition_to_json(d);
  CHECK(j["source"] == "s");
  REQUIRE(j["atoms"].size() == 2);
  CHECK(j["atoms"][0]["k"] == -1);
  CHECK(j["atoms"][0]["bound"] == "1/1");
  CHECK(j["atoms"][1]["nu"].is_array());
  CHECK(j["atoms"][1]["a"].is_object());
}

TEST_CASE("phi json round trip") {
  for (const OrliczFunction& phi :
       {OrliczFunction::power(0.5), OrliczFunction::power(0.5, 0.4, 2.0),
        OrliczFunction::power_log(0.5, 1.0, 0.5, 2.0),
        OrliczFunction::piecewise_linear(
            {OrliczFunction::Knot{1, 1}, OrliczFunction::Knot{2, 1.5}}, 0.25,
            4.0)}) {
    Json j = phi_to_json(phi);
    OrliczFunction back = phi_from_json(j);
    CHECK(phi_to_json(back) == j);
    for (double t : {0.5, 1.0, 3.0}) {
      CHECK(back(t) == doctest::Approx(phi(t)).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(phi_from_json(Json{{"kind", "exotic"}}), ConfigParse);
}

TEST_CASE("phi shorthand parsing") {
  CHECK(parse_phi("power:0.5")(4.0) == doctest::Approx(2.0));
  OrliczFunction custom = parse_phi("power:0.5:0.4:2");
  CHECK(custom.lower_type() == 0.4);
  CHECK(custom.c_phi() == 2.0);
  OrliczFunction pl = parse_phi("powerlog:0.5:1.0");
  CHECK(pl.c_phi() == 2.0);  // default slack
  CHECK(pl(1.0) == doctest::Approx(std::pow(1.0, 0.5) *
                                   std::pow(std::log(std::exp(1.0) + 1.0), 1.0)));
  CHECK_THROWS_AS(parse_phi("power"), ConfigParse);
  CHECK_THROWS_AS(parse_phi("mystery:1"), ConfigParse);
  CHECK_THROWS_AS(parse_phi("power:abc"), ConfigParse);
}

TEST_CASE("serialization is deterministic") {
  FiltrationPtr space = FiniteFiltration::random(3, 3, 0.5, 99);
  std::mt19937_64 rng(99);
  Martingale f = random_martingale(space, rng);
  std::string once = filtration_to_json(*space).dump(2) +
                     martingale_to_json(f).dump(2);
  std::string twice = filtration_to_json(*space).dump(2) +
                      martingale_to_json(f).dump(2);
  CHECK(once == twice);
}
