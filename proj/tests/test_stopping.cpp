#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "om/corpus.hpp"
#include "om/stopping.hpp"

using namespace om;

namespace {

Martingale worked() {
  FiltrationPtr f2 = FiniteFiltration::dyadic(2);
  return Martingale::from_terminal(
      RandomVariable{f2, {Rat(2), Rat(0), Rat(-1), Rat(-1)}});
}

}  // namespace

TEST_CASE("stopping time construction and measurability") {
  FiltrationPtr f2 = FiniteFiltration::dyadic(2);
  StoppingTime nu = StoppingTime::from_antichain(f2, {{1, 0}});
  CHECK(nu.level_at(0) == 1);
  CHECK(nu.level_at(2) == StoppingTime::kNever);
  CHECK(nu.finite_mass() == Rat(1, 2));

  CHECK(StoppingTime::from_levels(f2, {1, 1, StoppingTime::kNever,
                                       StoppingTime::kNever}) == nu);
  // Splitting a level-1 atom across levels is not measurable.
  CHECK_THROWS_AS(StoppingTime::from_levels(
                      f2, {1, 2, StoppingTime::kNever, StoppingTime::kNever}),
                  BadAntichain);
  // Overlapping nodes are not an antichain.
  CHECK_THROWS_AS(StoppingTime::from_antichain(f2, {{1, 0}, {2, 0}}),
                  BadAntichain);
  CHECK(StoppingTime::never(f2).finite_mass() == Rat(0));
  CHECK(StoppingTime::constant(f2, 0).finite_mass() == Rat(1));
  CHECK_THROWS_AS(StoppingTime::constant(f2, 5), LevelOutOfRange);
}

TEST_CASE("stopping time counts") {
  CHECK(count_stopping_times(*FiniteFiltration::dyadic(0)) == Int(2));
  CHECK(count_stopping_times(*FiniteFiltration::dyadic(1)) == Int(5));
  CHECK(count_stopping_times(*FiniteFiltration::dyadic(2)) == Int(26));
  CHECK(count_stopping_times(*FiniteFiltration::dyadic(3)) == Int(677));
}

TEST_CASE("enumeration visits each stopping time once") {
  FiltrationPtr f2 = FiniteFiltration::dyadic(2);
  std::set<std::vector<NodeRef>> seen;
  for_each_stopping_time(f2, [&](const StoppingTime& nu) {
    CHECK(seen.insert(nu.antichain()).second);
  });
  CHECK(seen.size() == 26);
  CHECK_THROWS_AS(
      for_each_stopping_time(f2, [](const StoppingTime&) {}, Int(10)),
      TooManyStoppingTimes);
}

TEST_CASE("first passage times") {
  Martingale f = worked();
  AdaptedTable ssq = conditional_quadratic(f).running_sq;
  // nu_0: least n with s_{n+1}^2 > 1; s_1^2 = 1, s_2^2 = (2,2,1,1).
  StoppingTime nu0 = first_passage_predictable(ssq, Rat(1));
  CHECK(nu0.level_at(0) == 1);
  CHECK(nu0.level_at(2) == StoppingTime::kNever);
  // Below s_1^2 = 1 everything stops at 0.
  StoppingTime low = first_passage_predictable(ssq, Rat(1, 2));
  CHECK(low.finite_mass() == Rat(1));
  CHECK(low.level_at(3) == 0);
  // A non-sibling-constant table is rejected.
  AdaptedTable raw = quadratic(f).running_sq;
  raw.values[2][0] = Rat(5);
  CHECK_THROWS_AS(first_passage_predictable(raw, Rat(1)), NotPredictable);

  StoppingTime adapted = first_passage_adapted(maximal(f).running, Rat(1));
  CHECK(adapted.level_at(0) == 2);
  CHECK(adapted.level_at(2) == StoppingTime::kNever);
}

TEST_CASE("regular cover: worked example and exact properties") {
  Martingale f = worked();
  AdaptedTable gsq = quadratic(f).running_sq;
  StoppingTime nu = regular_cover(gsq, Rat(1));  // lambda = 1, squared
  CHECK(nu.level_at(0) == 1);
  CHECK(nu.level_at(1) == 1);
  CHECK(nu.level_at(2) == StoppingTime::kNever);
  CHECK(nu.finite_mass() == Rat(1, 2));
  CHECK_THROWS_AS(regular_cover(gsq, Rat(-1)), LambdaTooSmall);

  // 30 random (gamma, lambda) pairs: three covering properties plus
  // monotonicity in lambda, all exact.
  std::mt19937_64 rng(21);
  for (int rep = 0; rep < 30; ++rep) {
    FiltrationPtr space = FiniteFiltration::random(3, 3, 0.6, 100 + rep);
    Martingale g = random_martingale(space, rng);
    AdaptedTable gamma = quadratic(g).running_sq;
    const Rat r = space->regularity_constant();
    std::uniform_int_distribution<int> lam(0, 12);
    Rat lambda(lam(rng), 4);
    StoppingTime nu2 = regular_cover(gamma, lambda);
    Rat star_mass = 0, nu_mass = nu2.finite_mass();
    for (int w = 0; w < space->outcome_count(); ++w) {
      Rat star = 0;
      for (int n = 0; n <= space->depth(); ++n) {
        Rat v = gamma.at_outcome(n, w);
        if (v > star) star = v;
      }
      if (star > lambda) {
        star_mass += space->outcome_probability(w);
        CHECK(nu2.finite_at(w));  // {gamma* > lambda} in {nu < inf}
      }
      // gamma*_nu <= lambda.
      const int stop_level = std::min(nu2.level_at(w), space->depth());
      Rat capped = 0;
      for (int n = 0; n <= stop_level; ++n) {
        Rat v = gamma.at_outcome(n, w);
        if (v > capped) capped = v;
      }
      CHECK(capped <= lambda);
    }
    CHECK(nu_mass <= r * star_mass);
    StoppingTime higher = regular_cover(gamma, lambda + Rat(1, 2));
    CHECK(pointwise_leq(nu2, higher));  // later stopping at larger lambda
  }
}

TEST_CASE("stopped martingale and difference gap") {
  Martingale f = worked();
  FiltrationPtr space = f.space();
  StoppingTime nu1 = StoppingTime::from_antichain(space, {{1, 0}});
  CHECK(stop(f, StoppingTime::never(space)).terminal().values ==
        f.terminal().values);
  CHECK(stop(f, StoppingTime::constant(space, 0)).is_zero());
  CHECK(stop(f, StoppingTime::from_levels(space, {1, 1, 1, 1}))
            .terminal()
            .values == std::vector<Rat>{Rat(1), Rat(1), Rat(-1), Rat(-1)});

  CHECK(difference_gap(f, StoppingTime::from_levels(space, {1, 1, 1, 1}), 2) ==
        doctest::Approx(std::sqrt(0.5)));
  CHECK(difference_gap(f, StoppingTime::constant(space, 2), 2) == 0.0);
  CHECK(difference_gap(f, StoppingTime::constant(space, 0), 2) ==
        doctest::Approx(std::sqrt(1.5)));
}

TEST_CASE("max_gap matches enumeration, with canonical witnesses") {
  std::mt19937_64 rng(33);
  for (int depth : {2, 3}) {
    FiltrationPtr space = FiniteFiltration::dyadic(depth);
    for (int rep = 0; rep < 10; ++rep) {
      Martingale f = random_martingale(space, rng);
      for (int i = 0; i <= 8; ++i) {
        Rat budget(i, 8);
        GapResult got = max_gap(f, 2, budget);
        CHECK(got.exact);
        // Exhaustive oracle over every stopping time.
        Rat best = 0;
        for_each_stopping_time(space, [&](const StoppingTime& nu) {
          if (nu.finite_mass() > budget) return;
          auto d = (f - stop(f, nu)).terminal().values;
          Rat gain = 0;
          for (int w = 0; w < space->outcome_count(); ++w) {
            gain += space->outcome_probability(w) * d[w] * d[w];
          }
          if (gain > best) best = gain;
        });
        CHECK(got.gain == best);
        // The witness reproduces the gain.
        StoppingTime wit = StoppingTime::from_antichain(space, got.witness);
        CHECK(wit.finite_mass() <= budget);
        auto d = (f - stop(f, wit)).terminal().values;
        Rat gain = 0;
        for (int w = 0; w < space->outcome_count(); ++w) {
          gain += space->outcome_probability(w) * d[w] * d[w];
        }
        CHECK(gain == got.gain);
      }
    }
  }
}

TEST_CASE("gap profile steps are consistent with max_gap") {
  FiltrationPtr space = FiniteFiltration::dyadic(3);
  std::mt19937_64 rng(44);
  Martingale f = random_martingale(space, rng);
  GapProfile prof = gap_profile(f, 2);
  REQUIRE(!prof.breakpoints.empty());
  Rat prev_gain = -1;
  for (std::size_t i = 0; i < prof.breakpoints.size(); ++i) {
    CHECK(prof.steps[i].gain > prev_gain);  // strictly increasing
    prev_gain = prof.steps[i].gain;
    CHECK(max_gap(f, 2, prof.breakpoints[i]).gain == prof.steps[i].gain);
    if (i > 0) {
      // Just below a breakpoint the previous step still rules.
      Rat below = prof.breakpoints[i] - Rat(1, 1024);
      CHECK(max_gap(f, 2, below).gain <= prof.steps[i - 1].gain);
    }
  }
  const GapResult* at_one = prof.at(Rat(1));
  REQUIRE(at_one != nullptr);
  CHECK(at_one->gain == prof.steps.back().gain);
  CHECK(prof.at(Rat(0)) == nullptr);
}

TEST_CASE("single-atom gap oracle") {
  FiltrationPtr space = FiniteFiltration::dyadic(2);
  std::mt19937_64 rng(55);
  Martingale f = random_martingale(space, rng);
  for (int i = 1; i <= 4; ++i) {
    Rat budget(i, 4);
    GapResult got = max_atom_gap(f, 2, budget);
    Rat best = 0;
    for (int n = 1; n <= space->depth(); ++n) {
      for (int a = 0; a < space->atom_count(n); ++a) {
        if (space->atom_probability(n, a) > budget) continue;
        Rat gain = 0;
        for (int w : space->atom_outcomes(n, a)) {
          Rat d = f.value_at_outcome(space->depth(), w) - f.value(n, a);
          gain += space->outcome_probability(w) * d * d;
        }
        if (gain > best) best = gain;
      }
    }
    CHECK(got.gain == best);
  }
}
