#include <random>

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

TEST_CASE("from_terminal on the worked example") {
  Martingale f = worked();
  CHECK(f.value(0, 0) == Rat(0));
  CHECK(f.value(1, 0) == Rat(1));
  CHECK(f.value(1, 1) == Rat(-1));
  CHECK(f.terminal().values ==
        std::vector<Rat>{Rat(2), Rat(0), Rat(-1), Rat(-1)});
  CHECK(f.increment(2, 0) == Rat(1));
  CHECK(f.increment(2, 2) == Rat(0));
}

TEST_CASE("terminal must be centered") {
  FiltrationPtr f2 = FiniteFiltration::dyadic(2);
  CHECK_THROWS_AS(Martingale::from_terminal(
                      RandomVariable{f2, {Rat(1), Rat(1), Rat(1), Rat(1)}}),
                  NonCenteredTerminal);
  CHECK(Martingale::zero(f2).is_zero());
}

TEST_CASE("from_table validates the martingale property") {
  FiltrationPtr f2 = FiniteFiltration::dyadic(2);
  AdaptedTable t{f2,
                 {{Rat(0)}, {Rat(1), Rat(-1)}, {Rat(2), Rat(0), Rat(-1), Rat(-1)}}};
  CHECK(Martingale::from_table(t).terminal().values ==
        worked().terminal().values);
  t.values[1][0] = Rat(2);  // breaks E_1 f_2 = f_1
  CHECK_THROWS_AS(Martingale::from_table(t), BadValue);
}

TEST_CASE("M, S, s on the worked example") {
  Martingale f = worked();
  CHECK(maximal(f).terminal.values ==
        std::vector<Rat>{Rat(2), Rat(1), Rat(1), Rat(1)});
  CHECK(quadratic(f).terminal_sq.values ==
        std::vector<Rat>{Rat(2), Rat(2), Rat(1), Rat(1)});
  CHECK(conditional_quadratic(f).terminal_sq.values ==
        std::vector<Rat>{Rat(2), Rat(2), Rat(1), Rat(1)});
}

TEST_CASE("increment orthogonality: E S^2 = E s^2 = E f_N^2") {
  FiltrationPtr space = FiniteFiltration::random(4, 3, 0.7, 11);
  std::mt19937_64 rng(7);
  for (int i = 0; i < 25; ++i) {
    Martingale f = random_martingale(space, rng);
    Rat ef2 = 0;
    auto fn = f.terminal().values;
    for (int w = 0; w < space->outcome_count(); ++w) {
      ef2 += space->outcome_probability(w) * fn[w] * fn[w];
    }
    CHECK(RandomVariable{space, quadratic(f).terminal_sq.values}.expectation() ==
          ef2);
    CHECK(RandomVariable{space, conditional_quadratic(f).terminal_sq.values}
              .expectation() == ef2);
  }
}

TEST_CASE("s is predictable and s(f - f^nu)^2 = s(f)^2 - s(f^nu)^2") {
  FiltrationPtr space = FiniteFiltration::random(3, 3, 0.5, 3);
  std::mt19937_64 rng(5);
  Martingale f = random_martingale(space, rng);

  AdaptedTable shifted = conditional_quadratic_shifted_sq(f);
  for (int n = 0; n < space->depth(); ++n) {
    CHECK(static_cast<int>(shifted.values[n].size()) == space->atom_count(n));
  }

  StoppingTime nu = StoppingTime::constant(space, 1);
  Martingale g = f - stop(f, nu);
  auto sf = conditional_quadratic(f).terminal_sq.values;
  auto snu = conditional_quadratic(stop(f, nu)).terminal_sq.values;
  auto sg = conditional_quadratic(g).terminal_sq.values;
  for (int w = 0; w < space->outcome_count(); ++w) {
    CHECK(sg[w] == sf[w] - snu[w]);
  }
}

TEST_CASE("operators are sublinear on random pairs") {
  FiltrationPtr space = FiniteFiltration::dyadic(3);
  std::mt19937_64 rng(9);
  for (int i = 0; i < 10; ++i) {
    Martingale f = random_martingale(space, rng);
    Martingale g = random_martingale(space, rng);
    auto mf = maximal(f).terminal.values;
    auto mg = maximal(g).terminal.values;
    auto ms = maximal(f + g).terminal.values;
    auto sf = quadratic(f).terminal();
    auto sg2 = quadratic(g).terminal();
    auto ss = quadratic(f + g).terminal();
    auto cf = conditional_quadratic(f).terminal();
    auto cg = conditional_quadratic(g).terminal();
    auto cs = conditional_quadratic(f + g).terminal();
    for (int w = 0; w < space->outcome_count(); ++w) {
      CHECK(ms[w] <= mf[w] + mg[w]);
      CHECK(ss[w] <= sf[w] + sg2[w] + 1e-9);
      CHECK(cs[w] <= cf[w] + cg[w] + 1e-9);
    }
  }
}
