#include <cmath>
#include <random>

#include "doctest.h"
#include "om/corpus.hpp"
#include "om/norms.hpp"

using namespace om;

namespace {

Martingale worked() {
  FiltrationPtr f2 = FiniteFiltration::dyadic(2);
  return Martingale::from_terminal(
      RandomVariable{f2, {Rat(2), Rat(0), Rat(-1), Rat(-1)}});
}

/// Independent weak-norm oracle: bisect the least c whose constraint family
/// sup_t Phi(t/c) P(|X| > t) <= 1 is feasible; the sup is attained at the
/// distinct values of |X|.
double weak_norm_oracle(const RandomVariable& x, const OrliczFunction& phi) {
  const auto& F = *x.space;
  std::vector<std::pair<double, double>> constraints;  // (value, P(|X|>=v))
  for (int w = 0; w < F.outcome_count(); ++w) {
    Rat v = abs(x.values[w]);
    if (v == 0) continue;
    Rat mass = 0;
    for (int u = 0; u < F.outcome_count(); ++u) {
      if (abs(x.values[u]) >= v) mass += F.outcome_probability(u);
    }
    constraints.emplace_back(to_double(v), to_double(mass));
  }
  if (constraints.empty()) return 0;
  auto feasible = [&](double c) {
    for (auto& [v, m] : constraints) {
      if (phi(v / c) * m > 1) return false;
    }
    return true;
  };
  double hi = 1;
  while (!feasible(hi)) hi *= 2;
  double lo = 0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (feasible(mid) ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace

TEST_CASE("lq norms") {
  Martingale f = worked();
  CHECK(lq_norm(f.terminal(), 2) == doctest::Approx(std::sqrt(1.5)));
  CHECK(lq_norm(f.terminal(), INFINITY) == 2.0);
  CHECK(lq_norm(RandomVariable{f.space(), std::vector<Rat>(4, Rat(0))}, 2) ==
        0.0);
  CHECK_THROWS_AS(lq_norm(f.terminal(), 0.5), BadValue);
}

TEST_CASE("weak Orlicz norm closed form") {
  OrliczFunction phi = OrliczFunction::power(0.5);
  FiltrationPtr f2 = FiniteFiltration::dyadic(2);
  // |X|: value 2 with mass 1/4, value 1 with mass 3/4.
  RandomVariable x{f2, {Rat(2), Rat(1), Rat(-1), Rat(1)}};
  CHECK(weak_orlicz_norm(x, phi) == doctest::Approx(1.0));
  RandomVariable zero{f2, std::vector<Rat>(4, Rat(0))};
  CHECK(weak_orlicz_norm(zero, phi) == 0.0);
  RandomVariable constant{f2, std::vector<Rat>(4, Rat(3))};
  CHECK(weak_orlicz_norm(constant, phi) ==
        doctest::Approx(3.0 / phi.inverse(1.0)));
}

TEST_CASE("weak norm matches the bisection oracle") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> grid(-16, 16);
  for (const OrliczFunction& phi :
       {OrliczFunction::power(0.5),
        OrliczFunction::power_log(0.5, 1.0, 0.5, 2.0)}) {
    for (int rep = 0; rep < 30; ++rep) {
      FiltrationPtr space = FiniteFiltration::random(3, 3, 0.5, 900 + rep);
      std::vector<Rat> values(space->outcome_count());
      for (Rat& v : values) v = Rat(grid(rng), 8);
      RandomVariable x{space, values};
      const double got = weak_orlicz_norm(x, phi);
      CHECK(got == doctest::Approx(weak_norm_oracle(x, phi)).epsilon(1e-8));
    }
  }
}

TEST_CASE("Luxemburg norm against its defining inequality") {
  OrliczFunction phi = OrliczFunction::power(0.5);
  FiltrationPtr f2 = FiniteFiltration::dyadic(2);
  // X = 1 with Phi(1) = 1: norm is exactly 1.
  RandomVariable one{f2, std::vector<Rat>(4, Rat(1))};
  CHECK(luxemburg_norm(one, phi) == doctest::Approx(1.0));
  CHECK(luxemburg_norm(RandomVariable{f2, std::vector<Rat>(4, Rat(0))}, phi) ==
        0.0);

  std::mt19937_64 rng(19);
  std::uniform_int_distribution<int> grid(-16, 16);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<Rat> values(4);
    for (Rat& v : values) v = Rat(grid(rng), 8);
    RandomVariable x{f2, values};
    const double c = luxemburg_norm(x, phi);
    if (c == 0) continue;
    auto mean = [&](double cc) {
      double s = 0;
      for (int w = 0; w < 4; ++w) {
        double a = std::abs(to_double(x.values[w]));
        if (a > 0) s += 0.25 * phi(a / cc);
      }
      return s;
    };
    CHECK(mean(c) <= 1 + 1e-8);
    CHECK(mean(c * (1 - 1e-6)) > 1);
  }
}

TEST_CASE("hardy norms on the worked example") {
  OrliczFunction phi = OrliczFunction::power(0.5);
  HardyNorms h = hardy_norms(worked(), phi);
  CHECK(h.maximal == doctest::Approx(1.0));
  CHECK(h.square == doctest::Approx(1.0));
  CHECK(h.cond_square == doctest::Approx(1.0));
  HardyNorms z = hardy_norms(Martingale::zero(FiniteFiltration::dyadic(2)), phi);
  CHECK(z.maximal == 0.0);
  CHECK(z.cond_square == 0.0);
}

TEST_CASE("minimal control: worked example and admissibility") {
  Martingale f = worked();
  PredictableControl c = minimal_control(f, ControlTarget::Q);
  CHECK(c.value_sq(0, 0) == Rat(1));
  CHECK(c.value_sq(1, 0) == Rat(2));
  CHECK(c.value_sq(1, 1) == Rat(1));
  CHECK(c.value_sq(2, 0) == Rat(2));  // lambda_N = lambda_{N-1}
  CHECK(control_norm(f, OrliczFunction::power(0.5), ControlTarget::Q) ==
        doctest::Approx(1.0));

  // Dropping the level-1 value below S_2 is inadmissible.
  auto bad = c.table_sq();
  bad[1][0] = Rat(1);
  CHECK_THROWS_AS(PredictableControl::from_lambda_sq(f, ControlTarget::Q, bad),
                  InadmissibleControl);
  // A decreasing path is inadmissible.
  auto dec = c.table_sq();
  dec[2][0] = Rat(1);
  CHECK_THROWS_AS(PredictableControl::from_lambda_sq(f, ControlTarget::Q, dec),
                  InadmissibleControl);
}

TEST_CASE("atomic quasinorm closed form") {
  OrliczFunction phi = OrliczFunction::power(0.5);
  CHECK(atomic_quasinorm({{-1, Rat(1)}, {0, Rat(1, 2)}}, phi) ==
        doctest::Approx(0.5));
  CHECK(atomic_quasinorm({}, phi) == 0.0);
  CHECK(atomic_quasinorm({{0, Rat(1)}}, phi) ==
        doctest::Approx(1.0 / phi.inverse(1.0)));
}
