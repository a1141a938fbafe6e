// Acceptance harness: nine end-to-end criteria, one PASS/FAIL line each.
// Usage: om_acceptance <path-to-orlicz-mart-cli>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "om/suites.hpp"

using namespace om;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int number, const std::string& what, bool ok, double seconds,
            double limit) {
  if (limit > 0 && seconds > limit) ok = false;
  if (!ok) ++g_failures;
  std::printf("%s criterion %d: %s (%.2fs%s)\n", ok ? "PASS" : "FAIL", number,
              what.c_str(), seconds,
              limit > 0 ? (" / limit " + std::to_string(static_cast<int>(limit)) +
                           "s").c_str()
                        : "");
  std::fflush(stdout);
}

template <typename Fn>
void criterion(int number, const std::string& what, double limit, Fn body) {
  auto start = Clock::now();
  bool ok = false;
  try {
    ok = body();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "criterion %d threw: %s\n", number, e.what());
  }
  double seconds = std::chrono::duration<double>(Clock::now() - start).count();
  report(number, what, ok, seconds, limit);
}

Rat rat_pow_int(Rat base, int e) {
  Rat r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

double weak_norm_oracle(const RandomVariable& x, const OrliczFunction& phi) {
  const auto& F = *x.space;
  std::vector<std::pair<double, double>> constraints;
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

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";

  criterion(1, "weak quasi-norm closed form vs grid-search oracle", 10, [] {
    std::mt19937_64 rng(101);
    std::uniform_int_distribution<int> grid(-16, 16);
    const OrliczFunction phis[2] = {
        OrliczFunction::power(0.5),
        OrliczFunction::power_log(0.5, 1.0, 0.5, 2.0)};
    for (int rep = 0; rep < 500; ++rep) {
      const int depth = 1 + rep % 5;
      FiltrationPtr space = FiniteFiltration::random(depth, 3, 0.5, 1000 + rep);
      std::vector<Rat> values(space->outcome_count());
      for (Rat& v : values) v = Rat(grid(rng), 8);
      RandomVariable x{space, values};
      const OrliczFunction& phi = phis[rep % 2];
      const double got = weak_orlicz_norm(x, phi);
      const double want = weak_norm_oracle(x, phi);
      if (std::abs(got - want) > 1e-8 * std::max(want, 1e-12)) return false;
    }
    return true;
  });

  criterion(2, "atomic decomposition round trip and equivalence", 30, [] {
    const OrliczFunction phi = OrliczFunction::power(0.5);
    std::mt19937_64 rng(202);
    for (int i = 0; i < 200; ++i) {
      const int depth = 2 + i % 5;  // up to 6
      FiltrationPtr space = i % 2 == 0
                                ? FiniteFiltration::dyadic(depth)
                                : FiniteFiltration::random(depth, 3, 0.8,
                                                           2000 + i);
      Martingale f = random_martingale(space, rng);
      AtomicDecomposition d = decompose_s(f);
      if (d.empty()) {
        if (!f.is_zero()) return false;
        continue;
      }
      if (!(f - d.partial_sum(space, d.kmin(), d.kmax() - 1)).is_zero()) {
        return false;
      }
      auto ssq = conditional_quadratic(f).terminal_sq.values;
      for (const WeakAtom& atom : d.atoms) {
        if (!verify_atom(atom).pass()) return false;
        if (atom.bound != pow2(atom.k + 1)) return false;
        for (int w = 0; w < space->outcome_count(); ++w) {
          if (atom.nu.finite_at(w) != (ssq[w] > pow2(2L * atom.k))) return false;
        }
      }
      if (!equivalence_report(f, phi).pass()) return false;
    }
    return true;
  });

  criterion(3, "budgeted gap DP vs full stopping-time enumeration", 20, [] {
    std::mt19937_64 rng(303);
    const Int expected[2] = {Int(26), Int(677)};
    for (int di = 0; di < 2; ++di) {
      const int depth = 2 + di;
      FiltrationPtr space = FiniteFiltration::dyadic(depth);
      if (count_stopping_times(*space) != expected[di]) return false;
      for (int rep = 0; rep < 50; ++rep) {
        Martingale f = random_martingale(space, rng);
        // One enumeration pass: best exact gain per budget i/8.
        Rat best[9] = {};
        for_each_stopping_time(space, [&](const StoppingTime& nu) {
          Rat mass = nu.finite_mass();
          auto d = (f - stop(f, nu)).terminal().values;
          Rat gain = 0;
          for (int w = 0; w < space->outcome_count(); ++w) {
            gain += space->outcome_probability(w) * d[w] * d[w];
          }
          for (int i = 0; i <= 8; ++i) {
            if (mass <= Rat(i, 8) && gain > best[i]) best[i] = gain;
          }
        });
        for (int i = 0; i <= 8; ++i) {
          GapResult got = max_gap(f, 2, Rat(i, 8));
          if (!got.exact || got.gain != best[i]) return false;
        }
      }
    }
    return true;
  });

  criterion(4, "regular covering times: exact properties", 0, [] {
    std::mt19937_64 rng(404);
    for (int rep = 0; rep < 200; ++rep) {
      FiltrationPtr space = FiniteFiltration::random(3, 3, 0.6, 4000 + rep);
      Martingale g = random_martingale(space, rng);
      AdaptedTable gamma = quadratic(g).running_sq;
      std::uniform_int_distribution<int> lam(0, 12);
      Rat lambda(lam(rng), 4);
      StoppingTime nu = regular_cover(gamma, lambda);
      Rat star_mass = 0;
      for (int w = 0; w < space->outcome_count(); ++w) {
        Rat star = 0;
        for (int n = 0; n <= space->depth(); ++n) {
          Rat v = gamma.at_outcome(n, w);
          if (v > star) star = v;
        }
        if (star > lambda) {
          star_mass += space->outcome_probability(w);
          if (!nu.finite_at(w)) return false;
        }
        const int stop_level = std::min(nu.level_at(w), space->depth());
        for (int n = 0; n <= stop_level; ++n) {
          if (gamma.at_outcome(n, w) > lambda) return false;
        }
      }
      if (nu.finite_mass() > space->regularity_constant() * star_mass) {
        return false;
      }
      if (!pointwise_leq(nu, regular_cover(gamma, lambda + Rat(1, 3)))) {
        return false;
      }
    }
    return true;
  });

  criterion(5, "Orlicz function inequality suite", 10, [] {
    SuiteConfig cfg;
    cfg.count = 50;
    if (!run_suite("orlicz", cfg).pass) return false;
    cfg.phi = OrliczFunction::power_log(0.5, 1.0, 0.5, 2.0);
    return run_suite("orlicz", cfg).pass;
  });

  criterion(6, "gap profiles ordered across q by power means", 0, [] {
    const int qs[4] = {1, 2, 3, 4};
    std::mt19937_64 rng(606);
    FiltrationPtr space = FiniteFiltration::dyadic(3);
    for (int rep = 0; rep < 100; ++rep) {
      Martingale f = random_martingale(space, rng);
      GapProfile prof[4];
      std::vector<Rat> budgets;
      for (int i = 0; i < 4; ++i) {
        prof[i] = gap_profile(f, qs[i]);
        budgets.insert(budgets.end(), prof[i].breakpoints.begin(),
                       prof[i].breakpoints.end());
      }
      for (const Rat& x : budgets) {
        for (int a = 0; a < 4; ++a) {
          for (int b = a + 1; b < 4; ++b) {
            const GapResult* ga = prof[a].at(x);
            const GapResult* gb = prof[b].at(x);
            Rat g1 = ga ? ga->gain : Rat(0);
            Rat g2 = gb ? gb->gain : Rat(0);
            if (g1 == 0) continue;
            // (g1/x)^{1/q1} <= (g2/x)^{1/q2}, compared exactly after
            // raising both sides to q1*q2.
            if (rat_pow_int(g1 / x, qs[b]) > rat_pow_int(g2 / x, qs[a])) {
              return false;
            }
          }
        }
      }
    }
    return true;
  });

  criterion(7, "duality ratio: worked value and corpus stability", 0, [] {
    const OrliczFunction phi = OrliczFunction::power(0.5);
    FiltrationPtr f2 = FiniteFiltration::dyadic(2);
    Martingale ex = Martingale::from_terminal(
        RandomVariable{f2, {Rat(2), Rat(0), Rat(-1), Rat(-1)}});
    if (std::abs(duality_ratio(ex, ex, phi) - 0.894) > 1e-3) return false;
    FiltrationPtr space = FiniteFiltration::dyadic(3);
    std::vector<Martingale> corpus = make_corpus(space, 400, 77);
    std::vector<Martingale> half(corpus.begin(), corpus.begin() + 200);
    const double c_full = duality_empirical_c(corpus, phi, {});
    const double c_half = duality_empirical_c(half, phi, {});
    if (!(c_half > 0) || !std::isfinite(c_full)) return false;
    // Prefix-monotone by construction; doubling may only grow it a little.
    return c_full >= c_half && c_full <= 1.10 * c_half;
  });

  criterion(8, "five-norm and John-Nirenberg ratios stable under doubling",
            0, [] {
    const OrliczFunction phi = OrliczFunction::power(0.5);
    FiltrationPtr space = FiniteFiltration::dyadic(4);
    std::vector<Martingale> corpus = make_corpus(space, 120, 88);
    std::vector<Martingale> half(corpus.begin(), corpus.begin() + 60);

    auto pair_map = [](const Json& rep) {
      std::map<std::pair<std::string, std::string>, double> m;
      for (const auto& e : rep["pairwise"]) {
        m[{e["num"], e["den"]}] = e["max_ratio"];
      }
      return m;
    };
    Json full = chain_corpus_report(corpus, phi);
    Json halfrep = chain_corpus_report(half, phi);
    auto mf = pair_map(full), mh = pair_map(halfrep);
    for (const auto& [key, vf] : mf) {
      double vh = mh.at(key);
      if (!(vf > 0) || !std::isfinite(vf)) return false;
      if (vf < vh || vf > 1.10 * vh) return false;  // prefix-monotone
    }
    // One constant covers the predictable-control pair both ways.
    double c_qd = std::max(mf.at({"wQ_Phi", "wD_Phi"}), mf.at({"wD_Phi", "wQ_Phi"}));
    if (!(c_qd > 0) || !std::isfinite(c_qd)) return false;

    JohnNirenbergReport jf = john_nirenberg_report(corpus, phi, {1, 2, 4});
    JohnNirenbergReport jh = john_nirenberg_report(half, phi, {1, 2, 4});
    if (!jf.ordering_ok || !jh.ordering_ok) return false;
    for (std::size_t i = 0; i < jf.pairs.size(); ++i) {
      double vf = jf.pairs[i].max_ratio, vh = jh.pairs[i].max_ratio;
      if (!(vf > 0) || !std::isfinite(vf)) return false;
      if (vf < vh || vf > 1.10 * vh) return false;
    }
    return true;
  });

  criterion(9, "CLI determinism and error signaling", 0, [&cli] {
    if (cli.empty()) return false;
    const std::string base =
        "\"" + cli + "\" verify --suite atomic --depth 3 --phi power:0.5 "
        "--n 30 --seed 1 --out ";
    if (std::system((base + "/tmp/om_acc_1.json").c_str()) != 0) return false;
    if (std::system((base + "/tmp/om_acc_2.json").c_str()) != 0) return false;
    std::string a = slurp("/tmp/om_acc_1.json");
    std::string b = slurp("/tmp/om_acc_2.json");
    if (a.empty() || a != b) return false;
    const int rc = std::system(
        ("\"" + cli + "\" norm --depth 30 >/dev/null 2>/dev/null").c_str());
    return rc != 0;
  });

  if (g_failures == 0) {
    std::printf("acceptance: all 9 criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criteria failed\n", g_failures);
  return 1;
}
