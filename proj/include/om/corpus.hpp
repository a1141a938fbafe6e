#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "om/martingale.hpp"

namespace om {

struct CorpusSpec {
  std::uint64_t seed = 1;
  int depth = 3;
  int count = 100;
  std::string kind = "dyadic";  // "dyadic" | "random"
  int max_branching = 3;
  double skew = 0.5;
};

/// Dyadic tree, or a random tree drawn from the spec's seed.
FiltrationPtr make_filtration(const CorpusSpec& spec);

/// Centered terminal with values on the 1/8 grid in [-2, 2]; exact.
Martingale random_martingale(const FiltrationPtr& space, std::mt19937_64& rng);

/// `count` martingales on one space, deterministic in the seed.
std::vector<Martingale> make_corpus(const FiltrationPtr& space, int count,
                                    std::uint64_t seed);

}  // namespace om
