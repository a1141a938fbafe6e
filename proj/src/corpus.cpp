#include "om/corpus.hpp"

namespace om {

FiltrationPtr make_filtration(const CorpusSpec& spec) {
  if (spec.kind == "dyadic") return FiniteFiltration::dyadic(spec.depth);
  if (spec.kind == "random") {
    return FiniteFiltration::random(spec.depth, spec.max_branching, spec.skew,
                                    spec.seed);
  }
  throw BadValue("unknown filtration kind: " + spec.kind);
}

Martingale random_martingale(const FiltrationPtr& space, std::mt19937_64& rng) {
  const auto& F = *space;
  std::uniform_int_distribution<int> grid(-16, 16);
  std::vector<Rat> values(F.outcome_count());
  for (Rat& v : values) v = Rat(grid(rng), 8);
  RandomVariable x{space, std::move(values)};
  const Rat mean = x.expectation();
  for (Rat& v : x.values) v -= mean;
  return Martingale::from_terminal(x);
}

std::vector<Martingale> make_corpus(const FiltrationPtr& space, int count,
                                    std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Martingale> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) out.push_back(random_martingale(space, rng));
  return out;
}

}  // namespace om
