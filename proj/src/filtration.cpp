#include "om/filtration.hpp"

#include <algorithm>
#include <random>

namespace om {

FiltrationPtr FiniteFiltration::make(
    std::vector<std::string> outcome_ids, std::vector<Rat> probabilities,
    std::vector<std::vector<std::vector<int>>> levels) {
  if (outcome_ids.empty() || levels.empty()) {
    throw BadValue("empty outcomes or levels");
  }
  if (outcome_ids.size() != probabilities.size()) {
    throw BadValue("outcome id / probability count mismatch");
  }
  const int n_out = static_cast<int>(outcome_ids.size());
  Rat total = 0;
  for (const Rat& p : probabilities) {
    if (p <= 0) throw ZeroProbability("outcome probability must be positive");
    total += p;
  }
  if (total != 1) throw BadTotalMass("probabilities sum to " + rat_to_string(total));

  auto f = std::shared_ptr<FiniteFiltration>(new FiniteFiltration());
  f->depth_ = static_cast<int>(levels.size()) - 1;
  f->outcome_ids_ = std::move(outcome_ids);
  f->outcome_prob_ = std::move(probabilities);
  f->atoms_ = std::move(levels);

  if (f->atoms_[0].size() != 1 ||
      static_cast<int>(f->atoms_[0][0].size()) != n_out) {
    throw NontrivialRoot("level 0 must be the single atom Omega");
  }
  // Each level must partition the outcomes.
  for (int n = 0; n <= f->depth_; ++n) {
    std::vector<int> seen(n_out, 0);
    for (auto& atom : f->atoms_[n]) {
      if (atom.empty()) throw BadValue("empty atom at level " + std::to_string(n));
      std::sort(atom.begin(), atom.end());
      for (int w : atom) {
        if (w < 0 || w >= n_out) throw BadValue("outcome index out of range");
        if (seen[w]++) throw BadValue("outcome repeated within a level");
      }
    }
    for (int w = 0; w < n_out; ++w) {
      if (!seen[w]) throw BadValue("outcome missing from level " + std::to_string(n));
    }
  }
  for (const auto& atom : f->atoms_[f->depth_]) {
    if (atom.size() != 1) {
      throw NonSingletonLeaf("level N atoms must be singletons");
    }
  }
  f->index_tree();
  return f;
}

void FiniteFiltration::index_tree() {
  const int n_out = outcome_count();
  outcome_atom_.assign(depth_ + 1, std::vector<int>(n_out, -1));
  atom_prob_.resize(depth_ + 1);
  for (int n = 0; n <= depth_; ++n) {
    atom_prob_[n].resize(atoms_[n].size());
    for (int a = 0; a < atom_count(n); ++a) {
      Rat p = 0;
      for (int w : atoms_[n][a]) {
        outcome_atom_[n][w] = a;
        p += outcome_prob_[w];
      }
      atom_prob_[n][a] = p;
    }
  }
  parent_.assign(depth_ + 1, {});
  children_.assign(depth_ + 1, {});
  for (int n = 0; n <= depth_; ++n) {
    children_[n].assign(atom_count(n), {});
  }
  for (int n = 1; n <= depth_; ++n) {
    parent_[n].resize(atom_count(n));
    for (int a = 0; a < atom_count(n); ++a) {
      int pa = outcome_atom_[n - 1][atoms_[n][a][0]];
      for (int w : atoms_[n][a]) {
        if (outcome_atom_[n - 1][w] != pa) {
          throw NonRefining("level " + std::to_string(n) +
                            " atom crosses level " + std::to_string(n - 1) +
                            " atoms");
        }
      }
      parent_[n][a] = pa;
      children_[n - 1][pa].push_back(a);
    }
  }
  lcd_ = 1;
  for (const Rat& p : outcome_prob_) lcd_ = lcm_int(lcd_, denominator(p));
}

Rat FiniteFiltration::regularity_constant() const {
  Rat best = 1;
  for (int n = 1; n <= depth_; ++n) {
    for (int a = 0; a < atom_count(n); ++a) {
      Rat r = atom_prob_[n - 1][parent_[n][a]] / atom_prob_[n][a];
      if (r > best) best = r;
    }
  }
  return best;
}

FiltrationPtr FiniteFiltration::dyadic(int depth, int max_outcomes) {
  if (depth < 0) throw BadValue("negative depth");
  if (depth >= 63 || (Int(1) << depth) > max_outcomes) {
    throw DepthTooLarge("dyadic depth " + std::to_string(depth) +
                        " exceeds the outcome budget");
  }
  const int n_out = 1 << depth;
  std::vector<std::string> ids(n_out);
  std::vector<Rat> probs(n_out, Rat(1, n_out));
  for (int i = 0; i < n_out; ++i) ids[i] = "w" + std::to_string(i + 1);
  std::vector<std::vector<std::vector<int>>> levels(depth + 1);
  for (int n = 0; n <= depth; ++n) {
    const int block = n_out >> n;
    for (int a = 0; a < (1 << n); ++a) {
      std::vector<int> atom(block);
      for (int i = 0; i < block; ++i) atom[i] = a * block + i;
      levels[n].push_back(std::move(atom));
    }
  }
  return make(std::move(ids), std::move(probs), std::move(levels));
}

FiltrationPtr FiniteFiltration::random(int depth, int max_branching, double skew,
                                       std::uint64_t seed, int max_outcomes) {
  if (depth < 0) throw BadValue("negative depth");
  if (max_branching < 2) throw BadValue("max branching must be >= 2");
  if (skew < 0 || skew > 1) throw BadValue("skew must lie in [0,1]");

  std::mt19937_64 rng(seed);
  const int wmax = 1 + static_cast<int>(std::lround(skew * 9));

  // Grow the tree level by level; an entry is (mass, outcome count so far
  // unknown) so we carry masses and build partitions afterwards.
  struct Node {
    Rat mass;
    std::vector<int> child_ids;  // ids at the next level
  };
  std::vector<std::vector<Node>> tree(depth + 1);
  tree[0].push_back({Rat(1), {}});
  for (int n = 0; n < depth; ++n) {
    for (auto& node : tree[n]) {
      std::uniform_int_distribution<int> branch(2, max_branching);
      const int b = branch(rng);
      std::vector<int> weights(b);
      int wsum = 0;
      std::uniform_int_distribution<int> wdist(1, wmax);
      for (int i = 0; i < b; ++i) wsum += (weights[i] = wdist(rng));
      for (int i = 0; i < b; ++i) {
        node.child_ids.push_back(static_cast<int>(tree[n + 1].size()));
        tree[n + 1].push_back({node.mass * Rat(weights[i], wsum), {}});
      }
      if (static_cast<int>(tree[n + 1].size()) > max_outcomes) {
        throw DepthTooLarge("random filtration exceeds the outcome budget");
      }
    }
  }

  const int n_out = static_cast<int>(tree[depth].size());
  std::vector<std::string> ids(n_out);
  std::vector<Rat> probs(n_out);
  for (int i = 0; i < n_out; ++i) {
    ids[i] = "w" + std::to_string(i + 1);
    probs[i] = tree[depth][i].mass;
  }

  // Outcome set of each node, computed bottom-up.
  std::vector<std::vector<std::vector<int>>> span(depth + 1);
  span[depth].resize(n_out);
  for (int i = 0; i < n_out; ++i) span[depth][i] = {i};
  for (int n = depth - 1; n >= 0; --n) {
    span[n].resize(tree[n].size());
    for (std::size_t a = 0; a < tree[n].size(); ++a) {
      for (int c : tree[n][a].child_ids) {
        auto& s = span[n + 1][c];
        span[n][a].insert(span[n][a].end(), s.begin(), s.end());
      }
    }
  }
  return make(std::move(ids), std::move(probs), std::move(span));
}

std::vector<double> RandomVariable::doubles() const {
  std::vector<double> d(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) d[i] = to_double(values[i]);
  return d;
}

Rat RandomVariable::expectation() const {
  Rat e = 0;
  for (int i = 0; i < space->outcome_count(); ++i) {
    e += space->outcome_probability(i) * values[i];
  }
  return e;
}

RandomVariable conditional_expectation(const RandomVariable& x, int level) {
  const auto& F = *x.space;
  if (level < 0 || level > F.depth()) {
    throw LevelOutOfRange("level " + std::to_string(level) + " not in [0," +
                          std::to_string(F.depth()) + "]");
  }
  RandomVariable out{x.space, std::vector<Rat>(F.outcome_count())};
  for (int a = 0; a < F.atom_count(level); ++a) {
    Rat num = 0;
    for (int w : F.atom_outcomes(level, a)) {
      num += F.outcome_probability(w) * x.values[w];
    }
    Rat mean = num / F.atom_probability(level, a);
    for (int w : F.atom_outcomes(level, a)) out.values[w] = mean;
  }
  return out;
}

}  // namespace om
