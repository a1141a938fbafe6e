#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "om/errors.hpp"
#include "om/rational.hpp"

namespace om {

struct NodeRef {
  int level = 0;
  int index = 0;
  friend bool operator==(const NodeRef&, const NodeRef&) = default;
  friend auto operator<=>(const NodeRef&, const NodeRef&) = default;
};

class FiniteFiltration;
using FiltrationPtr = std::shared_ptr<const FiniteFiltration>;

/// A finite filtered probability space: a rooted tree of atoms, one
/// partition per time index, with exact rational probabilities.
/// Level 0 is the trivial partition {Omega}; level N atoms are singletons.
class FiniteFiltration {
 public:
  static constexpr int kDefaultOutcomeBudget = 1 << 20;

  /// Validates refinement, positivity, total mass, trivial root,
  /// singleton leaves. `levels[n]` is a partition of outcome indices.
  static FiltrationPtr make(std::vector<std::string> outcome_ids,
                            std::vector<Rat> probabilities,
                            std::vector<std::vector<std::vector<int>>> levels);

  static FiltrationPtr dyadic(int depth, int max_outcomes = kDefaultOutcomeBudget);

  /// Deterministic for a fixed seed. skew in [0,1]; skew 0 forces equal
  /// child masses. Branching per internal node is uniform in
  /// {2..max_branching}.
  static FiltrationPtr random(int depth, int max_branching, double skew,
                              std::uint64_t seed,
                              int max_outcomes = kDefaultOutcomeBudget);

  int depth() const { return depth_; }
  int outcome_count() const { return static_cast<int>(outcome_prob_.size()); }
  const std::string& outcome_id(int i) const { return outcome_ids_[i]; }
  const Rat& outcome_probability(int i) const { return outcome_prob_[i]; }

  int atom_count(int level) const { return static_cast<int>(atoms_[level].size()); }
  const std::vector<int>& atom_outcomes(int level, int index) const {
    return atoms_[level][index];
  }
  const Rat& atom_probability(int level, int index) const {
    return atom_prob_[level][index];
  }
  int parent(int level, int index) const { return parent_[level][index]; }
  const std::vector<int>& children(int level, int index) const {
    return children_[level][index];
  }
  int atom_of_outcome(int level, int outcome) const {
    return outcome_atom_[level][outcome];
  }

  /// Least R with P(parent(A)) <= R P(A) over all non-root atoms; 1 for
  /// depth 0 by convention.
  Rat regularity_constant() const;

  /// lcm of the denominators of all outcome probabilities; the budget
  /// grid unit for the gap knapsack is 1/lcd.
  const Int& probability_lcd() const { return lcd_; }

  bool same_as(const FiniteFiltration& other) const { return this == &other; }

 private:
  FiniteFiltration() = default;
  void index_tree();

  int depth_ = 0;
  std::vector<std::string> outcome_ids_;
  std::vector<Rat> outcome_prob_;
  std::vector<std::vector<std::vector<int>>> atoms_;  // [level][atom] -> outcomes
  std::vector<std::vector<int>> parent_;              // [level][atom], level >= 1
  std::vector<std::vector<std::vector<int>>> children_;
  std::vector<std::vector<Rat>> atom_prob_;
  std::vector<std::vector<int>> outcome_atom_;  // [level][outcome] -> atom
  Int lcd_ = 1;
};

/// A random variable on the terminal sigma-algebra, one exact value per
/// outcome.
struct RandomVariable {
  FiltrationPtr space;
  std::vector<Rat> values;

  double at(int i) const { return to_double(values[i]); }
  std::vector<double> doubles() const;
  Rat expectation() const;
};

RandomVariable conditional_expectation(const RandomVariable& x, int level);

}  // namespace om
