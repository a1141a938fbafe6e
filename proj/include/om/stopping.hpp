#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "om/martingale.hpp"

namespace om {

/// A stopping time as an antichain of tree nodes; nu(omega) is the level of
/// the unique antichain node above omega, or kNever.
class StoppingTime {
 public:
  static constexpr int kNever = std::numeric_limits<int>::max();

  static StoppingTime from_antichain(FiltrationPtr f, std::vector<NodeRef> nodes);
  /// Per-outcome levels in {0..N} or kNever; must be measurable.
  static StoppingTime from_levels(FiltrationPtr f, const std::vector<int>& levels);
  static StoppingTime never(FiltrationPtr f);
  static StoppingTime constant(FiltrationPtr f, int level);

  const FiltrationPtr& space() const { return space_; }
  /// Sorted by (level, index).
  const std::vector<NodeRef>& antichain() const { return nodes_; }
  int level_at(int outcome) const { return level_[outcome]; }
  bool finite_at(int outcome) const { return level_[outcome] != kNever; }
  Rat finite_mass() const;  // P(nu < infinity)

  friend StoppingTime pointwise_max(const StoppingTime& a, const StoppingTime& b);
  friend bool pointwise_leq(const StoppingTime& a, const StoppingTime& b);
  friend bool operator==(const StoppingTime& a, const StoppingTime& b) {
    return a.nodes_ == b.nodes_;
  }

 private:
  StoppingTime(FiltrationPtr f, std::vector<NodeRef> nodes, std::vector<int> level)
      : space_(std::move(f)), nodes_(std::move(nodes)), level_(std::move(level)) {}

  FiltrationPtr space_;
  std::vector<NodeRef> nodes_;
  std::vector<int> level_;  // per outcome
};

/// nu(omega) = least n with gamma_{n+1}(omega) > lambda, else never.
/// `gamma` is a full adapted table whose entries at level n >= 1 must be
/// constant across siblings (predictability); throws NotPredictable.
/// Callers working with square processes pass squared values throughout.
StoppingTime first_passage_predictable(const AdaptedTable& gamma, const Rat& lambda);

/// nu(omega) = least n with gamma_n(omega) > lambda, else never.
StoppingTime first_passage_adapted(const AdaptedTable& gamma, const Rat& lambda);

/// nu(omega) = least n such that some level-(n+1) child of omega's level-n
/// atom carries gamma_{n+1} > lambda. Requires lambda >= gamma_0; guarantees
/// {gamma* > lambda} in {nu < inf}, gamma*_nu <= lambda, and
/// P(nu < inf) <= R P(gamma* > lambda), all exactly, and monotonicity in
/// lambda. Square processes: pass squared values.
StoppingTime regular_cover(const AdaptedTable& gamma, const Rat& lambda);

/// Antichain count, including the empty antichain (nu = never).
Int count_stopping_times(const FiniteFiltration& f);

/// Visits every stopping time exactly once; throws TooManyStoppingTimes when
/// the count exceeds `guard`.
void for_each_stopping_time(FiltrationPtr f,
                            const std::function<void(const StoppingTime&)>& visit,
                            Int guard = 1000000);

Martingale stop(const Martingale& f, const StoppingTime& nu);

/// ||f_N - f^nu_N||_q over {nu < inf}.
double difference_gap(const Martingale& f, const StoppingTime& nu, double q);

struct GapOptions {
  Int enumeration_guard = 1000000;
  Int lcd_guard = Int(1) << 20;
  Int cell_guard = 8000000;  // budget cells x nodes cap for the DP
  int float_grid = 4096;
  bool allow_float_fallback = true;
};

struct GapResult {
  double value = 0;                // gain^{1/q}
  Rat gain = 0;                    // sum of node gains, exact
  std::vector<NodeRef> witness;    // optimal antichain, canonical tie-break
  bool exact = true;               // false for the float-grid lower bound
  std::string method;              // "dp", "enumeration", "float-grid"
};

/// sup_{P(nu<inf) <= x} ||f - f^nu||_q. Exact tree-knapsack DP on the
/// 1/lcd budget grid; falls back to enumeration, then to a float-grid
/// lower bound. Ties break toward fewer nodes, then lexicographic nodes.
GapResult max_gap(const Martingale& f, double q, const Rat& budget,
                  const GapOptions& opt = {});

/// Step profile of max_gap over all budgets in one pass: breakpoints[i] is
/// the least budget achieving values[i]; values strictly increasing.
struct GapProfile {
  std::vector<Rat> breakpoints;
  std::vector<GapResult> steps;
  bool exact = true;
  std::string method;

  /// Value at budget x (0 below the first breakpoint).
  const GapResult* at(const Rat& x) const;
};

GapProfile gap_profile(const Martingale& f, double q, const GapOptions& opt = {});

/// max over single atoms A at levels n >= 1 with P(A) <= x of
/// (int_A |f_N - E_n f_N|^q dP)^{1/q}.
GapResult max_atom_gap(const Martingale& f, double q, const Rat& budget);

GapProfile atom_gap_profile(const Martingale& f, double q);

}  // namespace om
