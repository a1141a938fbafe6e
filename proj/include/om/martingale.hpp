#pragma once

#include <vector>

#include "om/filtration.hpp"

namespace om {

/// One exact value per (level, atom); the carrier for martingale value
/// tables and adapted processes.
struct AdaptedTable {
  FiltrationPtr space;
  std::vector<std::vector<Rat>> values;  // values[n][atom]

  const Rat& at(int level, int atom) const { return values[level][atom]; }
  Rat at_outcome(int level, int outcome) const {
    return values[level][space->atom_of_outcome(level, outcome)];
  }
  std::vector<Rat> terminal() const;  // per outcome, from the finest level
};

/// A martingale adapted to a FiniteFiltration, determined by a centered
/// terminal variable; f_0 = 0 by library convention.
class Martingale {
 public:
  static Martingale from_terminal(const RandomVariable& x);  // NonCenteredTerminal
  static Martingale zero(FiltrationPtr f);
  static Martingale from_table(AdaptedTable table);  // validates E_n f_{n+1} = f_n

  const FiltrationPtr& space() const { return table_.space; }
  int depth() const { return table_.space->depth(); }
  const Rat& value(int level, int atom) const { return table_.values[level][atom]; }
  Rat value_at_outcome(int level, int outcome) const {
    return table_.at_outcome(level, outcome);
  }
  RandomVariable terminal() const;
  /// df_n at an outcome; df_0 = f_0 = 0.
  Rat increment(int level, int outcome) const;
  const AdaptedTable& table() const { return table_; }
  bool is_zero() const;

  friend Martingale operator+(const Martingale& a, const Martingale& b);
  friend Martingale operator-(const Martingale& a, const Martingale& b);
  friend Martingale operator*(const Rat& c, const Martingale& a);

 private:
  explicit Martingale(AdaptedTable t) : table_(std::move(t)) {}
  AdaptedTable table_;
};

struct MaximalProcess {
  AdaptedTable running;      // M_n per (level, atom-of-outcome max is constant)
  RandomVariable terminal;   // M(f), exact
};

/// S or s with exact squared tables; terminal() takes square roots.
struct SquareProcess {
  AdaptedTable running_sq;    // S_n^2 or s_n^2
  RandomVariable terminal_sq;
  std::vector<double> terminal() const;
};

MaximalProcess maximal(const Martingale& f);
SquareProcess quadratic(const Martingale& f);
SquareProcess conditional_quadratic(const Martingale& f);

/// s_{n+1}^2 keyed by level-n atoms (the predictable view), levels 0..N-1.
AdaptedTable conditional_quadratic_shifted_sq(const Martingale& f);

}  // namespace om
