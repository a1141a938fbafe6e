#include "om/martingale.hpp"

#include <cmath>

namespace om {

std::vector<Rat> AdaptedTable::terminal() const {
  const auto& F = *space;
  std::vector<Rat> out(F.outcome_count());
  for (int w = 0; w < F.outcome_count(); ++w) {
    out[w] = values[F.depth()][F.atom_of_outcome(F.depth(), w)];
  }
  return out;
}

Martingale Martingale::from_terminal(const RandomVariable& x) {
  if (x.expectation() != 0) {
    throw NonCenteredTerminal("terminal variable has mean " +
                              rat_to_string(x.expectation()));
  }
  const auto& F = *x.space;
  AdaptedTable t{x.space, {}};
  t.values.resize(F.depth() + 1);
  for (int n = 0; n <= F.depth(); ++n) {
    t.values[n].resize(F.atom_count(n));
    for (int a = 0; a < F.atom_count(n); ++a) {
      Rat num = 0;
      for (int w : F.atom_outcomes(n, a)) {
        num += F.outcome_probability(w) * x.values[w];
      }
      t.values[n][a] = num / F.atom_probability(n, a);
    }
  }
  return Martingale(std::move(t));
}

Martingale Martingale::zero(FiltrationPtr f) {
  AdaptedTable t{std::move(f), {}};
  t.values.resize(t.space->depth() + 1);
  for (int n = 0; n <= t.space->depth(); ++n) {
    t.values[n].assign(t.space->atom_count(n), Rat(0));
  }
  return Martingale(std::move(t));
}

Martingale Martingale::from_table(AdaptedTable table) {
  const auto& F = *table.space;
  if (static_cast<int>(table.values.size()) != F.depth() + 1) {
    throw FiltrationMismatch("table has wrong number of levels");
  }
  for (int n = 0; n <= F.depth(); ++n) {
    if (static_cast<int>(table.values[n].size()) != F.atom_count(n)) {
      throw FiltrationMismatch("table level " + std::to_string(n) +
                               " has wrong atom count");
    }
  }
  if (table.values[0][0] != 0) {
    throw NonCenteredTerminal("f_0 must be 0");
  }
  for (int n = 1; n <= F.depth(); ++n) {
    for (int a = 0; a < F.atom_count(n - 1); ++a) {
      Rat num = 0;
      for (int c : F.children(n - 1, a)) {
        num += F.atom_probability(n, c) * table.values[n][c];
      }
      if (num / F.atom_probability(n - 1, a) != table.values[n - 1][a]) {
        throw BadValue("table violates the martingale property at level " +
                       std::to_string(n - 1));
      }
    }
  }
  return Martingale(std::move(table));
}

RandomVariable Martingale::terminal() const {
  return RandomVariable{table_.space, table_.terminal()};
}

Rat Martingale::increment(int level, int outcome) const {
  if (level == 0) return Rat(0);
  return table_.at_outcome(level, outcome) - table_.at_outcome(level - 1, outcome);
}

bool Martingale::is_zero() const {
  for (const Rat& v : table_.values.back()) {
    if (v != 0) return false;
  }
  return true;
}

static void check_same_space(const Martingale& a, const Martingale& b) {
  if (!a.space()->same_as(*b.space())) {
    throw FiltrationMismatch("martingales live on different filtrations");
  }
}

Martingale operator+(const Martingale& a, const Martingale& b) {
  check_same_space(a, b);
  AdaptedTable t = a.table_;
  for (std::size_t n = 0; n < t.values.size(); ++n) {
    for (std::size_t i = 0; i < t.values[n].size(); ++i) {
      t.values[n][i] += b.table_.values[n][i];
    }
  }
  return Martingale(std::move(t));
}

Martingale operator-(const Martingale& a, const Martingale& b) {
  check_same_space(a, b);
  AdaptedTable t = a.table_;
  for (std::size_t n = 0; n < t.values.size(); ++n) {
    for (std::size_t i = 0; i < t.values[n].size(); ++i) {
      t.values[n][i] -= b.table_.values[n][i];
    }
  }
  return Martingale(std::move(t));
}

Martingale operator*(const Rat& c, const Martingale& a) {
  AdaptedTable t = a.table_;
  for (auto& level : t.values) {
    for (auto& v : level) v *= c;
  }
  return Martingale(std::move(t));
}

MaximalProcess maximal(const Martingale& f) {
  const auto& F = *f.space();
  MaximalProcess out;
  out.running.space = f.space();
  out.running.values.resize(F.depth() + 1);
  // M_n is F_n-measurable, so one value per level-n atom; M_n at an atom is
  // the max of |f_k| along the path from the root.
  for (int n = 0; n <= F.depth(); ++n) {
    out.running.values[n].resize(F.atom_count(n));
    for (int a = 0; a < F.atom_count(n); ++a) {
      Rat m = abs(f.value(n, a));
      if (n > 0) {
        const Rat& prev = out.running.values[n - 1][F.parent(n, a)];
        if (prev > m) m = prev;
      }
      out.running.values[n][a] = m;
    }
  }
  out.terminal = RandomVariable{f.space(), out.running.terminal()};
  return out;
}

SquareProcess quadratic(const Martingale& f) {
  const auto& F = *f.space();
  SquareProcess out;
  out.running_sq.space = f.space();
  out.running_sq.values.resize(F.depth() + 1);
  out.running_sq.values[0].assign(1, Rat(0));
  for (int n = 1; n <= F.depth(); ++n) {
    out.running_sq.values[n].resize(F.atom_count(n));
    for (int a = 0; a < F.atom_count(n); ++a) {
      Rat d = f.value(n, a) - f.value(n - 1, F.parent(n, a));
      out.running_sq.values[n][a] =
          out.running_sq.values[n - 1][F.parent(n, a)] + d * d;
    }
  }
  out.terminal_sq = RandomVariable{f.space(), out.running_sq.terminal()};
  return out;
}

/// E_{n-1}(df_n^2) at a level-(n-1) atom.
static Rat cond_increment_sq(const Martingale& f, int n, int parent_atom) {
  const auto& F = *f.space();
  Rat num = 0;
  for (int c : F.children(n - 1, parent_atom)) {
    Rat d = f.value(n, c) - f.value(n - 1, parent_atom);
    num += F.atom_probability(n, c) * d * d;
  }
  return num / F.atom_probability(n - 1, parent_atom);
}

SquareProcess conditional_quadratic(const Martingale& f) {
  const auto& F = *f.space();
  SquareProcess out;
  out.running_sq.space = f.space();
  out.running_sq.values.resize(F.depth() + 1);
  out.running_sq.values[0].assign(1, Rat(0));
  // s_n^2 = sum_{k<=n} E_{k-1}(df_k^2); s_n is F_{n-1}-measurable, so it is
  // constant across siblings, but we store it per level-n atom for symmetry
  // with S.
  for (int n = 1; n <= F.depth(); ++n) {
    out.running_sq.values[n].resize(F.atom_count(n));
    for (int a = 0; a < F.atom_count(n - 1); ++a) {
      Rat v = out.running_sq.values[n - 1][a] + cond_increment_sq(f, n, a);
      for (int c : F.children(n - 1, a)) out.running_sq.values[n][c] = v;
    }
  }
  out.terminal_sq = RandomVariable{f.space(), out.running_sq.terminal()};
  return out;
}

AdaptedTable conditional_quadratic_shifted_sq(const Martingale& f) {
  const auto& F = *f.space();
  SquareProcess s = conditional_quadratic(f);
  AdaptedTable out{f.space(), {}};
  out.values.resize(F.depth());
  // s_{n+1}^2 keyed by the level-n atom it is measurable on.
  for (int n = 0; n < F.depth(); ++n) {
    out.values[n].resize(F.atom_count(n));
    for (int a = 0; a < F.atom_count(n); ++a) {
      int child = F.children(n, a)[0];
      out.values[n][a] = s.running_sq.values[n + 1][child];
    }
  }
  return out;
}

std::vector<double> SquareProcess::terminal() const {
  std::vector<double> out(terminal_sq.values.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::sqrt(to_double(terminal_sq.values[i]));
  }
  return out;
}

}  // namespace om
