#include "om/stopping.hpp"

#include <algorithm>
#include <cmath>

namespace om {

namespace {

std::vector<int> levels_from_nodes(const FiniteFiltration& F,
                                   const std::vector<NodeRef>& nodes) {
  std::vector<int> level(F.outcome_count(), StoppingTime::kNever);
  for (const NodeRef& v : nodes) {
    if (v.level < 0 || v.level > F.depth() || v.index < 0 ||
        v.index >= F.atom_count(v.level)) {
      throw BadAntichain("node out of range");
    }
    for (int w : F.atom_outcomes(v.level, v.index)) {
      if (level[w] != StoppingTime::kNever) {
        throw BadAntichain("antichain nodes overlap");
      }
      level[w] = v.level;
    }
  }
  return level;
}

}  // namespace

StoppingTime StoppingTime::from_antichain(FiltrationPtr f,
                                          std::vector<NodeRef> nodes) {
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  auto level = levels_from_nodes(*f, nodes);
  return StoppingTime(std::move(f), std::move(nodes), std::move(level));
}

StoppingTime StoppingTime::from_levels(FiltrationPtr f,
                                       const std::vector<int>& levels) {
  const auto& F = *f;
  if (static_cast<int>(levels.size()) != F.outcome_count()) {
    throw BadValue("one level per outcome required");
  }
  std::vector<NodeRef> nodes;
  for (int w = 0; w < F.outcome_count(); ++w) {
    int n = levels[w];
    if (n == kNever) continue;
    if (n < 0 || n > F.depth()) throw BadValue("stopping level out of range");
    int a = F.atom_of_outcome(n, w);
    for (int u : F.atom_outcomes(n, a)) {
      if (levels[u] != n) {
        throw BadAntichain("stopping map not measurable");
      }
    }
    if (F.atom_outcomes(n, a)[0] == w) nodes.push_back({n, a});
  }
  std::sort(nodes.begin(), nodes.end());
  return StoppingTime(std::move(f), std::move(nodes), levels);
}

StoppingTime StoppingTime::never(FiltrationPtr f) {
  return from_antichain(std::move(f), {});
}

StoppingTime StoppingTime::constant(FiltrationPtr f, int level) {
  if (level < 0 || level > f->depth()) {
    throw LevelOutOfRange("constant stopping level out of range");
  }
  std::vector<NodeRef> nodes;
  for (int a = 0; a < f->atom_count(level); ++a) nodes.push_back({level, a});
  return from_antichain(std::move(f), std::move(nodes));
}

Rat StoppingTime::finite_mass() const {
  Rat m = 0;
  for (const NodeRef& v : nodes_) m += space_->atom_probability(v.level, v.index);
  return m;
}

StoppingTime pointwise_max(const StoppingTime& a, const StoppingTime& b) {
  if (!a.space_->same_as(*b.space_)) {
    throw FiltrationMismatch("stopping times on different filtrations");
  }
  std::vector<int> level(a.level_.size());
  for (std::size_t w = 0; w < level.size(); ++w) {
    level[w] = std::max(a.level_[w], b.level_[w]);
  }
  return StoppingTime::from_levels(a.space_, level);
}

bool pointwise_leq(const StoppingTime& a, const StoppingTime& b) {
  if (!a.space_->same_as(*b.space_)) {
    throw FiltrationMismatch("stopping times on different filtrations");
  }
  for (std::size_t w = 0; w < a.level_.size(); ++w) {
    if (a.level_[w] > b.level_[w]) return false;
  }
  return true;
}

static void check_full_table(const AdaptedTable& gamma) {
  const auto& F = *gamma.space;
  if (static_cast<int>(gamma.values.size()) != F.depth() + 1) {
    throw FiltrationMismatch("adapted table has wrong number of levels");
  }
  for (int n = 0; n <= F.depth(); ++n) {
    if (static_cast<int>(gamma.values[n].size()) != F.atom_count(n)) {
      throw FiltrationMismatch("adapted table level size mismatch");
    }
  }
}

StoppingTime first_passage_predictable(const AdaptedTable& gamma,
                                       const Rat& lambda) {
  const auto& F = *gamma.space;
  check_full_table(gamma);
  for (int n = 1; n <= F.depth(); ++n) {
    for (int a = 0; a < F.atom_count(n - 1); ++a) {
      const auto& ch = F.children(n - 1, a);
      for (int c : ch) {
        if (gamma.values[n][c] != gamma.values[n][ch[0]]) {
          throw NotPredictable("gamma_{n+1} not constant on level-n atoms");
        }
      }
    }
  }
  std::vector<int> level(F.outcome_count(), StoppingTime::kNever);
  for (int w = 0; w < F.outcome_count(); ++w) {
    for (int n = 0; n < F.depth(); ++n) {
      if (gamma.values[n + 1][F.atom_of_outcome(n + 1, w)] > lambda) {
        level[w] = n;
        break;
      }
    }
  }
  return StoppingTime::from_levels(gamma.space, level);
}

StoppingTime first_passage_adapted(const AdaptedTable& gamma, const Rat& lambda) {
  const auto& F = *gamma.space;
  check_full_table(gamma);
  std::vector<int> level(F.outcome_count(), StoppingTime::kNever);
  for (int w = 0; w < F.outcome_count(); ++w) {
    for (int n = 0; n <= F.depth(); ++n) {
      if (gamma.values[n][F.atom_of_outcome(n, w)] > lambda) {
        level[w] = n;
        break;
      }
    }
  }
  return StoppingTime::from_levels(gamma.space, level);
}

StoppingTime regular_cover(const AdaptedTable& gamma, const Rat& lambda) {
  const auto& F = *gamma.space;
  check_full_table(gamma);
  if (lambda < gamma.values[0][0]) {
    throw LambdaTooSmall("lambda below gamma_0 = " +
                         rat_to_string(gamma.values[0][0]));
  }
  std::vector<int> level(F.outcome_count(), StoppingTime::kNever);
  for (int w = 0; w < F.outcome_count(); ++w) {
    for (int n = 0; n < F.depth(); ++n) {
      bool trigger = false;
      for (int c : F.children(n, F.atom_of_outcome(n, w))) {
        if (gamma.values[n + 1][c] > lambda) {
          trigger = true;
          break;
        }
      }
      if (trigger) {
        level[w] = n;
        break;
      }
    }
  }
  return StoppingTime::from_levels(gamma.space, level);
}

Int count_stopping_times(const FiniteFiltration& F) {
  // A(v) = 1 + prod over children; leaves count the empty option too.
  std::vector<std::vector<Int>> a(F.depth() + 1);
  for (int n = F.depth(); n >= 0; --n) {
    a[n].resize(F.atom_count(n));
    for (int idx = 0; idx < F.atom_count(n); ++idx) {
      Int prod = 1;
      if (n < F.depth()) {
        for (int c : F.children(n, idx)) prod *= a[n + 1][c];
      }
      a[n][idx] = 1 + prod;
    }
  }
  return a[0][0];
}

namespace {

struct Enumerator {
  const FiniteFiltration& F;
  FiltrationPtr fp;
  const std::function<void(const StoppingTime&)>& visit;
  std::vector<NodeRef> cur;

  void emit() { visit(StoppingTime::from_antichain(fp, cur)); }

  void subtree(int level, int idx, const std::function<void()>& cont) {
    cur.push_back({level, idx});
    cont();
    cur.pop_back();
    if (level == F.depth()) {
      cont();
      return;
    }
    chain(level, idx, 0, cont);
  }

  void chain(int level, int idx, std::size_t ci, const std::function<void()>& cont) {
    const auto& ch = F.children(level, idx);
    if (ci == ch.size()) {
      cont();
      return;
    }
    subtree(level + 1, ch[ci], [&] { chain(level, idx, ci + 1, cont); });
  }
};

}  // namespace

void for_each_stopping_time(FiltrationPtr f,
                            const std::function<void(const StoppingTime&)>& visit,
                            Int guard) {
  Int n = count_stopping_times(*f);
  if (n > guard) {
    throw TooManyStoppingTimes(n.str() + " stopping times exceeds the guard");
  }
  Enumerator e{*f, f, visit, {}};
  e.subtree(0, 0, [&] { e.emit(); });
}

Martingale stop(const Martingale& f, const StoppingTime& nu) {
  if (!f.space()->same_as(*nu.space())) {
    throw FiltrationMismatch("stopping time on a different filtration");
  }
  const auto& F = *f.space();
  AdaptedTable t{f.space(), {}};
  t.values.resize(F.depth() + 1);
  for (int n = 0; n <= F.depth(); ++n) {
    t.values[n].resize(F.atom_count(n));
    for (int a = 0; a < F.atom_count(n); ++a) {
      int w = F.atom_outcomes(n, a)[0];
      int m = std::min(n, nu.level_at(w));
      t.values[n][a] = f.value(m, F.atom_of_outcome(m, w));
    }
  }
  return Martingale::from_table(std::move(t));
}

namespace {

/// |d|^q as an exact rational: exact power for integral q, otherwise the
/// exactly represented double.
Rat pow_abs_q(const Rat& d, double q) {
  Rat a = abs(d);
  if (a == 0) return Rat(0);
  if (q == std::floor(q) && q >= 1 && q <= 64) {
    Rat r = 1;
    for (int i = 0; i < static_cast<int>(q); ++i) r *= a;
    return r;
  }
  return rat_from_double(std::pow(to_double(a), q));
}

/// Node gains g(v) = sum_{w in v} p(w) |f_N(w) - f_{level(v)}(v)|^q.
std::vector<std::vector<Rat>> node_gains(const Martingale& f, double q) {
  const auto& F = *f.space();
  auto fN = f.terminal().values;
  std::vector<std::vector<Rat>> g(F.depth() + 1);
  for (int n = 0; n <= F.depth(); ++n) {
    g[n].resize(F.atom_count(n));
    for (int a = 0; a < F.atom_count(n); ++a) {
      Rat sum = 0;
      for (int w : F.atom_outcomes(n, a)) {
        sum += F.outcome_probability(w) * pow_abs_q(fN[w] - f.value(n, a), q);
      }
      g[n][a] = sum;
    }
  }
  return g;
}

struct Cell {
  Rat gain = 0;
  int count = 0;
  std::vector<NodeRef> nodes;
};

/// gain desc, node count asc, lexicographic nodes asc.
bool better(const Cell& a, const Cell& b) {
  if (a.gain != b.gain) return a.gain > b.gain;
  if (a.count != b.count) return a.count < b.count;
  return a.nodes < b.nodes;
}

Cell merge_cells(const Cell& a, const Cell& b) {
  Cell out;
  out.gain = a.gain + b.gain;
  out.count = a.count + b.count;
  out.nodes.resize(a.nodes.size() + b.nodes.size());
  std::merge(a.nodes.begin(), a.nodes.end(), b.nodes.begin(), b.nodes.end(),
             out.nodes.begin());
  return out;
}

std::vector<Cell> combine(const std::vector<Cell>& a, const std::vector<Cell>& b) {
  const long B = static_cast<long>(a.size()) - 1;
  std::vector<Cell> out(B + 1);
  for (long t = 0; t <= B; ++t) {
    Cell best = merge_cells(a[t], b[0]);
    for (long s = 0; s < t; ++s) {
      Cell cand = merge_cells(a[s], b[t - s]);
      if (better(cand, best)) best = std::move(cand);
    }
    out[t] = std::move(best);
  }
  return out;
}

/// Best antichain within subtree (level, idx) per budget <= b, in grid units.
std::vector<Cell> dp_node(const FiniteFiltration& F,
                          const std::vector<std::vector<Rat>>& gains,
                          const std::vector<std::vector<long>>& weights,
                          int level, int idx, long B) {
  std::vector<Cell> comb(B + 1);
  if (level < F.depth()) {
    bool first = true;
    for (int c : F.children(level, idx)) {
      auto dc = dp_node(F, gains, weights, level + 1, c, B);
      comb = first ? std::move(dc) : combine(comb, dc);
      first = false;
    }
  }
  const long w = weights[level][idx];
  if (w <= B) {
    Cell take{gains[level][idx], 1, {NodeRef{level, idx}}};
    for (long b = w; b <= B; ++b) {
      if (better(take, comb[b])) comb[b] = take;
    }
  }
  return comb;
}

GapResult result_from_cell(Cell cell, double q, bool exact, std::string method) {
  GapResult r;
  r.value = std::pow(to_double(cell.gain), 1.0 / q);
  r.gain = std::move(cell.gain);
  r.witness = std::move(cell.nodes);
  r.exact = exact;
  r.method = std::move(method);
  return r;
}

long total_nodes(const FiniteFiltration& F) {
  long n = 0;
  for (int lv = 0; lv <= F.depth(); ++lv) n += F.atom_count(lv);
  return n;
}

/// Integer node weights: exact P(v)*lcd for the exact grid, or ceil(P(v)*G)
/// for the float fallback grid (overestimates keep feasibility).
std::vector<std::vector<long>> grid_weights(const FiniteFiltration& F,
                                            const Int& grid, bool round_up) {
  std::vector<std::vector<long>> w(F.depth() + 1);
  for (int n = 0; n <= F.depth(); ++n) {
    w[n].resize(F.atom_count(n));
    for (int a = 0; a < F.atom_count(n); ++a) {
      Rat scaled = F.atom_probability(n, a) * Rat(grid);
      Int units = floor_rat(scaled);
      if (round_up && Rat(units) != scaled) units += 1;
      w[n][a] = static_cast<long>(units);
    }
  }
  return w;
}

Cell cell_of(const StoppingTime& nu, const std::vector<std::vector<Rat>>& gains) {
  Cell c;
  c.nodes = nu.antichain();
  c.count = static_cast<int>(c.nodes.size());
  for (const NodeRef& v : c.nodes) c.gain += gains[v.level][v.index];
  return c;
}

}  // namespace

GapResult max_gap(const Martingale& f, double q, const Rat& budget,
                  const GapOptions& opt) {
  if (q < 1) throw BadValue("q must be >= 1");
  if (budget < 0) throw BadValue("budget must be nonnegative");
  const auto& F = *f.space();
  const Rat x = budget > 1 ? Rat(1) : budget;
  auto gains = node_gains(f, q);

  const Int lcd = F.probability_lcd();
  if (lcd <= opt.lcd_guard) {
    const long B = static_cast<long>(floor_rat(x * Rat(lcd)));
    if (Int(B + 1) * total_nodes(F) <= opt.cell_guard) {
      auto weights = grid_weights(F, lcd, false);
      auto dp = dp_node(F, gains, weights, 0, 0, B);
      return result_from_cell(std::move(dp[B]), q, true, "dp");
    }
  }
  if (count_stopping_times(F) <= opt.enumeration_guard) {
    Cell best;
    for_each_stopping_time(f.space(), [&](const StoppingTime& nu) {
      if (nu.finite_mass() > x) return;
      Cell c = cell_of(nu, gains);
      if (better(c, best)) best = std::move(c);
    });
    return result_from_cell(std::move(best), q, true, "enumeration");
  }
  if (!opt.allow_float_fallback) {
    throw BudgetGridOverflow("probability lcd " + lcd.str() +
                             " exceeds the budget grid guard");
  }
  const Int grid = opt.float_grid;
  const long B = static_cast<long>(floor_rat(x * Rat(grid)));
  auto weights = grid_weights(F, grid, true);
  auto dp = dp_node(F, gains, weights, 0, 0, B);
  return result_from_cell(std::move(dp[B]), q, false, "float-grid");
}

const GapResult* GapProfile::at(const Rat& x) const {
  const GapResult* hit = nullptr;
  for (std::size_t i = 0; i < breakpoints.size(); ++i) {
    if (breakpoints[i] <= x) hit = &steps[i];
  }
  return hit;
}

namespace {

GapProfile profile_from_budget_cells(std::vector<Cell> dp, const Int& grid,
                                     double q, bool exact, std::string method) {
  GapProfile prof;
  prof.exact = exact;
  prof.method = method;
  Rat prev_gain = 0;
  for (std::size_t b = 0; b < dp.size(); ++b) {
    if (dp[b].gain > prev_gain) {
      prev_gain = dp[b].gain;
      prof.breakpoints.push_back(Rat(Int(b), grid));
      prof.steps.push_back(result_from_cell(std::move(dp[b]), q, exact, method));
    }
  }
  return prof;
}

}  // namespace

GapProfile gap_profile(const Martingale& f, double q, const GapOptions& opt) {
  if (q < 1) throw BadValue("q must be >= 1");
  const auto& F = *f.space();
  auto gains = node_gains(f, q);

  const Int lcd = F.probability_lcd();
  if (lcd <= opt.lcd_guard) {
    const long B = static_cast<long>(lcd);
    if (Int(B + 1) * total_nodes(F) <= opt.cell_guard) {
      auto weights = grid_weights(F, lcd, false);
      auto dp = dp_node(F, gains, weights, 0, 0, B);
      return profile_from_budget_cells(std::move(dp), lcd, q, true, "dp");
    }
  }
  if (count_stopping_times(F) <= opt.enumeration_guard) {
    // Sweep antichains by mass, keeping the running best.
    std::vector<std::pair<Rat, Cell>> all;
    for_each_stopping_time(f.space(), [&](const StoppingTime& nu) {
      all.emplace_back(nu.finite_mass(), cell_of(nu, gains));
    });
    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first < b.first;
      return better(a.second, b.second);
    });
    GapProfile prof;
    prof.exact = true;
    prof.method = "enumeration";
    Rat best_gain = 0;
    for (auto& [mass, cell] : all) {
      if (cell.gain > best_gain) {
        best_gain = cell.gain;
        prof.breakpoints.push_back(mass);
        prof.steps.push_back(result_from_cell(std::move(cell), q, true,
                                              "enumeration"));
      }
    }
    return prof;
  }
  if (!opt.allow_float_fallback) {
    throw BudgetGridOverflow("probability lcd " + lcd.str() +
                             " exceeds the budget grid guard");
  }
  const Int grid = opt.float_grid;
  auto weights = grid_weights(F, grid, true);
  auto dp = dp_node(F, gains, weights, 0, 0, static_cast<long>(grid));
  return profile_from_budget_cells(std::move(dp), grid, q, false, "float-grid");
}

GapResult max_atom_gap(const Martingale& f, double q, const Rat& budget) {
  if (q < 1) throw BadValue("q must be >= 1");
  const auto& F = *f.space();
  auto gains = node_gains(f, q);
  Cell best;
  for (int n = 1; n <= F.depth(); ++n) {
    for (int a = 0; a < F.atom_count(n); ++a) {
      if (F.atom_probability(n, a) > budget) continue;
      Cell c{gains[n][a], 1, {NodeRef{n, a}}};
      if (c.gain != 0 && better(c, best)) best = std::move(c);
    }
  }
  return result_from_cell(std::move(best), q, true, "atom-scan");
}

GapProfile atom_gap_profile(const Martingale& f, double q) {
  if (q < 1) throw BadValue("q must be >= 1");
  const auto& F = *f.space();
  auto gains = node_gains(f, q);
  std::vector<std::pair<Rat, Cell>> all;
  for (int n = 1; n <= F.depth(); ++n) {
    for (int a = 0; a < F.atom_count(n); ++a) {
      all.emplace_back(F.atom_probability(n, a),
                       Cell{gains[n][a], 1, {NodeRef{n, a}}});
    }
  }
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return better(a.second, b.second);
  });
  GapProfile prof;
  prof.exact = true;
  prof.method = "atom-scan";
  Rat best_gain = 0;
  for (auto& [mass, cell] : all) {
    if (cell.gain > best_gain) {
      best_gain = cell.gain;
      prof.breakpoints.push_back(mass);
      prof.steps.push_back(result_from_cell(std::move(cell), q, true, "atom-scan"));
    }
  }
  return prof;
}

double difference_gap(const Martingale& f, const StoppingTime& nu, double q) {
  if (q < 1) throw BadValue("q must be >= 1");
  if (!f.space()->same_as(*nu.space())) {
    throw FiltrationMismatch("stopping time on a different filtration");
  }
  const auto& F = *f.space();
  auto fN = f.terminal().values;
  Rat sum = 0;
  for (int w = 0; w < F.outcome_count(); ++w) {
    int m = nu.level_at(w);
    if (m == StoppingTime::kNever) continue;
    Rat diff = fN[w] - f.value(m, F.atom_of_outcome(m, w));
    sum += F.outcome_probability(w) * pow_abs_q(diff, q);
  }
  return std::pow(to_double(sum), 1.0 / q);
}

}  // namespace om
