#include "om/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace om {

double lq_norm(const RandomVariable& x, double q) {
  const auto& F = *x.space;
  if (std::isinf(q)) {
    Rat m = 0;
    for (const Rat& v : x.values) {
      Rat a = abs(v);
      if (a > m) m = a;
    }
    return to_double(m);
  }
  if (q < 1) throw BadValue("q must be >= 1");
  double sum = 0;
  for (int w = 0; w < F.outcome_count(); ++w) {
    sum += to_double(F.outcome_probability(w)) *
           std::pow(std::abs(to_double(x.values[w])), q);
  }
  return std::pow(sum, 1.0 / q);
}

double luxemburg_norm(const RandomVariable& x, const OrliczFunction& phi) {
  const auto& F = *x.space;
  std::vector<double> av;
  bool all_zero = true;
  for (const Rat& v : x.values) {
    av.push_back(std::abs(to_double(v)));
    if (v != 0) all_zero = false;
  }
  if (all_zero) return 0;
  auto mean_phi = [&](double c) {
    double s = 0;
    for (int w = 0; w < F.outcome_count(); ++w) {
      if (av[w] > 0) s += to_double(F.outcome_probability(w)) * phi(av[w] / c);
    }
    return s;
  };
  double hi = 1.0;
  while (mean_phi(hi) > 1) hi *= 2;
  double lo = hi;
  while (lo > 1e-300 && mean_phi(lo / 2) <= 1) lo /= 2;
  lo /= 2;
  for (int it = 0; it < 200 && (hi - lo) > 1e-10 * hi; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mean_phi(mid) <= 1) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double weak_orlicz_norm_pairs(std::vector<std::pair<double, Rat>> pairs,
                              const OrliczFunction& phi) {
  std::map<double, Rat> grouped;
  for (auto& [v, m] : pairs) {
    if (v > 0 && m > 0) grouped[v] += m;
  }
  if (grouped.empty()) return 0;
  // Suffix masses give P(|X| >= v_i); each constraint inverts in closed form.
  double best = 0;
  Rat suffix = 0;
  for (auto it = grouped.rbegin(); it != grouped.rend(); ++it) {
    suffix += it->second;
    double inv = phi.inverse(1.0 / to_double(suffix));
    if (inv > 0) best = std::max(best, it->first / inv);
  }
  return best;
}

double weak_orlicz_norm_sq_pairs(const std::vector<std::pair<Rat, Rat>>& sq_pairs,
                                 const OrliczFunction& phi) {
  std::map<Rat, Rat> grouped;
  for (const auto& [vsq, m] : sq_pairs) {
    if (vsq > 0 && m > 0) grouped[vsq] += m;
  }
  std::vector<std::pair<double, Rat>> pairs;
  for (const auto& [vsq, m] : grouped) {
    pairs.emplace_back(std::sqrt(to_double(vsq)), m);
  }
  return weak_orlicz_norm_pairs(std::move(pairs), phi);
}

double weak_orlicz_norm(const RandomVariable& x, const OrliczFunction& phi) {
  const auto& F = *x.space;
  std::map<Rat, Rat> grouped;
  for (int w = 0; w < F.outcome_count(); ++w) {
    Rat a = abs(x.values[w]);
    if (a > 0) grouped[a] += F.outcome_probability(w);
  }
  std::vector<std::pair<double, Rat>> pairs;
  for (const auto& [v, m] : grouped) pairs.emplace_back(to_double(v), m);
  return weak_orlicz_norm_pairs(std::move(pairs), phi);
}

namespace {

std::vector<std::pair<Rat, Rat>> sq_pairs_of(const FiniteFiltration& F,
                                             const std::vector<Rat>& sq) {
  std::vector<std::pair<Rat, Rat>> pairs;
  for (int w = 0; w < F.outcome_count(); ++w) {
    pairs.emplace_back(sq[w], F.outcome_probability(w));
  }
  return pairs;
}

}  // namespace

HardyNorms hardy_norms(const Martingale& f, const OrliczFunction& phi) {
  const auto& F = *f.space();
  HardyNorms out;
  out.maximal = weak_orlicz_norm(maximal(f).terminal, phi);
  out.square = weak_orlicz_norm_sq_pairs(
      sq_pairs_of(F, quadratic(f).terminal_sq.values), phi);
  out.cond_square = weak_orlicz_norm_sq_pairs(
      sq_pairs_of(F, conditional_quadratic(f).terminal_sq.values), phi);
  return out;
}

namespace {

/// Squared one-step-ahead target at a level-n atom: max over children of
/// S_{n+1}^2 (Q) or f_{n+1}^2 (D).
Rat target_ahead_sq(const Martingale& f, const AdaptedTable& ssq,
                    ControlTarget target, int level, int atom) {
  const auto& F = *f.space();
  Rat best = 0;
  for (int c : F.children(level, atom)) {
    Rat v = target == ControlTarget::Q ? ssq.values[level + 1][c]
                                       : f.value(level + 1, c) * f.value(level + 1, c);
    if (v > best) best = v;
  }
  return best;
}

}  // namespace

PredictableControl PredictableControl::from_lambda_sq(
    const Martingale& f, ControlTarget target,
    std::vector<std::vector<Rat>> lambda_sq) {
  const auto& F = *f.space();
  if (static_cast<int>(lambda_sq.size()) != F.depth() + 1) {
    throw InadmissibleControl("control has wrong number of levels");
  }
  for (int n = 0; n <= F.depth(); ++n) {
    if (static_cast<int>(lambda_sq[n].size()) != F.atom_count(n)) {
      throw InadmissibleControl("control level size mismatch");
    }
    for (const Rat& v : lambda_sq[n]) {
      if (v < 0) throw InadmissibleControl("negative control value");
    }
  }
  AdaptedTable ssq =
      target == ControlTarget::Q ? quadratic(f).running_sq : AdaptedTable{};
  for (int n = 0; n < F.depth(); ++n) {
    for (int a = 0; a < F.atom_count(n); ++a) {
      for (int c : F.children(n, a)) {
        if (lambda_sq[n + 1][c] < lambda_sq[n][a]) {
          throw InadmissibleControl("control decreases along a path");
        }
      }
      if (target_ahead_sq(f, ssq, target, n, a) > lambda_sq[n][a]) {
        throw InadmissibleControl("control fails to dominate the target at level " +
                                  std::to_string(n));
      }
    }
  }
  return PredictableControl(f.space(), target, std::move(lambda_sq));
}

std::vector<Rat> PredictableControl::terminal_sq() const {
  const auto& F = *space_;
  std::vector<Rat> out(F.outcome_count());
  for (int w = 0; w < F.outcome_count(); ++w) {
    out[w] = lambda_sq_[F.depth()][F.atom_of_outcome(F.depth(), w)];
  }
  return out;
}

PredictableControl minimal_control(const Martingale& f, ControlTarget target) {
  const auto& F = *f.space();
  AdaptedTable ssq =
      target == ControlTarget::Q ? quadratic(f).running_sq : AdaptedTable{};
  std::vector<std::vector<Rat>> lam(F.depth() + 1);
  for (int n = 0; n <= F.depth(); ++n) {
    lam[n].resize(F.atom_count(n));
    for (int a = 0; a < F.atom_count(n); ++a) {
      Rat prev = n > 0 ? lam[n - 1][F.parent(n, a)] : Rat(0);
      Rat ahead = n < F.depth() ? target_ahead_sq(f, ssq, target, n, a) : Rat(0);
      lam[n][a] = std::max(prev, ahead);
    }
  }
  return PredictableControl::from_lambda_sq(f, target, std::move(lam));
}

double control_norm(const Martingale& f, const OrliczFunction& phi,
                    ControlTarget target) {
  PredictableControl c = minimal_control(f, target);
  return weak_orlicz_norm_sq_pairs(sq_pairs_of(*f.space(), c.terminal_sq()), phi);
}

double atomic_quasinorm(const std::vector<std::pair<int, Rat>>& levels,
                        const OrliczFunction& phi) {
  double best = 0;
  for (const auto& [k, mass] : levels) {
    if (mass <= 0) continue;
    double inv = phi.inverse(1.0 / to_double(mass));
    if (inv > 0) best = std::max(best, std::pow(2.0, k) / inv);
  }
  return best;
}

}  // namespace om
