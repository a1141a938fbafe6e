#include "om/atomic.hpp"

#include <climits>
#include <cmath>
#include <functional>

namespace om {

std::string atom_kind_name(AtomKind k) {
  switch (k) {
    case AtomKind::CondSquare: return "s";
    case AtomKind::Square: return "S";
    case AtomKind::Maximal: return "M";
  }
  return "?";
}

namespace {

/// Terminal operator values of the atom's kind, squared for s and S so the
/// comparisons stay exact.
std::vector<Rat> op_terminal(const WeakAtom& atom, bool& squared) {
  switch (atom.kind) {
    case AtomKind::CondSquare:
      squared = true;
      return conditional_quadratic(atom.a).terminal_sq.values;
    case AtomKind::Square:
      squared = true;
      return quadratic(atom.a).terminal_sq.values;
    case AtomKind::Maximal:
      squared = false;
      return maximal(atom.a).terminal.values;
  }
  squared = false;
  return {};
}

}  // namespace

AtomReport verify_atom(const WeakAtom& atom) {
  const auto& F = *atom.a.space();
  AtomReport rep;

  rep.vanish_ok = true;
  for (int n = 0; n <= F.depth() && rep.vanish_ok; ++n) {
    for (int w = 0; w < F.outcome_count(); ++w) {
      if (atom.nu.level_at(w) >= n && atom.a.value_at_outcome(n, w) != 0) {
        rep.vanish_ok = false;
        break;
      }
    }
  }

  bool squared = false;
  auto op = op_terminal(atom, squared);
  const Rat cap = squared ? atom.bound * atom.bound : atom.bound;
  rep.bound_ok = true;
  rep.support_ok = true;
  for (int w = 0; w < F.outcome_count(); ++w) {
    if (op[w] > cap) rep.bound_ok = false;
    if (!atom.nu.finite_at(w) && op[w] != 0) rep.support_ok = false;
  }
  return rep;
}

std::vector<std::pair<int, Rat>> AtomicDecomposition::level_masses() const {
  std::vector<std::pair<int, Rat>> out;
  for (const WeakAtom& atom : atoms) {
    out.emplace_back(atom.k, atom.nu.finite_mass());
  }
  return out;
}

Martingale AtomicDecomposition::partial_sum(const FiltrationPtr& space, int m,
                                            int n) const {
  Martingale acc = Martingale::zero(space);
  for (const WeakAtom& atom : atoms) {
    if (atom.k >= m && atom.k <= n) acc = acc + atom.a;
  }
  return acc;
}

const StoppingTime& AtomicDecomposition::nu_for(int k) const {
  if (atoms.empty()) throw BadValue("empty decomposition has no stopping times");
  if (k < kmin()) return atoms.front().nu;
  if (k >= kmax()) return *top;
  return atoms[k - kmin()].nu;
}

namespace {

/// Largest k with 2^{stride k} < x (x > 0).
int k_below(const Rat& x, int stride) {
  int k = static_cast<int>(std::floor(std::log2(to_double(x)) / stride));
  while (pow2(static_cast<long>(stride) * (k + 1)) < x) ++k;
  while (!(pow2(static_cast<long>(stride) * k) < x)) --k;
  return k;
}

/// Smallest k with x <= 2^{stride k}.
int k_at_or_above(const Rat& x, int stride) {
  int k = static_cast<int>(std::ceil(std::log2(to_double(x)) / stride));
  while (!(x <= pow2(static_cast<long>(stride) * k))) ++k;
  while (k > INT_MIN && x <= pow2(static_cast<long>(stride) * (k - 1))) --k;
  return k;
}

struct Range {
  int kmin = 0, kmax = 0;
  bool empty = true;
};

/// Dyadic k-range from the positive entries of a value table, levels
/// [start_level, N]: kmin keeps 2^{stride kmin} below every positive value
/// (so the bottom stopping time sees f still at zero), kmax puts
/// 2^{stride kmax} at or above the maximum (so the top one never stops).
Range k_range(const std::vector<std::vector<Rat>>& table, int start_level,
              int stride) {
  Range r;
  Rat minpos = 0, maxv = 0;
  for (std::size_t n = start_level; n < table.size(); ++n) {
    for (const Rat& v : table[n]) {
      if (v > 0 && (minpos == 0 || v < minpos)) minpos = v;
      if (v > maxv) maxv = v;
    }
  }
  if (maxv == 0) return r;
  r.empty = false;
  r.kmin = k_below(minpos, stride);
  r.kmax = k_at_or_above(maxv, stride);
  return r;
}

AtomicDecomposition build_decomposition(
    const Martingale& f, std::string source, AtomKind kind, int log2A,
    const Range& range, const std::function<StoppingTime(int)>& nu_at) {
  AtomicDecomposition d;
  d.source = std::move(source);
  d.kind = kind;
  if (range.empty) return d;

  StoppingTime prev = nu_at(range.kmin);
  Martingale stopped_prev = stop(f, prev);
  for (int k = range.kmin; k < range.kmax; ++k) {
    StoppingTime next = pointwise_max(nu_at(k + 1), prev);
    Martingale stopped_next = stop(f, next);
    WeakAtom atom{kind, k, log2A, pow2(k + log2A), stopped_next - stopped_prev,
                  prev};
    d.atoms.push_back(std::move(atom));
    prev = next;
    stopped_prev = std::move(stopped_next);
  }
  if (prev.finite_mass() != 0) {
    throw BadValue("top stopping time of a decomposition must never stop");
  }
  d.top = std::move(prev);
  return d;
}

}  // namespace

AtomicDecomposition decompose_s(const Martingale& f) {
  AdaptedTable ssq = conditional_quadratic(f).running_sq;
  Range r = k_range(ssq.values, 1, 2);
  return build_decomposition(f, "s", AtomKind::CondSquare, 1, r, [&](int k) {
    return first_passage_predictable(ssq, pow2(2L * k));
  });
}

AtomicDecomposition decompose_S(const Martingale& f) {
  AdaptedTable gsq = quadratic(f).running_sq;
  Range r = k_range(gsq.values, 1, 2);
  return build_decomposition(f, "S", AtomKind::Square, 1, r, [&](int k) {
    return regular_cover(gsq, pow2(2L * k));
  });
}

AtomicDecomposition decompose_M(const Martingale& f) {
  AdaptedTable g = maximal(f).running;
  Range r = k_range(g.values, 1, 1);
  return build_decomposition(f, "M", AtomKind::Maximal, 2, r, [&](int k) {
    return regular_cover(g, pow2(k));
  });
}

AtomicDecomposition decompose_control(const Martingale& f,
                                      const PredictableControl& control) {
  if (!f.space()->same_as(*control.space())) {
    throw FiltrationMismatch("control on a different filtration");
  }
  AdaptedTable lsq{control.space(), control.table_sq()};
  Range r = k_range(lsq.values, 0, 2);
  const bool q_target = control.target() == ControlTarget::Q;
  return build_decomposition(
      f, q_target ? "control-Q" : "control-D",
      q_target ? AtomKind::Square : AtomKind::Maximal, q_target ? 1 : 2, r,
      [&](int k) { return first_passage_adapted(lsq, pow2(2L * k)); });
}

RebuiltControl rebuild_control(const Martingale& f, const AtomicDecomposition& d) {
  const auto& F = *f.space();
  RebuiltControl out;
  out.dominates = atom_kind_name(d.kind);
  out.lambda.resize(F.depth() + 1);
  out.lambda_sq.resize(F.depth() + 1);
  for (int n = 0; n <= F.depth(); ++n) {
    out.lambda[n].assign(F.atom_count(n), Rat(0));
    for (int a = 0; a < F.atom_count(n); ++a) {
      int w = F.atom_outcomes(n, a)[0];
      for (const WeakAtom& atom : d.atoms) {
        if (atom.nu.level_at(w) <= n) out.lambda[n][a] += atom.bound;
      }
    }
    out.lambda_sq[n].resize(F.atom_count(n));
    for (int a = 0; a < F.atom_count(n); ++a) {
      out.lambda_sq[n][a] = out.lambda[n][a] * out.lambda[n][a];
    }
  }

  // Dominance of the decomposition's own operator: op_n(f) <= lambda_{n-1}.
  std::vector<std::vector<Rat>> op;
  bool squared = true;
  switch (d.kind) {
    case AtomKind::CondSquare:
      op = conditional_quadratic(f).running_sq.values;
      break;
    case AtomKind::Square:
      op = quadratic(f).running_sq.values;
      break;
    case AtomKind::Maximal:
      op.resize(F.depth() + 1);
      for (int n = 0; n <= F.depth(); ++n) {
        op[n].resize(F.atom_count(n));
        for (int a = 0; a < F.atom_count(n); ++a) {
          op[n][a] = abs(f.value(n, a));
        }
      }
      squared = false;
      break;
  }
  out.admissible = true;
  for (int n = 1; n <= F.depth() && out.admissible; ++n) {
    for (int a = 0; a < F.atom_count(n); ++a) {
      const Rat& cap = squared ? out.lambda_sq[n - 1][F.parent(n, a)]
                               : out.lambda[n - 1][F.parent(n, a)];
      if (op[n][a] > cap) {
        out.admissible = false;
        break;
      }
    }
  }

  if (d.kind == AtomKind::Square) {
    out.control = PredictableControl::from_lambda_sq(f, ControlTarget::Q,
                                                     out.lambda_sq);
  } else if (d.kind == AtomKind::Maximal) {
    out.control = PredictableControl::from_lambda_sq(f, ControlTarget::D,
                                                     out.lambda_sq);
  }
  return out;
}

EquivalenceReport equivalence_report(const Martingale& f,
                                     const OrliczFunction& phi) {
  EquivalenceReport rep;
  rep.norm_s = hardy_norms(f, phi).cond_square;
  AtomicDecomposition d = decompose_s(f);
  rep.quasinorm = d.quasinorm(phi);

  auto inv = phi.inverse_index();
  rep.p_inv = inv.lower;  // smaller p' inflates C1
  rep.q_inv = inv.upper;  // larger q' inflates C2
  const int n_a = 1;      // A = 2 for the s-decomposition
  rep.c1 = std::pow(2.0, (n_a + 1) / rep.p_inv) /
           (1.0 - std::pow(2.0, -1.0 / rep.p_inv));
  rep.c2 = 1.0 / (1.0 - std::pow(2.0, -1.0 / rep.q_inv));
  rep.c0 = rep.c1 + rep.c2;
  rep.upper = std::pow(rep.c0 * phi.c_phi(), 1.0 / phi.lower_type()) * 4.0 *
              rep.quasinorm;
  rep.lower_ok = rep.quasinorm <= rep.norm_s * (1.0 + 1e-9);
  rep.upper_ok = rep.norm_s <= rep.upper * (1.0 + 1e-9);
  return rep;
}

double tail_convergence(const Martingale& f, const OrliczFunction& phi, int m,
                        int n) {
  AtomicDecomposition d = decompose_s(f);
  Martingale g = f - d.partial_sum(f.space(), m, n);
  return hardy_norms(g, phi).cond_square;
}

}  // namespace om
