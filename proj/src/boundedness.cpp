#include "om/boundedness.hpp"

#include <algorithm>
#include <cmath>

namespace om {

namespace {

RandomVariable sqrt_variable(const RandomVariable& sq) {
  std::vector<Rat> out(sq.values.size());
  for (std::size_t w = 0; w < sq.values.size(); ++w) {
    out[w] = sq.values[w] > 0 ? rat_from_double(std::sqrt(to_double(sq.values[w])))
                              : Rat(0);
  }
  return RandomVariable{sq.space, std::move(out)};
}

}  // namespace

OperatorSpec op_maximal() {
  // Doob: ||Mf||_2 <= 2 ||f_N||_2.
  return {"M", [](const Martingale& f) { return maximal(f).terminal; }, 2, 2,
          true};
}

OperatorSpec op_square() {
  // E S(f)^2 = E f_N^2.
  return {"S",
          [](const Martingale& f) { return sqrt_variable(quadratic(f).terminal_sq); },
          2, 1, true};
}

OperatorSpec op_cond_square() {
  // E s(f)^2 = E f_N^2.
  return {"s",
          [](const Martingale& f) {
            return sqrt_variable(conditional_quadratic(f).terminal_sq);
          },
          2, 1, true};
}

OperatorSpec op_terminal() {
  return {"id", [](const Martingale& f) { return f.terminal(); }, 2, 1, true};
}

AtomSupportReport check_atom_support(const OperatorSpec& t,
                                     const AtomicDecomposition& d) {
  AtomSupportReport rep;
  rep.op_name = t.name;
  for (const WeakAtom& atom : d.atoms) {
    ++rep.atoms_checked;
    const auto& F = *atom.a.space();
    RandomVariable ta = t.apply(atom.a);
    Rat support = 0;
    for (int w = 0; w < F.outcome_count(); ++w) {
      if (ta.values[w] != 0) {
        support += F.outcome_probability(w);
        if (!atom.nu.finite_at(w)) rep.contained = false;
      }
    }
    Rat finite = atom.nu.finite_mass();
    if (support > 0 && finite == 0) {
      rep.worst_c = std::numeric_limits<double>::infinity();
    } else if (finite > 0) {
      rep.worst_c = std::max(rep.worst_c, to_double(support / finite));
    }
  }
  return rep;
}

BoundednessReport boundedness_suite(const OperatorSpec& t,
                                    const OrliczFunction& phi,
                                    const std::vector<Martingale>& corpus) {
  if (t.r < 1 || t.r > 2) {
    throw HypothesisViolated("the s-version requires 1 <= r <= 2");
  }
  auto inv = phi.inverse_index();
  BoundednessReport rep;
  rep.op_name = t.name;
  rep.r = t.r;
  rep.p_inv = inv.lower;
  rep.q_inv = inv.upper;
  if (!(1.0 / rep.p_inv < t.r)) {
    throw HypothesisViolated("requires 1/p_{Phi^{-1}} < r");
  }

  for (const Martingale& f : corpus) {
    const double denom = hardy_norms(f, phi).cond_square;
    if (denom <= 0) {
      ++rep.skipped;
      continue;
    }
    rep.ratios.push_back(weak_orlicz_norm(t.apply(f), phi) / denom);
    rep.max_ratio = std::max(rep.max_ratio, rep.ratios.back());
  }

  if (t.l_r_bound > 0 && t.r == 2) {
    const double geo = 1.0 - std::pow(2.0, 1.0 / (rep.p_inv * t.r) - 1.0);
    rep.c1 = std::pow(t.l_r_bound * 2.0 / geo, t.r);
    rep.c2 = 1.0 / (1.0 - std::pow(2.0, -1.0 / rep.q_inv));
    const double ell = phi.lower_type(), c = phi.c_phi();
    rep.proof_c =
        2.0 * (std::pow(2.0 * c * std::max(rep.c1, 1.0), 1.0 / ell) +
               std::pow(2.0 * c * std::max(rep.c2, 1.0), 1.0 / ell));
    rep.has_proof_c = true;
    for (double ratio : rep.ratios) {
      if (ratio > rep.proof_c * (1 + 1e-9)) rep.proof_ok = false;
    }
  }
  return rep;
}

ChainReport inequality_chain(const Martingale& f, const OrliczFunction& phi) {
  const auto& F = *f.space();
  ChainReport rep;
  HardyNorms h = hardy_norms(f, phi);
  rep.norm_m = h.maximal;
  rep.norm_S = h.square;
  rep.norm_s = h.cond_square;
  rep.norm_q = control_norm(f, phi, ControlTarget::Q);
  rep.norm_d = control_norm(f, phi, ControlTarget::D);
  rep.regularity = to_double(F.regularity_constant());

  AdaptedTable ssq = conditional_quadratic(f).running_sq;
  AdaptedTable gsq = quadratic(f).running_sq;
  Rat worst_sq = 0;
  for (int n = 1; n <= F.depth(); ++n) {
    for (int a = 0; a < F.atom_count(n); ++a) {
      if (ssq.values[n][a] == 0) continue;  // forces S_n = 0 on the atom
      Rat ratio = gsq.values[n][a] / ssq.values[n][a];
      if (ratio > worst_sq) worst_sq = ratio;
    }
  }
  rep.s_factor = std::sqrt(to_double(worst_sq));
  rep.q_via_s = rep.s_factor * rep.norm_s;
  rep.q_le_ok = rep.norm_q <= rep.q_via_s * (1 + 1e-9);
  return rep;
}

}  // namespace om
