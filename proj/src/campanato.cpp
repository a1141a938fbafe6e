#include "om/campanato.hpp"

#include <algorithm>
#include <cmath>

namespace om {

double CampanatoProfile::gap_value(const Rat& x) const {
  const GapResult* step = gaps.at(x);
  return step ? step->value : 0.0;
}

CampanatoProfile campanato_profile(const Martingale& f, double q,
                                   const GapOptions& opt) {
  return CampanatoProfile{q, gap_profile(f, q, opt)};
}

CampanatoProfile atom_campanato_profile(const Martingale& f, double q) {
  return CampanatoProfile{q, atom_gap_profile(f, q)};
}

namespace {

double simpson(const std::function<double(double)>& f, double a, double fa,
               double m, double fm, double b, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(const std::function<double(double)>& f, double a, double fa,
             double b, double fb, double m, double fm, double whole, double tol,
             int depth) {
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = simpson(f, a, fa, lm, flm, m, fm);
  double right = simpson(f, m, fm, rm, frm, b, fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return adapt(f, a, fa, m, fm, lm, flm, left, tol / 2, depth - 1) +
         adapt(f, m, fm, b, fb, rm, frm, right, tol / 2, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double rel) {
  if (!(b > a)) return 0;
  double fa = f(a), fb = f(b), m = 0.5 * (a + b), fm = f(m);
  double whole = simpson(f, a, fa, m, fm, b, fb);
  // Tolerance relative to the segment's own magnitude; an absolute target
  // near zero would force the full 2^depth recursion.
  double tol = rel * (std::abs(whole) + 1e-300);
  return adapt(f, a, fa, b, fb, m, fm, whole, tol, 48);
}

/// int_b^inf Phi^{-1}(1/x) x^{-1/q} dx for non-power Phi, via u = 1/x with
/// the index remainder bound Phi^{-1}(u) <= Phi^{-1}(eps)(u/eps)^{p'}.
double tail_integral(const OrliczFunction& phi, double q, double b) {
  const double upper = 1.0 / b;
  const double p = phi.inverse_index().lower;
  const double expn = p + 1.0 / q - 1.0;
  if (!(expn > 0)) throw NonconvergentTail("tail exponent not positive");
  auto h = [&](double u) { return phi.inverse(u) * std::pow(u, 1.0 / q - 2.0); };
  double main = 0, lo = upper;
  for (int it = 0; it < 600; ++it) {
    double rem = phi.inverse(lo) * std::pow(lo, 1.0 / q - 1.0) / expn;
    if (rem <= 1e-12 * (main + rem) + 1e-300) return main + rem;
    double next = lo / 2;
    main += adaptive_simpson(h, next, lo, 1e-11);
    lo = next;
  }
  throw NonconvergentTail("remainder bound did not reach tolerance");
}

}  // namespace

double profile_weighted_integral(const GapProfile& prof, double q,
                                 const OrliczFunction& phi) {
  if (q < 1) throw BadValue("q must be >= 1");
  const std::size_t r = prof.breakpoints.size();
  if (r == 0) return 0;

  const bool power = phi.kind() == OrliczFunction::Kind::Power;
  const double alpha = power ? 1.0 / phi.p() + 1.0 / q : 0;
  auto seg_power = [&](double a, double b) {
    // int_a^b x^{-alpha} dx, b may be infinite; alpha > 1 here.
    double fa = std::pow(a, 1.0 - alpha);
    double fb = std::isinf(b) ? 0.0 : std::pow(b, 1.0 - alpha);
    return (fa - fb) / (alpha - 1.0);
  };
  auto g = [&](double x) { return phi.inverse(1.0 / x) * std::pow(x, -1.0 / q); };

  double total = 0;
  for (std::size_t i = 0; i < r; ++i) {
    const double v = prof.steps[i].value;
    if (v <= 0) continue;
    const double a = to_double(prof.breakpoints[i]);
    const bool last = i + 1 == r;
    const double b =
        last ? std::numeric_limits<double>::infinity()
             : to_double(prof.breakpoints[i + 1]);
    if (a <= 0) throw BadValue("zero-mass profile step with positive gap");
    if (power) {
      total += v * seg_power(a, b);
    } else if (last) {
      total += v * tail_integral(phi, q, a);
    } else {
      total += v * adaptive_simpson(g, a, b, 1e-10);
    }
  }
  return total;
}

double w_campanato_norm(const Martingale& f, double q, const OrliczFunction& phi,
                        const GapOptions& opt) {
  return profile_weighted_integral(gap_profile(f, q, opt), q, phi);
}

double w_atom_campanato(const Martingale& f, double q, const OrliczFunction& phi) {
  return profile_weighted_integral(atom_gap_profile(f, q), q, phi);
}

double classic_campanato(const Martingale& f, double q,
                         const std::function<double(double)>& phi_w) {
  if (q < 1) throw BadValue("q must be >= 1");
  const auto& F = *f.space();
  auto fN = f.terminal().doubles();
  double best = 0;
  for (int n = 1; n <= F.depth(); ++n) {
    for (int a = 0; a < F.atom_count(n); ++a) {
      const double mass = to_double(F.atom_probability(n, a));
      const double mean = to_double(f.value(n, a));
      double gain = 0;
      for (int w : F.atom_outcomes(n, a)) {
        gain += to_double(F.outcome_probability(w)) *
                std::pow(std::abs(fN[w] - mean), q);
      }
      if (gain <= 0) continue;
      best = std::max(best, std::pow(gain / mass, 1.0 / q) / phi_w(mass));
    }
  }
  return best;
}

StoppedCampanato stopped_campanato(const Martingale& f, double q,
                                   const std::function<double(double)>& phi_w,
                                   const GapOptions& opt) {
  GapProfile prof = gap_profile(f, q, opt);
  StoppedCampanato out;
  out.exact = prof.exact;
  // For nondecreasing phi_w the sup over all stopping times is attained at
  // a profile breakpoint: shrinking the mass at equal gap helps both factors.
  for (std::size_t i = 0; i < prof.breakpoints.size(); ++i) {
    if (prof.steps[i].gain == 0) continue;
    const double mass = to_double(prof.breakpoints[i]);
    const double val =
        std::pow(to_double(prof.steps[i].gain) / mass, 1.0 / q) / phi_w(mass);
    if (val > out.value) {
      out.value = val;
      out.witness = prof.steps[i].witness;
    }
  }
  return out;
}

Rat pairing(const Martingale& f, const Martingale& g) {
  if (!f.space()->same_as(*g.space())) {
    throw FiltrationMismatch("pairing across filtrations");
  }
  const auto& F = *f.space();
  auto fN = f.terminal().values;
  auto gN = g.terminal().values;
  Rat sum = 0;
  for (int w = 0; w < F.outcome_count(); ++w) {
    sum += F.outcome_probability(w) * fN[w] * gN[w];
  }
  return sum;
}

double duality_ratio(const Martingale& f, const Martingale& g,
                     const OrliczFunction& phi, const GapOptions& opt) {
  const double nf = hardy_norms(f, phi).cond_square;
  const double ng = w_campanato_norm(g, 2, phi, opt);
  if (nf <= 0 || ng <= 0) {
    throw DegenerateDenominator("duality ratio needs both norms positive");
  }
  return std::abs(to_double(pairing(f, g))) / (nf * ng);
}

namespace {

/// Martingale with terminal h - h_{nu and N}; centered by optional stopping.
Martingale stopped_diff_martingale(const FiltrationPtr& space,
                                   const std::vector<Rat>& h,
                                   const StoppingTime& nu) {
  const auto& F = *space;
  RandomVariable hv{space, h};
  std::vector<RandomVariable> cond(F.depth() + 1);
  for (int n = 0; n <= F.depth(); ++n) cond[n] = conditional_expectation(hv, n);
  std::vector<Rat> t(F.outcome_count());
  for (int w = 0; w < F.outcome_count(); ++w) {
    int m = std::min(nu.level_at(w), F.depth());
    t[w] = h[w] - cond[m].values[w];
  }
  return Martingale::from_terminal(RandomVariable{space, std::move(t)});
}

int sign_of(const Rat& v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

}  // namespace

DualTestResult dual_test_martingale(
    const Martingale& g, const OrliczFunction& phi, DualTestMode mode,
    const std::vector<std::pair<int, StoppingTime>>& nus, double q) {
  const auto& F = *g.space();
  if (mode == DualTestMode::LqPower && !(q > 1)) {
    throw BadValue("LqPower mode requires q > 1");
  }
  auto inv = phi.inverse_index();
  const double p = inv.lower, qq = inv.upper;
  const double cphi = phi.c_phi(), ell = phi.lower_type();

  DualTestResult out{Martingale::zero(g.space()), {}, 0, 0, 0, false};
  for (const auto& [k, nu] : nus) {
    if (!g.space()->same_as(*nu.space())) {
      throw FiltrationMismatch("stopping time on a different filtration");
    }
    const Rat mass = nu.finite_mass();
    if (mode == DualTestMode::L1Sign) {
      const double budget = 1.0 / phi(std::pow(2.0, k));
      if (to_double(mass) > budget * (1 + 1e-12)) {
        throw BudgetViolation("P(nu_k < inf) exceeds 1/Phi(2^k) at k = " +
                              std::to_string(k));
      }
    } else if (mass > pow2(-k)) {
      throw BudgetViolation("P(nu_k < inf) exceeds 2^{-k} at k = " +
                            std::to_string(k));
    }

    Martingale gk = stop(g, nu);
    auto d = (g - gk).terminal().values;
    bool zero = true;
    for (const Rat& v : d) {
      if (v != 0) {
        zero = false;
        break;
      }
    }
    if (zero) continue;

    const double two_k = std::pow(2.0, k);
    Martingale atom = Martingale::zero(g.space());
    switch (mode) {
      case DualTestMode::SNormalized: {
        Martingale dm = g - gk;
        double l2 = lq_norm(RandomVariable{g.space(), d}, 2.0);
        double coef = phi.inverse(two_k) / (std::pow(2.0, 0.5 * k) * l2);
        atom = rat_from_double(coef) * dm;
        // coef * ||d||_2^2: the stopped difference is orthogonal to g^nu.
        out.lower_functional += std::pow(2.0, -0.5 * k) * phi.inverse(two_k) * l2;
        break;
      }
      case DualTestMode::L1Sign: {
        std::vector<Rat> h(F.outcome_count());
        for (int w = 0; w < F.outcome_count(); ++w) h[w] = sign_of(d[w]);
        atom = rat_from_double(two_k) * stopped_diff_martingale(g.space(), h, nu);
        out.lower_functional +=
            two_k * lq_norm(RandomVariable{g.space(), d}, 1.0);
        break;
      }
      case DualTestMode::LqPower: {
        const double qp = q / (q - 1.0);
        double dq = lq_norm(RandomVariable{g.space(), d}, q);
        std::vector<Rat> h(F.outcome_count());
        for (int w = 0; w < F.outcome_count(); ++w) {
          double a = std::abs(to_double(d[w]));
          h[w] = rat_from_double(sign_of(d[w]) *
                                 std::pow(a, q - 1.0) /
                                 std::pow(dq, q - 1.0));
        }
        double coef = phi.inverse(two_k) * std::pow(two_k, -1.0 / qp);
        atom = rat_from_double(coef) * stopped_diff_martingale(g.space(), h, nu);
        out.lower_functional += coef * dq;
        break;
      }
    }
    out.f = out.f + atom;
    out.used_k.push_back(k);
  }
  if (out.used_k.empty()) {
    throw ZeroGap("g equals g^{nu_k} for every supplied k");
  }

  const double c_ii = std::pow(8.0 * cphi, 1.0 / ell);
  switch (mode) {
    case DualTestMode::SNormalized: {
      const double c1 = 1.0 / std::pow(std::pow(2.0, p - 0.5) - 1.0, 2.0);
      const double c_i = std::pow(2.0 * cphi * std::max(c1, 1.0), 1.0 / ell);
      out.proof_c = std::pow(2.0, qq) * std::max(c_i, c_ii);
      out.hardy_norm = hardy_norms(out.f, phi).cond_square;
      break;
    }
    case DualTestMode::LqPower: {
      const double qp = q / (q - 1.0);
      const double c1 = std::pow(2.0, qp) /
                        std::pow(std::pow(2.0, p - 1.0 / qp) - 1.0, qp);
      const double c_i = std::pow(2.0 * cphi * std::max(c1, 1.0), 1.0 / ell);
      out.proof_c = std::pow(2.0, qq) * std::max(c_i, c_ii);
      out.hardy_norm = hardy_norms(out.f, phi).maximal;
      break;
    }
    case DualTestMode::L1Sign: {
      const double c2 = 1.0 / (1.0 - std::pow(2.0, -1.0 / qq));
      out.proof_c = 8.0 * std::pow(2.0 * cphi * cphi * c2, 1.0 / ell);
      out.hardy_norm = hardy_norms(out.f, phi).maximal;
      break;
    }
  }
  out.norm_ok = out.hardy_norm <= out.proof_c * (1 + 1e-9);
  return out;
}

JohnNirenbergReport john_nirenberg_report(const std::vector<Martingale>& corpus,
                                          const OrliczFunction& phi,
                                          const std::vector<double>& qs_in,
                                          const GapOptions& opt) {
  JohnNirenbergReport rep;
  rep.qs = qs_in;
  std::sort(rep.qs.begin(), rep.qs.end());
  for (const Martingale& f : corpus) {
    std::vector<double> row;
    for (double q : rep.qs) row.push_back(w_campanato_norm(f, q, phi, opt));
    rep.norms.push_back(std::move(row));
  }
  for (std::size_t i = 0; i < rep.qs.size(); ++i) {
    for (std::size_t j = i + 1; j < rep.qs.size(); ++j) {
      JohnNirenbergReport::PairStat st;
      st.q1 = rep.qs[i];
      st.q2 = rep.qs[j];
      bool any = false;
      for (const auto& row : rep.norms) {
        if (row[i] <= 0 || row[j] <= 0) continue;
        const double ratio = row[j] / row[i];
        if (!any) {
          st.min_ratio = st.max_ratio = ratio;
          any = true;
        } else {
          st.min_ratio = std::min(st.min_ratio, ratio);
          st.max_ratio = std::max(st.max_ratio, ratio);
        }
        if (row[i] > row[j] * (1 + 1e-9)) st.ordering_ok = false;
      }
      rep.ordering_ok = rep.ordering_ok && st.ordering_ok;
      rep.pairs.push_back(st);
    }
  }
  return rep;
}

}  // namespace om
