#include "om/suites.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <thread>

namespace om {

int thread_count() {
  if (const char* env = std::getenv("ORLICZ_MART_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 1;
}

void parallel_for(int n, const std::function<void(int)>& fn) {
  const int workers = std::min(thread_count(), std::max(n, 1));
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (int i = w; i < n; i += workers) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

namespace {

/// Accumulates named checks; failed names land in the report.
struct Checker {
  SuiteResult& r;
  Json failed = Json::array();

  void check(bool ok, const std::string& what) {
    ++r.cases;
    if (!ok) {
      ++r.failures;
      r.pass = false;
      failed.push_back(what);
    }
  }
  void finish() { r.report["failed_checks"] = std::move(failed); }
};

bool close(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max({std::abs(a), std::abs(b), 1e-12});
}

RandomVariable random_rv(const FiltrationPtr& space, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> grid(-16, 16);
  std::vector<Rat> values(space->outcome_count());
  for (Rat& v : values) v = Rat(grid(rng), 8);
  return RandomVariable{space, std::move(values)};
}

Martingale worked_example() {
  FiltrationPtr f2 = FiniteFiltration::dyadic(2);
  return Martingale::from_terminal(
      RandomVariable{f2, {Rat(2), Rat(0), Rat(-1), Rat(-1)}});
}

/// nu = level N-1 on a prefix of level-(N-1) atoms with total mass <= budget.
StoppingTime greedy_family(const FiltrationPtr& space, const Rat& budget) {
  const auto& F = *space;
  const int n = F.depth() - 1;
  std::vector<NodeRef> nodes;
  Rat mass = 0;
  if (n >= 0) {
    for (int a = 0; a < F.atom_count(n); ++a) {
      if (mass + F.atom_probability(n, a) > budget) break;
      mass += F.atom_probability(n, a);
      nodes.push_back({n, a});
    }
  }
  return StoppingTime::from_antichain(space, std::move(nodes));
}

const std::vector<double> kLogGrid = [] {
  std::vector<double> g;
  for (int e = -20; e <= 20; ++e) g.push_back(std::pow(2.0, e));
  return g;
}();

void orlicz_checks_for(Checker& c, const OrliczFunction& phi,
                       const std::string& tag) {
  auto type = phi.verify_type();
  c.check(type.pass, tag + ": type inequality on the scan grid");

  auto idx = phi.index();
  auto inv = phi.inverse_index();
  c.check(idx.lower > 0 && idx.lower <= idx.upper && idx.upper <= 1 + 1e-9,
          tag + ": 0 < p_Phi <= q_Phi <= 1");
  c.check(inv.lower >= 1 - 1e-9 && inv.lower <= inv.upper,
          tag + ": 1 <= p_{Phi^{-1}} <= q_{Phi^{-1}}");

  // Index monotonicity with the conservative bracket ends:
  // Phi^{-1}(t)/t^{p'} nondecreasing, Phi^{-1}(t)/t^{q'} nonincreasing.
  bool inc_p = true, dec_q = true, inc_phi = true, dec_phi = true;
  for (std::size_t i = 1; i < kLogGrid.size(); ++i) {
    const double t0 = kLogGrid[i - 1], t1 = kLogGrid[i];
    const double i0 = phi.inverse(t0), i1 = phi.inverse(t1);
    if (i1 / std::pow(t1, inv.lower) <
        i0 / std::pow(t0, inv.lower) * (1 - 1e-9)) {
      inc_p = false;
    }
    if (i1 / std::pow(t1, inv.upper) >
        i0 / std::pow(t0, inv.upper) * (1 + 1e-9)) {
      dec_q = false;
    }
    if (phi(t1) / std::pow(t1, 1 / inv.upper) <
        phi(t0) / std::pow(t0, 1 / inv.upper) * (1 - 1e-9)) {
      inc_phi = false;
    }
    if (phi(t1) / std::pow(t1, 1 / inv.lower) >
        phi(t0) / std::pow(t0, 1 / inv.lower) * (1 + 1e-9)) {
      dec_phi = false;
    }
  }
  c.check(inc_p, tag + ": Phi^{-1}(t)/t^p nondecreasing");
  c.check(dec_q, tag + ": Phi^{-1}(t)/t^q nonincreasing");
  c.check(inc_phi, tag + ": Phi(t)/t^{1/q} nondecreasing");
  c.check(dec_phi, tag + ": Phi(t)/t^{1/p} nonincreasing");

  bool subadd = true, delta2 = true;
  for (double r : kLogGrid) {
    for (double s : kLogGrid) {
      if (phi(r + s) > (phi(r) + phi(s)) * (1 + 1e-12)) subadd = false;
    }
    if (phi(2 * r) > 2 * phi.c_phi() * phi(r) * (1 + 1e-12)) delta2 = false;
  }
  c.check(subadd, tag + ": subadditivity on the grid");
  c.check(delta2, tag + ": Delta_2 with constant 2 c_phi");

  bool roundtrip = true;
  for (double t : {0.1, 1.0, 10.0}) {
    if (!close(phi.inverse(phi(t)), t, 1e-9)) roundtrip = false;
  }
  c.check(roundtrip, tag + ": inverse round trip");
}

SuiteResult suite_orlicz(const SuiteConfig& cfg) {
  SuiteResult r{"orlicz"};
  Checker c{r};
  orlicz_checks_for(c, cfg.phi, "configured phi");
  orlicz_checks_for(c, OrliczFunction::power(0.5), "power(1/2)");
  orlicz_checks_for(c, OrliczFunction::power(1.0), "power(1)");
  orlicz_checks_for(c, OrliczFunction::power_log(0.5, 1.0, 0.5, 2.0),
                    "powerlog(1/2,1)");

  const OrliczFunction& phi = cfg.phi;
  FiltrationPtr space = make_filtration({cfg.seed, cfg.depth, cfg.count,
                                         cfg.filtration_kind, cfg.max_branching,
                                         cfg.skew});
  std::mt19937_64 rng(cfg.seed);
  const double quasi_c =
      std::pow(2.0 * phi.c_phi(), 1.0 / phi.lower_type()) * 2.0;
  const double c0 = std::max(phi(1.0) + phi.c_phi() * phi(1.0), 1.0);
  const double embed_c = std::pow(c0 * phi.c_phi(), 1.0 / phi.lower_type());
  double worst_quasi = 0, worst_embed = 0;
  bool quasi_ok = true, homog_ok = true, embed_ok = true, weak_le_lux = true;
  for (int i = 0; i < cfg.count; ++i) {
    RandomVariable x = random_rv(space, rng);
    RandomVariable y = random_rv(space, rng);
    RandomVariable sum{space, {}};
    sum.values.resize(x.values.size());
    for (std::size_t w = 0; w < x.values.size(); ++w) {
      sum.values[w] = x.values[w] + y.values[w];
    }
    const double nx = weak_orlicz_norm(x, phi), ny = weak_orlicz_norm(y, phi);
    const double ns = weak_orlicz_norm(sum, phi);
    if (nx + ny > 0) {
      worst_quasi = std::max(worst_quasi, ns / (nx + ny));
      if (ns > quasi_c * (nx + ny) * (1 + cfg.tol)) quasi_ok = false;
    }
    RandomVariable scaled{space, {}};
    scaled.values.reserve(x.values.size());
    for (const Rat& v : x.values) scaled.values.push_back(Rat(3) * v);
    if (!close(weak_orlicz_norm(scaled, phi), 3 * nx, 1e-12)) homog_ok = false;

    const double lux = luxemburg_norm(x, phi);
    const double l1 = lq_norm(x, 1.0);
    if (nx > lux * (1 + 1e-8)) weak_le_lux = false;
    if (l1 > 0) {
      worst_embed = std::max(worst_embed, lux / l1);
      if (lux > embed_c * l1 * (1 + cfg.tol)) embed_ok = false;
    }
  }
  c.check(quasi_ok, "quasi-triangle with (2c)^{1/l}*2");
  c.check(homog_ok, "weak-norm homogeneity");
  c.check(weak_le_lux, "wL_Phi <= L_Phi");
  c.check(embed_ok, "L_Phi <= (C0 c)^{1/l} L_1");
  r.report["quasi_triangle_constant"] = quasi_c;
  r.report["worst_quasi_ratio"] = worst_quasi;
  r.report["embedding_constant"] = embed_c;
  r.report["worst_embedding_ratio"] = worst_embed;
  c.finish();
  return r;
}

SuiteResult suite_norms(const SuiteConfig& cfg) {
  SuiteResult r{"norms"};
  Checker c{r};
  const OrliczFunction phi05 = OrliczFunction::power(0.5);

  // Worked dyadic depth-2 example.
  Martingale ex = worked_example();
  HardyNorms hn = hardy_norms(ex, phi05);
  c.check(close(hn.maximal, 1.0, 1e-12), "example: wH_Phi = 1");
  c.check(close(hn.square, 1.0, 1e-12), "example: wH_Phi^S = 1");
  c.check(close(hn.cond_square, 1.0, 1e-12), "example: wH_Phi^s = 1");
  c.check(close(control_norm(ex, phi05, ControlTarget::Q), 1.0, 1e-12),
          "example: Q-control norm = 1");
  c.check(close(atomic_quasinorm({{-1, Rat(1)}, {0, Rat(1, 2)}}, phi05), 0.5,
                1e-12),
          "example: atomic quasinorm = 1/2");
  c.check(close(lq_norm(ex.terminal(), 2.0), std::sqrt(1.5), 1e-12),
          "example: ||f_N||_2 = sqrt(1.5)");

  FiltrationPtr space = make_filtration({cfg.seed, cfg.depth, cfg.count,
                                         cfg.filtration_kind, cfg.max_branching,
                                         cfg.skew});
  std::mt19937_64 rng(cfg.seed + 1);
  bool weak_feasible = true, weak_tight = true;
  bool lux_feasible = true, lux_tight = true;
  for (int i = 0; i < cfg.count; ++i) {
    RandomVariable x = random_rv(space, rng);
    const double nw = weak_orlicz_norm(x, cfg.phi);
    if (nw > 0) {
      // Feasibility at c(1+eps), infeasibility at c(1-eps): the inf is
      // attained at the closed form.
      bool any_violation = false;
      for (int w = 0; w < space->outcome_count(); ++w) {
        Rat a = abs(x.values[w]);
        if (a == 0) continue;
        Rat mass = 0;
        for (int u = 0; u < space->outcome_count(); ++u) {
          if (abs(x.values[u]) >= a) mass += space->outcome_probability(u);
        }
        const double v = to_double(a), pm = to_double(mass);
        if (cfg.phi(v / (nw * (1 + 1e-9))) * pm > 1 + 1e-9) weak_feasible = false;
        if (cfg.phi(v / (nw * (1 - 1e-6))) * pm > 1) any_violation = true;
      }
      if (!any_violation) weak_tight = false;
    }
    const double lux = luxemburg_norm(x, cfg.phi);
    if (lux > 0) {
      auto mean_phi = [&](double cc) {
        double s = 0;
        for (int w = 0; w < space->outcome_count(); ++w) {
          double a = std::abs(to_double(x.values[w]));
          if (a > 0) s += to_double(space->outcome_probability(w)) * cfg.phi(a / cc);
        }
        return s;
      };
      if (mean_phi(lux) > 1 + 1e-8) lux_feasible = false;
      if (mean_phi(lux * (1 - 1e-6)) <= 1) lux_tight = false;
    }
  }
  c.check(weak_feasible, "weak norm is feasible at the closed form");
  c.check(weak_tight, "weak norm is infeasible just below the closed form");
  c.check(lux_feasible, "Luxemburg norm is feasible");
  c.check(lux_tight, "Luxemburg norm is infeasible just below");

  // Minimality of the constructed control against random admissible ones.
  std::vector<Martingale> corpus = make_corpus(space, std::min(cfg.count, 50),
                                               cfg.seed + 2);
  std::mt19937_64 rng2(cfg.seed + 3);
  bool minimal_ok = true, norm_le_ok = true;
  for (const Martingale& f : corpus) {
    for (ControlTarget target : {ControlTarget::Q, ControlTarget::D}) {
      PredictableControl base = minimal_control(f, target);
      const auto& F = *space;
      std::uniform_int_distribution<int> grid(0, 16);
      // Random adapted nondecreasing bump g; lambda' = lambda* + g stays
      // admissible.
      std::vector<std::vector<Rat>> bump(F.depth() + 1);
      std::vector<std::vector<Rat>> lam_sq(F.depth() + 1);
      for (int n = 0; n <= F.depth(); ++n) {
        bump[n].resize(F.atom_count(n));
        lam_sq[n].resize(F.atom_count(n));
        for (int a = 0; a < F.atom_count(n); ++a) {
          Rat prev = n > 0 ? bump[n - 1][F.parent(n, a)] : Rat(0);
          bump[n][a] = prev + Rat(grid(rng2), 8);
          Rat lam = rat_from_double(
                        std::sqrt(to_double(base.table_sq()[n][a]))) +
                    bump[n][a];
          lam_sq[n][a] = lam * lam;
        }
      }
      PredictableControl loose =
          PredictableControl::from_lambda_sq(f, target, lam_sq);
      auto min_sq = base.terminal_sq();
      auto loose_sq = loose.terminal_sq();
      for (std::size_t w = 0; w < min_sq.size(); ++w) {
        if (min_sq[w] > loose_sq[w]) minimal_ok = false;
      }
      const double nb = weak_orlicz_norm_sq_pairs(
          [&] {
            std::vector<std::pair<Rat, Rat>> p;
            for (int w = 0; w < F.outcome_count(); ++w) {
              p.emplace_back(loose_sq[w], F.outcome_probability(w));
            }
            return p;
          }(),
          cfg.phi);
      if (control_norm(f, cfg.phi, target) > nb * (1 + cfg.tol)) {
        norm_le_ok = false;
      }
    }
  }
  c.check(minimal_ok, "minimal control is pointwise below random admissible");
  c.check(norm_le_ok, "control norm is below any admissible control's norm");
  c.finish();
  return r;
}

SuiteResult suite_atomic(const SuiteConfig& cfg) {
  SuiteResult r{"atomic"};
  Checker c{r};
  FiltrationPtr space = make_filtration({cfg.seed, cfg.depth, cfg.count,
                                         cfg.filtration_kind, cfg.max_branching,
                                         cfg.skew});
  std::vector<Martingale> corpus = make_corpus(space, cfg.count, cfg.seed + 4);
  const Rat big_r = space->regularity_constant();

  struct CaseResult {
    bool recon_s = true, atoms_s = true, level_sets = true, equiv = true;
    bool tail_zero = true, recon_S = true, atoms_S = true, cover_S = true;
    bool recon_M = true, atoms_M = true, cover_M = true;
    bool recon_ctrl = true, atoms_ctrl = true, rebuild_ok = true;
  };
  std::vector<CaseResult> results(corpus.size());

  parallel_for(static_cast<int>(corpus.size()), [&](int i) {
    const Martingale& f = corpus[i];
    CaseResult& cr = results[i];
    const auto& F = *space;

    AtomicDecomposition ds = decompose_s(f);
    cr.recon_s = (f - ds.partial_sum(space, ds.empty() ? 0 : ds.kmin(),
                                     ds.empty() ? -1 : ds.kmax() - 1))
                     .is_zero();
    auto ssq = conditional_quadratic(f).terminal_sq.values;
    for (const WeakAtom& atom : ds.atoms) {
      if (!verify_atom(atom).pass()) cr.atoms_s = false;
      for (int w = 0; w < F.outcome_count(); ++w) {
        const bool finite = atom.nu.finite_at(w);
        const bool above = ssq[w] > pow2(2L * atom.k);
        if (finite != above) cr.level_sets = false;
      }
    }
    if (!equivalence_report(f, cfg.phi).pass()) cr.equiv = false;
    if (!ds.empty() &&
        tail_convergence(f, cfg.phi, ds.kmin(), ds.kmax() - 1) > 1e-12) {
      cr.tail_zero = false;
    }

    AtomicDecomposition dS = decompose_S(f);
    cr.recon_S = (f - dS.partial_sum(space, dS.empty() ? 0 : dS.kmin(),
                                     dS.empty() ? -1 : dS.kmax() - 1))
                     .is_zero();
    auto gsq = quadratic(f).terminal_sq.values;
    for (const WeakAtom& atom : dS.atoms) {
      if (!verify_atom(atom).pass()) cr.atoms_S = false;
      Rat exceed = 0;
      for (int w = 0; w < F.outcome_count(); ++w) {
        if (gsq[w] > pow2(2L * atom.k)) exceed += F.outcome_probability(w);
      }
      if (atom.nu.finite_mass() > big_r * exceed) cr.cover_S = false;
    }

    AtomicDecomposition dM = decompose_M(f);
    cr.recon_M = (f - dM.partial_sum(space, dM.empty() ? 0 : dM.kmin(),
                                     dM.empty() ? -1 : dM.kmax() - 1))
                     .is_zero();
    auto mterm = maximal(f).terminal.values;
    for (const WeakAtom& atom : dM.atoms) {
      if (!verify_atom(atom).pass()) cr.atoms_M = false;
      Rat exceed = 0;
      for (int w = 0; w < F.outcome_count(); ++w) {
        if (mterm[w] > pow2(atom.k)) exceed += F.outcome_probability(w);
      }
      if (atom.nu.finite_mass() > big_r * exceed) cr.cover_M = false;
    }

    for (ControlTarget target : {ControlTarget::Q, ControlTarget::D}) {
      AtomicDecomposition dc = decompose_control(f, minimal_control(f, target));
      if (!(f - dc.partial_sum(space, dc.empty() ? 0 : dc.kmin(),
                               dc.empty() ? -1 : dc.kmax() - 1))
               .is_zero()) {
        cr.recon_ctrl = false;
      }
      for (const WeakAtom& atom : dc.atoms) {
        if (!verify_atom(atom).pass()) cr.atoms_ctrl = false;
      }
      if (!dc.empty() && !rebuild_control(f, dc).admissible) {
        cr.rebuild_ok = false;
      }
    }
    if (!ds.empty() && !rebuild_control(f, ds).admissible) cr.rebuild_ok = false;
  });

  auto all = [&](bool CaseResult::* field) {
    for (const CaseResult& cr : results) {
      if (!(cr.*field)) return false;
    }
    return true;
  };
  c.check(all(&CaseResult::recon_s), "s-decomposition reconstructs f exactly");
  c.check(all(&CaseResult::atoms_s), "s-atoms: vanishing, bound, support");
  c.check(all(&CaseResult::level_sets), "{nu_k<inf} = {s(f)>2^k} exactly");
  c.check(all(&CaseResult::equiv), "M <= ||f|| <= (C0 c)^{1/l} 4 M");
  c.check(all(&CaseResult::tail_zero), "full-range tail norm is zero");
  c.check(all(&CaseResult::recon_S), "S-decomposition reconstructs f");
  c.check(all(&CaseResult::atoms_S), "S-atoms pass");
  c.check(all(&CaseResult::cover_S), "P(nu_k<inf) <= R P(S>2^k)");
  c.check(all(&CaseResult::recon_M), "M-decomposition reconstructs f");
  c.check(all(&CaseResult::atoms_M), "M-atoms pass");
  c.check(all(&CaseResult::cover_M), "P(nu_k<inf) <= R P(M>2^k)");
  c.check(all(&CaseResult::recon_ctrl), "control decompositions reconstruct f");
  c.check(all(&CaseResult::atoms_ctrl), "control atoms pass");
  c.check(all(&CaseResult::rebuild_ok), "rebuilt controls are admissible");
  r.report["corpus_size"] = static_cast<int>(corpus.size());
  r.report["regularity"] = to_double(big_r);
  c.finish();
  return r;
}

SuiteResult suite_boundedness(const SuiteConfig& cfg) {
  SuiteResult r{"boundedness"};
  Checker c{r};
  FiltrationPtr space = make_filtration({cfg.seed, cfg.depth, cfg.count,
                                         cfg.filtration_kind, cfg.max_branching,
                                         cfg.skew});
  std::vector<Martingale> corpus = make_corpus(space, cfg.count, cfg.seed + 5);
  std::vector<OperatorSpec> ops = {op_maximal(), op_square(), op_cond_square(),
                                   op_terminal()};

  // Sublinearity on random pairs.
  std::mt19937_64 rng(cfg.seed + 6);
  bool sublinear_ok = true, homog_ok = true;
  for (int i = 0; i + 1 < std::min<int>(corpus.size(), 40); i += 2) {
    const Martingale &f = corpus[i], &g = corpus[i + 1];
    for (const OperatorSpec& op : ops) {
      auto tf = op.apply(f).doubles();
      auto tg = op.apply(g).doubles();
      auto tsum = op.apply(f + g).doubles();
      auto tscaled = op.apply(Rat(3) * f).doubles();
      for (std::size_t w = 0; w < tf.size(); ++w) {
        if (std::abs(tsum[w]) >
            std::abs(tf[w]) + std::abs(tg[w]) + 1e-9) {
          sublinear_ok = false;
        }
        if (!close(std::abs(tscaled[w]), 3 * std::abs(tf[w]), 1e-9)) {
          homog_ok = false;
        }
      }
    }
  }
  c.check(sublinear_ok, "|T(f+g)| <= |Tf| + |Tg| pointwise");
  c.check(homog_ok, "|T(cf)| = |c||Tf| pointwise");

  bool support_ok = true;
  for (int i = 0; i < std::min<int>(corpus.size(), 20); ++i) {
    AtomicDecomposition ds = decompose_s(corpus[i]);
    for (const OperatorSpec& op : ops) {
      AtomSupportReport rep = check_atom_support(op, ds);
      if (!rep.contained || rep.worst_c > 1 + 1e-12) support_ok = false;
    }
  }
  c.check(support_ok, "{|Ta|>0} subset {nu<inf} with C = 1 for built-ins");

  Json op_reports = Json::array();
  bool proof_ok = true, scale_ok = true;
  for (const OperatorSpec& op : ops) {
    BoundednessReport rep = boundedness_suite(op, cfg.phi, corpus);
    if (rep.has_proof_c && !rep.proof_ok) proof_ok = false;
    op_reports.push_back({{"operator", rep.op_name},
                          {"empirical_c", rep.max_ratio},
                          {"proof_c", rep.proof_c},
                          {"cases", static_cast<int>(rep.ratios.size())},
                          {"skipped", rep.skipped}});
    for (int i = 0; i < std::min<int>(corpus.size(), 10); ++i) {
      const double denom = hardy_norms(corpus[i], cfg.phi).cond_square;
      if (denom <= 0) continue;
      const Martingale scaled = Rat(5) * corpus[i];
      const double r1 = weak_orlicz_norm(op.apply(corpus[i]), cfg.phi) / denom;
      const double r2 = weak_orlicz_norm(op.apply(scaled), cfg.phi) /
                        hardy_norms(scaled, cfg.phi).cond_square;
      if (!close(r1, r2, 1e-10)) scale_ok = false;
    }
  }
  c.check(proof_ok, "empirical C below the assembled proof constant");
  c.check(scale_ok, "boundedness ratios are scale-invariant");
  r.report["operators"] = std::move(op_reports);

  bool chain_ok = true;
  std::vector<ChainReport> chains(corpus.size());
  parallel_for(static_cast<int>(corpus.size()),
               [&](int i) { chains[i] = inequality_chain(corpus[i], cfg.phi); });
  double worst_factor = 0;
  for (const ChainReport& ch : chains) {
    if (!ch.q_le_ok) chain_ok = false;
    worst_factor = std::max(worst_factor, ch.s_factor);
  }
  c.check(chain_ok, "wQ_Phi <= (S-vs-s factor) * wH_Phi^s");
  r.report["worst_s_factor"] = worst_factor;
  r.report["five_norms"] = chain_corpus_report(corpus, cfg.phi);
  c.finish();
  return r;
}

SuiteResult suite_duality(const SuiteConfig& cfg) {
  SuiteResult r{"duality"};
  Checker c{r};
  const OrliczFunction phi05 = OrliczFunction::power(0.5);

  Martingale ex = worked_example();
  const double worked = duality_ratio(ex, ex, phi05, cfg.gap);
  c.check(std::abs(worked - 0.894) <= 1e-3,
          "worked example duality ratio ~ 0.894");
  r.report["worked_example_ratio"] = worked;

  FiltrationPtr space = make_filtration({cfg.seed, cfg.depth, cfg.count,
                                         cfg.filtration_kind, cfg.max_branching,
                                         cfg.skew});
  std::vector<Martingale> corpus = make_corpus(space, cfg.count, cfg.seed + 7);
  const double c_full = duality_empirical_c(corpus, cfg.phi, cfg.gap);
  std::vector<Martingale> half(corpus.begin(),
                               corpus.begin() + corpus.size() / 2);
  const double c_half =
      half.empty() ? 0 : duality_empirical_c(half, cfg.phi, cfg.gap);
  r.report["empirical_c"] = c_full;
  r.report["empirical_c_half"] = c_half;
  c.check(c_full > 0 && std::isfinite(c_full), "empirical C finite");

  // Dual test martingales per the three constructions.
  bool budgets_ok = true, norms_ok = true, pairing_ok = true;
  int tested = 0;
  for (const Martingale& g : corpus) {
    if (tested >= 8) break;
    if (g.is_zero()) continue;
    std::vector<std::pair<int, StoppingTime>> dyadic_nus, sign_nus;
    for (int k = 0; k <= 2; ++k) {
      dyadic_nus.emplace_back(k, greedy_family(space, pow2(-k)));
      const double budget = 1.0 / cfg.phi(std::pow(2.0, k));
      sign_nus.emplace_back(
          k, greedy_family(space, rat_from_double(budget)));
    }
    for (DualTestMode mode :
         {DualTestMode::SNormalized, DualTestMode::LqPower,
          DualTestMode::L1Sign}) {
      try {
        DualTestResult res = dual_test_martingale(
            g, cfg.phi, mode,
            mode == DualTestMode::L1Sign ? sign_nus : dyadic_nus, 2.0);
        if (!res.norm_ok) norms_ok = false;
        const double paired = std::abs(to_double(pairing(res.f, g)));
        if (!close(paired, res.lower_functional, 1e-6)) pairing_ok = false;
      } catch (const ZeroGap&) {
        // All supplied nu_k already capture g; nothing to test.
      } catch (const BudgetViolation&) {
        budgets_ok = false;
      }
    }
    ++tested;
  }
  c.check(budgets_ok, "constructed families respect the mass budgets");
  c.check(norms_ok, "||f^N|| below the mode's proof constant");
  c.check(pairing_ok, "pairing(f^N, g) equals the lower functional");
  r.report["dual_tests"] = tested;
  c.finish();
  return r;
}

SuiteResult suite_jn(const SuiteConfig& cfg) {
  SuiteResult r{"jn"};
  Checker c{r};
  FiltrationPtr space = make_filtration({cfg.seed, cfg.depth, cfg.count,
                                         cfg.filtration_kind, cfg.max_branching,
                                         cfg.skew});
  std::vector<Martingale> corpus = make_corpus(space, cfg.count, cfg.seed + 8);
  JohnNirenbergReport rep =
      john_nirenberg_report(corpus, cfg.phi, cfg.qs, cfg.gap);
  c.check(rep.ordering_ok, "q1 <= q2 implies norm_q1 <= norm_q2");

  Json pairs = Json::array();
  for (const auto& st : rep.pairs) {
    pairs.push_back({{"q1", st.q1},
                     {"q2", st.q2},
                     {"min_ratio", st.min_ratio},
                     {"max_ratio", st.max_ratio}});
    c.check(st.min_ratio <= st.max_ratio + 1e-12, "ratio range consistent");
  }
  r.report["pairs"] = std::move(pairs);

  bool homog_ok = true;
  for (const Martingale& f : corpus) {
    if (f.is_zero()) continue;
    const double n1 = w_campanato_norm(f, 2, cfg.phi, cfg.gap);
    const double n2 = w_campanato_norm(Rat(2) * f, 2, cfg.phi, cfg.gap);
    if (!close(n2, 2 * n1, 1e-9)) homog_ok = false;
    break;
  }
  c.check(homog_ok, "w-Campanato norm is homogeneous");
  c.finish();
  return r;
}

void flatten_csv(const Json& j, const std::string& path, std::ostringstream& out,
                 const std::string& suite) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      flatten_csv(it.value(), path.empty() ? it.key() : path + "." + it.key(),
                  out, suite);
    }
  } else if (j.is_array()) {
    int i = 0;
    for (const Json& v : j) {
      flatten_csv(v, path + "[" + std::to_string(i++) + "]", out, suite);
    }
  } else {
    out << suite << "," << path << "," << j.dump() << "\n";
  }
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "orlicz", "norms", "atomic", "boundedness", "duality", "jn"};
  return names;
}

SuiteResult run_suite(const std::string& name, const SuiteConfig& cfg) {
  SuiteResult r;
  if (name == "orlicz") {
    r = suite_orlicz(cfg);
  } else if (name == "norms") {
    r = suite_norms(cfg);
  } else if (name == "atomic") {
    r = suite_atomic(cfg);
  } else if (name == "boundedness") {
    r = suite_boundedness(cfg);
  } else if (name == "duality") {
    r = suite_duality(cfg);
  } else if (name == "jn") {
    r = suite_jn(cfg);
  } else {
    throw ConfigParse("unknown suite: " + name);
  }
  Json framed;
  framed["suite"] = r.name;
  framed["phi"] = phi_to_json(cfg.phi);
  framed["seed"] = cfg.seed;
  framed["depth"] = cfg.depth;
  framed["count"] = cfg.count;
  framed["cases"] = r.cases;
  framed["failures"] = r.failures;
  framed["pass"] = r.pass;
  framed["detail"] = std::move(r.report);
  r.report = std::move(framed);
  return r;
}

std::string report_csv(const SuiteResult& result) {
  std::ostringstream out;
  out << "suite,metric,value\n";
  flatten_csv(result.report, "", out, result.name);
  return out.str();
}

double duality_empirical_c(const std::vector<Martingale>& corpus,
                           const OrliczFunction& phi, const GapOptions& gap) {
  double best = 0;
  const int pairs = static_cast<int>(corpus.size()) / 2;
  std::vector<double> ratios(pairs, 0.0);
  parallel_for(pairs, [&](int i) {
    const Martingale& f = corpus[2 * i];
    const Martingale& g = corpus[2 * i + 1];
    try {
      ratios[i] = duality_ratio(f, g, phi, gap);
    } catch (const DegenerateDenominator&) {
      ratios[i] = 0;
    }
  });
  for (double v : ratios) best = std::max(best, v);
  return best;
}

Json chain_corpus_report(const std::vector<Martingale>& corpus,
                         const OrliczFunction& phi) {
  static const char* names[5] = {"wH_Phi", "wH_Phi^S", "wH_Phi^s", "wQ_Phi",
                                 "wD_Phi"};
  std::vector<std::array<double, 5>> rows(corpus.size());
  parallel_for(static_cast<int>(corpus.size()), [&](int i) {
    ChainReport ch = inequality_chain(corpus[i], phi);
    rows[i] = {ch.norm_m, ch.norm_S, ch.norm_s, ch.norm_q, ch.norm_d};
  });
  double worst = 0;
  Json pairwise = Json::array();
  for (int a = 0; a < 5; ++a) {
    for (int b = 0; b < 5; ++b) {
      if (a == b) continue;
      double c_ab = 0;
      for (const auto& row : rows) {
        if (row[a] > 0 && row[b] > 0) {
          c_ab = std::max(c_ab, row[a] / row[b]);
        }
      }
      pairwise.push_back(
          {{"num", names[a]}, {"den", names[b]}, {"max_ratio", c_ab}});
      worst = std::max(worst, c_ab);
    }
  }
  Json j;
  j["pairwise"] = std::move(pairwise);
  j["max_pairwise_ratio"] = worst;
  return j;
}

}  // namespace om
