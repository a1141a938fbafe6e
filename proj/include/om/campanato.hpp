#pragma once

#include <functional>
#include <string>
#include <vector>

#include "om/norms.hpp"
#include "om/stopping.hpp"

namespace om {

/// Step data for t_phi^q(x) = phi(x)^{-1} x^{-1/q} S(x), where S is the
/// budgeted gap supremum (stopping times) or the single-atom analogue.
struct CampanatoProfile {
  double q = 2;
  GapProfile gaps;

  /// S(x) at budget x; 0 below the first breakpoint.
  double gap_value(const Rat& x) const;
};

CampanatoProfile campanato_profile(const Martingale& f, double q,
                                   const GapOptions& opt = {});
CampanatoProfile atom_campanato_profile(const Martingale& f, double q);

/// int_0^infty Phi^{-1}(1/x) x^{-1/q} S(x) dx over the step profile:
/// closed form per segment for Power Phi, adaptive Simpson (rel 1e-9)
/// otherwise; the tail integrates in u = 1/x with an analytic remainder
/// bound below 1e-12 of the total.
double profile_weighted_integral(const GapProfile& prof, double q,
                                 const OrliczFunction& phi);

/// ||f||_{wL_{q,phi}} = int_0^infty t_phi^q(x)/x dx.
double w_campanato_norm(const Martingale& f, double q, const OrliczFunction& phi,
                        const GapOptions& opt = {});

/// Same integral over single-atom oscillations (the u_phi^q variant;
/// exploratory, nothing asserted against it).
double w_atom_campanato(const Martingale& f, double q, const OrliczFunction& phi);

/// sup over levels n >= 1 and level-n atoms A of
/// (1/phi_w(P(A))) (1/P(A) int_A |f_N - E_n f_N|^q dP)^{1/q}.
double classic_campanato(const Martingale& f, double q,
                         const std::function<double(double)>& phi_w);

struct StoppedCampanato {
  double value = 0;
  bool exact = true;  // false when built on the float-grid lower bound
  std::vector<NodeRef> witness;
};

/// sup over stopping times of (1/phi_w(P(nu<inf))) (1/P ||f-f^nu||_q^q)^{1/q};
/// evaluated at the gap-profile breakpoints, which attains the sup when
/// phi_w is nondecreasing (smaller mass never hurts either factor).
StoppedCampanato stopped_campanato(const Martingale& f, double q,
                                   const std::function<double(double)>& phi_w,
                                   const GapOptions& opt = {});

/// E(sum df_n dg_n) = E(f_N g_N), exact.
Rat pairing(const Martingale& f, const Martingale& g);

/// |pairing| / (||f||_{wH_Phi^s} ||g||_{wL_{2,phi}}).
double duality_ratio(const Martingale& f, const Martingale& g,
                     const OrliczFunction& phi, const GapOptions& opt = {});

enum class DualTestMode { L1Sign, LqPower, SNormalized };

struct DualTestResult {
  Martingale f;  // sum of the constructed a^k
  std::vector<int> used_k;
  double lower_functional = 0;  // the proof's final-display sum
  double hardy_norm = 0;        // wH_Phi^s (SNormalized) or wH_Phi (others)
  double proof_c = 0;
  bool norm_ok = false;         // hardy_norm <= proof_c
};

/// Builds the dual test martingale f^N = sum_k a^k from supplied (k, nu_k)
/// with P(nu_k < inf) <= 2^{-k} (<= 1/Phi(2^k) for L1Sign). Skips k with
/// g = g^{nu_k}; throws ZeroGap when all are skipped and BudgetViolation on
/// an oversized nu_k. `q` applies to LqPower only and must exceed 1.
DualTestResult dual_test_martingale(
    const Martingale& g, const OrliczFunction& phi, DualTestMode mode,
    const std::vector<std::pair<int, StoppingTime>>& nus, double q = 2);

struct JohnNirenbergReport {
  std::vector<double> qs;
  std::vector<std::vector<double>> norms;  // [martingale][q]
  struct PairStat {
    double q1 = 0, q2 = 0;
    double min_ratio = 0, max_ratio = 0;  // norm_q2 / norm_q1 over the corpus
    bool ordering_ok = true;              // q1 <= q2 implies norm_q1 <= norm_q2
  };
  std::vector<PairStat> pairs;
  bool ordering_ok = true;
};

JohnNirenbergReport john_nirenberg_report(const std::vector<Martingale>& corpus,
                                          const OrliczFunction& phi,
                                          const std::vector<double>& qs,
                                          const GapOptions& opt = {});

}  // namespace om
