#pragma once

#include <optional>
#include <string>
#include <vector>

#include "om/norms.hpp"
#include "om/stopping.hpp"

namespace om {

enum class AtomKind { CondSquare, Square, Maximal };

std::string atom_kind_name(AtomKind k);

/// A weak atom a with stopping time nu: a_n = 0 on {nu >= n} and the kind's
/// operator is bounded by A*2^k everywhere, zero on {nu = never}.
struct WeakAtom {
  AtomKind kind = AtomKind::CondSquare;
  int k = 0;
  int log2_A = 1;  // N_A, bound = 2^{N_A + k}
  Rat bound = 0;
  Martingale a;
  StoppingTime nu;
};

struct AtomReport {
  bool vanish_ok = false;   // a_n = 0 on {nu >= n}
  bool bound_ok = false;    // operator(a) <= bound everywhere
  bool support_ok = false;  // operator(a) = 0 on {nu = never}
  bool pass() const { return vanish_ok && bound_ok && support_ok; }
};

AtomReport verify_atom(const WeakAtom& atom);

class AtomicDecomposition {
 public:
  std::string source;           // "s", "S", "M", "control-Q", "control-D"
  AtomKind kind = AtomKind::CondSquare;
  std::vector<WeakAtom> atoms;  // consecutive k in [kmin, kmax)
  std::optional<StoppingTime> top;  // nu_{kmax}, identically never

  bool empty() const { return atoms.empty(); }
  int kmin() const { return atoms.front().k; }
  int kmax() const { return atoms.back().k + 1; }

  /// (k, P(nu_k < inf)) per stored k; the quasi-norm sup over all integer k
  /// reduces to these because the masses stabilize below kmin and vanish at
  /// kmax.
  std::vector<std::pair<int, Rat>> level_masses() const;

  double quasinorm(const OrliczFunction& phi) const {
    return atomic_quasinorm(level_masses(), phi);
  }

  /// Sum of a^k over stored k in [m, n]; zero martingale for empty ranges.
  Martingale partial_sum(const FiltrationPtr& space, int m, int n) const;

  /// nu_k with clamping: below kmin the first stopping time, at or above
  /// kmax the never time.
  const StoppingTime& nu_for(int k) const;
};

AtomicDecomposition decompose_s(const Martingale& f);
AtomicDecomposition decompose_S(const Martingale& f);
AtomicDecomposition decompose_M(const Martingale& f);
AtomicDecomposition decompose_control(const Martingale& f,
                                      const PredictableControl& control);

/// The proof's converse map: lambda_n = sum_k chi(nu_k <= n) * bound_k,
/// exact in rationals. Admissible for the decomposition's own operator
/// (s, S, or M by kind); the check is performed and reported.
struct RebuiltControl {
  std::vector<std::vector<Rat>> lambda;     // [level][atom]
  std::vector<std::vector<Rat>> lambda_sq;
  std::string dominates;  // "s", "S", "M"
  bool admissible = false;

  /// Available for Square (target Q) and Maximal (target D) kinds.
  std::optional<PredictableControl> control;
};

RebuiltControl rebuild_control(const Martingale& f, const AtomicDecomposition& d);

struct EquivalenceReport {
  double norm_s = 0;       // ||f||_{wH_Phi^s}
  double quasinorm = 0;    // M of decompose_s
  double c1 = 0, c2 = 0, c0 = 0;
  double upper = 0;        // (C0 c_Phi)^{1/ell} * 4 * M
  double p_inv = 0, q_inv = 0;  // conservative inverse-index bracket ends
  bool lower_ok = false;   // M <= ||f||
  bool upper_ok = false;   // ||f|| <= upper
  bool pass() const { return lower_ok && upper_ok; }
};

EquivalenceReport equivalence_report(const Martingale& f, const OrliczFunction& phi);

/// ||f - sum_{k=m}^n a^k||_{wH_Phi^s} for the s-decomposition.
double tail_convergence(const Martingale& f, const OrliczFunction& phi, int m, int n);

}  // namespace om
