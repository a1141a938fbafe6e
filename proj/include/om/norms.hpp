#pragma once

#include <utility>
#include <vector>

#include "om/martingale.hpp"
#include "om/orlicz.hpp"

namespace om {

/// (sum p|X|^q)^{1/q}; ess-sup for q = infinity.
double lq_norm(const RandomVariable& x, double q);

/// inf{c > 0 : E Phi(|X|/c) <= 1}, bisection at relative tolerance 1e-10.
double luxemburg_norm(const RandomVariable& x, const OrliczFunction& phi);

/// Exact closed form: with distinct positive values v_1 < ... < v_m of |X|
/// and P_i = P(|X| >= v_i), the norm is max_i v_i / Phi^{-1}(1/P_i).
double weak_orlicz_norm(const RandomVariable& x, const OrliczFunction& phi);

/// Same closed form on (value, mass) pairs; masses of equal values are
/// merged, nonpositive-mass or zero-value entries ignored.
double weak_orlicz_norm_pairs(std::vector<std::pair<double, Rat>> pairs,
                              const OrliczFunction& phi);

/// Pairs carrying exact squared values; grouping is exact, the square root
/// is taken only for the final ratio.
double weak_orlicz_norm_sq_pairs(const std::vector<std::pair<Rat, Rat>>& sq_pairs,
                                 const OrliczFunction& phi);

struct HardyNorms {
  double maximal = 0;     // wH_Phi   = ||M(f)||
  double square = 0;      // wH_Phi^S = ||S(f)||
  double cond_square = 0; // wH_Phi^s = ||s(f)||
};

HardyNorms hardy_norms(const Martingale& f, const OrliczFunction& phi);

enum class ControlTarget { Q, D };  // S_n <= lambda_{n-1} / |f_n| <= lambda_{n-1}

/// A nondecreasing adapted sequence dominating the target one step ahead;
/// squared values stored exactly, lambda_inf = lambda_N.
class PredictableControl {
 public:
  /// Validates shape, monotonicity along paths, and dominance for `f`;
  /// throws InadmissibleControl.
  static PredictableControl from_lambda_sq(const Martingale& f,
                                           ControlTarget target,
                                           std::vector<std::vector<Rat>> lambda_sq);

  const FiltrationPtr& space() const { return space_; }
  ControlTarget target() const { return target_; }
  const Rat& value_sq(int level, int atom) const { return lambda_sq_[level][atom]; }
  const std::vector<std::vector<Rat>>& table_sq() const { return lambda_sq_; }
  /// lambda_inf^2 per outcome.
  std::vector<Rat> terminal_sq() const;

 private:
  PredictableControl(FiltrationPtr f, ControlTarget t,
                     std::vector<std::vector<Rat>> sq)
      : space_(std::move(f)), target_(t), lambda_sq_(std::move(sq)) {}

  FiltrationPtr space_;
  ControlTarget target_;
  std::vector<std::vector<Rat>> lambda_sq_;  // [level][atom]
};

/// lambda*_n = max(lambda*_{n-1}, per-atom sup of the level-(n+1) target);
/// pointwise minimal among admissible controls.
PredictableControl minimal_control(const Martingale& f, ControlTarget target);

/// ||f||_{wQ_Phi} or ||f||_{wD_Phi}: weak norm of the minimal control's
/// terminal value.
double control_norm(const Martingale& f, const OrliczFunction& phi,
                    ControlTarget target);

/// M = max_k 2^k / Phi^{-1}(1/P_k) over entries (k, P_k) with P_k > 0.
double atomic_quasinorm(const std::vector<std::pair<int, Rat>>& levels,
                        const OrliczFunction& phi);

}  // namespace om
