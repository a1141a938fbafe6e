#pragma once

#include <functional>
#include <string>
#include <vector>

#include "om/atomic.hpp"

namespace om {

/// A sublinear operator T: martingale -> random variable, with its L_r
/// boundedness data for the proof-constant mode.
struct OperatorSpec {
  std::string name;
  std::function<RandomVariable(const Martingale&)> apply;
  double r = 2;          // exponent of the L_r -> L_r bound
  double l_r_bound = 0;  // ||Tf||_r <= l_r_bound ||f||_r; 0 = unknown
  bool atom_support = false;  // {|Ta|>0} subset {nu<inf} holds structurally
};

OperatorSpec op_maximal();
OperatorSpec op_square();
OperatorSpec op_cond_square();
OperatorSpec op_terminal();  // Tf = f_N

struct AtomSupportReport {
  std::string op_name;
  int atoms_checked = 0;
  bool contained = true;   // {|Ta|>0} subset {nu<inf} for every atom
  double worst_c = 0;      // max P(|Ta|>0) / P(nu<inf)
};

/// P(|Ta|>0) vs P(nu<inf) per atom; containment is exact for the built-in
/// operators (worst_c <= 1).
AtomSupportReport check_atom_support(const OperatorSpec& t,
                                     const AtomicDecomposition& d);

struct BoundednessReport {
  std::string op_name;
  double r = 0;
  double p_inv = 0, q_inv = 0;       // conservative inverse-index brackets
  std::vector<double> ratios;        // ||Tf||_{wL_Phi}/||f||_{wH_Phi^s}
  double max_ratio = 0;              // empirical C
  int skipped = 0;                   // zero-norm cases
  // Proof-constant mode (l_r_bound known): C = 2(C_I + C_II) with
  // C_I = (2 c max{C1,1})^{1/l}, C1 = (bound*2/(1-2^{1/(p r)-1}))^r via the
  // ||a^k||_r <= ||s(a^k)||_r <= 2^{k+1} P(nu_k<inf)^{1/r} chain, and
  // C_II = (2 c max{C2,1})^{1/l}, C2 = 1/(1-2^{-1/q}).
  bool has_proof_c = false;
  double c1 = 0, c2 = 0, proof_c = 0;
  bool proof_ok = true;  // every ratio <= proof_c (when tracked)
};

/// Throws HypothesisViolated unless 1 <= r <= 2 and 1/p_{Phi^{-1}} < r.
/// Proof constants are assembled only for r = 2 with a known L_2 bound
/// (the ||a||_2 = ||s(a)||_2 identity pins the atom constant at 1).
BoundednessReport boundedness_suite(const OperatorSpec& t,
                                    const OrliczFunction& phi,
                                    const std::vector<Martingale>& corpus);

struct ChainReport {
  double norm_m = 0;   // wH_Phi
  double norm_S = 0;   // wH_Phi^S
  double norm_s = 0;   // wH_Phi^s
  double norm_q = 0;   // w Q_Phi (minimal control)
  double norm_d = 0;   // w D_Phi
  double regularity = 0;
  /// Measured sup of S_n/s_n; c* s_{n+1} is then a Q-admissible control,
  /// giving norm_q <= s_factor * norm_s.
  double s_factor = 0;
  double q_via_s = 0;
  bool q_le_ok = true;
};

ChainReport inequality_chain(const Martingale& f, const OrliczFunction& phi);

}  // namespace om
