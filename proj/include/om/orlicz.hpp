#pragma once

#include <string>
#include <vector>

#include "om/errors.hpp"

namespace om {

/// A concave Orlicz function of lower type `ell`: Phi(0)=0, increasing,
/// Phi(tr) <= c_phi * max(t^ell, t) * Phi(r).
class OrliczFunction {
 public:
  enum class Kind { Power, PowerLog, PiecewiseLinearConcave };
  struct Knot {
    double t, y;
  };

  static OrliczFunction power(double p);  // ell = p, c_phi = 1
  static OrliczFunction power(double p, double ell, double c_phi);
  /// Phi(t) = t^p * log(e + t)^qlog, requires 0 < ell <= p < 1, qlog >= 0.
  static OrliczFunction power_log(double p, double qlog, double ell, double c_phi);
  /// Knots must start after 0, be strictly increasing in t and y with
  /// strictly decreasing positive slopes; extended linearly past the last
  /// knot with the last slope. Phi(0) = 0 implied.
  static OrliczFunction piecewise_linear(std::vector<Knot> knots, double ell,
                                         double c_phi);

  Kind kind() const { return kind_; }
  double lower_type() const { return ell_; }
  double c_phi() const { return c_phi_; }
  double p() const { return p_; }
  double qlog() const { return qlog_; }
  const std::vector<Knot>& knots() const { return knots_; }

  double operator()(double t) const;
  /// Monotone inverse; closed form for Power, geometric-bracket bisection
  /// (relative tolerance 1e-12) otherwise.
  double inverse(double y) const;

  OrliczFunction with_c_phi(double c) const;
  OrliczFunction with_ell(double ell) const;

  struct TypeReport {
    bool pass = false;
    double worst_ratio = 0;  // max over the grid of Phi(tr)/(max(t^ell,t)Phi(r))
    double worst_t = 0, worst_r = 0;
    int grid_points = 0;
  };
  /// Scans t, r over the log grid 2^min_exp .. 2^max_exp.
  TypeReport verify_type(int min_exp = -20, int max_exp = 20,
                         int per_octave = 1) const;

  struct IndexEstimate {
    double lower = 0, upper = 0;  // p_*, q_*
    double resolution = 0;        // grid uncertainty; 0 when exact
    bool exact = false;
  };
  /// Lower/upper index of Phi: inf/sup of t Phi'(t)/Phi(t). Exact for
  /// Power; central differences on the log grid otherwise.
  IndexEstimate index() const;
  /// Indices of the convex inverse; throws IndexUnbounded past `cap`.
  IndexEstimate inverse_index(double cap = 64.0) const;

  std::string describe() const;

 private:
  OrliczFunction() = default;

  Kind kind_ = Kind::Power;
  double p_ = 1, qlog_ = 0;
  std::vector<Knot> knots_;
  double ell_ = 1, c_phi_ = 1;
};

/// phi(r) = 1/(r * Phi^{-1}(1/r)), positive on (0, inf).
struct DualWeight {
  OrliczFunction phi_fn;
  double operator()(double r) const;
};

DualWeight dual_weight(const OrliczFunction& phi);

}  // namespace om
