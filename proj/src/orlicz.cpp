#include "om/orlicz.hpp"

#include <algorithm>
#include <cmath>

namespace om {

namespace {

void check_type_params(double ell, double c_phi) {
  if (!(ell > 0 && ell <= 1)) throw BadValue("lower type ell must lie in (0,1]");
  if (!(c_phi >= 1)) throw BadValue("c_phi must be >= 1");
}

}  // namespace

OrliczFunction OrliczFunction::power(double p) { return power(p, p, 1.0); }

OrliczFunction OrliczFunction::power(double p, double ell, double c_phi) {
  if (!(p > 0 && p <= 1)) throw BadValue("power kind requires 0 < p <= 1");
  check_type_params(ell, c_phi);
  OrliczFunction f;
  f.kind_ = Kind::Power;
  f.p_ = p;
  f.ell_ = ell;
  f.c_phi_ = c_phi;
  return f;
}

OrliczFunction OrliczFunction::power_log(double p, double qlog, double ell,
                                         double c_phi) {
  if (!(ell <= p && p < 1)) throw BadValue("power-log kind requires ell <= p < 1");
  if (!(qlog >= 0)) throw BadValue("power-log kind requires qlog >= 0");
  check_type_params(ell, c_phi);
  OrliczFunction f;
  f.kind_ = Kind::PowerLog;
  f.p_ = p;
  f.qlog_ = qlog;
  f.ell_ = ell;
  f.c_phi_ = c_phi;
  return f;
}

OrliczFunction OrliczFunction::piecewise_linear(std::vector<Knot> knots,
                                                double ell, double c_phi) {
  check_type_params(ell, c_phi);
  if (knots.empty()) throw BadValue("piecewise kind needs at least one knot");
  double prev_t = 0, prev_y = 0, prev_slope = std::numeric_limits<double>::infinity();
  for (const auto& k : knots) {
    if (!(k.t > prev_t) || !(k.y > prev_y)) {
      throw BadValue("knots must be strictly increasing");
    }
    double slope = (k.y - prev_y) / (k.t - prev_t);
    if (!(slope > 0) || !(slope < prev_slope)) {
      throw BadValue("knot slopes must be positive and strictly decreasing");
    }
    prev_t = k.t;
    prev_y = k.y;
    prev_slope = slope;
  }
  OrliczFunction f;
  f.kind_ = Kind::PiecewiseLinearConcave;
  f.knots_ = std::move(knots);
  f.ell_ = ell;
  f.c_phi_ = c_phi;
  return f;
}

OrliczFunction OrliczFunction::with_c_phi(double c) const {
  OrliczFunction f = *this;
  if (!(c >= 1)) throw BadValue("c_phi must be >= 1");
  f.c_phi_ = c;
  return f;
}

OrliczFunction OrliczFunction::with_ell(double ell) const {
  OrliczFunction f = *this;
  if (!(ell > 0 && ell <= 1)) throw BadValue("lower type ell must lie in (0,1]");
  f.ell_ = ell;
  return f;
}

double OrliczFunction::operator()(double t) const {
  if (t < 0) throw NegativeInput("Orlicz functions take nonnegative arguments");
  if (t == 0) return 0;
  switch (kind_) {
    case Kind::Power:
      return std::pow(t, p_);
    case Kind::PowerLog:
      return std::pow(t, p_) * std::pow(std::log(std::exp(1.0) + t), qlog_);
    case Kind::PiecewiseLinearConcave: {
      double prev_t = 0, prev_y = 0;
      for (const auto& k : knots_) {
        if (t <= k.t) {
          return prev_y + (k.y - prev_y) * (t - prev_t) / (k.t - prev_t);
        }
        prev_t = k.t;
        prev_y = k.y;
      }
      const auto& a = knots_.size() > 1 ? knots_[knots_.size() - 2] : Knot{0, 0};
      const auto& b = knots_.back();
      return b.y + (b.y - a.y) / (b.t - a.t) * (t - b.t);
    }
  }
  return 0;
}

double OrliczFunction::inverse(double y) const {
  if (y < 0) throw NegativeInput("inverse takes nonnegative arguments");
  if (y == 0) return 0;
  if (kind_ == Kind::Power) return std::pow(y, 1.0 / p_);
  // Grow a bracket geometrically, then bisect.
  double hi = 1.0;
  while ((*this)(hi) < y) hi *= 2;
  double lo = 0.0;
  if (hi > 1.0) lo = hi / 2;
  for (int it = 0; it < 200 && (hi - lo) > 1e-12 * hi; ++it) {
    double mid = 0.5 * (lo + hi);
    if ((*this)(mid) < y) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

OrliczFunction::TypeReport OrliczFunction::verify_type(int min_exp, int max_exp,
                                                       int per_octave) const {
  TypeReport rep;
  std::vector<double> grid;
  for (int e = min_exp * per_octave; e <= max_exp * per_octave; ++e) {
    grid.push_back(std::pow(2.0, static_cast<double>(e) / per_octave));
  }
  rep.grid_points = static_cast<int>(grid.size());
  for (double t : grid) {
    for (double r : grid) {
      double denom = std::max(std::pow(t, ell_), t) * (*this)(r);
      if (denom <= 0) continue;
      double ratio = (*this)(t * r) / denom;
      if (ratio > rep.worst_ratio) {
        rep.worst_ratio = ratio;
        rep.worst_t = t;
        rep.worst_r = r;
      }
    }
  }
  rep.pass = rep.worst_ratio <= c_phi_ * (1 + 1e-12);
  return rep;
}

OrliczFunction::IndexEstimate OrliczFunction::index() const {
  if (kind_ == Kind::Power) {
    return {p_, p_, 0.0, true};
  }
  // d log Phi / d log t on a log grid, by central differences.
  const double h = 1e-5;
  std::vector<double> slopes;
  for (int e = -120; e <= 120; ++e) {
    double t = std::pow(2.0, static_cast<double>(e) / 4.0);
    double up = std::log((*this)(t * std::exp(h)));
    double dn = std::log((*this)(t * std::exp(-h)));
    slopes.push_back((up - dn) / (2 * h));
  }
  IndexEstimate est;
  est.lower = *std::min_element(slopes.begin(), slopes.end());
  est.upper = *std::max_element(slopes.begin(), slopes.end());
  double jump = 0;
  for (std::size_t i = 1; i < slopes.size(); ++i) {
    jump = std::max(jump, std::abs(slopes[i] - slopes[i - 1]));
  }
  est.resolution = std::max(jump, 1e-7);
  // Concave Phi has indices in (0, 1].
  est.lower = std::max(est.lower, 1e-12);
  est.upper = std::min(est.upper, 1.0);
  if (est.lower > est.upper) est.lower = est.upper;
  est.exact = false;
  return est;
}

OrliczFunction::IndexEstimate OrliczFunction::inverse_index(double cap) const {
  IndexEstimate phi = index();
  IndexEstimate inv;
  if (phi.exact) {
    inv = {1.0 / phi.upper, 1.0 / phi.lower, 0.0, true};
  } else {
    // Conservative bracket ends: smaller p', larger q'.
    double lo_den = std::min(phi.upper + phi.resolution, 1.0);
    double hi_den = std::max(phi.lower - phi.resolution, 1e-12);
    inv.lower = std::max(1.0 / lo_den, 1.0);
    inv.upper = 1.0 / hi_den;
    inv.resolution = inv.upper * phi.resolution / hi_den;
    inv.exact = false;
  }
  if (inv.upper > cap) {
    throw IndexUnbounded("upper index of the inverse exceeds cap " +
                         std::to_string(cap));
  }
  return inv;
}

std::string OrliczFunction::describe() const {
  switch (kind_) {
    case Kind::Power:
      return "power(p=" + std::to_string(p_) + ")";
    case Kind::PowerLog:
      return "powerlog(p=" + std::to_string(p_) + ",q=" + std::to_string(qlog_) + ")";
    case Kind::PiecewiseLinearConcave:
      return "piecewise(" + std::to_string(knots_.size()) + " knots)";
  }
  return "?";
}

double DualWeight::operator()(double r) const {
  if (!(r > 0)) throw BadValue("dual weight takes positive arguments");
  if (phi_fn.kind() == OrliczFunction::Kind::Power) {
    return std::pow(r, 1.0 / phi_fn.p() - 1.0);
  }
  return 1.0 / (r * phi_fn.inverse(1.0 / r));
}

DualWeight dual_weight(const OrliczFunction& phi) { return DualWeight{phi}; }

}  // namespace om
