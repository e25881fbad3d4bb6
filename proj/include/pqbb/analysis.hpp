#pragma once

// Moduli of continuity, weighted errors, rate-bound ingredients and
// convergence runs along parameter schedules.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pqbb/baskakov_beta.hpp"
#include "pqbb/core.hpp"
#include "pqbb/function_spec.hpp"

namespace pqbb {

struct EvalGrid {
  double start = 0.0;
  double stop = 1.0;
  std::int64_t points = 2;

  void validate() const {
    if (!(start >= 0.0)) throw std::invalid_argument("EvalGrid: start must be >= 0");
    if (!(stop > start)) throw std::invalid_argument("EvalGrid: stop must exceed start");
    if (points < 2) throw std::invalid_argument("EvalGrid: points must be >= 2");
  }
  double spacing() const noexcept { return (stop - start) / static_cast<double>(points - 1); }
  double at(std::int64_t i) const noexcept {
    return i == points - 1 ? stop : start + static_cast<double>(i) * spacing();
  }
  std::vector<double> nodes() const {
    std::vector<double> out(static_cast<std::size_t>(points));
    for (std::int64_t i = 0; i < points; ++i) out[static_cast<std::size_t>(i)] = at(i);
    return out;
  }
};

/// sigma(x) = 1 + x^2.
inline double weight_sigma(double x) noexcept { return 1.0 + x * x; }

class ParameterSchedule {
public:
  enum class Family { fixed, q_ratio, alpha_beta };

  static ParameterSchedule fixed(const PQPair& pair) { return {Family::fixed, pair.p(), pair.q()}; }
  /// p_n = 1, q_n = n / (n + 1).
  static ParameterSchedule q_ratio() { return {Family::q_ratio, 0.0, 0.0}; }
  /// p_n = 1 - alpha/n, q_n = 1 - beta/n with 0 <= alpha < beta.
  static ParameterSchedule alpha_beta(double alpha, double beta) {
    if (!(alpha >= 0.0 && alpha < beta))
      throw std::invalid_argument("ParameterSchedule: alpha_beta needs 0 <= alpha < beta");
    return {Family::alpha_beta, alpha, beta};
  }

  Family family() const noexcept { return family_; }
  double first() const noexcept { return a_; }
  double second() const noexcept { return b_; }

  /// (p_n, q_n); throws std::invalid_argument when outside 0 < q_n < p_n <= 1.
  PQPair at(std::int64_t n) const {
    const auto nd = static_cast<double>(n);
    double p = 0.0, q = 0.0;
    switch (family_) {
      case Family::fixed: p = a_; q = b_; break;
      case Family::q_ratio: p = 1.0; q = nd / (nd + 1.0); break;
      case Family::alpha_beta: p = 1.0 - a_ / nd; q = 1.0 - b_ / nd; break;
    }
    if (!(q > 0.0 && q < p && p <= 1.0))
      throw std::invalid_argument("schedule gives (p, q) = (" + std::to_string(p) + ", " + std::to_string(q) +
                                  ") at n = " + std::to_string(n) + ", violating 0 < q < p <= 1");
    return {p, q};
  }

  /// Limits (a, b) of p_n^n and q_n^n.
  std::pair<double, double> power_limits() const noexcept {
    switch (family_) {
      case Family::fixed: return {a_ == 1.0 ? 1.0 : 0.0, b_ == 1.0 ? 1.0 : 0.0};
      case Family::q_ratio: return {1.0, std::exp(-1.0)};
      case Family::alpha_beta: return {std::exp(-a_), std::exp(-b_)};
    }
    return {0.0, 0.0};
  }

  /// Whether p_n -> 1 and q_n -> 1, the setting in which D_n f -> f.
  bool tends_to_identity() const noexcept {
    return family_ != Family::fixed || (a_ == 1.0 && b_ == 1.0);
  }

  std::string describe() const {
    switch (family_) {
      case Family::fixed: return "fixed(p=" + std::to_string(a_) + ", q=" + std::to_string(b_) + ")";
      case Family::q_ratio: return "q_ratio(p_n=1, q_n=n/(n+1))";
      case Family::alpha_beta:
        return "alpha_beta(alpha=" + std::to_string(a_) + ", beta=" + std::to_string(b_) + ")";
    }
    return {};
  }

private:
  ParameterSchedule(Family family, double a, double b) : family_(family), a_(a), b_(b) {}
  Family family_;
  double a_, b_;
};

// ---------------------------------------------------------------------------
// Moduli of continuity

struct ModulusEstimate {
  double value = 0.0;
  bool resolution_limited = false;  // delta smaller than the grid spacing
};

/// Discrete first and second moduli on a fixed grid. Step sizes are the grid
/// multiples j h <= delta plus delta itself; the sup over x runs over grid
/// points x with x + order * step <= stop. Per-multiple sups are tabulated
/// once so repeated queries cost O(points).
template <class F>
class ModulusTable {
public:
  ModulusTable(F f, const EvalGrid& grid, int order) : f_(std::move(f)), grid_(grid), order_(order) {
    grid.validate();
    if (order != 1 && order != 2) throw std::invalid_argument("ModulusTable: order must be 1 or 2");
    values_.reserve(static_cast<std::size_t>(grid.points));
    for (std::int64_t i = 0; i < grid.points; ++i) values_.push_back(static_cast<double>(f_(grid.at(i))));
    const std::int64_t max_multiple = (grid.points - 1) / order;
    running_max_.assign(static_cast<std::size_t>(max_multiple + 1), 0.0);
    for (std::int64_t j = 1; j <= max_multiple; ++j) {
      double best = 0.0;
      for (std::int64_t i = 0; i + order * j < grid.points; ++i) best = std::max(best, grid_difference(i, j));
      running_max_[static_cast<std::size_t>(j)] = std::max(running_max_[static_cast<std::size_t>(j - 1)], best);
    }
  }

  ModulusEstimate operator()(double delta) const {
    if (!(delta > 0.0)) throw std::domain_error("modulus: delta must be > 0");
    const double h = grid_.spacing();
    const auto max_multiple = static_cast<std::int64_t>(running_max_.size()) - 1;
    const auto multiples = std::min(max_multiple, static_cast<std::int64_t>(std::floor(delta / h * (1.0 + 1e-12))));
    ModulusEstimate out;
    out.resolution_limited = delta < h;
    out.value = running_max_[static_cast<std::size_t>(multiples)];
    if (order_ * delta <= grid_.stop - grid_.start) {
      double best = 0.0;
      for (std::int64_t i = 0; i < grid_.points; ++i) {
        const double x = grid_.at(i);
        if (x + order_ * delta > grid_.stop * (1.0 + 1e-15)) break;
        best = std::max(best, exact_difference(x, delta));
      }
      out.value = std::max(out.value, best);
    }
    return out;
  }

private:
  double grid_difference(std::int64_t i, std::int64_t j) const {
    const auto at = [&](std::int64_t idx) { return values_[static_cast<std::size_t>(idx)]; };
    if (order_ == 1) return std::abs(at(i + j) - at(i));
    return std::abs(at(i + 2 * j) - 2.0 * at(i + j) + at(i));
  }
  double exact_difference(double x, double h) const {
    if (order_ == 1) return std::abs(f_(x + h) - f_(x));
    return std::abs(f_(x + 2.0 * h) - 2.0 * f_(x + h) + f_(x));
  }

  F f_;
  EvalGrid grid_;
  int order_;
  std::vector<double> values_;
  std::vector<double> running_max_;
};

template <class F>
ModulusEstimate modulus_of_continuity(F&& f, double delta, const EvalGrid& grid) {
  return ModulusTable<std::decay_t<F>>(f, grid, 1)(delta);
}

template <class F>
ModulusEstimate second_modulus(F&& f, double delta, const EvalGrid& grid) {
  return ModulusTable<std::decay_t<F>>(f, grid, 2)(delta);
}

// ---------------------------------------------------------------------------
// Rate-bound ingredients

struct Theorem1Terms {
  double omega_term = 0.0;   // omega(f, |mu_{n,1}(x)|)
  double omega2_arg = 0.0;   // sqrt(mu_{n,2}(x) + mu_{n,1}(x)^2)
  double omega2_value = 0.0; // omega_2(f, omega2_arg), the factor multiplying the unknown constant
  bool resolution_limited = false;
};

/// Computable right-hand-side ingredients of
/// |D_n f(x) - f(x)| <= omega(f, |mu_1|) + C omega_2(f, sqrt(mu_2 + mu_1^2)).
/// The absolute constant C is not known and not returned.
inline Theorem1Terms theorem1_bound_terms(const PQPair& pair, std::int64_t n, double x, const FunctionSpec& f,
                                          const EvalGrid& grid) {
  const double mu1 = central_moment(pair, 1, n, x);
  const double mu2 = central_moment(pair, 2, n, x);
  Theorem1Terms out;
  out.omega2_arg = std::sqrt(mu2 + mu1 * mu1);
  if (mu1 != 0.0) {
    const auto w = modulus_of_continuity(f, std::abs(mu1), grid);
    out.omega_term = w.value;
    out.resolution_limited = w.resolution_limited;
  }
  if (out.omega2_arg > 0.0) {
    const auto w2 = second_modulus(f, out.omega2_arg, grid);
    out.omega2_value = w2.value;
    out.resolution_limited = out.resolution_limited || w2.resolution_limited;
  }
  return out;
}

/// L = 6 C_f (1 + kappa^2)(1 + kappa + kappa^2).
inline double theorem2_constant(double c_f, double kappa) noexcept {
  return 6.0 * c_f * (1.0 + kappa * kappa) * (1.0 + kappa + kappa * kappa);
}

struct Theorem2Bound {
  double bound = 0.0;
  double constant_L = 0.0;
  double x_at_max = 0.0;
  std::vector<double> pointwise;  // bound(x) at the grid points in [0, kappa]
};

/// max over grid points x in [0, kappa] of
///   L mu_2(x) + omega_{kappa+1}(f, delta) + 2 omega_{kappa+1}(f, delta),  delta = sqrt(L mu_2(x)),
/// with both moduli on [0, kappa + 1]. `grid` must be that interval.
inline Theorem2Bound theorem2_bound_report(const PQPair& pair, std::int64_t n, const FunctionSpec& f, double kappa,
                                           const EvalGrid& grid) {
  if (!(kappa > 0.0)) throw std::invalid_argument("theorem2_rate_bound: kappa must be > 0");
  if (!f.growth_bound()) throw std::invalid_argument("theorem2_rate_bound: f has no growth bound C_f configured");
  grid.validate();
  if (grid.start != 0.0 || grid.stop < kappa + 1.0)
    throw std::invalid_argument("theorem2_rate_bound: grid must cover [0, kappa + 1]");
  Theorem2Bound out;
  out.constant_L = theorem2_constant(*f.growth_bound(), kappa);
  ModulusTable<const FunctionSpec&> omega(f, grid, 1);
  for (std::int64_t i = 0; i < grid.points && grid.at(i) <= kappa * (1.0 + 1e-15); ++i) {
    const double x = grid.at(i);
    const double lm = out.constant_L * central_moment(pair, 2, n, x);
    const double delta = std::sqrt(std::max(lm, 0.0));
    const double w = delta > 0.0 ? omega(delta).value : 0.0;
    const double value = lm + 3.0 * w;
    out.pointwise.push_back(value);
    if (value > out.bound || i == 0) {
      out.bound = value;
      out.x_at_max = x;
    }
  }
  return out;
}

inline double theorem2_rate_bound(const PQPair& pair, std::int64_t n, const FunctionSpec& f, double kappa,
                                  const EvalGrid& grid) {
  return theorem2_bound_report(pair, n, f, kappa, grid).bound;
}

// ---------------------------------------------------------------------------
// Errors and convergence runs

struct GridErrors {
  double sup_error = 0.0;          // max |D_n f - f|
  double weighted_error = 0.0;     // max |D_n f - f| / (1 + x^2)
  double x_at_weighted_max = 0.0;
  bool right_edge_decreasing = true;  // weighted error falls over the last grid step
  bool trusted = true;
  std::vector<double> operator_values;
};

inline GridErrors grid_errors(const PQPair& pair, std::int64_t n, const FunctionSpec& f, const EvalGrid& grid,
                              const TruncationPolicy& policy = {}) {
  grid.validate();
  GridErrors out;
  std::vector<double> weighted;
  for (std::int64_t i = 0; i < grid.points; ++i) {
    const double x = grid.at(i);
    const auto r = baskakov_beta_apply(pair, f, n, x, policy);
    out.trusted = out.trusted && r.trusted();
    out.operator_values.push_back(r.value);
    const double err = std::abs(r.value - f(x));
    weighted.push_back(err / weight_sigma(x));
    out.sup_error = std::max(out.sup_error, err);
    if (weighted.back() > out.weighted_error || i == 0) {
      out.weighted_error = weighted.back();
      out.x_at_weighted_max = x;
    }
  }
  out.right_edge_decreasing = weighted[weighted.size() - 1] <= weighted[weighted.size() - 2];
  return out;
}

struct WeightedError {
  double value = 0.0;
  double x_at_max = 0.0;
  bool right_edge_decreasing = true;
  bool trusted = true;
};

/// max over the grid of |D_n(f, x) - f(x)| / (1 + x^2).
inline WeightedError weighted_sup_error(const PQPair& pair, std::int64_t n, const FunctionSpec& f,
                                        const EvalGrid& grid, const TruncationPolicy& policy = {}) {
  if (!f.growth_bound())
    throw std::invalid_argument("weighted_sup_error: f must carry a growth bound C_f (weighted class)");
  const auto e = grid_errors(pair, n, f, grid, policy);
  return {e.weighted_error, e.x_at_weighted_max, e.right_edge_decreasing, e.trusted};
}

struct ConvergenceRow {
  std::int64_t n = 0;
  double p = std::numeric_limits<double>::quiet_NaN();
  double q = std::numeric_limits<double>::quiet_NaN();
  double sup_error = std::numeric_limits<double>::quiet_NaN();
  double weighted_error = std::numeric_limits<double>::quiet_NaN();
  double mu2_max = std::numeric_limits<double>::quiet_NaN();
  bool ok = false;
  std::string message;
};

/// One row per n; a failing row is marked and the run continues.
inline std::vector<ConvergenceRow> convergence_run(const ParameterSchedule& schedule, const FunctionSpec& f,
                                                   const std::vector<std::int64_t>& n_list, const EvalGrid& grid,
                                                   const TruncationPolicy& policy = {}) {
  grid.validate();
  std::vector<ConvergenceRow> rows;
  rows.reserve(n_list.size());
  for (const auto n : n_list) {
    ConvergenceRow row;
    row.n = n;
    try {
      const PQPair pair = schedule.at(n);
      row.p = pair.p();
      row.q = pair.q();
      if (n <= 2) throw std::domain_error("convergence_run: n must be > 2");
      const auto e = grid_errors(pair, n, f, grid, policy);
      double mu2 = 0.0;
      for (std::int64_t i = 0; i < grid.points; ++i) mu2 = std::max(mu2, central_moment(pair, 2, n, grid.at(i)));
      if (e.trusted) {
        row.sup_error = e.sup_error;
        row.weighted_error = e.weighted_error;
        row.mu2_max = mu2;
        row.ok = true;
      } else {
        row.mu2_max = mu2;
        row.message = "operator evaluation did not converge at some grid point";
      }
    } catch (const std::exception& ex) {
      row.message = ex.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace pqbb
