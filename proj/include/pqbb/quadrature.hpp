#pragma once

// Generalized Jackson (p,q)-integration on [0, a] and on [0, inf).
//
// Both integrals are node series over the lattice t_i = q^i / p^{i+1}:
//   int_0^a f   = (p - q) a sum_{i >= 0} t_i f(a t_i)
//   int_0^inf f = (p - q)   sum_{i in Z}  t_i f(t_i)
// Each direction of a series is cut once the terms are decreasing and, for
// three consecutive terms, both the term and its geometric tail
// extrapolation fall below max(abs_tol, rel_tol |partial sum|).

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

#include "pqbb/core.hpp"

namespace pqbb {

struct QuadratureResult {
  double value = 0.0;
  std::int64_t terms_used = 0;
  double tail_estimate = 0.0;
  bool converged = false;
  /// Jackson integral on [0, a] only: nodes a t_i lying above a (q^i > p^{i+1}).
  std::int64_t nodes_above_upper_limit = 0;
};

namespace detail {

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      carry_ += (sum_ - t) + x;
    else
      carry_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const noexcept { return sum_ + carry_; }

private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

struct SweepOutcome {
  std::int64_t terms = 0;
  double tail = 0.0;
  bool stopped = false;  // false when the term budget ran out first
};

/// Adds term(i) for i = start, start + step, ... into `sum` until the stop
/// rule fires or `budget` terms have been used. `tail_share` scales the
/// allowance for the tail estimate when several sweeps share one threshold.
template <class Term>
SweepOutcome sweep(Term&& term, std::int64_t start, std::int64_t step, const TruncationPolicy& policy,
                   CompensatedSum& sum, std::int64_t budget, double tail_share = 1.0) {
  SweepOutcome out;
  double prev_abs = std::numeric_limits<double>::quiet_NaN();
  double last_tail = std::numeric_limits<double>::infinity();
  int quiet = 0;
  for (std::int64_t i = start; out.terms < budget; i += step) {
    const double t = term(i);
    if (!std::isfinite(t)) {
      out.tail = std::numeric_limits<double>::infinity();
      return out;
    }
    sum.add(t);
    ++out.terms;
    const double a = std::abs(t);
    double ratio = std::numeric_limits<double>::infinity();
    if (prev_abs > 0.0)
      ratio = a / prev_abs;
    else if (prev_abs == 0.0 && a == 0.0)
      ratio = 0.0;
    last_tail = ratio < 1.0 ? a * ratio / (1.0 - ratio) : std::numeric_limits<double>::infinity();
    const double thr = policy.threshold(sum.value());
    if (ratio < 1.0 && a <= thr && last_tail <= tail_share * thr)
      ++quiet;
    else
      quiet = 0;
    prev_abs = a;
    if (quiet >= 3) {
      out.stopped = true;
      break;
    }
  }
  out.tail = last_tail;
  return out;
}

inline void require_strict(const PQPair& pair, const char* who) {
  if (!pair.strict())
    throw std::domain_error(std::string(who) + ": requires 0 < q < p <= 1 (node formula degenerates at p = q)");
}

/// Lattice node t_i = q^i / p^{i+1}.
struct Lattice {
  double log_p, log_q;
  explicit Lattice(const PQPair& pair) : log_p(std::log(pair.p())), log_q(std::log(pair.q())) {}
  double node(std::int64_t i) const noexcept {
    const double id = static_cast<double>(i);
    return std::exp(id * log_q - (id + 1.0) * log_p);
  }
};

}  // namespace detail

/// Bilateral series sum_{i in Z} term(i, t_i) without the (p - q) factor.
/// Positive indices (nodes -> 0) are summed first, then negative ones.
template <class Term>
QuadratureResult bilateral_series(const PQPair& pair, Term&& term, const TruncationPolicy& policy) {
  detail::require_strict(pair, "improper_integral");
  policy.validate();
  const detail::Lattice lattice(pair);
  auto at = [&](std::int64_t i) { return term(i, lattice.node(i)); };
  detail::CompensatedSum sum;
  const auto up = detail::sweep(at, 0, 1, policy, sum, policy.max_terms, 0.5);
  const auto down = detail::sweep(at, -1, -1, policy, sum, policy.max_terms - up.terms, 0.5);
  QuadratureResult r;
  r.value = sum.value();
  r.terms_used = up.terms + down.terms;
  r.tail_estimate = up.tail + down.tail;
  r.converged = up.stopped && down.stopped && r.terms_used < policy.max_terms &&
                r.tail_estimate <= policy.threshold(r.value);
  return r;
}

namespace detail {
inline QuadratureResult scaled(QuadratureResult r, double factor, const TruncationPolicy& policy) {
  r.value *= factor;
  r.tail_estimate *= std::abs(factor);
  r.converged = r.converged && r.tail_estimate <= policy.threshold(r.value);
  return r;
}
}  // namespace detail

template <class F>
QuadratureResult jackson_integral(const PQPair& pair, F&& f, double a, const TruncationPolicy& policy = {}) {
  detail::require_strict(pair, "jackson_integral");
  policy.validate();
  if (!(a > 0.0)) throw std::domain_error("jackson_integral: upper limit must be > 0");
  const detail::Lattice lattice(pair);
  detail::CompensatedSum sum;
  const auto out = detail::sweep(
      [&](std::int64_t i) {
        const double t = lattice.node(i);
        return t * f(a * t);
      },
      0, 1, policy, sum, policy.max_terms);
  QuadratureResult r;
  r.value = sum.value();
  r.terms_used = out.terms;
  r.tail_estimate = out.tail;
  r.converged = out.stopped && r.terms_used < policy.max_terms && r.tail_estimate <= policy.threshold(r.value);
  for (std::int64_t i = 0; i < out.terms && lattice.node(i) > 1.0; ++i) ++r.nodes_above_upper_limit;
  return detail::scaled(r, (pair.p() - pair.q()) * a, policy);
}

template <class F>
QuadratureResult improper_integral(const PQPair& pair, F&& f, const TruncationPolicy& policy = {}) {
  auto r = bilateral_series(pair, [&](std::int64_t, double t) { return t * f(t); }, policy);
  return detail::scaled(r, pair.p() - pair.q(), policy);
}

/// int_a^b := int_0^b - int_0^a (int_0^0 = 0).
template <class F>
double jackson_integral_between(const PQPair& pair, F&& f, double a, double b, const TruncationPolicy& policy) {
  const double upper = jackson_integral(pair, f, b, policy).value;
  const double lower = a > 0.0 ? jackson_integral(pair, f, a, policy).value : 0.0;
  return upper - lower;
}

/// |int_a^b f(px) D g(x) - [f(b)g(b) - f(a)g(a) - int_a^b g(qx) D f(x)]|.
template <class F, class G>
double verify_integration_by_parts(const PQPair& pair, F&& f, G&& g, double a, double b,
                                   const TruncationPolicy& policy = {}) {
  detail::require_strict(pair, "verify_integration_by_parts");
  if (!(a >= 0.0 && a < b)) throw std::domain_error("verify_integration_by_parts: need 0 <= a < b");
  const double p = pair.p(), q = pair.q();
  auto lhs_integrand = [&](double x) { return f(p * x) * pq_derivative(pair, g, x); };
  auto rhs_integrand = [&](double x) { return g(q * x) * pq_derivative(pair, f, x); };
  const double lhs = jackson_integral_between(pair, lhs_integrand, a, b, policy);
  const double rhs = f(b) * g(b) - f(a) * g(a) - jackson_integral_between(pair, rhs_integrand, a, b, policy);
  return std::abs(lhs - rhs);
}

}  // namespace pqbb
