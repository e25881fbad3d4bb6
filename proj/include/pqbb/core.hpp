#pragma once

// (p,q)-calculus primitives on the regime 0 < q <= p <= 1.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace pqbb {

class PQPair {
public:
  PQPair(double p, double q) : p_(p), q_(q) {
    if (!(q > 0.0))
      throw std::invalid_argument("PQPair: q must be > 0 (got " + std::to_string(q) + ")");
    if (!(p <= 1.0))
      throw std::invalid_argument("PQPair: p must be <= 1 (got " + std::to_string(p) + ")");
    if (q > p)
      throw std::invalid_argument("PQPair: q must not exceed p (got p=" + std::to_string(p) +
                                  ", q=" + std::to_string(q) + ")");
  }

  static PQPair classical() { return {1.0, 1.0}; }

  double p() const noexcept { return p_; }
  double q() const noexcept { return q_; }

  /// q < p, required by the Jackson integral and the Baskakov-Beta operator.
  bool strict() const noexcept { return q_ < p_; }
  bool is_classical() const noexcept { return p_ == 1.0 && q_ == 1.0; }

  /// Regime accepted by the Baskakov basis: q < p or p = q = 1.
  bool operator_regime() const noexcept { return strict() || is_classical(); }

  friend bool operator==(const PQPair&, const PQPair&) = default;

private:
  double p_;
  double q_;
};

struct TruncationPolicy {
  double rel_tol = 1e-12;
  double abs_tol = 1e-14;
  std::int64_t max_terms = 10000;

  void validate() const {
    if (!(rel_tol > 0.0)) throw std::invalid_argument("TruncationPolicy: rel_tol must be > 0");
    if (!(abs_tol > 0.0)) throw std::invalid_argument("TruncationPolicy: abs_tol must be > 0");
    if (max_terms < 1) throw std::invalid_argument("TruncationPolicy: max_terms must be >= 1");
  }

  double threshold(double partial_sum) const noexcept {
    return std::max(abs_tol, rel_tol * std::abs(partial_sum));
  }
};

/// [n] = p^{n-1} + p^{n-2} q + ... + q^{n-1}. Summed directly so that
/// p = q (where the quotient form is 0/0) needs no special case.
inline double pq_number(const PQPair& pair, std::int64_t n) {
  if (n < 0) throw std::domain_error("pq_number: n must be non-negative");
  const double p = pair.p(), q = pair.q();
  double acc = 0.0;
  double qj = 1.0;
  double pj = std::pow(p, static_cast<double>(n - 1));
  const double p_inv = 1.0 / p;
  for (std::int64_t j = 0; j < n; ++j) {
    acc += pj * qj;
    qj *= q;
    pj *= p_inv;
  }
  return acc;
}

inline double pq_factorial(const PQPair& pair, std::int64_t n) {
  if (n < 0) throw std::domain_error("pq_factorial: n must be non-negative");
  double acc = 1.0;
  for (std::int64_t r = 1; r <= n; ++r) acc *= pq_number(pair, r);
  return acc;
}

/// log([n]!), used whenever n is large enough that the product
/// leaves double range.
inline double log_pq_factorial(const PQPair& pair, std::int64_t n) {
  if (n < 0) throw std::domain_error("log_pq_factorial: n must be non-negative");
  const double p = pair.p(), q = pair.q();
  double acc = 0.0;
  double number = 0.0;  // [r], built with [r] = p[r-1] + q^{r-1}
  double q_pow = 1.0;
  for (std::int64_t r = 1; r <= n; ++r) {
    number = p * number + q_pow;
    q_pow *= q;
    acc += std::log(number);
  }
  return acc;
}

inline double pq_binomial(const PQPair& pair, std::int64_t n, std::int64_t r) {
  if (n < 0 || r < 0) throw std::domain_error("pq_binomial: arguments must be non-negative");
  if (r > n) throw std::domain_error("pq_binomial: r must not exceed n");
  if (n <= 40)
    return pq_factorial(pair, n) / (pq_factorial(pair, n - r) * pq_factorial(pair, r));
  return std::exp(log_pq_factorial(pair, n) - log_pq_factorial(pair, n - r) -
                  log_pq_factorial(pair, r));
}

/// Gamma_{p,q}(n+1) = [n]!, defined for integer arguments >= 1 only.
inline double pq_gamma(const PQPair& pair, std::int64_t argument) {
  if (argument < 1) throw std::domain_error("pq_gamma: argument must be an integer >= 1");
  return pq_factorial(pair, argument - 1);
}

inline double log_pq_gamma(const PQPair& pair, std::int64_t argument) {
  if (argument < 1) throw std::domain_error("log_pq_gamma: argument must be an integer >= 1");
  return log_pq_factorial(pair, argument - 1);
}

/// log (1 (+) x)^n = sum_{j<n} log(p^j + q^j x), written as
/// n(n-1)/2 log p + sum log1p((q/p)^j x) so no factor underflows.
inline double log_pq_power_basis(const PQPair& pair, double x, std::int64_t n) {
  if (n < 0) throw std::domain_error("pq_power_basis: n must be non-negative");
  const double p = pair.p(), q = pair.q();
  const double ratio = q / p;
  double acc = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1) * std::log(p);
  double scaled = x;
  for (std::int64_t j = 0; j < n; ++j) {
    acc += std::log1p(scaled);
    scaled *= ratio;
  }
  return acc;
}

/// (1 (+) x)^n = (1 + x)(p + q x)(p^2 + q^2 x) ... (p^{n-1} + q^{n-1} x).
inline double pq_power_basis(const PQPair& pair, double x, std::int64_t n) {
  if (n < 0) throw std::domain_error("pq_power_basis: n must be non-negative");
  if (n > 40) return std::exp(log_pq_power_basis(pair, x, n));
  double acc = 1.0;
  double pj = 1.0, qj = 1.0;
  for (std::int64_t j = 0; j < n; ++j) {
    acc *= pj + qj * x;
    pj *= pair.p();
    qj *= pair.q();
  }
  return acc;
}

/// log B_{p,q}(m,n) from the Gamma relation, using the prefactor
/// q^{1 - m(m-1)/2} p^{-m(m+1)/2}.
inline double log_pq_beta(const PQPair& pair, std::int64_t m, std::int64_t n) {
  if (m < 1 || n < 1) throw std::domain_error("pq_beta: arguments must be integers >= 1");
  const double md = static_cast<double>(m);
  return (1.0 - 0.5 * md * (md - 1.0)) * std::log(pair.q()) -
         0.5 * md * (md + 1.0) * std::log(pair.p()) + log_pq_gamma(pair, m) +
         log_pq_gamma(pair, n) - log_pq_gamma(pair, m + n);
}

inline double pq_beta(const PQPair& pair, std::int64_t m, std::int64_t n) {
  return std::exp(log_pq_beta(pair, m, n));
}

/// D_{p,q} f(x) = (f(px) - f(qx)) / ((p - q) x).
template <class F>
double pq_derivative(const PQPair& pair, F&& f, double x) {
  if (x == 0.0) throw std::domain_error("pq_derivative: undefined at x = 0");
  if (!pair.strict()) throw std::domain_error("pq_derivative: requires p != q");
  const double p = pair.p(), q = pair.q();
  return (f(p * x) - f(q * x)) / ((p - q) * x);
}

}  // namespace pqbb
