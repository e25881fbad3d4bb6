#pragma once

// (p,q)-Baskakov basis, the (p,q)-Baskakov operator, and the
// (p,q)-Baskakov-Beta operator
//
//   D_n(f, x) = sum_k b_{n,k}(x) / B(k+1, n)
//               * int_0^inf t^k / (1 (+) pt)^{n+k+1} f(q^2 p^{n+k} t) d_{p,q} t
//
// evaluated three ways: by quadrature of the inner integrals, by expanding
// polynomial f into closed-form Beta values, and by the closed-form moments.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "pqbb/core.hpp"
#include "pqbb/function_spec.hpp"
#include "pqbb/quadrature.hpp"

namespace pqbb {

struct OperatorResult {
  double value = 0.0;
  std::int64_t k_terms_used = 0;
  double basis_tail_mass = 0.0;  // 1 - sum of the basis weights actually used
  bool inner_integrals_converged = true;
  bool outer_sum_converged = true;

  bool trusted(double tail_tolerance = 1e-10) const noexcept {
    return inner_integrals_converged && outer_sum_converged && basis_tail_mass <= tail_tolerance;
  }
};

namespace detail {

inline void require_operator_regime(const PQPair& pair, const char* who) {
  if (!pair.operator_regime())
    throw std::domain_error(std::string(who) + ": requires 0 < q < p <= 1 or p = q = 1");
}

inline void require_positive_n(std::int64_t n, const char* who) {
  if (n < 1) throw std::domain_error(std::string(who) + ": n must be >= 1");
}

/// [r] for r = 0, 1, 2, ..., grown on demand with [r+1] = p [r] + q^r.
class NumberTable {
public:
  explicit NumberTable(const PQPair& pair) : p_(pair.p()), q_(pair.q()) {}

  double operator[](std::int64_t r) {
    while (static_cast<std::int64_t>(values_.size()) <= r) {
      const auto s = static_cast<double>(values_.size() - 1);
      values_.push_back(p_ * values_.back() + std::pow(q_, s));
    }
    return values_[static_cast<std::size_t>(r)];
  }

private:
  double p_, q_;
  std::vector<double> values_{0.0};
};

/// Walks b_{n,0}(x), b_{n,1}(x), ... in the log domain through the ratio
/// b_{k+1}/b_k = [n+k]/[k+1] * p q^k x / (p^{n+k} + q^{n+k} x).
class BasisSequence {
public:
  BasisSequence(const PQPair& pair, std::int64_t n, double x)
      : n_(n), x_(x), log_p_(std::log(pair.p())), log_q_(std::log(pair.q())),
        log_ratio_(log_q_ - log_p_), numbers_(pair) {
    if (x < 0.0) throw std::domain_error("baskakov basis: x must be >= 0");
    // b_{n,0}(x) = p^{n(n-1)/2} / (1 (+) x)^n = prod_{j<n} 1 / (1 + (q/p)^j x)
    log_b_ = 0.0;
    for (std::int64_t j = 0; j < n; ++j) log_b_ -= std::log1p(x * std::exp(static_cast<double>(j) * log_ratio_));
  }

  std::int64_t k() const noexcept { return k_; }
  double value() const noexcept { return x_ == 0.0 ? (k_ == 0 ? 1.0 : 0.0) : std::exp(log_b_); }
  double log_value() const noexcept { return log_b_; }

  void advance() {
    if (x_ > 0.0) {
      const auto nk = static_cast<double>(n_ + k_);
      const double log_denominator = nk * log_p_ + std::log1p(x_ * std::exp(nk * log_ratio_));
      log_b_ += std::log(numbers_[n_ + k_] / numbers_[k_ + 1]) + log_p_ + static_cast<double>(k_) * log_q_ +
                std::log(x_) - log_denominator;
    }
    ++k_;
  }

  NumberTable& numbers() noexcept { return numbers_; }

private:
  std::int64_t n_;
  double x_;
  double log_p_, log_q_, log_ratio_;
  NumberTable numbers_;
  std::int64_t k_ = 0;
  double log_b_ = 0.0;
};

/// sum_k b_{n,k}(x) g(k), truncated once the basis mass reaches 1 - rel_tol,
/// the weights are decreasing, and three consecutive contributions are below
/// the policy threshold. g is only called where b_{n,k}(x) > 0.
template <class PerK>
OperatorResult operator_sum(const PQPair& pair, std::int64_t n, double x, const TruncationPolicy& policy,
                            PerK&& per_k) {
  policy.validate();
  BasisSequence basis(pair, n, x);
  CompensatedSum total, mass;
  OperatorResult r;
  double prev_b = 0.0;
  int quiet = 0;
  for (;;) {
    const double b = basis.value();
    mass.add(b);
    double contribution = 0.0;
    if (b > 0.0) contribution = b * per_k(basis.k(), basis, r);
    total.add(contribution);
    ++r.k_terms_used;
    const bool mass_reached = mass.value() >= 1.0 - policy.rel_tol;
    const bool decreasing = b <= prev_b || basis.k() == 0;
    if (mass_reached && decreasing && std::abs(contribution) <= policy.threshold(total.value()))
      ++quiet;
    else
      quiet = 0;
    if (quiet >= 3) break;
    if (r.k_terms_used >= policy.max_terms) {
      r.outer_sum_converged = false;
      break;
    }
    prev_b = b;
    basis.advance();
  }
  r.value = total.value();
  r.basis_tail_mass = std::max(0.0, 1.0 - mass.value());
  return r;
}

/// Cumulative sum_{j<N} log1p((q/p)^j p t_i) for lattice nodes t_i, so that
/// log (1 (+) p t_i)^N = N(N-1)/2 log p + cumulative(i, N).
class PowerBasisCache {
public:
  explicit PowerBasisCache(const PQPair& pair)
      : log_p_(std::log(pair.p())), log_ratio_(std::log(pair.q()) - std::log(pair.p())), lattice_(pair) {}

  double log_power_basis(std::int64_t i, std::int64_t degree) {
    auto& row = row_for(i);
    const double log_pt = log_p_ + std::log(lattice_.node(i));
    while (static_cast<std::int64_t>(row.size()) <= degree) {
      const auto j = static_cast<double>(row.size() - 1);
      row.push_back(row.back() + std::log1p(std::exp(log_pt + j * log_ratio_)));
    }
    const auto nd = static_cast<double>(degree);
    return 0.5 * nd * (nd - 1.0) * log_p_ + row[static_cast<std::size_t>(degree)];
  }

private:
  std::vector<double>& row_for(std::int64_t i) {
    auto& side = i >= 0 ? nonneg_ : neg_;
    const auto idx = static_cast<std::size_t>(i >= 0 ? i : -i - 1);
    while (side.size() <= idx) side.push_back(std::vector<double>{0.0});
    return side[idx];
  }

  double log_p_, log_ratio_;
  Lattice lattice_;
  std::vector<std::vector<double>> nonneg_, neg_;
};

/// q^{2j} p^{j(n+k)} B(k+j+1, n-j) / B(k+1, n) with the closed-form Beta;
/// Gamma(n+k+1) cancels, leaving
/// q^{2j + [(k+1)k - (k+j+1)(k+j)]/2} p^{j(n+k) + [(k+1)(k+2) - (k+j+1)(k+j+2)]/2}
///   * prod_{r=k+1}^{k+j} [r] / prod_{r=n-j}^{n-1} [r].
inline double beta_moment_ratio(const PQPair& pair, NumberTable& numbers, std::int64_t n, std::int64_t k,
                                std::int64_t j) {
  const auto kd = static_cast<double>(k), jd = static_cast<double>(j), nd = static_cast<double>(n);
  const double q_exp = 2.0 * jd + 0.5 * ((kd + 1.0) * kd - (kd + jd + 1.0) * (kd + jd));
  const double p_exp = jd * (nd + kd) + 0.5 * ((kd + 1.0) * (kd + 2.0) - (kd + jd + 1.0) * (kd + jd + 2.0));
  double log_value = q_exp * std::log(pair.q()) + p_exp * std::log(pair.p());
  for (std::int64_t r = k + 1; r <= k + j; ++r) log_value += std::log(numbers[r]);
  for (std::int64_t r = n - j; r <= n - 1; ++r) log_value -= std::log(numbers[r]);
  return std::exp(log_value);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Baskakov basis and operator

/// b_{n,k}(x) = [n+k-1 choose k] p^{k + n(n-1)/2} q^{k(k-1)/2} x^k / (1 (+) x)^{n+k},
/// evaluated from its factors in the log domain.
inline double baskakov_basis(const PQPair& pair, std::int64_t n, std::int64_t k, double x) {
  detail::require_operator_regime(pair, "baskakov_basis");
  detail::require_positive_n(n, "baskakov_basis");
  if (k < 0) throw std::domain_error("baskakov_basis: k must be >= 0");
  if (x < 0.0) throw std::domain_error("baskakov_basis: x must be >= 0");
  if (x == 0.0) return k == 0 ? 1.0 : 0.0;
  const auto kd = static_cast<double>(k), nd = static_cast<double>(n);
  const double log_b = log_pq_factorial(pair, n + k - 1) - log_pq_factorial(pair, n - 1) -
                       log_pq_factorial(pair, k) + (kd + 0.5 * nd * (nd - 1.0)) * std::log(pair.p()) +
                       0.5 * kd * (kd - 1.0) * std::log(pair.q()) + kd * std::log(x) -
                       log_pq_power_basis(pair, x, n + k);
  return std::exp(log_b);
}

/// Sum of b_{n,k}(x) under the operator truncation rule; value is the mass.
inline OperatorResult baskakov_partition(const PQPair& pair, std::int64_t n, double x,
                                         const TruncationPolicy& policy = {}) {
  detail::require_operator_regime(pair, "baskakov_partition");
  detail::require_positive_n(n, "baskakov_partition");
  return detail::operator_sum(pair, n, x, policy, [](std::int64_t, auto&, auto&) { return 1.0; });
}

/// B_{n,p,q}(f, x) = sum_k b_{n,k}(x) f(p^{n-1} [k] / (q^{k-1} [n])).
template <class F>
OperatorResult baskakov_apply(const PQPair& pair, F&& f, std::int64_t n, double x,
                              const TruncationPolicy& policy = {}) {
  detail::require_operator_regime(pair, "baskakov_apply");
  detail::require_positive_n(n, "baskakov_apply");
  const double log_p = std::log(pair.p()), log_q = std::log(pair.q());
  const double number_n = pq_number(pair, n);
  return detail::operator_sum(pair, n, x, policy, [&](std::int64_t k, detail::BasisSequence& basis, auto&) {
    const double node = std::exp(static_cast<double>(n - 1) * log_p - static_cast<double>(k - 1) * log_q) *
                        basis.numbers()[k] / number_n;
    return static_cast<double>(f(node));
  });
}

/// Closed-form images of e_0, e_1, e_2 under the Baskakov operator.
inline double baskakov_moment_closed(const PQPair& pair, int m, std::int64_t n, double x) {
  detail::require_positive_n(n, "baskakov_moment_closed");
  switch (m) {
    case 0:
      return 1.0;
    case 1:
      return x;
    case 2: {
      const double p = pair.p(), q = pair.q();
      return (pq_number(pair, n + 1) * x * x + std::pow(p, static_cast<double>(n - 1)) * q * x) /
             (q * pq_number(pair, n));
    }
    default:
      throw std::domain_error("baskakov_moment_closed: m must be 0, 1 or 2");
  }
}

/// Residual of [n] T_{m+1}(qx) - q p^{n-1} x (1 + px) D_{p,q}[T_m](x) - [n] q x T_m(qx),
/// with T_m = B_{n,p,q}(e_m, .) evaluated numerically.
inline double verify_baskakov_recurrence(const PQPair& pair, std::int64_t n, int m, double x,
                                         const TruncationPolicy& policy = {}) {
  detail::require_strict(pair, "verify_baskakov_recurrence");
  if (!(x > 0.0)) throw std::domain_error("verify_baskakov_recurrence: x must be > 0");
  if (m < 0) throw std::domain_error("verify_baskakov_recurrence: m must be >= 0");
  const double p = pair.p(), q = pair.q();
  const auto e_m = FunctionSpec::monomial(static_cast<std::size_t>(m));
  const auto e_m1 = FunctionSpec::monomial(static_cast<std::size_t>(m + 1));
  auto moment = [&](const FunctionSpec& f, double y) { return baskakov_apply(pair, f, n, y, policy).value; };
  const double number_n = pq_number(pair, n);
  const double derivative = pq_derivative(pair, [&](double y) { return moment(e_m, y); }, x);
  const double lhs = number_n * moment(e_m1, q * x);
  const double rhs = q * std::pow(p, static_cast<double>(n - 1)) * x * (1.0 + p * x) * derivative +
                     number_n * q * x * moment(e_m, q * x);
  return std::abs(lhs - rhs);
}

// ---------------------------------------------------------------------------
// Baskakov-Beta operator

/// Semi-analytic image of e_m: sum_k b_{n,k}(x) q^{2m} p^{m(n+k)} B(k+m+1, n-m) / B(k+1, n)
/// with every Beta value from the closed form.
inline double baskakov_beta_monomial_exact(const PQPair& pair, int m, std::int64_t n, double x,
                                           const TruncationPolicy& policy = {}) {
  detail::require_operator_regime(pair, "baskakov_beta_monomial_exact");
  if (m < 0) throw std::domain_error("baskakov_beta_monomial_exact: m must be >= 0");
  if (n <= m) throw std::domain_error("baskakov_beta_monomial_exact: requires n > m");
  return detail::operator_sum(pair, n, x, policy,
                              [&](std::int64_t k, detail::BasisSequence& basis, auto&) {
                                return detail::beta_moment_ratio(pair, basis.numbers(), n, k, m);
                              })
      .value;
}

/// D_n(f, x) for polynomial f through the closed-form Beta expansion.
inline OperatorResult baskakov_beta_polynomial(const PQPair& pair, const Polynomial& f, std::int64_t n, double x,
                                               const TruncationPolicy& policy = {}) {
  detail::require_operator_regime(pair, "baskakov_beta_polynomial");
  if (n <= static_cast<std::int64_t>(f.degree()))
    throw std::domain_error("baskakov_beta_polynomial: requires n > deg f (got n = " + std::to_string(n) +
                            ", deg f = " + std::to_string(f.degree()) + ")");
  return detail::operator_sum(pair, n, x, policy, [&](std::int64_t k, detail::BasisSequence& basis, auto&) {
    double acc = 0.0;
    for (std::size_t j = 0; j < f.coefficients.size(); ++j)
      if (f.coefficients[j] != 0.0)
        acc += f.coefficients[j] *
               detail::beta_moment_ratio(pair, basis.numbers(), n, k, static_cast<std::int64_t>(j));
    return acc;
  });
}

/// D_n(f, x) with every inner integral evaluated by the bilateral (p,q)-series.
/// Each k-term is normalised by the quadrature of the bare Beta integrand
/// t^k / (1 (+) pt)^{n+k+1}, which is B(k+1, n) by definition.
template <class F>
OperatorResult baskakov_beta_quadrature(const PQPair& pair, F&& f, std::int64_t n, double x,
                                        const TruncationPolicy& policy = {}) {
  detail::require_strict(pair, "baskakov_beta_quadrature");
  detail::require_positive_n(n, "baskakov_beta_quadrature");
  const double log_p = std::log(pair.p()), log_q = std::log(pair.q());
  detail::PowerBasisCache cache(pair);
  return detail::operator_sum(pair, n, x, policy, [&](std::int64_t k, detail::BasisSequence&, OperatorResult& r) {
    const std::int64_t degree = n + k + 1;
    const double scale = std::exp(2.0 * log_q + static_cast<double>(n + k) * log_p);
    // Magnitudes grow like q^{-k^2/2}; shift every term by the closed-form
    // log Beta so both series stay in range. The shift cancels in the ratio.
    const double shift = log_pq_beta(pair, k + 1, n);
    auto log_kernel = [&](std::int64_t i) {
      const auto id = static_cast<double>(i);
      const double log_t = id * log_q - (id + 1.0) * log_p;
      return static_cast<double>(k + 1) * log_t - cache.log_power_basis(i, degree) - shift;
    };
    const auto weight = bilateral_series(
        pair, [&](std::int64_t i, double) { return std::exp(log_kernel(i)); }, policy);
    const auto weighted = bilateral_series(
        pair,
        [&](std::int64_t i, double t) {
          const double kernel = std::exp(log_kernel(i));
          if (kernel == 0.0) return 0.0;
          const double fv = static_cast<double>(f(scale * t));
          if (!std::isfinite(fv))
            throw std::domain_error("baskakov_beta_quadrature: f is undefined at node " + std::to_string(scale * t));
          return kernel * fv;
        },
        policy);
    r.inner_integrals_converged = r.inner_integrals_converged && weight.converged && weighted.converged;
    return weighted.value / weight.value;
  });
}

/// D_n(f, x): closed-form Beta expansion for polynomial f, quadrature otherwise.
inline OperatorResult baskakov_beta_apply(const PQPair& pair, const FunctionSpec& f, std::int64_t n, double x,
                                          const TruncationPolicy& policy = {}) {
  if (const auto* poly = f.as_polynomial()) return baskakov_beta_polynomial(pair, *poly, n, x, policy);
  return baskakov_beta_quadrature(pair, f, n, x, policy);
}

// ---------------------------------------------------------------------------
// Closed-form moments

/// D_n(e_m, x) for m = 0, 1, 2, term by term as printed:
///   D(1)   = 1
///   D(t)   = ([n] x + p^{n-2} q) / [n-1]                                  (n > 1)
///   D(t^2) = x^2 [n]([n] + p^n/q) / (q [n-1][n-2])
///          + x [n](p^{n-3} q^2 + 2 p^{n-2} q + p^{n-1}) / (q [n-1][n-2])
///          + p^{2n-5} q [2] / ([n-1][n-2])                                (n > 2)
inline double moments_closed(const PQPair& pair, int m, std::int64_t n, double x) {
  const double p = pair.p(), q = pair.q();
  auto pw = [p](std::int64_t e) { return std::pow(p, static_cast<double>(e)); };
  switch (m) {
    case 0:
      detail::require_positive_n(n, "moments_closed");
      return 1.0;
    case 1: {
      if (n <= 1) throw std::domain_error("moments_closed: D(t, x) requires n > 1");
      return (pq_number(pair, n) * x + pw(n - 2) * q) / pq_number(pair, n - 1);
    }
    case 2: {
      if (n <= 2) throw std::domain_error("moments_closed: D(t^2, x) requires n > 2");
      const double nn = pq_number(pair, n), n1 = pq_number(pair, n - 1), n2 = pq_number(pair, n - 2);
      return x * x * nn * (nn + pw(n) / q) / (q * n1 * n2) +
             x * nn * (pw(n - 3) * q * q + 2.0 * pw(n - 2) * q + pw(n - 1)) / (q * n1 * n2) +
             pw(2 * n - 5) * q * pq_number(pair, 2) / (n1 * n2);
    }
    default:
      throw std::domain_error("moments_closed: m must be 0, 1 or 2");
  }
}

/// Central moments mu_{n,1} = D((t-x), x) and mu_{n,2} = D((t-x)^2, x), as printed.
inline double central_moment(const PQPair& pair, int order, std::int64_t n, double x) {
  if (n <= 2) throw std::domain_error("central_moment: requires n > 2");
  const double p = pair.p(), q = pair.q();
  auto pw = [p](std::int64_t e) { return std::pow(p, static_cast<double>(e)); };
  const double nn = pq_number(pair, n), n1 = pq_number(pair, n - 1), n2 = pq_number(pair, n - 2);
  switch (order) {
    case 1:
      return (x * (nn - n1) + pw(n - 2) * q) / n1;
    case 2: {
      const double denom = q * n1 * n2;
      const double quad = nn * (nn + pw(n) / q) + q * n1 * n2 - 2.0 * q * nn * n2;
      const double lin = nn * (pw(n - 3) * q * q + 2.0 * pw(n - 2) * q + pw(n - 1)) - 2.0 * pw(n - 2) * q * q * n2;
      return x * x * quad / denom + x * lin / denom + pq_number(pair, 2) * pw(2 * n - 5) * q / (n1 * n2);
    }
    default:
      throw std::domain_error("central_moment: order must be 1 or 2");
  }
}

}  // namespace pqbb
