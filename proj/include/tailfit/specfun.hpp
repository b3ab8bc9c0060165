#ifndef TAILFIT_SPECFUN_HPP
#define TAILFIT_SPECFUN_HPP

#include <cstdint>
#include <functional>

namespace tailfit {

// Tolerance policy for infinite-series evaluation.
// rel_tol must lie in (0, 1e-6); max_terms must be at least 10^4.
struct SeriesTolerance {
  double rel_tol = 1e-12;
  std::int64_t max_terms = 10'000'000;

  void validate() const;
};

// Hurwitz zeta sum_{k=0}^inf (q + k)^(-alpha) for alpha > 1, q >= 1.
// Direct summation plus an Euler-Maclaurin tail; relative error <= 1e-12
// over alpha in [1.01, 20], q up to ~1e6.
double hurwitz_zeta(double alpha, double q);

// Convenience overload for integer support minima.
double hurwitz_zeta(double alpha, std::int64_t x0);

// ln Gamma(x) for x > 0; relative error <= 1e-13 away from the zeros of
// ln Gamma (x = 1, 2), absolute error at machine level there.
double log_gamma(double x);

// Complementary error function; absolute error <= 1e-14.
double erfc(double x);

// ln erfc(x), finite for large positive x where erfc underflows.
double log_erfc(double x);

// ln of sum_{k=start}^inf k^(-alpha) e^(-lambda k), i.e. the log of the
// exponentially damped zeta tail (a Lerch transcendent up to a prefactor).
// Working in log space keeps the result finite even when the sum itself
// under- or overflows double range; an overflowing sum comes back as +inf
// for the caller to reject.  Relative error on the sum is ~1e-13 for
// alpha in [0, ~30] and any lambda > 0.
double log_lerch_tail(double alpha, double lambda, std::int64_t start);

// Sum of term_fn(x) for x = start, start+1, ... where term_fn is
// non-negative and eventually non-increasing (a rise simply restarts the
// decay analysis from that point).  Terms are accumulated
// directly in chunks; at chunk boundaries the routine attempts to certify
// the remaining tail and returns once the certified truncation error falls
// below tol.rel_tol of the total.  Three certificates are recognised:
//   - term ratios non-increasing: the geometric bound t*r/(1-r);
//   - ratios rising concavely toward a limit below 1 (power-times-
//     exponential decay): the same bound at a cushioned extrapolation of
//     the ratio limit;
//   - asymptotically pure power decay t ~ C x^(-p), p > 1: completion of
//     the remainder with C*zeta(p, x+1), accepted while successive slope
//     estimates agree.
// Decay patterns outside these (heavy logarithmic corrections, irregular
// steps) raise non_convergence_error within tol.max_terms evaluations,
// carrying the partial sum and the best available tail bound; terms that
// stop decaying at all raise divergent_series_error.  An exactly-zero term
// ends the series, since monotonicity makes the remainder zero.
double truncated_tail_sum(const std::function<double(std::int64_t)>& term_fn,
                          std::int64_t start, const SeriesTolerance& tol = {});

}  // namespace tailfit

#endif
