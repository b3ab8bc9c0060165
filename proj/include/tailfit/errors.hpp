#ifndef TAILFIT_ERRORS_HPP
#define TAILFIT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tailfit {

// Base class for everything thrown by this library.
class error : public std::runtime_error {
public:
  explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// Argument outside the mathematical domain of a function (x <= 0, alpha <= 1, ...).
class domain_error : public error {
public:
  using error::error;
};

// A series whose sum does not exist for the given parameters.
class divergent_series_error : public error {
public:
  using error::error;
};

// Series truncation could not be certified within the term budget.
// Carries the partial sum and the best available bound on the missing tail.
class non_convergence_error : public error {
public:
  non_convergence_error(const std::string& msg, double partial_sum, double tail_bound)
      : error(msg), partial_sum(partial_sum), tail_bound(tail_bound) {}
  double partial_sum;
  double tail_bound;
};

// Model parameters outside their legal range.
class invalid_model_error : public error {
public:
  using error::error;
};

// Data that makes the requested estimate meaningless (e.g. all points equal
// to the support minimum, so the likelihood has no interior maximum).
class degenerate_data_error : public error {
public:
  using error::error;
};

// Maximum-likelihood search failed to converge from every start.
// best_ll / best_params describe the best point seen, for diagnostics.
class fit_error : public error {
public:
  fit_error(const std::string& msg, double best_ll, std::string best_params)
      : error(msg), best_ll(best_ll), best_params(std::move(best_params)) {}
  double best_ll;
  std::string best_params;
};

class empty_tail_error : public error {
public:
  using error::error;
};

// No cutoff candidate leaves a tail of the required minimum size.
class insufficient_tail_error : public error {
public:
  using error::error;
};

// More than half of the bootstrap replicates failed to produce a fit.
class bootstrap_failure_error : public error {
public:
  using error::error;
};

// More than 10% of goodness-of-fit synthetic replicates failed to refit.
class gof_failure_error : public error {
public:
  using error::error;
};

// Model comparison where the two likelihoods coincide pointwise.
class indistinguishable_models_error : public error {
public:
  using error::error;
};

// A log-likelihood turned out NaN/-inf on actual data.
class likelihood_error : public error {
public:
  using error::error;
};

// Nested comparison where the wider family fit worse than numerically allowed.
class nesting_violation_error : public error {
public:
  using error::error;
};

// Input file problems; line is 1-based, 0 when not applicable.
class parse_error : public error {
public:
  parse_error(const std::string& msg, std::size_t line) : error(msg), line(line) {}
  std::size_t line;
};

class config_error : public error {
public:
  using error::error;
};

class io_error : public error {
public:
  using error::error;
};

}  // namespace tailfit

#endif
