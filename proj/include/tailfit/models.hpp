#ifndef TAILFIT_MODELS_HPP
#define TAILFIT_MODELS_HPP

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "tailfit/rng.hpp"
#include "tailfit/specfun.hpp"

namespace tailfit {

enum class Family {
  power_law,
  exponential,
  weibull,
  log_normal,
  tsallis,
  yule,
  power_law_cutoff,
};

const char* family_name(Family f);

// A multiset of integer observations compressed to (value, count) pairs with
// values strictly ascending.  Log-likelihoods are accumulated over distinct
// values so that duplicating a sample scales them exactly.
struct Histogram {
  std::vector<std::int64_t> value;
  std::vector<std::int64_t> count;
  std::int64_t n = 0;
};

Histogram make_histogram(std::vector<std::int64_t> data);  // copies, sorts, compresses

// --- Families -------------------------------------------------------------
// All pmfs live on the integers x >= x0 and sum to 1 there.  Construction
// validates parameters and precomputes the normalizer; objects are immutable.

class PowerLaw {
public:
  PowerLaw(double alpha, std::int64_t x0);
  double alpha() const { return alpha_; }
  std::int64_t x0() const { return x0_; }
  double log_pmf(std::int64_t x) const;
  double ccdf(std::int64_t x) const;

private:
  double alpha_;
  std::int64_t x0_;
  double zeta_x0_;
  double log_zeta_x0_;
};

class Exponential {
public:
  Exponential(double lambda, std::int64_t x0);
  double lambda() const { return lambda_; }
  std::int64_t x0() const { return x0_; }
  double log_pmf(std::int64_t x) const;
  double ccdf(std::int64_t x) const;

private:
  double lambda_;
  std::int64_t x0_;
  double log_norm_;  // ln(1 - e^{-lambda})
};

// Discrete Weibull (stretched exponential), pmf
// (q^{x^beta} - q^{(x+1)^beta}) / q^{x0^beta}; the normalizer telescopes.
class Weibull {
public:
  Weibull(double q, double beta, std::int64_t x0);
  double q() const { return q_; }
  double beta() const { return beta_; }
  std::int64_t x0() const { return x0_; }
  double log_pmf(std::int64_t x) const;
  double ccdf(std::int64_t x) const;

private:
  double exponent(std::int64_t x) const;  // x^beta * ln q, clamped to -inf on overflow
  double q_;
  double beta_;
  double log_q_;
  std::int64_t x0_;
  double a_x0_;  // exponent(x0)
};

// Log-normal discretized by rounding: pmf(x) is the continuous mass over
// [x - 1/2, x + 1/2) divided by the tail mass over [x0 - 1/2, inf).  The
// continuous-density-at-integers variant that some tables print is kept as a
// compatibility option for log_pmf; ccdf and sampling always use the rounding
// construction.
class LogNormal {
public:
  enum class Variant { rounded, printed_density };

  LogNormal(double mu, double sigma, std::int64_t x0, Variant variant = Variant::rounded);
  double mu() const { return mu_; }
  double sigma() const { return sigma_; }
  std::int64_t x0() const { return x0_; }
  Variant variant() const { return variant_; }
  double log_pmf(std::int64_t x) const;
  double ccdf(std::int64_t x) const;

private:
  double log_tail_q(double t) const;  // ln P(X_cont >= t)
  double mu_;
  double sigma_;
  std::int64_t x0_;
  Variant variant_;
  double log_tail_x0_;  // ln P(X_cont >= x0 - 1/2)
};

// Discrete Tsallis (q-exponential) pmf proportional to (1 + x/sigma)^{-theta-1}.
// The tail sums telescope into Hurwitz zetas once the sigma powers cancel:
// sum_{k>=x} (1 + k/sigma)^{-theta-1} = sigma^{theta+1} zeta(theta+1, sigma+x).
class Tsallis {
public:
  Tsallis(double sigma, double theta, std::int64_t x0);
  double sigma() const { return sigma_; }
  double theta() const { return theta_; }
  std::int64_t x0() const { return x0_; }
  double log_pmf(std::int64_t x) const;
  double ccdf(std::int64_t x) const;

private:
  double sigma_;
  double theta_;
  std::int64_t x0_;
  double zeta_x0_;      // zeta(theta+1, sigma+x0)
  double log_zeta_x0_;
};

class Yule {
public:
  Yule(double alpha, std::int64_t x0);
  double alpha() const { return alpha_; }
  std::int64_t x0() const { return x0_; }
  double log_pmf(std::int64_t x) const;
  double ccdf(std::int64_t x) const;

private:
  double alpha_;
  std::int64_t x0_;
  double log_const_;  // ln(alpha-1) + lnG(x0+alpha-1) - lnG(x0)
  double tail_ref_;   // lnG(x0) - lnG(x0+alpha-1)
};

// Power law with exponential cutoff, pmf proportional to x^{-alpha} e^{-lambda x}.
// alpha may be as low as 0 because lambda > 0 restores normalizability.
// Normalizer and tail sums come from log_lerch_tail, so arbitrarily small
// lambda works and the nested power-law limit is reachable.
class PowerLawCutoff {
public:
  PowerLawCutoff(double alpha, double lambda, std::int64_t x0);
  double alpha() const { return alpha_; }
  double lambda() const { return lambda_; }
  std::int64_t x0() const { return x0_; }
  double log_pmf(std::int64_t x) const;
  double ccdf(std::int64_t x) const;

private:
  double alpha_;
  double lambda_;
  std::int64_t x0_;
  double log_norm_;  // ln sum_{k>=x0} k^{-alpha} e^{-lambda k}
};

using Model = std::variant<PowerLaw, Exponential, Weibull, LogNormal, Tsallis, Yule, PowerLawCutoff>;

Family family_of(const Model& m);
std::int64_t support_min(const Model& m);
double log_pmf(const Model& m, std::int64_t x);
double pmf(const Model& m, std::int64_t x);
double ccdf(const Model& m, std::int64_t x);
std::string describe(const Model& m);  // family plus parameters, for diagnostics

// Tail log-likelihood sum over a histogram; -inf when any point has zero mass.
double log_likelihood(const Model& m, const Histogram& h);

// --- Sampling ---------------------------------------------------------------
// Exact inverse transform on the CCDF.  A cached CCDF table over
// [x0, x0 + len) is extended by doubling when a draw lands deeper in the
// tail; the variate is the smallest x with CCDF(x) < u, minus one.
class ModelSampler {
public:
  explicit ModelSampler(Model m);
  std::int64_t draw(engine& e);

private:
  void extend();
  std::int64_t draw_beyond_table(double u) const;
  Model model_;
  std::int64_t x0_;
  std::vector<double> ccdf_;
  bool saturated_ = false;  // table already reaches an exact-zero ccdf
};

std::vector<std::int64_t> sample(const Model& m, std::size_t n, std::uint64_t seed);

// --- Maximum likelihood -----------------------------------------------------

struct FitOptions {
  double alpha_lo = 1.01;   // 1-D search interval for power law and Yule
  double alpha_hi = 20.0;
  double alpha_tol = 1e-6;
  double lambda_lo = 1e-8;  // exponential rate search interval
  double lambda_hi = 50.0;
  SeriesTolerance series;
  int simplex_max_iter = 800;
  double simplex_ftol = 1e-10;
  double simplex_xtol = 1e-7;
};

// Shared by fit_mle and the cutoff scan: argmax of the power-law tail
// log-likelihood -n ln zeta(alpha, x0) - alpha * sum_log given the sufficient
// statistics.
double power_law_alpha_mle(double sum_log, std::int64_t n, std::int64_t x0,
                           const FitOptions& opts);

Model fit_mle(Family family, const Histogram& tail, std::int64_t x0, const FitOptions& opts = {});
Model fit_mle(Family family, const std::vector<std::int64_t>& tail, std::int64_t x0,
              const FitOptions& opts = {});

}  // namespace tailfit

#endif
