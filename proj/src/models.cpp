#include "tailfit/models.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "tailfit/errors.hpp"
#include "tailfit/optimize.hpp"

namespace tailfit {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSqrt2 = 1.4142135623730951;

struct Kahan {
  double sum = 0.0;
  double c = 0.0;
  void add(double v) {
    double y = v - c;
    double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum; }
};

void check_support(std::int64_t x, std::int64_t x0, const char* who) {
  if (x < x0) throw domain_error(std::string(who) + ": x below the support minimum");
}

void check_x0(std::int64_t x0, const char* who) {
  if (x0 < 1) throw invalid_model_error(std::string(who) + ": requires x0 >= 1");
}

}  // namespace

const char* family_name(Family f) {
  switch (f) {
    case Family::power_law: return "power_law";
    case Family::exponential: return "exponential";
    case Family::weibull: return "weibull";
    case Family::log_normal: return "log_normal";
    case Family::tsallis: return "tsallis";
    case Family::yule: return "yule";
    case Family::power_law_cutoff: return "power_law_cutoff";
  }
  return "?";
}

Histogram make_histogram(std::vector<std::int64_t> data) {
  std::sort(data.begin(), data.end());
  Histogram h;
  h.n = static_cast<std::int64_t>(data.size());
  for (std::size_t i = 0; i < data.size();) {
    std::size_t j = i;
    while (j < data.size() && data[j] == data[i]) ++j;
    h.value.push_back(data[i]);
    h.count.push_back(static_cast<std::int64_t>(j - i));
    i = j;
  }
  return h;
}

// --- PowerLaw ---------------------------------------------------------------

PowerLaw::PowerLaw(double alpha, std::int64_t x0) : alpha_(alpha), x0_(x0) {
  check_x0(x0, "PowerLaw");
  if (!std::isfinite(alpha) || alpha <= 1.0)
    throw invalid_model_error("PowerLaw: requires alpha > 1");
  zeta_x0_ = hurwitz_zeta(alpha_, x0_);
  log_zeta_x0_ = std::log(zeta_x0_);
}

double PowerLaw::log_pmf(std::int64_t x) const {
  check_support(x, x0_, "PowerLaw::log_pmf");
  return -alpha_ * std::log(static_cast<double>(x)) - log_zeta_x0_;
}

double PowerLaw::ccdf(std::int64_t x) const {
  check_support(x, x0_, "PowerLaw::ccdf");
  return hurwitz_zeta(alpha_, x) / zeta_x0_;
}

// --- Exponential ------------------------------------------------------------

Exponential::Exponential(double lambda, std::int64_t x0) : lambda_(lambda), x0_(x0) {
  check_x0(x0, "Exponential");
  if (!std::isfinite(lambda) || lambda <= 0.0)
    throw invalid_model_error("Exponential: requires lambda > 0");
  log_norm_ = std::log(-std::expm1(-lambda_));
}

double Exponential::log_pmf(std::int64_t x) const {
  check_support(x, x0_, "Exponential::log_pmf");
  return log_norm_ + lambda_ * static_cast<double>(x0_ - x);
}

double Exponential::ccdf(std::int64_t x) const {
  check_support(x, x0_, "Exponential::ccdf");
  return std::exp(lambda_ * static_cast<double>(x0_ - x));
}

// --- Weibull ----------------------------------------------------------------

Weibull::Weibull(double q, double beta, std::int64_t x0) : q_(q), beta_(beta), x0_(x0) {
  check_x0(x0, "Weibull");
  if (!std::isfinite(q) || q <= 0.0 || q >= 1.0)
    throw invalid_model_error("Weibull: requires q in (0, 1)");
  if (!std::isfinite(beta) || beta <= 0.0) throw invalid_model_error("Weibull: requires beta > 0");
  log_q_ = std::log(q_);
  a_x0_ = exponent(x0_);
}

double Weibull::exponent(std::int64_t x) const {
  // x^beta * ln q computed in log space; clamps to -inf once x^beta overflows.
  double le = beta_ * std::log(static_cast<double>(x)) + std::log(-log_q_);
  if (le > 700.0) return kNegInf;
  return -std::exp(le);
}

double Weibull::log_pmf(std::int64_t x) const {
  check_support(x, x0_, "Weibull::log_pmf");
  double ax = exponent(x);
  if (ax == kNegInf) return kNegInf;
  double d = exponent(x + 1) - ax;  // <= 0; -inf when q^{(x+1)^beta} underflows
  double inc = (d == kNegInf) ? 0.0 : std::log(-std::expm1(d));
  return ax + inc - a_x0_;
}

double Weibull::ccdf(std::int64_t x) const {
  check_support(x, x0_, "Weibull::ccdf");
  return std::exp(exponent(x) - a_x0_);
}

// --- LogNormal --------------------------------------------------------------

LogNormal::LogNormal(double mu, double sigma, std::int64_t x0, Variant variant)
    : mu_(mu), sigma_(sigma), x0_(x0), variant_(variant) {
  check_x0(x0, "LogNormal");
  if (!std::isfinite(mu)) throw invalid_model_error("LogNormal: requires finite mu");
  if (!std::isfinite(sigma) || sigma <= 0.0)
    throw invalid_model_error("LogNormal: requires sigma > 0");
  log_tail_x0_ = log_tail_q(static_cast<double>(x0_) - 0.5);
}

double LogNormal::log_tail_q(double t) const {
  double z = (std::log(t) - mu_) / sigma_;
  return std::log(0.5) + log_erfc(z / kSqrt2);
}

double LogNormal::log_pmf(std::int64_t x) const {
  check_support(x, x0_, "LogNormal::log_pmf");
  double xl = static_cast<double>(x) - 0.5;
  double xr = static_cast<double>(x) + 0.5;
  if (variant_ == Variant::printed_density) {
    double z = (std::log(static_cast<double>(x)) - mu_) / sigma_;
    return 0.5 * std::log(2.0 / (M_PI * sigma_ * sigma_)) -
           log_erfc((std::log(static_cast<double>(x0_)) - mu_) / (kSqrt2 * sigma_)) -
           std::log(static_cast<double>(x)) - 0.5 * z * z;
  }
  double zr = (std::log(xr) - mu_) / sigma_;
  double mass;
  if (zr <= 0.0) {
    // left of the median: work with lower-tail masses, which are the small ones
    double lfl = std::log(0.5) + log_erfc(-(std::log(xl) - mu_) / (sigma_ * kSqrt2));
    double lfr = std::log(0.5) + log_erfc(-zr / kSqrt2);
    double d = lfl - lfr;
    mass = (d == kNegInf) ? lfr : lfr + std::log(-std::expm1(d));
  } else {
    double lql = log_tail_q(xl);
    double lqr = log_tail_q(xr);
    double d = lqr - lql;
    mass = (d == kNegInf) ? lql : lql + std::log(-std::expm1(d));
  }
  return mass - log_tail_x0_;
}

double LogNormal::ccdf(std::int64_t x) const {
  check_support(x, x0_, "LogNormal::ccdf");
  return std::exp(log_tail_q(static_cast<double>(x) - 0.5) - log_tail_x0_);
}

// --- Tsallis ----------------------------------------------------------------

Tsallis::Tsallis(double sigma, double theta, std::int64_t x0)
    : sigma_(sigma), theta_(theta), x0_(x0) {
  check_x0(x0, "Tsallis");
  if (!std::isfinite(sigma) || sigma <= 0.0)
    throw invalid_model_error("Tsallis: requires sigma > 0");
  if (!std::isfinite(theta) || theta <= 0.0)
    throw invalid_model_error("Tsallis: requires theta > 0");
  zeta_x0_ = hurwitz_zeta(theta_ + 1.0, sigma_ + static_cast<double>(x0_));
  log_zeta_x0_ = std::log(zeta_x0_);
  // zeta under/overflows double range for extreme theta or sigma even though
  // each pmf value would be fine; reject those corners rather than mislead.
  if (!std::isfinite(log_zeta_x0_))
    throw invalid_model_error("Tsallis: normalizer is not representable");
}

double Tsallis::log_pmf(std::int64_t x) const {
  check_support(x, x0_, "Tsallis::log_pmf");
  // (1+x/sigma)^{-theta-1} / (sigma^{theta+1} zeta) with the sigma powers folded in
  return -(theta_ + 1.0) * std::log(sigma_ + static_cast<double>(x)) - log_zeta_x0_;
}

double Tsallis::ccdf(std::int64_t x) const {
  check_support(x, x0_, "Tsallis::ccdf");
  if (x == x0_) return 1.0;
  return hurwitz_zeta(theta_ + 1.0, sigma_ + static_cast<double>(x)) / zeta_x0_;
}

// --- Yule -------------------------------------------------------------------

Yule::Yule(double alpha, std::int64_t x0) : alpha_(alpha), x0_(x0) {
  check_x0(x0, "Yule");
  if (!std::isfinite(alpha) || alpha <= 1.0) throw invalid_model_error("Yule: requires alpha > 1");
  double x0d = static_cast<double>(x0_);
  log_const_ = std::log(alpha_ - 1.0) + log_gamma(x0d + alpha_ - 1.0) - log_gamma(x0d);
  tail_ref_ = log_gamma(x0d + alpha_ - 1.0) - log_gamma(x0d);
}

double Yule::log_pmf(std::int64_t x) const {
  check_support(x, x0_, "Yule::log_pmf");
  double xd = static_cast<double>(x);
  return log_const_ + log_gamma(xd) - log_gamma(xd + alpha_);
}

double Yule::ccdf(std::int64_t x) const {
  // sum_{k>=x} G(k)/G(k+a) telescopes to G(x)/((a-1) G(x+a-1))
  check_support(x, x0_, "Yule::ccdf");
  double xd = static_cast<double>(x);
  return std::exp(log_gamma(xd) - log_gamma(xd + alpha_ - 1.0) + tail_ref_);
}

// --- PowerLawCutoff ---------------------------------------------------------

PowerLawCutoff::PowerLawCutoff(double alpha, double lambda, std::int64_t x0)
    : alpha_(alpha), lambda_(lambda), x0_(x0) {
  check_x0(x0, "PowerLawCutoff");
  if (!std::isfinite(alpha) || alpha < 0.0 || alpha > 20.0)
    throw invalid_model_error("PowerLawCutoff: requires alpha in [0, 20]");
  if (!std::isfinite(lambda) || lambda <= 0.0)
    throw invalid_model_error("PowerLawCutoff: requires lambda > 0");
  log_norm_ = log_lerch_tail(alpha_, lambda_, x0_);
  // +inf here means the sum itself overflows double range (lambda below
  // ~1e-305 with small alpha); no parameterization fix can represent that.
  if (!std::isfinite(log_norm_))
    throw invalid_model_error("PowerLawCutoff: normalizer is not representable");
}

double PowerLawCutoff::log_pmf(std::int64_t x) const {
  check_support(x, x0_, "PowerLawCutoff::log_pmf");
  double xd = static_cast<double>(x);
  return -alpha_ * std::log(xd) - lambda_ * xd - log_norm_;
}

double PowerLawCutoff::ccdf(std::int64_t x) const {
  check_support(x, x0_, "PowerLawCutoff::ccdf");
  if (x == x0_) return 1.0;
  return std::exp(log_lerch_tail(alpha_, lambda_, x) - log_norm_);
}

// --- Generic dispatch -------------------------------------------------------

Family family_of(const Model& m) {
  return std::visit(
      [](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, PowerLaw>) return Family::power_law;
        if constexpr (std::is_same_v<T, Exponential>) return Family::exponential;
        if constexpr (std::is_same_v<T, Weibull>) return Family::weibull;
        if constexpr (std::is_same_v<T, LogNormal>) return Family::log_normal;
        if constexpr (std::is_same_v<T, Tsallis>) return Family::tsallis;
        if constexpr (std::is_same_v<T, Yule>) return Family::yule;
        return Family::power_law_cutoff;
      },
      m);
}

std::int64_t support_min(const Model& m) {
  return std::visit([](const auto& v) { return v.x0(); }, m);
}

double log_pmf(const Model& m, std::int64_t x) {
  return std::visit([x](const auto& v) { return v.log_pmf(x); }, m);
}

double pmf(const Model& m, std::int64_t x) { return std::exp(log_pmf(m, x)); }

double ccdf(const Model& m, std::int64_t x) {
  return std::visit([x](const auto& v) { return v.ccdf(x); }, m);
}

std::string describe(const Model& m) {
  char buf[160];
  std::visit(
      [&buf](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, PowerLaw>)
          std::snprintf(buf, sizeof buf, "power_law(alpha=%.12g, x0=%lld)", v.alpha(),
                        static_cast<long long>(v.x0()));
        else if constexpr (std::is_same_v<T, Exponential>)
          std::snprintf(buf, sizeof buf, "exponential(lambda=%.12g, x0=%lld)", v.lambda(),
                        static_cast<long long>(v.x0()));
        else if constexpr (std::is_same_v<T, Weibull>)
          std::snprintf(buf, sizeof buf, "weibull(q=%.12g, beta=%.12g, x0=%lld)", v.q(), v.beta(),
                        static_cast<long long>(v.x0()));
        else if constexpr (std::is_same_v<T, LogNormal>)
          std::snprintf(buf, sizeof buf, "log_normal(mu=%.12g, sigma=%.12g, x0=%lld)", v.mu(),
                        v.sigma(), static_cast<long long>(v.x0()));
        else if constexpr (std::is_same_v<T, Tsallis>)
          std::snprintf(buf, sizeof buf, "tsallis(sigma=%.12g, theta=%.12g, x0=%lld)", v.sigma(),
                        v.theta(), static_cast<long long>(v.x0()));
        else if constexpr (std::is_same_v<T, Yule>)
          std::snprintf(buf, sizeof buf, "yule(alpha=%.12g, x0=%lld)", v.alpha(),
                        static_cast<long long>(v.x0()));
        else
          std::snprintf(buf, sizeof buf, "power_law_cutoff(alpha=%.12g, lambda=%.12g, x0=%lld)",
                        v.alpha(), v.lambda(), static_cast<long long>(v.x0()));
      },
      m);
  return buf;
}

double log_likelihood(const Model& m, const Histogram& h) {
  Kahan ll;
  for (std::size_t i = 0; i < h.value.size(); ++i) {
    double lp = log_pmf(m, h.value[i]);
    if (!std::isfinite(lp)) return kNegInf;
    ll.add(static_cast<double>(h.count[i]) * lp);
  }
  return ll.value();
}

// --- Sampling ---------------------------------------------------------------

namespace {

constexpr std::size_t kMaxTable = std::size_t{1} << 22;

}  // namespace

ModelSampler::ModelSampler(Model m) : model_(std::move(m)), x0_(support_min(model_)) {
  ccdf_.reserve(64);
  ccdf_.push_back(1.0);
  extend();
}

void ModelSampler::extend() {
  std::size_t target = std::max<std::size_t>(ccdf_.size() * 2, 64);
  if (target > kMaxTable) target = kMaxTable;
  while (ccdf_.size() < target) {
    std::int64_t x = x0_ + static_cast<std::int64_t>(ccdf_.size());
    double v = ccdf(model_, x);
    // clamp: independent tail evaluations may wobble by an ulp
    v = std::min(v, ccdf_.back());
    ccdf_.push_back(v);
    if (v == 0.0) {
      saturated_ = true;
      return;
    }
  }
  if (ccdf_.size() >= kMaxTable) saturated_ = true;
}

std::int64_t ModelSampler::draw_beyond_table(double u) const {
  // Doubling bracket then bisection for the smallest x with CCDF(x) < u.
  std::int64_t lo = x0_ + static_cast<std::int64_t>(ccdf_.size()) - 1;  // CCDF(lo) >= u
  std::int64_t span = 1;
  std::int64_t hi = lo + span;
  while (ccdf(model_, hi) >= u) {
    lo = hi;
    span *= 2;
    hi = lo + span;
  }
  while (hi - lo > 1) {
    std::int64_t mid = lo + (hi - lo) / 2;
    if (ccdf(model_, mid) >= u)
      lo = mid;
    else
      hi = mid;
  }
  return hi - 1;
}

std::int64_t ModelSampler::draw(engine& e) {
  double u = uniform_open(e);
  while (!saturated_ && ccdf_.back() >= u) extend();
  if (ccdf_.back() >= u && ccdf_.size() >= kMaxTable) return draw_beyond_table(u);
  // first index with ccdf < u; index 0 holds 1.0 > u, so the result is >= 1
  auto it = std::partition_point(ccdf_.begin(), ccdf_.end(), [u](double c) { return c >= u; });
  return x0_ + static_cast<std::int64_t>(it - ccdf_.begin()) - 1;
}

std::vector<std::int64_t> sample(const Model& m, std::size_t n, std::uint64_t seed) {
  engine e = make_engine(seed);
  ModelSampler s(m);
  std::vector<std::int64_t> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(s.draw(e));
  return out;
}

// --- Maximum likelihood -----------------------------------------------------

namespace {

struct TailStats {
  double sum_log = 0.0;   // sum of count * ln(value)
  double sum_val = 0.0;   // sum of count * value
  double mean = 0.0;
  double mean_log = 0.0;
  double sd_log = 0.0;
  std::int64_t max_val = 0;
};

TailStats tail_stats(const Histogram& h) {
  TailStats s;
  Kahan slog, sval;
  for (std::size_t i = 0; i < h.value.size(); ++i) {
    double c = static_cast<double>(h.count[i]);
    slog.add(c * std::log(static_cast<double>(h.value[i])));
    sval.add(c * static_cast<double>(h.value[i]));
  }
  s.sum_log = slog.value();
  s.sum_val = sval.value();
  double n = static_cast<double>(h.n);
  s.mean = s.sum_val / n;
  s.mean_log = s.sum_log / n;
  Kahan var;
  for (std::size_t i = 0; i < h.value.size(); ++i) {
    double d = std::log(static_cast<double>(h.value[i])) - s.mean_log;
    var.add(static_cast<double>(h.count[i]) * d * d);
  }
  s.sd_log = std::sqrt(var.value() / n);
  s.max_val = h.value.back();
  return s;
}

void validate_tail(const Histogram& h, std::int64_t x0) {
  if (h.value.empty()) throw empty_tail_error("fit_mle: empty tail");
  if (x0 < 1) throw domain_error("fit_mle: requires x0 >= 1");
  if (h.value.front() < x0) throw domain_error("fit_mle: data below x0");
}

double logit(double p) { return std::log(p / (1.0 - p)); }
double sigmoid(double t) { return 1.0 / (1.0 + std::exp(-t)); }

// Multistart Nelder-Mead over a transformed 2-parameter space.  Tracks the
// best point ever evaluated; reports fit_error when no start converges.
struct SimplexFit {
  std::vector<double> t;
  double ll;
};

SimplexFit run_multistart(const std::function<double(const std::vector<double>&)>& loglik,
                          const std::vector<std::vector<double>>& starts, const FitOptions& opts,
                          const char* family) {
  double best_ll = kNegInf;
  std::vector<double> best_t;
  auto neg = [&](const std::vector<double>& t) {
    double ll = loglik(t);
    if (std::isfinite(ll) && ll > best_ll) {
      best_ll = ll;
      best_t = t;
    }
    return -ll;
  };
  bool converged = false;
  for (const auto& s : starts) {
    SimplexResult r = nelder_mead_minimize(neg, s, 0.35, opts.simplex_ftol, opts.simplex_xtol,
                                           opts.simplex_max_iter);
    if (r.converged && std::isfinite(r.f)) converged = true;
  }
  if (!converged || best_t.empty()) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "fit_mle(%s): no start converged", family);
    throw fit_error(buf, best_ll,
                    best_t.empty() ? "none" : std::to_string(best_t[0]) + "," +
                                                  std::to_string(best_t[1]));
  }
  return {best_t, best_ll};
}

std::vector<std::vector<double>> with_jitters(const std::vector<double>& base) {
  static const double offs[4][2] = {{0.6, 0.0}, {0.0, 0.6}, {-0.6, 0.45}, {0.45, -0.6}};
  std::vector<std::vector<double>> starts{base};
  for (const auto& o : offs) starts.push_back({base[0] + o[0], base[1] + o[1]});
  return starts;
}

}  // namespace

double power_law_alpha_mle(double sum_log, std::int64_t n, std::int64_t x0,
                           const FitOptions& opts) {
  double nd = static_cast<double>(n);
  auto ll = [&](double a) { return -nd * std::log(hurwitz_zeta(a, x0)) - a * sum_log; };
  return brent_maximize(ll, opts.alpha_lo, opts.alpha_hi, opts.alpha_tol);
}

Model fit_mle(Family family, const Histogram& tail, std::int64_t x0, const FitOptions& opts) {
  validate_tail(tail, x0);
  const bool multi = family == Family::weibull || family == Family::log_normal ||
                     family == Family::tsallis || family == Family::power_law_cutoff;
  if (tail.value.size() == 1 && tail.value.front() == x0)
    throw degenerate_data_error("fit_mle: all points equal x0, likelihood unbounded");
  if (multi && tail.value.size() < 2)
    throw degenerate_data_error("fit_mle: need at least 2 distinct values");

  TailStats st = tail_stats(tail);
  double nd = static_cast<double>(tail.n);

  switch (family) {
    case Family::power_law:
      return PowerLaw(power_law_alpha_mle(st.sum_log, tail.n, x0, opts), x0);

    case Family::exponential: {
      double shift = nd * static_cast<double>(x0) - st.sum_val;
      auto ll = [&](double lam) { return nd * std::log(-std::expm1(-lam)) + lam * shift; };
      double lam = brent_maximize(ll, opts.lambda_lo, opts.lambda_hi, 1e-9 + 1e-7 * opts.alpha_tol);
      return Exponential(lam, x0);
    }

    case Family::yule: {
      double x0d = static_cast<double>(x0);
      auto ll = [&](double a) {
        Kahan s;
        for (std::size_t i = 0; i < tail.value.size(); ++i) {
          double v = static_cast<double>(tail.value[i]);
          s.add(static_cast<double>(tail.count[i]) * (log_gamma(v) - log_gamma(v + a)));
        }
        return nd * (std::log(a - 1.0) + log_gamma(x0d + a - 1.0) - log_gamma(x0d)) + s.value();
      };
      return Yule(brent_maximize(ll, opts.alpha_lo, opts.alpha_hi, opts.alpha_tol), x0);
    }

    case Family::weibull: {
      auto obj = [&](const std::vector<double>& t) {
        if (std::abs(t[0]) > 40.0 || std::abs(t[1]) > 40.0) return kNegInf;
        try {
          return log_likelihood(Weibull(sigmoid(t[0]), std::exp(t[1]), x0), tail);
        } catch (const error&) {
          return kNegInf;
        }
      };
      double q0 = std::exp(-1.0 / st.mean);
      SimplexFit r = run_multistart(obj, with_jitters({logit(q0), 0.0}), opts, "weibull");
      return Weibull(sigmoid(r.t[0]), std::exp(r.t[1]), x0);
    }

    case Family::log_normal: {
      auto obj = [&](const std::vector<double>& t) {
        if (std::abs(t[0]) > 60.0 || std::abs(t[1]) > 40.0) return kNegInf;
        try {
          return log_likelihood(LogNormal(t[0], std::exp(t[1]), x0), tail);
        } catch (const error&) {
          return kNegInf;
        }
      };
      double s0 = std::max(st.sd_log, 1e-2);
      SimplexFit r = run_multistart(obj, with_jitters({st.mean_log, std::log(s0)}), opts,
                                    "log_normal");
      return LogNormal(r.t[0], std::exp(r.t[1]), x0);
    }

    case Family::tsallis: {
      auto obj = [&](const std::vector<double>& t) {
        if (std::abs(t[0]) > 40.0 || std::abs(t[1]) > 40.0) return kNegInf;
        try {
          return log_likelihood(Tsallis(std::exp(t[0]), std::exp(t[1]), x0), tail);
        } catch (const error&) {
          return kNegInf;
        }
      };
      SimplexFit r =
          run_multistart(obj, with_jitters({std::log(st.mean), std::log(2.0)}), opts, "tsallis");
      return Tsallis(std::exp(r.t[0]), std::exp(r.t[1]), x0);
    }

    case Family::power_law_cutoff: {
      auto obj = [&](const std::vector<double>& t) {
        if (std::abs(t[0]) > 40.0 || t[1] > 40.0 || t[1] < -80.0) return kNegInf;
        try {
          return log_likelihood(PowerLawCutoff(20.0 * sigmoid(t[0]), std::exp(t[1]), x0), tail);
        } catch (const error&) {
          return kNegInf;
        }
      };
      double a_pl = power_law_alpha_mle(st.sum_log, tail.n, x0, opts);
      double t0 = logit(std::clamp(a_pl, 0.05, 19.95) / 20.0);
      auto starts = with_jitters({t0, std::log(1.0 / static_cast<double>(st.max_val))});
      // extra start at the pure-power-law boundary so the nested comparison
      // can always reach the lambda -> 0 likelihood plateau
      starts.push_back({t0, std::log(1e-12)});
      SimplexFit r = run_multistart(obj, starts, opts, "power_law_cutoff");
      return PowerLawCutoff(20.0 * sigmoid(r.t[0]), std::exp(r.t[1]), x0);
    }
  }
  throw domain_error("fit_mle: unknown family");
}

Model fit_mle(Family family, const std::vector<std::int64_t>& tail, std::int64_t x0,
              const FitOptions& opts) {
  return fit_mle(family, make_histogram(tail), x0, opts);
}

}  // namespace tailfit
