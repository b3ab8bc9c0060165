#include "tailfit/select.hpp"

#include <algorithm>
#include <cmath>

#include "tailfit/errors.hpp"

namespace tailfit {

namespace {

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

// Per-point log-likelihood differences d_i = log p1 - log p2 over a
// histogram: returns (sum, population SD).
std::pair<double, double> lr_moments(const Histogram& tail, const Model& m1, const Model& m2) {
  std::size_t m = tail.value.size();
  std::vector<double> d(m);
  for (std::size_t j = 0; j < m; ++j) {
    d[j] = log_pmf(m1, tail.value[j]) - log_pmf(m2, tail.value[j]);
    if (!std::isfinite(d[j]))
      throw likelihood_error("vuong_test: non-finite log-likelihood difference at x=" +
                             std::to_string(tail.value[j]));
  }
  Kahan lr;
  for (std::size_t j = 0; j < m; ++j) lr.add(static_cast<double>(tail.count[j]) * d[j]);
  double n = static_cast<double>(tail.n);
  double mean = lr.value() / n;
  Kahan ss;
  for (std::size_t j = 0; j < m; ++j) {
    double dev = d[j] - mean;
    ss.add(static_cast<double>(tail.count[j]) * dev * dev);
  }
  return {lr.value(), std::sqrt(ss.value() / n)};
}

void check_shared_tail(const Histogram& tail, std::int64_t x0a, std::int64_t x0b,
                       const char* who) {
  if (x0a != x0b) throw domain_error(std::string(who) + ": models disagree on x0");
  if (tail.value.empty()) throw empty_tail_error(std::string(who) + ": empty tail");
  if (tail.value.front() < x0a) throw domain_error(std::string(who) + ": data below x0");
}

}  // namespace

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::power_law_favored: return "power_law_favored";
    case Verdict::alternative_favored: return "alternative_favored";
    case Verdict::indeterminate: return "indeterminate";
  }
  return "?";
}

ComparisonResult vuong_test(const Histogram& tail, const Model& m1, const Model& m2,
                            double threshold) {
  check_shared_tail(tail, support_min(m1), support_min(m2), "vuong_test");
  auto [lr, sigma] = lr_moments(tail, m1, m2);
  if (sigma == 0.0)
    throw indistinguishable_models_error("vuong_test: pointwise identical likelihoods");

  ComparisonResult r;
  r.alternative = family_of(m2);
  r.nested = false;
  r.lr = lr;
  r.sigma_lr = sigma;
  r.stat = lr / (sigma * std::sqrt(static_cast<double>(tail.n)));
  r.p_value = erfc(std::abs(r.stat) / kSqrt2);
  if (r.p_value < threshold)
    r.verdict = lr > 0.0 ? Verdict::power_law_favored : Verdict::alternative_favored;
  else
    r.verdict = Verdict::indeterminate;
  r.alt_model = m2;
  return r;
}

ComparisonResult nested_lr_test(const Histogram& tail, const PowerLaw& pl,
                                const PowerLawCutoff& cutoff, double threshold) {
  check_shared_tail(tail, pl.x0(), cutoff.x0(), "nested_lr_test");
  double ll_pl = log_likelihood(Model{pl}, tail);
  double ll_cut = log_likelihood(Model{cutoff}, tail);
  double stat = 2.0 * (ll_cut - ll_pl);
  if (stat < -1e-6)
    throw nesting_violation_error("nested_lr_test: cutoff fit dominated by the pure power law (2*dLL=" +
                                  std::to_string(stat) + ")");

  ComparisonResult r;
  r.alternative = Family::power_law_cutoff;
  r.nested = true;
  r.lr = ll_pl - ll_cut;
  r.sigma_lr = lr_moments(tail, Model{pl}, Model{cutoff}).second;
  r.stat = stat;
  // chi-squared(1) upper tail; clamp the tolerated sub-zero statistics
  r.p_value = erfc(std::sqrt(std::max(stat, 0.0) / 2.0));
  r.verdict = r.p_value < threshold ? Verdict::alternative_favored : Verdict::indeterminate;
  r.alt_model = Model{cutoff};
  return r;
}

std::vector<ComparisonResult> compare_all(const CountSample& sample, const PowerLawFit& fit,
                                          const FitOptions& opts, double threshold) {
  std::int64_t x0 = fit.model.x0();
  auto lo = std::lower_bound(sample.counts.begin(), sample.counts.end(), x0);
  Histogram tail = make_histogram(std::vector<std::int64_t>(lo, sample.counts.end()));
  Model pl{fit.model};

  static constexpr Family kOrder[] = {Family::exponential, Family::weibull, Family::log_normal,
                                      Family::tsallis,     Family::yule,    Family::power_law_cutoff};
  std::vector<ComparisonResult> rows;
  rows.reserve(6);
  for (Family fam : kOrder) {
    try {
      Model alt = fit_mle(fam, tail, x0, opts);
      if (fam == Family::power_law_cutoff)
        rows.push_back(nested_lr_test(tail, fit.model, std::get<PowerLawCutoff>(alt), threshold));
      else
        rows.push_back(vuong_test(tail, pl, alt, threshold));
    } catch (const error& e) {
      ComparisonResult r;
      r.alternative = fam;
      r.nested = fam == Family::power_law_cutoff;
      r.fitted = false;
      r.failure = e.what();
      rows.push_back(r);
    }
  }
  return rows;
}

}  // namespace tailfit
