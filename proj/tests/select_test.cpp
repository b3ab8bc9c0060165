#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <tailfit/errors.hpp>
#include <tailfit/select.hpp>

using namespace tailfit;

namespace {

Histogram quadruple(const Histogram& h) {
  Histogram out = h;
  for (auto& c : out.count) c *= 4;
  out.n = h.n * 4;
  return out;
}

}  // namespace

TEST_CASE("vuong test on a hand-computed histogram") {
  Histogram tail = make_histogram({1, 1, 1, 2});
  Model pl = PowerLaw(2.0, 1);
  Model ex = Exponential(std::log(2.0), 1);
  ComparisonResult r = vuong_test(tail, pl, ex);

  double d1 = log_pmf(pl, 1) - log_pmf(ex, 1);
  double d2 = log_pmf(pl, 2) - log_pmf(ex, 2);
  double lr = 3.0 * d1 + d2;
  double mean = lr / 4.0;
  double sigma =
      std::sqrt((3.0 * (d1 - mean) * (d1 - mean) + (d2 - mean) * (d2 - mean)) / 4.0);
  double stat = lr / (sigma * 2.0);

  CHECK(r.alternative == Family::exponential);
  CHECK(!r.nested);
  CHECK(r.fitted);
  CHECK(std::fabs(r.lr - lr) < 1e-12);
  CHECK(std::fabs(r.sigma_lr - sigma) < 1e-12);
  CHECK(std::fabs(r.stat - stat) < 1e-12);
  CHECK(std::fabs(r.p_value - tailfit::erfc(std::fabs(stat) / std::sqrt(2.0))) < 1e-12);
}

TEST_CASE("vuong test is antisymmetric") {
  Histogram tail = make_histogram(sample(Model(PowerLaw(2.3, 1)), 4000, 61));
  Model pl = PowerLaw(2.3, 1);
  Model alt = LogNormal(0.5, 1.5, 1);
  ComparisonResult f = vuong_test(tail, pl, alt);
  ComparisonResult b = vuong_test(tail, alt, pl);
  CHECK(f.lr == -b.lr);
  CHECK(f.sigma_lr == b.sigma_lr);
  CHECK(f.stat == -b.stat);
  CHECK(f.p_value == b.p_value);
  if (f.verdict == Verdict::power_law_favored) CHECK(b.verdict == Verdict::alternative_favored);
  if (f.verdict == Verdict::alternative_favored) CHECK(b.verdict == Verdict::power_law_favored);
}

TEST_CASE("duplicating the tail scales the statistic by two") {
  Histogram tail = make_histogram(sample(Model(PowerLaw(2.3, 1)), 2000, 62));
  Model pl = PowerLaw(2.3, 1);
  Model alt = Exponential(0.5, 1);
  ComparisonResult one = vuong_test(tail, pl, alt);
  ComparisonResult four = vuong_test(quadruple(tail), pl, alt);
  CHECK(four.lr == 4.0 * one.lr);
  CHECK(four.sigma_lr == one.sigma_lr);
  CHECK(four.stat == 2.0 * one.stat);
}

TEST_CASE("identical models cannot be ranked") {
  Histogram tail = make_histogram({1, 2, 2, 3, 5});
  Model pl = PowerLaw(2.0, 1);
  CHECK_THROWS_AS((void)vuong_test(tail, pl, pl), indistinguishable_models_error);
}

TEST_CASE("vuong test validates the shared support") {
  Histogram tail = make_histogram({2, 3, 4});
  CHECK_THROWS_AS((void)vuong_test(tail, Model(PowerLaw(2.0, 1)), Model(Exponential(1.0, 2))),
                  domain_error);
  CHECK_THROWS_AS((void)vuong_test(Histogram{}, Model(PowerLaw(2.0, 1)), Model(Exponential(1.0, 1))),
                  empty_tail_error);
  CHECK_THROWS_AS((void)vuong_test(tail, Model(PowerLaw(2.0, 3)), Model(Exponential(1.0, 3))),
                  domain_error);  // observation 2 sits below x0 = 3
}

TEST_CASE("vanishing cutoff rate is statistically indistinguishable in practice") {
  Histogram tail = make_histogram(sample(Model(PowerLaw(2.5, 1)), 3000, 63));
  ComparisonResult r =
      vuong_test(tail, Model(PowerLaw(2.5, 1)), Model(PowerLawCutoff(2.5, 1e-12, 1)));
  CHECK(r.verdict == Verdict::indeterminate);
  // the likelihoods coincide to ~1e-9 per point; the normalized statistic is a
  // ratio of near-zeros, so only the total gap is worth pinning
  CHECK(std::fabs(r.lr) < 1e-6);
}

TEST_CASE("nested test flags a genuine cutoff") {
  Histogram tail = make_histogram(sample(Model(PowerLawCutoff(3.0, 0.02, 20)), 10000, 1));
  Model pl_fit = fit_mle(Family::power_law, tail, 20);
  Model cut_fit = fit_mle(Family::power_law_cutoff, tail, 20);
  const PowerLaw& pl = std::get<PowerLaw>(pl_fit);
  const PowerLawCutoff& cut = std::get<PowerLawCutoff>(cut_fit);
  ComparisonResult r = nested_lr_test(tail, pl, cut);

  double ll_pl = log_likelihood(pl_fit, tail);
  double ll_cut = log_likelihood(cut_fit, tail);
  CHECK(r.nested);
  CHECK(r.stat == 2.0 * (ll_cut - ll_pl));
  CHECK(r.lr == ll_pl - ll_cut);
  CHECK(r.stat > 10.0);
  CHECK(r.p_value < 1e-4);
  CHECK(r.verdict == Verdict::alternative_favored);
}

TEST_CASE("nested test tolerates the boundary on true power-law data") {
  Histogram tail = make_histogram(sample(Model(PowerLaw(2.5, 1)), 5000, 2));
  Model pl_fit = fit_mle(Family::power_law, tail, 1);
  Model cut_fit = fit_mle(Family::power_law_cutoff, tail, 1);
  ComparisonResult r = nested_lr_test(tail, std::get<PowerLaw>(pl_fit),
                                      std::get<PowerLawCutoff>(cut_fit));
  CHECK(r.stat >= -1e-6);
  CHECK(r.p_value >= 0.0);
  CHECK(r.p_value <= 1.0);
}

TEST_CASE("nested test rejects a dominated cutoff") {
  Histogram tail = make_histogram(sample(Model(PowerLaw(2.5, 1)), 2000, 3));
  Model pl_fit = fit_mle(Family::power_law, tail, 1);
  const PowerLaw& pl = std::get<PowerLaw>(pl_fit);
  // a cutoff this sharp cannot reach the power-law likelihood
  PowerLawCutoff bad(pl.alpha(), 5.0, 1);
  CHECK_THROWS_AS((void)nested_lr_test(tail, pl, bad), nesting_violation_error);
}

TEST_CASE("compare_all sweeps the six alternatives in order") {
  CountSample s = CountSample::from_values("pl", sample(Model(PowerLaw(2.5, 1)), 3000, 64));
  PowerLawFit fit = estimate_xmin(s);
  auto rows = compare_all(s, fit);
  REQUIRE(rows.size() == 6);
  const Family want[] = {Family::exponential, Family::weibull, Family::log_normal,
                         Family::tsallis,     Family::yule,    Family::power_law_cutoff};
  for (std::size_t i = 0; i < 6; ++i) {
    INFO("row " << i);
    CHECK(rows[i].alternative == want[i]);
    CHECK(rows[i].nested == (want[i] == Family::power_law_cutoff));
    CHECK(rows[i].fitted);
    CHECK(rows[i].p_value >= 0.0);
    CHECK(rows[i].p_value <= 1.0);
    CHECK(rows[i].alt_model.has_value());
    if (!rows[i].nested) CHECK(rows[i].sigma_lr > 0.0);
  }
}

TEST_CASE("verdict names") {
  CHECK(std::string(verdict_name(Verdict::power_law_favored)) == "power_law_favored");
  CHECK(std::string(verdict_name(Verdict::alternative_favored)) == "alternative_favored");
  CHECK(std::string(verdict_name(Verdict::indeterminate)) == "indeterminate");
}
