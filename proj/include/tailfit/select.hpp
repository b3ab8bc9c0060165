#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tailfit/plfit.hpp"

namespace tailfit {

enum class Verdict { power_law_favored, alternative_favored, indeterminate };

const char* verdict_name(Verdict v);

struct ComparisonResult {
  Family alternative = Family::exponential;
  bool nested = false;
  bool fitted = true;             // false: the row is a "-" entry
  std::string failure;            // reason when !fitted
  double lr = 0.0;                // tail log-likelihood of the power law minus the alternative
  double sigma_lr = 0.0;          // per-point SD of the log-likelihood differences
  double stat = 0.0;              // normalized LR for non-nested rows, 2*(LL_alt - LL_pl) for nested
  double p_value = 1.0;
  Verdict verdict = Verdict::indeterminate;
  std::optional<Model> alt_model;
};

// Vuong's test for non-nested models sharing the tail support: with
// d_i = log p1(x_i) - log p2(x_i), the normalized ratio sum(d) / (sigma sqrt(n))
// is asymptotically standard normal; sigma uses the population divisor n.
// Two-sided p-value; verdict reads the sign only when p < threshold.
ComparisonResult vuong_test(const Histogram& tail, const Model& m1, const Model& m2,
                            double threshold = 0.1);

// Likelihood-ratio test for the power law nested inside the cutoff family:
// 2*(LL_cutoff - LL_pl) is asymptotically chi-squared with 1 df.  A statistic
// below -1e-6 means the cutoff fit failed to dominate and raises
// nesting_violation_error.
ComparisonResult nested_lr_test(const Histogram& tail, const PowerLaw& pl,
                                const PowerLawCutoff& cutoff, double threshold = 0.1);

// Fits all six alternatives on the tail selected by the power-law fit and
// compares each against it; per-family failures become "-" rows instead of
// aborting the sweep.  Row order: exponential, weibull, log_normal, tsallis,
// yule, power_law_cutoff.
std::vector<ComparisonResult> compare_all(const CountSample& sample, const PowerLawFit& fit,
                                          const FitOptions& opts = {}, double threshold = 0.1);

}  // namespace tailfit
