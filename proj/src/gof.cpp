#include "tailfit/gof.hpp"

#include <algorithm>
#include <cmath>

#include "tailfit/errors.hpp"
#include "tailfit/parallel.hpp"
#include "tailfit/rng.hpp"

namespace tailfit {

CountSample synthesize(const CountSample& sample, const PowerLawFit& fit, std::uint64_t seed) {
  std::size_t n = sample.counts.size();
  if (n == 0) throw empty_tail_error("synthesize: empty sample");
  std::int64_t x0 = fit.model.x0();
  auto body_end = std::lower_bound(sample.counts.begin(), sample.counts.end(), x0);
  std::vector<std::int64_t> body(sample.counts.begin(), body_end);
  std::uint64_t n_tail = static_cast<std::uint64_t>(fit.n_tail);

  engine e = make_engine(seed);
  ModelSampler tail(Model{fit.model});
  std::vector<std::int64_t> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    bool parametric = uniform_below(e, static_cast<std::uint64_t>(n)) < n_tail || body.empty();
    if (parametric)
      out.push_back(tail.draw(e));
    else
      out.push_back(body[uniform_below(e, body.size())]);
  }
  return CountSample::from_values(sample.name, std::move(out));
}

GofResult gof_pvalue(const CountSample& sample, const PowerLawFit& fit, const GofOptions& opts,
                     std::uint64_t seed) {
  if (opts.n_sims < 100) throw domain_error("gof_pvalue: n_sims must be >= 100");
  if (!(opts.threshold > 0.0 && opts.threshold < 1.0))
    throw domain_error("gof_pvalue: threshold must lie in (0, 1)");

  std::vector<double> ks(opts.n_sims);
  std::vector<char> ok(opts.n_sims, 0);
  parallel_for(static_cast<std::size_t>(opts.n_sims), [&](std::size_t i) {
    CountSample syn = synthesize(sample, fit, mix_seed(seed, static_cast<std::uint64_t>(i)));
    try {
      ks[i] = estimate_xmin(syn, opts.scan).ks;
      ok[i] = 1;
    } catch (const error&) {
      ok[i] = 0;
    }
  });

  GofResult r;
  r.k = fit.ks;
  for (int i = 0; i < opts.n_sims; ++i) {
    if (!ok[i]) {
      ++r.n_failures;
      continue;
    }
    ++r.n_sims;
    if (ks[i] >= r.k) ++r.n_exceed;
  }
  if (10 * r.n_failures > opts.n_sims)
    throw gof_failure_error("gof_pvalue: " + std::to_string(r.n_failures) + " of " +
                            std::to_string(opts.n_sims) + " synthetic refits failed");
  r.p_value = static_cast<double>(r.n_exceed) / static_cast<double>(r.n_sims);
  r.reject = r.p_value < opts.threshold;
  return r;
}

}  // namespace tailfit
