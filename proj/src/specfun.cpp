#include "tailfit/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "tailfit/errors.hpp"

namespace tailfit {

namespace {

// Compensated accumulator; keeps long direct sums at ~2 ulp total error.
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

// (2j)! / B_{2j}, signed, j = 1..12.  Same constants as the classic
// Euler-Maclaurin zeta implementations.
constexpr double kEmCoeff[] = {
    12.0,
    -720.0,
    30240.0,
    -1209600.0,
    47900160.0,
    -1.8924375803183791606e9,
    7.47242496e10,
    -2.950130727918164224e12,
    1.1646782814350067249e14,
    -4.5979787224074726105e15,
    1.8152105401943546773e17,
    -7.1661652561756670113e18,
};

double hurwitz_zeta_impl(double alpha, double q) {
  if (!(alpha > 1.0)) throw divergent_series_error("hurwitz_zeta: requires alpha > 1");
  if (!(q > 0.0) || !std::isfinite(q)) throw domain_error("hurwitz_zeta: requires q > 0");

  // Direct terms until the argument is large enough that the asymptotic
  // Euler-Maclaurin series converges well below 1e-13 relative.
  const double m_min = 18.0 + 2.0 * alpha;
  Kahan s;
  double a = q;
  while (a < m_min) {
    s.add(std::pow(a, -alpha));
    a += 1.0;
  }

  // Tail from M = a: integral term, half-term, then Bernoulli corrections.
  double b = std::pow(a, -alpha);
  s.add(b * a / (alpha - 1.0));
  s.add(0.5 * b);

  double fac = 1.0;
  double k = 0.0;
  double prev = std::numeric_limits<double>::infinity();
  for (double coeff : kEmCoeff) {
    fac *= alpha + k;
    b /= a;
    double t = fac * b / coeff;
    if (std::abs(t) >= prev) break;  // asymptotic series started to turn
    s.add(t);
    prev = std::abs(t);
    if (std::abs(t) < 1e-17 * std::abs(s.value())) break;
    k += 1.0;
    fac *= alpha + k;
    b /= a;
    k += 1.0;
  }
  return s.value();
}

}  // namespace

void SeriesTolerance::validate() const {
  if (!(rel_tol > 0.0 && rel_tol < 1e-6))
    throw domain_error("SeriesTolerance: rel_tol must lie in (0, 1e-6)");
  if (max_terms < 10'000)
    throw domain_error("SeriesTolerance: max_terms must be at least 10^4");
}

double hurwitz_zeta(double alpha, double q) { return hurwitz_zeta_impl(alpha, q); }

double hurwitz_zeta(double alpha, std::int64_t x0) {
  if (x0 < 1) throw domain_error("hurwitz_zeta: requires x0 >= 1");
  return hurwitz_zeta_impl(alpha, static_cast<double>(x0));
}

double log_gamma(double x) {
  if (!(x > 0.0)) throw domain_error("log_gamma: requires x > 0");
  int sign = 0;
  return ::lgamma_r(x, &sign);
}

double erfc(double x) { return std::erfc(x); }

double log_erfc(double x) {
  if (x < 25.0) return std::log(std::erfc(x));
  // Asymptotic branch for arguments where erfc itself would lose range:
  // erfc(x) = exp(-x^2) / (x sqrt(pi)) * (1 - 1/(2x^2) + 3/(4x^4) - ...).
  const double inv2x2 = 1.0 / (2.0 * x * x);
  double term = 1.0;
  double series = 1.0;
  for (int k = 1; k < 40; ++k) {
    term *= -(2.0 * k - 1.0) * inv2x2;
    if (std::abs(term) < 1e-18) break;
    series += term;
  }
  return -x * x - std::log(x) - 0.5 * std::log(M_PI) + std::log(series);
}

namespace {

// Romberg integration on [a, b] for a smooth integrand.  Stops when the
// highest-order extrapolations agree within abs_floor + 1e-14 * |integral|.
template <typename F>
double romberg(const F& f, double a, double b, double abs_floor) {
  constexpr int kMaxLevel = 20;
  double row[kMaxLevel + 1];
  double h = b - a;
  row[0] = 0.5 * h * (f(a) + f(b));
  std::int64_t panels = 1;
  for (int level = 1; level <= kMaxLevel; ++level) {
    Kahan mids;
    double step = h / static_cast<double>(panels);
    for (std::int64_t i = 0; i < panels; ++i)
      mids.add(f(a + (static_cast<double>(i) + 0.5) * step));
    double prev_diag = row[level - 1];
    double t = 0.5 * row[0] + 0.5 * step * mids.value();
    double factor = 1.0;
    for (int j = 1; j <= level; ++j) {
      factor *= 4.0;
      double next = t + (t - row[j - 1]) / (factor - 1.0);
      row[j - 1] = t;
      t = next;
    }
    row[level] = t;
    if (level >= 5 && std::abs(t - prev_diag) <= abs_floor + 1e-14 * std::abs(t)) return t;
    panels *= 2;
  }
  throw non_convergence_error("log_lerch_tail: quadrature failed to settle", row[kMaxLevel],
                              std::abs(row[kMaxLevel] - row[kMaxLevel - 1]));
}

// ln of the terms k^(-alpha) e^(-lambda k).
inline double log_damped_term(double alpha, double lambda, double k) {
  return -alpha * std::log(k) - lambda * k;
}

}  // namespace

double log_lerch_tail(double alpha, double lambda, std::int64_t start) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha))
    throw domain_error("log_lerch_tail: requires alpha >= 0");
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw domain_error("log_lerch_tail: requires lambda > 0");
  if (start < 1) throw domain_error("log_lerch_tail: requires start >= 1");

  const double sd = static_cast<double>(start);

  // Fast exponential decay: sum directly, scaled by the first term.  The
  // step ratio never exceeds e^{-lambda} (the power factor only shrinks it),
  // so the geometric bound certifies the cut within ~ 40/lambda terms.
  if (lambda >= 0.05) {
    const double log_t0 = log_damped_term(alpha, lambda, sd);
    const double ratio_cap = std::exp(-lambda);
    const double amp = ratio_cap / (1.0 - ratio_cap);
    Kahan s;
    s.add(1.0);
    for (std::int64_t k = start + 1;; ++k) {
      double tau = std::exp(log_damped_term(alpha, lambda, static_cast<double>(k)) - log_t0);
      s.add(tau);
      double bound = tau * amp;
      if (bound <= 1e-14 * s.value()) {
        s.add(0.5 * bound);
        break;
      }
      if (k - start > 2'000'000)
        throw non_convergence_error("log_lerch_tail: direct sum failed to close", s.value(),
                                    bound);
    }
    return log_t0 + std::log(s.value());
  }

  // Slow damping: direct terms to M, then Euler-Maclaurin at M with every
  // quantity scaled by the first tail term f(M) = M^(-alpha) e^(-lambda M).
  // The scaled pieces stay within double range whenever the sum itself does.
  const std::int64_t m = std::max(start, static_cast<std::int64_t>(std::ceil(2.0 * alpha)) + 24);
  const double md = static_cast<double>(m);
  const double lm = lambda * md;
  const double log_fm = log_damped_term(alpha, lambda, md);

  Kahan scaled;
  for (std::int64_t k = start; k < m; ++k)
    scaled.add(std::exp(log_damped_term(alpha, lambda, static_cast<double>(k)) - log_fm));

  // Integral piece: int_M^inf u^(-alpha) e^(-lambda u) du / f(M).  With
  // u = M e^s it becomes M * int_0^inf exp(psi(s)) ds for
  // psi(s) = (1 - alpha) s - lambda M (e^s - 1), a concave exponent.  All
  // evaluation runs in v = s - peak_s relative to the peak value,
  //   psi(peak_s + v) - psi_peak = c1 v - w (e^v - 1),  w = lm e^{peak_s},
  // which keeps the arithmetic away from the huge intermediates that appear
  // for alpha < 1 with lambda near the bottom of the double range.  For
  // alpha >= 1 the peak sits at 0 and the shift is the exact identity.
  const double c1 = 1.0 - alpha;
  const double log_lm = std::log(lm);
  // log(c1 / lm) via the difference: the quotient itself overflows once lm
  // goes subnormal.
  const double peak_s = (c1 > lm) ? std::log(c1) - log_lm : 0.0;
  const double log_w = log_lm + peak_s;  // log(c1) when the peak is interior
  const double w = peak_s == 0.0 ? lm : std::exp(log_w);
  const double psi_peak = peak_s == 0.0 ? 0.0 : c1 * peak_s - (w - lm);
  auto psi_drop = [&](double v) {
    // w e^v can leave double range while w expm1(v) is still moderate; past
    // v = 700 the product is assembled in log space instead.
    double z = v > 700.0 ? std::exp(v + log_w) - w : w * std::expm1(v);
    return c1 * v - z;
  };

  // A peak this far above the tail puts the rescaled total past the top of
  // double range no matter what the quadrature finds: the bump alone
  // contributes at least 0.49 (the exponent stays above -0.72 on [0, 1]).
  if (psi_peak + std::log(0.49 * md) > 709.79)
    return std::numeric_limits<double>::infinity();

  // Rightmost point that can still matter: psi has dropped 46 below its peak.
  double hi = 1.0;
  while (psi_drop(hi) > -46.0) hi *= 2.0;
  double lo = 0.0;
  for (int i = 0; i < 64; ++i) {
    double mid = 0.5 * (lo + hi);
    (psi_drop(mid) > -46.0 ? lo : hi) = mid;
  }
  const double v_end = hi;
  const double s_end = peak_s + v_end;

  // While lambda M e^s <= e^{-10} the damping factor expands in closed form:
  // exp(-z) = 1 - z + z^2/2 with z = lambda M (e^s - 1) leaves the plain
  // exponentials below, integrable exactly.  The cubic remainder is ~1e-14.
  // Each primitive carries the e^{-psi_peak} shift inside its exponents so
  // nothing overflows before the assembled total would.
  double s_plateau = std::clamp(-10.0 - log_lm, 0.0, s_end);
  double plateau = 0.0;
  if (s_plateau > 0.0) {
    auto prim = [&](double k, double c) {
      // k * int_0^{s_plateau} e^{c s - psi_peak} ds
      double lk = std::log(k);
      if (c == 0.0) return std::exp(lk - psi_peak) * s_plateau;
      double gap = c * s_plateau;
      if (std::abs(gap) < 0.5)  // short span: the difference below would cancel
        return std::exp(lk - psi_peak) * std::expm1(gap) / c;
      return (std::exp(lk + gap - psi_peak) - std::exp(lk - psi_peak)) / c;
    };
    plateau = prim(1.0 + lm + 0.5 * lm * lm, c1) - prim(lm + lm * lm, c1 + 1.0) +
              prim(0.5 * lm * lm, c1 + 2.0);
  }

  double bump = 0.0;
  if (s_end > s_plateau + 1e-12) {
    double v_lo = s_plateau - peak_s;
    // Subnormal lambda with alpha >= 1 parks the mass near v ~ 700, where
    // node coordinates quantize the exponent at ~1e-13; that is genuine
    // level-to-level noise the extrapolation cannot settle below, so widen
    // the floor for it.  Interior peaks keep |v| small and are unaffected.
    double abs_floor = 1e-16 * (1.0 + plateau);
    double mag = std::max(std::abs(v_lo), v_end);
    if (mag > 100.0) abs_floor += 4.4e-16 * mag * (v_end - v_lo);
    auto integrand = [&](double v) { return std::exp(psi_drop(v)); };
    bump = romberg(integrand, v_lo, v_end, abs_floor);
  }
  double integral_scaled = md * (plateau + bump) * std::exp(psi_peak);
  if (!std::isfinite(integral_scaled))
    return std::numeric_limits<double>::infinity();  // the sum overflows double range

  // Bernoulli corrections: f^(2j-1)(M)/f(M) is a polynomial in 1/M whose
  // coefficients follow from g_(m+1) = g_m' + g_1 g_m with g_1 = -alpha/u - lambda.
  constexpr int kMaxDeriv = 23;
  double coeff[kMaxDeriv + 1][kMaxDeriv + 1] = {};
  coeff[1][0] = -lambda;
  coeff[1][1] = -alpha;
  for (int mm = 1; mm < kMaxDeriv; ++mm)
    for (int i = 0; i <= mm + 1; ++i) {
      double v = -lambda * coeff[mm][i];
      if (i > 0) v -= (alpha + static_cast<double>(i) - 1.0) * coeff[mm][i - 1];
      coeff[mm + 1][i] = v;
    }

  Kahan em;
  em.add(integral_scaled);
  em.add(0.5);
  double prev = std::numeric_limits<double>::infinity();
  for (int j = 1; j <= 12; ++j) {
    int order = 2 * j - 1;
    double g = 0.0;
    for (int i = order; i >= 0; --i) g = g / md + coeff[order][i];
    double t = -g / kEmCoeff[j - 1];
    if (std::abs(t) >= prev) break;  // asymptotic series started to turn
    em.add(t);
    prev = std::abs(t);
    if (std::abs(t) < 1e-16 * std::abs(em.value())) break;
  }

  double total_scaled = scaled.value() + em.value();
  return log_fm + std::log(total_scaled);
}

double truncated_tail_sum(const std::function<double(std::int64_t)>& term_fn,
                          std::int64_t start, const SeriesTolerance& tol) {
  tol.validate();

  Kahan s;
  std::int64_t x = start;
  std::int64_t used = 0;
  double t_prev = std::numeric_limits<double>::infinity();
  double r_prev = std::numeric_limits<double>::infinity();
  double r_last = 0.0;
  bool ratios_nonincreasing = true;
  std::int64_t flat_run = 0;

  // Chunk-boundary checkpoints carrying (index, term, step ratio).
  struct Mark {
    double k, t, r;
  };
  std::vector<Mark> marks;

  auto best_bound = [&]() {
    return (r_last > 0.0 && r_last < 1.0) ? t_prev * r_last / (1.0 - r_last)
                                          : std::numeric_limits<double>::infinity();
  };

  std::int64_t chunk = 64;
  for (;;) {
    for (std::int64_t i = 0; i < chunk; ++i) {
      double t = term_fn(x);
      if (!std::isfinite(t) || t < 0.0)
        throw domain_error("truncated_tail_sum: terms must be finite and non-negative");
      ++used;
      if (t == 0.0) return s.value();  // once decayed to zero the tail stays zero
      if (std::isfinite(t_prev)) {
        if (t > t_prev * (1.0 + 1e-9)) {
          // Terms are only eventually decreasing; a rise restarts the decay
          // analysis from here while the running sum keeps everything seen.
          marks.clear();
          ratios_nonincreasing = true;
          r_prev = std::numeric_limits<double>::infinity();
          r_last = 0.0;
        } else {
          r_last = t / t_prev;
          if (r_last > r_prev * (1.0 + 1e-12)) ratios_nonincreasing = false;
          r_prev = r_last;
        }
        flat_run = (t >= t_prev * (1.0 - 4e-16)) ? flat_run + 1 : 0;
      }
      s.add(t);
      t_prev = t;
      ++x;
      if (used >= tol.max_terms)
        throw non_convergence_error("truncated_tail_sum: max_terms exhausted", s.value(),
                                    best_bound());
    }

    if (flat_run >= 4096 && t_prev > 1e-6 * s.value())
      throw divergent_series_error("truncated_tail_sum: terms do not decay");

    marks.push_back({static_cast<double>(x - 1), t_prev, r_last});
    const double sv = s.value();
    const bool term_small = t_prev <= tol.rel_tol * sv;

    // Non-increasing ratios: r_last bounds every later ratio, so the tail
    // is below t*r/(1-r) exactly.
    if (ratios_nonincreasing && term_small && r_last > 0.0 && r_last < 1.0 - 1e-9) {
      double bound = t_prev * r_last / (1.0 - r_last);
      if (bound <= tol.rel_tol * sv) return sv + 0.5 * bound;
    }

    // Ratios rising concavely toward a limit below one, the signature of
    // power-times-exponential decay.  Checkpoint increments then shrink by
    // a stable factor rho, so the remaining rise is about d*rho/(1-rho);
    // half an increment of cushion keeps the extrapolated limit an upper
    // bound for the tame decay shapes this accepts.
    if (!ratios_nonincreasing && term_small && marks.size() >= 3) {
      const Mark& m0 = marks[marks.size() - 3];
      const Mark& m1 = marks[marks.size() - 2];
      const Mark& m2 = marks[marks.size() - 1];
      double d1 = m1.r - m0.r;
      double d2 = m2.r - m1.r;
      if (d1 > 0.0 && d2 > 0.0 && d2 <= 0.85 * d1) {
        double rho = d2 / d1;
        double r_lim = m2.r + d2 * rho / (1.0 - rho) + 0.5 * d2 + 1e-12;
        if (r_lim < 0.9995) {
          double bound = t_prev * r_lim / (1.0 - r_lim);
          if (bound <= tol.rel_tol * sv) return sv + 0.5 * bound;
        }
      }
    }

    // Asymptotically pure power decay: fit the slope p between checkpoints
    // and complete the remainder with zeta.  The drift between successive
    // slope estimates prices the model error.
    if (marks.size() >= 3 && t_prev <= 1e-3 * sv) {
      const Mark& m0 = marks[marks.size() - 3];
      const Mark& m1 = marks[marks.size() - 2];
      const Mark& m2 = marks[marks.size() - 1];
      double p_old = std::log(m0.t / m1.t) / std::log(m1.k / m0.k);
      double p_new = std::log(m1.t / m2.t) / std::log(m2.k / m1.k);
      if (p_new > 1.0 + 1e-6) {
        double drift = std::abs(p_new - p_old);
        double log_tail =
            std::log(m2.t) + p_new * std::log(m2.k) + std::log(hurwitz_zeta(p_new, m2.k + 1.0));
        if (log_tail < 700.0) {
          double tail = std::exp(log_tail);
          double sensitivity = std::log(m2.k) + 2.0 / (p_new - 1.0);
          double err = (drift + 64.0 * std::numeric_limits<double>::epsilon()) * sensitivity * tail +
                       1e-13 * tail;
          if (err <= 0.5 * tol.rel_tol * (sv + tail)) return sv + tail;
        }
      }
    }

    chunk = std::min<std::int64_t>(chunk * 2, 8192);
  }
}

}  // namespace tailfit
