#ifndef TAILFIT_OPTIMIZE_HPP
#define TAILFIT_OPTIMIZE_HPP

#include <cmath>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

namespace tailfit {

// Brent's method (golden section + successive parabolic interpolation) for a
// unimodal minimum on [a, b].  xtol is an absolute tolerance on the abscissa.
inline double brent_minimize(const std::function<double(double)>& f, double a, double b,
                             double xtol, int max_iter = 200) {
  const double gold = 0.3819660112501051;
  double x = a + gold * (b - a);
  double w = x, v = x;
  double fx = f(x), fw = fx, fv = fx;
  double d = 0.0, e = 0.0;
  for (int iter = 0; iter < max_iter; ++iter) {
    double m = 0.5 * (a + b);
    double tol1 = xtol * 0.5 + 1e-14 * std::abs(x);
    double tol2 = 2.0 * tol1;
    if (std::abs(x - m) <= tol2 - 0.5 * (b - a)) break;
    bool golden = true;
    if (std::abs(e) > tol1) {
      double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::abs(q);
      double etmp = e;
      e = d;
      if (std::abs(p) < std::abs(0.5 * q * etmp) && p > q * (a - x) && p < q * (b - x)) {
        d = p / q;
        golden = false;
        double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = (x < m) ? tol1 : -tol1;
      }
    }
    if (golden) {
      e = (x < m) ? b - x : a - x;
      d = gold * e;
    }
    double u = (std::abs(d) >= tol1) ? x + d : x + ((d > 0.0) ? tol1 : -tol1);
    double fu = f(u);
    if (fu <= fx) {
      if (u >= x)
        a = x;
      else
        b = x;
      v = w;
      fv = fw;
      w = x;
      fw = fx;
      x = u;
      fx = fu;
    } else {
      if (u < x)
        a = u;
      else
        b = u;
      if (fu <= fw || w == x) {
        v = w;
        fv = fw;
        w = u;
        fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u;
        fv = fu;
      }
    }
  }
  return x;
}

inline double brent_maximize(const std::function<double(double)>& f, double a, double b,
                             double xtol, int max_iter = 200) {
  return brent_minimize([&](double t) { return -f(t); }, a, b, xtol, max_iter);
}

struct SimplexResult {
  std::vector<double> x;
  double f = 0.0;
  bool converged = false;
  int evals = 0;
};

// Nelder-Mead minimization with standard coefficients.  Terminates when the
// vertex function spread falls below ftol (relative) or the simplex diameter
// below xtol.  The objective may return +inf for infeasible points.
inline SimplexResult nelder_mead_minimize(
    const std::function<double(const std::vector<double>&)>& f, std::vector<double> start,
    double step, double ftol, double xtol, int max_iter = 800) {
  const std::size_t d = start.size();
  std::vector<std::vector<double>> pts(d + 1, start);
  std::vector<double> fv(d + 1);
  SimplexResult res;

  auto eval = [&](const std::vector<double>& p) {
    ++res.evals;
    double v = f(p);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };

  for (std::size_t i = 0; i < d; ++i) pts[i + 1][i] += step;
  for (std::size_t i = 0; i <= d; ++i) fv[i] = eval(pts[i]);

  std::vector<double> centroid(d), xr(d), xe(d), xc(d);
  for (int iter = 0; iter < max_iter; ++iter) {
    // order: lo = best, hi = worst, nh = second worst
    std::size_t lo = 0, hi = 0, nh = 0;
    for (std::size_t i = 1; i <= d; ++i) {
      if (fv[i] < fv[lo]) lo = i;
      if (fv[i] > fv[hi]) hi = i;
    }
    nh = (hi == 0) ? 1 : 0;
    for (std::size_t i = 0; i <= d; ++i)
      if (i != hi && fv[i] > fv[nh]) nh = i;

    double spread = std::abs(fv[hi] - fv[lo]);
    double diam = 0.0;
    for (std::size_t i = 0; i <= d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        diam = std::max(diam, std::abs(pts[i][j] - pts[lo][j]));
    if ((std::isfinite(fv[lo]) && spread <= ftol * (std::abs(fv[lo]) + 1e-10)) || diam <= xtol) {
      res.converged = std::isfinite(fv[lo]);
      break;
    }

    for (std::size_t j = 0; j < d; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i <= d; ++i)
        if (i != hi) s += pts[i][j];
      centroid[j] = s / static_cast<double>(d);
    }

    for (std::size_t j = 0; j < d; ++j) xr[j] = centroid[j] + (centroid[j] - pts[hi][j]);
    double fr = eval(xr);
    if (fr < fv[lo]) {
      for (std::size_t j = 0; j < d; ++j) xe[j] = centroid[j] + 2.0 * (centroid[j] - pts[hi][j]);
      double fe = eval(xe);
      if (fe < fr) {
        pts[hi] = xe;
        fv[hi] = fe;
      } else {
        pts[hi] = xr;
        fv[hi] = fr;
      }
    } else if (fr < fv[nh]) {
      pts[hi] = xr;
      fv[hi] = fr;
    } else {
      for (std::size_t j = 0; j < d; ++j) xc[j] = centroid[j] + 0.5 * (pts[hi][j] - centroid[j]);
      double fc = eval(xc);
      if (fc < fv[hi]) {
        pts[hi] = xc;
        fv[hi] = fc;
      } else {
        for (std::size_t i = 0; i <= d; ++i) {
          if (i == lo) continue;
          for (std::size_t j = 0; j < d; ++j) pts[i][j] = pts[lo][j] + 0.5 * (pts[i][j] - pts[lo][j]);
          fv[i] = eval(pts[i]);
        }
      }
    }
  }

  std::size_t lo = 0;
  for (std::size_t i = 1; i <= d; ++i)
    if (fv[i] < fv[lo]) lo = i;
  res.x = pts[lo];
  res.f = fv[lo];
  return res;
}

}  // namespace tailfit

#endif
