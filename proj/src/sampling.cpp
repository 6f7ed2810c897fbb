#include "sco/sampling.hpp"

#include <algorithm>
#include <cmath>

namespace sco {

namespace {

double log_pmf(long n, long k, double lp, double lq, double lgn1) {
  return lgn1 - std::lgamma(double(k) + 1) - std::lgamma(double(n - k) + 1) + k * lp +
         (n - k) * lq;
}

// Hormann's transformed rejection with an exact log-pmf acceptance test.
long btrs(CounterRng& rng, long n, double p) {
  const double q = 1 - p;
  const double spq = std::sqrt(n * p * q);
  const double b = 1.15 + 2.53 * spq;
  const double a = -0.0873 + 0.0248 * b + 0.01 * p;
  const double c = n * p + 0.5;
  const double v_r = 0.92 - 4.2 / b;
  const double alpha = (2.83 + 5.1 / b) * spq;
  const double lp = std::log(p), lq = std::log(q);
  const double lgn1 = std::lgamma(double(n) + 1);
  const long m = static_cast<long>(std::floor((n + 1) * p));
  const double pmf_m = log_pmf(n, m, lp, lq, lgn1);
  while (true) {
    const double u = rng.next_double() - 0.5;
    const double v = rng.next_double();
    const double us = 0.5 - std::abs(u);
    const double kd = std::floor((2 * a / us + b) * u + c);
    if (kd < 0 || kd > n) continue;
    const long k = static_cast<long>(kd);
    if (us >= 0.07 && v <= v_r) return k;
    const double lhs = std::log(v * alpha / (a / (us * us) + b));
    if (lhs <= log_pmf(n, k, lp, lq, lgn1) - pmf_m) return k;
  }
}

}  // namespace

long binomial_draw(CounterRng& rng, long n, double p) {
  if (n <= 0) return 0;
  if (p <= 0) return 0;
  if (p >= 1) return n;
  if (p > 0.5) return n - binomial_draw(rng, n, 1 - p);
  if (n < 64) {
    long k = 0;
    for (long i = 0; i < n; ++i)
      if (rng.next_double() < p) ++k;
    return k;
  }
  if (n * p < 10) {  // cumulative inversion from k = 0
    const double q = 1 - p;
    double f = std::exp(n * std::log(q));
    double u = rng.next_double();
    long k = 0;
    const double s = p / q;
    while (u > f && k < n) {
      u -= f;
      ++k;
      f *= s * double(n - k + 1) / double(k);
    }
    return k;
  }
  return btrs(rng, n, p);
}

void multinomial_draw(CounterRng& rng, const std::vector<double>& p, long n,
                      std::vector<long>& out) {
  out.assign(p.size(), 0);
  double remaining_p = 1.0;
  long remaining_n = n;
  for (size_t i = 0; i + 1 < p.size(); ++i) {
    if (remaining_n == 0) break;
    const double cond = remaining_p > 0 ? std::clamp(p[i] / remaining_p, 0.0, 1.0) : 1.0;
    out[i] = binomial_draw(rng, remaining_n, cond);
    remaining_n -= out[i];
    remaining_p -= p[i];
  }
  out.back() = remaining_n;
}

}  // namespace sco
