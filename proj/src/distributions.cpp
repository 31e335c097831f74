#include "bilat/distributions.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "bilat/error.hpp"

namespace bilat {

namespace {

constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;
constexpr int kMaxTerms = 100000;

// Continued fraction for I_x(a,b); converges for x < (a+1)/(a+b+2).
double beta_continued_fraction(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxTerms; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  throw Error(ErrorCode::non_convergence, "incomplete beta continued fraction did not converge");
}

// I_x(a,b) with y = 1 - x supplied separately so callers keep full precision near x = 1.
double ibeta(double a, double b, double x, double y) {
  if (x <= 0.0) return 0.0;
  if (y <= 0.0) return 1.0;
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log(y);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, y) / b;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0) || !(x >= 0.0 && x <= 1.0)) {
    throw Error(ErrorCode::invalid_argument, "incomplete beta needs a, b > 0 and 0 <= x <= 1");
  }
  return ibeta(a, b, x, 1.0 - x);
}

double student_t_sf(double t, double df) {
  if (!(df > 0.0) || std::isnan(t)) throw Error(ErrorCode::invalid_argument, "t distribution needs df > 0");
  if (t == 0.0) return 0.5;
  if (std::isinf(t)) return t > 0.0 ? 0.0 : 1.0;
  if (std::isinf(df)) return normal_sf(t);
  const double t2 = t * t;
  double tail;  // P(T > |t|)
  if (t2 > df) {
    const double x = df / (df + t2);
    tail = 0.5 * ibeta(0.5 * df, 0.5, x, t2 / (df + t2));
  } else {
    const double x = t2 / (df + t2);
    tail = 0.5 - 0.5 * ibeta(0.5, 0.5 * df, x, df / (df + t2));
  }
  return t > 0.0 ? tail : 1.0 - tail;
}

double student_t_cdf(double t, double df) { return student_t_sf(-t, df); }

double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

}  // namespace bilat
