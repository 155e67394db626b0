#include "myoprop/stats.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "myoprop/errors.hpp"

namespace myo {

namespace {

constexpr double kBetaTol = 1e-10;
constexpr int kBetaMaxIter = 300;
constexpr double kTiny = 1e-300;

// Lentz's method for the continued fraction of I_x(a, b).
double beta_continued_fraction(double a, double b, double x) {
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kBetaMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((qap + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kBetaTol) return h;
  }
  throw numeric_error("incomplete beta continued fraction did not converge");
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw config_error("incomplete beta parameters must be positive");
  }
  if (x < 0.0 || x > 1.0) {
    throw config_error("incomplete beta argument outside [0,1]");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) -
                           std::lgamma(b) + a * std::log(x) +
                           b * std::log(1.0 - x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double f_cdf(double x, int df1, int df2) {
  if (df1 < 1 || df2 < 1) throw config_error("F degrees of freedom must be >= 1");
  if (x < 0.0) throw config_error("F statistic must be non-negative");
  if (x == 0.0) return 0.0;
  const double d1 = df1, d2 = df2;
  const double arg = d1 * x / (d1 * x + d2);
  return incomplete_beta(d1 / 2.0, d2 / 2.0, arg);
}

AnovaResult anova_oneway(std::span<const std::vector<double>> groups) {
  if (groups.size() < 2) throw data_error("ANOVA needs at least 2 groups");
  std::size_t total_n = 0;
  double grand_sum = 0.0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (groups[g].size() < 2) {
      throw data_error("ANOVA group " + std::to_string(g) +
                       " needs at least 2 values");
    }
    for (double v : groups[g]) {
      if (!std::isfinite(v)) throw data_error("non-finite ANOVA observation");
      grand_sum += v;
    }
    total_n += groups[g].size();
  }
  const double grand_mean = grand_sum / static_cast<double>(total_n);

  double ss_between = 0.0, ss_within = 0.0;
  for (const auto& group : groups) {
    double mean = 0.0;
    for (double v : group) mean += v;
    mean /= static_cast<double>(group.size());
    ss_between += static_cast<double>(group.size()) * (mean - grand_mean) *
                  (mean - grand_mean);
    for (double v : group) ss_within += (v - mean) * (v - mean);
  }

  AnovaResult result;
  result.df_between = static_cast<int>(groups.size()) - 1;
  result.df_within = static_cast<int>(total_n - groups.size());

  if (ss_within == 0.0) {
    // Perfectly clean synthetic runs hit this legitimately; flag instead of
    // throwing. Identical groups carry no evidence of a difference.
    result.degenerate = true;
    if (ss_between == 0.0) {
      result.f_statistic = 0.0;
      result.p_value = 1.0;
    } else {
      result.f_statistic = std::numeric_limits<double>::infinity();
      result.p_value = 0.0;
    }
  } else {
    const double ms_between = ss_between / result.df_between;
    const double ms_within = ss_within / result.df_within;
    result.f_statistic = ms_between / ms_within;
    result.p_value =
        1.0 - f_cdf(result.f_statistic, result.df_between, result.df_within);
  }
  for (double alpha : {0.01, 0.05, 0.10}) {
    result.significant_at[alpha] = result.p_value < alpha;
  }
  return result;
}

}  // namespace myo
