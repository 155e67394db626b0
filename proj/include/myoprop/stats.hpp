#pragma once

#include <map>
#include <span>
#include <vector>

namespace myo {

struct AnovaResult {
  double f_statistic = 0.0;
  int df_between = 0;
  int df_within = 0;
  double p_value = 1.0;
  std::map<double, bool> significant_at;  // alpha -> p < alpha
  bool degenerate = false;  // zero within-group variance

  bool significant(double alpha) const { return p_value < alpha; }
};

// Regularized incomplete beta I_x(a, b) by Lentz continued fractions with the
// symmetry switch at x > (a+1)/(a+b+2). Absolute tolerance 1e-10, at most 300
// iterations, numeric_error afterwards.
double incomplete_beta(double a, double b, double x);

// F(df1, df2) CDF at x: I_{df1*x/(df1*x+df2)}(df1/2, df2/2).
double f_cdf(double x, int df1, int df2);

// Classic one-way fixed-effects ANOVA. Needs >= 2 groups of >= 2 values.
// Zero within-group variance is flagged rather than thrown: unequal means
// give p = 0, fully identical data gives F = 0, p = 1.
AnovaResult anova_oneway(std::span<const std::vector<double>> groups);

}  // namespace myo
