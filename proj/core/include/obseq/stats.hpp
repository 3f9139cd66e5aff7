#pragma once

#include <cstddef>
#include <vector>

namespace obseq {

/// Default significance level of every statistical verdict.
inline constexpr double kSignificance = 0.01;

/// Minimum expected count of a chi-square cell before it is pooled.
inline constexpr double kMinExpectedCount = 5.0;

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;

  bool rejects(double significance = kSignificance) const noexcept { return dof > 0 && p_value < significance; }
};

/// Upper tail P(X >= x) of the chi-square distribution with `dof` degrees
/// of freedom. dof = 0 gives 1.
double chi_square_survival(double x, int dof);

/// Pearson test of independence/homogeneity on an r x c table of counts.
///
/// Rows and columns with zero total are structural zeros and are dropped
/// before degrees of freedom are counted. Columns, then rows, whose smallest
/// expected count falls below kMinExpectedCount are pooled into one
/// category (merged further with the next smallest until the pooled category
/// clears the threshold). Tables that reduce to fewer than two rows or
/// columns yield statistic 0 on 0 degrees of freedom.
ChiSquareResult chi_square_contingency(const std::vector<std::vector<double>>& table);

/// Sums statistics and degrees of freedom of independent components.
ChiSquareResult combine(const std::vector<ChiSquareResult>& parts);

}  // namespace obseq
