#include "obseq/stats.hpp"

#include <algorithm>
#include <numeric>

#include <boost/math/special_functions/gamma.hpp>

#include "obseq/error.hpp"

namespace obseq {

namespace {

using Table = std::vector<std::vector<double>>;

Table transpose(const Table& t) {
  if (t.empty()) return {};
  Table out(t[0].size(), std::vector<double>(t.size()));
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (std::size_t j = 0; j < t[i].size(); ++j) out[j][i] = t[i][j];
  }
  return out;
}

std::vector<double> row_totals(const Table& t) {
  std::vector<double> r;
  r.reserve(t.size());
  for (const auto& row : t) r.push_back(std::accumulate(row.begin(), row.end(), 0.0));
  return r;
}

Table drop_empty_rows(const Table& t) {
  Table out;
  for (const auto& row : t) {
    if (std::accumulate(row.begin(), row.end(), 0.0) > 0.0) out.push_back(row);
  }
  return out;
}

// Pools rows of `t` whose smallest expected count (given the column totals)
// is below the threshold. Expected count of cell (i, j) is r_i c_j / n, so
// row i is small iff r_i * min_j c_j / n < threshold.
Table pool_rows(const Table& t) {
  if (t.size() < 2 || t[0].empty()) return t;
  const std::vector<double> rows = row_totals(t);
  const std::vector<double> cols = row_totals(transpose(t));
  const double n = std::accumulate(rows.begin(), rows.end(), 0.0);
  const double min_col = *std::min_element(cols.begin(), cols.end());
  auto small = [&](double r) { return r * min_col / n < kMinExpectedCount; };

  std::vector<std::size_t> order(t.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rows[a] < rows[b]; });

  Table out;
  std::vector<double> pooled(t[0].size(), 0.0);
  double pooled_total = 0.0;
  bool pooling = false;
  for (std::size_t idx : order) {
    if (small(rows[idx]) || (pooling && small(pooled_total))) {
      for (std::size_t j = 0; j < pooled.size(); ++j) pooled[j] += t[idx][j];
      pooled_total += rows[idx];
      pooling = true;
    } else {
      out.push_back(t[idx]);
    }
  }
  if (pooling) out.push_back(pooled);
  return out;
}

}  // namespace

double chi_square_survival(double x, int dof) {
  if (dof < 0) throw InvalidArgument("chi_square_survival: negative degrees of freedom");
  if (dof == 0 || x <= 0.0) return 1.0;
  return boost::math::gamma_q(0.5 * dof, 0.5 * x);
}

ChiSquareResult chi_square_contingency(const Table& table) {
  for (const auto& row : table) {
    if (!table.empty() && row.size() != table[0].size()) throw InvalidArgument("ragged contingency table");
  }
  Table t = drop_empty_rows(table);
  t = transpose(drop_empty_rows(transpose(t)));
  t = transpose(pool_rows(transpose(t)));  // columns
  t = pool_rows(t);

  ChiSquareResult res;
  if (t.size() < 2 || t[0].size() < 2) return res;
  const std::vector<double> rows = row_totals(t);
  const std::vector<double> cols = row_totals(transpose(t));
  const double n = std::accumulate(rows.begin(), rows.end(), 0.0);
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (std::size_t j = 0; j < t[i].size(); ++j) {
      const double e = rows[i] * cols[j] / n;
      const double d = t[i][j] - e;
      res.statistic += d * d / e;
    }
  }
  res.dof = static_cast<int>((t.size() - 1) * (t[0].size() - 1));
  res.p_value = chi_square_survival(res.statistic, res.dof);
  return res;
}

ChiSquareResult combine(const std::vector<ChiSquareResult>& parts) {
  ChiSquareResult res;
  for (const auto& p : parts) {
    res.statistic += p.statistic;
    res.dof += p.dof;
  }
  res.p_value = chi_square_survival(res.statistic, res.dof);
  return res;
}

}  // namespace obseq
