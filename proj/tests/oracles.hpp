#pragma once

// Reference computations used as test oracles. Each one is written from the
// definitions, without calling the library routine it checks.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

namespace oracle {

using Matrix = std::vector<std::vector<double>>;

inline Matrix multiply(const Matrix& a, const Matrix& b) {
  const std::size_t n = a.size();
  Matrix c(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

/// gcd of all n <= limit with (P^n)_ii > 0, by explicit matrix powers.
/// Returns 0 if state i never returns within the limit.
inline std::size_t period_by_powers(const Matrix& p, std::size_t i, std::size_t limit) {
  Matrix pw = p;
  std::size_t g = 0;
  for (std::size_t n = 1; n <= limit; ++n) {
    if (pw[i][i] > 0.0) g = std::gcd(g, n);
    pw = multiply(pw, p);
    for (auto& row : pw)
      for (auto& v : row) v = v > 0.0 ? 1.0 : 0.0;
  }
  return g;
}

/// Every state reaches every other, by summing boolean powers.
inline bool irreducible_by_powers(const Matrix& p) {
  const std::size_t n = p.size();
  Matrix reach(n, std::vector<double>(n, 0.0));
  Matrix pw = p;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (pw[i][j] > 0.0) reach[i][j] = 1.0;
    pw = multiply(pw, p);
  }
  for (const auto& row : reach)
    for (double v : row)
      if (v == 0.0) return false;
  return true;
}

/// First `count` binary digits of num/den (0 <= num < den) by long division.
inline std::vector<unsigned> binary_digits(std::uint64_t num, std::uint64_t den, std::size_t count) {
  std::vector<unsigned> out;
  unsigned __int128 r = num;
  for (std::size_t i = 0; i < count; ++i) {
    r *= 2;
    out.push_back(r >= den ? 1U : 0U);
    if (r >= den) r -= den;
  }
  return out;
}

/// Transition matrix of the alpha_n coarse-grained baker chain from the bit
/// description of cells: state (X, Y) with X = w0..w_{n-1}, Y = w_{-1}..w_{-n}
/// moves to (X', Y') with X' = w1..w_n and Y' = w0 w_{-1} ... w_{-n+1}, where
/// w_n is a fresh fair bit. Row-major index X * 2^n + Y.
inline Matrix dyadic_chain(int n) {
  const std::size_t side = std::size_t{1} << n;
  Matrix p(side * side, std::vector<double>(side * side, 0.0));
  for (std::size_t x = 0; x < side; ++x)
    for (std::size_t y = 0; y < side; ++y) {
      const std::size_t lead = x >> (n - 1);
      const std::size_t ny = (y >> 1) | (lead << (n - 1));
      for (std::size_t fresh = 0; fresh < 2; ++fresh) {
        const std::size_t nx = ((x << 1) & (side - 1)) | fresh;
        p[x * side + y][nx * side + ny] += 0.5;
      }
    }
  return p;
}

/// mu(A and T^-lag B) - mu(A) mu(B) for the baker map, with A and B given as
/// predicates on (x, y) evaluated at cell midpoints of resolution k: every
/// assignment of the digits w_{-k} .. w_{lag+k-1} is enumerated and the point
/// and its lag-th image are read off the digit string.
template <class InA, class InB>
double baker_correlation_by_enumeration(InA in_a, InB in_b, int k, int lag) {
  const int lo = -k;
  const int hi = lag + k - 1;
  const int count = hi - lo + 1;
  auto coords = [&](std::uint64_t bits, int shift) {
    // x = 0.w_{shift} w_{shift+1} ..., y = 0.w_{shift-1} w_{shift-2} ...
    double x = 0.0, y = 0.0;
    for (int i = 0; i < k; ++i) {
      x += static_cast<double>((bits >> (shift + i - lo)) & 1U) * std::ldexp(1.0, -(i + 1));
      y += static_cast<double>((bits >> (shift - 1 - i - lo)) & 1U) * std::ldexp(1.0, -(i + 1));
    }
    const double half = std::ldexp(1.0, -(k + 1));
    return std::pair{x + half, y + half};
  };
  double joint = 0.0, ma = 0.0, mb = 0.0;
  const double w = std::ldexp(1.0, -count);
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << count); ++bits) {
    const auto [x0, y0] = coords(bits, 0);
    const auto [xn, yn] = coords(bits, lag);
    const bool a = in_a(x0, y0);
    const bool b = in_b(xn, yn);
    ma += a * w;
    mb += b * w;
    joint += (a && b) * w;
  }
  return joint - ma * mb;
}

}  // namespace oracle
