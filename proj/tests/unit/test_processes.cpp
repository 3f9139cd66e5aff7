#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "obseq/error.hpp"
#include "obseq/processes.hpp"
#include "obseq/rng.hpp"
#include "oracles.hpp"

using namespace obseq;

namespace {

SquareMatrix random_sparse_matrix(Rng& rng, std::size_t n, double density) {
  SquareMatrix p(n);
  for (std::size_t i = 0; i < n; ++i) {
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (rng.uniform() < density) {
        p(i, j) = rng.uniform() + 0.1;
        total += p(i, j);
      }
    }
    if (total == 0.0) {
      p(i, (i + 1) % n) = 1.0;
      total = 1.0;
    }
    for (std::size_t j = 0; j < n; ++j) p(i, j) /= total;
  }
  return p;
}

}  // namespace

TEST(SquareMatrix, PowerMatchesRepeatedProduct) {
  const SquareMatrix p = SquareMatrix::from_rows({{0.2, 0.8, 0.0}, {0.5, 0.0, 0.5}, {0.1, 0.3, 0.6}});
  oracle::Matrix expected = p.rows();
  for (int k = 1; k < 7; ++k) expected = oracle::multiply(expected, p.rows());
  const SquareMatrix p7 = p.power(7);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(p7(i, j), expected[i][j], 1e-14);
}

TEST(Stationary, TwoStateClosedForm) {
  const double a = 0.3, b = 0.1;
  const SquareMatrix p = SquareMatrix::from_rows({{1 - a, a}, {b, 1 - b}});
  const StationaryResult st = stationary_distribution(p);
  ASSERT_TRUE(st.converged);
  EXPECT_FALSE(st.averaged);
  EXPECT_NEAR(st.distribution[0], b / (a + b), 1e-10);
  EXPECT_NEAR(st.distribution[1], a / (a + b), 1e-10);
}

TEST(Stationary, PeriodicChainFallsBackToAveragedKernel) {
  // Period 2 with stationary vector (1/4, 1/2, 1/4); plain iteration from
  // the uniform vector oscillates.
  const MarkovModel m(SquareMatrix::from_rows({{0, 1, 0}, {0.5, 0, 0.5}, {0, 1, 0}}));
  EXPECT_TRUE(m.stationary_averaged());
  EXPECT_NEAR(m.stationary()[0], 0.25, 1e-10);
  EXPECT_NEAR(m.stationary()[1], 0.5, 1e-10);
  EXPECT_EQ(period_of(m, 0), 2U);
  EXPECT_FALSE(is_aperiodic(m));
  EXPECT_TRUE(is_irreducible(m));
}

TEST(Stationary, SatisfiesBalanceOnRandomChains) {
  Rng rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const SquareMatrix p = random_sparse_matrix(rng, 6, 0.5);
    const StationaryResult st = stationary_distribution(p);
    if (!st.converged) continue;
    const auto next = p.left_multiply(st.distribution);
    if (!is_irreducible(p)) continue;
    for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(next[i], st.distribution[i], 1e-9);
  }
}

TEST(Period, AgreesWithMatrixPowers) {
  Rng rng(99);
  for (int trial = 0; trial < 60; ++trial) {
    const SquareMatrix p = random_sparse_matrix(rng, 5, 0.3);
    const oracle::Matrix rows = p.rows();
    EXPECT_EQ(is_irreducible(p), oracle::irreducible_by_powers(rows));
    for (std::size_t i = 0; i < 5; ++i) {
      const std::size_t expected = oracle::period_by_powers(rows, i, 60);
      if (expected == 0) {
        EXPECT_THROW(period_of(p, i), NoReturn);
      } else {
        EXPECT_EQ(period_of(p, i), expected) << "trial " << trial << " state " << i;
      }
    }
  }
}

TEST(Period, IrreducibleChainsShareOnePeriod) {
  // Cycle of length 3 with a chord making cycles of lengths 3 and 6 only.
  const SquareMatrix p = SquareMatrix::from_rows(
      {{0, 1, 0, 0, 0, 0}, {0, 0, 1, 0, 0, 0}, {0.5, 0, 0, 0.5, 0, 0}, {0, 0, 0, 0, 1, 0}, {0, 0, 0, 0, 0, 1}, {1, 0, 0, 0, 0, 0}});
  ASSERT_TRUE(is_irreducible(p));
  for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ(period_of(p, i), 3U);
}

TEST(MarkovModel, RejectsBadRows) {
  EXPECT_THROW(MarkovModel(SquareMatrix::from_rows({{0.5, 0.6}, {0.5, 0.5}})), BadDistribution);
  EXPECT_THROW(MarkovModel(SquareMatrix::from_rows({{-0.1, 1.1}, {0.5, 0.5}})), BadDistribution);
}

TEST(Sampling, BernoulliFrequencies) {
  const SymbolSequence s = bernoulli_sample(std::vector<double>{0.2, 0.3, 0.5}, 200000, 3);
  std::vector<double> f(3, 0.0);
  for (Symbol x : s.data) f[x] += 1.0 / 200000.0;
  EXPECT_NEAR(f[0], 0.2, 0.005);
  EXPECT_NEAR(f[1], 0.3, 0.005);
  EXPECT_NEAR(f[2], 0.5, 0.005);
  EXPECT_THROW(bernoulli_sample(std::vector<double>{0.5, 0.6}, 10, 1), BadDistribution);
}

TEST(Sampling, ReproducibleForAFixedSeed) {
  const MarkovModel m(SquareMatrix::from_rows({{0.9, 0.1}, {0.4, 0.6}}));
  EXPECT_EQ(markov_sample(m, 1000, 5).data, markov_sample(m, 1000, 5).data);
  EXPECT_NE(markov_sample(m, 1000, 5).data, markov_sample(m, 1000, 6).data);
}

TEST(Estimation, RecoversTheSamplingMatrix) {
  const SquareMatrix p = SquareMatrix::from_rows({{0.1, 0.6, 0.3}, {0.5, 0.25, 0.25}, {0.3, 0.3, 0.4}});
  const TransitionEstimate est = empirical_transition_matrix(markov_sample(MarkovModel(p), 400000, 8));
  EXPECT_TRUE(est.all_rows_observed());
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(est.probabilities(i, j), p(i, j), 0.006);
}

TEST(Estimation, CountsAreShardable) {
  const SymbolSequence s = bernoulli_sample(std::vector<double>{0.5, 0.5}, 1001, 2);
  TransitionCounts whole(2), left(2), right(2);
  whole.add(s.data);
  left.add(std::span<const Symbol>(s.data).subspan(0, 501));
  right.add(std::span<const Symbol>(s.data).subspan(500));
  left.merge(right);
  EXPECT_EQ(left.counts, whole.counts);
  EXPECT_EQ(whole.total(), 1000U);
}

TEST(Estimation, UnobservedRowsAndShortInput) {
  SymbolSequence s;
  s.alphabet = 3;
  s.data = {0, 1, 0, 1, 0};
  const TransitionEstimate est = empirical_transition_matrix(s);
  EXPECT_FALSE(est.observed[2]);
  EXPECT_EQ(est.probabilities(2, 0), 0.0);
  EXPECT_THROW(est.to_model(), InvalidArgument);
  s.data = {0};
  EXPECT_THROW(empirical_transition_matrix(s), TooShort);
}

TEST(Stationarity, IidPassesAndRegimeChangeFails) {
  const SymbolSequence iid = bernoulli_sample(std::vector<double>{0.5, 0.5}, 100000, 4);
  EXPECT_TRUE(stationarity_check(iid, 10).pass);
  SymbolSequence shifted = bernoulli_sample(std::vector<double>{0.5, 0.5}, 50000, 5);
  const SymbolSequence tail = bernoulli_sample(std::vector<double>{0.8, 0.2}, 50000, 6);
  shifted.data.insert(shifted.data.end(), tail.data.begin(), tail.data.end());
  EXPECT_FALSE(stationarity_check(shifted, 10).pass);
  EXPECT_THROW(stationarity_check(iid, 2000), TooShort);
}

TEST(SequenceIo, RoundTripAndErrors) {
  const SymbolSequence s = bernoulli_sample(std::vector<double>{0.25, 0.25, 0.5}, 50, 7);
  std::stringstream io;
  write_sequence(io, s);
  const SymbolSequence back = read_sequence(io);
  EXPECT_EQ(back.alphabet, 3U);
  EXPECT_EQ(back.data, s.data);
  std::stringstream bad("alphabet=2\n0\n5\n");
  EXPECT_THROW(read_sequence(bad), Error);
  std::stringstream nohdr("0\n1\n");
  EXPECT_THROW(read_sequence(nohdr), ParseError);
}

TEST(MatrixJson, RoundTrip) {
  const SquareMatrix p = SquareMatrix::from_rows({{0.25, 0.75}, {1, 0}});
  EXPECT_EQ(matrix_from_json(matrix_to_json(p)), p);
}
