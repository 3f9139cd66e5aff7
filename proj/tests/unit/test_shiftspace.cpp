#include <gtest/gtest.h>

#include <cmath>

#include "obseq/error.hpp"
#include "obseq/rng.hpp"
#include "obseq/shiftspace.hpp"
#include "oracles.hpp"

using namespace obseq;

namespace {

// Sum of product weights over every word on indices [lo, hi] that satisfies
// the cylinder, with `weight(word)` giving the probability of the word.
template <class Weight>
double enumerate_cylinder(const CylinderSpec& c, std::int64_t lo, std::int64_t hi, Weight weight) {
  const std::size_t n = c.alphabet();
  const std::size_t len = static_cast<std::size_t>(hi - lo + 1);
  std::vector<Symbol> w(len, 0);
  double total = 0.0;
  while (true) {
    if (c.contains(w, static_cast<std::size_t>(-lo))) total += weight(w);
    std::size_t k = 0;
    while (k < len && ++w[k] == n) w[k++] = 0;
    if (k == len) break;
  }
  return total;
}

}  // namespace

TEST(Cylinder, BernoulliMeasureMatchesEnumeration) {
  const std::vector<double> probs{0.2, 0.5, 0.3};
  const CylinderSpec c(3, {{-1, {0, 2}}, {1, {1}}, {3, {0, 1}}});
  const double expected = enumerate_cylinder(c, -1, 3, [&](const std::vector<Symbol>& w) {
    double p = 1.0;
    for (Symbol s : w) p *= probs[s];
    return p;
  });
  EXPECT_NEAR(cylinder_measure_bernoulli(c, probs), expected, 1e-15);
  EXPECT_NEAR(cylinder_measure_bernoulli(c, probs), 0.5 * 0.5 * 0.7, 1e-15);
}

TEST(Cylinder, MarkovMeasureMatchesPathEnumeration) {
  const MarkovModel m(SquareMatrix::from_rows({{0.1, 0.6, 0.3}, {0.5, 0.25, 0.25}, {0.3, 0.3, 0.4}}));
  const CylinderSpec c(3, {{0, {1}}, {2, {0, 2}}, {5, {2}}});
  const double expected = enumerate_cylinder(c, 0, 5, [&](const std::vector<Symbol>& w) {
    double p = m.stationary()[w[0]];
    for (std::size_t t = 1; t < w.size(); ++t) p *= m(w[t - 1], w[t]);
    return p;
  });
  EXPECT_NEAR(cylinder_measure_markov(c, m), expected, 1e-12);
}

TEST(Cylinder, MeasuresAreShiftInvariant) {
  const MarkovModel m(SquareMatrix::from_rows({{0.7, 0.3}, {0.2, 0.8}}));
  const std::vector<double> probs{0.4, 0.6};
  const CylinderSpec c(2, {{0, {1}}, {1, {0}}, {4, {1}}});
  for (std::int64_t h : {-7, -1, 3, 100}) {
    EXPECT_NEAR(cylinder_measure_markov(c.translated(h), m), cylinder_measure_markov(c, m), 1e-12);
    EXPECT_DOUBLE_EQ(cylinder_measure_bernoulli(c.translated(h), probs), cylinder_measure_bernoulli(c, probs));
  }
}

TEST(Cylinder, ValidationAndJson) {
  EXPECT_THROW(CylinderSpec(2, {{1, {0}}, {0, {1}}}), InvalidArgument);
  EXPECT_THROW(CylinderSpec(2, {{0, {}}}), InvalidArgument);
  EXPECT_THROW(CylinderSpec(2, {{0, {2}}}), InvalidArgument);
  const CylinderSpec c(2, {{-2, {0}}, {3, {0, 1}}});
  const CylinderSpec back = CylinderSpec::from_json(c.to_json());
  EXPECT_EQ(back.constraints().size(), 2U);
  EXPECT_EQ(back.constraints()[0].t, -2);
}

TEST(ShiftWindow, LeftShiftMovesOrigin) {
  const ShiftWindow w(2, {0, 1, 1, 0, 1}, 2);
  EXPECT_EQ(w.at(-2), 0U);
  EXPECT_EQ(observe_zeroth(w), 1U);
  const ShiftWindow s = shift_left(w);
  EXPECT_EQ(observe_zeroth(s), 0U);
  for (std::int64_t t = s.min_index(); t <= s.max_index(); ++t) EXPECT_EQ(s.at(t), w.at(t + 1));
  EXPECT_THROW(w.at(3), WindowExhausted);
  const ShiftWindow end(2, {0, 1}, 1);
  EXPECT_THROW(shift_left(end), WindowExhausted);
}

TEST(Coding, DigitsOfRationalPoint) {
  // x = 1/3 = 0.0101..., y = 2/7 = 0.010010...
  const ExactPoint p{ExactCoord::from_rational(1, 3), ExactCoord::from_rational(2, 7)};
  const ShiftWindow w = baker_to_shift(p, 6, 6);
  const auto xd = oracle::binary_digits(1, 3, 6);
  const auto yd = oracle::binary_digits(2, 7, 6);
  for (int i = 0; i < 6; ++i) {
    EXPECT_EQ(w.at(i), xd[i]);
    EXPECT_EQ(w.at(-1 - i), yd[i]);
  }
  EXPECT_THROW(baker_to_shift(p, 65, 4), WidthExceeded);
  const ExactPoint dyadic{ExactCoord::from_double(0.25), ExactCoord::from_rational(1, 3)};
  EXPECT_THROW(baker_to_shift(dyadic, 2, 2), ExcludedSet);
}

TEST(Coding, InverseCodingRoundTrips) {
  for (const ExactPoint& p : sample_invariant_exact(50, 3)) {
    const ShiftWindow w = baker_to_shift(p, 64, 64);
    EXPECT_EQ(shift_to_exact(w), p);
    const PhasePoint f = shift_to_baker(w);
    EXPECT_EQ(f, p.to_phase_point());
  }
}

TEST(Coding, ConjugacyOnRandomPoints) {
  for (const ExactPoint& p : sample_invariant_exact(200, 17)) {
    const ConjugacyReport r = conjugacy_check(p, 50);
    EXPECT_TRUE(r.conjugate);
    EXPECT_EQ(r.steps_checked, 50U);
  }
  EXPECT_THROW(conjugacy_check(sample_invariant_exact(1, 1).front(), 64), WidthExceeded);
}

TEST(Entropy, BernoulliValues) {
  EXPECT_DOUBLE_EQ(ks_entropy_bernoulli(std::vector<double>{0.5, 0.5}), 1.0);
  EXPECT_DOUBLE_EQ(ks_entropy_bernoulli(std::vector<double>{1.0, 0.0}), 0.0);
  EXPECT_NEAR(ks_entropy_bernoulli(std::vector<double>{0.25, 0.25, 0.25, 0.25}), 2.0, 1e-15);
  EXPECT_THROW(ks_entropy_bernoulli(std::vector<double>{0.5, 0.6}), BadDistribution);
}

TEST(Entropy, RateEstimateOfIidAndMarkov) {
  const SymbolSequence iid = bernoulli_sample(std::vector<double>{0.5, 0.5}, 400000, 1);
  EXPECT_NEAR(entropy_rate_estimate(iid, 6), 1.0, 0.01);
  // Markov entropy rate sum_i pi_i H(P_i).
  const MarkovModel m(SquareMatrix::from_rows({{0.9, 0.1}, {0.4, 0.6}}));
  double h = 0.0;
  for (std::size_t i = 0; i < 2; ++i) h += m.stationary()[i] * ks_entropy_bernoulli(m.transition().row(i));
  EXPECT_NEAR(entropy_rate_estimate(markov_sample(m, 400000, 2), 4), h, 0.01);
}

TEST(WordFrequencies, SumToOneAndIndexBaseN) {
  SymbolSequence s;
  s.alphabet = 3;
  s.data = {0, 1, 2, 0, 1};
  const auto f = word_frequencies(s, 2);
  ASSERT_EQ(f.size(), 9U);
  EXPECT_DOUBLE_EQ(f[0 * 3 + 1], 0.5);
  EXPECT_DOUBLE_EQ(f[1 * 3 + 2], 0.25);
  double total = 0.0;
  for (double v : f) total += v;
  EXPECT_DOUBLE_EQ(total, 1.0);
}

TEST(WindowEquivalence, SameProcessPassesDifferentFails) {
  const SymbolSequence a = bernoulli_sample(std::vector<double>{0.5, 0.5}, 200000, 1);
  const SymbolSequence b = bernoulli_sample(std::vector<double>{0.5, 0.5}, 200000, 2);
  const SymbolSequence c = bernoulli_sample(std::vector<double>{0.6, 0.4}, 200000, 3);
  EXPECT_TRUE(finite_window_equivalence(a, b, 3, 0.01).pass);
  const WindowEquivalenceReport r = finite_window_equivalence(a, c, 3, 0.01);
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.worst_word.size(), 3U);
  EXPECT_GT(r.std_error, 0.0);
  const SymbolSequence tiny = bernoulli_sample(std::vector<double>{0.5, 0.5}, 100, 4);
  EXPECT_THROW(finite_window_equivalence(tiny, tiny, 3, 0.01), TooShort);
}
