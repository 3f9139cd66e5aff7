#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "obseq/dynamics.hpp"
#include "obseq/error.hpp"
#include "obseq/rng.hpp"
#include "oracles.hpp"

using namespace obseq;

TEST(Baker, ForwardStepOnBothHalves) {
  EXPECT_EQ(baker_step(PhasePoint::square(0.3, 0.2)), PhasePoint::square(0.6, 0.1));
  const PhasePoint q = baker_step(PhasePoint::square(0.75, 0.5));
  EXPECT_DOUBLE_EQ(q.x(), 0.5);
  EXPECT_DOUBLE_EQ(q.y(), 0.75);
}

TEST(Baker, InverseUndoesForward) {
  const auto pts = sample_invariant(System::baker(), 2000, 11);
  for (const auto& p : pts) {
    const PhasePoint back = baker_step_inverse(baker_step(p));
    EXPECT_NEAR(back.x(), p.x(), 1e-15);
    EXPECT_NEAR(back.y(), p.y(), 1e-15);
  }
}

TEST(Baker, StepsStayInUnitSquare) {
  PhasePoint p = PhasePoint::square(0.999999999, 0.999999999);
  for (int i = 0; i < 200; ++i) {
    p = baker_step(p);
    ASSERT_TRUE(p.in_unit_cube());
  }
}

TEST(Baker, PreservesLebesgueOnAGrid) {
  // Images of uniform samples fall into each of 16 cells with frequency 1/16.
  const auto pts = sample_invariant(System::baker(), 160000, 5);
  std::vector<double> hist(16, 0.0);
  for (const auto& p : pts) {
    const PhasePoint q = baker_step(p);
    hist[static_cast<int>(q.x() * 4) * 4 + static_cast<int>(q.y() * 4)] += 1.0;
  }
  for (double h : hist) EXPECT_NEAR(h / 160000.0, 1.0 / 16.0, 0.003);
}

TEST(ExactCoord, RationalDigitsMatchLongDivision) {
  for (auto [num, den] : {std::pair<std::uint64_t, std::uint64_t>{1, 3}, {2, 7}, {5, 11}, {123456789, 1000000007}}) {
    const ExactCoord c = ExactCoord::from_rational(num, den, 64);
    const auto digits = oracle::binary_digits(num, den, 64);
    for (std::size_t i = 0; i < 64; ++i) EXPECT_EQ(c.digit(i), digits[i]) << num << "/" << den << " digit " << i;
    EXPECT_FALSE(c.dyadic());
  }
  EXPECT_TRUE(ExactCoord::from_rational(3, 8).dyadic());
}

TEST(ExactCoord, DigitBeyondWidthThrows) {
  const ExactCoord c = ExactCoord::from_word(0xAULL << 60, 4);
  EXPECT_EQ(c.digit(0), 1U);
  EXPECT_EQ(c.digit(3), 0U);
  EXPECT_THROW(c.digit(4), WidthExceeded);
}

TEST(ExactBaker, AgreesWithFloatOnShortWords) {
  // Words of at most 50 digits are exact doubles, so the float map is an
  // independent oracle for the digit shift.
  Rng rng(3);
  for (int i = 0; i < 500; ++i) {
    const ExactPoint p{ExactCoord::random(rng, 50), ExactCoord::random(rng, 50)};
    const ExactPoint q = baker_step(p);
    const PhasePoint f = baker_step(p.to_phase_point());
    EXPECT_EQ(q.x.to_double(), f.x());
    EXPECT_EQ(q.y.to_double(), f.y());
    EXPECT_EQ(baker_step_inverse(q), p);
  }
}

TEST(ExactBaker, RejectsExcludedSet) {
  const ExactPoint p{ExactCoord::from_double(0.5), ExactCoord::from_double(0.5)};
  EXPECT_TRUE(p.on_excluded_set());
  EXPECT_THROW(baker_step(p), ExcludedSet);
}

TEST(ExactBaker, ExhaustedWidthThrows) {
  ExactPoint p{ExactCoord::from_word(0b101ULL << 61, 3), ExactCoord::from_word(0b11ULL << 62, 2)};
  p = baker_step(p);
  p = baker_step(p);
  p = baker_step(p);
  EXPECT_THROW(baker_step(p), WidthExceeded);
}

TEST(ExactBaker, OrbitLength) {
  const auto pts = sample_invariant_exact(1, 9);
  const auto orb = orbit(pts.front(), 10);
  ASSERT_EQ(orb.size(), 10U);
  EXPECT_EQ(orb[3], baker_step(orb[2]));
}

TEST(StreamingBaker, YCollectsLeadingDigitsOfX) {
  StreamingBakerOrbit orb(77);
  const std::uint64_t x0 = orb.x_digits();
  for (int k = 0; k < 64; ++k) orb.step();
  // After 64 steps y holds the first 64 digits of x in reverse order.
  std::uint64_t reversed = 0;
  for (int i = 0; i < 64; ++i) reversed |= ((x0 >> (63 - i)) & 1ULL) << i;
  EXPECT_EQ(orb.y_digits(), reversed);
}

TEST(StreamingBaker, MatchesExactStepsOnItsWindow) {
  StreamingBakerOrbit orb(5);
  ExactPoint p{ExactCoord::from_word(orb.x_digits(), 64), ExactCoord::from_word(orb.y_digits(), 64)};
  // The exact point drops one x digit per step; for 11 steps it still has
  // the 53 digits current() reads.
  for (int k = 0; k < 11; ++k) {
    orb.step();
    p = baker_step(p);
    EXPECT_EQ(p.to_phase_point(), orb.current());
  }
}

TEST(Rotation, WrapsAndDistances) {
  EXPECT_NEAR(rotation_step(0.9, 0.25), 0.15, 1e-15);
  EXPECT_NEAR(circle_distance(0.95, 0.05), 0.1, 1e-15);
  EXPECT_NEAR(circle_distance(0.2, 0.6), 0.4, 1e-15);
  const System r = System::rotation();
  EXPECT_NEAR(r.distance(PhasePoint::circle(0.99), PhasePoint::circle(0.01)), 0.02, 1e-15);
  EXPECT_THROW(System::rotation(1.5), InvalidArgument);
}

TEST(Rotation, InverseUndoesForward) {
  const System r = System::rotation();
  for (const auto& p : sample_invariant(r, 1000, 4)) EXPECT_LT(circle_distance(r.step_inverse(r.step(p)).x(), p.x()), 1e-15);
}

TEST(Sampling, ReproducibleForAFixedSeed) {
  EXPECT_EQ(sample_invariant(System::baker(), 50, 1), sample_invariant(System::baker(), 50, 1));
  EXPECT_NE(sample_invariant(System::baker(), 50, 1), sample_invariant(System::baker(), 50, 2));
  EXPECT_THROW(sample_invariant(System::baker(), 0, 1), InvalidArgument);
}

TEST(Rng, DerivedStreamsDiffer) {
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_EQ(Rng(4).split(2).next_u64(), Rng(derive_seed(4, 2)).next_u64());
  Rng r(8);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(OrbitCsv, HeaderAndRows) {
  std::ostringstream os;
  const auto pts = orbit(System::baker(), PhasePoint::square(0.25, 0.5), 2);
  write_orbit_csv(os, pts);
  EXPECT_EQ(os.str(), "x,y\n0.25,0.5\n0.5,0.25\n");
}
