#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "obseq/rng.hpp"

namespace obseq {

/// (sqrt(5) - 1) / 2, the default irrational rotation number.
inline constexpr double kGoldenConjugate = 0.61803398874989484820;

/// A state of a deterministic system: a point of [0,1)^2 (baker) or of the
/// circle [0,1) (rotation). Unused coordinates are zero.
struct PhasePoint {
  std::array<double, 2> coords{};
  int dim = 2;

  static PhasePoint square(double x, double y) { return {{x, y}, 2}; }
  static PhasePoint circle(double m) { return {{m, 0.0}, 1}; }

  double x() const noexcept { return coords[0]; }
  double y() const noexcept { return coords[1]; }

  bool in_unit_cube() const noexcept;

  friend bool operator==(const PhasePoint&, const PhasePoint&) = default;
};

/// One coordinate in [0,1) held as its binary expansion 0.b0 b1 b2 ...
///
/// `width` digits are known. A coordinate flagged `dyadic()` is a rational
/// j/2^n and the point lies on one of the excluded grid lines. Otherwise the
/// known digits are a truncation of a non-dyadic real whose remaining digits
/// are unknown.
class ExactCoord {
 public:
  ExactCoord() = default;

  /// Leading `width` bits of `word` (MSB first), non-terminating.
  static ExactCoord from_word(std::uint64_t word, std::size_t width = 64);
  /// Digits given explicitly, one 0/1 value per entry.
  static ExactCoord from_digits(std::span<const std::uint8_t> digits, bool dyadic = false);
  /// Expansion of num/den by long division; dyadic iff the reduced
  /// denominator is a power of two. Requires num < den <= 2^63.
  static ExactCoord from_rational(std::uint64_t num, std::uint64_t den, std::size_t width = 64);
  /// Expansion of a double. Every double is a dyadic rational, so the result
  /// is always flagged dyadic; use from_word() or random() for generic points.
  static ExactCoord from_double(double v, std::size_t width = 64);
  /// `width` fair random digits.
  static ExactCoord random(Rng& rng, std::size_t width = 64);

  std::size_t width() const noexcept { return width_; }
  bool dyadic() const noexcept { return dyadic_; }

  /// Digit i after the binary point, 0 <= i < width.
  unsigned digit(std::size_t i) const;

  /// x -> 2x mod 1: removes and returns the leading digit.
  unsigned shift_out();
  /// y -> (y + b) / 2: prepends digit b.
  void shift_in(unsigned b);

  /// Value of the known digits, truncated to double precision.
  double to_double() const noexcept;

  friend bool operator==(const ExactCoord&, const ExactCoord&) = default;

 private:
  void trim();

  std::vector<std::uint64_t> words_;  // digit i at bit 63 - i%64 of words_[i/64]
  std::size_t width_ = 0;
  bool dyadic_ = false;
};

/// A baker-map state in exact binary form.
struct ExactPoint {
  ExactCoord x;
  ExactCoord y;

  /// True if either coordinate is a dyadic rational (the excluded set).
  bool on_excluded_set() const noexcept { return x.dyadic() || y.dyadic(); }
  PhasePoint to_phase_point() const noexcept { return PhasePoint::square(x.to_double(), y.to_double()); }

  friend bool operator==(const ExactPoint&, const ExactPoint&) = default;
};

/// Baker's map: (2x, y/2) for x < 1/2, (2x - 1, (y + 1)/2) otherwise.
PhasePoint baker_step(const PhasePoint& p);
/// Inverse baker's map: (x/2, 2y) for y < 1/2, ((x + 1)/2, 2y - 1) otherwise.
PhasePoint baker_step_inverse(const PhasePoint& p);

/// Exact baker step: x loses its leading digit, which becomes y's leading
/// digit. Throws ExcludedSet on the excluded set and WidthExceeded when no
/// digit of x is known.
ExactPoint baker_step(const ExactPoint& p);
ExactPoint baker_step_inverse(const ExactPoint& p);

/// m + alpha mod 1.
double rotation_step(double m, double alpha);

/// Circle distance min(|a - b|, 1 - |a - b|) on [0,1).
double circle_distance(double a, double b) noexcept;

class System {
 public:
  enum class Kind { Baker, Rotation };

  static System baker() { return System(Kind::Baker, 0.0); }
  /// Rotation by alpha in (0,1); throws InvalidArgument otherwise.
  static System rotation(double alpha = kGoldenConjugate);

  Kind kind() const noexcept { return kind_; }
  double alpha() const noexcept { return alpha_; }
  int dimension() const noexcept { return kind_ == Kind::Baker ? 2 : 1; }
  std::string name() const;

  PhasePoint step(const PhasePoint& p) const;
  PhasePoint step_inverse(const PhasePoint& p) const;
  /// Euclidean on the square, circle distance on [0,1).
  double distance(const PhasePoint& a, const PhasePoint& b) const;
  bool contains(const PhasePoint& p) const noexcept;

 private:
  System(Kind kind, double alpha) : kind_(kind), alpha_(alpha) {}

  Kind kind_;
  double alpha_;
};

/// [p0, T(p0), ..., T^{steps-1}(p0)] in double precision.
///
/// Note that float baker orbits lose one bit of x per step and collapse onto
/// x = 0 after roughly 53 steps; use StreamingBakerOrbit for long orbits.
/// Longest orbit or coarse-grained run accepted (ResourceLimit above).
inline constexpr std::size_t kMaxOrbitLength = 100000000;

std::vector<PhasePoint> orbit(const System& sys, const PhasePoint& p0, std::size_t steps);
std::vector<ExactPoint> orbit(const ExactPoint& p0, std::size_t steps);

/// n points i.i.d. from the invariant (Lebesgue) measure.
std::vector<PhasePoint> sample_invariant(const System& sys, std::size_t n, std::uint64_t seed);
/// n random exact baker points with `width` known digits per coordinate.
std::vector<ExactPoint> sample_invariant_exact(std::size_t n, std::uint64_t seed, std::size_t width = 64);

/// One exact baker step on 64-digit windows of x and y: the leading digit of
/// x moves to the front of y and `incoming` (the next unseen digit of x)
/// enters at the back of x.
inline void baker_shift_digits(std::uint64_t& x, std::uint64_t& y, unsigned incoming) noexcept {
  const std::uint64_t lead = x >> 63;
  x = (x << 1) | (incoming & 1U);
  y = (y >> 1) | (lead << 63);
}

/// Exact baker orbit of a uniformly random point of unbounded precision.
///
/// The state keeps the leading 64 digits of x and of y. Digits of x beyond
/// the window are drawn from a seeded stream only when they shift into view,
/// so the orbit is that of one fixed real point (determined by the seed) and
/// every visited state is exact to 64 digits, for any orbit length.
class StreamingBakerOrbit {
 public:
  explicit StreamingBakerOrbit(std::uint64_t seed);

  void step();
  /// Current state truncated to 53 digits per coordinate (never rounds up to 1).
  PhasePoint current() const noexcept;
  std::uint64_t x_digits() const noexcept { return x_; }
  std::uint64_t y_digits() const noexcept { return y_; }

 private:
  Rng rng_;
  std::uint64_t x_;
  std::uint64_t y_;
};

/// CSV with header "x,y" (or "x" in 1D), shortest round-trip decimal digits.
void write_orbit_csv(std::ostream& os, std::span<const PhasePoint> points);

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double v);

}  // namespace obseq
