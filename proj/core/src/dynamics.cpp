#include "obseq/dynamics.hpp"

#include <charconv>
#include <cmath>
#include <numeric>
#include <ostream>

#include "obseq/error.hpp"

namespace obseq {

namespace {

std::size_t words_for(std::size_t width) { return (width + 63) / 64; }

constexpr double kBelowOne = 0x1.fffffffffffffp-1;

}  // namespace

bool PhasePoint::in_unit_cube() const noexcept {
  for (int i = 0; i < dim; ++i) {
    if (!(coords[i] >= 0.0 && coords[i] < 1.0)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// ExactCoord

ExactCoord ExactCoord::from_word(std::uint64_t word, std::size_t width) {
  if (width > 64) throw InvalidArgument("from_word: width must be <= 64");
  ExactCoord c;
  c.width_ = width;
  if (width > 0) {
    const std::uint64_t mask = width == 64 ? ~0ULL : ~(~0ULL >> width);
    c.words_.push_back(word & mask);
  }
  return c;
}

ExactCoord ExactCoord::from_digits(std::span<const std::uint8_t> digits, bool dyadic) {
  ExactCoord c;
  c.width_ = digits.size();
  c.dyadic_ = dyadic;
  c.words_.assign(words_for(c.width_), 0);
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (digits[i] > 1) throw InvalidArgument("from_digits: digits must be 0 or 1");
    if (digits[i]) c.words_[i / 64] |= 1ULL << (63 - i % 64);
  }
  return c;
}

ExactCoord ExactCoord::from_rational(std::uint64_t num, std::uint64_t den, std::size_t width) {
  if (den == 0 || num >= den) throw InvalidArgument("from_rational: need 0 <= num < den");
  if (den > (1ULL << 63)) throw InvalidArgument("from_rational: denominator too large");
  const std::uint64_t reduced = den / std::gcd(num, den);
  std::vector<std::uint8_t> digits(width);
  std::uint64_t r = num;
  for (auto& d : digits) {
    r *= 2;
    d = r >= den ? 1 : 0;
    if (d) r -= den;
  }
  return from_digits(digits, (reduced & (reduced - 1)) == 0);
}

ExactCoord ExactCoord::from_double(double v, std::size_t width) {
  if (!(v >= 0.0 && v < 1.0)) throw InvalidArgument("from_double: value outside [0,1)");
  std::vector<std::uint8_t> digits(width);
  for (auto& d : digits) {
    v *= 2.0;  // exact in binary floating point
    d = v >= 1.0 ? 1 : 0;
    v -= d;
  }
  return from_digits(digits, true);
}

ExactCoord ExactCoord::random(Rng& rng, std::size_t width) {
  ExactCoord c;
  c.width_ = width;
  c.words_.resize(words_for(width));
  for (auto& w : c.words_) w = rng.next_u64();
  c.trim();
  return c;
}

unsigned ExactCoord::digit(std::size_t i) const {
  if (i >= width_) throw WidthExceeded("digit index past known width");
  return static_cast<unsigned>((words_[i / 64] >> (63 - i % 64)) & 1U);
}

unsigned ExactCoord::shift_out() {
  if (width_ == 0) throw WidthExceeded("no known digit left to shift out");
  const auto lead = static_cast<unsigned>(words_[0] >> 63);
  for (std::size_t k = 0; k < words_.size(); ++k) {
    const std::uint64_t carry = k + 1 < words_.size() ? words_[k + 1] >> 63 : 0;
    words_[k] = (words_[k] << 1) | carry;
  }
  --width_;
  trim();
  return lead;
}

void ExactCoord::shift_in(unsigned b) {
  ++width_;
  if (words_.size() < words_for(width_)) words_.push_back(0);
  for (std::size_t k = words_.size(); k-- > 0;) {
    const std::uint64_t carry = k > 0 ? words_[k - 1] << 63 : 0;
    words_[k] = (words_[k] >> 1) | carry;
  }
  words_[0] |= static_cast<std::uint64_t>(b & 1U) << 63;
}

double ExactCoord::to_double() const noexcept {
  if (words_.empty()) return 0.0;
  return static_cast<double>(words_[0] >> 11) * 0x1.0p-53;
}

void ExactCoord::trim() {
  words_.resize(words_for(width_));
  if (width_ % 64 != 0) words_.back() &= ~(~0ULL >> (width_ % 64));
}

// ---------------------------------------------------------------------------
// Maps

PhasePoint baker_step(const PhasePoint& p) {
  const double x = p.x();
  const double y = p.y();
  if (x < 0.5) return PhasePoint::square(2.0 * x, y / 2.0);
  // (y + 1) / 2 can round up to 1 for y within one ulp of 1.
  return PhasePoint::square(2.0 * x - 1.0, std::min((y + 1.0) / 2.0, kBelowOne));
}

PhasePoint baker_step_inverse(const PhasePoint& p) {
  const double x = p.x();
  const double y = p.y();
  if (y < 0.5) return PhasePoint::square(x / 2.0, 2.0 * y);
  return PhasePoint::square(std::min((x + 1.0) / 2.0, kBelowOne), 2.0 * y - 1.0);
}

ExactPoint baker_step(const ExactPoint& p) {
  if (p.on_excluded_set()) throw ExcludedSet("baker_step: point lies on a dyadic grid line");
  ExactPoint q = p;
  q.y.shift_in(q.x.shift_out());
  return q;
}

ExactPoint baker_step_inverse(const ExactPoint& p) {
  if (p.on_excluded_set()) throw ExcludedSet("baker_step_inverse: point lies on a dyadic grid line");
  ExactPoint q = p;
  q.x.shift_in(q.y.shift_out());
  return q;
}

double rotation_step(double m, double alpha) {
  double r = m + alpha;
  if (r >= 1.0) r -= 1.0;
  return r;
}

double circle_distance(double a, double b) noexcept {
  const double d = std::fabs(a - b);
  return std::min(d, 1.0 - d);
}

// ---------------------------------------------------------------------------
// System

System System::rotation(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("rotation: alpha must lie in (0,1)");
  return System(Kind::Rotation, alpha);
}

std::string System::name() const {
  return kind_ == Kind::Baker ? "baker" : "rotation(" + format_double(alpha_) + ")";
}

PhasePoint System::step(const PhasePoint& p) const {
  if (kind_ == Kind::Baker) return baker_step(p);
  return PhasePoint::circle(rotation_step(p.x(), alpha_));
}

PhasePoint System::step_inverse(const PhasePoint& p) const {
  if (kind_ == Kind::Baker) return baker_step_inverse(p);
  double r = p.x() - alpha_;
  if (r < 0.0) r += 1.0;
  return PhasePoint::circle(std::min(r, kBelowOne));
}

double System::distance(const PhasePoint& a, const PhasePoint& b) const {
  if (kind_ == Kind::Baker) return std::hypot(a.x() - b.x(), a.y() - b.y());
  return circle_distance(a.x(), b.x());
}

bool System::contains(const PhasePoint& p) const noexcept {
  return p.dim == dimension() && p.in_unit_cube();
}

// ---------------------------------------------------------------------------
// Orbits and sampling

std::vector<PhasePoint> orbit(const System& sys, const PhasePoint& p0, std::size_t steps) {
  if (steps == 0) throw InvalidArgument("orbit: steps must be >= 1");
  if (steps > kMaxOrbitLength) throw ResourceLimit("orbit: steps above " + std::to_string(kMaxOrbitLength));
  if (!sys.contains(p0)) throw InvalidArgument("orbit: initial point outside phase space");
  std::vector<PhasePoint> out;
  out.reserve(steps);
  out.push_back(p0);
  for (std::size_t t = 1; t < steps; ++t) out.push_back(sys.step(out.back()));
  return out;
}

std::vector<ExactPoint> orbit(const ExactPoint& p0, std::size_t steps) {
  if (steps == 0) throw InvalidArgument("orbit: steps must be >= 1");
  std::vector<ExactPoint> out;
  out.reserve(steps);
  out.push_back(p0);
  for (std::size_t t = 1; t < steps; ++t) out.push_back(baker_step(out.back()));
  return out;
}

std::vector<PhasePoint> sample_invariant(const System& sys, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw InvalidArgument("sample_invariant: n must be >= 1");
  Rng rng(seed);
  std::vector<PhasePoint> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (sys.kind() == System::Kind::Baker) {
      const double x = rng.uniform();
      out.push_back(PhasePoint::square(x, rng.uniform()));
    } else {
      out.push_back(PhasePoint::circle(rng.uniform()));
    }
  }
  return out;
}

std::vector<ExactPoint> sample_invariant_exact(std::size_t n, std::uint64_t seed, std::size_t width) {
  if (n == 0) throw InvalidArgument("sample_invariant_exact: n must be >= 1");
  Rng rng(seed);
  std::vector<ExactPoint> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    ExactCoord x = ExactCoord::random(rng, width);
    out.push_back({std::move(x), ExactCoord::random(rng, width)});
  }
  return out;
}

StreamingBakerOrbit::StreamingBakerOrbit(std::uint64_t seed) : rng_(seed) {
  x_ = rng_.next_u64();
  y_ = rng_.next_u64();
}

void StreamingBakerOrbit::step() { baker_shift_digits(x_, y_, rng_.bit()); }

PhasePoint StreamingBakerOrbit::current() const noexcept {
  return PhasePoint::square(static_cast<double>(x_ >> 11) * 0x1.0p-53,
                            static_cast<double>(y_ >> 11) * 0x1.0p-53);
}

// ---------------------------------------------------------------------------
// Output

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_orbit_csv(std::ostream& os, std::span<const PhasePoint> points) {
  const int dim = points.empty() ? 2 : points.front().dim;
  os << (dim == 2 ? "x,y\n" : "x\n");
  for (const auto& p : points) {
    os << format_double(p.x());
    if (dim == 2) os << ',' << format_double(p.y());
    os << '\n';
  }
}

}  // namespace obseq
