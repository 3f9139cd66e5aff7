#include "obseq/coarse_grain.hpp"

#include <cmath>

#include "obseq/error.hpp"

namespace obseq {

SymbolSequence coarse_grain(std::span<const PhasePoint> points, const Partition& part) {
  SymbolSequence seq;
  seq.alphabet = part.size();
  seq.origin = SymbolSequence::Origin::CoarseGrained;
  seq.data.reserve(points.size());
  for (const auto& p : points) seq.data.push_back(static_cast<Symbol>(part.observe(p)));
  return seq;
}

SymbolSequence coarse_grain(const System& sys, const Partition& part, std::size_t len, std::uint64_t seed) {
  if (len == 0) throw InvalidArgument("coarse_grain: len must be >= 1");
  if (len > kMaxOrbitLength) throw ResourceLimit("coarse_grain: len above " + std::to_string(kMaxOrbitLength));
  if (part.dim() != sys.dimension()) throw InvalidArgument("coarse_grain: partition dimension does not match system");
  SymbolSequence seq;
  seq.alphabet = part.size();
  seq.origin = SymbolSequence::Origin::CoarseGrained;
  seq.data.resize(len);
  if (sys.kind() == System::Kind::Baker) {
    StreamingBakerOrbit orb(seed);
    for (std::size_t t = 0; t < len; ++t) {
      seq.data[t] = static_cast<Symbol>(part.observe(orb.current()));
      orb.step();
    }
  } else {
    PhasePoint p = sample_invariant(sys, 1, seed).front();
    for (std::size_t t = 0; t < len; ++t) {
      seq.data[t] = static_cast<Symbol>(part.observe(p));
      p = sys.step(p);
    }
  }
  return seq;
}

SquareMatrix baker_image_chain(const Partition& part, int resolution) {
  if (part.dim() != 2) throw InvalidArgument("baker_image_chain: partition must be 2-dimensional");
  if (resolution < 1 || resolution > 12) throw ResourceLimit("baker_image_chain: resolution must lie in 1..12");
  const std::size_t n = part.size();
  const std::size_t k = std::size_t{1} << resolution;
  const double h = std::ldexp(1.0, -resolution);
  SquareMatrix counts(n);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const PhasePoint p = PhasePoint::square((static_cast<double>(i) + 0.5) * h, (static_cast<double>(j) + 0.5) * h);
      counts(part.observe(p), part.observe(baker_step(p))) += 1.0;
    }
  }
  for (std::size_t a = 0; a < n; ++a) {
    double total = 0.0;
    for (std::size_t b = 0; b < n; ++b) total += counts(a, b);
    if (total == 0.0) throw ResourceLimit("baker_image_chain: resolution too coarse for cell " + std::to_string(a));
    for (std::size_t b = 0; b < n; ++b) counts(a, b) /= total;
  }
  return counts;
}

double arc_overlap(double a0, double a1, double shift, double b0, double b1) {
  auto overlap = [](double l0, double l1, double r0, double r1) { return std::max(0.0, std::min(l1, r1) - std::max(l0, r0)); };
  double s = std::fmod(shift, 1.0);
  if (s < 0.0) s += 1.0;
  double lo = a0 + s;
  double hi = a1 + s;
  if (lo >= 1.0) {
    lo -= 1.0;
    hi -= 1.0;
  }
  if (hi <= 1.0) return overlap(lo, hi, b0, b1);
  return overlap(lo, 1.0, b0, b1) + overlap(0.0, hi - 1.0, b0, b1);
}

SquareMatrix rotation_image_chain(const Partition& part, double alpha) {
  if (part.dim() != 1) throw InvalidArgument("rotation_image_chain: partition must be 1-dimensional");
  const std::size_t n = part.size();
  SquareMatrix p(n);
  for (std::size_t a = 0; a < n; ++a) {
    const Box& ca = part.cell(a);
    const double len = ca.hi[0] - ca.lo[0];
    for (std::size_t b = 0; b < n; ++b) {
      const Box& cb = part.cell(b);
      p(a, b) = arc_overlap(ca.lo[0], ca.hi[0], alpha, cb.lo[0], cb.hi[0]) / len;
    }
  }
  return p;
}

}  // namespace obseq
