#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "obseq/dynamics.hpp"
#include "obseq/processes.hpp"

namespace obseq {

/// The cylinder set {omega : omega_{t_k} in A_k for every constraint k}.
class CylinderSpec {
 public:
  struct Constraint {
    std::int64_t t = 0;
    std::vector<Symbol> allowed;  // sorted, unique
  };

  /// Throws InvalidArgument unless indices strictly increase and every
  /// allowed set is a nonempty subset of the alphabet.
  CylinderSpec(std::size_t alphabet, std::vector<Constraint> constraints);

  /// Cylinder fixing omega_{start + k} = word[k].
  static CylinderSpec word(std::size_t alphabet, std::int64_t start, std::span<const Symbol> word);

  std::size_t alphabet() const noexcept { return alphabet_; }
  const std::vector<Constraint>& constraints() const noexcept { return constraints_; }

  /// Same constraints with every index moved by h.
  CylinderSpec translated(std::int64_t h) const;
  /// Whether a window of coordinates satisfies every constraint; `origin` is
  /// the position of omega_0 in `coords`.
  bool contains(std::span<const Symbol> coords, std::size_t origin) const;

  nlohmann::json to_json() const;
  static CylinderSpec from_json(const nlohmann::json& j);

 private:
  std::size_t alphabet_;
  std::vector<Constraint> constraints_;
};

/// Product measure of a cylinder under i.i.d. marginals `probs`.
double cylinder_measure_bernoulli(const CylinderSpec& c, std::span<const double> probs);

/// Stationary Markov measure of a cylinder: pi(first) times transition
/// probabilities, with gaps between constrained indices bridged by matrix
/// powers. Throws NotStationary if pi P != pi within 1e-10.
double cylinder_measure_markov(const CylinderSpec& c, const MarkovModel& model);

/// Finite window omega_{-L} ... omega_{R} of a bi-infinite sequence.
class ShiftWindow {
 public:
  ShiftWindow(std::size_t alphabet, std::vector<Symbol> symbols, std::size_t origin);

  std::size_t alphabet() const noexcept { return alphabet_; }
  /// L: number of coordinates with negative index.
  std::size_t left() const noexcept { return origin_; }
  /// R: number of coordinates with positive index.
  std::size_t right() const noexcept { return symbols_.size() - origin_ - 1; }
  std::int64_t min_index() const noexcept { return -static_cast<std::int64_t>(origin_); }
  std::int64_t max_index() const noexcept { return static_cast<std::int64_t>(right()); }
  bool has(std::int64_t t) const noexcept { return t >= min_index() && t <= max_index(); }
  /// omega_t. Throws WindowExhausted outside the window.
  Symbol at(std::int64_t t) const;
  const std::vector<Symbol>& symbols() const noexcept { return symbols_; }
  std::size_t origin() const noexcept { return origin_; }

  friend bool operator==(const ShiftWindow&, const ShiftWindow&) = default;

 private:
  std::size_t alphabet_;
  std::vector<Symbol> symbols_;
  std::size_t origin_;
};

/// Left shift: (T omega)_t = omega_{t+1}. Throws WindowExhausted when R = 0.
ShiftWindow shift_left(const ShiftWindow& w);

/// Observation of the zeroth coordinate.
inline Symbol observe_zeroth(const ShiftWindow& w) { return w.at(0); }

/// Binary-expansion coding of a baker state: omega_0 ... omega_{R-1} are the
/// leading R digits of x and omega_{-1} ... omega_{-L} the leading L digits
/// of y. Requires R >= 1. Throws ExcludedSet for dyadic points and
/// WidthExceeded if more digits are requested than are known.
ShiftWindow baker_to_shift(const ExactPoint& p, std::size_t left, std::size_t right);

/// Inverse coding over the available digits:
/// x = sum_{i>=0} omega_i 2^{-(i+1)}, y = sum_{i>=1} omega_{-i} 2^{-i}.
PhasePoint shift_to_baker(const ShiftWindow& w);
/// The same inverse coding, kept exact (non-dyadic, width L and R + 1).
ExactPoint shift_to_exact(const ShiftWindow& w);

/// Entropy sum -p_i log2 p_i of a Bernoulli shift, in bits.
double ks_entropy_bernoulli(std::span<const double> probs);

/// Block entropy H_k - H_{k-1} (bits per symbol) from overlapping words.
double entropy_rate_estimate(const SymbolSequence& seq, std::size_t block);

struct ConjugacyReport {
  bool conjugate = true;
  std::size_t steps_checked = 0;
  /// First step at which coding and shift disagree, if any.
  std::size_t first_mismatch = 0;
};

/// Checks phi(T^k p) == sigma^k(phi(p)) on the overlapping coordinates for
/// k = 1 .. steps, where T is the exact baker step and sigma the left shift.
/// Requires steps < width of x. Throws ExcludedSet on the excluded set.
ConjugacyReport conjugacy_check(const ExactPoint& p, std::size_t steps);

struct WindowEquivalenceReport {
  bool pass = false;
  std::size_t window = 0;
  double tolerance = 0.0;
  double max_deviation = 0.0;
  /// Word attaining max_deviation, and its two frequencies.
  std::vector<Symbol> worst_word;
  double freq_a = 0.0;
  double freq_b = 0.0;
  /// Binomial standard error of the difference at the worst word.
  double std_error = 0.0;
};

/// Compares empirical frequencies of every length-W word (overlapping
/// windows) in two sequences. Both must share an alphabet N and have length
/// >= 100 * N^W (TooShort).
WindowEquivalenceReport finite_window_equivalence(const SymbolSequence& a, const SymbolSequence& b,
                                                  std::size_t window, double tol);

/// Relative frequencies of all N^W words, indexed by base-N value.
std::vector<double> word_frequencies(const SymbolSequence& seq, std::size_t window);

}  // namespace obseq
