#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "obseq/stats.hpp"

namespace obseq {

using Symbol = std::uint32_t;

/// Finite window Z_0 ... Z_{n-1} of a realisation over symbols 0 .. alphabet-1.
struct SymbolSequence {
  enum class Origin { Sampled, CoarseGrained, Loaded };

  std::size_t alphabet = 0;
  std::vector<Symbol> data;
  Origin origin = Origin::Sampled;

  std::size_t size() const noexcept { return data.size(); }
  /// Throws InvalidArgument if any entry is >= alphabet.
  void validate() const;
};

/// Dense row-major n x n matrix of doubles.
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n, double fill = 0.0) : n_(n), v_(n * n, fill) {}
  static SquareMatrix identity(std::size_t n);
  static SquareMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t size() const noexcept { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return v_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return v_[i * n_ + j]; }
  std::span<const double> row(std::size_t i) const { return {v_.data() + i * n_, n_}; }

  SquareMatrix operator*(const SquareMatrix& rhs) const;
  /// Row vector times matrix.
  std::vector<double> left_multiply(std::span<const double> v) const;
  SquareMatrix power(std::size_t k) const;

  std::vector<std::vector<double>> rows() const;
  friend bool operator==(const SquareMatrix&, const SquareMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> v_;
};

struct StationaryResult {
  std::vector<double> distribution;
  std::size_t iterations = 0;
  bool converged = false;
  /// Plain power iteration did not settle (periodic chain) and the vector was
  /// obtained from the averaged kernel (I + P) / 2 instead.
  bool averaged = false;
};

/// Maximum power-iteration sweeps per phase.
inline constexpr std::size_t kPowerIterationLimit = 100000;
/// L1 change between sweeps at which power iteration stops.
inline constexpr double kPowerIterationTolerance = 1e-12;

/// Stationary row vector pi = pi P by power iteration from the uniform
/// vector. Rows of P that are entirely zero (unobserved states) leak mass,
/// which is restored by renormalising after every sweep. If plain iteration
/// fails to converge it is repeated on (I + P) / 2, whose fixed points are
/// those of P and which is aperiodic.
StationaryResult stationary_distribution(const SquareMatrix& p);

/// Finite-alphabet Markov chain with a row-stochastic transition matrix and
/// its stationary distribution.
class MarkovModel {
 public:
  /// Validates rows (non-negative, sum 1 within 1e-9; renormalised exactly
  /// afterwards) and computes the stationary vector. Throws BadDistribution
  /// or NotStationary.
  explicit MarkovModel(SquareMatrix transition);

  std::size_t size() const noexcept { return transition_.size(); }
  const SquareMatrix& transition() const noexcept { return transition_; }
  double operator()(std::size_t i, std::size_t j) const { return transition_(i, j); }
  const std::vector<double>& stationary() const noexcept { return stationary_; }
  bool stationary_averaged() const noexcept { return averaged_; }

  nlohmann::json to_json() const;

 private:
  SquareMatrix transition_;
  std::vector<double> stationary_;
  bool averaged_ = false;
};

/// Tolerance on probability vectors handed to samplers.
inline constexpr double kDistributionTolerance = 1e-9;

/// Throws BadDistribution if probs is empty, has a negative or non-finite
/// entry, or does not sum to 1 within kDistributionTolerance.
void validate_distribution(std::span<const double> probs);

/// I.i.d. draws with P{Z_t = k} = probs[k].
SymbolSequence bernoulli_sample(std::span<const double> probs, std::size_t len, std::uint64_t seed);

/// Stationary Markov sample: Z_0 from the stationary vector, then rows.
SymbolSequence markov_sample(const MarkovModel& model, std::size_t len, std::uint64_t seed);

/// Counts of consecutive pairs (i, j). Merging is plain addition, so counts
/// gathered from shards of a sequence combine in any order.
struct TransitionCounts {
  std::size_t alphabet = 0;
  std::vector<std::uint64_t> counts;  // row-major alphabet x alphabet

  explicit TransitionCounts(std::size_t n = 0) : alphabet(n), counts(n * n, 0) {}

  std::uint64_t operator()(std::size_t i, std::size_t j) const { return counts[i * alphabet + j]; }
  std::uint64_t row_total(std::size_t i) const;
  std::uint64_t total() const;
  void add(std::span<const Symbol> data);
  void merge(const TransitionCounts& other);
};

struct TransitionEstimate {
  TransitionCounts counts;
  /// Row i is counts normalised by row total; unobserved rows stay zero.
  SquareMatrix probabilities;
  std::vector<bool> observed;
  std::vector<double> stationary;
  /// Fewer than two distinct symbols occur in the sequence.
  bool degenerate = false;

  std::size_t alphabet() const noexcept { return counts.alphabet; }
  bool all_rows_observed() const;
  /// Throws InvalidArgument if some row is unobserved.
  MarkovModel to_model() const;
  nlohmann::json to_json() const;
};

/// Row-normalised transition counts. Unobserved rows are flagged and left
/// at zero, never imputed. Requires length >= 2 (TooShort).
TransitionEstimate empirical_transition_matrix(const SymbolSequence& seq);
TransitionEstimate estimate_from_counts(const TransitionCounts& counts, std::size_t distinct_symbols);

/// Period gcd{n >= 1 : P^n(i,i) > 0} on the support digraph (entries > 0).
/// Throws NoReturn if state i cannot return to itself.
std::size_t period_of(const SquareMatrix& p, std::size_t i);
std::size_t period_of(const MarkovModel& model, std::size_t i);

/// True iff the support digraph is strongly connected.
bool is_irreducible(const SquareMatrix& p);
bool is_irreducible(const MarkovModel& model);

/// True iff every state has period 1. States that never return count as
/// not aperiodic. For irreducible chains one state decides for all.
bool is_aperiodic(const SquareMatrix& p);
bool is_aperiodic(const MarkovModel& model);

struct StationarityReport {
  bool pass = false;
  double significance = kSignificance;
  std::size_t blocks = 0;
  std::size_t block_length = 0;
  ChiSquareResult symbols;
  ChiSquareResult bigrams;
  /// Relative symbol frequencies per block.
  std::vector<std::vector<double>> block_frequencies;
};

/// Splits the sequence into `blocks` equal blocks and tests homogeneity of
/// symbol and bigram frequencies across blocks. Requires blocks >= 2 and
/// length >= 100 * blocks (TooShort).
StationarityReport stationarity_check(const SymbolSequence& seq, std::size_t blocks,
                                      double significance = kSignificance);

/// "alphabet=N" header, then one symbol per line.
void write_sequence(std::ostream& os, const SymbolSequence& seq);
SymbolSequence read_sequence(std::istream& is);

nlohmann::json matrix_to_json(const SquareMatrix& m);
SquareMatrix matrix_from_json(const nlohmann::json& j);

}  // namespace obseq
