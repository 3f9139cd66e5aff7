#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "obseq/dynamics.hpp"
#include "obseq/partitions.hpp"
#include "obseq/processes.hpp"
#include "obseq/shiftspace.hpp"
#include "obseq/stats.hpp"

namespace obseq {

struct NontrivialityVerdict {
  bool nontrivial = false;
  /// First row whose largest entry is below 1.
  std::optional<std::size_t> witness_row;
  double row_max = 1.0;
};

/// True iff some row has every entry below 1. Rows flagged unobserved (all
/// zero) are skipped.
NontrivialityVerdict nontriviality_verdict(const SquareMatrix& p);
NontrivialityVerdict nontriviality_verdict(const MarkovModel& model);
NontrivialityVerdict nontriviality_verdict(const TransitionEstimate& est);

struct MixingEstimate {
  double correlation = 0.0;
  double std_error = 0.0;
  double joint = 0.0;
  double measure_a = 0.0;
  double measure_b = 0.0;
  std::size_t lag = 0;
  std::size_t samples = 0;
};

/// Number of sub-streams a Monte Carlo estimate is split over.
inline constexpr std::size_t kMonteCarloShards = 8;

/// Monte Carlo estimate of mu(A and T^-n B) - mu(A) mu(B): draws p from the
/// invariant measure and counts p in A with T^n p in B. Baker samples are
/// iterated exactly on digit windows. Shards run in parallel on derived
/// seeds and are merged by count addition, so the result depends only on
/// the arguments.
MixingEstimate mixing_correlation(const System& sys, const Box& a, const Box& b, std::size_t lag,
                                  std::size_t samples, std::uint64_t seed);

/// Exact baker correlation for rectangles whose sides are multiples of
/// 2^-k (k <= 4), by enumerating dyadic cells as cylinders of the fair-coin
/// shift. Throws InvalidArgument for non-dyadic sides.
double baker_dyadic_correlation(const Box& a, const Box& b, std::size_t lag);

/// Closed-form rotation correlation |(A + n alpha) and B| - |A||B| for
/// intervals A, B.
double rotation_arc_correlation(double alpha, const Box& a, const Box& b, std::size_t lag);

/// Mean of the values.
double cesaro_average(std::span<const double> values);

struct CongruenceBound {
  int n = 0;
  double max_distance = 0.0;
  double bound = 0.0;
  bool pass = false;
  std::size_t worst_cell = 0;
};

/// Largest corner-to-representative distance over all cells of alpha_n
/// against sqrt(2) / 2^n.
CongruenceBound epsilon_congruence_bound_check(int n, int cap = kDyadicLevelCap);

/// Smallest n >= 1 with sqrt(2) / 2^n < eps.
int level_for_epsilon(double eps);

struct MarkovPropertyResult {
  bool pass = false;
  ChiSquareResult chi;
  double significance = kSignificance;
  /// Current symbols that contributed a table.
  std::size_t contexts = 0;
};

/// Minimum count of every observed bigram for the Markov-property test.
inline constexpr std::uint64_t kMinBigramCount = 50;

/// For each current symbol b, tests whether the next symbol is independent
/// of the previous one (rows: previous, columns: next). Statistics and
/// degrees of freedom are summed over b. Pass means consistent with order 1.
/// Throws TooShort if an observed bigram occurs fewer than kMinBigramCount
/// times.
MarkovPropertyResult markov_property_test(const SymbolSequence& seq, double significance = kSignificance);

struct BernoulliRejection {
  bool rejected = false;
  ChiSquareResult chi;
  double significance = kSignificance;
  /// Most deviant pair (i, j), by relative deviation of P(j|i) from P(j).
  std::size_t from = 0;
  std::size_t to = 0;
  double conditional = 0.0;
  double marginal = 0.0;
};

/// Chi-square independence test of consecutive symbols. Rejection shows
/// the sequence is not an independent process at this partition, which is
/// necessary for any Bernoulli model; it does not range over all Bernoulli
/// processes.
BernoulliRejection bernoulli_rejection_witness(const SymbolSequence& seq, double significance = kSignificance);

struct CertificateOptions {
  double significance = kSignificance;
  double stationary_tolerance = 0.01;
  double window_tolerance = 0.01;
  std::size_t conjugacy_points = 100;
  std::size_t conjugacy_steps = 50;
};

struct MarkovCertificate {
  int n = 0;
  std::size_t len = 0;
  std::uint64_t seed = 0;
  CertificateOptions options;
  TransitionEstimate estimate;
  MarkovPropertyResult markov;
  bool irreducible = false;
  bool aperiodic = false;
  CongruenceBound bound;
  double stationary_deviation = 0.0;
  bool stationary_uniform = false;
  std::size_t conjugacy_failures = 0;
  WindowEquivalenceReport window;

  /// The five certified properties.
  bool pass() const noexcept;
  /// pass() plus the coding conjugacy and window equivalence checks.
  bool pass_extended() const noexcept;
  nlohmann::json to_json() const;
};

/// Coarse-grains an exact baker orbit by alpha_n and certifies it as an
/// irreducible aperiodic Markov chain with uniform stationary distribution,
/// alongside the distance bound. Also checks the binary coding on sample
/// points and compares length-W word frequencies with a sample of the
/// analytic alpha_n chain. Requires len >= 100 * 4^n (TooShort).
MarkovCertificate markov_replacement_certificate(int n, std::size_t len, std::uint64_t seed,
                                                 const CertificateOptions& opts = {});

nlohmann::json to_json(const ChiSquareResult& r);
nlohmann::json to_json(const NontrivialityVerdict& v);
nlohmann::json to_json(const MixingEstimate& m);
nlohmann::json to_json(const CongruenceBound& c);
nlohmann::json to_json(const MarkovPropertyResult& r);
nlohmann::json to_json(const BernoulliRejection& r);
nlohmann::json to_json(const WindowEquivalenceReport& r);
nlohmann::json to_json(const ConjugacyReport& r);
nlohmann::json to_json(const StationarityReport& r);

}  // namespace obseq
