#include "obseq/processes.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <queue>
#include <sstream>
#include <string>

#include "obseq/error.hpp"
#include "obseq/rng.hpp"

namespace obseq {

void SymbolSequence::validate() const {
  for (std::size_t t = 0; t < data.size(); ++t) {
    if (data[t] >= alphabet) {
      throw InvalidArgument("symbol " + std::to_string(data[t]) + " at position " + std::to_string(t) +
                            " outside alphabet of size " + std::to_string(alphabet));
    }
  }
}

// ---------------------------------------------------------------------------
// SquareMatrix

SquareMatrix SquareMatrix::identity(std::size_t n) {
  SquareMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

SquareMatrix SquareMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  SquareMatrix m(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) throw InvalidArgument("matrix must be square");
    for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

SquareMatrix SquareMatrix::operator*(const SquareMatrix& rhs) const {
  if (rhs.n_ != n_) throw InvalidArgument("matrix size mismatch");
  SquareMatrix out(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t k = 0; k < n_; ++k) {
      const double a = (*this)(i, k);
      if (a == 0.0) continue;
      for (std::size_t j = 0; j < n_; ++j) out(i, j) += a * rhs(k, j);
    }
  }
  return out;
}

std::vector<double> SquareMatrix::left_multiply(std::span<const double> v) const {
  std::vector<double> out(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    if (v[i] == 0.0) continue;
    for (std::size_t j = 0; j < n_; ++j) out[j] += v[i] * (*this)(i, j);
  }
  return out;
}

SquareMatrix SquareMatrix::power(std::size_t k) const {
  SquareMatrix result = identity(n_);
  SquareMatrix base = *this;
  while (k > 0) {
    if (k & 1U) result = result * base;
    k >>= 1U;
    if (k > 0) base = base * base;
  }
  return result;
}

std::vector<std::vector<double>> SquareMatrix::rows() const {
  std::vector<std::vector<double>> out(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i].assign(row(i).begin(), row(i).end());
  return out;
}

// ---------------------------------------------------------------------------
// Stationary distribution

namespace {

bool normalise(std::vector<double>& v) {
  const double s = std::accumulate(v.begin(), v.end(), 0.0);
  if (!(s > 0.0)) return false;
  for (double& x : v) x /= s;
  return true;
}

double l1_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += std::fabs(a[i] - b[i]);
  return d;
}

// Returns true on convergence; `v` holds the last iterate.
bool iterate(const SquareMatrix& p, std::vector<double>& v, bool lazy, std::size_t& sweeps) {
  for (std::size_t it = 0; it < kPowerIterationLimit; ++it) {
    ++sweeps;
    std::vector<double> next = p.left_multiply(v);
    if (lazy) {
      for (std::size_t i = 0; i < next.size(); ++i) next[i] = 0.5 * (next[i] + v[i]);
    }
    if (!normalise(next)) return false;
    const double change = l1_distance(next, v);
    v = std::move(next);
    if (change < kPowerIterationTolerance) return true;
  }
  return false;
}

}  // namespace

StationaryResult stationary_distribution(const SquareMatrix& p) {
  StationaryResult res;
  const std::size_t n = p.size();
  if (n == 0) return res;
  std::vector<double> v(n, 1.0 / static_cast<double>(n));
  if (iterate(p, v, false, res.iterations)) {
    res.converged = true;
  } else {
    res.averaged = true;
    v.assign(n, 1.0 / static_cast<double>(n));
    res.converged = iterate(p, v, true, res.iterations);
  }
  res.distribution = std::move(v);
  return res;
}

// ---------------------------------------------------------------------------
// MarkovModel

void validate_distribution(std::span<const double> probs) {
  if (probs.empty()) throw BadDistribution("empty probability vector");
  double sum = 0.0;
  for (double p : probs) {
    if (!std::isfinite(p) || p < 0.0) throw BadDistribution("probability entries must be finite and non-negative");
    sum += p;
  }
  if (std::fabs(sum - 1.0) > kDistributionTolerance) {
    throw BadDistribution("probabilities sum to " + std::to_string(sum) + ", not 1");
  }
}

MarkovModel::MarkovModel(SquareMatrix transition) : transition_(std::move(transition)) {
  const std::size_t n = transition_.size();
  if (n == 0) throw BadDistribution("empty transition matrix");
  for (std::size_t i = 0; i < n; ++i) {
    validate_distribution(transition_.row(i));
    const double s = std::accumulate(transition_.row(i).begin(), transition_.row(i).end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) transition_(i, j) /= s;
  }
  StationaryResult st = stationary_distribution(transition_);
  if (!st.converged) throw NotStationary("power iteration did not converge to a stationary vector");
  stationary_ = std::move(st.distribution);
  averaged_ = st.averaged;
}

nlohmann::json MarkovModel::to_json() const {
  return {{"alphabet", size()}, {"transition", matrix_to_json(transition_)}, {"stationary", stationary_}};
}

// ---------------------------------------------------------------------------
// Samplers

namespace {

std::vector<double> cumulative(std::span<const double> probs) {
  std::vector<double> cum(probs.size());
  std::partial_sum(probs.begin(), probs.end(), cum.begin());
  return cum;
}

// First k with u < cum[k]; zero-probability entries are never chosen. If
// rounding leaves u above the last cumulative value, the last entry with
// positive probability is returned.
Symbol draw(const std::vector<double>& cum, double u) {
  const auto it = std::upper_bound(cum.begin(), cum.end(), u);
  if (it != cum.end()) return static_cast<Symbol>(it - cum.begin());
  std::size_t k = cum.size() - 1;
  while (k > 0 && cum[k] == cum[k - 1]) --k;
  return static_cast<Symbol>(k);
}

}  // namespace

SymbolSequence bernoulli_sample(std::span<const double> probs, std::size_t len, std::uint64_t seed) {
  validate_distribution(probs);
  if (len == 0) throw InvalidArgument("bernoulli_sample: len must be >= 1");
  const std::vector<double> cum = cumulative(probs);
  Rng rng(seed);
  SymbolSequence seq;
  seq.alphabet = probs.size();
  seq.origin = SymbolSequence::Origin::Sampled;
  seq.data.resize(len);
  for (auto& s : seq.data) s = draw(cum, rng.uniform());
  return seq;
}

SymbolSequence markov_sample(const MarkovModel& model, std::size_t len, std::uint64_t seed) {
  if (len == 0) throw InvalidArgument("markov_sample: len must be >= 1");
  const std::size_t n = model.size();
  std::vector<std::vector<double>> rows;
  rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) rows.push_back(cumulative(model.transition().row(i)));
  const std::vector<double> initial = cumulative(model.stationary());

  Rng rng(seed);
  SymbolSequence seq;
  seq.alphabet = n;
  seq.origin = SymbolSequence::Origin::Sampled;
  seq.data.resize(len);
  seq.data[0] = draw(initial, rng.uniform());
  for (std::size_t t = 1; t < len; ++t) seq.data[t] = draw(rows[seq.data[t - 1]], rng.uniform());
  return seq;
}

// ---------------------------------------------------------------------------
// Estimation

std::uint64_t TransitionCounts::row_total(std::size_t i) const {
  return std::accumulate(counts.begin() + static_cast<std::ptrdiff_t>(i * alphabet),
                         counts.begin() + static_cast<std::ptrdiff_t>((i + 1) * alphabet), std::uint64_t{0});
}

std::uint64_t TransitionCounts::total() const { return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}); }

void TransitionCounts::add(std::span<const Symbol> data) {
  for (std::size_t t = 1; t < data.size(); ++t) ++counts[data[t - 1] * alphabet + data[t]];
}

void TransitionCounts::merge(const TransitionCounts& other) {
  if (other.alphabet != alphabet) throw InvalidArgument("cannot merge counts over different alphabets");
  for (std::size_t k = 0; k < counts.size(); ++k) counts[k] += other.counts[k];
}

bool TransitionEstimate::all_rows_observed() const {
  return std::all_of(observed.begin(), observed.end(), [](bool b) { return b; });
}

MarkovModel TransitionEstimate::to_model() const {
  if (!all_rows_observed()) throw InvalidArgument("estimate has unobserved rows; no Markov model");
  return MarkovModel(probabilities);
}

nlohmann::json TransitionEstimate::to_json() const {
  nlohmann::json counts_j = nlohmann::json::array();
  for (std::size_t i = 0; i < alphabet(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < alphabet(); ++j) row.push_back(counts(i, j));
    counts_j.push_back(row);
  }
  return {{"alphabet", alphabet()},          {"transition", matrix_to_json(probabilities)},
          {"counts", counts_j},              {"observed_rows", observed},
          {"stationary", stationary},        {"degenerate", degenerate}};
}

TransitionEstimate estimate_from_counts(const TransitionCounts& counts, std::size_t distinct_symbols) {
  const std::size_t n = counts.alphabet;
  TransitionEstimate est{counts, SquareMatrix(n), std::vector<bool>(n, false), {}, distinct_symbols < 2};
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t total = counts.row_total(i);
    if (total == 0) continue;
    est.observed[i] = true;
    for (std::size_t j = 0; j < n; ++j) {
      est.probabilities(i, j) = static_cast<double>(counts(i, j)) / static_cast<double>(total);
    }
  }
  est.stationary = stationary_distribution(est.probabilities).distribution;
  return est;
}

TransitionEstimate empirical_transition_matrix(const SymbolSequence& seq) {
  if (seq.size() < 2) throw TooShort("transition estimate needs at least 2 symbols");
  seq.validate();
  TransitionCounts counts(seq.alphabet);
  counts.add(seq.data);
  std::vector<bool> seen(seq.alphabet, false);
  for (Symbol s : seq.data) seen[s] = true;
  return estimate_from_counts(counts, static_cast<std::size_t>(std::count(seen.begin(), seen.end(), true)));
}

// ---------------------------------------------------------------------------
// Chain structure

namespace {

std::vector<bool> reachable(const SquareMatrix& p, std::size_t from, bool reverse) {
  const std::size_t n = p.size();
  std::vector<bool> seen(n, false);
  std::queue<std::size_t> q;
  seen[from] = true;
  q.push(from);
  while (!q.empty()) {
    const std::size_t u = q.front();
    q.pop();
    for (std::size_t v = 0; v < n; ++v) {
      const double w = reverse ? p(v, u) : p(u, v);
      if (w > 0.0 && !seen[v]) {
        seen[v] = true;
        q.push(v);
      }
    }
  }
  return seen;
}

}  // namespace

std::size_t period_of(const SquareMatrix& p, std::size_t i) {
  const std::size_t n = p.size();
  if (i >= n) throw InvalidArgument("period_of: state index out of range");
  const std::vector<bool> fwd = reachable(p, i, false);
  const std::vector<bool> bwd = reachable(p, i, true);
  bool returns = false;
  for (std::size_t u = 0; u < n; ++u) returns = returns || (fwd[u] && p(u, i) > 0.0);
  if (!returns) throw NoReturn("state " + std::to_string(i) + " never returns to itself");

  // Breadth-first levels inside the strongly connected component of i; the
  // period is the gcd of level[u] + 1 - level[v] over component edges u -> v.
  std::vector<long> level(n, -1);
  std::queue<std::size_t> q;
  level[i] = 0;
  q.push(i);
  std::size_t g = 0;
  while (!q.empty()) {
    const std::size_t u = q.front();
    q.pop();
    for (std::size_t v = 0; v < n; ++v) {
      if (!(p(u, v) > 0.0) || !fwd[v] || !bwd[v]) continue;
      if (level[v] < 0) {
        level[v] = level[u] + 1;
        q.push(v);
      } else {
        g = std::gcd(g, static_cast<std::size_t>(std::labs(level[u] + 1 - level[v])));
      }
    }
  }
  return g;
}

std::size_t period_of(const MarkovModel& model, std::size_t i) { return period_of(model.transition(), i); }

bool is_irreducible(const SquareMatrix& p) {
  if (p.size() == 0) return false;
  const std::vector<bool> fwd = reachable(p, 0, false);
  const std::vector<bool> bwd = reachable(p, 0, true);
  const bool connected = std::all_of(fwd.begin(), fwd.end(), [](bool b) { return b; }) &&
                         std::all_of(bwd.begin(), bwd.end(), [](bool b) { return b; });
  if (!connected) return false;
  if (p.size() > 1) return true;
  return p(0, 0) > 0.0;
}

bool is_irreducible(const MarkovModel& model) { return is_irreducible(model.transition()); }

bool is_aperiodic(const SquareMatrix& p) {
  if (p.size() == 0) return false;
  try {
    if (is_irreducible(p)) return period_of(p, 0) == 1;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (period_of(p, i) != 1) return false;
    }
  } catch (const NoReturn&) {
    return false;
  }
  return true;
}

bool is_aperiodic(const MarkovModel& model) { return is_aperiodic(model.transition()); }

// ---------------------------------------------------------------------------
// Stationarity

StationarityReport stationarity_check(const SymbolSequence& seq, std::size_t blocks, double significance) {
  if (blocks < 2) throw InvalidArgument("stationarity_check: need at least 2 blocks");
  if (seq.size() < blocks * 100) {
    throw TooShort("stationarity_check: need at least " + std::to_string(blocks * 100) + " symbols");
  }
  seq.validate();
  const std::size_t n = seq.alphabet;
  const std::size_t block_len = seq.size() / blocks;

  StationarityReport rep;
  rep.significance = significance;
  rep.blocks = blocks;
  rep.block_length = block_len;

  std::vector<std::vector<double>> symbol_table(blocks, std::vector<double>(n, 0.0));
  std::vector<std::vector<double>> bigram_table(blocks, std::vector<double>(n * n, 0.0));
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t start = b * block_len;
    for (std::size_t t = start; t < start + block_len; ++t) {
      symbol_table[b][seq.data[t]] += 1.0;
      if (t + 1 < start + block_len) bigram_table[b][seq.data[t] * n + seq.data[t + 1]] += 1.0;
    }
    std::vector<double> freq = symbol_table[b];
    for (double& f : freq) f /= static_cast<double>(block_len);
    rep.block_frequencies.push_back(std::move(freq));
  }
  rep.symbols = chi_square_contingency(symbol_table);
  rep.bigrams = chi_square_contingency(bigram_table);
  rep.pass = !rep.symbols.rejects(significance) && !rep.bigrams.rejects(significance);
  return rep;
}

// ---------------------------------------------------------------------------
// I/O

void write_sequence(std::ostream& os, const SymbolSequence& seq) {
  os << "alphabet=" << seq.alphabet << '\n';
  for (Symbol s : seq.data) os << s << '\n';
}

SymbolSequence read_sequence(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ParseError("symbol file: missing header");
  const std::string prefix = "alphabet=";
  if (line.rfind(prefix, 0) != 0) throw ParseError("symbol file: header must be 'alphabet=N'");
  SymbolSequence seq;
  seq.origin = SymbolSequence::Origin::Loaded;
  try {
    seq.alphabet = std::stoul(line.substr(prefix.size()));
  } catch (const std::exception&) {
    throw ParseError("symbol file: bad alphabet size '" + line.substr(prefix.size()) + "'");
  }
  if (seq.alphabet == 0) throw ParseError("symbol file: alphabet size must be positive");
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::size_t pos = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(line, &pos);
    } catch (const std::exception&) {
      throw ParseError("symbol file: line " + std::to_string(lineno) + " is not an integer");
    }
    if (pos != line.size() || v >= seq.alphabet) {
      throw ParseError("symbol file: bad symbol on line " + std::to_string(lineno));
    }
    seq.data.push_back(static_cast<Symbol>(v));
  }
  return seq;
}

nlohmann::json matrix_to_json(const SquareMatrix& m) { return m.rows(); }

SquareMatrix matrix_from_json(const nlohmann::json& j) {
  try {
    return SquareMatrix::from_rows(j.get<std::vector<std::vector<double>>>());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("matrix JSON: ") + e.what());
  }
}

}  // namespace obseq
