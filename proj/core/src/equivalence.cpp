#include "obseq/equivalence.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <map>
#include <numeric>

#include "obseq/coarse_grain.hpp"
#include "obseq/error.hpp"
#include "obseq/rng.hpp"

namespace obseq {

NontrivialityVerdict nontriviality_verdict(const SquareMatrix& p) {
  NontrivialityVerdict v;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto row = p.row(i);
    if (std::all_of(row.begin(), row.end(), [](double x) { return x == 0.0; })) continue;
    const double m = *std::max_element(row.begin(), row.end());
    if (m < 1.0) {
      v.nontrivial = true;
      v.witness_row = i;
      v.row_max = m;
      return v;
    }
  }
  return v;
}

NontrivialityVerdict nontriviality_verdict(const MarkovModel& model) { return nontriviality_verdict(model.transition()); }

NontrivialityVerdict nontriviality_verdict(const TransitionEstimate& est) {
  return nontriviality_verdict(est.probabilities);
}

namespace {

struct HitCounts {
  std::uint64_t a = 0;
  std::uint64_t b = 0;
  std::uint64_t joint = 0;
};

HitCounts mixing_shard(const System& sys, const Box& a, const Box& b, std::size_t lag, std::size_t samples,
                       std::uint64_t seed) {
  HitCounts h;
  Rng rng(seed);
  for (std::size_t s = 0; s < samples; ++s) {
    bool in_a = false;
    bool in_b = false;
    if (sys.kind() == System::Kind::Baker) {
      std::uint64_t x = rng.next_u64();
      std::uint64_t y = rng.next_u64();
      auto as_point = [&] {
        return PhasePoint::square(static_cast<double>(x >> 11) * 0x1.0p-53, static_cast<double>(y >> 11) * 0x1.0p-53);
      };
      in_a = a.contains(as_point());
      for (std::size_t t = 0; t < lag; ++t) baker_shift_digits(x, y, rng.bit());
      in_b = b.contains(as_point());
    } else {
      PhasePoint p = PhasePoint::circle(rng.uniform());
      in_a = a.contains(p);
      for (std::size_t t = 0; t < lag; ++t) p = sys.step(p);
      in_b = b.contains(p);
    }
    h.a += in_a;
    h.b += in_b;
    h.joint += in_a && in_b;
  }
  return h;
}

}  // namespace

MixingEstimate mixing_correlation(const System& sys, const Box& a, const Box& b, std::size_t lag,
                                  std::size_t samples, std::uint64_t seed) {
  if (samples == 0) throw InvalidArgument("mixing_correlation: samples must be >= 1");
  if (a.dim != sys.dimension() || b.dim != sys.dimension())
    throw InvalidArgument("mixing_correlation: set dimension does not match system");
  std::vector<std::future<HitCounts>> parts;
  for (std::size_t s = 0; s < kMonteCarloShards; ++s) {
    const std::size_t share = samples / kMonteCarloShards + (s < samples % kMonteCarloShards ? 1 : 0);
    parts.push_back(std::async(std::launch::async, mixing_shard, std::cref(sys), std::cref(a), std::cref(b), lag,
                               share, derive_seed(seed, s)));
  }
  HitCounts total;
  for (auto& f : parts) {
    const HitCounts h = f.get();
    total.a += h.a;
    total.b += h.b;
    total.joint += h.joint;
  }
  MixingEstimate m;
  m.lag = lag;
  m.samples = samples;
  const double n = static_cast<double>(samples);
  m.joint = static_cast<double>(total.joint) / n;
  m.measure_a = a.measure();
  m.measure_b = b.measure();
  m.correlation = m.joint - m.measure_a * m.measure_b;
  m.std_error = std::sqrt(std::max(m.joint * (1.0 - m.joint), 0.0) / n);
  return m;
}

namespace {

constexpr int kMaxDyadicResolution = 4;

int dyadic_resolution(double v) {
  for (int k = 0; k <= kMaxDyadicResolution; ++k) {
    const double scaled = std::ldexp(v, k);
    if (scaled == std::floor(scaled)) return k;
  }
  throw InvalidArgument("baker_dyadic_correlation: side " + format_double(v) + " is not a multiple of 2^-" +
                        std::to_string(kMaxDyadicResolution));
}

using Digits = std::map<std::int64_t, unsigned>;

// Digits fixed by the resolution-k dyadic cell (xi, yi), with x = 0.w0 w1 ...
// and y = 0.w-1 w-2 ..., shifted by `offset`.
Digits cell_digits(std::uint64_t xi, std::uint64_t yi, int k, std::int64_t offset) {
  Digits d;
  for (int t = 0; t < k; ++t) {
    d[t + offset] = static_cast<unsigned>((xi >> (k - 1 - t)) & 1U);
    d[-1 - t + offset] = static_cast<unsigned>((yi >> (k - 1 - t)) & 1U);
  }
  return d;
}

}  // namespace

double baker_dyadic_correlation(const Box& a, const Box& b, std::size_t lag) {
  if (a.dim != 2 || b.dim != 2) throw InvalidArgument("baker_dyadic_correlation: rectangles must be 2-dimensional");
  int k = 0;
  for (const Box* box : {&a, &b})
    for (double v : {box->lo[0], box->lo[1], box->hi[0], box->hi[1]}) k = std::max(k, dyadic_resolution(v));
  if (k == 0) k = 1;
  auto cells = [k](const Box& box) {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
    const auto ix0 = static_cast<std::uint64_t>(std::ldexp(box.lo[0], k));
    const auto ix1 = static_cast<std::uint64_t>(std::ldexp(box.hi[0], k));
    const auto iy0 = static_cast<std::uint64_t>(std::ldexp(box.lo[1], k));
    const auto iy1 = static_cast<std::uint64_t>(std::ldexp(box.hi[1], k));
    for (auto xi = ix0; xi < ix1; ++xi)
      for (auto yi = iy0; yi < iy1; ++yi) out.emplace_back(xi, yi);
    return out;
  };
  const auto ca = cells(a);
  const auto cb = cells(b);
  double joint = 0.0;
  for (const auto& [ax, ay] : ca) {
    const Digits da = cell_digits(ax, ay, k, 0);
    for (const auto& [bx, by] : cb) {
      Digits merged = da;
      bool consistent = true;
      for (const auto& [t, v] : cell_digits(bx, by, k, static_cast<std::int64_t>(lag))) {
        auto [it, inserted] = merged.emplace(t, v);
        if (!inserted && it->second != v) {
          consistent = false;
          break;
        }
      }
      if (consistent) joint += std::ldexp(1.0, -static_cast<int>(merged.size()));
    }
  }
  const double cell = std::ldexp(1.0, -2 * k);
  return joint - static_cast<double>(ca.size()) * cell * static_cast<double>(cb.size()) * cell;
}

double rotation_arc_correlation(double alpha, const Box& a, const Box& b, std::size_t lag) {
  if (a.dim != 1 || b.dim != 1) throw InvalidArgument("rotation_arc_correlation: sets must be intervals");
  const double shift = std::fmod(static_cast<double>(lag) * alpha, 1.0);
  return arc_overlap(a.lo[0], a.hi[0], shift, b.lo[0], b.hi[0]) - a.measure() * b.measure();
}

double cesaro_average(std::span<const double> values) {
  if (values.empty()) throw InvalidArgument("cesaro_average: no values");
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

CongruenceBound epsilon_congruence_bound_check(int n, int cap) {
  const Partition part = dyadic_partition(n, cap);
  CongruenceBound c;
  c.n = n;
  c.bound = std::sqrt(2.0) * std::ldexp(1.0, -n);
  for (std::size_t i = 0; i < part.size(); ++i) {
    const double d = part.max_representative_distance(i);
    if (d > c.max_distance) {
      c.max_distance = d;
      c.worst_cell = i;
    }
  }
  c.pass = c.max_distance <= c.bound;
  return c;
}

int level_for_epsilon(double eps) {
  if (!(eps > 0.0)) throw InvalidArgument("level_for_epsilon: eps must be positive");
  for (int n = 1; n <= 60; ++n)
    if (std::sqrt(2.0) * std::ldexp(1.0, -n) < eps) return n;
  throw InvalidArgument("level_for_epsilon: eps too small");
}

MarkovPropertyResult markov_property_test(const SymbolSequence& seq, double significance) {
  seq.validate();
  if (seq.size() < 3) throw TooShort("markov_property_test: need at least 3 symbols");
  const std::size_t n = seq.alphabet;
  TransitionCounts pairs(n);
  pairs.add(seq.data);
  for (std::size_t i = 0; i < n * n; ++i) {
    if (pairs.counts[i] > 0 && pairs.counts[i] < kMinBigramCount)
      throw TooShort("markov_property_test: bigram (" + std::to_string(i / n) + "," + std::to_string(i % n) +
                     ") observed " + std::to_string(pairs.counts[i]) + " times, need " +
                     std::to_string(kMinBigramCount));
  }
  // Trigram codes ordered by middle symbol, then previous, then next.
  std::vector<std::uint64_t> codes(seq.size() - 2);
  for (std::size_t t = 0; t + 2 < seq.size(); ++t)
    codes[t] = (static_cast<std::uint64_t>(seq.data[t + 1]) * n + seq.data[t]) * n + seq.data[t + 2];
  std::sort(codes.begin(), codes.end());

  MarkovPropertyResult r;
  r.significance = significance;
  std::vector<ChiSquareResult> parts;
  std::size_t i = 0;
  while (i < codes.size()) {
    const std::uint64_t b = codes[i] / (n * n);
    std::map<std::uint64_t, std::size_t> rows, cols;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> cells;
    std::size_t j = i;
    for (; j < codes.size() && codes[j] / (n * n) == b; ++j) {
      const std::uint64_t a = (codes[j] / n) % n;
      const std::uint64_t c = codes[j] % n;
      rows.emplace(a, 0);
      cols.emplace(c, 0);
      cells.emplace_back(a, c);
    }
    std::size_t idx = 0;
    for (auto& [key, pos] : rows) pos = idx++;
    idx = 0;
    for (auto& [key, pos] : cols) pos = idx++;
    std::vector<std::vector<double>> table(rows.size(), std::vector<double>(cols.size(), 0.0));
    for (const auto& [a, c] : cells) table[rows[a]][cols[c]] += 1.0;
    parts.push_back(chi_square_contingency(table));
    ++r.contexts;
    i = j;
  }
  r.chi = combine(parts);
  r.pass = !r.chi.rejects(significance);
  return r;
}

BernoulliRejection bernoulli_rejection_witness(const SymbolSequence& seq, double significance) {
  seq.validate();
  if (seq.size() < 2) throw TooShort("bernoulli_rejection_witness: need at least 2 symbols");
  const std::size_t n = seq.alphabet;
  TransitionCounts pairs(n);
  pairs.add(seq.data);
  const double total = static_cast<double>(pairs.total());
  std::vector<double> marginal(n, 0.0);
  std::vector<std::vector<double>> table(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      table[i][j] = static_cast<double>(pairs(i, j));
      marginal[j] += table[i][j] / total;
    }
  BernoulliRejection r;
  r.significance = significance;
  r.chi = chi_square_contingency(table);
  r.rejected = r.chi.rejects(significance);
  double best_rel = -1.0;
  double best_abs = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double row = static_cast<double>(pairs.row_total(i));
    if (row == 0.0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (marginal[j] == 0.0) continue;
      const double c = table[i][j] / row;
      const double dev = std::abs(c - marginal[j]);
      const double rel = dev / std::max(c, marginal[j]);
      if (rel > best_rel || (rel == best_rel && dev > best_abs)) {
        best_rel = rel;
        best_abs = dev;
        r.from = i;
        r.to = j;
        r.conditional = c;
        r.marginal = marginal[j];
      }
    }
  }
  return r;
}

bool MarkovCertificate::pass() const noexcept {
  return markov.pass && irreducible && aperiodic && bound.pass && stationary_uniform;
}

bool MarkovCertificate::pass_extended() const noexcept { return pass() && conjugacy_failures == 0 && window.pass; }

nlohmann::json MarkovCertificate::to_json() const {
  using nlohmann::json;
  return json{
      {"n", n},
      {"len", len},
      {"seed", seed},
      {"pass", pass()},
      {"pass_extended", pass_extended()},
      {"certificates",
       {{"markov_property", obseq::to_json(markov)},
        {"irreducible", {{"pass", irreducible}}},
        {"aperiodic", {{"pass", aperiodic}}},
        {"distance_bound", obseq::to_json(bound)},
        {"stationary_uniform",
         {{"pass", stationary_uniform},
          {"max_deviation", stationary_deviation},
          {"tolerance", options.stationary_tolerance},
          {"distribution", estimate.stationary}}}}},
      {"coding",
       {{"conjugacy",
         {{"pass", conjugacy_failures == 0},
          {"points", options.conjugacy_points},
          {"steps", options.conjugacy_steps},
          {"failures", conjugacy_failures}}},
        {"window_equivalence", obseq::to_json(window)}}},
      {"estimate", estimate.to_json()},
  };
}

MarkovCertificate markov_replacement_certificate(int n, std::size_t len, std::uint64_t seed,
                                                 const CertificateOptions& opts) {
  const Partition part = dyadic_partition(n);
  const std::size_t states = part.size();
  if (len < 100 * states)
    throw TooShort("markov_replacement_certificate: len must be >= 100 * 4^n = " + std::to_string(100 * states));
  MarkovCertificate c;
  c.n = n;
  c.len = len;
  c.seed = seed;
  c.options = opts;

  const SymbolSequence seq = coarse_grain(System::baker(), part, len, derive_seed(seed, 0));
  c.markov = markov_property_test(seq, opts.significance);
  c.estimate = empirical_transition_matrix(seq);
  c.irreducible = is_irreducible(c.estimate.probabilities);
  c.aperiodic = is_aperiodic(c.estimate.probabilities);
  c.bound = epsilon_congruence_bound_check(n);
  const double uniform = 1.0 / static_cast<double>(states);
  for (double p : c.estimate.stationary) c.stationary_deviation = std::max(c.stationary_deviation, std::abs(p - uniform));
  c.stationary_uniform = c.stationary_deviation <= opts.stationary_tolerance;

  for (const ExactPoint& p : sample_invariant_exact(opts.conjugacy_points, derive_seed(seed, 2)))
    if (!conjugacy_check(p, opts.conjugacy_steps).conjugate) ++c.conjugacy_failures;

  const MarkovModel analytic(baker_image_chain(part, n + 1));
  const SymbolSequence reference = markov_sample(analytic, len, derive_seed(seed, 1));
  const std::size_t window = len >= 100 * states * states ? 2 : 1;
  c.window = finite_window_equivalence(seq, reference, window, opts.window_tolerance);
  return c;
}

nlohmann::json to_json(const ChiSquareResult& r) {
  return {{"statistic", r.statistic}, {"dof", r.dof}, {"p_value", r.p_value}};
}

nlohmann::json to_json(const NontrivialityVerdict& v) {
  nlohmann::json j{{"nontrivial", v.nontrivial}, {"row_max", v.row_max}};
  j["witness_row"] = v.witness_row ? nlohmann::json(*v.witness_row) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json to_json(const MixingEstimate& m) {
  return {{"lag", m.lag},         {"samples", m.samples},     {"correlation", m.correlation},
          {"std_error", m.std_error}, {"joint", m.joint}, {"measure_a", m.measure_a},
          {"measure_b", m.measure_b}};
}

nlohmann::json to_json(const CongruenceBound& c) {
  return {{"n", c.n}, {"pass", c.pass}, {"max_distance", c.max_distance}, {"bound", c.bound},
          {"worst_cell", c.worst_cell}};
}

nlohmann::json to_json(const MarkovPropertyResult& r) {
  return {{"pass", r.pass}, {"significance", r.significance}, {"contexts", r.contexts}, {"chi_square", to_json(r.chi)}};
}

nlohmann::json to_json(const BernoulliRejection& r) {
  return {{"rejected", r.rejected},
          {"significance", r.significance},
          {"chi_square", to_json(r.chi)},
          {"witness", {{"from", r.from}, {"to", r.to}, {"conditional", r.conditional}, {"marginal", r.marginal}}}};
}

nlohmann::json to_json(const WindowEquivalenceReport& r) {
  return {{"pass", r.pass},         {"window", r.window},     {"tolerance", r.tolerance},
          {"max_deviation", r.max_deviation}, {"worst_word", r.worst_word}, {"freq_a", r.freq_a},
          {"freq_b", r.freq_b},     {"std_error", r.std_error}};
}

nlohmann::json to_json(const ConjugacyReport& r) {
  return {{"conjugate", r.conjugate}, {"steps_checked", r.steps_checked}, {"first_mismatch", r.first_mismatch}};
}

nlohmann::json to_json(const StationarityReport& r) {
  return {{"pass", r.pass},
          {"significance", r.significance},
          {"blocks", r.blocks},
          {"block_length", r.block_length},
          {"symbols", to_json(r.symbols)},
          {"bigrams", to_json(r.bigrams)},
          {"block_frequencies", r.block_frequencies}};
}

}  // namespace obseq
