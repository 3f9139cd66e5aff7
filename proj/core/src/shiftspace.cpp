#include "obseq/shiftspace.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "obseq/error.hpp"

namespace obseq {

namespace {

// Largest N^W table any word-frequency routine will allocate.
constexpr std::size_t kMaxWordTable = std::size_t{1} << 24;

std::size_t checked_power(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  for (std::size_t k = 0; k < exp; ++k) {
    if (base != 0 && r > kMaxWordTable / base) throw ResourceLimit("word table too large");
    r *= base;
  }
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// CylinderSpec

CylinderSpec::CylinderSpec(std::size_t alphabet, std::vector<Constraint> constraints)
    : alphabet_(alphabet), constraints_(std::move(constraints)) {
  if (alphabet_ == 0) throw InvalidArgument("cylinder: alphabet must be nonempty");
  for (std::size_t k = 0; k < constraints_.size(); ++k) {
    auto& c = constraints_[k];
    if (k > 0 && c.t <= constraints_[k - 1].t) throw InvalidArgument("cylinder: indices must strictly increase");
    std::sort(c.allowed.begin(), c.allowed.end());
    c.allowed.erase(std::unique(c.allowed.begin(), c.allowed.end()), c.allowed.end());
    if (c.allowed.empty()) throw InvalidArgument("cylinder: allowed set must be nonempty");
    if (c.allowed.back() >= alphabet_) throw InvalidArgument("cylinder: allowed symbol outside alphabet");
  }
}

CylinderSpec CylinderSpec::word(std::size_t alphabet, std::int64_t start, std::span<const Symbol> word) {
  std::vector<Constraint> cs;
  cs.reserve(word.size());
  for (std::size_t k = 0; k < word.size(); ++k) cs.push_back({start + static_cast<std::int64_t>(k), {word[k]}});
  return CylinderSpec(alphabet, std::move(cs));
}

CylinderSpec CylinderSpec::translated(std::int64_t h) const {
  std::vector<Constraint> cs = constraints_;
  for (auto& c : cs) c.t += h;
  return CylinderSpec(alphabet_, std::move(cs));
}

bool CylinderSpec::contains(std::span<const Symbol> coords, std::size_t origin) const {
  for (const auto& c : constraints_) {
    const std::int64_t pos = static_cast<std::int64_t>(origin) + c.t;
    if (pos < 0 || pos >= static_cast<std::int64_t>(coords.size())) {
      throw WindowExhausted("cylinder constraint outside the supplied window");
    }
    if (!std::binary_search(c.allowed.begin(), c.allowed.end(), coords[static_cast<std::size_t>(pos)])) return false;
  }
  return true;
}

nlohmann::json CylinderSpec::to_json() const {
  nlohmann::json cs = nlohmann::json::array();
  for (const auto& c : constraints_) cs.push_back({{"t", c.t}, {"allowed", c.allowed}});
  return {{"alphabet", alphabet_}, {"constraints", cs}};
}

CylinderSpec CylinderSpec::from_json(const nlohmann::json& j) {
  try {
    std::vector<Constraint> cs;
    for (const auto& c : j.at("constraints")) {
      cs.push_back({c.at("t").get<std::int64_t>(), c.at("allowed").get<std::vector<Symbol>>()});
    }
    return CylinderSpec(j.at("alphabet").get<std::size_t>(), std::move(cs));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("cylinder JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Cylinder measures

double cylinder_measure_bernoulli(const CylinderSpec& c, std::span<const double> probs) {
  validate_distribution(probs);
  if (probs.size() != c.alphabet()) throw InvalidArgument("cylinder and distribution alphabets differ");
  double m = 1.0;
  for (const auto& k : c.constraints()) {
    double s = 0.0;
    for (Symbol a : k.allowed) s += probs[a];
    m *= s;
  }
  return m;
}

double cylinder_measure_markov(const CylinderSpec& c, const MarkovModel& model) {
  const std::size_t n = model.size();
  if (n != c.alphabet()) throw InvalidArgument("cylinder and chain alphabets differ");
  const std::vector<double>& pi = model.stationary();
  const std::vector<double> pi_next = model.transition().left_multiply(pi);
  for (std::size_t i = 0; i < n; ++i) {
    if (std::fabs(pi_next[i] - pi[i]) > 1e-10) throw NotStationary("chain has no stationary vector");
  }
  const auto& cs = c.constraints();
  if (cs.empty()) return 1.0;

  auto mask = [n](std::vector<double>& v, const std::vector<Symbol>& allowed) {
    std::vector<double> kept(n, 0.0);
    for (Symbol a : allowed) kept[a] = v[a];
    v = std::move(kept);
  };
  std::vector<double> v = pi;
  mask(v, cs[0].allowed);
  for (std::size_t k = 1; k < cs.size(); ++k) {
    const auto gap = static_cast<std::size_t>(cs[k].t - cs[k - 1].t);
    v = gap == 1 ? model.transition().left_multiply(v) : model.transition().power(gap).left_multiply(v);
    mask(v, cs[k].allowed);
  }
  return std::accumulate(v.begin(), v.end(), 0.0);
}

// ---------------------------------------------------------------------------
// Shift windows

ShiftWindow::ShiftWindow(std::size_t alphabet, std::vector<Symbol> symbols, std::size_t origin)
    : alphabet_(alphabet), symbols_(std::move(symbols)), origin_(origin) {
  if (origin_ >= symbols_.size()) throw InvalidArgument("shift window: origin outside window");
  for (Symbol s : symbols_) {
    if (s >= alphabet_) throw InvalidArgument("shift window: symbol outside alphabet");
  }
}

Symbol ShiftWindow::at(std::int64_t t) const {
  if (!has(t)) throw WindowExhausted("coordinate " + std::to_string(t) + " outside window");
  return symbols_[static_cast<std::size_t>(static_cast<std::int64_t>(origin_) + t)];
}

ShiftWindow shift_left(const ShiftWindow& w) {
  if (w.right() == 0) throw WindowExhausted("shift_left: no coordinate right of the origin");
  return ShiftWindow(w.alphabet(), w.symbols(), w.origin() + 1);
}

ShiftWindow baker_to_shift(const ExactPoint& p, std::size_t left, std::size_t right) {
  if (right == 0) throw InvalidArgument("baker_to_shift: need at least omega_0");
  if (p.on_excluded_set()) throw ExcludedSet("baker_to_shift: dyadic coordinate has no unique coding");
  if (right > p.x.width() || left > p.y.width()) {
    throw WidthExceeded("baker_to_shift: window wider than the known digits");
  }
  std::vector<Symbol> symbols(left + right);
  for (std::size_t i = 1; i <= left; ++i) symbols[left - i] = p.y.digit(i - 1);
  for (std::size_t i = 0; i < right; ++i) symbols[left + i] = p.x.digit(i);
  return ShiftWindow(2, std::move(symbols), left);
}

namespace {

// Value of the digits d_0 d_1 ... truncated to 53 places (never rounds to 1).
double truncated_value(const std::vector<std::uint8_t>& digits) {
  std::uint64_t acc = 0;
  const std::size_t used = std::min<std::size_t>(digits.size(), 53);
  for (std::size_t i = 0; i < used; ++i) acc = (acc << 1) | digits[i];
  return std::ldexp(static_cast<double>(acc), -static_cast<int>(used));
}

void split_digits(const ShiftWindow& w, std::vector<std::uint8_t>& xs, std::vector<std::uint8_t>& ys) {
  if (w.alphabet() != 2) throw InvalidArgument("baker coding needs a binary alphabet");
  for (std::int64_t t = 0; t <= w.max_index(); ++t) xs.push_back(static_cast<std::uint8_t>(w.at(t)));
  for (std::int64_t t = -1; t >= w.min_index(); --t) ys.push_back(static_cast<std::uint8_t>(w.at(t)));
}

}  // namespace

PhasePoint shift_to_baker(const ShiftWindow& w) {
  std::vector<std::uint8_t> xs;
  std::vector<std::uint8_t> ys;
  split_digits(w, xs, ys);
  return PhasePoint::square(truncated_value(xs), truncated_value(ys));
}

ExactPoint shift_to_exact(const ShiftWindow& w) {
  std::vector<std::uint8_t> xs;
  std::vector<std::uint8_t> ys;
  split_digits(w, xs, ys);
  return {ExactCoord::from_digits(xs), ExactCoord::from_digits(ys)};
}

// ---------------------------------------------------------------------------
// Entropy

double ks_entropy_bernoulli(std::span<const double> probs) {
  validate_distribution(probs);
  double h = 0.0;
  for (double p : probs) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

std::vector<double> word_frequencies(const SymbolSequence& seq, std::size_t window) {
  if (window == 0) throw InvalidArgument("word length must be >= 1");
  if (seq.size() < window) throw TooShort("sequence shorter than the word length");
  const std::size_t n = seq.alphabet;
  const std::size_t table = checked_power(n, window);
  const std::size_t lead = table / n;  // weight of the oldest symbol
  std::vector<std::uint64_t> counts(table, 0);
  std::size_t code = 0;
  for (std::size_t t = 0; t < seq.size(); ++t) {
    if (t >= window) code -= seq.data[t - window] * lead;
    code = code * n + seq.data[t];
    if (t + 1 >= window) ++counts[code];
  }
  const auto windows = static_cast<double>(seq.size() - window + 1);
  std::vector<double> freq(table);
  for (std::size_t k = 0; k < table; ++k) freq[k] = static_cast<double>(counts[k]) / windows;
  return freq;
}

double entropy_rate_estimate(const SymbolSequence& seq, std::size_t block) {
  if (block == 0) throw InvalidArgument("entropy_rate_estimate: block must be >= 1");
  seq.validate();
  auto block_entropy = [&](std::size_t k) {
    if (k == 0) return 0.0;
    double h = 0.0;
    for (double f : word_frequencies(seq, k)) {
      if (f > 0.0) h -= f * std::log2(f);
    }
    return h;
  };
  return block_entropy(block) - block_entropy(block - 1);
}

// ---------------------------------------------------------------------------
// Conjugacy

ConjugacyReport conjugacy_check(const ExactPoint& p, std::size_t steps) {
  if (p.on_excluded_set()) throw ExcludedSet("conjugacy_check: point lies on the excluded set");
  if (steps >= p.x.width()) throw WidthExceeded("conjugacy_check: steps must be below the width of x");
  ConjugacyReport rep;
  ShiftWindow shifted = baker_to_shift(p, p.y.width(), p.x.width());
  ExactPoint q = p;
  for (std::size_t k = 1; k <= steps; ++k) {
    q = baker_step(q);
    shifted = shift_left(shifted);
    const ShiftWindow coded = baker_to_shift(q, q.y.width(), q.x.width());
    const std::int64_t lo = std::max(coded.min_index(), shifted.min_index());
    const std::int64_t hi = std::min(coded.max_index(), shifted.max_index());
    bool same = hi >= lo;
    for (std::int64_t t = lo; same && t <= hi; ++t) same = coded.at(t) == shifted.at(t);
    rep.steps_checked = k;
    if (!same) {
      rep.conjugate = false;
      rep.first_mismatch = k;
      break;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Finite-window equivalence

WindowEquivalenceReport finite_window_equivalence(const SymbolSequence& a, const SymbolSequence& b,
                                                  std::size_t window, double tol) {
  if (a.alphabet != b.alphabet) throw InvalidArgument("window equivalence: alphabets differ");
  if (window == 0) throw InvalidArgument("window equivalence: window must be >= 1");
  const std::size_t words = checked_power(a.alphabet, window);
  if (a.size() < 100 * words || b.size() < 100 * words) {
    throw TooShort("window equivalence: need at least " + std::to_string(100 * words) + " symbols per sequence");
  }
  a.validate();
  b.validate();
  const std::vector<double> fa = word_frequencies(a, window);
  const std::vector<double> fb = word_frequencies(b, window);

  WindowEquivalenceReport rep;
  rep.window = window;
  rep.tolerance = tol;
  std::size_t worst = 0;
  for (std::size_t k = 0; k < words; ++k) {
    const double d = std::fabs(fa[k] - fb[k]);
    if (d > rep.max_deviation) {
      rep.max_deviation = d;
      worst = k;
    }
  }
  rep.worst_word.assign(window, 0);
  for (std::size_t i = window, code = worst; i-- > 0; code /= a.alphabet) {
    rep.worst_word[i] = static_cast<Symbol>(code % a.alphabet);
  }
  rep.freq_a = fa[worst];
  rep.freq_b = fb[worst];
  const auto na = static_cast<double>(a.size() - window + 1);
  const auto nb = static_cast<double>(b.size() - window + 1);
  rep.std_error = std::sqrt(rep.freq_a * (1.0 - rep.freq_a) / na + rep.freq_b * (1.0 - rep.freq_b) / nb);
  rep.pass = rep.max_deviation <= tol;
  return rep;
}

}  // namespace obseq
