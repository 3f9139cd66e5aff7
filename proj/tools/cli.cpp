#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "obseq/coarse_grain.hpp"
#include "obseq/dynamics.hpp"
#include "obseq/equivalence.hpp"
#include "obseq/error.hpp"
#include "obseq/rng.hpp"
#include "obseq/shiftspace.hpp"
#include "obseq/version.hpp"

namespace obseq::cli {

using nlohmann::json;

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream is(text);
  while (std::getline(is, cur, sep)) parts.push_back(cur);
  return parts;
}

double parse_real(std::string s) {
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) throw InvalidArgument("not a number: '" + s + "'");
  return v;
}

}  // namespace

std::vector<double> parse_reals(const std::string& text) {
  std::vector<double> out;
  for (const auto& p : split(text, ',')) out.push_back(parse_real(p));
  if (out.empty()) throw InvalidArgument("empty list of numbers");
  return out;
}

SquareMatrix parse_matrix(const std::string& text) {
  std::vector<std::vector<double>> rows;
  for (const auto& r : split(text, ';')) rows.push_back(parse_reals(r));
  return SquareMatrix::from_rows(rows);
}

Partition parse_partition(const std::string& spec) {
  if (spec == "left-right") return left_right_partition();
  if (spec == "halves") return halves_partition();
  if (spec.rfind("dyadic:", 0) == 0) {
    const std::string level = spec.substr(7);
    int n = 0;
    const auto [ptr, ec] = std::from_chars(level.data(), level.data() + level.size(), n);
    if (ec != std::errc() || ptr != level.data() + level.size())
      throw InvalidArgument("--partition: bad dyadic level '" + level + "'");
    return dyadic_partition(n);
  }
  if (spec.rfind("file:", 0) == 0) {
    std::ifstream is(spec.substr(5));
    if (!is) throw InvalidArgument("--partition: cannot open " + spec.substr(5));
    try {
      return Partition::from_json(json::parse(is));
    } catch (const json::exception& e) {
      throw ParseError(std::string("--partition: ") + e.what());
    }
  }
  throw InvalidArgument("--partition: unknown spec '" + spec + "' (left-right, halves, dyadic:N, file:PATH)");
}

SymbolSequence load_sequence(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw InvalidArgument("--in: cannot open " + path);
  if (is.peek() == '{') {
    json j;
    try {
      j = json::parse(is);
      const json& s = j.contains("result") ? j.at("result").at("sequence") : j.at("sequence");
      SymbolSequence seq;
      seq.alphabet = s.at("alphabet").get<std::size_t>();
      seq.data = s.at("symbols").get<std::vector<Symbol>>();
      seq.origin = SymbolSequence::Origin::Loaded;
      seq.validate();
      return seq;
    } catch (const json::exception& e) {
      throw ParseError(path + ": " + e.what());
    }
  }
  SymbolSequence seq = read_sequence(is);
  seq.origin = SymbolSequence::Origin::Loaded;
  return seq;
}

std::string format_value(double v) {
  std::string s = format_double(v);
  if (std::isfinite(v) && s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

namespace {

struct Common {
  std::optional<std::uint64_t> seed;
  std::size_t len = 1000000;
  std::string out;
  std::string format = "json";
};

struct Context {
  const std::vector<std::string>& args;
  std::ostream& out;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--seed", c.seed, "Root seed for every random draw");
  sub->add_option("--len", c.len, "Sequence or orbit length")->check(CLI::PositiveNumber);
  sub->add_option("--out", c.out, "Write the report here instead of stdout");
  sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
}

std::uint64_t require_seed(const Common& c) {
  if (!c.seed) throw InvalidArgument("--seed is required for this command");
  return *c.seed;
}

void emit(const Context& ctx, const Common& c, const std::string& text) {
  if (c.out.empty()) {
    ctx.out << text;
    return;
  }
  std::ofstream os(c.out);
  if (!os) throw InvalidArgument("--out: cannot open " + c.out);
  os << text;
}

void emit_report(const Context& ctx, const Common& c, const std::string& command, json result) {
  json report{{"tool", "obseq"},
              {"version", kVersion},
              {"command", command},
              {"invocation", ctx.args},
              {"seed", c.seed ? json(*c.seed) : json(nullptr)},
              {"result", std::move(result)}};
  emit(ctx, c, report.dump(2) + "\n");
}

System parse_system(const std::string& name, double alpha) {
  if (name == "baker") return System::baker();
  if (name == "rotation") return System::rotation(alpha);
  throw InvalidArgument("--system: unknown system '" + name + "' (baker, rotation)");
}

/// Where a command's symbol sequence comes from.
struct Source {
  std::string in;
  std::string system = "baker";
  double alpha = kGoldenConjugate;
  std::string partition;
  std::string bernoulli;
  std::string markov;
};

void add_source(CLI::App* sub, Source& s) {
  sub->add_option("--in", s.in, "Symbol file or JSON report to read");
  sub->add_option("--system", s.system, "baker or rotation");
  sub->add_option("--alpha", s.alpha, "Rotation number");
  sub->add_option("--partition", s.partition, "left-right, halves, dyadic:N or file:PATH");
  sub->add_option("--bernoulli", s.bernoulli, "Sample a Bernoulli process with these probabilities");
  sub->add_option("--markov", s.markov, "Sample a Markov chain with this matrix (rows ';', entries ',')");
}

SymbolSequence sample_source(const Source& s, std::size_t len, std::uint64_t seed) {
  if (!s.bernoulli.empty()) return bernoulli_sample(parse_reals(s.bernoulli), len, seed);
  if (!s.markov.empty()) return markov_sample(MarkovModel(parse_matrix(s.markov)), len, seed);
  if (!s.partition.empty()) return coarse_grain(parse_system(s.system, s.alpha), parse_partition(s.partition), len, seed);
  throw InvalidArgument("no input: give --in, --partition, --bernoulli or --markov");
}

SymbolSequence load_source(const Source& s, const Common& c) {
  if (!s.in.empty()) return load_sequence(s.in);
  return sample_source(s, c.len, require_seed(c));
}

json sequence_json(const SymbolSequence& seq) { return {{"alphabet", seq.alphabet}, {"symbols", seq.data}}; }

std::string matrix_csv(const SquareMatrix& m) {
  std::string s;
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) s += (j ? "," : "") + format_double(m(i, j));
    s += "\n";
  }
  return s;
}

json chain_json(const SquareMatrix& p) {
  const StationaryResult st = stationary_distribution(p);
  json periods = json::array();
  for (std::size_t i = 0; i < p.size(); ++i) {
    try {
      periods.push_back(period_of(p, i));
    } catch (const NoReturn&) {
      periods.push_back(nullptr);
    }
  }
  return {{"transition", matrix_to_json(p)},
          {"stationary", st.distribution},
          {"stationary_converged", st.converged},
          {"stationary_averaged", st.averaged},
          {"irreducible", is_irreducible(p)},
          {"aperiodic", is_aperiodic(p)},
          {"periods", periods},
          {"nontriviality", to_json(nontriviality_verdict(p))}};
}

Box parse_box(const std::string& text, int dim, const char* flag) {
  const auto v = parse_reals(text);
  if (dim == 2 && v.size() == 4) return Box::square(v[0], v[1], v[2], v[3]);
  if (dim == 1 && v.size() == 2) return Box::interval(v[0], v[1]);
  throw InvalidArgument(std::string(flag) + ": expected " + (dim == 2 ? "x0,y0,x1,y1" : "a,b"));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Observational equivalence of deterministic and stochastic descriptions", "obseq"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  Context ctx{args, out};
  int code = kExitPass;

  // orbit
  Common orbit_c;
  std::string orbit_system = "baker";
  double orbit_alpha = kGoldenConjugate;
  std::optional<double> orbit_x, orbit_y;
  auto* orbit_cmd = app.add_subcommand("orbit", "Dump an orbit");
  add_common(orbit_cmd, orbit_c);
  orbit_cmd->add_option("--system", orbit_system, "baker or rotation");
  orbit_cmd->add_option("--alpha", orbit_alpha, "Rotation number");
  orbit_cmd->add_option("--x", orbit_x, "Initial x (otherwise sampled with --seed)");
  orbit_cmd->add_option("--y", orbit_y, "Initial y");
  orbit_cmd->callback([&] {
    const System sys = parse_system(orbit_system, orbit_alpha);
    PhasePoint p0;
    if (orbit_x) {
      p0 = sys.dimension() == 2 ? PhasePoint::square(*orbit_x, orbit_y.value_or(0.0)) : PhasePoint::circle(*orbit_x);
    } else {
      p0 = sample_invariant(sys, 1, require_seed(orbit_c)).front();
    }
    const auto pts = orbit(sys, p0, orbit_c.len);
    if (orbit_c.format == "csv") {
      std::ostringstream os;
      write_orbit_csv(os, pts);
      emit(ctx, orbit_c, os.str());
      return;
    }
    json arr = json::array();
    for (const auto& p : pts) arr.push_back(sys.dimension() == 2 ? json{p.x(), p.y()} : json{p.x()});
    emit_report(ctx, orbit_c, "orbit", {{"system", sys.name()}, {"points", std::move(arr)}});
  });

  // coarse-grain and sample
  Common cg_c;
  Source cg_s;
  auto* cg_cmd = app.add_subcommand("coarse-grain", "Observe an orbit through a partition");
  add_common(cg_cmd, cg_c);
  add_source(cg_cmd, cg_s);
  Common sample_c;
  Source sample_s;
  auto* sample_cmd = app.add_subcommand("sample", "Sample a Bernoulli or Markov sequence");
  add_common(sample_cmd, sample_c);
  add_source(sample_cmd, sample_s);
  auto sequence_cmd = [&](const Common& c, const Source& s, const char* name) {
    const SymbolSequence seq = sample_source(s, c.len, require_seed(c));
    if (c.format == "csv") {
      std::ostringstream os;
      write_sequence(os, seq);
      emit(ctx, c, os.str());
      return;
    }
    json result{{"sequence", sequence_json(seq)}};
    if (!s.partition.empty()) {
      result["partition"] = s.partition;
      result["labels"] = parse_partition(s.partition).labels();
    }
    emit_report(ctx, c, name, std::move(result));
  };
  cg_cmd->callback([&] {
    if (cg_s.partition.empty()) throw InvalidArgument("--partition is required");
    sequence_cmd(cg_c, cg_s, "coarse-grain");
  });
  sample_cmd->callback([&] {
    if (sample_s.bernoulli.empty() == sample_s.markov.empty())
      throw InvalidArgument("give exactly one of --bernoulli, --markov");
    sequence_cmd(sample_c, sample_s, "sample");
  });

  // transition
  Common tr_c;
  Source tr_s;
  auto* tr_cmd = app.add_subcommand("transition", "Empirical transition matrix");
  add_common(tr_cmd, tr_c);
  add_source(tr_cmd, tr_s);
  tr_cmd->callback([&] {
    const TransitionEstimate est = empirical_transition_matrix(load_source(tr_s, tr_c));
    if (tr_c.format == "csv") {
      emit(ctx, tr_c, matrix_csv(est.probabilities));
      return;
    }
    emit_report(ctx, tr_c, "transition", est.to_json());
  });

  // chain-analyze
  Common ca_c;
  Source ca_s;
  std::string ca_matrix_file;
  auto* ca_cmd = app.add_subcommand("chain-analyze", "Stationary distribution, irreducibility and periods");
  add_common(ca_cmd, ca_c);
  add_source(ca_cmd, ca_s);
  ca_cmd->add_option("--matrix-file", ca_matrix_file, "JSON matrix (array of rows)");
  ca_cmd->callback([&] {
    SquareMatrix p;
    if (!ca_s.markov.empty()) {
      p = parse_matrix(ca_s.markov);
    } else if (!ca_matrix_file.empty()) {
      std::ifstream is(ca_matrix_file);
      if (!is) throw InvalidArgument("--matrix-file: cannot open " + ca_matrix_file);
      try {
        p = matrix_from_json(json::parse(is));
      } catch (const json::exception& e) {
        throw ParseError(std::string("--matrix-file: ") + e.what());
      }
    } else {
      p = empirical_transition_matrix(load_source(ca_s, ca_c)).probabilities;
    }
    if (!ca_s.markov.empty() || !ca_matrix_file.empty())
      for (std::size_t i = 0; i < p.size(); ++i) validate_distribution(p.row(i));
    emit_report(ctx, ca_c, "chain-analyze", chain_json(p));
  });

  // entropy
  Common en_c;
  Source en_s;
  std::string en_probs;
  std::size_t en_block = 8;
  auto* en_cmd = app.add_subcommand("entropy", "KS entropy of a Bernoulli shift, or an entropy-rate estimate");
  add_common(en_cmd, en_c);
  add_source(en_cmd, en_s);
  en_cmd->add_option("--probs", en_probs, "Bernoulli probabilities");
  en_cmd->add_option("--block", en_block, "Block length of the entropy-rate estimate")->check(CLI::PositiveNumber);
  en_cmd->callback([&] {
    double h = 0.0;
    json result;
    if (!en_probs.empty()) {
      const auto probs = parse_reals(en_probs);
      h = ks_entropy_bernoulli(probs);
      result = {{"probs", probs}, {"entropy_bits", h}};
    } else {
      const SymbolSequence seq = load_source(en_s, en_c);
      h = entropy_rate_estimate(seq, en_block);
      result = {{"block", en_block}, {"length", seq.size()}, {"entropy_rate_bits", h}};
    }
    if (en_c.format == "json" && (!en_c.out.empty() || en_cmd->count("--format") > 0)) {
      emit_report(ctx, en_c, "entropy", result);
      return;
    }
    emit(ctx, en_c, format_value(h) + "\n");
  });

  // mixing
  Common mx_c;
  std::string mx_system = "baker";
  double mx_alpha = kGoldenConjugate;
  std::string mx_a, mx_b;
  std::size_t mx_lag_min = 0, mx_lag_max = 10, mx_samples = 100000, mx_cesaro = 0;
  auto* mx_cmd = app.add_subcommand("mixing", "Correlation sweep over lags");
  add_common(mx_cmd, mx_c);
  mx_cmd->add_option("--system", mx_system, "baker or rotation");
  mx_cmd->add_option("--alpha", mx_alpha, "Rotation number");
  mx_cmd->add_option("--a", mx_a, "Set A: x0,y0,x1,y1 (baker) or a,b (rotation)")->required();
  mx_cmd->add_option("--b", mx_b, "Set B (defaults to A)");
  mx_cmd->add_option("--lag-min", mx_lag_min, "First lag");
  mx_cmd->add_option("--lag-max", mx_lag_max, "Last lag");
  mx_cmd->add_option("--samples", mx_samples, "Monte Carlo samples per lag")->check(CLI::PositiveNumber);
  mx_cmd->add_option("--cesaro", mx_cesaro, "Also average the exact correlation over lags 1..N");
  mx_cmd->callback([&] {
    const System sys = parse_system(mx_system, mx_alpha);
    const Box a = parse_box(mx_a, sys.dimension(), "--a");
    const Box b = mx_b.empty() ? a : parse_box(mx_b, sys.dimension(), "--b");
    if (mx_lag_max < mx_lag_min) throw InvalidArgument("--lag-max is below --lag-min");
    auto exact = [&](std::size_t lag) -> std::optional<double> {
      if (sys.kind() == System::Kind::Rotation) return rotation_arc_correlation(sys.alpha(), a, b, lag);
      try {
        return baker_dyadic_correlation(a, b, lag);
      } catch (const InvalidArgument&) {
        return std::nullopt;
      }
    };
    const std::uint64_t seed = require_seed(mx_c);
    json rows = json::array();
    std::string csv = "lag,correlation,std_error,exact\n";
    for (std::size_t lag = mx_lag_min; lag <= mx_lag_max; ++lag) {
      const MixingEstimate m = mixing_correlation(sys, a, b, lag, mx_samples, derive_seed(seed, lag));
      const auto ex = exact(lag);
      json row = to_json(m);
      row["exact"] = ex ? json(*ex) : json(nullptr);
      rows.push_back(row);
      csv += std::to_string(lag) + "," + format_double(m.correlation) + "," + format_double(m.std_error) + "," +
             (ex ? format_double(*ex) : "") + "\n";
    }
    json result{{"system", sys.name()}, {"lags", rows}};
    if (mx_cesaro > 0) {
      std::vector<double> values;
      for (std::size_t lag = 1; lag <= mx_cesaro; ++lag) {
        const auto ex = exact(lag);
        if (!ex) throw InvalidArgument("--cesaro needs sets with an exact correlation");
        values.push_back(*ex);
      }
      result["cesaro"] = {{"lags", mx_cesaro}, {"average", cesaro_average(values)}};
    }
    if (mx_c.format == "csv") {
      emit(ctx, mx_c, csv);
      return;
    }
    emit_report(ctx, mx_c, "mixing", std::move(result));
  });

  // congruence and certify-markov
  Common cg2_c;
  std::optional<int> cg2_n;
  std::optional<double> cg2_eps;
  bool cg2_certify = false;
  auto* cong_cmd = app.add_subcommand("congruence", "Distance bound of the dyadic partition, optionally certified");
  add_common(cong_cmd, cg2_c);
  cong_cmd->add_option("--n", cg2_n, "Partition level");
  cong_cmd->add_option("--epsilon", cg2_eps, "Pick the smallest level whose bound is below epsilon");
  cong_cmd->add_flag("--certify", cg2_certify, "Also run the Markov replacement certificate");
  Common cm_c;
  int cm_n = 1;
  CertificateOptions cm_opts;
  auto* cm_cmd = app.add_subcommand("certify-markov", "Markov replacement certificate for the baker map");
  add_common(cm_cmd, cm_c);
  cm_cmd->add_option("--n", cm_n, "Partition level")->required();
  cm_cmd->add_option("--significance", cm_opts.significance, "Test significance");
  cm_cmd->add_option("--stationary-tol", cm_opts.stationary_tolerance, "Tolerance for a uniform stationary vector");
  cm_cmd->add_option("--window-tol", cm_opts.window_tolerance, "Tolerance of the word-frequency comparison");
  cong_cmd->callback([&] {
    if (cg2_n.has_value() == cg2_eps.has_value()) throw InvalidArgument("give exactly one of --n, --epsilon");
    const int n = cg2_n ? *cg2_n : level_for_epsilon(*cg2_eps);
    const CongruenceBound bound = epsilon_congruence_bound_check(n);
    json result{{"level", n}, {"bound", to_json(bound)}};
    if (cg2_eps) result["epsilon"] = *cg2_eps;
    bool pass = bound.pass && (!cg2_eps || bound.bound < *cg2_eps);
    if (cg2_certify) {
      const MarkovCertificate cert = markov_replacement_certificate(n, cg2_c.len, require_seed(cg2_c));
      result["certificate"] = cert.to_json();
      pass = pass && cert.pass();
    }
    result["pass"] = pass;
    emit_report(ctx, cg2_c, "congruence", std::move(result));
    code = pass ? kExitPass : kExitVerdictFail;
  });
  cm_cmd->callback([&] {
    const MarkovCertificate cert = markov_replacement_certificate(cm_n, cm_c.len, require_seed(cm_c), cm_opts);
    emit_report(ctx, cm_c, "certify-markov", cert.to_json());
    code = cert.pass() ? kExitPass : kExitVerdictFail;
  });

  // hypothesis tests
  Common tb_c, tm_c, ts_c;
  Source tb_s, tm_s, ts_s;
  double tb_sig = kSignificance, tm_sig = kSignificance, ts_sig = kSignificance;
  std::size_t ts_blocks = 10;
  auto* tb_cmd = app.add_subcommand("test-bernoulli", "Independence test of consecutive symbols");
  auto* tm_cmd = app.add_subcommand("test-markov", "Order-1 Markov property test");
  auto* ts_cmd = app.add_subcommand("test-stationary", "Homogeneity of symbol and bigram frequencies across blocks");
  for (auto [cmd, c, s, sig] : {std::tuple{tb_cmd, &tb_c, &tb_s, &tb_sig}, std::tuple{tm_cmd, &tm_c, &tm_s, &tm_sig},
                                std::tuple{ts_cmd, &ts_c, &ts_s, &ts_sig}}) {
    add_common(cmd, *c);
    add_source(cmd, *s);
    cmd->add_option("--significance", *sig, "Test significance");
  }
  ts_cmd->add_option("--blocks", ts_blocks, "Number of blocks");
  tb_cmd->callback([&] {
    const BernoulliRejection r = bernoulli_rejection_witness(load_source(tb_s, tb_c), tb_sig);
    emit_report(ctx, tb_c, "test-bernoulli", to_json(r));
    code = r.rejected ? kExitVerdictFail : kExitPass;
  });
  tm_cmd->callback([&] {
    const MarkovPropertyResult r = markov_property_test(load_source(tm_s, tm_c), tm_sig);
    emit_report(ctx, tm_c, "test-markov", to_json(r));
    code = r.pass ? kExitPass : kExitVerdictFail;
  });
  ts_cmd->callback([&] {
    const StationarityReport r = stationarity_check(load_source(ts_s, ts_c), ts_blocks, ts_sig);
    emit_report(ctx, ts_c, "test-stationary", to_json(r));
    code = r.pass ? kExitPass : kExitVerdictFail;
  });

  // conjugacy
  Common cj_c;
  std::size_t cj_points = 1000, cj_steps = 50, cj_width = 64;
  auto* cj_cmd = app.add_subcommand("conjugacy", "Exact check that the binary coding conjugates baker and shift");
  add_common(cj_cmd, cj_c);
  cj_cmd->add_option("--points", cj_points, "Random exact points")->check(CLI::PositiveNumber);
  cj_cmd->add_option("--steps", cj_steps, "Steps per point")->check(CLI::PositiveNumber);
  cj_cmd->add_option("--width", cj_width, "Binary digits per coordinate")->check(CLI::Range(2, 64));
  cj_cmd->callback([&] {
    std::size_t failures = 0;
    json first = nullptr;
    const auto pts = sample_invariant_exact(cj_points, require_seed(cj_c), cj_width);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const ConjugacyReport r = conjugacy_check(pts[i], cj_steps);
      if (!r.conjugate) {
        if (failures == 0) first = {{"point", i}, {"report", to_json(r)}};
        ++failures;
      }
    }
    emit_report(ctx, cj_c, "conjugacy",
                {{"pass", failures == 0},
                 {"points", cj_points},
                 {"steps", cj_steps},
                 {"width", cj_width},
                 {"failures", failures},
                 {"first_failure", first}});
    code = failures == 0 ? kExitPass : kExitVerdictFail;
  });

  // window-equiv
  Common we_c;
  Source we_s, we_ref;
  std::size_t we_window = 3;
  double we_tol = 0.01;
  auto* we_cmd = app.add_subcommand("window-equiv", "Compare word frequencies of two sequences");
  add_common(we_cmd, we_c);
  add_source(we_cmd, we_s);
  we_cmd->add_option("--against", we_ref.in, "Reference symbol file");
  we_cmd->add_option("--against-bernoulli", we_ref.bernoulli, "Reference Bernoulli probabilities");
  we_cmd->add_option("--against-markov", we_ref.markov, "Reference Markov matrix");
  we_cmd->add_option("--window", we_window, "Word length")->check(CLI::PositiveNumber);
  we_cmd->add_option("--tol", we_tol, "Largest allowed frequency difference");
  we_cmd->callback([&] {
    const SymbolSequence a = load_source(we_s, we_c);
    const SymbolSequence b =
        we_ref.in.empty() ? sample_source(we_ref, a.size(), derive_seed(require_seed(we_c), 1)) : load_sequence(we_ref.in);
    const WindowEquivalenceReport r = finite_window_equivalence(a, b, we_window, we_tol);
    emit_report(ctx, we_c, "window-equiv", to_json(r));
    code = r.pass ? kExitPass : kExitVerdictFail;
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitPass;
    }
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return code;
}

}  // namespace obseq::cli
