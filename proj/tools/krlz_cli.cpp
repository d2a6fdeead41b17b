#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cli_support.hpp"
#include "krlz/krlz.hpp"

using json = nlohmann::ordered_json;
using namespace krlz;
using namespace krlz::cli;

namespace {

constexpr std::size_t kOracleLimit = std::size_t{1} << 16;
constexpr std::uint64_t kSigma = kSentinel + 1;

struct Common {
  std::uint64_t seed = 0;
  CLI::Option* seed_opt = nullptr;
  std::string fingerprint = "production";
  std::string format = "tsv";
  std::string output;
  bool stats = false;
  bool verify = false;
  bool verify_oracle = false;
};

struct Inputs {
  std::string text_path;
  std::string patterns_path;
  std::string manifest_path;
  std::string blob_path;
  std::string bounds_path;
  std::string factorization_path;
  std::string mode = "2opt";
  double epsilon = 0.5;
};

class Clock {
 public:
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    return s;
  }
  double total() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
  std::chrono::steady_clock::time_point last_ = start_;
};

void add_common(CLI::App* app, Common& c) {
  c.seed_opt = app->add_option("--seed", c.seed, "Seed for the fingerprint bases (default: $KRLZ_SEED or built-in)");
  app->add_option("--fingerprint", c.fingerprint, "production | test:<prime>");
  app->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"tsv", "json"}));
  app->add_option("-o,--output", c.output, "Output file (default: stdout)");
  app->add_flag("--stats", c.stats, "Print a JSON stats object on stderr");
  app->add_flag("--verify", c.verify, "Las Vegas mode: verify answers, fail instead of erring");
  app->add_flag("--verify-oracle", c.verify_oracle, "Cross-check against brute force (n <= 65536)");
}

void add_text(CLI::App* app, Inputs& in) {
  app->add_option("-t,--text", in.text_path, "Text file (bytes)")->required();
}

void add_patterns(CLI::App* app, Inputs& in, bool required) {
  auto* p = app->add_option("-p,--patterns", in.patterns_path, "Patterns, one per line (escapes \\n \\t \\\\)");
  auto* m = app->add_option("--pattern-manifest", in.manifest_path, "Lines offset<TAB>length into --pattern-blob");
  auto* b = app->add_option("--pattern-blob", in.blob_path, "Binary blob for --pattern-manifest");
  p->excludes(m);
  m->needs(b);
  if (required) app->callback([p, m] {
      if (p->count() == 0 && m->count() == 0) throw CLI::RequiredError("--patterns or --pattern-manifest");
    });
}

Fingerprinter fingerprinter(const Common& c) {
  const std::uint64_t seed = resolve_seed(c.seed_opt->count() ? std::optional(c.seed) : std::nullopt,
                                          std::getenv("KRLZ_SEED"));
  return make_fingerprinter(c.fingerprint, seed, kSigma);
}

std::vector<Text> load_patterns(const Inputs& in) {
  if (!in.manifest_path.empty()) return parse_manifest(read_file(in.manifest_path), read_file(in.blob_path));
  if (!in.patterns_path.empty()) return parse_patterns(read_file(in.patterns_path));
  return {};
}

void guard_oracle(const Common& c, std::size_t n) {
  if (c.verify_oracle && n > kOracleLimit) throw usage_error("--verify-oracle needs a text of at most 65536 symbols");
}

json fingerprint_json(const Fingerprinter& fpr) {
  json ch = json::array();
  for (std::size_t k = 0; k < fpr.channel_count(); ++k)
    ch.push_back({{"prime", fpr.channel(k).prime}, {"base", fpr.channel(k).base}});
  return {{"seed", fpr.seed()}, {"sigma", fpr.sigma()}, {"channels", ch}};
}

json match_stats_json(const MatchStats& s) {
  return {{"peak_pending", s.peak_pending},
          {"peak_pending_per_pattern", s.peak_pending_per_pattern},
          {"requests_created", s.requests_created},
          {"spacing_violations", s.spacing_violations},
          {"extension_overlaps", s.extension_overlaps},
          {"sweeps", s.sweeps},
          {"windows", s.windows},
          {"peak_index_entries", s.peak_index_entries},
          {"peak_block_nodes", s.peak_block_nodes}};
}

json lz_stats_json(const LzStats& s) {
  return {{"padded_length", s.padded_length},       {"levels", s.levels},
          {"peak_unfactored", s.peak_unfactored},   {"peak_cherries", s.peak_cherries},
          {"peak_live", s.peak_live},               {"cherries", s.cherries},
          {"chains", s.chains},                     {"phase1_phrases", s.phase1_phrases},
          {"phase2_rounds", s.phase2_rounds},       {"phase2_phrases", s.phase2_phrases},
          {"phase3_iterations", s.phase3_iterations}, {"phase3_phrases", s.phase3_phrases},
          {"refine_rounds", s.refine_rounds},       {"refine_phrases", s.refine_phrases}};
}

json position_json(const MaybePosition& p) { return p ? json(*p + 1) : json(nullptr); }

std::string position_tsv(const MaybePosition& p) { return p ? std::to_string(*p + 1) : "-"; }

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw io_error("cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
  void finish() {
    stream().flush();
    if (!stream()) throw io_error("write failed");
  }

 private:
  std::ofstream file_;
};

struct Report {
  json phases = json::object();
  json extra = json::object();
  Clock clock;

  void phase(const std::string& name) { phases[name] = clock.lap(); }
};

void emit_stats(const Common& c, const std::string& command, const Fingerprinter& fpr, std::size_t n, Report& r) {
  if (!c.stats) return;
  json out = {{"command", command}, {"n", n}, {"wall_seconds", r.clock.total()}, {"phases", r.phases}};
  for (auto& [k, v] : r.extra.items()) out[k] = v;
  out["fingerprint"] = fingerprint_json(fpr);
  std::cerr << out.dump() << '\n';
}

int run_match(const Common& c, const Inputs& in) {
  Report rep;
  const Fingerprinter fpr = fingerprinter(c);
  const Text text = bytes_to_text(read_file(in.text_path));
  const std::vector<Text> pats = load_patterns(in);
  guard_oracle(c, text.size());
  rep.phase("load");
  const std::vector<SymbolSpan> spans(pats.begin(), pats.end());
  MatchStats ms;
  std::vector<MaybePosition> ans;
  if (!spans.empty()) {
    ans = c.verify ? lv_match_dictionary(fpr, text, spans, &ms)
                   : match_dictionary(fpr, text, spans, {.stats = &ms, .las_vegas = false});
  }
  rep.phase("match");
  if (c.verify_oracle) {
    auto ref = oracles::naive_multi_match(text, spans);
    for (std::size_t j = 0; j < spans.size(); ++j)
      if (ref[j].leftmost != ans[j]) throw verification_failure("oracle disagrees on pattern " + std::to_string(j + 1));
    rep.phase("oracle");
  }
  Output out(c.output);
  if (c.format == "json") {
    json res = json::array();
    for (std::size_t j = 0; j < ans.size(); ++j) res.push_back({{"id", j + 1}, {"leftmost", position_json(ans[j])}});
    out.stream() << json{{"command", "match"}, {"results", res}}.dump() << '\n';
  } else {
    for (std::size_t j = 0; j < ans.size(); ++j) out.stream() << j + 1 << '\t' << position_tsv(ans[j]) << '\n';
  }
  out.finish();
  rep.extra["patterns"] = spans.size();
  rep.extra["matcher"] = match_stats_json(ms);
  emit_stats(c, "match", fpr, text.size(), rep);
  return kOk;
}

int run_longest_prefix(const Common& c, const Inputs& in) {
  Report rep;
  const Fingerprinter fpr = fingerprinter(c);
  const Text text = bytes_to_text(read_file(in.text_path));
  const std::vector<Text> pats = load_patterns(in);
  std::vector<Position> bounds;
  if (!in.bounds_path.empty()) {
    bounds = parse_bounds(read_file(in.bounds_path));
    if (bounds.size() != pats.size()) throw io_error("bounds file needs one line per pattern");
  }
  guard_oracle(c, text.size());
  rep.phase("load");
  const std::vector<SymbolSpan> spans(pats.begin(), pats.end());
  MatchStats ms;
  std::vector<PrefixMatch> res;
  if (!spans.empty()) {
    res = c.verify ? lv_longest_prefix(fpr, text, spans, bounds, &ms)
                   : longest_prefix_bounded(fpr, text, spans, bounds, &ms);
  }
  rep.phase("longest_prefix");
  if (c.verify_oracle) {
    for (std::size_t j = 0; j < spans.size(); ++j) {
      const Position r = bounds.empty() ? kNoBound : bounds[j];
      if (oracles::brute_longest_prefix(text, spans[j], r).length != res[j].length)
        throw verification_failure("oracle disagrees on pattern " + std::to_string(j + 1));
    }
    rep.phase("oracle");
  }
  Output out(c.output);
  if (c.format == "json") {
    json arr = json::array();
    for (std::size_t j = 0; j < res.size(); ++j)
      arr.push_back({{"id", j + 1}, {"length", res[j].length}, {"witness", position_json(res[j].witness)}});
    out.stream() << json{{"command", "longest-prefix"}, {"results", arr}}.dump() << '\n';
  } else {
    for (std::size_t j = 0; j < res.size(); ++j)
      out.stream() << j + 1 << '\t' << res[j].length << '\t' << position_tsv(res[j].witness) << '\n';
  }
  out.finish();
  rep.extra["patterns"] = spans.size();
  rep.extra["matcher"] = match_stats_json(ms);
  emit_stats(c, "longest-prefix", fpr, text.size(), rep);
  return kOk;
}

std::string mode_label(const Inputs& in) {
  if (in.mode != "eps") return in.mode;
  std::ostringstream os;
  os << "eps:" << in.epsilon;
  return os.str();
}

// Runs the requested parse with per-phase timing.
Factorization parse(const Fingerprinter& fpr, const Text& text, const Inputs& in, bool verify, LzStats& st,
                    Report& rep) {
  if (in.mode == "exact") {
    Factorization f = exact_lz77(text);
    rep.phase("exact");
    return f;
  }
  Factorization f;
  f.n = text.size();
  if (!text.empty()) {
    Phase1Result p1 = phase1_chains(fpr, text, &st);
    rep.phase("phase1");
    f = phase2_merge(fpr, text, p1.chains, &st);
    rep.phase("phase2");
    f = phase3_two_opt(fpr, text, std::move(f), 5, &st, verify);
    rep.phase("phase3");
    attach_sources(fpr, text, f, {.stats = &st, .las_vegas = verify});
    rep.phase("sources");
  }
  if (in.mode == "eps") {
    f = refine_epsilon(fpr, text, f, in.epsilon, {.stats = &st, .las_vegas = false});
    rep.phase("refine");
  }
  if (verify) {
    const std::string err = validate_factorization(text, f);
    if (!err.empty()) throw verification_failure("factorization failed verification: " + err);
    rep.phase("verify");
  }
  return f;
}

void write_json_factorization(std::ostream& os, const Factorization& f, const std::string& mode) {
  json arr = json::array();
  for (const Phrase& p : f.phrases) {
    json ph = {{"start", p.start + 1}, {"length", p.length}};
    if (p.is_literal()) {
      ph["literal"] = p.literal;
    } else {
      ph["source"] = *p.source + 1;
    }
    arr.push_back(ph);
  }
  os << json{{"command", "lz77"}, {"n", f.n}, {"mode", mode}, {"phrases", arr}}.dump() << '\n';
}

int run_lz77(const Common& c, const Inputs& in) {
  if (in.mode == "eps" && !(in.epsilon > 0.0 && in.epsilon <= 1.0)) throw usage_error("--epsilon must lie in (0, 1]");
  Report rep;
  const Fingerprinter fpr = fingerprinter(c);
  const Text text = bytes_to_text(read_file(in.text_path));
  guard_oracle(c, text.size());
  rep.phase("load");
  LzStats st;
  const Factorization f = parse(fpr, text, in, c.verify, st, rep);
  if (c.verify_oracle) {
    const std::size_t z = oracles::brute_exact_lz77(text).size();
    const std::string err = validate_factorization(text, f);
    if (!err.empty()) throw verification_failure("oracle check: " + err);
    const double limit = in.mode == "exact" ? static_cast<double>(z)
                         : in.mode == "2opt" ? 2.0 * static_cast<double>(z)
                                             : (1.0 + in.epsilon) * static_cast<double>(z);
    if (static_cast<double>(f.size()) > limit + 1e-9)
      throw verification_failure("oracle check: " + std::to_string(f.size()) + " phrases, z = " + std::to_string(z));
    rep.extra["z"] = z;
    rep.phase("oracle");
  }
  Output out(c.output);
  if (c.format == "json") {
    write_json_factorization(out.stream(), f, mode_label(in));
  } else {
    write_factorization(out.stream(), f, mode_label(in));
  }
  out.finish();
  rep.extra["phrases"] = f.size();
  rep.extra["lz"] = lz_stats_json(st);
  rep.extra["matcher"] = match_stats_json(st.match);
  emit_stats(c, "lz77", fpr, text.size(), rep);
  return kOk;
}

FactorizationFile load_factorization(const std::string& path) {
  std::istringstream is(read_file(path));
  try {
    return read_factorization(is);
  } catch (const std::invalid_argument& e) {
    throw io_error(path + ": " + e.what());
  }
}

int run_decode(const Common& c, const Inputs& in) {
  Report rep;
  const FactorizationFile ff = load_factorization(in.factorization_path);
  Text t;
  try {
    t = decode_factorization(ff.f);
  } catch (const std::invalid_argument& e) {
    throw io_error(in.factorization_path + ": " + e.what());
  }
  rep.phase("decode");
  Output out(c.output);
  out.stream() << text_to_bytes(t);
  out.finish();
  if (c.stats) {
    json s = {{"command", "decode"}, {"n", t.size()}, {"phrases", ff.f.size()}, {"mode", ff.mode},
              {"wall_seconds", rep.clock.total()}, {"phases", rep.phases}};
    std::cerr << s.dump() << '\n';
  }
  return kOk;
}

// Runs every Las Vegas path that applies to the given inputs.
int run_verify(const Common& c, const Inputs& in) {
  Report rep;
  const Fingerprinter fpr = fingerprinter(c);
  const Text text = bytes_to_text(read_file(in.text_path));
  const std::vector<Text> pats = load_patterns(in);
  std::vector<Position> bounds;
  if (!in.bounds_path.empty()) {
    bounds = parse_bounds(read_file(in.bounds_path));
    if (bounds.size() != pats.size()) throw io_error("bounds file needs one line per pattern");
  }
  rep.phase("load");
  std::vector<std::pair<std::string, std::string>> lines;
  int status = kOk;
  auto attempt = [&](const std::string& name, auto&& body) {
    try {
      body();
      lines.push_back({name, "ok"});
    } catch (const verification_failure& e) {
      lines.push_back({name, std::string("failed: ") + e.what()});
      status = kVerification;
    }
    rep.phase(name);
  };
  MatchStats ms;
  const std::vector<SymbolSpan> spans(pats.begin(), pats.end());
  if (!spans.empty()) {
    attempt("match", [&] { lv_match_dictionary(fpr, text, spans, &ms); });
    attempt("longest-prefix", [&] { lv_longest_prefix(fpr, text, spans, bounds, &ms); });
  }
  if (!in.factorization_path.empty()) {
    const FactorizationFile ff = load_factorization(in.factorization_path);
    attempt("factorization", [&] {
      const std::string err = validate_factorization(text, ff.f);
      if (!err.empty()) throw verification_failure(err);
    });
  } else {
    LzStats st;
    attempt("lz77", [&] { approximate_lz77_2opt(fpr, text, {.stats = &st, .las_vegas = true}); });
  }
  Output out(c.output);
  if (c.format == "json") {
    json arr = json::array();
    for (auto& [k, v] : lines) arr.push_back({{"check", k}, {"result", v}});
    out.stream() << json{{"command", "verify"}, {"checks", arr}}.dump() << '\n';
  } else {
    for (auto& [k, v] : lines) out.stream() << k << '\t' << v << '\n';
  }
  out.finish();
  rep.extra["matcher"] = match_stats_json(ms);
  emit_stats(c, "verify", fpr, text.size(), rep);
  return status;
}

// Instrumentation report for the 2-approximate parse.
int run_stats(const Common& c, const Inputs& in) {
  Report rep;
  const Fingerprinter fpr = fingerprinter(c);
  const Text text = bytes_to_text(read_file(in.text_path));
  guard_oracle(c, text.size());
  rep.phase("load");
  LzStats st;
  Inputs two = in;
  two.mode = "2opt";
  const Factorization f = parse(fpr, text, two, c.verify, st, rep);
  json out = {{"command", "stats"}, {"n", text.size()}, {"phrases", f.size()}};
  if (c.verify_oracle) {
    out["z"] = exact_lz77(text).size();
    rep.phase("exact");
  }
  out["wall_seconds"] = rep.clock.total();
  out["phases"] = rep.phases;
  out["lz"] = lz_stats_json(st);
  out["matcher"] = match_stats_json(st.match);
  out["fingerprint"] = fingerprint_json(fpr);
  Output o(c.output);
  o.stream() << out.dump(c.format == "json" ? -1 : 2) << '\n';
  o.finish();
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiple-pattern matching and LZ77 parsing in small working space"};
  app.require_subcommand(1);
  Common common;
  Inputs in;

  auto* match = app.add_subcommand("match", "Leftmost occurrence of every pattern");
  add_text(match, in);
  add_patterns(match, in, true);
  add_common(match, common);

  auto* lp = app.add_subcommand("longest-prefix", "Longest occurring prefix of every pattern");
  add_text(lp, in);
  add_patterns(lp, in, true);
  lp->add_option("--bounds", in.bounds_path, "Per-pattern upper bound on the start, 1-based, one per line");
  add_common(lp, common);

  auto* lz = app.add_subcommand("lz77", "LZ77 factorization");
  add_text(lz, in);
  lz->add_option("--mode", in.mode, "exact | 2opt | eps")->check(CLI::IsMember({"exact", "2opt", "eps"}));
  lz->add_option("--epsilon", in.epsilon, "Approximation slack for --mode eps, in (0, 1]");
  add_common(lz, common);

  auto* ver = app.add_subcommand("verify", "Run the verified (Las Vegas) paths");
  add_text(ver, in);
  add_patterns(ver, in, false);
  ver->add_option("--bounds", in.bounds_path, "Per-pattern bounds for the longest-prefix check");
  ver->add_option("-f,--factorization", in.factorization_path, "Factorization file to validate against the text");
  add_common(ver, common);

  auto* dec = app.add_subcommand("decode", "Rebuild the text from a factorization file");
  dec->add_option("-i,--input", in.factorization_path, "Factorization file")->required();
  dec->add_option("-o,--output", common.output, "Output file (default: stdout)");
  dec->add_flag("--stats", common.stats, "Print a JSON stats object on stderr");

  auto* st = app.add_subcommand("stats", "Instrumentation report for the 2-approximate parse");
  add_text(st, in);
  add_common(st, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*match) return run_match(common, in);
    if (*lp) return run_longest_prefix(common, in);
    if (*lz) return run_lz77(common, in);
    if (*ver) return run_verify(common, in);
    if (*dec) return run_decode(common, in);
    if (*st) return run_stats(common, in);
  } catch (const usage_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const io_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const verification_failure& e) {
    std::cerr << "verification failed: " << e.what() << '\n';
    return kVerification;
  } catch (const invariant_violation& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInvariant;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInvariant;
  }
  return kUsage;
}
