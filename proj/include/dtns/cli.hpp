/**
 * @file cli.hpp
 * @brief The `dtns` command line: subcommand dispatch, fixture files and
 *        the selftest driver.
 *
 * Exit codes: 0 success, 1 usage error, 2 domain error (the error name is
 * printed first on stderr), 3 selftest mismatch.
 */
#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "dtns/classify.hpp"
#include "dtns/core.hpp"
#include "dtns/error.hpp"
#include "dtns/json.hpp"
#include "dtns/numeration.hpp"
#include "dtns/positionality.hpp"
#include "dtns/trees.hpp"

#ifndef DTNS_FIXTURE_DIR
#define DTNS_FIXTURE_DIR "fixtures"
#endif

namespace dtns::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kDomain = 2, kMismatch = 3 };

enum class Mode { DT, Classic, Twos };

inline Mode parse_mode(std::string_view s) {
  if (s == "dt") return Mode::DT;
  if (s == "classic") return Mode::Classic;
  if (s == "twos") return Mode::Twos;
  throw Error(ErrorCode::SyntaxError, "mode must be dt, classic or twos");
}

/// `LO..HI` with decimal bounds.
inline std::pair<BigInt, BigInt> parse_range(std::string_view text) {
  const auto dots = text.find("..");
  if (dots == std::string_view::npos) throw Error(ErrorCode::SyntaxError, "range must look like LO..HI");
  BigInt lo = parse_bigint(detail::trim(text.substr(0, dots)));
  BigInt hi = parse_bigint(detail::trim(text.substr(dots + 2)));
  if (lo > hi) throw Error(ErrorCode::SyntaxError, "empty range");
  return {lo, hi};
}

/// Right seed letter of a `_|a` or bare `a` seed text.
inline Letter parse_right_letter(const Substitution& sub, std::string_view text) {
  const auto bar = text.find('|');
  return sub.letter(detail::trim(bar == std::string_view::npos ? text : text.substr(bar + 1)));
}

// ---------------------------------------------------------------------------
// Fixtures
// ---------------------------------------------------------------------------

/**
 * A golden table. Text format, one `key: value` per line, `#` comments:
 *
 *     name: abc-c-ac
 *     sub: a->abc,b->c,c->ac
 *     seed: c|a
 *     residue: 0
 *     period: 1            (optional)
 *     mode: dt             (dt, classic or twos)
 *     positional: true     (optional)
 *     weights: 1 2 5       (optional, leading U values)
 *     vweights: 1 3 6      (optional, leading V values)
 *     rows:
 *     -5 100
 *     2 02
 */
struct Fixture {
  std::string name;
  std::string sub;
  std::string seed;
  std::size_t residue = 0;
  std::optional<std::size_t> period;
  Mode mode = Mode::DT;
  std::optional<bool> positional;
  std::vector<BigInt> U;
  std::vector<BigInt> V;
  std::vector<std::pair<BigInt, std::string>> rows;
};

inline std::vector<BigInt> parse_bigint_list(std::string_view text) {
  std::vector<BigInt> out;
  for (auto tok : detail::split_tokens(text)) out.push_back(parse_bigint(tok));
  return out;
}

inline Fixture parse_fixture(std::string_view text, std::string fallback_name = "fixture") {
  Fixture f;
  f.name = std::move(fallback_name);
  bool in_rows = false;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    std::string_view line = detail::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (in_rows) {
      auto toks = detail::split_tokens(line);
      if (toks.size() != 2) throw Error(ErrorCode::SyntaxError, "fixture row must be `n word`: " + std::string(line));
      f.rows.emplace_back(parse_bigint(toks[0]), std::string(toks[1]));
      continue;
    }
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) throw Error(ErrorCode::SyntaxError, "fixture line without key: " + std::string(line));
    const std::string key(detail::trim(line.substr(0, colon)));
    const std::string value(detail::trim(line.substr(colon + 1)));
    if (key == "name") f.name = value;
    else if (key == "sub") f.sub = value;
    else if (key == "seed") f.seed = value;
    else if (key == "residue") f.residue = static_cast<std::size_t>(std::stoul(value));
    else if (key == "period") f.period = static_cast<std::size_t>(std::stoul(value));
    else if (key == "mode") f.mode = parse_mode(value);
    else if (key == "positional") f.positional = value == "true";
    else if (key == "weights") f.U = parse_bigint_list(value);
    else if (key == "vweights") f.V = parse_bigint_list(value);
    else if (key == "rows") in_rows = true;
    else throw Error(ErrorCode::SyntaxError, "unknown fixture key '" + key + "'");
  }
  return f;
}

inline std::vector<Fixture> load_fixtures(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".fixture") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<Fixture> out;
  for (const auto& path : files) {
    std::ifstream in(path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    out.push_back(parse_fixture(buffer.str(), path.stem().string()));
  }
  return out;
}

inline NumerationSystem fixture_system(const Fixture& f) {
  Substitution sub = parse_substitution(f.sub);
  SeedSpec seed = parse_seed(sub, f.seed, f.period);
  return NumerationSystem(std::move(sub), seed, f.residue);
}

struct SelftestOutcome {
  std::vector<std::string> failures;
  std::vector<std::string> notes;
};

inline void check_fixture_verdict(const Fixture& f, const NumerationSystem& ns, SelftestOutcome& out) {
  auto fail = [&](const std::string& what) { out.failures.push_back(f.name + ": " + what); };
  const PositionalityReport report = check_positional(ns, std::max(f.U.size(), f.V.size()));
  if (f.positional && *f.positional != report.positional) {
    fail(std::string("verdict ") + (report.positional ? "Positional" : "NotPositional"));
  }
  if (!f.U.empty() || !f.V.empty()) {
    if (!report.weights) {
      fail("expected weights but the system is not positional");
    } else {
      for (std::size_t i = 0; i < f.U.size(); ++i) {
        if (report.weights->U.at(i) != f.U[i]) fail("U_" + std::to_string(i) + " = " + to_string(report.weights->U[i]));
      }
      for (std::size_t i = 0; i < f.V.size(); ++i) {
        if (i >= report.weights->V.size() || report.weights->V[i] != f.V[i]) fail("V_" + std::to_string(i) + " differs");
      }
    }
  }
}

inline void check_fixture_rows(const Fixture& f, SelftestOutcome& out) {
  auto fail = [&](const std::string& what) { out.failures.push_back(f.name + ": " + what); };
  if (f.mode == Mode::Twos) {
    for (const auto& [n, expected] : f.rows) {
      const std::string got = to_text(twos_complement_rep(n));
      if (got != expected) fail("rep2c(" + to_string(n) + ") = " + got + ", expected " + expected);
      if (twos_complement_val(parse_digit_word(expected, false)) != n) fail("val2c(" + expected + ") != " + to_string(n));
    }
    return;
  }
  const Substitution sub = parse_substitution(f.sub);
  if (f.mode == Mode::Classic) {
    const Letter a = parse_right_letter(sub, f.seed);
    for (const auto& [n, expected] : f.rows) {
      const std::string got = to_text(rep_classic_N(sub, a, n));
      if (got != expected) fail("rep(" + to_string(n) + ") = " + got + ", expected " + expected);
      const Evaluation e = val_classic_N(sub, a, parse_digit_word(expected, false));
      if (e.value != n || !e.canonical) fail("val(" + expected + ") is not (" + to_string(n) + ", canonical)");
    }
    check_fixture_verdict(f, NumerationSystem(sub, make_seed(sub, std::nullopt, a), 0), out);
    return;
  }
  const NumerationSystem ns = fixture_system(f);
  for (const auto& [n, expected] : f.rows) {
    const DigitWord word = rep(ns, n);
    const std::string got = to_text(word);
    if (got != expected) fail("rep(" + to_string(n) + ") = " + got + ", expected " + expected);
    const Evaluation e = val(ns, parse_digit_word(expected));
    if (e.value != n || !e.canonical) fail("val(" + expected + ") is not (" + to_string(n) + ", canonical)");
    if (oracle_rep(ns, n) != word) fail("oracle disagrees at n = " + to_string(n));
  }
  check_fixture_verdict(f, ns, out);
}

inline void check_fixture_range(const Fixture& f, const BigInt& lo, const BigInt& hi, SelftestOutcome& out) {
  auto fail = [&](const std::string& what) { out.failures.push_back(f.name + ": " + what); };
  if (f.mode == Mode::Twos) {
    for (BigInt n = lo; n <= hi; ++n) {
      if (twos_complement_val(twos_complement_rep(n)) != n) fail("val2c(rep2c(" + to_string(n) + "))");
    }
    return;
  }
  if (f.mode == Mode::Classic) {
    const Substitution sub = parse_substitution(f.sub);
    const Letter a = parse_right_letter(sub, f.seed);
    for (BigInt n = lo < 0 ? BigInt(0) : lo; n <= hi; ++n) {
      const Evaluation e = val_classic_N(sub, a, rep_classic_N(sub, a, n));
      if (e.value != n || !e.canonical) fail("val(rep(" + to_string(n) + "))");
    }
    return;
  }
  const NumerationSystem ns = fixture_system(f);
  std::vector<BigInt> domain;
  for (BigInt n = lo; n <= hi; ++n) {
    if (ns.in_domain(n)) domain.push_back(n);
  }
  std::map<BigInt, DigitWord> words;
  std::size_t longest = 0;
  for (const auto& n : domain) {
    DigitWord w = rep(ns, n);
    const Evaluation e = val(ns, w);
    if (e.value != n || !e.canonical) fail("val(rep(" + to_string(n) + "))");
    longest = std::max(longest, w.digits.size());
    words.emplace(n, std::move(w));
  }
  try {
    for (const auto& [n, w] : oracle_rep_range(ns, lo, hi)) {
      if (words.at(n) != w) fail("oracle disagrees at n = " + to_string(n));
    }
    const PositionalityReport report = check_positional(ns, longest + 1);
    if (report.positional) {
      for (const auto& [n, w] : words) {
        if (positional_value(w, report.weights->U, report.weights->V) != n) fail("weights misevaluate " + to_string(n));
      }
    }
    const FitResult fit = fit_weights_oracle(ns, lo, hi);
    if (report.positional && (!fit.consistent || !weights_match(*fit.consistent, *report.weights))) {
      fail("weight fitting disagrees with the Positional verdict");
    }
    if (!report.positional && fit.consistent) out.notes.push_back(f.name + ": no contradiction within range (unresolved)");
  } catch (const Error& e) {
    if (e.code() != ErrorCode::CapExceeded) throw;
    out.notes.push_back(f.name + ": oracle skipped (" + e.what() + ")");
  }
}

// ---------------------------------------------------------------------------
// Dispatch
// ---------------------------------------------------------------------------

struct Options {
  std::string sub;
  std::string seed;
  std::size_t residue = 0;
  std::optional<std::size_t> period;
  std::string n;
  std::string range;
  std::string word;
  std::size_t count = 6;
  std::size_t depth = 3;
  std::string format = "human";
  std::string mode = "dt";
  std::string fixtures = DTNS_FIXTURE_DIR;
  bool show_v = false;
};

inline NumerationSystem make_system(const Options& o) {
  Substitution sub = parse_substitution(o.sub);
  SeedSpec seed = parse_seed(sub, o.seed, o.period);
  return NumerationSystem(std::move(sub), seed, o.residue);
}

inline std::vector<BigInt> requested_integers(const Options& o) {
  if (!o.range.empty()) {
    auto [lo, hi] = parse_range(o.range);
    std::vector<BigInt> out;
    for (BigInt n = lo; n <= hi; ++n) out.push_back(n);
    return out;
  }
  if (o.n.empty()) throw Error(ErrorCode::SyntaxError, "give -n N or --range LO..HI");
  return {parse_bigint(o.n)};
}

inline std::string join(const std::vector<BigInt>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) out += (i ? " " : "") + to_string(values[i]);
  return out;
}

inline int cmd_rep(const Options& o, std::ostream& out) {
  const Mode mode = parse_mode(o.mode);
  const auto ns_list = requested_integers(o);
  std::optional<NumerationSystem> ns;
  std::optional<Substitution> sub;
  if (mode == Mode::DT) ns = make_system(o);
  if (mode == Mode::Classic) sub = parse_substitution(o.sub);
  Json rows = Json::array();
  for (const auto& n : ns_list) {
    DigitWord w;
    if (mode == Mode::DT) w = rep(*ns, n);
    else if (mode == Mode::Classic) w = rep_classic_N(*sub, parse_right_letter(*sub, o.seed), n);
    else w = twos_complement_rep(n);
    if (o.format == "json") {
      rows.push_back(Json{{"n", to_string(n)}, {"rep", to_text(w)}});
    } else if (ns_list.size() > 1 || o.format == "tsv") {
      out << to_string(n) << '\t' << to_text(w) << '\n';
    } else {
      out << to_text(w) << '\n';
    }
  }
  if (o.format == "json") out << rows.dump() << '\n';
  return kOk;
}

inline int cmd_val(const Options& o, std::ostream& out) {
  const Mode mode = parse_mode(o.mode);
  if (o.word.empty()) throw Error(ErrorCode::SyntaxError, "give --word W");
  Evaluation e;
  if (mode == Mode::DT) {
    e = val(make_system(o), parse_digit_word(o.word));
  } else if (mode == Mode::Classic) {
    const Substitution sub = parse_substitution(o.sub);
    e = val_classic_N(sub, parse_right_letter(sub, o.seed), parse_digit_word(o.word, false));
  } else {
    const DigitWord w = parse_digit_word(o.word, false);
    e.value = twos_complement_val(w);
    e.canonical = twos_complement_rep(e.value) == w;
  }
  if (o.format == "json") {
    out << Json{{"value", to_string(e.value)}, {"canonical", e.canonical}}.dump() << '\n';
  } else {
    out << to_string(e.value) << ' ' << (e.canonical ? "canonical" : "noncanonical") << '\n';
  }
  return kOk;
}

inline int cmd_analyze(const Options& o, std::ostream& out) {
  const PositionalityReport report = check_positional(make_system(o), o.count);
  if (o.format == "human") {
    out << (report.positional ? "Positional" : "NotPositional") << '\n';
  } else {
    out << report_json(report).dump() << '\n';
  }
  return kOk;
}

inline int cmd_weights(const Options& o, std::ostream& out) {
  const WeightTable table = weights(make_system(o), o.count);
  if (o.format == "json") {
    out << weights_json(table).dump() << '\n';
  } else {
    out << join(o.show_v ? table.V : table.U) << '\n';
  }
  return kOk;
}

inline int cmd_tree(const Options& o, std::ostream& out) {
  const TreeSlice slice = expand(make_system(o), o.depth);
  out << (o.format == "tsv" ? to_tsv(slice) : to_dot(slice));
  return kOk;
}

inline int cmd_classify(const Options& o, std::ostream& out) {
  const Substitution sub = parse_substitution(o.sub);
  const Letter a1 = o.seed.empty() ? 0 : parse_right_letter(sub, o.seed);
  const Classification c = bertrand_classify(sub, a1);
  if (o.format == "human") {
    out << bertrand_name(c.kind) << '\n';
  } else {
    out << classification_json(sub, c).dump() << '\n';
  }
  return kOk;
}

inline int cmd_simplify(const Options& o, std::ostream& out) {
  const Substitution sub = parse_substitution(o.sub);
  const SeedSpec seed = o.seed.empty() ? make_seed(sub, std::nullopt, Letter{0}, o.period) : parse_seed(sub, o.seed, o.period);
  const Simplification s = simplify(sub, seed);
  if (o.format == "json") {
    Json map = Json::object();
    for (Letter x = 0; x < sub.size(); ++x) {
      if (s.kept[x] || s.kept[s.letter_map[x]]) map[sub.name(x)] = s.substitution.name(s.letter_map[x]);
    }
    out << Json{{"substitution", substitution_json(s.substitution)},
                {"seed", format_seed(s.substitution, s.seed)},
                {"letter_map", map}}
               .dump()
        << '\n';
  } else {
    out << s.substitution.to_dsl() << '\n' << format_seed(s.substitution, s.seed) << '\n';
  }
  return kOk;
}

inline int cmd_selftest(const Options& o, std::ostream& out) {
  const auto [lo, hi] = parse_range(o.range.empty() ? std::string("-100..100") : o.range);
  const auto fixtures = load_fixtures(o.fixtures);
  if (fixtures.empty()) throw Error(ErrorCode::SyntaxError, "no .fixture files in " + o.fixtures);
  std::size_t failed = 0;
  for (const auto& f : fixtures) {
    SelftestOutcome outcome;
    try {
      check_fixture_rows(f, outcome);
      check_fixture_range(f, lo, hi, outcome);
    } catch (const Error& e) {
      outcome.failures.push_back(f.name + ": " + e.what());
    }
    out << (outcome.failures.empty() ? "ok   " : "FAIL ") << f.name << '\n';
    for (const auto& msg : outcome.failures) out << "  " << msg << '\n';
    for (const auto& msg : outcome.notes) out << "  note: " << msg << '\n';
    if (!outcome.failures.empty()) ++failed;
  }
  out << fixtures.size() - failed << "/" << fixtures.size() << " fixtures passed\n";
  return failed == 0 ? kOk : kMismatch;
}

/// Entry point; `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dumont-Thomas numeration systems", "dtns"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* cmd, bool needs_seed) {
    cmd->add_option("--sub", o.sub, "substitution, e.g. a->abc,b->c,c->ac")->required(needs_seed);
    cmd->add_option("--seed", o.seed, "seed b|a, _|a or b|_")->required(needs_seed);
    cmd->add_option("-r,--residue", o.residue, "residue r, 0 <= r < p");
    cmd->add_option("--period", o.period, "period p (a multiple of the minimal period)");
    cmd->add_option("--format", o.format, "human|json|tsv|dot");
  };
  auto* rep_cmd = app.add_subcommand("rep", "representation of integers");
  common(rep_cmd, false);
  rep_cmd->add_option("-n", o.n, "integer (decimal, any length)");
  rep_cmd->add_option("--range", o.range, "LO..HI; prints `n<TAB>rep` lines");
  rep_cmd->add_option("--mode", o.mode, "dt|classic|twos");
  auto* val_cmd = app.add_subcommand("val", "value of a digit word (sign digit first in dt mode)");
  common(val_cmd, false);
  val_cmd->add_option("--word", o.word, "digit word, e.g. 10120 or 1.0.12.0")->required();
  val_cmd->add_option("--mode", o.mode, "dt|classic|twos");
  auto* analyze_cmd = app.add_subcommand("analyze", "positionality report as JSON");
  common(analyze_cmd, true);
  analyze_cmd->add_option("--count", o.count, "number of weights in the report");
  auto* weights_cmd = app.add_subcommand("weights", "weight sequence U (or V with --v)");
  common(weights_cmd, true);
  weights_cmd->add_option("--count", o.count, "number of weights");
  weights_cmd->add_flag("--v", o.show_v, "print V instead of U");
  auto* tree_cmd = app.add_subcommand("tree", "tree export; TSV columns: level, column, letter, parent_edge");
  common(tree_cmd, true);
  tree_cmd->add_option("--depth", o.depth, "deepest level (seed row is level 0)");
  auto* classify_cmd = app.add_subcommand("classify", "Fabre-like form, Parry condition and Bertrand class");
  common(classify_cmd, false);
  classify_cmd->get_option("--sub")->required();
  auto* simplify_cmd = app.add_subcommand("simplify", "merge non-final letters of equal length profile");
  common(simplify_cmd, false);
  simplify_cmd->get_option("--sub")->required();
  auto* selftest_cmd = app.add_subcommand("selftest", "golden fixtures plus rep/val/oracle/fitting cross-checks");
  selftest_cmd->add_option("--range", o.range, "LO..HI for the cross-checks (default -100..100)");
  selftest_cmd->add_option("--fixtures", o.fixtures, "directory of .fixture files");

  std::vector<const char*> argv{"dtns"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "UsageError: " << e.what() << '\n';
    return kUsage;
  }
  // Per-command default output format.
  const bool format_given = std::any_of(args.begin(), args.end(), [](const std::string& a) { return a == "--format"; });
  if (!format_given) {
    o.format = analyze_cmd->parsed() || classify_cmd->parsed() ? "json" : "human";
    if (tree_cmd->parsed()) o.format = "dot";
  }
  try {
    if (rep_cmd->parsed()) return cmd_rep(o, out);
    if (val_cmd->parsed()) return cmd_val(o, out);
    if (analyze_cmd->parsed()) return cmd_analyze(o, out);
    if (weights_cmd->parsed()) return cmd_weights(o, out);
    if (tree_cmd->parsed()) return cmd_tree(o, out);
    if (classify_cmd->parsed()) return cmd_classify(o, out);
    if (simplify_cmd->parsed()) return cmd_simplify(o, out);
    if (selftest_cmd->parsed()) return cmd_selftest(o, out);
  } catch (const Error& e) {
    err << e.what() << '\n';
    return kDomain;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "IOError: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace dtns::cli
