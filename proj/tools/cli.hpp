#pragma once

// Command-line driver: mine, match, featurize, cluster, bench.
//
// Exit codes: 0 success, 2 usage or input error, 1 internal invariant violation.

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "oppminer/oppminer.hpp"

namespace oppminer::cli {

enum class Format { Csv, JsonLines, Pretty };

enum class LogLevel { Off, Info, Debug };

inline LogLevel log_level_from_env() {
  const char* value = std::getenv("OPPMINER_LOG");
  if (!value) return LogLevel::Off;
  const std::string level(value);
  if (level == "info") return LogLevel::Info;
  if (level == "debug") return LogLevel::Debug;
  return LogLevel::Off;
}

struct RunConfig {
  std::string subcommand;
  std::string input;
  std::optional<std::string> column;
  std::optional<long long> minsup;
  std::optional<double> minsup_rel;
  bool maximal = false;
  std::string variant = "fusion_fvp";
  std::string pattern;
  std::size_t window = 1;
  std::optional<std::size_t> k;
  std::uint64_t seed = 0;
  unsigned threads = default_threads();
  Format format = Format::Csv;
  std::string output;
  std::vector<std::size_t> prefixes;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string fixed(double value, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << value;
  return os.str();
}

inline std::vector<std::pair<Pattern, std::size_t>> sorted_by_length(const SupportMap& patterns) {
  std::vector<std::pair<Pattern, std::size_t>> rows(patterns.begin(), patterns.end());
  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& a, const auto& b) { return a.first.size() < b.first.size(); });
  return rows;
}

inline std::size_t resolve_minsup(const RunConfig& cfg, std::size_t series_length) {
  if (cfg.minsup) {
    if (*cfg.minsup < 1) throw UsageError("--minsup must be a positive integer");
    return static_cast<std::size_t>(*cfg.minsup);
  }
  if (cfg.minsup_rel) {
    if (!(*cfg.minsup_rel > 0.0 && *cfg.minsup_rel <= 1.0)) throw UsageError("--minsup-rel must lie in (0, 1]");
    return absolute_minsup(*cfg.minsup_rel, series_length);
  }
  throw UsageError("one of --minsup or --minsup-rel is required");
}

inline TimeSeries load_series(const RunConfig& cfg) {
  std::optional<ColumnSelector> column;
  if (cfg.column) column = ColumnSelector::parse(*cfg.column);
  TimeSeries s = load_single_series(cfg.input, column);
  if (cfg.window > 1) s = moving_average(s, cfg.window);
  return s;
}

inline Dataset load_dataset(const RunConfig& cfg) {
  Dataset ds = load_labeled_dataset(cfg.input);
  if (cfg.window > 1) {
    for (auto& s : ds.series) s = moving_average(s, cfg.window);
  }
  return ds;
}

inline std::size_t shortest_series(const Dataset& ds) {
  std::size_t shortest = ds.series.front().size();
  for (const auto& s : ds.series) shortest = std::min(shortest, s.size());
  return shortest;
}

inline MineOptions mine_options(const RunConfig& cfg, std::ostream& log, LogLevel level) {
  MineOptions options;
  options.threads = cfg.threads;
  if (level != LogLevel::Off) {
    options.on_level = [&log](const LevelStats& stats) {
      nlohmann::ordered_json line;
      line["level"] = stats.level;
      line["frequent"] = stats.frequent;
      line["candidates"] = stats.candidates;
      line["cumulative_ms"] = stats.cumulative_ms;
      log << line.dump() << '\n';
    };
  }
  return options;
}

// ---------------------------------------------------------------------------

inline void report_mine(std::ostream& out, const RunConfig& cfg, const SupportMap& patterns,
                        const MiningResult& mining, const MaximalResult* maximal) {
  const auto rows = sorted_by_length(patterns);
  nlohmann::ordered_json summary;
  summary["type"] = "summary";
  summary["patterns"] = patterns.size();
  summary["frequent"] = mining.frequent.size();
  if (maximal) {
    summary["maximal"] = maximal->maximal.size();
    summary["compression_rate"] = maximal->compression_rate;
  }
  summary["candidates"] = mining.candidates_generated;
  summary["minsup"] = mining.minsup;
  summary["variant"] = std::string(to_string(mining.variant));
  summary["elapsed_ms"] = mining.elapsed_ms;

  switch (cfg.format) {
    case Format::Csv: {
      out << "pattern,length,support,trend\n";
      for (const auto& [p, support] : rows) {
        out << to_string(p) << ',' << p.size() << ',' << support << ',' << to_string(classify_trend(p)) << '\n';
      }
      out << "# patterns=" << patterns.size() << " frequent=" << mining.frequent.size();
      if (maximal) {
        out << " maximal=" << maximal->maximal.size() << " compression_rate=" << fixed(maximal->compression_rate, 6);
      }
      out << " candidates=" << mining.candidates_generated << " minsup=" << mining.minsup
          << " variant=" << to_string(mining.variant) << " elapsed_ms=" << fixed(mining.elapsed_ms, 3) << '\n';
      break;
    }
    case Format::JsonLines: {
      for (const auto& [p, support] : rows) {
        nlohmann::ordered_json line;
        line["type"] = "pattern";
        line["pattern"] = to_string(p);
        line["length"] = p.size();
        line["support"] = support;
        line["trend"] = std::string(to_string(classify_trend(p)));
        out << line.dump() << '\n';
      }
      out << summary.dump() << '\n';
      break;
    }
    case Format::Pretty: {
      out << (maximal ? "Maximal" : "Frequent") << " order-preserving patterns (minsup " << mining.minsup << ")\n";
      for (const auto& [p, support] : rows) {
        out << "  " << std::left << std::setw(24) << to_string(p) << " support " << std::setw(8) << support
            << to_string(classify_trend(p)) << '\n';
      }
      out << patterns.size() << " patterns";
      if (maximal) {
        out << " out of " << mining.frequent.size() << " frequent, compression "
            << fixed(100.0 * maximal->compression_rate, 1) << "%";
      }
      out << ", " << mining.candidates_generated << " candidates, " << fixed(mining.elapsed_ms, 3) << " ms\n";
      break;
    }
  }
}

inline int cmd_mine(const RunConfig& cfg, std::ostream& out, std::ostream& log, LogLevel level) {
  const auto variant = parse_variant(cfg.variant);
  if (!variant) throw UsageError("unknown variant '" + cfg.variant + "'");
  if (cfg.maximal && *variant != Variant::FusionFvp) {
    throw UsageError("--maximal runs the fusion_fvp miner only");
  }
  const TimeSeries s = load_series(cfg);
  const std::size_t minsup = resolve_minsup(cfg, s.size());
  const MineOptions options = mine_options(cfg, log, level);
  if (cfg.maximal) {
    const MaximalResult result = mine_maximal(s, minsup, options);
    report_mine(out, cfg, result.maximal, result.mining, &result);
  } else {
    const MiningResult result = mine_variant(s, minsup, *variant, options);
    report_mine(out, cfg, result.frequent, result, nullptr);
  }
  return 0;
}

inline int cmd_match(const RunConfig& cfg, std::ostream& out) {
  const Pattern p = parse_pattern(cfg.pattern);
  const TimeSeries s = load_series(cfg);
  const OccurrenceList occ = fvp_support(s, p);
  switch (cfg.format) {
    case Format::Csv: {
      out << "pattern,support,starts\n" << to_string(p) << ',' << occ.support() << ',';
      for (std::size_t i = 0; i < occ.starts.size(); ++i) out << (i ? " " : "") << occ.starts[i];
      out << '\n';
      break;
    }
    case Format::JsonLines: {
      nlohmann::ordered_json line;
      line["pattern"] = to_string(p);
      line["support"] = occ.support();
      line["starts"] = occ.starts;
      out << line.dump() << '\n';
      break;
    }
    case Format::Pretty: {
      out << "pattern " << to_string(p) << "\nsupport " << occ.support() << "\nstarts";
      for (Position l1 : occ.starts) out << ' ' << l1;
      out << '\n';
      break;
    }
  }
  return 0;
}

inline int cmd_featurize(const RunConfig& cfg, std::ostream& out) {
  const Dataset ds = load_dataset(cfg);
  const std::size_t minsup = resolve_minsup(cfg, shortest_series(ds));
  const FeatureMatrix fm = featurize(ds, minsup, cfg.threads);
  if (cfg.format == Format::JsonLines) {
    for (std::size_t i = 0; i < fm.size(); ++i) {
      nlohmann::ordered_json line;
      line["series"] = i + 1;
      if (!fm.labels.empty()) line["label"] = fm.labels[i];
      nlohmann::ordered_json features = nlohmann::ordered_json::object();
      for (std::size_t j = 0; j < fm.dimension(); ++j) features[to_string(fm.vocabulary[j])] = fm.rows[i][j];
      line["features"] = features;
      out << line.dump() << '\n';
    }
  } else {
    write_feature_csv(out, fm);
  }
  return 0;
}

struct ClusterRow {
  std::string data;
  std::size_t dimension;
  double nmi;
  double homogeneity;
};

inline int cmd_cluster(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Dataset ds = load_dataset(cfg);
  if (!ds.labeled()) throw UsageError("cluster needs a labeled dataset");
  const std::size_t minsup = resolve_minsup(cfg, shortest_series(ds));
  const std::size_t k = cfg.k ? *cfg.k : std::set<std::string>(ds.labels.begin(), ds.labels.end()).size();

  std::vector<ClusterRow> rows;
  std::string raw_note;
  try {
    const auto points = raw_points(ds);
    const auto clusters = kmeans(points, k, cfg.seed);
    rows.push_back({"raw", points.front().size(), nmi(clusters.labels, ds.labels),
                    homogeneity(clusters.labels, ds.labels)});
  } catch (const Error& e) {
    if (e.code() != ErrorCode::UnequalLengths) throw;
    raw_note = e.what();
    err << "warning: raw-data clustering skipped: " << e.what() << '\n';
  }
  const FeatureMatrix fm = featurize(ds, minsup, cfg.threads);
  const auto clusters = kmeans(fm.as_points(), k, cfg.seed);
  rows.push_back({"mined", fm.dimension(), nmi(clusters.labels, ds.labels), homogeneity(clusters.labels, ds.labels)});

  switch (cfg.format) {
    case Format::Csv:
      out << "data,dimension,nmi,homogeneity\n";
      for (const auto& r : rows) {
        out << r.data << ',' << r.dimension << ',' << fixed(r.nmi, 6) << ',' << fixed(r.homogeneity, 6) << '\n';
      }
      if (!raw_note.empty()) out << "# raw skipped: " << raw_note << '\n';
      out << "# k=" << k << " minsup=" << minsup << " seed=" << cfg.seed << '\n';
      break;
    case Format::JsonLines:
      for (const auto& r : rows) {
        nlohmann::ordered_json line;
        line["data"] = r.data;
        line["dimension"] = r.dimension;
        line["nmi"] = r.nmi;
        line["homogeneity"] = r.homogeneity;
        out << line.dump() << '\n';
      }
      break;
    case Format::Pretty:
      out << "k " << k << ", minsup " << minsup << ", seed " << cfg.seed << '\n';
      for (const auto& r : rows) {
        out << "  " << std::left << std::setw(6) << r.data << " dim " << std::setw(6) << r.dimension << " NMI "
            << fixed(r.nmi, 4) << "  h " << fixed(r.homogeneity, 4) << '\n';
      }
      if (!raw_note.empty()) out << "  raw skipped: " << raw_note << '\n';
      break;
  }
  return 0;
}

inline int cmd_bench(const RunConfig& cfg, std::ostream& out, std::ostream& err, std::ostream& log, LogLevel level) {
  const TimeSeries full = load_series(cfg);
  std::vector<std::size_t> lengths = cfg.prefixes;
  if (lengths.empty()) lengths.push_back(full.size());
  for (std::size_t len : lengths) {
    if (len < 2 || len > full.size()) {
      throw UsageError("prefix length " + std::to_string(len) + " outside [2, " + std::to_string(full.size()) + "]");
    }
  }

  const MineOptions options = mine_options(cfg, log, level);
  bool consistent = true;
  if (cfg.format == Format::Csv) out << "length,minsup,variant,frequent,candidates,elapsed_ms\n";
  for (std::size_t len : lengths) {
    const TimeSeries s = full.prefix(len);
    const std::size_t minsup = resolve_minsup(cfg, len);
    std::optional<SupportMap> reference;
    for (Variant v : kAllVariants) {
      const MiningResult r = mine_variant(s, minsup, v, options);
      if (!reference) {
        reference = r.frequent;
      } else if (r.frequent != *reference) {
        consistent = false;
      }
      switch (cfg.format) {
        case Format::Csv:
          out << len << ',' << minsup << ',' << to_string(v) << ',' << r.frequent.size() << ','
              << r.candidates_generated << ',' << fixed(r.elapsed_ms, 3) << '\n';
          break;
        case Format::JsonLines: {
          nlohmann::ordered_json line;
          line["length"] = len;
          line["minsup"] = minsup;
          line["variant"] = std::string(to_string(v));
          line["frequent"] = r.frequent.size();
          line["candidates"] = r.candidates_generated;
          line["elapsed_ms"] = r.elapsed_ms;
          out << line.dump() << '\n';
          break;
        }
        case Format::Pretty:
          out << "length " << std::setw(8) << len << "  minsup " << std::setw(6) << minsup << "  " << std::left
              << std::setw(16) << to_string(v) << std::right << " frequent " << std::setw(6) << r.frequent.size()
              << " candidates " << std::setw(8) << r.candidates_generated << "  " << fixed(r.elapsed_ms, 3)
              << " ms\n";
          break;
      }
    }
  }
  if (!consistent) {
    err << "error: miner variants disagree on the frequent pattern set\n";
    return 1;
  }
  return 0;
}

inline std::vector<std::size_t> parse_lengths(const std::string& text) {
  std::vector<std::size_t> lengths;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (token.empty() || token.find_first_not_of("0123456789") != std::string::npos) {
      throw UsageError("--prefixes expects comma-separated lengths, got '" + text + "'");
    }
    lengths.push_back(std::stoull(token));
  }
  return lengths;
}

}  // namespace detail

/// Runs the CLI on argv-style arguments (args[0] is the program name).
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Order-preserving pattern mining for time series", "oppminer"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string format = "csv";
  std::string prefixes;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--threads", cfg.threads, "Worker threads (default: available parallelism)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--format", format, "Report format")->check(CLI::IsMember({"csv", "json-lines", "pretty"}));
    sub->add_option("--output", cfg.output, "Write the report to this file instead of stdout");
    sub->add_option("--window", cfg.window, "Centered moving-average window applied before mining (odd)");
  };
  auto add_minsup = [&](CLI::App* sub) {
    auto* abs = sub->add_option("--minsup", cfg.minsup, "Absolute minimum support");
    auto* rel = sub->add_option("--minsup-rel", cfg.minsup_rel, "Minimum support as a fraction of n-1");
    abs->excludes(rel);
    rel->excludes(abs);
  };

  auto* mine = app.add_subcommand("mine", "Mine frequent (or maximal) order-preserving patterns");
  mine->add_option("--input", cfg.input, "Single-series file")->required();
  mine->add_option("--column", cfg.column, "CSV column name or 1-based index");
  mine->add_flag("--maximal", cfg.maximal, "Report maximal patterns only");
  mine->add_option("--variant", cfg.variant, "fusion_fvp, fusion_bndm, fusion_nofilter, enum_dfs or enum_bfs");
  add_minsup(mine);
  add_common(mine);

  auto* match = app.add_subcommand("match", "Support and occurrences of one pattern");
  match->add_option("--input", cfg.input, "Single-series file")->required();
  match->add_option("--column", cfg.column, "CSV column name or 1-based index");
  match->add_option("--pattern", cfg.pattern, "Dash-separated ranks, e.g. 3-4-5-1-2")->required();
  add_common(match);

  auto* feat = app.add_subcommand("featurize", "Maximal-pattern support matrix of a labeled dataset");
  feat->add_option("--input", cfg.input, "Labeled dataset file")->required();
  add_minsup(feat);
  add_common(feat);

  auto* cluster = app.add_subcommand("cluster", "k-means on raw series and on maximal-pattern features");
  cluster->add_option("--input", cfg.input, "Labeled dataset file")->required();
  cluster->add_option("--k", cfg.k, "Cluster count (default: number of labels)")->check(CLI::PositiveNumber);
  cluster->add_option("--seed", cfg.seed, "k-means seed");
  add_minsup(cluster);
  add_common(cluster);

  auto* bench = app.add_subcommand("bench", "Run every miner variant and compare");
  bench->add_option("--input", cfg.input, "Single-series file")->required();
  bench->add_option("--column", cfg.column, "CSV column name or 1-based index");
  bench->add_option("--prefixes", prefixes, "Comma-separated prefix lengths to benchmark");
  add_minsup(bench);
  add_common(bench);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  }

  const LogLevel level = log_level_from_env();
  cfg.format = format == "json-lines" ? Format::JsonLines : format == "pretty" ? Format::Pretty : Format::Csv;
  try {
    if (!prefixes.empty()) cfg.prefixes = detail::parse_lengths(prefixes);

    std::ofstream file;
    if (!cfg.output.empty()) {
      file.open(cfg.output);
      if (!file) throw Error(ErrorCode::IoError, "cannot write '" + cfg.output + "'");
    }
    std::ostream& report = cfg.output.empty() ? out : file;

    for (auto* sub : app.get_subcommands()) cfg.subcommand = sub->get_name();
    if (level == LogLevel::Debug) {
      err << "oppminer " << cfg.subcommand << " input=" << cfg.input << " threads=" << cfg.threads << '\n';
    }
    if (cfg.subcommand == "mine") return detail::cmd_mine(cfg, report, err, level);
    if (cfg.subcommand == "match") return detail::cmd_match(cfg, report);
    if (cfg.subcommand == "featurize") return detail::cmd_featurize(cfg, report);
    if (cfg.subcommand == "cluster") return detail::cmd_cluster(cfg, report, err);
    if (cfg.subcommand == "bench") return detail::cmd_bench(cfg, report, err, err, level);
    throw UsageError("unknown subcommand");
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::Internal ? 1 : 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace oppminer::cli
