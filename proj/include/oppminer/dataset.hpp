#pragma once

// Dataset ingestion, moving-average smoothing and trend labelling.
//
// Single-series files hold one value per line, or CSV rows from which one
// column is selected by header name or 1-based index. Labeled datasets hold
// one series per line with the class label as the first field; the
// delimiter (comma, tab or blanks) is detected from the first data line.

#include <charconv>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "oppminer/core.hpp"

namespace oppminer {

struct Dataset {
  std::vector<TimeSeries> series;
  std::vector<std::string> labels;  // empty, or one per series
  std::string source;

  std::size_t size() const noexcept { return series.size(); }
  bool labeled() const noexcept { return !labels.empty(); }

  friend bool operator==(const Dataset& a, const Dataset& b) {
    return a.series == b.series && a.labels == b.labels;
  }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

/// Dot-decimal number; rejects trailing garbage and non-finite values.
inline std::optional<double> parse_number(std::string_view token) {
  token = trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  if (token.empty()) return std::nullopt;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

enum class Delimiter { Comma, Tab, Blank };

inline Delimiter detect_delimiter(std::string_view line) {
  if (line.find(',') != std::string_view::npos) return Delimiter::Comma;
  if (line.find('\t') != std::string_view::npos) return Delimiter::Tab;
  return Delimiter::Blank;
}

inline std::vector<std::string_view> split(std::string_view line, Delimiter delimiter) {
  std::vector<std::string_view> fields;
  if (delimiter == Delimiter::Blank) {
    std::size_t pos = 0;
    while (true) {
      pos = line.find_first_not_of(" \t\r", pos);
      if (pos == std::string_view::npos) break;
      const auto end = line.find_first_of(" \t\r", pos);
      fields.push_back(line.substr(pos, end == std::string_view::npos ? end : end - pos));
      if (end == std::string_view::npos) break;
      pos = end;
    }
    return fields;
  }
  const char sep = delimiter == Delimiter::Comma ? ',' : '\t';
  std::size_t pos = 0;
  while (true) {
    const auto end = line.find(sep, pos);
    fields.push_back(trim(line.substr(pos, end == std::string_view::npos ? end : end - pos)));
    if (end == std::string_view::npos) break;
    pos = end + 1;
  }
  return fields;
}

inline std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

inline std::string file_stem(const std::string& path) {
  const auto slash = path.find_last_of("/\\");
  std::string name = slash == std::string::npos ? path : path.substr(slash + 1);
  const auto dot = name.find_last_of('.');
  return dot == std::string::npos || dot == 0 ? name : name.substr(0, dot);
}

}  // namespace detail

/// Selects a CSV column by header name or by 1-based index.
struct ColumnSelector {
  std::string name;
  std::size_t index = 0;  // 1-based; 0 when selecting by name

  static ColumnSelector parse(const std::string& text) {
    if (!text.empty() && text.find_first_not_of("0123456789") == std::string::npos) {
      const auto value = std::stoul(text);
      if (value == 0) throw Error(ErrorCode::ParseError, "column index is 1-based");
      return {{}, value};
    }
    return {text, 0};
  }
};

/// Reads a single series from text lines; `source` names the input in errors.
inline TimeSeries parse_single_series(const std::vector<std::string>& lines, const std::string& source,
                                      const std::optional<ColumnSelector>& column = std::nullopt) {
  std::vector<double> values;
  std::optional<std::size_t> column_index;
  std::optional<detail::Delimiter> delimiter;
  bool header_seen = false;

  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    const std::string_view line = detail::trim(lines[i]);
    if (line.empty()) continue;

    if (!column) {
      const auto value = detail::parse_number(line);
      if (!value) throw ParseError(source, line_no, "expected a number, got '" + std::string(line) + "'");
      values.push_back(*value);
      continue;
    }

    if (!delimiter) delimiter = detail::detect_delimiter(line);
    const auto fields = detail::split(line, *delimiter);
    if (!header_seen) {
      header_seen = true;
      if (!column->name.empty()) {
        for (std::size_t f = 0; f < fields.size(); ++f) {
          if (fields[f] == column->name) column_index = f;
        }
        if (!column_index) throw ParseError(source, line_no, "no column named '" + column->name + "'");
        continue;
      }
      column_index = column->index - 1;
      // A non-numeric first row in the selected column is a header.
      if (column->index <= fields.size() && !detail::parse_number(fields[*column_index])) continue;
    }
    if (*column_index >= fields.size()) {
      throw ParseError(source, line_no, "missing column " + std::to_string(*column_index + 1));
    }
    const auto value = detail::parse_number(fields[*column_index]);
    if (!value) {
      throw ParseError(source, line_no, "expected a number, got '" + std::string(fields[*column_index]) + "'");
    }
    values.push_back(*value);
  }
  if (values.empty()) throw Error(ErrorCode::EmptyInput, "'" + source + "' holds no values");
  return TimeSeries(std::move(values), detail::file_stem(source));
}

inline TimeSeries load_single_series(const std::string& path,
                                     const std::optional<ColumnSelector>& column = std::nullopt) {
  return parse_single_series(detail::read_lines(path), path, column);
}

inline Dataset parse_labeled_dataset(const std::vector<std::string>& lines, const std::string& source) {
  Dataset ds;
  ds.source = source;
  std::optional<detail::Delimiter> delimiter;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    const std::string_view line = detail::trim(lines[i]);
    if (line.empty()) continue;
    if (!delimiter) delimiter = detail::detect_delimiter(line);
    const auto fields = detail::split(line, *delimiter);
    if (fields.size() < 2) {
      throw Error(ErrorCode::RaggedInput,
                  source + ":" + std::to_string(line_no) + ": expected a label and at least one value");
    }
    if (fields[0].empty()) throw ParseError(source, line_no, "empty label");
    std::vector<double> values;
    values.reserve(fields.size() - 1);
    for (std::size_t f = 1; f < fields.size(); ++f) {
      const auto value = detail::parse_number(fields[f]);
      if (!value) {
        throw ParseError(source, line_no, "expected a number, got '" + std::string(fields[f]) + "'");
      }
      values.push_back(*value);
    }
    ds.labels.emplace_back(fields[0]);
    ds.series.emplace_back(std::move(values), "series" + std::to_string(ds.series.size() + 1));
  }
  if (ds.series.empty()) throw Error(ErrorCode::EmptyInput, "'" + source + "' holds no series");
  return ds;
}

inline Dataset load_labeled_dataset(const std::string& path) {
  return parse_labeled_dataset(detail::read_lines(path), path);
}

/// Shortest decimal text that reads back to the same double.
inline std::string format_number(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, ptr);
}

/// Canonical labeled form: comma-separated, label first, one series per line.
inline void write_labeled_dataset(std::ostream& out, const Dataset& ds) {
  for (std::size_t i = 0; i < ds.size(); ++i) {
    out << (ds.labeled() ? ds.labels[i] : std::string("0"));
    for (double v : ds.series[i].values()) out << ',' << format_number(v);
    out << '\n';
  }
}

/// Centered mean over `window` values, shrinking at the edges; output length n.
inline TimeSeries moving_average(const TimeSeries& s, std::size_t window) {
  if (window == 0 || window % 2 == 0) {
    throw Error(ErrorCode::BadWindow, "moving-average window must be odd and positive");
  }
  if (window > s.size()) {
    throw Error(ErrorCode::BadWindow, "moving-average window exceeds the series length");
  }
  const auto values = s.values();
  const std::size_t n = values.size();
  const std::size_t half = (window - 1) / 2;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= half ? i - half : 0;
    const std::size_t hi = std::min(n - 1, i + half);
    double sum = 0.0;
    double lowest = values[lo];
    double highest = values[lo];
    for (std::size_t j = lo; j <= hi; ++j) {
      sum += values[j];
      lowest = std::min(lowest, values[j]);
      highest = std::max(highest, values[j]);
    }
    // Rounding must not push a mean outside the window's range.
    out[i] = std::clamp(sum / static_cast<double>(hi - lo + 1), lowest, highest);
  }
  return TimeSeries(std::move(out), s.name());
}

enum class Trend { Upward, Downward, Mixed };

inline std::string_view to_string(Trend t) {
  switch (t) {
    case Trend::Upward: return "upward";
    case Trend::Downward: return "downward";
    case Trend::Mixed: return "mixed";
  }
  return "mixed";
}

/// Upward: ends above its start with more rising than falling steps.
/// Downward: the mirror image. Anything else is mixed.
inline Trend classify_trend(const Pattern& p) {
  std::size_t up = 0;
  std::size_t down = 0;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) (p[i] < p[i + 1] ? up : down) += 1;
  const Rank first = p[0];
  const Rank last = p[p.size() - 1];
  if (last > first && up > down) return Trend::Upward;
  if (last < first && down > up) return Trend::Downward;
  return Trend::Mixed;
}

}  // namespace oppminer
