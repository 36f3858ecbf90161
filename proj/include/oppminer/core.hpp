#pragma once

// Domain types shared by the matcher, candidate generator and miners.
//
// Positions exposed through any public interface are 1-based.

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace oppminer {

enum class ErrorCode {
  TiedValues,
  TooShort,
  InvalidPattern,
  InvalidSeries,
  EmptyPattern,
  OutOfBounds,
  LengthMismatch,
  InvalidMinsup,
  ParseError,
  EmptyInput,
  RaggedInput,
  BadWindow,
  BadK,
  UnequalLengths,
  IoError,
  Internal,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::TiedValues: return "TiedValues";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::InvalidPattern: return "InvalidPattern";
    case ErrorCode::InvalidSeries: return "InvalidSeries";
    case ErrorCode::EmptyPattern: return "EmptyPattern";
    case ErrorCode::OutOfBounds: return "OutOfBounds";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::InvalidMinsup: return "InvalidMinsup";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::RaggedInput: return "RaggedInput";
    case ErrorCode::BadWindow: return "BadWindow";
    case ErrorCode::BadK: return "BadK";
    case ErrorCode::UnequalLengths: return "UnequalLengths";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Error raised while reading a file; `line()` is 1-based, 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(std::string source, std::size_t line, const std::string& what)
      : Error(ErrorCode::ParseError, source + ":" + std::to_string(line) + ": " + what),
        source_(std::move(source)),
        line_(line) {}

  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string source_;
  std::size_t line_;
};

using Rank = std::int32_t;
using Position = std::int64_t;

// ---------------------------------------------------------------------------
// TimeSeries

class TimeSeries {
 public:
  explicit TimeSeries(std::vector<double> values, std::string name = {})
      : values_(std::move(values)), name_(std::move(name)) {
    if (values_.empty()) {
      throw Error(ErrorCode::InvalidSeries, "time series must hold at least one value");
    }
    if (values_.size() > static_cast<std::size_t>(INT32_MAX)) {
      throw Error(ErrorCode::InvalidSeries, "time series longer than 2^31-1");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (!std::isfinite(values_[i])) {
        throw Error(ErrorCode::InvalidSeries,
                    "non-finite value at position " + std::to_string(i + 1));
      }
    }
  }

  TimeSeries(std::initializer_list<double> values) : TimeSeries(std::vector<double>(values)) {}

  std::span<const double> values() const noexcept { return values_; }
  const std::string& name() const noexcept { return name_; }
  std::size_t size() const noexcept { return values_.size(); }

  /// 1-based access.
  double at(Position j) const { return values_.at(static_cast<std::size_t>(j - 1)); }

  /// Copy of the first `length` values.
  TimeSeries prefix(std::size_t length) const {
    length = std::min(length, values_.size());
    return TimeSeries(std::vector<double>(values_.begin(), values_.begin() + length), name_);
  }

  friend bool operator==(const TimeSeries& a, const TimeSeries& b) {
    return a.values_ == b.values_ && a.name_ == b.name_;
  }

 private:
  std::vector<double> values_;
  std::string name_;
};

// ---------------------------------------------------------------------------
// Pattern

/// An order-preserving pattern: a permutation of 1..m with m >= 2.
class Pattern {
 public:
  explicit Pattern(std::vector<Rank> ranks) : ranks_(std::move(ranks)) { validate(); }
  Pattern(std::initializer_list<Rank> ranks) : Pattern(std::vector<Rank>(ranks)) {}

  std::span<const Rank> ranks() const noexcept { return ranks_; }
  std::size_t size() const noexcept { return ranks_.size(); }
  Rank operator[](std::size_t i) const noexcept { return ranks_[i]; }

  /// 1-based access.
  Rank at(std::size_t i) const { return ranks_.at(i - 1); }

  auto begin() const noexcept { return ranks_.begin(); }
  auto end() const noexcept { return ranks_.end(); }

  friend bool operator==(const Pattern&, const Pattern&) = default;
  friend auto operator<=>(const Pattern&, const Pattern&) = default;

  static bool is_permutation(std::span<const Rank> ranks) {
    std::vector<bool> seen(ranks.size() + 1, false);
    for (Rank r : ranks) {
      if (r < 1 || static_cast<std::size_t>(r) > ranks.size() || seen[r]) return false;
      seen[r] = true;
    }
    return true;
  }

 private:
  void validate() const {
    if (ranks_.size() < 2) {
      throw Error(ErrorCode::InvalidPattern, "pattern length must be at least 2");
    }
    if (!is_permutation(ranks_)) {
      throw Error(ErrorCode::InvalidPattern, "ranks are not a permutation of 1..m");
    }
  }

  std::vector<Rank> ranks_;
};

struct PatternHash {
  std::size_t operator()(const Pattern& p) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (Rank r : p) {
      h ^= static_cast<std::size_t>(r);
      h *= 1099511628211ull;
    }
    return h;
  }
};

// ---------------------------------------------------------------------------
// OrderedTable

/// Rank -> position index of a pattern (the inverse permutation), 1-based.
class OrderedTable {
 public:
  explicit OrderedTable(const Pattern& p) : index_(p.size()) {
    for (std::size_t pos = 0; pos < p.size(); ++pos) {
      index_[static_cast<std::size_t>(p[pos] - 1)] = static_cast<Rank>(pos + 1);
    }
  }

  /// index[i] for 1 <= i <= m.
  Rank at(std::size_t i) const { return index_.at(i - 1); }
  std::span<const Rank> index() const noexcept { return index_; }
  std::size_t size() const noexcept { return index_.size(); }

 private:
  std::vector<Rank> index_;
};

inline OrderedTable ordered_table(const Pattern& p) { return OrderedTable(p); }

// ---------------------------------------------------------------------------
// OccurrenceList

struct OccurrenceList {
  std::vector<Position> starts;  // 1-based, strictly increasing
  std::size_t pattern_length = 0;

  std::size_t support() const noexcept { return starts.size(); }

  friend bool operator==(const OccurrenceList&, const OccurrenceList&) = default;
};

// ---------------------------------------------------------------------------
// Relative order

namespace detail {

// Ranks of a tie-free window; returns false when two entries are equal.
template <typename T>
bool ranks_of(std::span<const T> values, std::vector<Rank>& out) {
  const std::size_t m = values.size();
  std::vector<std::size_t> order(m);
  for (std::size_t i = 0; i < m; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  out.assign(m, 0);
  for (std::size_t r = 0; r < m; ++r) {
    if (r > 0 && !(values[order[r - 1]] < values[order[r]])) return false;
    out[order[r]] = static_cast<Rank>(r + 1);
  }
  return true;
}

}  // namespace detail

/// sigma(values): rank of each entry among the window, 1 + count of smaller entries.
template <typename T>
Pattern relative_order(std::span<const T> values) {
  if (values.size() < 2) {
    throw Error(ErrorCode::TooShort, "relative order needs at least two values");
  }
  std::vector<Rank> ranks;
  if (!detail::ranks_of(values, ranks)) {
    throw Error(ErrorCode::TiedValues, "window contains equal values");
  }
  return Pattern(std::move(ranks));
}

inline Pattern relative_order(const std::vector<double>& values) {
  return relative_order(std::span<const double>(values));
}

inline Pattern relative_order(std::initializer_list<double> values) {
  return relative_order(std::span<const double>(values.begin(), values.size()));
}

inline Pattern relative_order(const Pattern& p) { return relative_order(p.ranks()); }

/// Dash-separated rank rendering, e.g. "3-4-1-2".
inline std::string to_string(const Pattern& p) {
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += '-';
    out += std::to_string(p[i]);
  }
  return out;
}

inline Pattern parse_pattern(const std::string& text) {
  std::vector<Rank> ranks;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t next = text.find('-', pos);
    if (next == std::string::npos) next = text.size();
    std::string token = text.substr(pos, next - pos);
    if (token.empty() || token.find_first_not_of("0123456789") != std::string::npos ||
        token.size() > 9) {
      throw Error(ErrorCode::InvalidPattern, "malformed pattern '" + text + "'");
    }
    ranks.push_back(static_cast<Rank>(std::stol(token)));
    pos = next + 1;
  }
  return Pattern(std::move(ranks));
}

}  // namespace oppminer

template <>
struct std::hash<oppminer::Pattern> : oppminer::PatternHash {};
