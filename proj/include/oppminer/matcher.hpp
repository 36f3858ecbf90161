#pragma once

// Support counting for order-preserving patterns.
//
// A pattern and a series are first reduced to up/down bit strings; an exact
// bit-parallel search over those strings proposes candidate windows
// (filtration), and each proposal is then checked against the pattern's
// ordered table with strict comparisons (verification).

#include <array>
#include <cstdint>
#include <vector>

#include "oppminer/core.hpp"

namespace oppminer {

/// Up/down encoding: symbol i is 1 iff source[i] < source[i+1].
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    for (auto b : bits_) {
      if (b > 1) throw Error(ErrorCode::InvalidPattern, "bit string symbols must be 0 or 1");
    }
  }
  BitString(std::initializer_list<int> bits) {
    bits_.reserve(bits.size());
    for (int b : bits) {
      if (b != 0 && b != 1) throw Error(ErrorCode::InvalidPattern, "bit string symbols must be 0 or 1");
      bits_.push_back(static_cast<std::uint8_t>(b));
    }
  }

  std::size_t size() const noexcept { return bits_.size(); }
  bool empty() const noexcept { return bits_.empty(); }
  std::uint8_t operator[](std::size_t i) const noexcept { return bits_[i]; }
  std::span<const std::uint8_t> bits() const noexcept { return bits_; }

  friend bool operator==(const BitString&, const BitString&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

inline BitString encode_pattern(const Pattern& p) {
  std::vector<std::uint8_t> bits(p.size() - 1);
  for (std::size_t i = 0; i + 1 < p.size(); ++i) bits[i] = p[i] < p[i + 1] ? 1 : 0;
  return BitString(std::move(bits));
}

/// Ties encode as 0; verification rejects any window they let through.
inline BitString encode_series(std::span<const double> s) {
  if (s.size() < 2) return BitString();
  std::vector<std::uint8_t> bits(s.size() - 1);
  for (std::size_t j = 0; j + 1 < s.size(); ++j) bits[j] = s[j] < s[j + 1] ? 1 : 0;
  return BitString(std::move(bits));
}

inline BitString encode_series(const TimeSeries& s) { return encode_series(s.values()); }

/// Exact search algorithm used by the filtration step.
enum class FilterKind {
  Sbndm2,  // simplified BNDM reading a 2-gram before verifying a window
  Bndm,    // classic BNDM with prefix tracking
  Linear,  // window-by-window comparison
};

namespace detail {

inline void check_filter_pattern(std::span<const std::uint8_t> pat) {
  if (pat.empty()) throw Error(ErrorCode::EmptyPattern, "filtration pattern is empty");
}

inline std::vector<Position> linear_filter(std::span<const std::uint8_t> text,
                                           std::span<const std::uint8_t> pat) {
  std::vector<Position> out;
  if (pat.size() > text.size()) return out;
  for (std::size_t j = 0; j + pat.size() <= text.size(); ++j) {
    if (std::equal(pat.begin(), pat.end(), text.begin() + static_cast<std::ptrdiff_t>(j))) {
      out.push_back(static_cast<Position>(j + 1));
    }
  }
  return out;
}

// Bit (m-1-i) of masks[c] is set iff pat[i] == c.
inline std::array<std::uint64_t, 2> bit_masks(std::span<const std::uint8_t> pat) {
  std::array<std::uint64_t, 2> masks{0, 0};
  const std::size_t m = pat.size();
  for (std::size_t i = 0; i < m; ++i) masks[pat[i]] |= std::uint64_t{1} << (m - 1 - i);
  return masks;
}

// Smallest positive shift s with pat[s..] a prefix of pat; m when none.
inline std::size_t period(std::span<const std::uint8_t> pat) {
  const std::size_t m = pat.size();
  for (std::size_t s = 1; s < m; ++s) {
    if (std::equal(pat.begin() + static_cast<std::ptrdiff_t>(s), pat.end(), pat.begin())) return s;
  }
  return m;
}

// SBNDM2: the state tracks factors of the pattern read backwards from the
// window end, starting from the last 2-gram. When the state empties at
// window offset j the next window may start at offset j+1. After a full
// match the window advances by the pattern period so that overlapping
// occurrences are all reported.
inline std::vector<Position> sbndm2_filter(std::span<const std::uint8_t> text,
                                           std::span<const std::uint8_t> pat) {
  std::vector<Position> out;
  const std::size_t m = pat.size();
  const std::size_t n = text.size();
  if (m > n) return out;
  const auto masks = bit_masks(pat);
  const std::size_t match_shift = period(pat);

  std::size_t pos = 0;
  while (pos + m <= n) {
    std::uint64_t state = (masks[text[pos + m - 1]] << 1) & masks[text[pos + m - 2]];
    if (state == 0) {
      pos += m - 1;
      continue;
    }
    std::size_t j = m - 2;  // offset of the leftmost symbol read so far
    while (j > 0) {
      state = (state << 1) & masks[text[pos + j - 1]];
      if (state == 0) break;
      --j;
    }
    if (state != 0) {
      out.push_back(static_cast<Position>(pos + 1));
      pos += match_shift;
    } else {
      pos += j;
    }
  }
  return out;
}

// BNDM: the state starts full and records the shortest safe shift whenever
// the suffix read so far is a prefix of the pattern.
inline std::vector<Position> bndm_filter(std::span<const std::uint8_t> text,
                                         std::span<const std::uint8_t> pat) {
  std::vector<Position> out;
  const std::size_t m = pat.size();
  const std::size_t n = text.size();
  if (m > n) return out;
  const auto masks = bit_masks(pat);
  const std::uint64_t high = std::uint64_t{1} << (m - 1);
  const std::uint64_t full = m == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1;

  std::size_t pos = 0;
  while (pos + m <= n) {
    std::size_t j = m;
    std::size_t last = m;
    std::uint64_t state = full;
    while (state != 0) {
      state &= masks[text[pos + j - 1]];
      --j;
      if (state & high) {
        if (j > 0) {
          last = j;
        } else {
          out.push_back(static_cast<Position>(pos + 1));
          break;
        }
      }
      state <<= 1;
    }
    pos += last;
  }
  return out;
}

}  // namespace detail

inline constexpr std::size_t kMaskWidth = 64;

/// All (overlapping) 1-based start positions of `pat` in `text`, ascending.
inline std::vector<Position> filter_candidates(const BitString& text, const BitString& pat,
                                               FilterKind kind = FilterKind::Sbndm2) {
  detail::check_filter_pattern(pat.bits());
  if (pat.size() > text.size()) return {};
  const bool word_sized = pat.size() <= kMaskWidth;
  switch (kind) {
    case FilterKind::Sbndm2:
      if (pat.size() >= 2 && word_sized) return detail::sbndm2_filter(text.bits(), pat.bits());
      break;
    case FilterKind::Bndm:
      if (word_sized) return detail::bndm_filter(text.bits(), pat.bits());
      break;
    case FilterKind::Linear:
      break;
  }
  return detail::linear_filter(text.bits(), pat.bits());
}

namespace detail {

inline bool verify_window(std::span<const double> s, std::span<const Rank> index, std::size_t offset) {
  const double* w = s.data() + offset - 1;  // w[k] is s_{offset+k}, index entries are 1-based
  for (std::size_t i = 0; i + 1 < index.size(); ++i) {
    if (!(w[index[i] - 1] < w[index[i + 1] - 1])) return false;
  }
  return true;
}

}  // namespace detail

/// True iff the window starting at 1-based `l1` order-matches the pattern behind `table`.
inline bool verify_occurrence(const TimeSeries& s, const OrderedTable& table, Position l1) {
  const auto m = static_cast<Position>(table.size());
  const auto n = static_cast<Position>(s.size());
  if (l1 < 1 || l1 + m - 1 > n) {
    throw Error(ErrorCode::OutOfBounds, "window [" + std::to_string(l1) + ", " +
                                            std::to_string(l1 + m - 1) + "] exceeds series of length " +
                                            std::to_string(n));
  }
  return detail::verify_window(s.values(), table.index(), static_cast<std::size_t>(l1));
}

/// How support counting proposes windows for verification.
enum class SupportMethod {
  Fvp,       // SBNDM2 filtration + verification
  FvpBndm,   // BNDM filtration + verification
  Nofilter,  // verification of every window
};

/// Support calculation with a precomputed series encoding; reuse one
/// instance when counting many patterns against the same series.
class SupportCounter {
 public:
  explicit SupportCounter(const TimeSeries& s) : series_(&s), encoded_(encode_series(s)) {}

  const TimeSeries& series() const noexcept { return *series_; }
  const BitString& encoded() const noexcept { return encoded_; }

  OccurrenceList occurrences(const Pattern& p, SupportMethod method = SupportMethod::Fvp) const {
    OccurrenceList result;
    result.pattern_length = p.size();
    const std::size_t n = series_->size();
    const std::size_t m = p.size();
    if (m > n) return result;

    const OrderedTable table(p);
    const auto values = series_->values();
    if (method == SupportMethod::Nofilter) {
      for (std::size_t l1 = 1; l1 + m - 1 <= n; ++l1) {
        if (detail::verify_window(values, table.index(), l1)) {
          result.starts.push_back(static_cast<Position>(l1));
        }
      }
      return result;
    }
    const FilterKind kind = method == SupportMethod::Fvp ? FilterKind::Sbndm2 : FilterKind::Bndm;
    for (Position l1 : filter_candidates(encoded_, encode_pattern(p), kind)) {
      if (detail::verify_window(values, table.index(), static_cast<std::size_t>(l1))) {
        result.starts.push_back(l1);
      }
    }
    return result;
  }

  std::size_t support(const Pattern& p, SupportMethod method = SupportMethod::Fvp) const {
    return occurrences(p, method).support();
  }

 private:
  const TimeSeries* series_;
  BitString encoded_;
};

/// Filtration + verification. A pattern longer than the series has no occurrences.
inline OccurrenceList fvp_support(const TimeSeries& s, const Pattern& p) {
  return SupportCounter(s).occurrences(p, SupportMethod::Fvp);
}

/// Reference support: relative order of every tie-free window compared with p.
inline OccurrenceList naive_support(const TimeSeries& s, const Pattern& p) {
  OccurrenceList result;
  result.pattern_length = p.size();
  const auto values = s.values();
  const std::size_t m = p.size();
  if (m > values.size()) return result;
  std::vector<Rank> ranks;
  for (std::size_t start = 0; start + m <= values.size(); ++start) {
    if (!detail::ranks_of(values.subspan(start, m), ranks)) continue;
    if (std::equal(ranks.begin(), ranks.end(), p.begin())) {
      result.starts.push_back(static_cast<Position>(start + 1));
    }
  }
  return result;
}

}  // namespace oppminer
