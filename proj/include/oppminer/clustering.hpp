#pragma once

// Maximal-pattern features, k-means and clustering agreement metrics.

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "oppminer/core.hpp"
#include "oppminer/dataset.hpp"
#include "oppminer/matcher.hpp"
#include "oppminer/miner.hpp"
#include "oppminer/parallel.hpp"

namespace oppminer {

/// Support of every vocabulary pattern in every series.
struct FeatureMatrix {
  std::vector<Pattern> vocabulary;
  std::vector<std::vector<std::size_t>> rows;
  std::vector<std::string> labels;  // copied from the dataset, may be empty

  std::size_t dimension() const noexcept { return vocabulary.size(); }
  std::size_t size() const noexcept { return rows.size(); }

  std::vector<std::vector<double>> as_points() const {
    std::vector<std::vector<double>> points;
    points.reserve(rows.size());
    for (const auto& row : rows) points.emplace_back(row.begin(), row.end());
    return points;
  }
};

/// Maximal patterns mined per series, pooled into one sorted vocabulary,
/// then re-counted in every series.
inline FeatureMatrix featurize(const Dataset& ds, std::size_t minsup, unsigned threads = 1) {
  std::vector<SupportMap> maximal(ds.size());
  parallel_for(ds.size(), threads, [&](std::size_t i) {
    maximal[i] = mine_maximal(ds.series[i], minsup).maximal;
  });
  std::set<Pattern> vocabulary;
  for (const auto& per_series : maximal) {
    for (const auto& [p, support] : per_series) vocabulary.insert(p);
  }

  FeatureMatrix fm;
  fm.vocabulary.assign(vocabulary.begin(), vocabulary.end());
  fm.labels = ds.labels;
  fm.rows.assign(ds.size(), std::vector<std::size_t>(fm.vocabulary.size(), 0));
  parallel_for(ds.size(), threads, [&](std::size_t i) {
    const SupportCounter counter(ds.series[i]);
    for (std::size_t j = 0; j < fm.vocabulary.size(); ++j) fm.rows[i][j] = counter.support(fm.vocabulary[j]);
  });
  return fm;
}

/// Header of dash-rendered patterns, one row per series, label column last when present.
inline void write_feature_csv(std::ostream& out, const FeatureMatrix& fm) {
  bool first = true;
  for (const Pattern& p : fm.vocabulary) {
    out << (first ? "" : ",") << to_string(p);
    first = false;
  }
  if (!fm.labels.empty()) out << (first ? "" : ",") << "label";
  out << '\n';
  for (std::size_t i = 0; i < fm.rows.size(); ++i) {
    first = true;
    for (std::size_t v : fm.rows[i]) {
      out << (first ? "" : ",") << v;
      first = false;
    }
    if (!fm.labels.empty()) out << (first ? "" : ",") << fm.labels[i];
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// k-means

struct KMeansResult {
  std::vector<std::size_t> labels;  // 0-based cluster ids
  std::vector<std::vector<double>> centroids;
  double inertia = 0.0;  // total within-cluster squared distance
  std::size_t iterations = 0;
  std::vector<double> inertia_history;  // after each assignment step
};

namespace detail {

inline double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    d += diff * diff;
  }
  return d;
}

}  // namespace detail

/// Lloyd iterations from k distinct seeded rows; empty clusters restart at
/// the point farthest from its centroid.
inline KMeansResult kmeans(const std::vector<std::vector<double>>& points, std::size_t k, std::uint64_t seed,
                           std::size_t max_iter = 300) {
  const std::size_t n = points.size();
  if (n == 0) throw Error(ErrorCode::BadK, "no points to cluster");
  if (k < 1 || k > n) {
    throw Error(ErrorCode::BadK, "k must lie in [1, " + std::to_string(n) + "], got " + std::to_string(k));
  }
  const std::size_t dim = points.front().size();
  for (const auto& p : points) {
    if (p.size() != dim) throw Error(ErrorCode::UnequalLengths, "points differ in dimension");
  }
  if (max_iter < 1) max_iter = 1;

  // Partial Fisher-Yates with plain modulo keeps the draw identical across
  // standard library implementations.
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng() % (n - i));
    std::swap(order[i], order[j]);
  }

  KMeansResult result;
  result.centroids.reserve(k);
  for (std::size_t c = 0; c < k; ++c) result.centroids.push_back(points[order[c]]);
  result.labels.assign(n, 0);

  bool first = true;
  for (std::size_t iter = 0; iter < max_iter; ++iter) {
    bool changed = false;
    double inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k; ++c) {
        const double d = detail::squared_distance(points[i], result.centroids[c]);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (first || best != result.labels[i]) changed = true;
      result.labels[i] = best;
      inertia += best_d;
    }
    first = false;
    result.inertia = inertia;
    result.inertia_history.push_back(inertia);
    result.iterations = iter + 1;
    if (!changed) break;

    std::vector<std::vector<double>> sums(k, std::vector<double>(dim, 0.0));
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      auto& sum = sums[result.labels[i]];
      for (std::size_t d = 0; d < dim; ++d) sum[d] += points[i][d];
      ++counts[result.labels[i]];
    }
    std::vector<bool> taken(n, false);
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        for (std::size_t d = 0; d < dim; ++d) result.centroids[c][d] = sums[c][d] / static_cast<double>(counts[c]);
        continue;
      }
      std::size_t far = 0;
      double far_d = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (taken[i]) continue;
        const double d = detail::squared_distance(points[i], result.centroids[result.labels[i]]);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      taken[far] = true;
      result.centroids[c] = points[far];
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Agreement metrics

/// Joint counts of two labelings over the same items.
class ContingencyTable {
 public:
  template <typename A, typename B>
  ContingencyTable(const std::vector<A>& x, const std::vector<B>& y) {
    if (x.size() != y.size()) {
      throw Error(ErrorCode::LengthMismatch, "labelings differ in length: " + std::to_string(x.size()) +
                                                 " vs " + std::to_string(y.size()));
    }
    if (x.empty()) throw Error(ErrorCode::EmptyInput, "labelings are empty");
    std::map<A, std::size_t> xi;
    std::map<B, std::size_t> yi;
    for (const auto& a : x) xi.emplace(a, xi.size());
    for (const auto& b : y) yi.emplace(b, yi.size());
    counts_.assign(xi.size(), std::vector<std::size_t>(yi.size(), 0));
    for (std::size_t t = 0; t < x.size(); ++t) ++counts_[xi.at(x[t])][yi.at(y[t])];
    total_ = x.size();
  }

  std::size_t rows() const noexcept { return counts_.size(); }
  std::size_t cols() const noexcept { return counts_.empty() ? 0 : counts_.front().size(); }
  std::size_t count(std::size_t i, std::size_t j) const { return counts_.at(i).at(j); }
  std::size_t total() const noexcept { return total_; }

  double joint(std::size_t i, std::size_t j) const {
    return static_cast<double>(counts_[i][j]) / static_cast<double>(total_);
  }
  double row_marginal(std::size_t i) const {
    std::size_t s = 0;
    for (std::size_t c : counts_[i]) s += c;
    return static_cast<double>(s) / static_cast<double>(total_);
  }
  double col_marginal(std::size_t j) const {
    std::size_t s = 0;
    for (const auto& row : counts_) s += row[j];
    return static_cast<double>(s) / static_cast<double>(total_);
  }

  double row_entropy() const {
    double h = 0.0;
    for (std::size_t i = 0; i < rows(); ++i) h -= xlogx(row_marginal(i));
    return h;
  }
  double col_entropy() const {
    double h = 0.0;
    for (std::size_t j = 0; j < cols(); ++j) h -= xlogx(col_marginal(j));
    return h;
  }
  double mutual_information() const {
    double mi = 0.0;
    for (std::size_t i = 0; i < rows(); ++i) {
      const double pi = row_marginal(i);
      for (std::size_t j = 0; j < cols(); ++j) {
        const double pij = joint(i, j);
        if (pij > 0.0) mi += pij * std::log(pij / (pi * col_marginal(j)));
      }
    }
    return mi;
  }
  /// H(row | col) = -sum P(i,j) log P(i|j).
  double row_given_col_entropy() const {
    double h = 0.0;
    for (std::size_t j = 0; j < cols(); ++j) {
      const double pj = col_marginal(j);
      for (std::size_t i = 0; i < rows(); ++i) {
        const double pij = joint(i, j);
        if (pij > 0.0) h -= pij * std::log(pij / pj);
      }
    }
    return h;
  }

 private:
  static double xlogx(double p) { return p > 0.0 ? p * std::log(p) : 0.0; }

  std::vector<std::vector<std::size_t>> counts_;
  std::size_t total_ = 0;
};

/// Mutual information over the geometric mean of both entropies; 0 when
/// either labeling is a single cluster.
template <typename A, typename B>
double nmi(const std::vector<A>& predicted, const std::vector<B>& truth) {
  const ContingencyTable table(truth, predicted);
  const double hx = table.row_entropy();
  const double hy = table.col_entropy();
  if (hx <= 0.0 || hy <= 0.0) return 0.0;
  return std::clamp(table.mutual_information() / std::sqrt(hx * hy), 0.0, 1.0);
}

/// 1 - H(truth | predicted) / H(truth); 1 when the truth has a single class.
template <typename A, typename B>
double homogeneity(const std::vector<A>& predicted, const std::vector<B>& truth) {
  const ContingencyTable table(truth, predicted);
  const double h_truth = table.row_entropy();
  if (h_truth <= 0.0) return 1.0;
  return std::clamp(1.0 - table.row_given_col_entropy() / h_truth, 0.0, 1.0);
}

/// Raw series as points; all series must share one length.
inline std::vector<std::vector<double>> raw_points(const Dataset& ds) {
  std::vector<std::vector<double>> points;
  points.reserve(ds.size());
  for (const auto& s : ds.series) {
    if (!points.empty() && s.size() != points.front().size()) {
      throw Error(ErrorCode::UnequalLengths, "series lengths differ; raw clustering needs equal lengths");
    }
    points.emplace_back(s.values().begin(), s.values().end());
  }
  return points;
}

}  // namespace oppminer
