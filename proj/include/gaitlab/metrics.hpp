#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "gaitlab/error.hpp"
#include "gaitlab/model.hpp"

namespace gaitlab {

namespace detail {

struct ClassIndex {
  std::vector<int> of;                // template index -> class index
  std::vector<std::string> classes;   // first-appearance order
  std::vector<Eigen::Index> counts;   // per class
};

inline ClassIndex build_class_index(const std::vector<std::string>& labels) {
  ClassIndex ci;
  ci.of = class_index_of(labels, ci.classes);
  ci.counts.assign(ci.classes.size(), 0);
  for (int c : ci.of) ++ci.counts[static_cast<std::size_t>(c)];
  return ci;
}

inline Eigen::MatrixXd class_centroids(const Eigen::MatrixXd& T, const ClassIndex& ci) {
  Eigen::MatrixXd mu = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(ci.classes.size()),
                                             T.cols());
  for (Eigen::Index n = 0; n < T.rows(); ++n)
    mu.row(ci.of[static_cast<std::size_t>(n)]) += T.row(n);
  for (Eigen::Index c = 0; c < mu.rows(); ++c)
    mu.row(c) /= static_cast<double>(ci.counts[static_cast<std::size_t>(c)]);
  return mu;
}

}  // namespace detail

/// DBI = (1/C) sum_c max_{c'!=c} (sigma_c + sigma_c') / delta(mu_c, mu_c'),
/// sigma_c = mean distance of class members to their centroid (arithmetic
/// mean of the feature vectors). Lower is better.
inline double davies_bouldin(const Eigen::MatrixXd& T, const std::vector<std::string>& labels,
                             const DistanceFn& distance) {
  const auto ci = detail::build_class_index(labels);
  const Eigen::Index C = static_cast<Eigen::Index>(ci.classes.size());
  require(C >= 2, Errc::insufficient_classes, "DBI needs at least 2 classes");
  const Eigen::MatrixXd mu = detail::class_centroids(T, ci);

  std::vector<double> sigma(static_cast<std::size_t>(C), 0.0);
  for (Eigen::Index n = 0; n < T.rows(); ++n) {
    const int c = ci.of[static_cast<std::size_t>(n)];
    sigma[static_cast<std::size_t>(c)] +=
        distance(T.row(n).transpose(), mu.row(c).transpose());
  }
  for (Eigen::Index c = 0; c < C; ++c)
    sigma[static_cast<std::size_t>(c)] /= static_cast<double>(ci.counts[static_cast<std::size_t>(c)]);

  double total = 0.0;
  for (Eigen::Index c = 0; c < C; ++c) {
    double worst = 0.0;
    for (Eigen::Index o = 0; o < C; ++o) {
      if (o == c) continue;
      const double delta = distance(mu.row(c).transpose(), mu.row(o).transpose());
      require(delta > 0.0, Errc::divide_by_zero,
              "coincident centroids of classes '" + ci.classes[static_cast<std::size_t>(c)] +
                  "' and '" + ci.classes[static_cast<std::size_t>(o)] + "'");
      worst = std::max(worst, (sigma[static_cast<std::size_t>(c)] +
                               sigma[static_cast<std::size_t>(o)]) /
                                  delta);
    }
    total += worst;
  }
  return total / static_cast<double>(C);
}

/// Mean silhouette s = (b-a)/max(a,b): a = mean distance to the other members
/// of the own class, b = smallest mean distance to another class. Members of
/// singleton classes score 0, as does the a=b=0 tie.
inline double silhouette(const Eigen::MatrixXd& T, const std::vector<std::string>& labels,
                         const DistanceFn& distance) {
  const auto ci = detail::build_class_index(labels);
  const Eigen::Index C = static_cast<Eigen::Index>(ci.classes.size());
  require(C >= 2, Errc::insufficient_classes, "silhouette needs at least 2 classes");
  const Eigen::Index N = T.rows();

  double total = 0.0;
  std::vector<double> class_sum(static_cast<std::size_t>(C));
  for (Eigen::Index n = 0; n < N; ++n) {
    std::fill(class_sum.begin(), class_sum.end(), 0.0);
    for (Eigen::Index o = 0; o < N; ++o) {
      if (o == n) continue;
      class_sum[static_cast<std::size_t>(ci.of[static_cast<std::size_t>(o)])] +=
          distance(T.row(n).transpose(), T.row(o).transpose());
    }
    const int own = ci.of[static_cast<std::size_t>(n)];
    const Eigen::Index own_count = ci.counts[static_cast<std::size_t>(own)];
    if (own_count <= 1) continue;  // singleton contributes s = 0
    const double a = class_sum[static_cast<std::size_t>(own)] /
                     static_cast<double>(own_count - 1);
    double b = std::numeric_limits<double>::infinity();
    for (Eigen::Index c = 0; c < C; ++c) {
      if (c == own) continue;
      b = std::min(b, class_sum[static_cast<std::size_t>(c)] /
                          static_cast<double>(ci.counts[static_cast<std::size_t>(c)]));
    }
    const double denom = std::max(a, b);
    if (denom > 0.0) total += (b - a) / denom;  // a=b=0 ties contribute 0
  }
  return total / static_cast<double>(N);
}

namespace detail {

// Same-identity pairs are positives scored by -distance; collects the two
// distance populations for rank statistics.
inline void pairwise_distances(const Eigen::MatrixXd& T, const std::vector<std::string>& labels,
                               const DistanceFn& distance, std::vector<double>& pos,
                               std::vector<double>& neg) {
  const Eigen::Index N = T.rows();
  pos.clear();
  neg.clear();
  for (Eigen::Index i = 0; i < N; ++i)
    for (Eigen::Index j = i + 1; j < N; ++j) {
      const double d = distance(T.row(i).transpose(), T.row(j).transpose());
      if (labels[static_cast<std::size_t>(i)] == labels[static_cast<std::size_t>(j)])
        pos.push_back(d);
      else
        neg.push_back(d);
    }
}

}  // namespace detail

/// Mann-Whitney AUC of two distance populations: a positive is ordered
/// correctly when its distance is smaller; ties count one half.
inline double mann_whitney_auc(std::vector<double> pos, std::vector<double> neg) {
  require(!pos.empty() && !neg.empty(), Errc::undefined_metric,
          "AUC needs at least one positive and one negative");
  std::sort(pos.begin(), pos.end());
  std::sort(neg.begin(), neg.end());
  double correct = 0.0;
  for (double p : pos) {
    const auto lo = std::lower_bound(neg.begin(), neg.end(), p);
    const auto hi = std::upper_bound(lo, neg.end(), p);
    correct += static_cast<double>(neg.end() - hi);
    correct += 0.5 * static_cast<double>(hi - lo);
  }
  return correct / (static_cast<double>(pos.size()) * static_cast<double>(neg.size()));
}

/// Pairwise-verification ROC-AUC over all unordered template pairs;
/// positives are same-identity pairs scored by -distance.
inline double roc_auc(const Eigen::MatrixXd& T, const std::vector<std::string>& labels,
                      const DistanceFn& distance) {
  std::vector<double> pos, neg;
  detail::pairwise_distances(T, labels, distance, pos, neg);
  require(!pos.empty() && !neg.empty(), Errc::undefined_metric,
          "ROC-AUC needs at least one same-identity and one cross-identity pair");
  return mann_whitney_auc(std::move(pos), std::move(neg));
}

struct PrSummary {
  double average_precision = 0.0;
  double prevalence = 0.0;        // positives / all pairs
  std::uint64_t tied_pairs = 0;   // pairs sharing a distance with another pair
};

/// Average precision of a (distance, is_positive) list swept by ascending
/// distance, AP = sum_k (R_k - R_{k-1}) P_k at every positive hit. Ties are
/// broken by the stable input order and counted in the summary.
inline PrSummary average_precision(std::vector<std::pair<double, bool>> ranked) {
  std::uint64_t positives = 0;
  for (const auto& [d, is_pos] : ranked) positives += is_pos ? 1 : 0;
  require(positives > 0 && positives < ranked.size(), Errc::undefined_metric,
          "average precision needs at least one positive and one negative");
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });

  PrSummary out;
  out.prevalence = static_cast<double>(positives) / static_cast<double>(ranked.size());
  std::uint64_t hits = 0;
  double ap = 0.0;
  for (std::size_t k = 0; k < ranked.size(); ++k) {
    if (ranked[k].second) {
      ++hits;
      ap += static_cast<double>(hits) / static_cast<double>(k + 1);
    }
    const bool tie_prev = k > 0 && ranked[k - 1].first == ranked[k].first;
    const bool tie_next = k + 1 < ranked.size() && ranked[k + 1].first == ranked[k].first;
    if (tie_prev || tie_next) ++out.tied_pairs;
  }
  out.average_precision = ap / static_cast<double>(positives);
  return out;
}

/// PR-AUC over all unordered template pairs (positives = same identity),
/// stable pair enumeration order (i<j, lexicographic) breaks distance ties.
inline PrSummary pr_auc_detail(const Eigen::MatrixXd& T, const std::vector<std::string>& labels,
                               const DistanceFn& distance) {
  const Eigen::Index N = T.rows();
  std::vector<std::pair<double, bool>> ranked;
  ranked.reserve(static_cast<std::size_t>(N) * static_cast<std::size_t>(N - 1) / 2);
  for (Eigen::Index i = 0; i < N; ++i)
    for (Eigen::Index j = i + 1; j < N; ++j)
      ranked.emplace_back(distance(T.row(i).transpose(), T.row(j).transpose()),
                          labels[static_cast<std::size_t>(i)] ==
                              labels[static_cast<std::size_t>(j)]);
  return average_precision(std::move(ranked));
}

inline double pr_auc(const Eigen::MatrixXd& T, const std::vector<std::string>& labels,
                     const DistanceFn& distance) {
  return pr_auc_detail(T, labels, distance).average_precision;
}

/// Pair counts against ground truth; TP+TN+FP+FN = N(N-1)/2.
struct PairConfusion {
  std::uint64_t tp = 0, tn = 0, fp = 0, fn = 0;

  std::uint64_t total() const { return tp + tn + fp + fn; }
};

struct ClusterScores {
  double purity = 0.0;
  double rand_index = 0.0;
  double f_measure = 0.0;
  double jaccard = 0.0;
  double fowlkes_mallows = 0.0;
  PairConfusion pairs;
};

/// Purity, Rand Index, pairwise F-measure, Jaccard and Fowlkes-Mallows of a
/// clustering against identity labels.
inline ClusterScores clustering_scores(const std::vector<int>& assignment,
                                       const std::vector<std::string>& labels) {
  require(assignment.size() == labels.size() && !assignment.empty(), Errc::shape,
          "assignment must cover all labeled templates");
  const std::size_t N = assignment.size();

  ClusterScores out;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = i + 1; j < N; ++j) {
      const bool same_class = labels[i] == labels[j];
      const bool same_cluster = assignment[i] == assignment[j];
      if (same_class && same_cluster) ++out.pairs.tp;
      else if (!same_class && same_cluster) ++out.pairs.fp;
      else if (same_class && !same_cluster) ++out.pairs.fn;
      else ++out.pairs.tn;
    }

  // Purity: dominant-class overlap per cluster.
  std::map<int, std::map<std::string, std::size_t>> contingency;
  for (std::size_t i = 0; i < N; ++i) ++contingency[assignment[i]][labels[i]];
  std::uint64_t dominant = 0;
  for (const auto& [cluster, per_class] : contingency) {
    std::size_t best = 0;
    for (const auto& [cls, count] : per_class) best = std::max(best, count);
    dominant += best;
  }
  out.purity = static_cast<double>(dominant) / static_cast<double>(N);

  const auto& pc = out.pairs;
  out.rand_index = static_cast<double>(pc.tp + pc.tn) / static_cast<double>(pc.total());
  require(pc.tp + pc.fp > 0, Errc::undefined_metric, "no positive pairs predicted (TP+FP=0)");
  require(pc.tp + pc.fn > 0, Errc::undefined_metric, "no positive pairs in ground truth (TP+FN=0)");
  const double p = static_cast<double>(pc.tp) / static_cast<double>(pc.tp + pc.fp);
  const double r = static_cast<double>(pc.tp) / static_cast<double>(pc.tp + pc.fn);
  out.f_measure = (p + r) > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
  out.jaccard = static_cast<double>(pc.tp) / static_cast<double>(pc.tp + pc.fp + pc.fn);
  out.fowlkes_mallows = std::sqrt(p * r);
  return out;
}

}  // namespace gaitlab
