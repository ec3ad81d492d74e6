#pragma once

#include <Eigen/Dense>
#include <limits>
#include <vector>

#include "gaitlab/error.hpp"
#include "gaitlab/rng.hpp"

namespace gaitlab {

struct ClusteringResult {
  std::vector<int> assignment;  // template index -> cluster id in 0..K-1
  int k = 0;
  double sse = 0.0;
  int iterations = 0;
};

namespace detail {

inline Eigen::Index weighted_pick(const Eigen::VectorXd& weights, Rng& rng) {
  const double total = weights.sum();
  if (total <= 0.0) return static_cast<Eigen::Index>(rng.index(static_cast<std::size_t>(weights.size())));
  double r = rng.uniform() * total;
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    r -= weights(i);
    if (r <= 0.0) return i;
  }
  return weights.size() - 1;
}

inline ClusteringResult kmeans_once(const Eigen::MatrixXd& X, int K, Rng& rng, int max_iter) {
  const Eigen::Index N = X.rows();

  // k-means++ seeding
  Eigen::MatrixXd centroids(K, X.cols());
  centroids.row(0) = X.row(static_cast<Eigen::Index>(rng.index(static_cast<std::size_t>(N))));
  Eigen::VectorXd d2 = (X.rowwise() - centroids.row(0)).rowwise().squaredNorm();
  for (int k = 1; k < K; ++k) {
    centroids.row(k) = X.row(weighted_pick(d2, rng));
    d2 = d2.cwiseMin((X.rowwise() - centroids.row(k)).rowwise().squaredNorm());
  }

  ClusteringResult res;
  res.k = K;
  res.assignment.assign(static_cast<std::size_t>(N), 0);
  std::vector<int> prev(static_cast<std::size_t>(N), -1);

  for (int it = 0; it < max_iter; ++it) {
    res.iterations = it + 1;
    // assignment step; ties go to the lowest cluster id
    for (Eigen::Index n = 0; n < N; ++n) {
      double best = std::numeric_limits<double>::infinity();
      int best_k = 0;
      for (int k = 0; k < K; ++k) {
        const double d = (X.row(n) - centroids.row(k)).squaredNorm();
        if (d < best) {
          best = d;
          best_k = k;
        }
      }
      res.assignment[static_cast<std::size_t>(n)] = best_k;
    }

    // empty clusters grab the point farthest from its centroid
    std::vector<Eigen::Index> counts(static_cast<std::size_t>(K), 0);
    for (int a : res.assignment) ++counts[static_cast<std::size_t>(a)];
    for (int k = 0; k < K; ++k) {
      if (counts[static_cast<std::size_t>(k)] > 0) continue;
      double far = -1.0;
      Eigen::Index pick = 0;
      for (Eigen::Index n = 0; n < N; ++n) {
        const int a = res.assignment[static_cast<std::size_t>(n)];
        if (counts[static_cast<std::size_t>(a)] <= 1) continue;  // keep donors non-empty
        const double d = (X.row(n) - centroids.row(a)).squaredNorm();
        if (d > far) {
          far = d;
          pick = n;
        }
      }
      if (far < 0.0) continue;  // only singletons left, nothing to donate
      --counts[static_cast<std::size_t>(res.assignment[static_cast<std::size_t>(pick)])];
      res.assignment[static_cast<std::size_t>(pick)] = k;
      ++counts[static_cast<std::size_t>(k)];
      centroids.row(k) = X.row(pick);
    }

    if (res.assignment == prev) break;
    prev = res.assignment;

    // update step
    centroids.setZero();
    for (Eigen::Index n = 0; n < N; ++n)
      centroids.row(res.assignment[static_cast<std::size_t>(n)]) += X.row(n);
    for (int k = 0; k < K; ++k)
      centroids.row(k) /= static_cast<double>(counts[static_cast<std::size_t>(k)]);
  }

  res.sse = 0.0;
  for (Eigen::Index n = 0; n < N; ++n)
    res.sse += (X.row(n) - centroids.row(res.assignment[static_cast<std::size_t>(n)])).squaredNorm();
  return res;
}

}  // namespace detail

/// Seeded k-means++ followed by Lloyd iterations on Euclidean distance.
/// Deterministic for a fixed seed; stops at an assignment fixpoint or
/// max_iter. With restarts > 1 the best-SSE run wins (restart r uses the
/// stream seed mix_seed(seed, r)).
inline ClusteringResult kmeans(const Eigen::MatrixXd& X, int K, std::uint64_t seed,
                               int max_iter = 100, int restarts = 1) {
  require(K >= 1 && static_cast<Eigen::Index>(K) <= X.rows(), Errc::parameter,
          "K must be in 1..N");
  require(max_iter >= 1 && restarts >= 1, Errc::parameter, "max_iter and restarts must be >= 1");
  ClusteringResult best;
  for (int r = 0; r < restarts; ++r) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(r)));
    ClusteringResult run = detail::kmeans_once(X, K, rng, max_iter);
    if (r == 0 || run.sse < best.sse) best = std::move(run);
  }
  return best;
}

}  // namespace gaitlab
