#pragma once

// Test-only oracles: deliberately naive, independent implementations used to
// cross-check the library. Nothing here may call the code paths under test.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "gaitlab/rng.hpp"

namespace oracle {

using Eigen::MatrixXd;
using Eigen::VectorXd;

using DistFn = std::function<double(const VectorXd&, const VectorXd&)>;

inline DistFn euclidean() {
  return [](const VectorXd& a, const VectorXd& b) { return (a - b).norm(); };
}

// ---------- label bookkeeping ----------

struct Classes {
  std::vector<std::string> names;
  std::vector<std::vector<int>> members;  // row indices per class
};

inline Classes group_by_label(const std::vector<std::string>& labels) {
  Classes c;
  for (int i = 0; i < static_cast<int>(labels.size()); ++i) {
    auto it = std::find(c.names.begin(), c.names.end(), labels[static_cast<std::size_t>(i)]);
    std::size_t k;
    if (it == c.names.end()) {
      c.names.push_back(labels[static_cast<std::size_t>(i)]);
      c.members.emplace_back();
      k = c.names.size() - 1;
    } else {
      k = static_cast<std::size_t>(it - c.names.begin());
    }
    c.members[k].push_back(i);
  }
  return c;
}

// ---------- clustering validity ----------

inline double dbi(const MatrixXd& T, const std::vector<std::string>& labels, const DistFn& d) {
  const Classes cls = group_by_label(labels);
  const std::size_t C = cls.names.size();
  std::vector<VectorXd> mu(C);
  std::vector<double> sigma(C, 0.0);
  for (std::size_t c = 0; c < C; ++c) {
    mu[c] = VectorXd::Zero(T.cols());
    for (int i : cls.members[c]) mu[c] += T.row(i).transpose();
    mu[c] /= static_cast<double>(cls.members[c].size());
    for (int i : cls.members[c]) sigma[c] += d(T.row(i).transpose(), mu[c]);
    sigma[c] /= static_cast<double>(cls.members[c].size());
  }
  double sum = 0.0;
  for (std::size_t c = 0; c < C; ++c) {
    double worst = 0.0;
    for (std::size_t o = 0; o < C; ++o)
      if (o != c) worst = std::max(worst, (sigma[c] + sigma[o]) / d(mu[c], mu[o]));
    sum += worst;
  }
  return sum / static_cast<double>(C);
}

inline double silhouette(const MatrixXd& T, const std::vector<std::string>& labels,
                         const DistFn& d) {
  const Classes cls = group_by_label(labels);
  const int N = static_cast<int>(T.rows());
  double total = 0.0;
  for (int n = 0; n < N; ++n) {
    std::size_t own = 0;
    for (std::size_t c = 0; c < cls.names.size(); ++c)
      if (cls.names[c] == labels[static_cast<std::size_t>(n)]) own = c;
    if (cls.members[own].size() <= 1) continue;  // singleton: s = 0
    double a = 0.0;
    for (int i : cls.members[own])
      if (i != n) a += d(T.row(n).transpose(), T.row(i).transpose());
    a /= static_cast<double>(cls.members[own].size() - 1);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < cls.names.size(); ++c) {
      if (c == own) continue;
      double m = 0.0;
      for (int i : cls.members[c]) m += d(T.row(n).transpose(), T.row(i).transpose());
      b = std::min(b, m / static_cast<double>(cls.members[c].size()));
    }
    if (std::max(a, b) > 0.0) total += (b - a) / std::max(a, b);
  }
  return total / static_cast<double>(N);
}

// ---------- pairwise verification ----------

inline void pair_distances(const MatrixXd& T, const std::vector<std::string>& labels,
                           const DistFn& d, std::vector<double>& pos, std::vector<double>& neg) {
  for (int i = 0; i < T.rows(); ++i)
    for (int j = i + 1; j < T.rows(); ++j) {
      const double v = d(T.row(i).transpose(), T.row(j).transpose());
      if (labels[static_cast<std::size_t>(i)] == labels[static_cast<std::size_t>(j)])
        pos.push_back(v);
      else
        neg.push_back(v);
    }
}

// Quadratic pair-order count: smaller distance ranks higher.
inline double roc_auc(const MatrixXd& T, const std::vector<std::string>& labels, const DistFn& d) {
  std::vector<double> pos, neg;
  pair_distances(T, labels, d, pos, neg);
  double num = 0.0;
  for (double p : pos)
    for (double q : neg) {
      if (p < q) num += 1.0;
      else if (p == q) num += 0.5;
    }
  return num / (static_cast<double>(pos.size()) * static_cast<double>(neg.size()));
}

// Average precision by explicit sweep over the stable ascending order.
inline double pr_auc(const MatrixXd& T, const std::vector<std::string>& labels, const DistFn& d) {
  struct Pair {
    double dist;
    bool positive;
    std::size_t index;
  };
  std::vector<Pair> pairs;
  std::size_t idx = 0, total_pos = 0;
  for (int i = 0; i < T.rows(); ++i)
    for (int j = i + 1; j < T.rows(); ++j) {
      const bool is_pos =
          labels[static_cast<std::size_t>(i)] == labels[static_cast<std::size_t>(j)];
      pairs.push_back({d(T.row(i).transpose(), T.row(j).transpose()), is_pos, idx++});
      total_pos += is_pos ? 1 : 0;
    }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    if (a.dist != b.dist) return a.dist < b.dist;
    return a.index < b.index;
  });
  double ap = 0.0, prev_recall = 0.0;
  std::size_t hits = 0;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    if (!pairs[k].positive) continue;
    ++hits;
    const double precision = static_cast<double>(hits) / static_cast<double>(k + 1);
    const double recall = static_cast<double>(hits) / static_cast<double>(total_pos);
    ap += (recall - prev_recall) * precision;
    prev_recall = recall;
  }
  return ap;
}

// ---------- clustering agreement ----------

struct PairCounts {
  std::uint64_t tp = 0, tn = 0, fp = 0, fn = 0;
};

inline PairCounts count_pairs(const std::vector<int>& assignment,
                              const std::vector<std::string>& labels) {
  PairCounts pc;
  for (std::size_t i = 0; i < labels.size(); ++i)
    for (std::size_t j = i + 1; j < labels.size(); ++j) {
      const bool sc = labels[i] == labels[j];
      const bool sk = assignment[i] == assignment[j];
      if (sc && sk) ++pc.tp;
      if (!sc && sk) ++pc.fp;
      if (sc && !sk) ++pc.fn;
      if (!sc && !sk) ++pc.tn;
    }
  return pc;
}

inline double purity(const std::vector<int>& assignment, const std::vector<std::string>& labels) {
  std::map<int, std::map<std::string, int>> tab;
  for (std::size_t i = 0; i < labels.size(); ++i) ++tab[assignment[i]][labels[i]];
  double s = 0.0;
  for (auto& [k, row] : tab) {
    int best = 0;
    for (auto& [c, n] : row) best = std::max(best, n);
    s += best;
  }
  return s / static_cast<double>(labels.size());
}

inline double rand_index(const PairCounts& pc) {
  return static_cast<double>(pc.tp + pc.tn) / static_cast<double>(pc.tp + pc.tn + pc.fp + pc.fn);
}
inline double f_measure(const PairCounts& pc) {
  const double p = static_cast<double>(pc.tp) / static_cast<double>(pc.tp + pc.fp);
  const double r = static_cast<double>(pc.tp) / static_cast<double>(pc.tp + pc.fn);
  return 2.0 * p * r / (p + r);
}
inline double jaccard(const PairCounts& pc) {
  return static_cast<double>(pc.tp) / static_cast<double>(pc.tp + pc.fp + pc.fn);
}
inline double fowlkes_mallows(const PairCounts& pc) {
  const double p = static_cast<double>(pc.tp) / static_cast<double>(pc.tp + pc.fp);
  const double r = static_cast<double>(pc.tp) / static_cast<double>(pc.tp + pc.fn);
  return std::sqrt(p * r);
}

// ---------- dense symmetric eigensolver (cyclic Jacobi) ----------

struct EigenPairs {
  VectorXd values;   // descending
  MatrixXd vectors;  // columns match values
};

inline EigenPairs jacobi_eigen(MatrixXd A, int sweeps = 100) {
  const int n = static_cast<int>(A.rows());
  MatrixXd V = MatrixXd::Identity(n, n);
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += A(p, q) * A(p, q);
    if (std::sqrt(off) < 1e-14 * std::max(1.0, A.norm())) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        if (A(p, q) == 0.0) continue;
        const double theta = (A(q, q) - A(p, p)) / (2.0 * A(p, q));
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = A(k, p), akq = A(k, q);
          A(k, p) = c * akp - s * akq;
          A(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = A(p, k), aqk = A(q, k);
          A(p, k) = c * apk - s * aqk;
          A(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = V(k, p), vkq = V(k, q);
          V(k, p) = c * vkp - s * vkq;
          V(k, q) = s * vkp + c * vkq;
        }
      }
  }
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return A(a, a) > A(b, b); });
  EigenPairs out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (int i = 0; i < n; ++i) {
    out.values(i) = A(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(i)]);
    out.vectors.col(i) = V.col(order[static_cast<std::size_t>(i)]);
  }
  return out;
}

// Generalized symmetric-definite problem A v = lambda B v via the Cholesky
// reduction B = L L^T and a Jacobi solve of L^-1 A L^-T.
inline EigenPairs generalized_eigen(const MatrixXd& A, const MatrixXd& B) {
  const Eigen::LLT<MatrixXd> llt(B);
  const MatrixXd L = llt.matrixL();
  const MatrixXd Linv = L.inverse();
  EigenPairs red = jacobi_eigen(Linv * A * Linv.transpose());
  red.vectors = (Linv.transpose() * red.vectors).eval();
  return red;
}

// ---------- misc ----------

// Piecewise-linear interpolation of a sampled signal onto m points.
inline std::vector<double> interp_linear(const std::vector<double>& y, int m) {
  const int n = static_cast<int>(y.size());
  std::vector<double> out(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    const double t = static_cast<double>(k) * static_cast<double>(n - 1) /
                     static_cast<double>(m - 1);
    int i = std::min(static_cast<int>(t), n - 2);
    const double w = t - i;
    out[static_cast<std::size_t>(k)] =
        (1.0 - w) * y[static_cast<std::size_t>(i)] + w * y[static_cast<std::size_t>(i + 1)];
  }
  return out;
}

// Random orthogonal matrix via QR of a Gaussian matrix, sign-fixed.
inline MatrixXd random_orthogonal(int n, gaitlab::Rng& rng) {
  MatrixXd G(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) G(i, j) = rng.normal();
  const Eigen::HouseholderQR<MatrixXd> qr(G);
  MatrixXd Q = qr.householderQ();
  const MatrixXd R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i)
    if (R(i, i) < 0.0) Q.col(i) = -Q.col(i);
  return Q;
}

}  // namespace oracle
