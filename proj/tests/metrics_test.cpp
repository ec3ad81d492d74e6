#include <gtest/gtest.h>

#include <cmath>

#include "gaitlab/kmeans.hpp"
#include "gaitlab/metrics.hpp"
#include "support/oracles.hpp"

using namespace gaitlab;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

DistanceFn euclid() {
  return [](const VectorXd& a, const VectorXd& b) { return (a - b).norm(); };
}

// classes {(0,0),(0,2)} and {(10,0),(10,2)}
MatrixXd rectangle_fixture(std::vector<std::string>& labels) {
  MatrixXd T(4, 2);
  T << 0, 0, 0, 2, 10, 0, 10, 2;
  labels = {"a", "a", "b", "b"};
  return T;
}

struct RandomInstance {
  MatrixXd T;
  std::vector<std::string> labels;
};

RandomInstance random_instance(Rng& rng, int max_n = 30, int max_c = 4) {
  const int C = 2 + static_cast<int>(rng.index(static_cast<std::size_t>(max_c - 1)));
  const int per = 2 + static_cast<int>(rng.index(static_cast<std::size_t>(max_n / C)));
  const int d = 2 + static_cast<int>(rng.index(4));
  RandomInstance inst;
  inst.T.resize(C * per, d);
  for (int c = 0; c < C; ++c) {
    VectorXd center(d);
    for (int j = 0; j < d; ++j) center(j) = 4.0 * rng.normal();
    for (int k = 0; k < per; ++k) {
      for (int j = 0; j < d; ++j) inst.T(c * per + k, j) = center(j) + rng.normal();
      inst.labels.push_back("c" + std::to_string(c));
    }
  }
  return inst;
}

}  // namespace

TEST(Dbi, ZeroIntraClassSpread) {
  MatrixXd T(2, 1);
  T << 0, 10;
  EXPECT_DOUBLE_EQ(davies_bouldin(T, {"a", "b"}, euclid()), 0.0);
}

TEST(Dbi, RectangleFixtureIsPointTwo) {
  std::vector<std::string> labels;
  const MatrixXd T = rectangle_fixture(labels);
  EXPECT_NEAR(davies_bouldin(T, labels, euclid()), 0.2, 1e-15);
}

TEST(Dbi, MatchesBruteForceOracle) {
  Rng rng(71);
  for (int trial = 0; trial < 10; ++trial) {
    const RandomInstance inst = random_instance(rng);
    EXPECT_NEAR(davies_bouldin(inst.T, inst.labels, euclid()),
                oracle::dbi(inst.T, inst.labels, oracle::euclidean()), 1e-10);
  }
}

TEST(Dbi, CoincidentCentroidsFail) {
  MatrixXd T(4, 1);
  T << 0, 2, 0, 2;  // both class centroids at 1
  try {
    davies_bouldin(T, {"a", "a", "b", "b"}, euclid());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), Errc::divide_by_zero);
    EXPECT_NE(std::string(e.what()).find("'a'"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("'b'"), std::string::npos);
  }
}

TEST(Silhouette, SeparationLimit) {
  Rng rng(5);
  MatrixXd T(8, 2);
  std::vector<std::string> labels;
  for (int i = 0; i < 8; ++i) {
    const double base = i < 4 ? 0.0 : 100.0;
    T(i, 0) = base + 0.01 * rng.uniform();
    T(i, 1) = 0.01 * rng.uniform();
    labels.push_back(i < 4 ? "a" : "b");
  }
  EXPECT_GT(silhouette(T, labels, euclid()), 0.999);
}

TEST(Silhouette, RectangleFixtureHandValue) {
  std::vector<std::string> labels;
  const MatrixXd T = rectangle_fixture(labels);
  // per point: a = 2, b = (10 + sqrt(104))/2, s = (b-a)/b
  const double b = (10.0 + std::sqrt(104.0)) / 2.0;
  const double want = (b - 2.0) / b;
  EXPECT_NEAR(silhouette(T, labels, euclid()), want, 1e-12);
  EXPECT_NEAR(want, 0.8020, 2e-4);
}

TEST(Silhouette, DegenerateTieRuleGivesZero) {
  MatrixXd T = MatrixXd::Zero(4, 2);
  EXPECT_DOUBLE_EQ(silhouette(T, {"a", "a", "b", "b"}, euclid()), 0.0);
}

TEST(Silhouette, SingletonContributesZero) {
  MatrixXd T(3, 1);
  T << 0.0, 0.5, 9.0;
  const std::vector<std::string> labels = {"a", "a", "b"};
  EXPECT_NEAR(silhouette(T, labels, euclid()),
              oracle::silhouette(T, labels, oracle::euclidean()), 1e-12);
}

TEST(Silhouette, MatchesBruteForceOracle) {
  Rng rng(72);
  for (int trial = 0; trial < 10; ++trial) {
    const RandomInstance inst = random_instance(rng);
    EXPECT_NEAR(silhouette(inst.T, inst.labels, euclid()),
                oracle::silhouette(inst.T, inst.labels, oracle::euclidean()), 1e-10);
  }
}

TEST(RocAuc, ListFixtures) {
  EXPECT_DOUBLE_EQ(mann_whitney_auc({1, 2}, {3, 4}), 1.0);
  EXPECT_DOUBLE_EQ(mann_whitney_auc({1, 1, 1}, {1, 1}), 0.5);
  EXPECT_DOUBLE_EQ(mann_whitney_auc({1, 3}, {2, 4}), 0.75);
  EXPECT_THROW(mann_whitney_auc({}, {1.0}), Error);
}

TEST(RocAuc, TemplateRouteMatchesOracle) {
  Rng rng(73);
  for (int trial = 0; trial < 10; ++trial) {
    const RandomInstance inst = random_instance(rng);
    EXPECT_NEAR(roc_auc(inst.T, inst.labels, euclid()),
                oracle::roc_auc(inst.T, inst.labels, oracle::euclidean()), 1e-10);
  }
}

TEST(RocAuc, InvariantUnderMonotoneDistanceTransform) {
  Rng rng(74);
  const RandomInstance inst = random_instance(rng);
  const DistanceFn warped = [](const VectorXd& a, const VectorXd& b) {
    return std::exp((a - b).norm()) - 0.5;
  };
  EXPECT_NEAR(roc_auc(inst.T, inst.labels, euclid()), roc_auc(inst.T, inst.labels, warped),
              1e-12);
}

TEST(PrAuc, ListFixtures) {
  // perfect separation
  EXPECT_DOUBLE_EQ(average_precision({{1, true}, {2, true}, {3, false}, {4, false}})
                       .average_precision,
                   1.0);
  // single positive ranked last among 4 pairs
  EXPECT_DOUBLE_EQ(average_precision({{1, false}, {2, false}, {3, false}, {4, true}})
                       .average_precision,
                   0.25);
  // ties are broken by the stable input order
  const PrSummary tied = average_precision({{1, true}, {1, false}});
  EXPECT_DOUBLE_EQ(tied.average_precision, 1.0);
  EXPECT_EQ(tied.tied_pairs, 2u);
  EXPECT_THROW(average_precision({{1, true}}), Error);
}

TEST(PrAuc, TemplateRouteMatchesOracle) {
  Rng rng(75);
  for (int trial = 0; trial < 10; ++trial) {
    const RandomInstance inst = random_instance(rng);
    EXPECT_NEAR(pr_auc(inst.T, inst.labels, euclid()),
                oracle::pr_auc(inst.T, inst.labels, oracle::euclidean()), 1e-10);
  }
}

TEST(PrAuc, RandomLabelsApproachPrevalence) {
  Rng rng(76);
  const int N = 90;  // 4005 pairs
  MatrixXd T(N, 3);
  std::vector<std::string> labels;
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < 3; ++j) T(i, j) = rng.normal();
    labels.push_back("c" + std::to_string(rng.index(4)));
  }
  const PrSummary pr = pr_auc_detail(T, labels, euclid());
  EXPECT_NEAR(pr.average_precision, pr.prevalence, 0.05);
}

TEST(Metrics, InvariantToReorderingAndRenaming) {
  Rng rng(77);
  const RandomInstance inst = random_instance(rng);
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(inst.T.rows()));
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<Eigen::Index>(i);
  Rng shuffler(123);
  shuffler.shuffle(perm);
  MatrixXd T2(inst.T.rows(), inst.T.cols());
  std::vector<std::string> labels2;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    T2.row(static_cast<Eigen::Index>(i)) = inst.T.row(perm[i]);
    labels2.push_back("renamed_" + inst.labels[static_cast<std::size_t>(perm[i])]);
  }
  EXPECT_NEAR(davies_bouldin(inst.T, inst.labels, euclid()),
              davies_bouldin(T2, labels2, euclid()), 1e-10);
  EXPECT_NEAR(silhouette(inst.T, inst.labels, euclid()), silhouette(T2, labels2, euclid()),
              1e-10);
  EXPECT_NEAR(roc_auc(inst.T, inst.labels, euclid()), roc_auc(T2, labels2, euclid()), 1e-10);
  EXPECT_NEAR(pr_auc(inst.T, inst.labels, euclid()), pr_auc(T2, labels2, euclid()), 1e-10);
}

TEST(Metrics, RangesHold) {
  Rng rng(78);
  for (int trial = 0; trial < 5; ++trial) {
    const RandomInstance inst = random_instance(rng);
    EXPECT_GE(davies_bouldin(inst.T, inst.labels, euclid()), 0.0);
    const double sc = silhouette(inst.T, inst.labels, euclid());
    EXPECT_GE(sc, -1.0);
    EXPECT_LE(sc, 1.0);
    const double roc = roc_auc(inst.T, inst.labels, euclid());
    EXPECT_GE(roc, 0.0);
    EXPECT_LE(roc, 1.0);
    const double pr = pr_auc(inst.T, inst.labels, euclid());
    EXPECT_GE(pr, 0.0);
    EXPECT_LE(pr, 1.0);
  }
}

TEST(KMeans, SaturationAtKEqualsN) {
  Rng rng(9);
  MatrixXd X(6, 2);
  for (Eigen::Index i = 0; i < X.size(); ++i) X(i) = rng.normal();
  const ClusteringResult res = kmeans(X, 6, 42);
  EXPECT_NEAR(res.sse, 0.0, 1e-20);
  std::vector<int> seen(6, 0);
  for (int a : res.assignment) ++seen[static_cast<std::size_t>(a)];
  for (int c : seen) EXPECT_EQ(c, 1);
}

TEST(KMeans, SeparableCaseRecoversPartition) {
  Rng rng(10);
  MatrixXd X(20, 2);
  std::vector<std::string> labels;
  for (int i = 0; i < 20; ++i) {
    const double cx = i < 10 ? 0.0 : 500.0;
    X(i, 0) = cx + rng.normal();
    X(i, 1) = rng.normal();
    labels.push_back(i < 10 ? "a" : "b");
  }
  const ClusteringResult res = kmeans(X, 2, 7);
  const ClusterScores scores = clustering_scores(res.assignment, labels);
  EXPECT_DOUBLE_EQ(scores.rand_index, 1.0);
}

TEST(KMeans, BeatsRandomAssignments) {
  Rng rng(11);
  MatrixXd X(30, 3);
  for (Eigen::Index i = 0; i < X.size(); ++i) X(i) = rng.normal();
  const ClusteringResult res = kmeans(X, 3, 5);

  auto sse_of = [&](const std::vector<int>& assign) {
    MatrixXd centroids = MatrixXd::Zero(3, 3);
    std::vector<int> counts(3, 0);
    for (int i = 0; i < 30; ++i) {
      centroids.row(assign[static_cast<std::size_t>(i)]) += X.row(i);
      ++counts[static_cast<std::size_t>(assign[static_cast<std::size_t>(i)])];
    }
    for (int k = 0; k < 3; ++k)
      if (counts[static_cast<std::size_t>(k)] > 0)
        centroids.row(k) /= static_cast<double>(counts[static_cast<std::size_t>(k)]);
    double sse = 0.0;
    for (int i = 0; i < 30; ++i)
      sse += (X.row(i) - centroids.row(assign[static_cast<std::size_t>(i)])).squaredNorm();
    return sse;
  };
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<int> assign(30);
    for (auto& a : assign) a = static_cast<int>(rng.index(3));
    EXPECT_LE(res.sse, sse_of(assign) + 1e-9);
  }
}

TEST(KMeans, DeterministicAndTranslationInvariant) {
  Rng rng(12);
  MatrixXd X(25, 4);
  for (Eigen::Index i = 0; i < X.size(); ++i) X(i) = rng.normal();
  const ClusteringResult a = kmeans(X, 4, 99);
  const ClusteringResult b = kmeans(X, 4, 99);
  EXPECT_EQ(a.assignment, b.assignment);
  MatrixXd shifted = X;
  shifted.rowwise() += Eigen::RowVector4d(5.0, -3.0, 2.0, 100.0);
  const ClusteringResult c = kmeans(shifted, 4, 99);
  EXPECT_EQ(a.assignment, c.assignment);
  EXPECT_THROW(kmeans(X, 26, 1), Error);
  EXPECT_THROW(kmeans(X, 3, 1, 0), Error);
}

TEST(ClusterScores, PerfectClustering) {
  const std::vector<int> assign = {0, 0, 1, 1, 2, 2};
  const std::vector<std::string> labels = {"a", "a", "b", "b", "c", "c"};
  const ClusterScores s = clustering_scores(assign, labels);
  EXPECT_DOUBLE_EQ(s.purity, 1.0);
  EXPECT_DOUBLE_EQ(s.rand_index, 1.0);
  EXPECT_DOUBLE_EQ(s.f_measure, 1.0);
  EXPECT_DOUBLE_EQ(s.jaccard, 1.0);
  EXPECT_DOUBLE_EQ(s.fowlkes_mallows, 1.0);
}

TEST(ClusterScores, SixPairFixture) {
  // classes (a,a,b,b), clusters ({a,a,b},{b})
  const std::vector<int> assign = {0, 0, 0, 1};
  const std::vector<std::string> labels = {"a", "a", "b", "b"};
  const ClusterScores s = clustering_scores(assign, labels);
  EXPECT_EQ(s.pairs.tp, 1u);
  EXPECT_EQ(s.pairs.fp, 2u);
  EXPECT_EQ(s.pairs.fn, 1u);
  EXPECT_EQ(s.pairs.tn, 2u);
  EXPECT_DOUBLE_EQ(s.rand_index, 0.5);
  EXPECT_DOUBLE_EQ(s.f_measure, 0.4);
  EXPECT_DOUBLE_EQ(s.jaccard, 0.25);
  EXPECT_NEAR(s.fowlkes_mallows, std::sqrt(1.0 / 6.0), 1e-12);
  EXPECT_NEAR(s.fowlkes_mallows, 0.4082, 1e-4);
  EXPECT_DOUBLE_EQ(s.purity, 0.75);
}

TEST(ClusterScores, MatchesOracleAndFmiCrossCheck) {
  Rng rng(80);
  for (int trial = 0; trial < 10; ++trial) {
    const int N = 8 + static_cast<int>(rng.index(20));
    std::vector<int> assign;
    std::vector<std::string> labels;
    for (int i = 0; i < N; ++i) {
      assign.push_back(static_cast<int>(rng.index(3)));
      labels.push_back("c" + std::to_string(rng.index(3)));
    }
    ClusterScores s;
    try {
      s = clustering_scores(assign, labels);
    } catch (const Error&) {
      continue;  // degenerate draws without positive pairs
    }
    const oracle::PairCounts pc = oracle::count_pairs(assign, labels);
    EXPECT_EQ(s.pairs.tp, pc.tp);
    EXPECT_EQ(s.pairs.tn, pc.tn);
    EXPECT_EQ(s.pairs.fp, pc.fp);
    EXPECT_EQ(s.pairs.fn, pc.fn);
    EXPECT_EQ(s.pairs.total(), static_cast<std::uint64_t>(N) * (N - 1) / 2);
    EXPECT_NEAR(s.purity, oracle::purity(assign, labels), 1e-12);
    EXPECT_NEAR(s.rand_index, oracle::rand_index(pc), 1e-12);
    EXPECT_NEAR(s.f_measure, oracle::f_measure(pc), 1e-12);
    EXPECT_NEAR(s.jaccard, oracle::jaccard(pc), 1e-12);
    EXPECT_NEAR(s.fowlkes_mallows, oracle::fowlkes_mallows(pc), 1e-12);
    // FMI = sqrt(p*r) recomputed from the pair counts directly
    const double p = static_cast<double>(pc.tp) / static_cast<double>(pc.tp + pc.fp);
    const double r = static_cast<double>(pc.tp) / static_cast<double>(pc.tp + pc.fn);
    EXPECT_NEAR(s.fowlkes_mallows, std::sqrt(p * r), 1e-12);
  }
}

TEST(ClusterScores, UndefinedPrecisionOrRecall) {
  try {
    clustering_scores({0, 1}, {"a", "a"});  // no same-cluster pair: TP+FP = 0
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), Errc::undefined_metric);
  }
}

TEST(Metrics, MahalanobisEqualsEuclideanOnWhitened) {
  Rng rng(81);
  const RandomInstance inst = random_instance(rng);
  MatrixXd Q(inst.T.cols(), inst.T.cols());
  for (Eigen::Index i = 0; i < Q.size(); ++i) Q(i) = rng.normal();
  const MatrixXd P = Q * Q.transpose() + MatrixXd::Identity(Q.rows(), Q.cols());

  const DistanceFn maha = [P](const VectorXd& a, const VectorXd& b) {
    const VectorXd d = a - b;
    return std::sqrt(d.dot(P * d));
  };
  const Eigen::LLT<MatrixXd> llt(P);
  const MatrixXd white = inst.T * MatrixXd(llt.matrixL());

  EXPECT_NEAR(davies_bouldin(inst.T, inst.labels, maha),
              davies_bouldin(white, inst.labels, euclid()), 1e-8);
  EXPECT_NEAR(silhouette(inst.T, inst.labels, maha), silhouette(white, inst.labels, euclid()),
              1e-8);
  EXPECT_NEAR(roc_auc(inst.T, inst.labels, maha), roc_auc(white, inst.labels, euclid()), 1e-8);
  EXPECT_NEAR(pr_auc(inst.T, inst.labels, maha), pr_auc(white, inst.labels, euclid()), 1e-8);
}
