#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gaitlab/geometric.hpp"
#include "gaitlab/sample.hpp"
#include "gaitlab/scatter.hpp"

namespace gaitlab {

enum class Method { mmc, pcalda, geometric, raw };
enum class DistanceKind { euclidean, mahalanobis };

inline const char* method_name(Method m) {
  switch (m) {
    case Method::mmc: return "mmc";
    case Method::pcalda: return "pcalda";
    case Method::geometric: return "geometric";
    case Method::raw: return "raw";
  }
  return "?";
}

/// Vectorization settings recorded with a fitted model so projection can
/// reproduce the exact raw-vector layout used at fit time.
struct VectorizationInfo {
  JointMask mask = JointMask::all();
  int T = 32;
  double frame_rate = 120.0;
};

/// A fitted (or fit-free) feature transform plus its template distance.
struct FeatureModel {
  Method method = Method::raw;
  Eigen::MatrixXd projection;  // d_out x d_in; empty for geometric/raw
  DistanceKind metric = DistanceKind::euclidean;
  Eigen::MatrixXd precision;   // d_out x d_out SPD when mahalanobis
  VectorizationInfo vec;
  GeometricFeatureSpec geo;    // geometric only
  std::vector<double> eigenvalues;  // retained criterion eigenvalues (learned only)
  Eigen::Index d_in = 0;
  Eigen::Index d_out = 0;
  std::size_t learn_classes = 0;
  std::size_t learn_samples = 0;
};

/// Feature vector in a model's space; label is empty when unknown.
struct GaitTemplate {
  Eigen::VectorXd features;
  std::string label;
};

namespace detail {

// Flip each row so its first non-negligible entry is positive.
inline void canonicalize_rows(Eigen::MatrixXd& W) {
  for (Eigen::Index r = 0; r < W.rows(); ++r) {
    const double scale = W.row(r).cwiseAbs().maxCoeff();
    if (scale == 0.0) continue;
    for (Eigen::Index c = 0; c < W.cols(); ++c) {
      if (std::abs(W(r, c)) > 1e-12 * scale) {
        if (W(r, c) < 0.0) W.row(r) = -W.row(r);
        break;
      }
    }
  }
}

// Indices of eigenvalues (ascending order in `vals`) that are strictly
// positive at a relative tolerance, returned in descending value order.
inline std::vector<Eigen::Index> positive_descending(const Eigen::VectorXd& vals) {
  const double scale = vals.size() ? vals.cwiseAbs().maxCoeff() : 0.0;
  const double tol = 1e-12 * std::max(1.0, scale);
  std::vector<Eigen::Index> idx;
  for (Eigen::Index i = vals.size() - 1; i >= 0; --i)
    if (vals(i) > tol) idx.push_back(i);
  return idx;
}

// Orthonormal basis Q (d x r) of the span of the centered rows of X, plus the
// centered coordinates Z = Xc Q (N x r). Snapshot route: eigendecompose the
// N x N Gram matrix instead of the d x d covariance.
inline void span_basis(const Eigen::MatrixXd& X, Eigen::MatrixXd& Q, Eigen::MatrixXd& Z) {
  const Eigen::Index N = X.rows();
  const Eigen::MatrixXd Xc = X.rowwise() - X.colwise().mean();
  Eigen::MatrixXd G = Xc * Xc.transpose();
  G = ((G + G.transpose()) * 0.5).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(G);
  require(eig.info() == Eigen::Success, Errc::degenerate_model, "Gram eigendecomposition failed");
  const Eigen::VectorXd& vals = eig.eigenvalues();
  const double tol = 1e-12 * std::max(1.0, vals.cwiseAbs().maxCoeff());
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = N - 1; i >= 0; --i)
    if (vals(i) > tol) keep.push_back(i);
  require(!keep.empty(), Errc::degenerate_model, "all samples identical; span is empty");
  const Eigen::Index r = static_cast<Eigen::Index>(keep.size());
  Q.resize(X.cols(), r);
  for (Eigen::Index k = 0; k < r; ++k)
    Q.col(k) = Xc.transpose() * eig.eigenvectors().col(keep[static_cast<std::size_t>(k)]) /
               std::sqrt(vals(keep[static_cast<std::size_t>(k)]));
  Z = Xc * Q;
}

inline double regularization_eps(const Eigen::MatrixXd& S) {
  const double mean_diag = S.diagonal().mean();
  return mean_diag > 0.0 ? 1e-6 * mean_diag : 1e-12;
}

// Mahalanobis precision: inverse of the pooled within-class covariance of the
// projected learning data, ridge-regularized before inversion.
inline Eigen::MatrixXd learned_precision(const Eigen::MatrixXd& projected,
                                         const std::vector<std::string>& labels) {
  const ScatterSummary s = compute_scatter(projected, labels);
  Eigen::MatrixXd cov = s.within;
  cov.diagonal().array() += regularization_eps(cov);
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  require(llt.info() == Eigen::Success, Errc::degenerate_model,
          "projected within-class covariance is not positive-definite");
  Eigen::MatrixXd P = llt.solve(Eigen::MatrixXd::Identity(cov.rows(), cov.cols()));
  return ((P + P.transpose()) * 0.5).eval();
}

}  // namespace detail

/// Maximum-margin fit: eigenvectors of S_b - S_w with strictly positive
/// eigenvalues, descending. When d_in exceeds the sample count the problem is
/// solved in the span of the centered data (same positive spectrum, exact
/// eigenvectors). Rows come out orthonormal; the metric is Mahalanobis with
/// the projected pooled within-class covariance.
inline FeatureModel fit_mmc(const Eigen::MatrixXd& X, const std::vector<std::string>& labels,
                            const VectorizationInfo& vec = {}) {
  const Eigen::Index N = X.rows();
  const Eigen::Index d = X.cols();

  Eigen::MatrixXd W;
  std::vector<double> kept_vals;
  if (d <= N) {
    const ScatterSummary s = compute_scatter(X, labels);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s.between - s.within);
    require(eig.info() == Eigen::Success, Errc::degenerate_model, "eigendecomposition failed");
    const auto keep = detail::positive_descending(eig.eigenvalues());
    require(!keep.empty(), Errc::degenerate_model,
            "no positive margin eigenvalue; classes inseparable under the criterion");
    W.resize(static_cast<Eigen::Index>(keep.size()), d);
    for (std::size_t k = 0; k < keep.size(); ++k) {
      W.row(static_cast<Eigen::Index>(k)) = eig.eigenvectors().col(keep[k]).transpose();
      kept_vals.push_back(eig.eigenvalues()(keep[k]));
    }
  } else {
    // scatter needs >= 2 classes even on the reduced path
    {
      std::vector<std::string> classes;
      detail::class_index_of(labels, classes);
      require(classes.size() >= 2, Errc::insufficient_classes, "scatter needs at least 2 classes");
      require(labels.size() == static_cast<std::size_t>(N), Errc::shape,
              "labels must match the number of rows");
    }
    Eigen::MatrixXd Q, Z;
    detail::span_basis(X, Q, Z);
    const ScatterSummary s = compute_scatter(Z, labels);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s.between - s.within);
    require(eig.info() == Eigen::Success, Errc::degenerate_model, "eigendecomposition failed");
    const auto keep = detail::positive_descending(eig.eigenvalues());
    require(!keep.empty(), Errc::degenerate_model,
            "no positive margin eigenvalue; classes inseparable under the criterion");
    W.resize(static_cast<Eigen::Index>(keep.size()), d);
    for (std::size_t k = 0; k < keep.size(); ++k) {
      W.row(static_cast<Eigen::Index>(k)) = (Q * eig.eigenvectors().col(keep[k])).transpose();
      kept_vals.push_back(eig.eigenvalues()(keep[k]));
    }
  }
  detail::canonicalize_rows(W);

  FeatureModel m;
  m.method = Method::mmc;
  m.projection = std::move(W);
  m.metric = DistanceKind::mahalanobis;
  m.precision = detail::learned_precision(X * m.projection.transpose(), labels);
  m.vec = vec;
  m.eigenvalues = std::move(kept_vals);
  m.d_in = d;
  m.d_out = m.projection.rows();
  std::vector<std::string> classes;
  detail::class_index_of(labels, classes);
  m.learn_classes = classes.size();
  m.learn_samples = static_cast<std::size_t>(N);
  return m;
}

/// PCA to the smallest leading eigenspace reaching variance_keep of total
/// variance (capped at N-C), then LDA as the symmetric-definite problem
/// (S_w + eps I)^-1 S_b in PCA coordinates, keeping <= C-1 positive
/// directions. The returned projection composes both stages.
inline FeatureModel fit_pcalda(const Eigen::MatrixXd& X, const std::vector<std::string>& labels,
                               double variance_keep = 0.99, const VectorizationInfo& vec = {}) {
  require(variance_keep > 0.0 && variance_keep <= 1.0, Errc::parameter,
          "variance_keep must be in (0,1]");
  const Eigen::Index N = X.rows();
  const Eigen::Index d = X.cols();
  require(static_cast<std::size_t>(N) == labels.size(), Errc::shape,
          "labels must match the number of rows");
  std::vector<std::string> classes;
  detail::class_index_of(labels, classes);
  const Eigen::Index C = static_cast<Eigen::Index>(classes.size());
  require(C >= 2, Errc::insufficient_classes, "need at least 2 classes");

  const Eigen::MatrixXd Xc = X.rowwise() - X.colwise().mean();
  const double total_var = Xc.squaredNorm() / static_cast<double>(N);
  require(total_var > 0.0, Errc::degenerate_model, "all-zero variance");

  // PCA directions with eigenvalues, descending. Snapshot route when d > N.
  Eigen::MatrixXd dirs;      // d x n_pos
  Eigen::VectorXd variances;  // n_pos
  if (d <= N) {
    Eigen::MatrixXd cov = Xc.transpose() * Xc / static_cast<double>(N);
    cov = ((cov + cov.transpose()) * 0.5).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    require(eig.info() == Eigen::Success, Errc::degenerate_model, "PCA eigendecomposition failed");
    const auto keep = detail::positive_descending(eig.eigenvalues());
    dirs.resize(d, static_cast<Eigen::Index>(keep.size()));
    variances.resize(static_cast<Eigen::Index>(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k) {
      dirs.col(static_cast<Eigen::Index>(k)) = eig.eigenvectors().col(keep[k]);
      variances(static_cast<Eigen::Index>(k)) = eig.eigenvalues()(keep[k]);
    }
  } else {
    Eigen::MatrixXd G = Xc * Xc.transpose() / static_cast<double>(N);
    G = ((G + G.transpose()) * 0.5).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(G);
    require(eig.info() == Eigen::Success, Errc::degenerate_model, "PCA eigendecomposition failed");
    const auto keep = detail::positive_descending(eig.eigenvalues());
    dirs.resize(d, static_cast<Eigen::Index>(keep.size()));
    variances.resize(static_cast<Eigen::Index>(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k) {
      const double lam = eig.eigenvalues()(keep[k]);
      dirs.col(static_cast<Eigen::Index>(k)) =
          Xc.transpose() * eig.eigenvectors().col(keep[k]) /
          std::sqrt(lam * static_cast<double>(N));
      variances(static_cast<Eigen::Index>(k)) = lam;
    }
  }
  require(variances.size() > 0, Errc::degenerate_model, "all-zero variance");

  const Eigen::Index cap = N - C;
  require(cap >= 1, Errc::degenerate_model, "too few samples per class for PCA+LDA");
  const double target = variance_keep * total_var;
  Eigen::Index n_pca = variances.size();
  double cum = 0.0;
  for (Eigen::Index i = 0; i < variances.size(); ++i) {
    cum += variances(i);
    if (cum >= target * (1.0 - 1e-12)) {
      n_pca = i + 1;
      break;
    }
  }
  n_pca = std::min(n_pca, cap);
  const Eigen::MatrixXd pca = dirs.leftCols(n_pca);  // d x m

  // LDA in PCA coordinates.
  const Eigen::MatrixXd Z = Xc * pca;
  const ScatterSummary s = compute_scatter(Z, labels);
  Eigen::MatrixXd Sw = s.within;
  Sw.diagonal().array() += detail::regularization_eps(Sw);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig(s.between, Sw);
  require(eig.info() == Eigen::Success, Errc::degenerate_model, "LDA eigendecomposition failed");
  auto keep = detail::positive_descending(eig.eigenvalues());
  if (static_cast<Eigen::Index>(keep.size()) > C - 1) keep.resize(static_cast<std::size_t>(C - 1));
  require(!keep.empty(), Errc::degenerate_model,
          "no positive discriminant eigenvalue (identical class means?)");

  Eigen::MatrixXd W(static_cast<Eigen::Index>(keep.size()), d);
  std::vector<double> kept_vals;
  for (std::size_t k = 0; k < keep.size(); ++k) {
    W.row(static_cast<Eigen::Index>(k)) = (pca * eig.eigenvectors().col(keep[k])).transpose();
    kept_vals.push_back(eig.eigenvalues()(keep[k]));
  }
  detail::canonicalize_rows(W);

  FeatureModel m;
  m.method = Method::pcalda;
  m.projection = std::move(W);
  m.metric = DistanceKind::mahalanobis;
  m.precision = detail::learned_precision(X * m.projection.transpose(), labels);
  m.vec = vec;
  m.eigenvalues = std::move(kept_vals);
  m.d_in = d;
  m.d_out = m.projection.rows();
  m.learn_classes = static_cast<std::size_t>(C);
  m.learn_samples = static_cast<std::size_t>(N);
  return m;
}

inline FeatureModel make_raw_model(const VectorizationInfo& vec = {}) {
  FeatureModel m;
  m.method = Method::raw;
  m.metric = DistanceKind::euclidean;
  m.vec = vec;
  m.d_in = static_cast<Eigen::Index>(3 * vec.mask.size()) * vec.T;
  m.d_out = m.d_in;
  return m;
}

inline FeatureModel make_geometric_model(const GeometricFeatureSpec& spec,
                                         const VectorizationInfo& vec = {}) {
  validate_spec(spec);
  FeatureModel m;
  m.method = Method::geometric;
  m.metric = DistanceKind::euclidean;
  m.vec = vec;
  m.geo = spec;
  m.d_in = static_cast<Eigen::Index>(3 * vec.mask.size()) * vec.T;
  m.d_out = static_cast<Eigen::Index>(spec.size());
  return m;
}

/// Switches any model to a Mahalanobis metric learned from labeled templates
/// in its own feature space (geometric models ship Euclidean by default).
inline void attach_mahalanobis(FeatureModel& m, const Eigen::MatrixXd& templates,
                               const std::vector<std::string>& labels) {
  require(templates.cols() == m.d_out, Errc::shape, "template dimension mismatch");
  m.precision = detail::learned_precision(templates, labels);
  m.metric = DistanceKind::mahalanobis;
}

namespace detail {

// Rebuilds a T-frame sample from a raw vector. Joints outside the mask are
// pinned to the first masked joint so span-type features ignore them.
inline GaitSample unflatten(const Eigen::VectorXd& v, const JointMask& mask, int T,
                            const std::string& label) {
  const auto& idx = mask.indices();
  GaitSample s;
  s.label = label.empty() ? "query" : label;
  s.frames.resize(static_cast<std::size_t>(T));
  Eigen::Index pos = 0;
  for (int f = 0; f < T; ++f) {
    Pose& p = s.frames[static_cast<std::size_t>(f)];
    p.setZero();
    for (int j : idx)
      for (int a = 0; a < 3; ++a) p(j, a) = v(pos++);
    const Eigen::Vector3d fill = p.row(idx.front());
    for (int j = 0; j < kJointCount; ++j)
      if (!mask.contains(j)) p.row(j) = fill;
  }
  return s;
}

inline void check_geo_mask(const FeatureModel& m) {
  auto need = [&](int j) {
    require(m.vec.mask.contains(j), Errc::shape,
            "geometric spec uses joint '" + std::string(joint_name(j)) +
                "' excluded by the model mask");
  };
  for (const auto& d : m.geo.descriptors) {
    const int arity = joint_arity(d.kind);
    const int js[3] = {d.j1, d.j2, d.j3};
    for (int i = 0; i < arity; ++i) need(js[i]);
    if (d.kind == FeatureKind::step_length) {
      need(lfoot);
      need(rfoot);
    }
    if (d.kind == FeatureKind::walk_speed) need(root);
  }
}

}  // namespace detail

/// Raw-vector projection. Learned models apply their matrix; raw is the
/// identity; geometric models reconstruct the T-frame cycle from the vector
/// (cycle duration (T-1)/frame_rate by convention) and extract features.
inline GaitTemplate project(const FeatureModel& m, const Eigen::VectorXd& v,
                            const std::string& label = "") {
  require(v.size() == m.d_in, Errc::shape,
          "input dimension " + std::to_string(v.size()) + " != model d_in " +
              std::to_string(m.d_in));
  GaitTemplate t;
  t.label = label;
  switch (m.method) {
    case Method::mmc:
    case Method::pcalda:
      t.features = m.projection * v;
      break;
    case Method::raw:
      t.features = v;
      break;
    case Method::geometric: {
      detail::check_geo_mask(m);
      const GaitSample s = detail::unflatten(v, m.vec.mask, m.vec.T, label);
      t.features = extract_geometric(s, m.geo, m.vec.frame_rate);
      break;
    }
  }
  return t;
}

/// Sample-to-template path used by the pipeline. Geometric features come from
/// the sample itself (true frame count and duration); learned/raw go through
/// the model's vectorization.
inline GaitTemplate make_template(const FeatureModel& m, const GaitSample& s) {
  if (m.method == Method::geometric) {
    return GaitTemplate{extract_geometric(s, m.geo, m.vec.frame_rate), s.label};
  }
  return project(m, vectorize(s, m.vec.mask, m.vec.T), s.label);
}

/// sqrt((t1-t2)^T P (t1-t2)); P = I for the Euclidean metric.
inline double template_distance(const FeatureModel& m, const GaitTemplate& a,
                                const GaitTemplate& b) {
  require(a.features.size() == m.d_out && b.features.size() == m.d_out, Errc::shape,
          "template dimension mismatch");
  const Eigen::VectorXd diff = a.features - b.features;
  if (m.metric == DistanceKind::euclidean) return diff.norm();
  const double q = diff.dot(m.precision * diff);
  return std::sqrt(std::max(q, 0.0));
}

using DistanceFn = std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)>;

inline DistanceFn model_distance(const FeatureModel& m) {
  if (m.metric == DistanceKind::euclidean)
    return [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return (a - b).norm(); };
  const Eigen::MatrixXd P = m.precision;
  return [P](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    const Eigen::VectorXd d = a - b;
    return std::sqrt(std::max(d.dot(P * d), 0.0));
  };
}

/// Maps template rows so that Euclidean distance afterwards equals the
/// model's Mahalanobis distance (identity for Euclidean models).
inline Eigen::MatrixXd whiten_rows(const FeatureModel& m, const Eigen::MatrixXd& templates) {
  require(templates.cols() == m.d_out, Errc::shape, "template dimension mismatch");
  if (m.metric == DistanceKind::euclidean) return templates;
  Eigen::LLT<Eigen::MatrixXd> llt(m.precision);
  require(llt.info() == Eigen::Success, Errc::degenerate_model,
          "precision matrix is not positive-definite");
  return templates * Eigen::MatrixXd(llt.matrixL());
}

// --- model file: versioned JSON document ---

inline void save_model(const FeatureModel& m, const std::filesystem::path& path) {
  nlohmann::json j;
  j["format"] = "gaitlab-model";
  j["version"] = 1;
  j["method"] = method_name(m.method);
  j["metric"] = m.metric == DistanceKind::euclidean ? "euclidean" : "mahalanobis";
  j["d_in"] = m.d_in;
  j["d_out"] = m.d_out;
  j["t"] = m.vec.T;
  j["frame_rate"] = m.vec.frame_rate;
  j["mask"] = m.vec.mask.indices();
  j["learn_classes"] = m.learn_classes;
  j["learn_samples"] = m.learn_samples;
  j["eigenvalues"] = m.eigenvalues;
  auto dump_matrix = [](const Eigen::MatrixXd& M) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < M.rows(); ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index c = 0; c < M.cols(); ++c) row.push_back(M(r, c));
      rows.push_back(std::move(row));
    }
    return rows;
  };
  if (m.projection.size() > 0) j["projection"] = dump_matrix(m.projection);
  if (m.precision.size() > 0) j["precision"] = dump_matrix(m.precision);
  if (m.method == Method::geometric) {
    std::vector<std::string> lines;
    std::istringstream iss(feature_spec_to_string(m.geo));
    std::string line;
    while (std::getline(iss, line)) lines.push_back(line);
    j["geometric_spec"] = lines;
  }
  std::ofstream os(path, std::ios::binary);
  require(os.good(), Errc::io, "cannot open '" + path.string() + "' for writing");
  os << j.dump(2) << '\n';
  require(os.good(), Errc::io, "write to '" + path.string() + "' failed");
}

inline FeatureModel load_model(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  require(is.good(), Errc::io, "cannot open model '" + path.string() + "'");
  nlohmann::json j;
  try {
    is >> j;
  } catch (const std::exception& e) {
    fail(Errc::parse, "model '" + path.string() + "': " + e.what());
  }
  require(j.value("format", "") == "gaitlab-model", Errc::parse, "not a gaitlab model file");
  require(j.value("version", 0) == 1, Errc::parse, "unsupported model version");

  FeatureModel m;
  const std::string method = j.at("method").get<std::string>();
  if (method == "mmc") m.method = Method::mmc;
  else if (method == "pcalda") m.method = Method::pcalda;
  else if (method == "geometric") m.method = Method::geometric;
  else if (method == "raw") m.method = Method::raw;
  else fail(Errc::parse, "unknown method '" + method + "'");
  m.metric = j.at("metric").get<std::string>() == "mahalanobis" ? DistanceKind::mahalanobis
                                                                : DistanceKind::euclidean;
  m.d_in = j.at("d_in").get<Eigen::Index>();
  m.d_out = j.at("d_out").get<Eigen::Index>();
  m.vec.T = j.at("t").get<int>();
  m.vec.frame_rate = j.at("frame_rate").get<double>();
  m.vec.mask = JointMask::of(j.at("mask").get<std::vector<int>>());
  m.learn_classes = j.value("learn_classes", std::size_t{0});
  m.learn_samples = j.value("learn_samples", std::size_t{0});
  m.eigenvalues = j.value("eigenvalues", std::vector<double>{});
  auto read_matrix = [](const nlohmann::json& rows) {
    Eigen::MatrixXd M(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (Eigen::Index r = 0; r < M.rows(); ++r)
      for (Eigen::Index c = 0; c < M.cols(); ++c)
        M(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)].get<double>();
    return M;
  };
  if (j.contains("projection")) m.projection = read_matrix(j["projection"]);
  if (j.contains("precision")) m.precision = read_matrix(j["precision"]);
  if (j.contains("geometric_spec")) {
    std::string text;
    for (const auto& line : j["geometric_spec"]) text += line.get<std::string>() + "\n";
    std::istringstream iss(text);
    m.geo = parse_feature_spec(iss);
  }
  return m;
}

}  // namespace gaitlab
