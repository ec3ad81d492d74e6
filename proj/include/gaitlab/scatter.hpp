#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "gaitlab/error.hpp"

namespace gaitlab {

/// Class means and prior-weighted scatter matrices of a labeled vector set.
/// classes lists labels in first-appearance order; class_means row c matches
/// classes[c].
struct ScatterSummary {
  Eigen::VectorXd mean;
  Eigen::MatrixXd class_means;  // C x d
  Eigen::MatrixXd between;      // S_b
  Eigen::MatrixXd within;       // S_w
  std::vector<double> priors;   // N_c / N
  std::vector<std::string> classes;
};

namespace detail {

inline std::vector<int> class_index_of(const std::vector<std::string>& labels,
                                       std::vector<std::string>& classes_out) {
  std::vector<int> idx(labels.size(), -1);
  for (std::size_t n = 0; n < labels.size(); ++n) {
    int c = -1;
    for (std::size_t k = 0; k < classes_out.size(); ++k)
      if (classes_out[k] == labels[n]) {
        c = static_cast<int>(k);
        break;
      }
    if (c < 0) {
      c = static_cast<int>(classes_out.size());
      classes_out.push_back(labels[n]);
    }
    idx[n] = c;
  }
  return idx;
}

}  // namespace detail

/// S_b = sum_c p_c (mu_c-mu)(mu_c-mu)^T,
/// S_w = sum_c p_c (1/N_c) sum_{n in c} (x_n-mu_c)(x_n-mu_c)^T,
/// both symmetrized as (A+A^T)/2. Rows of X are samples.
inline ScatterSummary compute_scatter(const Eigen::MatrixXd& X,
                                      const std::vector<std::string>& labels) {
  const Eigen::Index N = X.rows();
  const Eigen::Index d = X.cols();
  require(N > 0 && static_cast<std::size_t>(N) == labels.size(), Errc::shape,
          "labels must match the number of rows");

  ScatterSummary s;
  const std::vector<int> cls = detail::class_index_of(labels, s.classes);
  const Eigen::Index C = static_cast<Eigen::Index>(s.classes.size());
  require(C >= 2, Errc::insufficient_classes, "scatter needs at least 2 classes");

  std::vector<Eigen::Index> counts(static_cast<std::size_t>(C), 0);
  s.class_means = Eigen::MatrixXd::Zero(C, d);
  for (Eigen::Index n = 0; n < N; ++n) {
    s.class_means.row(cls[static_cast<std::size_t>(n)]) += X.row(n);
    ++counts[static_cast<std::size_t>(cls[static_cast<std::size_t>(n)])];
  }
  s.priors.resize(static_cast<std::size_t>(C));
  for (Eigen::Index c = 0; c < C; ++c) {
    s.class_means.row(c) /= static_cast<double>(counts[static_cast<std::size_t>(c)]);
    s.priors[static_cast<std::size_t>(c)] =
        static_cast<double>(counts[static_cast<std::size_t>(c)]) / static_cast<double>(N);
  }
  s.mean = X.colwise().mean().transpose();

  s.between = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index c = 0; c < C; ++c) {
    const Eigen::VectorXd dm = s.class_means.row(c).transpose() - s.mean;
    s.between.noalias() += s.priors[static_cast<std::size_t>(c)] * dm * dm.transpose();
  }

  s.within = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index n = 0; n < N; ++n) {
    const int c = cls[static_cast<std::size_t>(n)];
    const Eigen::VectorXd dx = X.row(n).transpose() - s.class_means.row(c).transpose();
    // p_c / N_c = 1/N
    s.within.noalias() += dx * dx.transpose() / static_cast<double>(N);
  }

  s.between = ((s.between + s.between.transpose()) * 0.5).eval();
  s.within = ((s.within + s.within.transpose()) * 0.5).eval();
  return s;
}

}  // namespace gaitlab
