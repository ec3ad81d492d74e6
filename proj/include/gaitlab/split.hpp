#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "gaitlab/rng.hpp"
#include "gaitlab/sample.hpp"

namespace gaitlab {

/// Disjoint learning/evaluation identity sets (cross-identity protocol).
struct SplitConfiguration {
  std::vector<std::string> learning;
  std::vector<std::string> evaluation;

  void validate() const {
    require(!learning.empty() && !evaluation.empty(), Errc::parameter,
            "split sets must be non-empty");
    for (const auto& l : learning)
      for (const auto& e : evaluation)
        require(l != e, Errc::parameter, "identity '" + l + "' is in both split sets");
  }
};

/// One random (C_L, C_E) split drawn with a seeded shuffle of the identities.
inline SplitConfiguration make_split(const Dataset& d, int learn_count, int eval_count,
                                     std::uint64_t seed) {
  std::vector<std::string> ids = d.class_labels();
  require(learn_count >= 1 && eval_count >= 1 &&
              static_cast<std::size_t>(learn_count + eval_count) <= ids.size(),
          Errc::parameter, "dataset has too few identities for the requested split");
  Rng rng(mix_seed(seed, "split"));
  rng.shuffle(ids);
  SplitConfiguration cfg;
  cfg.learning.assign(ids.begin(), ids.begin() + learn_count);
  cfg.evaluation.assign(ids.begin() + learn_count, ids.begin() + learn_count + eval_count);
  return cfg;
}

/// Growing-learning-set sequence: starts at `start` = (C_L, C_E) and moves one
/// random evaluation identity into the learning set per step, ending when the
/// learning set holds end_learning identities. Defaults (2,62), 32 on a
/// 64-identity set give the 31 configurations (2,62)..(32,32).
inline std::vector<SplitConfiguration> configuration_sequence(const Dataset& d,
                                                              std::pair<int, int> start,
                                                              int end_learning,
                                                              std::uint64_t seed) {
  const auto [learn0, eval0] = start;
  require(learn0 >= 1 && eval0 >= 1 && end_learning >= learn0 && end_learning - learn0 < eval0,
          Errc::parameter, "invalid configuration range");
  SplitConfiguration cfg = make_split(d, learn0, eval0, seed);

  std::vector<SplitConfiguration> seq;
  seq.push_back(cfg);
  Rng rng(mix_seed(seed, "sequence"));
  for (int cl = learn0 + 1; cl <= end_learning; ++cl) {
    const std::size_t pick = rng.index(cfg.evaluation.size());
    cfg.learning.push_back(cfg.evaluation[pick]);
    cfg.evaluation.erase(cfg.evaluation.begin() + static_cast<std::ptrdiff_t>(pick));
    seq.push_back(cfg);
  }
  return seq;
}

/// Samples of the given identities, vectorized with (mask, T). Row order
/// follows the dataset.
struct VectorizedSet {
  Eigen::MatrixXd X;
  std::vector<std::string> labels;
};

inline VectorizedSet vectorize_subset(const Dataset& d, const std::vector<std::string>& ids,
                                      const JointMask& mask, int T) {
  std::vector<const GaitSample*> picked;
  for (const GaitSample& s : d.samples)
    if (std::find(ids.begin(), ids.end(), s.label) != ids.end()) picked.push_back(&s);
  require(!picked.empty(), Errc::parameter, "no samples match the requested identities");

  VectorizedSet out;
  out.X.resize(static_cast<Eigen::Index>(picked.size()),
               static_cast<Eigen::Index>(3 * mask.size()) * T);
  out.labels.reserve(picked.size());
  for (std::size_t n = 0; n < picked.size(); ++n) {
    out.X.row(static_cast<Eigen::Index>(n)) = vectorize(*picked[n], mask, T).transpose();
    out.labels.push_back(picked[n]->label);
  }
  return out;
}

/// Samples of the given identities as a sub-dataset (order preserved).
inline Dataset subset_by_identity(const Dataset& d, const std::vector<std::string>& ids) {
  Dataset out;
  out.frame_rate = d.frame_rate;
  for (const GaitSample& s : d.samples)
    if (std::find(ids.begin(), ids.end(), s.label) != ids.end()) out.samples.push_back(s);
  return out;
}

}  // namespace gaitlab
