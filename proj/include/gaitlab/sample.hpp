#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "gaitlab/error.hpp"
#include "gaitlab/skeleton.hpp"

namespace gaitlab {

/// One frame: row j holds the (x,y,z) position of joint j in meters.
/// +y is vertical; normalized samples walk along +x.
using Pose = Eigen::Matrix<double, kJointCount, 3>;

/// One gait cycle: identity label plus F >= 2 frames.
struct GaitSample {
  std::string label;
  std::vector<Pose> frames;

  int frame_count() const { return static_cast<int>(frames.size()); }
};

inline void validate_sample(const GaitSample& s) {
  require(s.frames.size() >= 2, Errc::schema, "sample needs at least 2 frames");
  for (const Pose& p : s.frames)
    require(p.allFinite(), Errc::schema, "sample '" + s.label + "' has non-finite coordinates");
}

/// Labeled sample collection. frame_rate is dataset-level configuration
/// (not serialized with the canonical format); default is the CMU 120 Hz.
struct Dataset {
  std::vector<GaitSample> samples;
  double frame_rate = 120.0;

  std::size_t size() const { return samples.size(); }

  /// Unique labels in first-appearance order.
  std::vector<std::string> class_labels() const {
    std::vector<std::string> out;
    for (const auto& s : samples)
      if (std::find(out.begin(), out.end(), s.label) == out.end()) out.push_back(s.label);
    return out;
  }

  std::size_t class_count() const { return class_labels().size(); }

  std::map<std::string, std::size_t> class_counts() const {
    std::map<std::string, std::size_t> counts;
    for (const auto& s : samples) ++counts[s.label];
    return counts;
  }
};

namespace detail {

inline Eigen::Vector3d mean_root(const GaitSample& s) {
  Eigen::Vector3d m = Eigen::Vector3d::Zero();
  for (const Pose& p : s.frames) m += p.row(root).transpose();
  return m / static_cast<double>(s.frames.size());
}

}  // namespace detail

/// Rigidly normalizes a cycle: mean root position becomes the origin and the
/// principal horizontal direction of the root trajectory is rotated onto +x
/// (sign fixed by the net root displacement). Within-sample geometry is
/// untouched, so distances, step lengths and speeds survive.
inline GaitSample normalize_sample(const GaitSample& s) {
  validate_sample(s);
  const std::size_t F = s.frames.size();
  const Eigen::Vector3d center = detail::mean_root(s);

  // Principal direction of the centered horizontal (x,z) root track.
  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
  for (const Pose& p : s.frames) {
    const double hx = p(root, 0) - center.x();
    const double hz = p(root, 2) - center.z();
    cov(0, 0) += hx * hx;
    cov(0, 1) += hx * hz;
    cov(1, 1) += hz * hz;
  }
  cov(1, 0) = cov(0, 1);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(cov);
  require(eig.info() == Eigen::Success, Errc::degenerate_walk, "horizontal PCA failed");
  const double spread = eig.eigenvalues()(1);
  require(spread > 1e-18, Errc::degenerate_walk,
          "root trajectory has no horizontal extent; walking direction undefined");
  Eigen::Vector2d u = eig.eigenvectors().col(1);

  const Eigen::Vector3d disp = s.frames.back().row(root) - s.frames.front().row(root);
  const double along = u.x() * disp.x() + u.y() * disp.z();
  if (along < 0.0) {
    u = -u;
  } else if (along == 0.0 && (u.x() < 0.0 || (u.x() == 0.0 && u.y() < 0.0))) {
    u = -u;  // no net displacement: canonical sign
  }

  // Rotation about +y taking u to +x: x' = ux*x + uz*z, z' = -uz*x + ux*z.
  const double ux = u.x(), uz = u.y();
  GaitSample out;
  out.label = s.label;
  out.frames.reserve(F);
  for (const Pose& p : s.frames) {
    Pose q;
    for (int j = 0; j < kJointCount; ++j) {
      const double x = p(j, 0) - center.x();
      const double y = p(j, 1) - center.y();
      const double z = p(j, 2) - center.z();
      q(j, 0) = ux * x + uz * z;
      q(j, 1) = y;
      q(j, 2) = -uz * x + ux * z;
    }
    out.frames.push_back(q);
  }
  return out;
}

/// Linear resampling of every joint signal onto T equally spaced time points
/// spanning the cycle. Endpoints are preserved exactly; T == F is the identity.
inline GaitSample resample_cycle(const GaitSample& s, int T) {
  require(T >= 2, Errc::parameter, "resample target must have at least 2 frames");
  validate_sample(s);
  const int F = s.frame_count();
  if (T == F) return s;

  GaitSample out;
  out.label = s.label;
  out.frames.resize(static_cast<std::size_t>(T));
  for (int k = 0; k < T; ++k) {
    const double t = static_cast<double>(k) * static_cast<double>(F - 1) /
                     static_cast<double>(T - 1);
    int i = static_cast<int>(t);
    if (i >= F - 1) i = F - 2;
    const double w = t - static_cast<double>(i);
    const Pose& a = s.frames[static_cast<std::size_t>(i)];
    const Pose& b = s.frames[static_cast<std::size_t>(i + 1)];
    out.frames[static_cast<std::size_t>(k)] = (1.0 - w) * a + w * b;
  }
  return out;
}

/// Flattens a (resampled) cycle into a vector of length 3*|mask|*T.
/// Layout: frame-major, then joint in ascending mask order, then axis x,y,z:
/// v[(f*|mask| + j)*3 + a].
inline Eigen::VectorXd vectorize(const GaitSample& s, const JointMask& mask, int T) {
  const GaitSample r = resample_cycle(s, T);
  const auto& idx = mask.indices();
  Eigen::VectorXd v(static_cast<Eigen::Index>(3 * idx.size() * static_cast<std::size_t>(T)));
  Eigen::Index pos = 0;
  for (int f = 0; f < T; ++f) {
    const Pose& p = r.frames[static_cast<std::size_t>(f)];
    for (int j : idx)
      for (int a = 0; a < 3; ++a) v(pos++) = p(j, a);
  }
  return v;
}

}  // namespace gaitlab
