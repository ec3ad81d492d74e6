#pragma once

#include <algorithm>
#include <limits>
#include <string>

#include "gaitlab/rng.hpp"
#include "gaitlab/sample.hpp"
#include "gaitlab/skeleton.hpp"

namespace gaitlab {

enum class CorruptionKind { none, mult_noise, subst_noise, exclude_joints };

/// One corruption of the evaluation pipeline. x is a percentage for the noise
/// kinds; mask is the set of joints KEPT for exclusion runs.
struct CorruptionSpec {
  CorruptionKind kind = CorruptionKind::none;
  double x = 0.0;
  JointMask mask = JointMask::all();
  std::uint64_t seed = 0;
  std::string name = "none";
};

inline CorruptionSpec mult_noise(double x, std::uint64_t seed) {
  require(x >= 0.0 && x <= 100.0, Errc::parameter, "noise percentage must be in [0,100]");
  return {CorruptionKind::mult_noise, x, JointMask::all(), seed,
          "mult:" + std::to_string(static_cast<int>(x))};
}

inline CorruptionSpec subst_noise(double x, std::uint64_t seed) {
  require(x >= 0.0 && x <= 100.0, Errc::parameter, "noise percentage must be in [0,100]");
  return {CorruptionKind::subst_noise, x, JointMask::all(), seed,
          "subst:" + std::to_string(static_cast<int>(x))};
}

/// Every coordinate v becomes v*u with u uniform on (1-x/100, 1+x/100),
/// independently per value. x=0 returns the input unchanged.
inline Dataset corrupt_multiplicative(const Dataset& d, double x, std::uint64_t seed) {
  require(x >= 0.0 && x <= 100.0, Errc::parameter, "noise percentage must be in [0,100]");
  if (x == 0.0) return d;
  Dataset out = d;
  Rng rng(mix_seed(seed, "mult"));
  const double half = x / 100.0;
  for (GaitSample& s : out.samples)
    for (Pose& p : s.frames)
      for (int j = 0; j < kJointCount; ++j)
        for (int a = 0; a < 3; ++a) p(j, a) *= rng.uniform(1.0 - half, 1.0 + half);
  return out;
}

/// Every coordinate is replaced with probability x/100 by a uniform draw from
/// [0,1]. The input must already be min-max normalized to [0,1] per axis
/// (see minmax_normalize); x=100 yields fully random data.
inline Dataset corrupt_substitution(const Dataset& d, double x, std::uint64_t seed) {
  require(x >= 0.0 && x <= 100.0, Errc::parameter, "noise percentage must be in [0,100]");
  if (x == 0.0) return d;
  Dataset out = d;
  Rng rng(mix_seed(seed, "subst"));
  const double prob = x / 100.0;
  for (GaitSample& s : out.samples)
    for (Pose& p : s.frames)
      for (int j = 0; j < kJointCount; ++j)
        for (int a = 0; a < 3; ++a) {
          const double roll = rng.uniform();
          const double draw = rng.uniform();  // always drawn: stream independent of data
          if (roll < prob) p(j, a) = draw;
        }
  return out;
}

/// Per-axis min-max normalization of all coordinates to [0,1], computed over
/// the whole dataset (the precondition of substitution noise).
inline Dataset minmax_normalize(const Dataset& d) {
  require(!d.samples.empty(), Errc::empty_dataset, "cannot normalize an empty dataset");
  double lo[3], hi[3];
  for (int a = 0; a < 3; ++a) {
    lo[a] = std::numeric_limits<double>::infinity();
    hi[a] = -std::numeric_limits<double>::infinity();
  }
  for (const GaitSample& s : d.samples)
    for (const Pose& p : s.frames)
      for (int j = 0; j < kJointCount; ++j)
        for (int a = 0; a < 3; ++a) {
          lo[a] = std::min(lo[a], p(j, a));
          hi[a] = std::max(hi[a], p(j, a));
        }
  Dataset out = d;
  for (GaitSample& s : out.samples)
    for (Pose& p : s.frames)
      for (int j = 0; j < kJointCount; ++j)
        for (int a = 0; a < 3; ++a) {
          const double span = hi[a] - lo[a];
          p(j, a) = span > 0.0 ? (p(j, a) - lo[a]) / span : 0.0;
        }
  return out;
}

inline Dataset apply_corruption(const Dataset& d, const CorruptionSpec& c) {
  switch (c.kind) {
    case CorruptionKind::none: return d;
    case CorruptionKind::mult_noise: return corrupt_multiplicative(d, c.x, c.seed);
    case CorruptionKind::subst_noise: return corrupt_substitution(d, c.x, c.seed);
    case CorruptionKind::exclude_joints: return d;  // masking happens at vectorization
  }
  return d;
}

}  // namespace gaitlab
