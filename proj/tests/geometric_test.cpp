#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "gaitlab/geometric.hpp"
#include "gaitlab/synthetic.hpp"
#include "support/oracles.hpp"

using namespace gaitlab;

namespace {

GaitSample static_sample(int frames = 4) {
  GaitSample s;
  s.label = "s";
  Pose p = Pose::Zero();
  for (int j = 0; j < kJointCount; ++j) {
    p(j, 0) = 0.05 * j;
    p(j, 1) = 1.0 + 0.02 * j;
  }
  s.frames.assign(static_cast<std::size_t>(frames), p);
  return s;
}

GaitSample rigid_transform(const GaitSample& s, double angle, const Eigen::Vector3d& t) {
  const double c = std::cos(angle), sn = std::sin(angle);
  GaitSample out = s;
  for (Pose& p : out.frames)
    for (int j = 0; j < kJointCount; ++j) {
      const double x = p(j, 0), z = p(j, 2);
      p(j, 0) = c * x + sn * z + t.x();
      p(j, 1) += t.y();
      p(j, 2) = -sn * x + c * z + t.z();
    }
  return out;
}

}  // namespace

TEST(BoneLength, Basics) {
  GaitSample s = static_sample();
  EXPECT_DOUBLE_EQ(bone_length(s, lfemur, lfemur), 0.0);
  for (Pose& p : s.frames) {
    p.row(root) = Eigen::RowVector3d(0, 0, 0);
    p.row(lowerback) = Eigen::RowVector3d(0, 0.5, 0);
  }
  EXPECT_DOUBLE_EQ(bone_length(s, root, lowerback), 0.5);
}

TEST(BoneLength, MatchesPerFrameOracle) {
  const Dataset d = synthesize_dataset(1, 1, 3);
  const GaitSample& s = d.samples[0];
  double want = 0.0;
  for (const Pose& p : s.frames) want += (p.row(lfemur) - p.row(ltibia)).norm();
  want /= static_cast<double>(s.frames.size());
  EXPECT_NEAR(bone_length(s, lfemur, ltibia), want, 1e-12);
}

TEST(StepAndSpeed, MotionlessSample) {
  GaitSample s = static_sample();
  for (Pose& p : s.frames) {
    p.row(lfoot) = Eigen::RowVector3d(0.0, 0.1, 0.15);
    p.row(rfoot) = Eigen::RowVector3d(0.3, 0.1, -0.25);
  }
  const auto [step, speed] = step_length_and_speed(s, 120.0);
  EXPECT_DOUBLE_EQ(speed, 0.0);
  EXPECT_NEAR(step, std::sqrt(0.3 * 0.3 + 0.4 * 0.4), 1e-12);
}

TEST(StepAndSpeed, SpeedFromDisplacementOverDuration) {
  GaitSample s;
  s.label = "v";
  const int F = 121;  // 1.0 s at 120 Hz
  for (int f = 0; f < F; ++f) {
    Pose p = Pose::Zero();
    p(root, 0) = 1.2 * static_cast<double>(f) / static_cast<double>(F - 1);
    p(root, 1) = 1.0;
    s.frames.push_back(p);
  }
  const auto [step, speed] = step_length_and_speed(s, 120.0);
  (void)step;
  EXPECT_NEAR(speed, 1.2, 1e-12);
}

TEST(StepAndSpeed, FrameRateRequired) {
  const GaitSample s = static_sample();
  EXPECT_THROW(step_length_and_speed(s, 0.0), Error);
  try {
    step_length_and_speed(s, std::nan(""));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), Errc::configuration);
  }
}

TEST(StepAndSpeed, MatchesBruteForceScan) {
  const Dataset d = synthesize_dataset(1, 2, 21);
  for (const GaitSample& s : d.samples) {
    double best = 0.0;
    for (const Pose& p : s.frames) {
      const double dx = p(lfoot, 0) - p(rfoot, 0);
      const double dz = p(lfoot, 2) - p(rfoot, 2);
      best = std::max(best, std::sqrt(dx * dx + dz * dz));
    }
    const Eigen::RowVector3d disp = s.frames.back().row(root) - s.frames.front().row(root);
    const double dur = static_cast<double>(s.frame_count() - 1) / d.frame_rate;
    const double want_speed = std::hypot(disp(0), disp(2)) / dur;
    const auto [step, speed] = step_length_and_speed(s, d.frame_rate);
    EXPECT_NEAR(step, best, 1e-12);
    EXPECT_NEAR(speed, want_speed, 1e-12);
  }
}

TEST(JointAngle, CollinearAndRightAngle) {
  GaitSample s = static_sample(2);
  for (Pose& p : s.frames) {
    p.row(lhipjoint) = Eigen::RowVector3d(0, 2, 0);
    p.row(lfemur) = Eigen::RowVector3d(0, 1, 0);
    p.row(ltibia) = Eigen::RowVector3d(0, 0, 0);
  }
  for (double a : joint_angle_signal(s, lhipjoint, lfemur, ltibia)) EXPECT_NEAR(a, M_PI, 1e-12);
  for (Pose& p : s.frames) p.row(ltibia) = Eigen::RowVector3d(1, 1, 0);
  for (double a : joint_angle_signal(s, lhipjoint, lfemur, ltibia))
    EXPECT_NEAR(a, M_PI / 2.0, 1e-12);
}

TEST(JointAngle, MatchesTrigOracle) {
  const Dataset d = synthesize_dataset(1, 1, 4);
  const GaitSample& s = d.samples[0];
  const std::vector<double> got = joint_angle_signal(s, lhipjoint, lfemur, ltibia);
  for (std::size_t f = 0; f < s.frames.size(); ++f) {
    const Pose& p = s.frames[f];
    const Eigen::Vector3d u = (p.row(lhipjoint) - p.row(lfemur)).transpose();
    const Eigen::Vector3d v = (p.row(ltibia) - p.row(lfemur)).transpose();
    const double want = std::acos(std::clamp(u.dot(v) / (u.norm() * v.norm()), -1.0, 1.0));
    EXPECT_NEAR(got[f], want, 1e-9);
    EXPECT_GE(got[f], 0.0);
    EXPECT_LE(got[f], M_PI);
  }
}

TEST(JointAngle, DegenerateGeometryNamesFrame) {
  GaitSample s = static_sample(3);
  s.frames[1].row(lfemur) = s.frames[1].row(lhipjoint);  // zero-length limb in frame 1
  try {
    joint_angle_signal(s, lhipjoint, lfemur, ltibia);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), Errc::degenerate_geometry);
    EXPECT_NE(std::string(e.what()).find("frame 1"), std::string::npos);
  }
  EXPECT_THROW(joint_angle_signal(s, lfemur, lfemur, ltibia), Error);
}

TEST(Extract, EmptySpecAndSingleDescriptor) {
  const Dataset d = synthesize_dataset(1, 1, 8);
  const GaitSample& s = d.samples[0];
  EXPECT_EQ(extract_geometric(s, GeometricFeatureSpec{}, 120.0).size(), 0);
  GeometricFeatureSpec one;
  one.descriptors.push_back({FeatureKind::bone_length, lfemur, ltibia, -1, Statistic::mean});
  const Eigen::VectorXd v = extract_geometric(s, one, 120.0);
  ASSERT_EQ(v.size(), 1);
  EXPECT_DOUBLE_EQ(v(0), bone_length(s, lfemur, ltibia));
}

TEST(Extract, MatchesPerPrimitiveOracle) {
  const Dataset d = synthesize_dataset(1, 1, 13);
  const GaitSample& s = d.samples[0];
  GeometricFeatureSpec spec;
  spec.descriptors = {
      {FeatureKind::bone_length, lfemur, ltibia, -1, Statistic::mean},
      {FeatureKind::bone_length, rfemur, rtibia, -1, Statistic::mean},
      {FeatureKind::height, -1, -1, -1, Statistic::mean},
      {FeatureKind::height, -1, -1, -1, Statistic::max},
      {FeatureKind::step_length, -1, -1, -1, Statistic::max},
      {FeatureKind::walk_speed, -1, -1, -1, Statistic::mean},
      {FeatureKind::joint_angle, lhipjoint, lfemur, ltibia, Statistic::mean},
      {FeatureKind::joint_angle, lhipjoint, lfemur, ltibia, Statistic::std_dev},
      {FeatureKind::joint_angle, rhipjoint, rfemur, rtibia, Statistic::max},
      {FeatureKind::inter_joint_distance, lradius, rradius, -1, Statistic::std_dev},
  };
  const Eigen::VectorXd got = extract_geometric(s, spec, 120.0);
  ASSERT_EQ(got.size(), 10);

  auto stat_of = [](const std::vector<double>& sig, Statistic st) {
    const double n = static_cast<double>(sig.size());
    double mean = 0.0;
    for (double v : sig) mean += v;
    mean /= n;
    if (st == Statistic::mean) return mean;
    if (st == Statistic::max) return *std::max_element(sig.begin(), sig.end());
    double acc = 0.0;
    for (double v : sig) acc += (v - mean) * (v - mean);
    return std::sqrt(acc / n);
  };
  EXPECT_NEAR(got(0), bone_length(s, lfemur, ltibia), 1e-12);
  EXPECT_NEAR(got(1), bone_length(s, rfemur, rtibia), 1e-12);
  EXPECT_NEAR(got(2), body_height(s), 1e-12);
  {
    std::vector<double> spans;
    for (const Pose& p : s.frames) spans.push_back(p.col(1).maxCoeff() - p.col(1).minCoeff());
    EXPECT_NEAR(got(3), stat_of(spans, Statistic::max), 1e-12);
  }
  EXPECT_NEAR(got(4), step_length_and_speed(s, 120.0).first, 1e-12);
  EXPECT_NEAR(got(5), step_length_and_speed(s, 120.0).second, 1e-12);
  const std::vector<double> knee = joint_angle_signal(s, lhipjoint, lfemur, ltibia);
  EXPECT_NEAR(got(6), stat_of(knee, Statistic::mean), 1e-12);
  EXPECT_NEAR(got(7), stat_of(knee, Statistic::std_dev), 1e-12);
  const std::vector<double> rknee = joint_angle_signal(s, rhipjoint, rfemur, rtibia);
  EXPECT_NEAR(got(8), stat_of(rknee, Statistic::max), 1e-12);
  {
    std::vector<double> dists;
    for (const Pose& p : s.frames) dists.push_back((p.row(lradius) - p.row(rradius)).norm());
    EXPECT_NEAR(got(9), stat_of(dists, Statistic::std_dev), 1e-12);
  }
}

TEST(Extract, RigidInvarianceOfPresets) {
  const Dataset d = synthesize_dataset(1, 2, 31);
  Rng rng(5);
  for (const GeometricFeatureSpec& spec : {preset_lower_body(), preset_broad()}) {
    for (const GaitSample& s : d.samples) {
      const Eigen::VectorXd base = extract_geometric(normalize_sample(s), spec, 120.0);
      const double angle = rng.uniform(0.0, 2 * M_PI);
      const Eigen::Vector3d t(rng.uniform(-4, 4), rng.uniform(-1, 1), rng.uniform(-4, 4));
      const Eigen::VectorXd moved =
          extract_geometric(normalize_sample(rigid_transform(s, angle, t)), spec, 120.0);
      ASSERT_EQ(moved.size(), base.size());
      EXPECT_LT((moved - base).cwiseAbs().maxCoeff(), 1e-9);
    }
  }
}

TEST(Extract, RangesAreSane) {
  const Dataset d = synthesize_dataset(2, 2, 77);
  const GeometricFeatureSpec spec = preset_broad();
  for (const GaitSample& s : d.samples) {
    const Eigen::VectorXd v = extract_geometric(s, spec, 120.0);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      const auto& desc = spec.descriptors[static_cast<std::size_t>(i)];
      if (desc.kind == FeatureKind::joint_angle && desc.stat != Statistic::std_dev) {
        EXPECT_GE(v(i), 0.0);
        EXPECT_LE(v(i), M_PI + 1e-12);
      }
      if (desc.stat == Statistic::std_dev) EXPECT_GE(v(i), 0.0);
      if (desc.kind != FeatureKind::joint_angle) EXPECT_GE(v(i), 0.0);
    }
  }
}

TEST(SpecFile, RoundtripAndErrors) {
  const GeometricFeatureSpec spec = preset_broad();
  const std::string text = feature_spec_to_string(spec);
  std::istringstream in(text);
  const GeometricFeatureSpec back = parse_feature_spec(in);
  EXPECT_EQ(feature_spec_to_string(back), text);
  ASSERT_EQ(back.size(), spec.size());

  std::istringstream one("joint-angle lfemur ltibia lfoot mean\n");
  const GeometricFeatureSpec single = parse_feature_spec(one);
  ASSERT_EQ(single.size(), 1u);
  EXPECT_EQ(single.descriptors[0].kind, FeatureKind::joint_angle);
  EXPECT_EQ(single.descriptors[0].j2, static_cast<int>(ltibia));

  std::istringstream bad_joint("joint-angle nope ltibia lfoot mean\n");
  EXPECT_THROW(parse_feature_spec(bad_joint), Error);
  std::istringstream bad_kind("frobnicate lfoot mean\n");
  EXPECT_THROW(parse_feature_spec(bad_kind), Error);
  std::istringstream bad_stat("height median\n");
  EXPECT_THROW(parse_feature_spec(bad_stat), Error);
}
