#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "gaitlab/rng.hpp"
#include "gaitlab/sample.hpp"

namespace gaitlab {

namespace detail {

constexpr double kTwoPi = 6.283185307179586476925287;

// Per-identity gait signature: body measurements plus sinusoidal swing
// parameters. Identity differences (body scale, amplitudes, cadence) must
// dominate the per-sample jitter below for the generator to be usable.
struct WalkerIdentity {
  double height;      // body scale factor
  double speed;       // m/s
  double cycle_s;     // cycle duration
  double hip_amp;     // rad
  double knee_amp;    // rad
  double arm_amp;     // rad
  double sway_amp;    // m
  double bob_amp;     // m
  double lean;        // rad, forward torso lean
  double elbow_flex;  // rad
  double arm_phase;
  double knee_phase;
  double leg_asym;    // right/left amplitude ratio
  double bone[8];     // femur, tibia, foot, spine, neck, humerus, radius, pelvis width
};

inline WalkerIdentity draw_identity(Rng& rng) {
  WalkerIdentity w;
  w.height = rng.uniform(0.90, 1.10);
  w.speed = rng.uniform(1.05, 1.50) * w.height;
  w.cycle_s = rng.uniform(0.90, 1.30);
  w.hip_amp = rng.uniform(0.32, 0.55);
  w.knee_amp = rng.uniform(0.40, 0.80);
  w.arm_amp = rng.uniform(0.15, 0.50);
  w.sway_amp = rng.uniform(0.012, 0.045);
  w.bob_amp = rng.uniform(0.012, 0.035);
  w.lean = rng.uniform(-0.04, 0.12);
  w.elbow_flex = rng.uniform(0.15, 0.60);
  w.arm_phase = rng.uniform(-0.30, 0.30);
  w.knee_phase = rng.uniform(0.10, 0.50);
  w.leg_asym = rng.uniform(0.96, 1.04);
  for (double& b : w.bone) b = rng.uniform(0.95, 1.05);
  return w;
}

// Per-sample nuisance: phase of the detected cycle, amplitude/speed jitter,
// measurement noise.
struct SampleJitter {
  double phase;
  double hip_mul, knee_mul, arm_mul;
  double speed_mul, duration_mul;
  double noise_sigma;
};

inline SampleJitter draw_jitter(Rng& rng) {
  SampleJitter j;
  j.phase = rng.uniform(-0.70, 0.70);
  j.hip_mul = rng.uniform(0.88, 1.12);
  j.knee_mul = rng.uniform(0.88, 1.12);
  j.arm_mul = rng.uniform(0.88, 1.12);
  j.speed_mul = rng.uniform(0.93, 1.07);
  j.duration_mul = rng.uniform(0.92, 1.08);
  j.noise_sigma = 0.004;
  return j;
}

inline GaitSample synthesize_cycle(const WalkerIdentity& w, const SampleJitter& jit,
                                   const std::string& label, double fps, Rng& noise_rng) {
  const double h = w.height;
  const double duration = w.cycle_s * jit.duration_mul;
  const int F = std::max(20, static_cast<int>(std::lround(duration * fps)));
  const double speed = w.speed * jit.speed_mul;
  const double hip_amp = w.hip_amp * jit.hip_mul;
  const double knee_amp = w.knee_amp * jit.knee_mul;
  const double arm_amp = w.arm_amp * jit.arm_mul;

  const double femur = 0.41 * h * w.bone[0];
  const double tibia = 0.40 * h * w.bone[1];
  const double foot_len = 0.145 * h * w.bone[2];
  const double toe_len = 0.06 * h * w.bone[2];
  const double spine_seg = 0.105 * h * w.bone[3];
  const double neck_seg = 0.075 * h * w.bone[4];
  const double humerus = 0.27 * h * w.bone[5];
  const double radius = 0.25 * h * w.bone[6];
  const double hip_w = 0.094 * h * w.bone[7];
  const double shoulder_w = 0.088 * h * w.bone[7];

  GaitSample s;
  s.label = label;
  s.frames.resize(static_cast<std::size_t>(F));

  for (int f = 0; f < F; ++f) {
    const double tau = static_cast<double>(f) / static_cast<double>(F - 1);
    const double theta = kTwoPi * tau + jit.phase;
    const double t_sec = static_cast<double>(f) / fps;
    Pose& p = s.frames[static_cast<std::size_t>(f)];

    const Eigen::Vector3d root_pos(speed * t_sec,
                                   h * 0.985 + w.bob_amp * std::sin(2.0 * theta),
                                   w.sway_amp * std::sin(theta));
    p.row(root) = root_pos;

    // Legs: planar two-link chains swinging in the sagittal plane.
    auto leg = [&](double phase_off, double side_z, double amp_scale, int hip_j, int knee_j,
                   int ankle_j, int foot_j, int toes_j) {
      const double th = theta + phase_off;
      const double alpha = hip_amp * amp_scale * std::sin(th);
      const double beta =
          knee_amp * amp_scale * 0.5 * (1.0 - std::cos(th - w.knee_phase));
      const Eigen::Vector3d hip = root_pos + Eigen::Vector3d(0.0, -0.035 * h, side_z * hip_w);
      const Eigen::Vector3d knee =
          hip + femur * Eigen::Vector3d(std::sin(alpha), -std::cos(alpha), 0.0);
      const double shank = alpha - beta;
      const Eigen::Vector3d ankle =
          knee + tibia * Eigen::Vector3d(std::sin(shank), -std::cos(shank), 0.0);
      const double pitch = 0.30 - 0.25 * std::sin(th);
      const Eigen::Vector3d foot_p =
          ankle + foot_len * Eigen::Vector3d(std::cos(pitch), -std::sin(pitch), 0.0);
      const Eigen::Vector3d toes_p =
          foot_p + toe_len * Eigen::Vector3d(std::cos(0.5 * pitch), -std::sin(0.5 * pitch), 0.0);
      p.row(hip_j) = hip;
      p.row(knee_j) = knee;
      p.row(ankle_j) = ankle;
      p.row(foot_j) = foot_p;
      p.row(toes_j) = toes_p;
    };
    leg(0.0, +1.0, 1.0, lhipjoint, lfemur, ltibia, lfoot, ltoes);
    leg(kTwoPi / 2.0, -1.0, w.leg_asym, rhipjoint, rfemur, rtibia, rfoot, rtoes);

    // Spine column with forward lean; head rides on top.
    const Eigen::Vector3d up(std::sin(w.lean), std::cos(w.lean), 0.0);
    const Eigen::Vector3d lower_back = root_pos + spine_seg * up;
    const Eigen::Vector3d upper_back = lower_back + spine_seg * up;
    const Eigen::Vector3d thorax_p = upper_back + 0.95 * spine_seg * up;
    const Eigen::Vector3d lower_neck = thorax_p + neck_seg * up;
    const Eigen::Vector3d upper_neck = lower_neck + 0.66 * neck_seg * up;
    const Eigen::Vector3d head_p = upper_neck + 1.25 * neck_seg * up;
    p.row(lowerback) = lower_back;
    p.row(upperback) = upper_back;
    p.row(thorax) = thorax_p;
    p.row(lowerneck) = lower_neck;
    p.row(upperneck) = upper_neck;
    p.row(head) = head_p;

    const double twist = 0.006 * std::sin(theta);
    p.row(lclavicle) = thorax_p + Eigen::Vector3d(0.01 * h, 0.02 * h, shoulder_w + twist);
    p.row(rclavicle) = thorax_p + Eigen::Vector3d(0.01 * h, 0.02 * h, -shoulder_w + twist);

    // Arms counter-swing the same-side leg.
    auto arm = [&](double phase_off, double side_z, int shoulder_j, int elbow_j, int wrist_j,
                   int hand_root_j, int hand_j, int fingers_j, int thumb_j) {
      const double gamma = arm_amp * std::sin(theta + phase_off + w.arm_phase);
      const double fore = gamma + w.elbow_flex * (1.0 + 0.25 * std::sin(theta + phase_off));
      const Eigen::Vector3d shoulder = p.row(shoulder_j);
      const Eigen::Vector3d elbow =
          shoulder +
          humerus * Eigen::Vector3d(std::sin(gamma), -std::cos(gamma), side_z * 0.06);
      const Eigen::Vector3d wrist =
          elbow + radius * Eigen::Vector3d(std::sin(fore), -std::cos(fore), side_z * 0.03);
      const Eigen::Vector3d hand_dir(std::sin(fore), -std::cos(fore), 0.0);
      const Eigen::Vector3d hand_root = wrist + 0.050 * h * hand_dir;
      const Eigen::Vector3d hand_p = hand_root + 0.045 * h * hand_dir;
      const Eigen::Vector3d fingers_p = hand_p + 0.040 * h * hand_dir;
      const Eigen::Vector3d thumb_p =
          hand_root + h * Eigen::Vector3d(0.020, -0.010, side_z * 0.025);
      p.row(elbow_j) = elbow;
      p.row(wrist_j) = wrist;
      p.row(hand_root_j) = hand_root;
      p.row(hand_j) = hand_p;
      p.row(fingers_j) = fingers_p;
      p.row(thumb_j) = thumb_p;
    };
    arm(kTwoPi / 2.0, +1.0, lclavicle, lhumerus, lradius, lwrist, lhand, lfingers, lthumb);
    arm(0.0, -1.0, rclavicle, rhumerus, rradius, rwrist, rhand, rfingers, rthumb);

    for (int j = 0; j < kJointCount; ++j)
      for (int a = 0; a < 3; ++a) p(j, a) += jit.noise_sigma * noise_rng.normal();
  }
  return s;
}

}  // namespace detail

/// Deterministic desk-scale stand-in for a real MoCap corpus: each identity is
/// a random body plus limb-swing signature, each sample jitters the phase,
/// amplitudes and timing and adds measurement noise. Output samples are
/// normalized. Labels are "id0".."id<n-1>".
inline Dataset synthesize_dataset(int n_identities, int samples_per_identity,
                                  std::uint64_t seed) {
  require(n_identities >= 1 && samples_per_identity >= 1, Errc::parameter,
          "identity and per-identity sample counts must be >= 1");
  Dataset d;
  d.frame_rate = 120.0;
  d.samples.reserve(static_cast<std::size_t>(n_identities) *
                    static_cast<std::size_t>(samples_per_identity));
  for (int i = 0; i < n_identities; ++i) {
    Rng id_rng(mix_seed(mix_seed(seed, 0x1DULL), static_cast<std::uint64_t>(i)));
    const detail::WalkerIdentity ident = detail::draw_identity(id_rng);
    const std::string label = "id" + std::to_string(i);
    for (int k = 0; k < samples_per_identity; ++k) {
      Rng s_rng(mix_seed(mix_seed(seed, 0x5AULL),
                         static_cast<std::uint64_t>(i) * 1000003ULL +
                             static_cast<std::uint64_t>(k)));
      const detail::SampleJitter jit = detail::draw_jitter(s_rng);
      GaitSample s = detail::synthesize_cycle(ident, jit, label, d.frame_rate, s_rng);
      d.samples.push_back(normalize_sample(s));
    }
  }
  return d;
}

}  // namespace gaitlab
