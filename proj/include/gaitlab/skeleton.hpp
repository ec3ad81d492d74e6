#pragma once

#include <algorithm>
#include <array>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "gaitlab/error.hpp"

namespace gaitlab {

inline constexpr int kJointCount = 31;

/// Joint order of the 31-joint skeleton (root..rthumb). Index values double
/// as row indices in a pose matrix.
enum Joint : int {
  root = 0,
  lhipjoint,
  rhipjoint,
  lfemur,
  ltibia,
  lfoot,
  ltoes,
  lowerback,
  upperback,
  thorax,
  lowerneck,
  upperneck,
  lclavicle,
  rclavicle,
  head,
  lhumerus,
  lradius,
  lwrist,
  lhand,
  lfingers,
  lthumb,
  rfemur,
  rtibia,
  rfoot,
  rtoes,
  rhumerus,
  rradius,
  rwrist,
  rhand,
  rfingers,
  rthumb,
};

inline const std::array<std::string_view, kJointCount>& joint_names() {
  static const std::array<std::string_view, kJointCount> names = {
      "root",      "lhipjoint", "rhipjoint", "lfemur",   "ltibia",   "lfoot",
      "ltoes",     "lowerback", "upperback", "thorax",   "lowerneck", "upperneck",
      "lclavicle", "rclavicle", "head",      "lhumerus", "lradius",  "lwrist",
      "lhand",     "lfingers",  "lthumb",    "rfemur",   "rtibia",   "rfoot",
      "rtoes",     "rhumerus",  "rradius",   "rwrist",   "rhand",    "rfingers",
      "rthumb"};
  return names;
}

inline std::string_view joint_name(int j) { return joint_names().at(static_cast<std::size_t>(j)); }

/// Returns -1 when the name is unknown.
inline int joint_index(std::string_view name) {
  const auto& names = joint_names();
  for (int i = 0; i < kJointCount; ++i)
    if (names[static_cast<std::size_t>(i)] == name) return i;
  return -1;
}

enum class BodyGroup { head, pelvis, left_leg, right_leg, left_arm, right_arm, torso };

/// The seven groups partition all 31 joints.
inline const std::vector<int>& group_joints(BodyGroup g) {
  static const std::vector<int> head_g = {head};
  static const std::vector<int> pelvis_g = {root, lhipjoint, rhipjoint};
  static const std::vector<int> left_leg_g = {lfemur, ltibia, lfoot, ltoes};
  static const std::vector<int> right_leg_g = {rfemur, rtibia, rfoot, rtoes};
  static const std::vector<int> left_arm_g = {lhumerus, lradius, lwrist, lhand, lfingers, lthumb};
  static const std::vector<int> right_arm_g = {rhumerus, rradius, rwrist, rhand, rfingers, rthumb};
  static const std::vector<int> torso_g = {lowerback, upperback,  thorax,   lowerneck,
                                           upperneck, lclavicle, rclavicle};
  switch (g) {
    case BodyGroup::head: return head_g;
    case BodyGroup::pelvis: return pelvis_g;
    case BodyGroup::left_leg: return left_leg_g;
    case BodyGroup::right_leg: return right_leg_g;
    case BodyGroup::left_arm: return left_arm_g;
    case BodyGroup::right_arm: return right_arm_g;
    case BodyGroup::torso: return torso_g;
  }
  fail(Errc::parameter, "unknown body group");
}

inline std::string_view group_name(BodyGroup g) {
  switch (g) {
    case BodyGroup::head: return "head";
    case BodyGroup::pelvis: return "pelvis";
    case BodyGroup::left_leg: return "left_leg";
    case BodyGroup::right_leg: return "right_leg";
    case BodyGroup::left_arm: return "left_arm";
    case BodyGroup::right_arm: return "right_arm";
    case BodyGroup::torso: return "torso";
  }
  return "?";
}

/// Non-empty sorted subset of joint indices selecting which joints enter a
/// vectorized representation.
class JointMask {
 public:
  JointMask() : indices_{} {}

  static JointMask all() {
    std::vector<int> idx(kJointCount);
    for (int i = 0; i < kJointCount; ++i) idx[static_cast<std::size_t>(i)] = i;
    return JointMask(std::move(idx));
  }

  static JointMask of(std::vector<int> joints) { return JointMask(std::move(joints)); }

  static JointMask of(std::initializer_list<int> joints) {
    return JointMask(std::vector<int>(joints));
  }

  /// Everything except `dropped`; errors out when nothing remains.
  static JointMask excluding(const std::vector<int>& dropped) {
    std::vector<int> idx;
    for (int i = 0; i < kJointCount; ++i)
      if (std::find(dropped.begin(), dropped.end(), i) == dropped.end()) idx.push_back(i);
    return JointMask(std::move(idx));
  }

  const std::vector<int>& indices() const { return indices_; }
  std::size_t size() const { return indices_.size(); }

  bool contains(int j) const {
    return std::binary_search(indices_.begin(), indices_.end(), j);
  }

  bool operator==(const JointMask& o) const { return indices_ == o.indices_; }

 private:
  explicit JointMask(std::vector<int> idx) : indices_(std::move(idx)) {
    std::sort(indices_.begin(), indices_.end());
    indices_.erase(std::unique(indices_.begin(), indices_.end()), indices_.end());
    require(!indices_.empty(), Errc::parameter, "joint mask must be non-empty");
    require(indices_.front() >= 0 && indices_.back() < kJointCount, Errc::parameter,
            "joint index out of range 0..30");
  }

  std::vector<int> indices_;
};

}  // namespace gaitlab
