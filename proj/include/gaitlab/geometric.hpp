#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "gaitlab/sample.hpp"

namespace gaitlab {

enum class FeatureKind {
  bone_length,
  height,
  step_length,
  walk_speed,
  joint_angle,
  inter_joint_distance,
};

enum class Statistic { mean, std_dev, max };

/// One feature: a per-frame signal primitive collapsed by a statistic.
/// bone_length/inter_joint_distance take two joints, joint_angle three
/// (vertex in the middle), height/step_length/walk_speed none.
struct FeatureDescriptor {
  FeatureKind kind;
  int j1 = -1, j2 = -1, j3 = -1;
  Statistic stat = Statistic::mean;
};

struct GeometricFeatureSpec {
  std::vector<FeatureDescriptor> descriptors;

  std::size_t size() const { return descriptors.size(); }
};

namespace detail {

inline int joint_arity(FeatureKind k) {
  switch (k) {
    case FeatureKind::bone_length:
    case FeatureKind::inter_joint_distance: return 2;
    case FeatureKind::joint_angle: return 3;
    default: return 0;
  }
}

inline const char* kind_token(FeatureKind k) {
  switch (k) {
    case FeatureKind::bone_length: return "bone-length";
    case FeatureKind::height: return "height";
    case FeatureKind::step_length: return "step-length";
    case FeatureKind::walk_speed: return "walk-speed";
    case FeatureKind::joint_angle: return "joint-angle";
    case FeatureKind::inter_joint_distance: return "inter-joint-distance";
  }
  return "?";
}

inline const char* stat_token(Statistic s) {
  switch (s) {
    case Statistic::mean: return "mean";
    case Statistic::std_dev: return "std";
    case Statistic::max: return "max";
  }
  return "?";
}

inline double collapse(const std::vector<double>& signal, Statistic stat) {
  const double n = static_cast<double>(signal.size());
  switch (stat) {
    case Statistic::mean: {
      double sum = 0.0;
      for (double v : signal) sum += v;
      return sum / n;
    }
    case Statistic::std_dev: {
      double sum = 0.0;
      for (double v : signal) sum += v;
      const double mu = sum / n;
      double acc = 0.0;
      for (double v : signal) acc += (v - mu) * (v - mu);
      return std::sqrt(acc / n);
    }
    case Statistic::max: {
      double best = signal.front();
      for (double v : signal) best = std::max(best, v);
      return best;
    }
  }
  fail(Errc::parameter, "unknown statistic");
}

inline double horizontal_dist(const Pose& p, int a, int b) {
  const double dx = p(a, 0) - p(b, 0);
  const double dz = p(a, 2) - p(b, 2);
  return std::sqrt(dx * dx + dz * dz);
}

}  // namespace detail

inline void validate_spec(const GeometricFeatureSpec& spec) {
  for (const auto& d : spec.descriptors) {
    const int arity = detail::joint_arity(d.kind);
    const int js[3] = {d.j1, d.j2, d.j3};
    for (int i = 0; i < arity; ++i)
      require(js[i] >= 0 && js[i] < kJointCount, Errc::parameter,
              std::string(detail::kind_token(d.kind)) + " descriptor needs " +
                  std::to_string(arity) + " valid joints");
  }
}

/// Mean over frames of the Euclidean distance between two joints.
inline double bone_length(const GaitSample& s, int j1, int j2) {
  validate_sample(s);
  double sum = 0.0;
  for (const Pose& p : s.frames) sum += (p.row(j1) - p.row(j2)).norm();
  return sum / static_cast<double>(s.frames.size());
}

/// Step length = max over frames of the horizontal lfoot-rfoot distance.
/// Walk speed = horizontal root displacement first->last over cycle duration.
/// (ltoes would be the other defensible foot marker; lfoot is the convention here.)
inline std::pair<double, double> step_length_and_speed(const GaitSample& s, double frame_rate) {
  validate_sample(s);
  require(std::isfinite(frame_rate) && frame_rate > 0.0, Errc::configuration,
          "frame rate must be configured (> 0)");
  double step = 0.0;
  for (const Pose& p : s.frames) step = std::max(step, detail::horizontal_dist(p, lfoot, rfoot));
  const Pose& first = s.frames.front();
  const Pose& last = s.frames.back();
  const double dx = last(root, 0) - first(root, 0);
  const double dz = last(root, 2) - first(root, 2);
  const double duration = static_cast<double>(s.frame_count() - 1) / frame_rate;
  const double speed = std::sqrt(dx * dx + dz * dz) / duration;
  return {step, speed};
}

/// Per-frame angle at vertex b between rays b->a and b->c, in [0, pi].
inline std::vector<double> joint_angle_signal(const GaitSample& s, int a, int b, int c) {
  validate_sample(s);
  require(b != a && b != c, Errc::parameter, "angle vertex must differ from endpoints");
  std::vector<double> out;
  out.reserve(s.frames.size());
  for (std::size_t f = 0; f < s.frames.size(); ++f) {
    const Pose& p = s.frames[f];
    const Eigen::Vector3d u = (p.row(a) - p.row(b)).transpose();
    const Eigen::Vector3d v = (p.row(c) - p.row(b)).transpose();
    const double nu = u.norm(), nv = v.norm();
    require(nu > 0.0 && nv > 0.0, Errc::degenerate_geometry,
            "zero-length limb vector at frame " + std::to_string(f));
    const double cosv = std::clamp(u.dot(v) / (nu * nv), -1.0, 1.0);
    out.push_back(std::acos(cosv));
  }
  return out;
}

/// Mean over frames of the vertical joint span (max y - min y).
inline double body_height(const GaitSample& s) {
  validate_sample(s);
  double sum = 0.0;
  for (const Pose& p : s.frames) sum += p.col(1).maxCoeff() - p.col(1).minCoeff();
  return sum / static_cast<double>(s.frames.size());
}

/// One value per descriptor, in spec order; statistics collapse the per-frame
/// signal (walk-speed is a per-cycle scalar, so any statistic returns it).
inline Eigen::VectorXd extract_geometric(const GaitSample& s, const GeometricFeatureSpec& spec,
                                         double frame_rate) {
  validate_spec(spec);
  Eigen::VectorXd out(static_cast<Eigen::Index>(spec.descriptors.size()));
  std::vector<double> signal;
  Eigen::Index i = 0;
  for (const auto& d : spec.descriptors) {
    signal.clear();
    switch (d.kind) {
      case FeatureKind::bone_length:
      case FeatureKind::inter_joint_distance:
        for (const Pose& p : s.frames) signal.push_back((p.row(d.j1) - p.row(d.j2)).norm());
        break;
      case FeatureKind::height:
        for (const Pose& p : s.frames) signal.push_back(p.col(1).maxCoeff() - p.col(1).minCoeff());
        break;
      case FeatureKind::step_length:
        for (const Pose& p : s.frames) signal.push_back(detail::horizontal_dist(p, lfoot, rfoot));
        break;
      case FeatureKind::walk_speed:
        signal.assign(s.frames.size(), step_length_and_speed(s, frame_rate).second);
        break;
      case FeatureKind::joint_angle:
        signal = joint_angle_signal(s, d.j1, d.j2, d.j3);
        break;
    }
    out(i++) = detail::collapse(signal, d.stat);
  }
  return out;
}

// --- spec file format: one descriptor per line, `<kind> [joints...] <stat>` ---

inline GeometricFeatureSpec parse_feature_spec(std::istream& is) {
  GeometricFeatureSpec spec;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::string kind_tok;
    if (!(ls >> kind_tok) || kind_tok[0] == '#') continue;
    FeatureDescriptor d;
    if (kind_tok == "bone-length") d.kind = FeatureKind::bone_length;
    else if (kind_tok == "height") d.kind = FeatureKind::height;
    else if (kind_tok == "step-length") d.kind = FeatureKind::step_length;
    else if (kind_tok == "walk-speed") d.kind = FeatureKind::walk_speed;
    else if (kind_tok == "joint-angle" || kind_tok == "angle") d.kind = FeatureKind::joint_angle;
    else if (kind_tok == "inter-joint-distance" || kind_tok == "dist")
      d.kind = FeatureKind::inter_joint_distance;
    else
      fail(Errc::parse, "spec line " + std::to_string(lineno) + ": unknown feature kind '" +
                            kind_tok + "'");
    int* slots[3] = {&d.j1, &d.j2, &d.j3};
    for (int i = 0; i < detail::joint_arity(d.kind); ++i) {
      std::string jn;
      require(static_cast<bool>(ls >> jn), Errc::parse,
              "spec line " + std::to_string(lineno) + ": missing joint name");
      *slots[i] = joint_index(jn);
      require(*slots[i] >= 0, Errc::parse,
              "spec line " + std::to_string(lineno) + ": unknown joint '" + jn + "'");
    }
    std::string stat_tok;
    require(static_cast<bool>(ls >> stat_tok), Errc::parse,
            "spec line " + std::to_string(lineno) + ": missing statistic");
    if (stat_tok == "mean") d.stat = Statistic::mean;
    else if (stat_tok == "std") d.stat = Statistic::std_dev;
    else if (stat_tok == "max") d.stat = Statistic::max;
    else
      fail(Errc::parse,
           "spec line " + std::to_string(lineno) + ": unknown statistic '" + stat_tok + "'");
    spec.descriptors.push_back(d);
  }
  validate_spec(spec);
  return spec;
}

inline GeometricFeatureSpec parse_feature_spec(const std::filesystem::path& path) {
  std::ifstream is(path);
  require(is.good(), Errc::io, "cannot open feature spec '" + path.string() + "'");
  return parse_feature_spec(is);
}

inline void write_feature_spec(const GeometricFeatureSpec& spec, std::ostream& os) {
  for (const auto& d : spec.descriptors) {
    os << detail::kind_token(d.kind);
    const int js[3] = {d.j1, d.j2, d.j3};
    for (int i = 0; i < detail::joint_arity(d.kind); ++i) os << ' ' << joint_name(js[i]);
    os << ' ' << detail::stat_token(d.stat) << '\n';
  }
}

inline std::string feature_spec_to_string(const GeometricFeatureSpec& spec) {
  std::ostringstream os;
  write_feature_spec(spec, os);
  return os.str();
}

/// Lower-limb preset: hip/knee/ankle angle statistics plus step length and
/// walk speed (Ball/Andersson-style coverage).
inline GeometricFeatureSpec preset_lower_body() {
  GeometricFeatureSpec spec;
  auto angle = [&](int a, int b, int c) {
    for (Statistic st : {Statistic::mean, Statistic::std_dev, Statistic::max})
      spec.descriptors.push_back({FeatureKind::joint_angle, a, b, c, st});
  };
  angle(root, lhipjoint, lfemur);   // hip
  angle(root, rhipjoint, rfemur);
  angle(lhipjoint, lfemur, ltibia); // knee
  angle(rhipjoint, rfemur, rtibia);
  angle(lfemur, ltibia, lfoot);     // ankle
  angle(rfemur, rtibia, rfoot);
  spec.descriptors.push_back({FeatureKind::step_length, -1, -1, -1, Statistic::max});
  spec.descriptors.push_back({FeatureKind::walk_speed, -1, -1, -1, Statistic::mean});
  return spec;
}

/// Broad preset: bone lengths, height, eight angle signals and six
/// inter-joint distances with mean/std/max (Dikovski-style coverage).
inline GeometricFeatureSpec preset_broad() {
  GeometricFeatureSpec spec;
  auto bone = [&](int a, int b) {
    spec.descriptors.push_back({FeatureKind::bone_length, a, b, -1, Statistic::mean});
  };
  bone(lhipjoint, lfemur);
  bone(rhipjoint, rfemur);
  bone(lfemur, ltibia);
  bone(rfemur, rtibia);
  bone(lclavicle, lhumerus);
  bone(rclavicle, rhumerus);
  bone(lhumerus, lradius);
  bone(rhumerus, rradius);
  bone(root, thorax);
  bone(thorax, head);
  spec.descriptors.push_back({FeatureKind::height, -1, -1, -1, Statistic::mean});
  auto angle = [&](int a, int b, int c) {
    for (Statistic st : {Statistic::mean, Statistic::std_dev, Statistic::max})
      spec.descriptors.push_back({FeatureKind::joint_angle, a, b, c, st});
  };
  angle(root, lhipjoint, lfemur);
  angle(root, rhipjoint, rfemur);
  angle(lhipjoint, lfemur, ltibia);
  angle(rhipjoint, rfemur, rtibia);
  angle(lfemur, ltibia, lfoot);
  angle(rfemur, rtibia, rfoot);
  angle(lclavicle, lhumerus, lradius);
  angle(rclavicle, rhumerus, rradius);
  auto dist = [&](int a, int b) {
    for (Statistic st : {Statistic::mean, Statistic::std_dev, Statistic::max})
      spec.descriptors.push_back({FeatureKind::inter_joint_distance, a, b, -1, st});
  };
  dist(lfoot, rfoot);
  dist(lradius, rradius);
  dist(lradius, lhipjoint);
  dist(rradius, rhipjoint);
  dist(lfemur, rfemur);
  dist(head, lfoot);
  spec.descriptors.push_back({FeatureKind::step_length, -1, -1, -1, Statistic::max});
  spec.descriptors.push_back({FeatureKind::walk_speed, -1, -1, -1, Statistic::mean});
  return spec;
}

}  // namespace gaitlab
