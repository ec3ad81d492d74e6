#pragma once

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gaitlab/dataset_io.hpp"
#include "gaitlab/kmeans.hpp"
#include "gaitlab/model.hpp"

namespace gaitlab {

/// One recorded appearance: template plus when/where it was captured.
struct Incident {
  std::uint64_t id = 0;
  GaitTemplate tmpl;
  std::int64_t timestamp = 0;  // UTC seconds
  double lat = 0.0, lon = 0.0;
  std::string camera;
};

/// Append-only incident store with an index footer. Byte layout (all values
/// little-endian, doubles IEEE-754):
///   header:  "GAITGAL1" | u32 version=1 | u32 dim
///   record:  u64 id | i64 ts | f64 lat | f64 lon |
///            u32 camera_len | camera bytes | u32 label_len | label bytes |
///            u32 dim | dim x f64 features
///   footer:  u64 count | count x u64 record offsets | u64 footer_start |
///            "GAITGEND"
/// Adds rewrite the footer in place; the footer makes reopening O(index).
class Gallery {
 public:
  static constexpr char kMagic[9] = "GAITGAL1";
  static constexpr char kEndMagic[9] = "GAITGEND";

  static Gallery create(const std::filesystem::path& path, Eigen::Index dim) {
    require(dim >= 1, Errc::parameter, "gallery dimension must be >= 1");
    Gallery g;
    g.path_ = path;
    g.dim_ = dim;
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    require(os.good(), Errc::io, "cannot create gallery '" + path.string() + "'");
    os.write(kMagic, 8);
    write_u32(os, 1);
    write_u32(os, static_cast<std::uint32_t>(dim));
    g.footer_start_ = 16;
    g.write_footer(os);
    require(os.good(), Errc::io, "gallery create failed");
    return g;
  }

  static Gallery open(const std::filesystem::path& path) {
    Gallery g;
    g.path_ = path;
    std::ifstream is(path, std::ios::binary);
    require(is.good(), Errc::io, "cannot open gallery '" + path.string() + "'");

    char magic[8];
    is.read(magic, 8);
    require(is.good() && std::memcmp(magic, kMagic, 8) == 0, Errc::parse,
            "'" + path.string() + "' is not a gaitlab gallery");
    require(read_u32(is) == 1, Errc::parse, "unsupported gallery version");
    g.dim_ = static_cast<Eigen::Index>(read_u32(is));

    is.seekg(-16, std::ios::end);
    const std::uint64_t footer_start = read_u64(is);
    is.read(magic, 8);
    require(is.good() && std::memcmp(magic, kEndMagic, 8) == 0, Errc::parse,
            "gallery footer missing or damaged");
    is.seekg(static_cast<std::streamoff>(footer_start));
    const std::uint64_t count = read_u64(is);
    std::vector<std::uint64_t> offsets(count);
    for (auto& o : offsets) o = read_u64(is);
    require(is.good(), Errc::parse, "gallery index truncated");

    for (std::uint64_t off : offsets) {
      is.seekg(static_cast<std::streamoff>(off));
      Incident inc;
      inc.id = read_u64(is);
      inc.timestamp = static_cast<std::int64_t>(read_u64(is));
      inc.lat = read_f64(is);
      inc.lon = read_f64(is);
      inc.camera = read_string(is);
      inc.tmpl.label = read_string(is);
      const std::uint32_t dim = read_u32(is);
      require(static_cast<Eigen::Index>(dim) == g.dim_, Errc::parse,
              "gallery record dimension mismatch");
      inc.tmpl.features.resize(g.dim_);
      for (Eigen::Index i = 0; i < g.dim_; ++i) inc.tmpl.features(i) = read_f64(is);
      require(is.good(), Errc::parse, "gallery record truncated");
      g.incidents_.push_back(std::move(inc));
    }
    g.footer_start_ = footer_start;
    return g;
  }

  static Gallery open_or_create(const std::filesystem::path& path, Eigen::Index dim) {
    if (std::filesystem::exists(path)) {
      Gallery g = open(path);
      require(g.dim() == dim, Errc::shape, "existing gallery has dimension " +
                                               std::to_string(g.dim()) + ", model produces " +
                                               std::to_string(dim));
      return g;
    }
    return create(path, dim);
  }

  Eigen::Index dim() const { return dim_; }
  std::size_t size() const { return incidents_.size(); }
  const std::vector<Incident>& incidents() const { return incidents_; }

  /// Persists one incident; ids increase monotonically and survive reopen.
  std::uint64_t add(const GaitTemplate& tmpl, std::int64_t timestamp, double lat, double lon,
                    const std::string& camera) {
    require(tmpl.features.size() == dim_, Errc::shape,
            "template dimension " + std::to_string(tmpl.features.size()) +
                " != gallery dimension " + std::to_string(dim_));
    require(lat >= -90.0 && lat <= 90.0, Errc::parameter, "latitude out of [-90,90]");
    require(lon >= -180.0 && lon <= 180.0, Errc::parameter, "longitude out of [-180,180]");
    require(tmpl.features.allFinite(), Errc::parameter, "template has non-finite entries");

    Incident inc;
    inc.id = incidents_.empty() ? 0 : incidents_.back().id + 1;
    inc.tmpl = tmpl;
    inc.timestamp = timestamp;
    inc.lat = lat;
    inc.lon = lon;
    inc.camera = camera;

    std::fstream io(path_, std::ios::binary | std::ios::in | std::ios::out);
    require(io.good(), Errc::io, "cannot reopen gallery '" + path_.string() + "'");
    io.seekp(static_cast<std::streamoff>(footer_start_));
    offsets_.push_back(footer_start_);
    write_u64(io, inc.id);
    write_u64(io, static_cast<std::uint64_t>(inc.timestamp));
    write_f64(io, inc.lat);
    write_f64(io, inc.lon);
    write_string(io, inc.camera);
    write_string(io, inc.tmpl.label);
    write_u32(io, static_cast<std::uint32_t>(dim_));
    for (Eigen::Index i = 0; i < dim_; ++i) write_f64(io, inc.tmpl.features(i));
    footer_start_ = static_cast<std::uint64_t>(io.tellp());
    write_footer(io);
    io.flush();
    require(io.good(), Errc::io, "gallery append failed");

    incidents_.push_back(std::move(inc));
    return incidents_.back().id;
  }

 private:
  Gallery() = default;

  template <typename OS>
  void write_footer(OS& os) {
    write_u64(os, static_cast<std::uint64_t>(offsets_.size()));
    for (std::uint64_t o : offsets_) write_u64(os, o);
    write_u64(os, footer_start_);
    os.write(kEndMagic, 8);
  }

  template <typename OS>
  static void write_u32(OS& os, std::uint32_t v) {
    char b[4];
    std::memcpy(b, &v, 4);
    os.write(b, 4);
  }
  template <typename OS>
  static void write_u64(OS& os, std::uint64_t v) {
    char b[8];
    std::memcpy(b, &v, 8);
    os.write(b, 8);
  }
  template <typename OS>
  static void write_f64(OS& os, double v) {
    char b[8];
    std::memcpy(b, &v, 8);
    os.write(b, 8);
  }
  template <typename OS>
  static void write_string(OS& os, const std::string& s) {
    write_u32(os, static_cast<std::uint32_t>(s.size()));
    os.write(s.data(), static_cast<std::streamsize>(s.size()));
  }
  static std::uint32_t read_u32(std::istream& is) {
    char b[4];
    is.read(b, 4);
    std::uint32_t v;
    std::memcpy(&v, b, 4);
    return v;
  }
  static std::uint64_t read_u64(std::istream& is) {
    char b[8];
    is.read(b, 8);
    std::uint64_t v;
    std::memcpy(&v, b, 8);
    return v;
  }
  static double read_f64(std::istream& is) {
    char b[8];
    is.read(b, 8);
    double v;
    std::memcpy(&v, b, 8);
    return v;
  }
  static std::string read_string(std::istream& is) {
    const std::uint32_t len = read_u32(is);
    require(len <= (1u << 20), Errc::parse, "gallery string field too long");
    std::string s(len, '\0');
    is.read(s.data(), static_cast<std::streamsize>(len));
    return s;
  }

  std::filesystem::path path_;
  Eigen::Index dim_ = 0;
  std::vector<Incident> incidents_;
  std::vector<std::uint64_t> offsets_;
  std::uint64_t footer_start_ = 16;
};

enum class AcceptRule { threshold, topk, cluster };

struct QueryRule {
  AcceptRule rule = AcceptRule::topk;
  double tau = 0.0;   // threshold
  int k = 1;          // top-k
  int clusters = 2;   // K for the cluster rule
  std::uint64_t seed = 0;
  std::uint64_t exclude_id = UINT64_MAX;  // set when the query template came from the gallery
};

struct TraceEntry {
  std::uint64_t id = 0;
  double distance = 0.0;
  std::int64_t timestamp = 0;
  double lat = 0.0, lon = 0.0;
  std::string camera;
  std::string label;
};

/// Ranked accepted set for one query; distances are non-decreasing.
struct LocationTrace {
  std::string rule;
  std::vector<TraceEntry> accepted;
  bool clipped = false;  // top-k asked for more incidents than the gallery holds
};

/// Ranks the whole gallery by model distance (ties by incident id) and keeps
/// the incidents the acceptance rule admits. The cluster rule runs seeded
/// K-Means on gallery-plus-query features (whitened for Mahalanobis models)
/// and keeps the query's cluster. A larger threshold never loses an
/// already-accepted incident.
inline LocationTrace query(const Gallery& g, const FeatureModel& model, const GaitTemplate& q,
                           const QueryRule& rule) {
  require(g.size() > 0, Errc::empty_gallery, "query against an empty gallery");
  require(q.features.size() == model.d_out && g.dim() == model.d_out, Errc::shape,
          "query/gallery dimension does not match the model");

  struct Ranked {
    double dist;
    std::size_t idx;
  };
  std::vector<Ranked> ranked;
  ranked.reserve(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Incident& inc = g.incidents()[i];
    if (inc.id == rule.exclude_id) continue;
    ranked.push_back({template_distance(model, q, inc.tmpl), i});
  }
  std::sort(ranked.begin(), ranked.end(), [&](const Ranked& a, const Ranked& b) {
    if (a.dist != b.dist) return a.dist < b.dist;
    return g.incidents()[a.idx].id < g.incidents()[b.idx].id;
  });

  LocationTrace trace;
  std::size_t keep = 0;
  switch (rule.rule) {
    case AcceptRule::threshold: {
      trace.rule = "threshold:" + detail::fmt_double(rule.tau);
      while (keep < ranked.size() && ranked[keep].dist <= rule.tau) ++keep;
      break;
    }
    case AcceptRule::topk: {
      require(rule.k >= 1, Errc::parameter, "top-k needs k >= 1");
      trace.rule = "topk:" + std::to_string(rule.k);
      keep = static_cast<std::size_t>(rule.k);
      if (keep > ranked.size()) {
        keep = ranked.size();
        trace.clipped = true;
      }
      break;
    }
    case AcceptRule::cluster: {
      trace.rule = "cluster:" + std::to_string(rule.clusters);
      const Eigen::Index n = static_cast<Eigen::Index>(ranked.size());
      Eigen::MatrixXd feats(n + 1, model.d_out);
      for (Eigen::Index i = 0; i < n; ++i)
        feats.row(i) = g.incidents()[ranked[static_cast<std::size_t>(i)].idx]
                           .tmpl.features.transpose();
      feats.row(n) = q.features.transpose();
      const Eigen::MatrixXd white = whiten_rows(model, feats);
      const int k = std::min(rule.clusters, static_cast<int>(n) + 1);
      require(k >= 1, Errc::parameter, "cluster rule needs K >= 1");
      const ClusteringResult res = kmeans(white, k, rule.seed);
      const int own = res.assignment.back();
      // ranked order is ascending by distance, so the accepted set stays sorted
      std::vector<Ranked> in_cluster;
      for (std::size_t i = 0; i < ranked.size(); ++i)
        if (res.assignment[i] == own) in_cluster.push_back(ranked[i]);
      ranked = std::move(in_cluster);
      keep = ranked.size();
      break;
    }
  }

  trace.accepted.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) {
    const Incident& inc = g.incidents()[ranked[i].idx];
    trace.accepted.push_back(
        {inc.id, ranked[i].dist, inc.timestamp, inc.lat, inc.lon, inc.camera, inc.tmpl.label});
  }
  return trace;
}

/// Offline threshold calibration: the given quantile of same-identity pair
/// distances on a labeled validation set.
inline double calibrate_threshold(const FeatureModel& model, const Eigen::MatrixXd& templates,
                                  const std::vector<std::string>& labels, double quantile = 0.9) {
  require(quantile >= 0.0 && quantile <= 1.0, Errc::parameter, "quantile must be in [0,1]");
  const DistanceFn dist = model_distance(model);
  std::vector<double> same;
  for (Eigen::Index i = 0; i < templates.rows(); ++i)
    for (Eigen::Index j = i + 1; j < templates.rows(); ++j)
      if (labels[static_cast<std::size_t>(i)] == labels[static_cast<std::size_t>(j)])
        same.push_back(dist(templates.row(i).transpose(), templates.row(j).transpose()));
  require(!same.empty(), Errc::undefined_metric, "no same-identity pairs to calibrate on");
  std::sort(same.begin(), same.end());
  const double pos = quantile * static_cast<double>(same.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, same.size() - 1);
  const double w = pos - static_cast<double>(lo);
  return (1.0 - w) * same[lo] + w * same[hi];
}

inline nlohmann::json trace_to_json(const LocationTrace& t) {
  nlohmann::json arr = nlohmann::json::array();
  for (const TraceEntry& e : t.accepted) {
    nlohmann::json je = {{"id", e.id},        {"distance", e.distance}, {"timestamp", e.timestamp},
                         {"lat", e.lat},      {"lon", e.lon},           {"camera", e.camera}};
    if (!e.label.empty()) je["label"] = e.label;
    arr.push_back(std::move(je));
  }
  return arr;
}

inline void write_trace_json(const LocationTrace& t, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  require(os.good(), Errc::io, "cannot open '" + path.string() + "' for writing");
  os << trace_to_json(t).dump(2) << '\n';
  require(os.good(), Errc::io, "trace write failed");
}

}  // namespace gaitlab
