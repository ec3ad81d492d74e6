#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "gaitlab/corruption.hpp"
#include "gaitlab/dataset_io.hpp"
#include "gaitlab/kmeans.hpp"
#include "gaitlab/metrics.hpp"
#include "gaitlab/model.hpp"
#include "gaitlab/split.hpp"

namespace gaitlab {

/// The four feature-space metrics computed per experiment cell.
struct FourMetrics {
  double dbi = 0.0;
  double sc = 0.0;
  double roc = 0.0;
  double pr = 0.0;
};

/// Percentage scores of a corrupted run against its clean baseline:
/// DBI 100*old/new, SC 100*(new+1)/(old+1), ROC 100*new/old, PR 100*new/old.
inline FourMetrics relative_scores(const FourMetrics& old_m, const FourMetrics& new_m) {
  require(new_m.dbi != 0.0, Errc::undefined_score, "DBI_new is zero");
  require(old_m.sc != -1.0, Errc::undefined_score, "SC_old is -1");
  require(old_m.roc != 0.0, Errc::undefined_score, "ROC_old is zero");
  require(old_m.pr != 0.0, Errc::undefined_score, "PR_old is zero");
  FourMetrics r;
  r.dbi = 100.0 * old_m.dbi / new_m.dbi;
  r.sc = 100.0 * (new_m.sc + 1.0) / (old_m.sc + 1.0);
  r.roc = 100.0 * new_m.roc / old_m.roc;
  r.pr = 100.0 * new_m.pr / old_m.pr;
  return r;
}

/// A method entry of a sweep. `name` keys the report rows.
struct MethodSpec {
  std::string name;
  Method method = Method::mmc;
  GeometricFeatureSpec geo;
  double variance_keep = 0.99;
};

struct HarnessOptions {
  JointMask mask = JointMask::all();
  int T = 32;
  std::uint64_t seed = 0;
  bool corrupt_learning = false;  // noise also hits the learning part
  bool stamp = false;             // wall-clock timestamp in metadata (breaks byte-identity)
};

struct ReportRow {
  std::string method;
  int config_learn = 0;
  int config_eval = 0;
  std::string corruption = "none";
  std::string metric;
  double value = 0.0;
  std::optional<double> relative;
};

struct RunMetadata {
  std::uint64_t seed = 0;
  int T = 32;
  std::string dataset_id;
  std::string timestamp;  // empty unless stamped
};

struct EvaluationReport {
  RunMetadata meta;
  std::vector<ReportRow> rows;
  std::vector<std::string> errors;  // per-cell failures; the run continues
};

inline FeatureModel fit_method(const MethodSpec& spec, const Dataset& data,
                               const std::vector<std::string>& learn_ids,
                               const JointMask& mask, int T) {
  VectorizationInfo vec{mask, T, data.frame_rate};
  switch (spec.method) {
    case Method::mmc: {
      const VectorizedSet learn = vectorize_subset(data, learn_ids, mask, T);
      return fit_mmc(learn.X, learn.labels, vec);
    }
    case Method::pcalda: {
      const VectorizedSet learn = vectorize_subset(data, learn_ids, mask, T);
      return fit_pcalda(learn.X, learn.labels, spec.variance_keep, vec);
    }
    case Method::geometric: return make_geometric_model(spec.geo, vec);
    case Method::raw: return make_raw_model(vec);
  }
  fail(Errc::parameter, "unknown method");
}

/// Templates of the given identities in the model's feature space, rows in
/// dataset order. Geometric features come straight from the samples.
inline Eigen::MatrixXd method_templates(const FeatureModel& model, const Dataset& data,
                                        const std::vector<std::string>& ids,
                                        std::vector<std::string>& labels_out) {
  std::vector<const GaitSample*> picked;
  for (const GaitSample& s : data.samples)
    if (std::find(ids.begin(), ids.end(), s.label) != ids.end()) picked.push_back(&s);
  require(!picked.empty(), Errc::parameter, "no samples match the requested identities");
  Eigen::MatrixXd T(static_cast<Eigen::Index>(picked.size()), model.d_out);
  labels_out.clear();
  labels_out.reserve(picked.size());
  for (std::size_t n = 0; n < picked.size(); ++n) {
    T.row(static_cast<Eigen::Index>(n)) = make_template(model, *picked[n]).features.transpose();
    labels_out.push_back(picked[n]->label);
  }
  return T;
}

inline FourMetrics evaluate_four(const Eigen::MatrixXd& T, const std::vector<std::string>& labels,
                                 const DistanceFn& distance) {
  FourMetrics m;
  m.dbi = davies_bouldin(T, labels, distance);
  m.sc = silhouette(T, labels, distance);
  m.roc = roc_auc(T, labels, distance);
  m.pr = pr_auc(T, labels, distance);
  return m;
}

namespace detail {

inline void push_four(std::vector<ReportRow>& rows, const std::string& method,
                      const SplitConfiguration& cfg, const std::string& corruption,
                      const FourMetrics& m, const std::optional<FourMetrics>& rel) {
  const int cl = static_cast<int>(cfg.learning.size());
  const int ce = static_cast<int>(cfg.evaluation.size());
  rows.push_back({method, cl, ce, corruption, "dbi", m.dbi,
                  rel ? std::optional<double>(rel->dbi) : std::nullopt});
  rows.push_back({method, cl, ce, corruption, "sc", m.sc,
                  rel ? std::optional<double>(rel->sc) : std::nullopt});
  rows.push_back({method, cl, ce, corruption, "roc_auc", m.roc,
                  rel ? std::optional<double>(rel->roc) : std::nullopt});
  rows.push_back({method, cl, ce, corruption, "pr_auc", m.pr,
                  rel ? std::optional<double>(rel->pr) : std::nullopt});
}

inline FourMetrics run_cell(const MethodSpec& method, const Dataset& learn_data,
                            const Dataset& eval_data, const SplitConfiguration& cfg,
                            const HarnessOptions& opt) {
  cfg.validate();
  const FeatureModel model = fit_method(method, learn_data, cfg.learning, opt.mask, opt.T);
  std::vector<std::string> labels;
  const Eigen::MatrixXd T = method_templates(model, eval_data, cfg.evaluation, labels);
  return evaluate_four(T, labels, model_distance(model));
}

}  // namespace detail

/// Runs every (method x configuration) cell: fit on the learning identities,
/// project the evaluation identities, compute the four metrics. Each
/// corruption is applied to the evaluation data (and optionally the learning
/// data) and reported with relative scores against the cell's clean baseline.
/// Substitution noise min-max-normalizes the whole dataset first, so its
/// baseline lives in normalized coordinates too. Per-cell failures are
/// recorded and the run continues.
inline EvaluationReport run_sweep(const std::vector<MethodSpec>& methods, const Dataset& data,
                                  const std::vector<SplitConfiguration>& sequence,
                                  const std::vector<CorruptionSpec>& corruptions,
                                  const HarnessOptions& opt) {
  require(!methods.empty() && !sequence.empty(), Errc::parameter,
          "sweep needs at least one method and one configuration");
  bool has_subst = false, has_mult = false;
  for (const auto& c : corruptions) {
    has_subst |= c.kind == CorruptionKind::subst_noise;
    has_mult |= c.kind == CorruptionKind::mult_noise;
    require(c.kind != CorruptionKind::exclude_joints, Errc::parameter,
            "joint exclusion runs through joint_exclusion_suite");
  }
  require(!(has_subst && has_mult), Errc::parameter,
          "one sweep mixes a single noise family (baselines differ)");

  const Dataset& base = has_subst ? minmax_normalize(data) : data;

  EvaluationReport report;
  report.meta.seed = opt.seed;
  report.meta.T = opt.T;
  {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(dataset_fingerprint(data)));
    report.meta.dataset_id = buf;
  }

  for (const MethodSpec& method : methods) {
    for (const SplitConfiguration& cfg : sequence) {
      const std::string cell_id = method.name + "/" + std::to_string(cfg.learning.size()) + "," +
                                  std::to_string(cfg.evaluation.size());
      FourMetrics clean;
      try {
        clean = detail::run_cell(method, base, base, cfg, opt);
      } catch (const Error& e) {
        report.errors.push_back(cell_id + ": " + e.what());
        continue;
      }
      detail::push_four(report.rows, method.name, cfg, "none", clean, std::nullopt);

      for (const CorruptionSpec& c : corruptions) {
        CorruptionSpec cell_corr = c;
        cell_corr.seed = mix_seed(opt.seed, cell_id + "|" + c.name);
        try {
          const Dataset corrupted = apply_corruption(base, cell_corr);
          const Dataset& learn_side = opt.corrupt_learning ? corrupted : base;
          const FourMetrics noisy = detail::run_cell(method, learn_side, corrupted, cfg, opt);
          detail::push_four(report.rows, method.name, cfg, c.name, noisy,
                            relative_scores(clean, noisy));
        } catch (const Error& e) {
          report.errors.push_back(cell_id + "/" + c.name + ": " + e.what());
        }
      }
    }
  }
  return report;
}

/// The 31 single-joint exclusions followed by the 14 group exclusions
/// (pelvis .. all-but-legs). Each entry maps the excluded thing's name to the
/// mask of joints KEPT.
inline std::vector<std::pair<std::string, JointMask>> default_exclusion_masks() {
  std::vector<std::pair<std::string, JointMask>> out;
  for (int j = 0; j < kJointCount; ++j)
    out.emplace_back(std::string(joint_name(j)), JointMask::excluding({j}));

  auto group = [](std::initializer_list<BodyGroup> gs) {
    std::vector<int> dropped;
    for (BodyGroup g : gs)
      for (int j : group_joints(g)) dropped.push_back(j);
    return dropped;
  };
  using G = BodyGroup;
  const std::vector<std::pair<std::string, std::vector<int>>> groups = {
      {"pelvis", group({G::pelvis})},
      {"left_leg", group({G::left_leg})},
      {"right_leg", group({G::right_leg})},
      {"left_arm", group({G::left_arm})},
      {"right_arm", group({G::right_arm})},
      {"torso", group({G::torso})},
      {"head_torso", group({G::head, G::torso})},
      {"both_legs", group({G::left_leg, G::right_leg})},
      {"both_arms", group({G::left_arm, G::right_arm})},
      {"legs_arms", group({G::left_leg, G::right_leg, G::left_arm, G::right_arm})},
      {"lower_body", group({G::pelvis, G::left_leg, G::right_leg})},
      {"upper_body", group({G::torso, G::head, G::left_arm, G::right_arm})},
      {"all_but_arms", group({G::pelvis, G::left_leg, G::right_leg, G::torso, G::head})},
      {"all_but_legs", group({G::pelvis, G::torso, G::head, G::left_arm, G::right_arm})},
  };
  for (const auto& [name, dropped] : groups)
    out.emplace_back("group:" + name, JointMask::excluding(dropped));
  return out;
}

/// Incomplete-data protocol at a fixed split: refit MMC per exclusion mask
/// (dimensionality changes, so zero-filling is not an option) and report the
/// four metrics plus relative scores against the no-exclusion baseline.
inline EvaluationReport joint_exclusion_suite(
    const Dataset& data, const SplitConfiguration& cfg, const HarnessOptions& opt,
    const std::vector<std::pair<std::string, JointMask>>& exclusions = default_exclusion_masks()) {
  cfg.validate();
  EvaluationReport report;
  report.meta.seed = opt.seed;
  report.meta.T = opt.T;
  {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(dataset_fingerprint(data)));
    report.meta.dataset_id = buf;
  }

  MethodSpec mmc_spec{"mmc", Method::mmc, {}, 0.99};
  HarnessOptions cell_opt = opt;
  cell_opt.mask = JointMask::all();
  const FourMetrics clean = detail::run_cell(mmc_spec, data, data, cfg, cell_opt);
  detail::push_four(report.rows, "mmc", cfg, "exclude:none", clean,
                    relative_scores(clean, clean));  // baseline: all scores exactly 100

  for (const auto& [name, mask] : exclusions) {
    cell_opt.mask = mask;
    try {
      const FourMetrics got = detail::run_cell(mmc_spec, data, data, cfg, cell_opt);
      detail::push_four(report.rows, "mmc", cfg, "exclude:" + name, got,
                        relative_scores(clean, got));
    } catch (const Error& e) {
      report.errors.push_back("exclude:" + name + ": " + e.what());
    }
  }
  return report;
}

/// Clusterability at a fixed split: K-Means in the (whitened) feature space,
/// scored against identity labels. K defaults to the evaluation class count.
struct ClusterRun {
  ClusterScores scores;
  ClusteringResult clustering;
  Eigen::Index d_out = 0;
};

inline ClusterRun run_clusterability(const FeatureModel& model, const Dataset& data,
                                     const std::vector<std::string>& eval_ids, int k,
                                     std::uint64_t seed, int max_iter = 100, int restarts = 1) {
  std::vector<std::string> labels;
  const Eigen::MatrixXd T = method_templates(model, data, eval_ids, labels);
  const Eigen::MatrixXd W = whiten_rows(model, T);  // K-Means stays Euclidean
  ClusterRun run;
  run.clustering = kmeans(W, k, seed, max_iter, restarts);
  run.scores = clustering_scores(run.clustering.assignment, labels);
  run.d_out = model.d_out;
  return run;
}

// --- report output: CSV, JSON mirror, plot-ready per-figure tables ---

inline void write_report_csv(const EvaluationReport& r, std::ostream& os) {
  os << "method,config_learn,config_eval,corruption,metric,value,relative_score\n";
  for (const ReportRow& row : r.rows) {
    os << row.method << ',' << row.config_learn << ',' << row.config_eval << ','
       << row.corruption << ',' << row.metric << ',' << detail::fmt_double(row.value) << ','
       << (row.relative ? detail::fmt_double(*row.relative) : std::string()) << '\n';
  }
}

inline void write_report_csv(const EvaluationReport& r, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  require(os.good(), Errc::io, "cannot open '" + path.string() + "' for writing");
  write_report_csv(r, os);
}

inline nlohmann::json report_to_json(const EvaluationReport& r) {
  nlohmann::json j;
  j["meta"] = {{"seed", r.meta.seed},
               {"t", r.meta.T},
               {"dataset_id", r.meta.dataset_id},
               {"timestamp", r.meta.timestamp}};
  nlohmann::json rows = nlohmann::json::array();
  for (const ReportRow& row : r.rows) {
    nlohmann::json jr = {{"method", row.method},
                         {"config_learn", row.config_learn},
                         {"config_eval", row.config_eval},
                         {"corruption", row.corruption},
                         {"metric", row.metric},
                         {"value", row.value}};
    if (row.relative) jr["relative_score"] = *row.relative;
    rows.push_back(std::move(jr));
  }
  j["rows"] = std::move(rows);
  j["errors"] = r.errors;
  return j;
}

inline void write_report_json(const EvaluationReport& r, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  require(os.good(), Errc::io, "cannot open '" + path.string() + "' for writing");
  os << report_to_json(r).dump(2) << '\n';
}

/// Per-metric tables for a configuration sweep: one CSV per metric, rows are
/// (C_L, C_E) configurations, columns are methods.
inline void write_figure_sweep(const EvaluationReport& r, const std::filesystem::path& dir,
                               const std::string& prefix = "sweep") {
  std::filesystem::create_directories(dir);
  std::vector<std::string> methods;
  std::vector<std::pair<int, int>> configs;
  for (const ReportRow& row : r.rows) {
    if (row.corruption != "none") continue;
    if (std::find(methods.begin(), methods.end(), row.method) == methods.end())
      methods.push_back(row.method);
    const std::pair<int, int> cfg{row.config_learn, row.config_eval};
    if (std::find(configs.begin(), configs.end(), cfg) == configs.end()) configs.push_back(cfg);
  }
  for (const std::string metric : {"dbi", "sc", "roc_auc", "pr_auc"}) {
    std::ofstream os(dir / (prefix + "_" + metric + ".csv"), std::ios::binary);
    os << "config_learn,config_eval";
    for (const auto& m : methods) os << ',' << m;
    os << '\n';
    for (const auto& [cl, ce] : configs) {
      os << cl << ',' << ce;
      for (const auto& m : methods) {
        os << ',';
        for (const ReportRow& row : r.rows)
          if (row.corruption == "none" && row.method == m && row.metric == metric &&
              row.config_learn == cl && row.config_eval == ce) {
            os << detail::fmt_double(row.value);
            break;
          }
      }
      os << '\n';
    }
  }
}

/// Exclusion table: one row per excluded joint/group, relative scores of the
/// four metrics, in suite order.
inline void write_figure_exclusion(const EvaluationReport& r, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  require(os.good(), Errc::io, "cannot open '" + path.string() + "' for writing");
  os << "excluded,dbi_score,sc_score,roc_score,pr_score\n";
  std::vector<std::string> order;
  std::map<std::string, std::map<std::string, double>> cells;
  for (const ReportRow& row : r.rows) {
    if (!row.relative) continue;
    if (cells.find(row.corruption) == cells.end()) order.push_back(row.corruption);
    cells[row.corruption][row.metric] = *row.relative;
  }
  for (const std::string& c : order) {
    auto& m = cells[c];
    os << c << ',' << detail::fmt_double(m["dbi"]) << ',' << detail::fmt_double(m["sc"]) << ','
       << detail::fmt_double(m["roc_auc"]) << ',' << detail::fmt_double(m["pr_auc"]) << '\n';
  }
}

/// Noise table: rows are corruption levels, columns hold each method's
/// absolute ROC and PR values.
inline void write_figure_noise(const EvaluationReport& r, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  require(os.good(), Errc::io, "cannot open '" + path.string() + "' for writing");
  std::vector<std::string> methods, levels;
  for (const ReportRow& row : r.rows) {
    if (std::find(methods.begin(), methods.end(), row.method) == methods.end())
      methods.push_back(row.method);
    if (std::find(levels.begin(), levels.end(), row.corruption) == levels.end())
      levels.push_back(row.corruption);
  }
  os << "corruption";
  for (const auto& m : methods) os << ',' << m << ":roc," << m << ":pr";
  os << '\n';
  for (const std::string& lvl : levels) {
    os << lvl;
    for (const auto& m : methods) {
      double roc = 0.0, pr = 0.0;
      for (const ReportRow& row : r.rows) {
        if (row.method != m || row.corruption != lvl) continue;
        if (row.metric == "roc_auc") roc = row.value;
        if (row.metric == "pr_auc") pr = row.value;
      }
      os << ',' << detail::fmt_double(roc) << ',' << detail::fmt_double(pr);
    }
    os << '\n';
  }
}

}  // namespace gaitlab
