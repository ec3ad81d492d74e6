// gaitlab command-line front end: dataset ingestion and synthesis, model
// fitting, feature-space evaluation, clustering, experiment sweeps and the
// incident gallery. All randomness flows from --seed arguments, so reruns
// with equal seeds write byte-identical outputs.

#include <CLI11.hpp>

#include <cstdio>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gaitlab/gaitlab.hpp"

namespace {

using namespace gaitlab;

JointMask parse_exclusions(const std::string& csv) {
  if (csv.empty()) return JointMask::all();
  std::vector<int> dropped;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.rfind("group:", 0) == 0) {
      const std::string g = tok.substr(6);
      bool found = false;
      for (BodyGroup bg : {BodyGroup::head, BodyGroup::pelvis, BodyGroup::left_leg,
                           BodyGroup::right_leg, BodyGroup::left_arm, BodyGroup::right_arm,
                           BodyGroup::torso}) {
        if (group_name(bg) == g) {
          for (int j : group_joints(bg)) dropped.push_back(j);
          found = true;
        }
      }
      require(found, Errc::parameter, "unknown body group '" + g + "'");
    } else {
      const int j = joint_index(tok);
      require(j >= 0, Errc::parameter, "unknown joint '" + tok + "'");
      dropped.push_back(j);
    }
  }
  return JointMask::excluding(dropped);
}

std::pair<int, int> parse_config(const std::string& s) {
  const auto comma = s.find(',');
  require(comma != std::string::npos, Errc::parameter,
          "config must look like '9,55' (learning,evaluation)");
  return {std::stoi(s.substr(0, comma)), std::stoi(s.substr(comma + 1))};
}

MethodSpec parse_method(const std::string& tok) {
  MethodSpec m;
  m.name = tok;
  if (tok == "mmc") {
    m.method = Method::mmc;
  } else if (tok == "pcalda" || tok.rfind("pcalda:", 0) == 0) {
    m.method = Method::pcalda;
    if (tok.size() > 7) m.variance_keep = std::stod(tok.substr(7));
    m.name = "pcalda";
  } else if (tok == "raw") {
    m.method = Method::raw;
  } else if (tok == "geometric-lower") {
    m.method = Method::geometric;
    m.geo = preset_lower_body();
  } else if (tok == "geometric-broad") {
    m.method = Method::geometric;
    m.geo = preset_broad();
  } else if (tok.rfind("geometric:", 0) == 0) {
    m.method = Method::geometric;
    m.geo = parse_feature_spec(std::filesystem::path(tok.substr(10)));
    m.name = "geometric";
  } else {
    fail(Errc::parameter, "unknown method '" + tok +
                              "' (expect mmc, pcalda[:vk], raw, geometric-lower, "
                              "geometric-broad or geometric:<specfile>)");
  }
  return m;
}

std::vector<MethodSpec> parse_methods(const std::string& csv) {
  std::vector<MethodSpec> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(parse_method(tok));
  require(!out.empty(), Errc::parameter, "no methods given");
  return out;
}

CorruptionSpec parse_corruption(const std::string& s) {
  const auto colon = s.find(':');
  require(colon != std::string::npos, Errc::parameter,
          "corruption must look like 'mult:30' or 'subst:30'");
  const std::string kind = s.substr(0, colon);
  const double x = std::stod(s.substr(colon + 1));
  if (kind == "mult") return mult_noise(x, 0);
  if (kind == "subst") return subst_noise(x, 0);
  fail(Errc::parameter, "unknown corruption kind '" + kind + "'");
}

GaitSample load_query_sample(const std::filesystem::path& path) {
  const Dataset d = parse_dataset(path);
  return d.samples.front();
}

nlohmann::json cluster_run_json(const ClusterRun& run) {
  return {{"purity", run.scores.purity},
          {"rand_index", run.scores.rand_index},
          {"f_measure", run.scores.f_measure},
          {"jaccard", run.scores.jaccard},
          {"fowlkes_mallows", run.scores.fowlkes_mallows},
          {"pairs",
           {{"tp", run.scores.pairs.tp},
            {"tn", run.scores.pairs.tn},
            {"fp", run.scores.pairs.fp},
            {"fn", run.scores.pairs.fn}}},
          {"k", run.clustering.k},
          {"sse", run.clustering.sse},
          {"iterations", run.clustering.iterations},
          {"d_out", run.d_out}};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  require(os.good(), Errc::io, "cannot open '" + path.string() + "' for writing");
  os << text;
  require(os.good(), Errc::io, "write to '" + path.string() + "' failed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gaitlab - MoCap gait identification toolkit"};
  app.require_subcommand(1);

  try {
    // ---- ingest ----
    auto* ingest = app.add_subcommand("ingest", "Parse a canonical dataset, normalize, store");
    std::string in_path, out_path;
    double fps = 120.0;
    bool keep_raw = false;
    ingest->add_option("--in", in_path, "input canonical dataset")->required();
    ingest->add_option("--out", out_path, "output store")->required();
    ingest->add_option("--fps", fps, "frame rate of the recordings (default 120)");
    ingest->add_flag("--raw", keep_raw, "skip per-sample normalization");
    ingest->callback([&] {
      Dataset d = parse_dataset(std::filesystem::path(in_path));
      d.frame_rate = fps;
      if (!keep_raw)
        for (GaitSample& s : d.samples) s = normalize_sample(s);
      write_dataset(d, std::filesystem::path(out_path));
      std::printf("ingested %zu samples, %zu identities -> %s\n", d.size(), d.class_count(),
                  out_path.c_str());
    });

    // ---- synth ----
    auto* synth = app.add_subcommand("synth", "Generate a synthetic labeled dataset");
    int ids = 0, per_id = 0;
    std::uint64_t synth_seed = 0;
    std::string synth_out;
    synth->add_option("--ids", ids, "number of identities")->required();
    synth->add_option("--per-id", per_id, "samples per identity")->required();
    synth->add_option("--seed", synth_seed, "generator seed")->required();
    synth->add_option("--out", synth_out, "output store")->required();
    synth->callback([&] {
      const Dataset d = synthesize_dataset(ids, per_id, synth_seed);
      write_dataset(d, std::filesystem::path(synth_out));
      std::printf("synthesized %zu samples (%d x %d) -> %s\n", d.size(), ids, per_id,
                  synth_out.c_str());
    });

    // ---- split ----
    auto* split = app.add_subcommand("split", "Draw a disjoint learning/evaluation split");
    std::string split_data, split_cfg = "9,55", out_learn, out_eval;
    std::uint64_t split_seed = 0;
    split->add_option("--data", split_data, "input store")->required();
    split->add_option("--config", split_cfg, "learning,evaluation identity counts");
    split->add_option("--seed", split_seed, "split seed");
    split->add_option("--out-learn", out_learn, "learning store")->required();
    split->add_option("--out-eval", out_eval, "evaluation store")->required();
    split->callback([&] {
      const Dataset d = parse_dataset(std::filesystem::path(split_data));
      const auto [cl, ce] = parse_config(split_cfg);
      const SplitConfiguration cfg = make_split(d, cl, ce, split_seed);
      write_dataset(subset_by_identity(d, cfg.learning), std::filesystem::path(out_learn));
      write_dataset(subset_by_identity(d, cfg.evaluation), std::filesystem::path(out_eval));
      std::printf("split (%d,%d) -> %s / %s\n", cl, ce, out_learn.c_str(), out_eval.c_str());
    });

    // ---- fit ----
    auto* fit = app.add_subcommand("fit", "Fit a feature model on a learning store");
    std::string fit_method = "mmc", fit_learn, fit_out, fit_spec, fit_exclude, fit_metric;
    int fit_T = 32;
    double fit_vk = 0.99, fit_fps = 120.0;
    fit->add_option("--method", fit_method, "mmc|pcalda|geometric|raw")->required();
    fit->add_option("--learn", fit_learn, "learning store");
    fit->add_option("--out", fit_out, "model file")->required();
    fit->add_option("--t", fit_T, "temporal resampling length (default 32)");
    fit->add_option("--fps", fit_fps, "frame rate (default 120)");
    fit->add_option("--variance-keep", fit_vk, "PCA variance fraction (default 0.99)");
    fit->add_option("--spec", fit_spec, "geometric feature spec file");
    fit->add_option("--exclude", fit_exclude, "joints/groups to exclude, e.g. head,group:torso");
    fit->add_option("--metric", fit_metric, "euclidean|mahalanobis (geometric models)");
    fit->callback([&] {
      const JointMask mask = parse_exclusions(fit_exclude);
      VectorizationInfo vec{mask, fit_T, fit_fps};
      FeatureModel model;
      if (fit_method == "geometric") {
        GeometricFeatureSpec geo = fit_spec.empty()
                                       ? preset_lower_body()
                                       : parse_feature_spec(std::filesystem::path(fit_spec));
        model = make_geometric_model(geo, vec);
      } else if (fit_method == "raw") {
        model = make_raw_model(vec);
      } else {
        require(!fit_learn.empty(), Errc::parameter, "--learn is required for learned methods");
        Dataset learn = parse_dataset(std::filesystem::path(fit_learn));
        learn.frame_rate = fit_fps;
        const VectorizedSet set = vectorize_subset(learn, learn.class_labels(), mask, fit_T);
        if (fit_method == "mmc") model = fit_mmc(set.X, set.labels, vec);
        else if (fit_method == "pcalda") model = fit_pcalda(set.X, set.labels, fit_vk, vec);
        else fail(Errc::parameter, "unknown method '" + fit_method + "'");
      }
      if (fit_metric == "mahalanobis" && model.metric != DistanceKind::mahalanobis) {
        require(!fit_learn.empty(), Errc::parameter,
                "--metric mahalanobis needs a labeled --learn store");
        Dataset learn = parse_dataset(std::filesystem::path(fit_learn));
        learn.frame_rate = fit_fps;
        std::vector<std::string> labels;
        const Eigen::MatrixXd T = method_templates(model, learn, learn.class_labels(), labels);
        attach_mahalanobis(model, T, labels);
      }
      save_model(model, std::filesystem::path(fit_out));
      std::printf("fit %s: d_in=%lld d_out=%lld -> %s\n", fit_method.c_str(),
                  static_cast<long long>(model.d_in), static_cast<long long>(model.d_out),
                  fit_out.c_str());
    });

    // ---- eval ----
    auto* eval = app.add_subcommand("eval", "Evaluate a feature space on a store");
    std::string eval_model, eval_store, eval_metrics = "dbi,sc,roc,pr", eval_out;
    std::string eval_method, eval_spec;
    int eval_T = 32;
    double eval_fps = 120.0;
    eval->add_option("--model", eval_model, "fitted model file");
    eval->add_option("--method", eval_method, "fit-free method: geometric|raw");
    eval->add_option("--spec", eval_spec, "geometric feature spec file");
    eval->add_option("--eval", eval_store, "evaluation store")->required();
    eval->add_option("--metrics", eval_metrics, "subset of dbi,sc,roc,pr (default all)");
    eval->add_option("--t", eval_T, "resampling length for fit-free methods");
    eval->add_option("--fps", eval_fps, "frame rate for fit-free methods");
    eval->add_option("--out", eval_out, "also write the JSON record here");
    eval->callback([&] {
      FeatureModel model;
      if (!eval_model.empty()) {
        model = load_model(std::filesystem::path(eval_model));
      } else if (eval_method == "geometric") {
        GeometricFeatureSpec geo = eval_spec.empty()
                                       ? preset_lower_body()
                                       : parse_feature_spec(std::filesystem::path(eval_spec));
        model = make_geometric_model(geo, VectorizationInfo{JointMask::all(), eval_T, eval_fps});
      } else if (eval_method == "raw") {
        model = make_raw_model(VectorizationInfo{JointMask::all(), eval_T, eval_fps});
      } else {
        fail(Errc::parameter, "pass --model, or --method geometric|raw");
      }
      Dataset data = parse_dataset(std::filesystem::path(eval_store));
      data.frame_rate = model.vec.frame_rate;
      std::vector<std::string> labels;
      const Eigen::MatrixXd T = method_templates(model, data, data.class_labels(), labels);
      const DistanceFn dist = model_distance(model);

      std::set<std::string> want;
      std::stringstream ss(eval_metrics);
      std::string tok;
      while (std::getline(ss, tok, ',')) want.insert(tok);
      nlohmann::json j;
      j["n_templates"] = T.rows();
      j["d_out"] = model.d_out;
      if (want.count("dbi")) j["dbi"] = davies_bouldin(T, labels, dist);
      if (want.count("sc")) j["sc"] = silhouette(T, labels, dist);
      if (want.count("roc")) j["roc_auc"] = roc_auc(T, labels, dist);
      if (want.count("pr")) {
        const PrSummary pr = pr_auc_detail(T, labels, dist);
        j["pr_auc"] = pr.average_precision;
        j["pr_prevalence"] = pr.prevalence;
        j["pr_tied_pairs"] = pr.tied_pairs;
      }
      const std::string text = j.dump(2) + "\n";
      std::fputs(text.c_str(), stdout);
      if (!eval_out.empty()) write_text(std::filesystem::path(eval_out), text);
    });

    // ---- cluster ----
    auto* cluster = app.add_subcommand("cluster", "K-Means clusterability of a feature space");
    std::string cl_model, cl_store, cl_out;
    int cl_k = 0, cl_restarts = 1, cl_max_iter = 100;
    std::uint64_t cl_seed = 0;
    cluster->add_option("--model", cl_model, "fitted model file")->required();
    cluster->add_option("--eval", cl_store, "evaluation store")->required();
    cluster->add_option("--k", cl_k, "cluster count (default: #identities)");
    cluster->add_option("--seed", cl_seed, "K-Means seed");
    cluster->add_option("--restarts", cl_restarts, "K-Means restarts (default 1)");
    cluster->add_option("--max-iter", cl_max_iter, "Lloyd iteration cap (default 100)");
    cluster->add_option("--out", cl_out, "also write the JSON record here");
    cluster->callback([&] {
      const FeatureModel model = load_model(std::filesystem::path(cl_model));
      Dataset data = parse_dataset(std::filesystem::path(cl_store));
      data.frame_rate = model.vec.frame_rate;
      const int k = cl_k > 0 ? cl_k : static_cast<int>(data.class_count());
      const ClusterRun run = run_clusterability(model, data, data.class_labels(), k, cl_seed,
                                                cl_max_iter, cl_restarts);
      const std::string text = cluster_run_json(run).dump(2) + "\n";
      std::fputs(text.c_str(), stdout);
      if (!cl_out.empty()) write_text(std::filesystem::path(cl_out), text);
    });

    // ---- sweep ----
    auto* sweep = app.add_subcommand("sweep", "Configuration sweep over methods");
    std::string sw_data, sw_methods = "mmc", sw_out, sw_start = "2,62", sw_figures, sw_config;
    std::vector<std::string> sw_corrupt;
    int sw_end = 32, sw_T = 32;
    std::uint64_t sw_seed = 0;
    bool sw_corrupt_learn = false, sw_stamp = false;
    sweep->add_option("--data", sw_data, "input store")->required();
    sweep->add_option("--methods", sw_methods, "comma list, e.g. mmc,pcalda,raw,geometric:<spec>");
    sweep->add_option("--seed", sw_seed, "run seed");
    sweep->add_option("--out", sw_out, "report CSV (JSON mirror written next to it)")->required();
    sweep->add_option("--start", sw_start, "first (learning,evaluation) configuration");
    sweep->add_option("--end", sw_end, "last learning identity count");
    sweep->add_option("--config", sw_config, "single fixed configuration, e.g. 9,55");
    sweep->add_option("--t", sw_T, "resampling length (default 32)");
    sweep->add_option("--corrupt", sw_corrupt, "corruption(s) kind:x, e.g. subst:25 (repeatable)");
    sweep->add_flag("--corrupt-learn", sw_corrupt_learn, "noise also corrupts the learning data");
    sweep->add_flag("--stamp", sw_stamp, "wall-clock timestamp in metadata (breaks rerun identity)");
    sweep->add_option("--figures", sw_figures, "directory for plot-ready per-figure CSVs");
    sweep->callback([&] {
      const Dataset data = parse_dataset(std::filesystem::path(sw_data));
      const std::vector<MethodSpec> methods = parse_methods(sw_methods);
      std::vector<SplitConfiguration> seq;
      if (!sw_config.empty()) {
        const auto [cl, ce] = parse_config(sw_config);
        seq.push_back(make_split(data, cl, ce, sw_seed));
      } else {
        seq = configuration_sequence(data, parse_config(sw_start), sw_end, sw_seed);
      }
      std::vector<CorruptionSpec> corruptions;
      for (const std::string& c : sw_corrupt) corruptions.push_back(parse_corruption(c));
      HarnessOptions opt;
      opt.T = sw_T;
      opt.seed = sw_seed;
      opt.corrupt_learning = sw_corrupt_learn;
      opt.stamp = sw_stamp;
      EvaluationReport report = run_sweep(methods, data, seq, corruptions, opt);
      if (sw_stamp) report.meta.timestamp = std::to_string(std::time(nullptr));
      const std::filesystem::path csv(sw_out);
      write_report_csv(report, csv);
      std::filesystem::path json_path = csv;
      json_path.replace_extension(".json");
      write_report_json(report, json_path);
      if (!sw_figures.empty()) {
        const std::filesystem::path dir(sw_figures);
        std::filesystem::create_directories(dir);
        if (seq.size() > 1) write_figure_sweep(report, dir);
        if (!corruptions.empty()) write_figure_noise(report, dir / "noise.csv");
      }
      for (const std::string& e : report.errors) std::fprintf(stderr, "cell error: %s\n", e.c_str());
      std::printf("sweep: %zu rows -> %s\n", report.rows.size(), sw_out.c_str());
    });

    // ---- corrupt ----
    auto* corrupt = app.add_subcommand("corrupt", "Apply a noise model to a store");
    std::string co_kind, co_in, co_out;
    double co_x = 0.0;
    std::uint64_t co_seed = 0;
    corrupt->add_option("--kind", co_kind, "mult|subst")->required();
    corrupt->add_option("--x", co_x, "noise percentage in [0,100]")->required();
    corrupt->add_option("--seed", co_seed, "noise seed");
    corrupt->add_option("--in", co_in, "input store")->required();
    corrupt->add_option("--out", co_out, "output store")->required();
    corrupt->callback([&] {
      const Dataset d = parse_dataset(std::filesystem::path(co_in));
      Dataset out;
      if (co_kind == "mult") {
        out = corrupt_multiplicative(d, co_x, co_seed);
      } else if (co_kind == "subst") {
        // substitution presumes [0,1]-normalized coordinates
        out = corrupt_substitution(minmax_normalize(d), co_x, co_seed);
      } else {
        fail(Errc::parameter, "unknown noise kind '" + co_kind + "'");
      }
      write_dataset(out, std::filesystem::path(co_out));
      std::printf("corrupt %s x=%g -> %s\n", co_kind.c_str(), co_x, co_out.c_str());
    });

    // ---- robust ----
    auto* robust = app.add_subcommand("robust", "Joint-exclusion suite (MMC, fixed split)");
    std::string ro_data, ro_cfg = "9,55", ro_out, ro_figures, ro_exclusions = "default";
    int ro_T = 32;
    std::uint64_t ro_seed = 0;
    robust->add_option("--data", ro_data, "input store")->required();
    robust->add_option("--config", ro_cfg, "learning,evaluation identity counts (default 9,55)");
    robust->add_option("--seed", ro_seed, "split seed");
    robust->add_option("--t", ro_T, "resampling length (default 32)");
    robust->add_option("--exclusions", ro_exclusions, "only 'default' (31 joints + 14 groups)");
    robust->add_option("--out", ro_out, "report CSV (JSON mirror written next to it)")->required();
    robust->add_option("--figures", ro_figures, "also write the exclusion table CSV here");
    robust->callback([&] {
      require(ro_exclusions == "default", Errc::parameter,
              "only the default exclusion list is built in");
      const Dataset data = parse_dataset(std::filesystem::path(ro_data));
      const auto [cl, ce] = parse_config(ro_cfg);
      const SplitConfiguration cfg = make_split(data, cl, ce, ro_seed);
      HarnessOptions opt;
      opt.T = ro_T;
      opt.seed = ro_seed;
      const EvaluationReport report = joint_exclusion_suite(data, cfg, opt);
      const std::filesystem::path csv(ro_out);
      write_report_csv(report, csv);
      std::filesystem::path json_path = csv;
      json_path.replace_extension(".json");
      write_report_json(report, json_path);
      if (!ro_figures.empty()) {
        std::filesystem::create_directories(ro_figures);
        write_figure_exclusion(report, std::filesystem::path(ro_figures) / "exclusion.csv");
      }
      for (const std::string& e : report.errors) std::fprintf(stderr, "cell error: %s\n", e.c_str());
      std::printf("robust: %zu rows -> %s\n", report.rows.size(), ro_out.c_str());
    });

    // ---- gallery ----
    auto* gallery_cmd = app.add_subcommand("gallery", "Incident gallery");
    gallery_cmd->require_subcommand(1);

    auto* gadd = gallery_cmd->add_subcommand("add", "Project a sample and store the incident");
    std::string ga_gallery = "gallery.gal", ga_model, ga_sample, ga_camera;
    std::int64_t ga_ts = 0;
    double ga_lat = 0.0, ga_lon = 0.0;
    gadd->add_option("--gallery", ga_gallery, "gallery file (default gallery.gal)");
    gadd->add_option("--model", ga_model, "fitted model file")->required();
    gadd->add_option("--sample", ga_sample, "store holding the sample (first record used)")
        ->required();
    gadd->add_option("--ts", ga_ts, "UTC timestamp seconds")->required();
    gadd->add_option("--lat", ga_lat, "latitude")->required();
    gadd->add_option("--lon", ga_lon, "longitude")->required();
    gadd->add_option("--camera", ga_camera, "camera tag");
    gadd->callback([&] {
      const FeatureModel model = load_model(std::filesystem::path(ga_model));
      const GaitTemplate t = make_template(model, load_query_sample(ga_sample));
      Gallery g = Gallery::open_or_create(std::filesystem::path(ga_gallery), model.d_out);
      const std::uint64_t id = g.add(t, ga_ts, ga_lat, ga_lon, ga_camera);
      std::printf("incident %llu -> %s (%zu incidents)\n",
                  static_cast<unsigned long long>(id), ga_gallery.c_str(), g.size());
    });

    auto* gquery = gallery_cmd->add_subcommand("query", "Rank the gallery against a query sample");
    std::string gq_gallery = "gallery.gal", gq_model, gq_sample, gq_rule = "topk:10", gq_out;
    std::uint64_t gq_seed = 0;
    gquery->add_option("--gallery", gq_gallery, "gallery file (default gallery.gal)");
    gquery->add_option("--model", gq_model, "fitted model file")->required();
    gquery->add_option("--sample", gq_sample, "store holding the query sample")->required();
    gquery->add_option("--rule", gq_rule, "topk:K | thresh:TAU | cluster:K");
    gquery->add_option("--seed", gq_seed, "seed for the cluster rule");
    gquery->add_option("--out", gq_out, "trace JSON output");
    gquery->callback([&] {
      const FeatureModel model = load_model(std::filesystem::path(gq_model));
      const Gallery g = Gallery::open(std::filesystem::path(gq_gallery));
      const GaitTemplate q = make_template(model, load_query_sample(gq_sample));
      QueryRule rule;
      rule.seed = gq_seed;
      const auto colon = gq_rule.find(':');
      require(colon != std::string::npos, Errc::parameter,
              "rule must look like topk:10, thresh:0.8 or cluster:5");
      const std::string kind = gq_rule.substr(0, colon);
      const std::string arg = gq_rule.substr(colon + 1);
      if (kind == "topk") {
        rule.rule = AcceptRule::topk;
        rule.k = std::stoi(arg);
      } else if (kind == "thresh" || kind == "threshold") {
        rule.rule = AcceptRule::threshold;
        rule.tau = std::stod(arg);
      } else if (kind == "cluster") {
        rule.rule = AcceptRule::cluster;
        rule.clusters = std::stoi(arg);
      } else {
        fail(Errc::parameter, "unknown rule '" + kind + "'");
      }
      const LocationTrace trace = query(g, model, q, rule);
      if (trace.clipped)
        std::fprintf(stderr, "warning: top-k clipped to gallery size %zu\n", g.size());
      const std::string text = trace_to_json(trace).dump(2) + "\n";
      std::fputs(text.c_str(), stdout);
      if (!gq_out.empty()) write_text(std::filesystem::path(gq_out), text);
    });

    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const gaitlab::Error& e) {
    std::fprintf(stderr, "gaitlab: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "gaitlab: %s\n", e.what());
    return 1;
  }
  return 0;
}
