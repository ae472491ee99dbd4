#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "gelid/bundle.hpp"
#include "gelid/cluster.hpp"
#include "gelid/dataset.hpp"
#include "gelid/evaluate.hpp"
#include "gelid/image.hpp"
#include "gelid/learner.hpp"
#include "gelid/pipeline.hpp"
#include "gelid/segmenter.hpp"
#include "gelid/textfeat.hpp"
#include "gelid/visionfeat.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw gelid::ValidationError("cannot read file: " + path);
  json j;
  in >> j;
  return j;
}

void write_json_file(const json& j, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw gelid::ValidationError("cannot write file: " + path);
  out << j.dump(2) << '\n';
}

// Two-column CSV -> pairs of strings, header optional.
std::vector<std::pair<std::string, std::string>> read_two_column_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw gelid::ValidationError("cannot read file: " + path);
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    size_t comma = line.find(',');
    if (comma == std::string::npos)
      throw gelid::ParseError("expected two comma-separated columns in " + path);
    out.emplace_back(line.substr(0, comma), line.substr(comma + 1));
  }
  return out;
}

bool looks_numeric(const std::string& s) {
  char* end = nullptr;
  std::strtod(s.c_str(), &end);
  return end && *end == '\0' && end != s.c_str();
}

struct IngestOpts {
  std::vector<std::string> bundles;
};

struct SegmentOpts {
  std::string bundle;
  std::string keywords;
  std::string synonyms;
  std::string candidates_out;
  double t_shift = 5.0;
  std::string out;
};

struct FeaturizeOpts {
  std::string bundle;
  std::string keywords;
  std::string embeddings;
  std::string labels;
  double t_shift = 5.0;
  std::string out;
  std::string segments_out;
};

struct TrainOpts {
  std::string data;
  std::string algorithm = "random_forest";
  bool smote = false;
  bool attr_select = false;
  bool binary = false;
  bool cv = false;
  int folds = 10;
  std::uint64_t seed = 42;
  std::string out;
};

struct CategorizeOpts {
  std::string model;
  std::string data;
  std::string out;
};

struct ClusterContextOpts {
  std::string frames;
  std::string metric = "hsv";
  std::string algorithm = "optics";
  double epsilon = -1.0;
  int min_pts = 2;
  std::string out;
};

struct ClusterIssueOpts {
  std::string data;
  std::string algorithm = "dbscan";
  double epsilon = -1.0;
  int min_pts = 2;
  std::string out;
};

struct ReportOpts {
  std::string config;
  std::string out = "report.json";
  double t_shift = -1.0;
  std::string keywords, embeddings, model, algorithm, metric;
  double epsilon = -1.0;
  int min_pts = -1;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

void print_metrics(const gelid::learner::Metrics& m) {
  std::cout << "accuracy: " << m.accuracy << "\n";
  std::cout << "unweighted mean AUC: " << m.unweighted_mean_auc << "\n";
  for (size_t c = 0; c < m.classes.size(); ++c) {
    const auto& cm = m.per_class[c];
    std::cout << m.classes[c] << ": precision=";
    if (cm.precision) std::cout << *cm.precision;
    else std::cout << "-";
    std::cout << " recall=" << cm.recall << " f=";
    if (cm.f_measure) std::cout << *cm.f_measure;
    else std::cout << "-";
    std::cout << " auc=";
    if (cm.auc) std::cout << *cm.auc;
    else std::cout << "-";
    std::cout << " support=" << cm.support << "\n";
  }
  std::cout << "weighted: precision=" << m.weighted_precision << " recall=" << m.weighted_recall
            << " f=" << m.weighted_f << "\n";
}

gelid::learner::Dataset load_learner_dataset(const std::string& path, bool binary) {
  return gelid::learner::make_dataset(gelid::load_dataset(path), binary);
}

json segment_to_json(const gelid::SegmentSpec& s) {
  return json{{"bundle_id", s.bundle_id},
              {"start_ms", s.start_ms},
              {"end_ms", s.end_ms},
              {"transcript", s.transcript},
              {"matched_keywords", s.matched_keywords}};
}

int run(int argc, char** argv) {
  CLI::App app{"gameplay-video issue mining pipeline"};
  app.require_subcommand(1);

  IngestOpts ingest;
  auto* cmd_ingest = app.add_subcommand("ingest", "validate video bundles");
  cmd_ingest->add_option("bundles", ingest.bundles, "bundle directories")->required();

  SegmentOpts seg;
  auto* cmd_segment = app.add_subcommand("segment", "segment a bundle and filter by keywords");
  cmd_segment->add_option("--bundle", seg.bundle)->required();
  cmd_segment->add_option("--keywords", seg.keywords)->required();
  cmd_segment->add_option("--t-shift", seg.t_shift, "reaction time in seconds");
  cmd_segment->add_option("--synonyms", seg.synonyms, "synonym lexicon JSON");
  cmd_segment->add_option("--candidates-out", seg.candidates_out,
                          "write expanded candidate keywords for review");
  cmd_segment->add_option("--out", seg.out)->required();

  FeaturizeOpts feat;
  auto* cmd_featurize = app.add_subcommand("featurize", "extract feature vectors for segments");
  cmd_featurize->add_option("--bundle", feat.bundle)->required();
  cmd_featurize->add_option("--keywords", feat.keywords)->required();
  cmd_featurize->add_option("--embeddings", feat.embeddings)->required();
  cmd_featurize->add_option("--labels", feat.labels, "JSON map segment id -> issue type");
  cmd_featurize->add_option("--t-shift", feat.t_shift);
  cmd_featurize->add_option("--out", feat.out)->required();
  cmd_featurize->add_option("--segments-out", feat.segments_out);

  TrainOpts tr;
  auto* cmd_train = app.add_subcommand("train", "train a categorization model");
  cmd_train->add_option("--data", tr.data)->required();
  cmd_train->add_option("--algorithm", tr.algorithm, "random_forest | knn | logistic");
  cmd_train->add_flag("--smote", tr.smote);
  cmd_train->add_flag("--attr-select", tr.attr_select);
  cmd_train->add_flag("--binary", tr.binary);
  cmd_train->add_flag("--cv", tr.cv, "also report cross-validated metrics");
  cmd_train->add_option("--folds", tr.folds);
  cmd_train->add_option("--seed", tr.seed);
  cmd_train->add_option("--out", tr.out);

  CategorizeOpts cat;
  auto* cmd_categorize = app.add_subcommand("categorize", "apply a model to a feature dataset");
  cmd_categorize->add_option("--model", cat.model)->required();
  cmd_categorize->add_option("--data", cat.data)->required();
  cmd_categorize->add_option("--out", cat.out)->required();

  ClusterContextOpts cc;
  auto* cmd_ctx = app.add_subcommand("cluster-context", "cluster summary frames by game context");
  cmd_ctx->add_option("--frames", cc.frames, "directory of summary frame PNGs")->required();
  cmd_ctx->add_option("--metric", cc.metric, "ssim | hsv");
  cmd_ctx->add_option("--algorithm", cc.algorithm, "dbscan | optics");
  cmd_ctx->add_option("--epsilon", cc.epsilon, "override estimated epsilon");
  cmd_ctx->add_option("--min-pts", cc.min_pts);
  cmd_ctx->add_option("--out", cc.out)->required();

  ClusterIssueOpts ci;
  auto* cmd_issue = app.add_subcommand("cluster-issue", "cluster feature rows by specific issue");
  cmd_issue->add_option("--data", ci.data)->required();
  cmd_issue->add_option("--algorithm", ci.algorithm, "dbscan | optics | mean_shift");
  cmd_issue->add_option("--epsilon", ci.epsilon);
  cmd_issue->add_option("--min-pts", ci.min_pts);
  cmd_issue->add_option("--out", ci.out)->required();

  ReportOpts rep;
  auto* cmd_report = app.add_subcommand("report", "run the full pipeline and emit the report");
  cmd_report->add_option("--config", rep.config)->required();
  cmd_report->add_option("--out", rep.out);
  cmd_report->add_option("--t-shift", rep.t_shift);
  cmd_report->add_option("--keywords", rep.keywords);
  cmd_report->add_option("--embeddings", rep.embeddings);
  cmd_report->add_option("--model", rep.model);
  cmd_report->add_option("--algorithm", rep.algorithm, "context clustering algorithm");
  cmd_report->add_option("--metric", rep.metric, "context distance metric");
  cmd_report->add_option("--epsilon", rep.epsilon);
  cmd_report->add_option("--min-pts", rep.min_pts);
  auto* seed_opt = cmd_report->add_option("--seed", rep.seed);

  auto* cmd_eval = app.add_subcommand("evaluate", "evaluation metrics and statistics");
  cmd_eval->require_subcommand(1);

  std::string ev_truth, ev_predicted;
  auto* ev_mojofm = cmd_eval->add_subcommand("mojofm", "partition similarity");
  ev_mojofm->add_option("--truth", ev_truth)->required();
  ev_mojofm->add_option("--predicted", ev_predicted)->required();

  std::string ev_ratings;
  auto* ev_kappa = cmd_eval->add_subcommand("kappa", "inter-rater agreement (two-column CSV)");
  ev_kappa->add_option("--ratings", ev_ratings)->required();

  std::string ev_samples;
  auto* ev_stats =
      cmd_eval->add_subcommand("stats", "Mann-Whitney U + Cliff's delta (two-column CSV group,value)");
  ev_stats->add_option("--samples", ev_samples)->required();

  std::string ev_pvalues;
  auto* ev_bh = cmd_eval->add_subcommand("bh", "Benjamini-Hochberg adjustment (one p per line)");
  ev_bh->add_option("--pvalues", ev_pvalues)->required();

  std::string cv_data;
  bool cv_binary = false;
  int cv_folds = 10;
  std::uint64_t cv_seed = 42;
  auto* ev_cv = cmd_eval->add_subcommand(
      "cv-table", "algorithm x preprocessing AUC grid over a labeled dataset");
  ev_cv->add_option("--data", cv_data)->required();
  ev_cv->add_flag("--binary", cv_binary);
  ev_cv->add_option("--folds", cv_folds);
  ev_cv->add_option("--seed", cv_seed);

  CLI11_PARSE(app, argc, argv);

  if (cmd_ingest->parsed()) {
    for (const std::string& dir : ingest.bundles) {
      gelid::VideoBundle b = gelid::load_bundle(dir);
      std::cout << b.id << ": " << b.frame_paths.size() << " frames @ " << b.fps << " fps, "
                << b.duration_ms << " ms, " << b.subtitles.size() << " subtitle entries, game="
                << b.game << "\n";
    }
    return 0;
  }

  if (cmd_segment->parsed()) {
    gelid::VideoBundle bundle = gelid::load_bundle(seg.bundle);
    gelid::KeywordDictionary dict = gelid::load_keywords(seg.keywords);
    if (!seg.synonyms.empty()) {
      auto candidates = gelid::expand_keywords(dict, gelid::load_synonyms(seg.synonyms));
      if (!seg.candidates_out.empty()) {
        std::ofstream out(seg.candidates_out, std::ios::binary);
        if (!out)
          throw gelid::ValidationError("cannot write candidates file: " + seg.candidates_out);
        for (const std::string& c : candidates) out << c << '\n';
      } else {
        for (const std::string& c : candidates) std::cout << c << '\n';
      }
    }
    auto segments = gelid::compute_segments(bundle.subtitles, seg.t_shift, bundle.duration_ms,
                                            bundle.id);
    auto kept = gelid::filter_segments(segments, dict);
    json out = json::array();
    for (const auto& s : kept) out.push_back(segment_to_json(s));
    write_json_file(out, seg.out);
    std::cout << kept.size() << " of " << segments.size() << " segments kept\n";
    return 0;
  }

  if (cmd_featurize->parsed()) {
    gelid::VideoBundle bundle = gelid::load_bundle(feat.bundle);
    gelid::KeywordDictionary dict = gelid::load_keywords(feat.keywords);
    gelid::EmbeddingTable table = gelid::load_embeddings(feat.embeddings);
    auto featurized = gelid::pipeline::featurize_bundle(bundle, dict, table, feat.t_shift);

    std::map<std::string, gelid::IssueType> labels;
    if (!feat.labels.empty()) {
      json jl = read_json_file(feat.labels);
      for (auto& [id, label] : jl.items())
        labels[id] = gelid::issue_type_from_string(label.get<std::string>());
    }
    std::vector<gelid::DatasetRow> rows;
    json seg_meta = json::array();
    for (const auto& fs : featurized) {
      auto it = labels.find(fs.id);
      rows.emplace_back(fs.features,
                        it != labels.end() ? it->second : gelid::IssueType::non_informative);
      json js = segment_to_json(fs.spec);
      js["id"] = fs.id;
      js["game"] = fs.game;
      seg_meta.push_back(std::move(js));
    }
    if (rows.empty()) {
      std::cout << "no segments survived keyword filtering; nothing written\n";
      return 0;
    }
    gelid::persist_dataset(rows, feat.out);
    if (!feat.segments_out.empty()) write_json_file(seg_meta, feat.segments_out);
    std::cout << rows.size() << " segments featurized\n";
    return 0;
  }

  if (cmd_train->parsed()) {
    gelid::learner::Dataset data = load_learner_dataset(tr.data, tr.binary);
    gelid::learner::PipelineConfig cfg;
    cfg.use_smote = tr.smote;
    cfg.use_attr_select = tr.attr_select;
    cfg.algorithm = gelid::learner::algorithm_from_string(tr.algorithm);
    if (tr.cv) {
      auto metrics = gelid::learner::cross_validate(data, cfg, tr.folds, tr.seed);
      print_metrics(metrics);
    }
    if (!tr.out.empty()) {
      gelid::learner::Dataset train_set = data;
      if (tr.attr_select) {
        auto ranked = gelid::learner::info_gain_rank(train_set);
        if (!ranked.empty()) {
          std::vector<int> order;
          for (auto& [f, g] : ranked) order.push_back(f);
          train_set = train_set.select_features(
              gelid::learner::wrapper_select(train_set, order, tr.seed));
        }
      }
      if (tr.smote) train_set = gelid::learner::smote(train_set, 5, tr.seed);
      auto model = gelid::learner::train(train_set, cfg.algorithm, cfg.params, tr.seed);
      gelid::learner::save_model(*model, tr.out);
      std::cout << "model written to " << tr.out << "\n";
    }
    return 0;
  }

  if (cmd_categorize->parsed()) {
    auto model = gelid::learner::load_model(cat.model);
    auto rows = gelid::load_dataset(cat.data);
    json out = json::array();
    for (size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].first.names != model->feature_names)
        throw gelid::ValidationError("feature schema mismatch between model and dataset");
      Eigen::VectorXd proba = model->predict_proba(rows[r].first.values);
      int cls = model->predict(rows[r].first.values);
      out.push_back(json{{"row", r},
                         {"label", model->classes[cls]},
                         {"confidence", proba[cls]}});
    }
    write_json_file(out, cat.out);
    return 0;
  }

  if (cmd_ctx->parsed()) {
    std::vector<std::string> ids;
    std::vector<gelid::Frame> frames;
    std::vector<fs::path> paths;
    for (const auto& e : fs::directory_iterator(cc.frames))
      if (e.is_regular_file() && e.path().extension() == ".png") paths.push_back(e.path());
    std::sort(paths.begin(), paths.end());
    for (const auto& p : paths) {
      ids.push_back(p.stem().string());
      frames.push_back(gelid::read_png(p.string()));
    }
    if (frames.size() < 2)
      throw gelid::ValidationError("cluster-context needs at least 2 frames");
    gelid::SimilarityMetric metric = cc.metric == "ssim" ? gelid::SimilarityMetric::ssim
                                                         : gelid::SimilarityMetric::hsv;
    Eigen::MatrixXd d = gelid::context_distances(frames, metric);
    double eps = cc.epsilon >= 0 ? cc.epsilon
                                 : (frames.size() >= 3 ? gelid::estimate_epsilon(d) : 0.0);
    std::vector<int> labels = cc.algorithm == "dbscan" ? gelid::dbscan(d, eps, cc.min_pts)
                                                       : gelid::optics(d, eps, cc.min_pts);
    gelid::evaluate::save_partition(gelid::to_partition(ids, labels), cc.out);
    std::cout << "epsilon=" << eps << ", "
              << *std::max_element(labels.begin(), labels.end()) + 1 << " clusters\n";
    return 0;
  }

  if (cmd_issue->parsed()) {
    auto rows = gelid::load_dataset(ci.data);
    std::vector<std::pair<std::string, Eigen::VectorXd>> vectors;
    for (size_t r = 0; r < rows.size(); ++r)
      vectors.emplace_back(std::to_string(r), rows[r].first.values);
    std::optional<double> eps;
    if (ci.epsilon >= 0) eps = ci.epsilon;
    gelid::Partition part = gelid::cluster_by_issue(
        vectors, gelid::cluster_algorithm_from_string(ci.algorithm), eps, ci.min_pts);
    gelid::evaluate::save_partition(part, ci.out);
    return 0;
  }

  if (cmd_report->parsed()) {
    gelid::pipeline::Config cfg = gelid::pipeline::load_config(rep.config);
    if (rep.t_shift >= 0) cfg.t_shift = rep.t_shift;
    if (!rep.keywords.empty()) cfg.keywords_path = rep.keywords;
    if (!rep.embeddings.empty()) cfg.embeddings_path = rep.embeddings;
    if (!rep.model.empty()) cfg.model_path = rep.model;
    if (!rep.algorithm.empty()) cfg.context_algorithm = rep.algorithm;
    if (!rep.metric.empty()) cfg.context_metric = rep.metric;
    if (rep.epsilon >= 0) cfg.epsilon = rep.epsilon;
    if (rep.min_pts >= 0) cfg.min_pts = rep.min_pts;
    if (!seed_opt->empty()) cfg.seed = rep.seed;
    gelid::pipeline::TriageReport report = gelid::pipeline::run_pipeline(cfg);
    gelid::pipeline::emit_report(report, rep.out);
    std::cout << "report written to " << rep.out << "\n";
    return 0;
  }

  if (ev_mojofm->parsed()) {
    gelid::Partition truth = gelid::evaluate::load_partition(ev_truth);
    gelid::Partition predicted = gelid::evaluate::load_partition(ev_predicted);
    std::cout << gelid::evaluate::mojofm(predicted, truth) << "\n";
    return 0;
  }
  if (ev_kappa->parsed()) {
    auto rows = read_two_column_csv(ev_ratings);
    std::vector<std::string> r1, r2;
    for (auto& [a, b] : rows) {
      r1.push_back(a);
      r2.push_back(b);
    }
    std::cout << gelid::evaluate::cohen_kappa(r1, r2) << "\n";
    return 0;
  }
  if (ev_stats->parsed()) {
    auto rows = read_two_column_csv(ev_samples);
    std::map<std::string, std::vector<double>> groups;
    std::vector<std::string> group_order;
    for (auto& [group, value] : rows) {
      if (!looks_numeric(value)) continue;  // header line
      if (!groups.count(group)) group_order.push_back(group);
      groups[group].push_back(std::stod(value));
    }
    if (group_order.size() != 2)
      throw gelid::ValidationError("stats expects exactly two groups in column 1");
    std::vector<double>& x = groups[group_order[0]];
    std::vector<double>& y = groups[group_order[1]];
    auto mw = gelid::evaluate::mann_whitney(x, y);
    auto cd = gelid::evaluate::cliffs_delta(x, y);
    std::cout << "U=" << mw.u << " p=" << mw.p_value << (mw.exact ? " (exact)" : " (approx)")
              << "\n";
    std::cout << "delta=" << cd.delta << " (" << cd.magnitude << ")\n";
    return 0;
  }
  if (ev_bh->parsed()) {
    std::ifstream in(ev_pvalues, std::ios::binary);
    if (!in) throw gelid::ValidationError("cannot read file: " + ev_pvalues);
    std::vector<double> ps;
    double p;
    while (in >> p) ps.push_back(p);
    for (double adj : gelid::evaluate::bh_adjust(ps)) std::cout << adj << "\n";
    return 0;
  }
  if (ev_cv->parsed()) {
    gelid::learner::Dataset data = load_learner_dataset(cv_data, cv_binary);
    std::cout << "algorithm,plain,attr_select,smote,smote+attr_select\n";
    for (auto algo : {gelid::learner::Algorithm::random_forest, gelid::learner::Algorithm::knn,
                      gelid::learner::Algorithm::logistic}) {
      std::cout << gelid::learner::to_string(algo);
      for (int variant = 0; variant < 4; ++variant) {
        gelid::learner::PipelineConfig cfg;
        cfg.algorithm = algo;
        cfg.use_attr_select = variant == 1 || variant == 3;
        cfg.use_smote = variant == 2 || variant == 3;
        auto metrics = gelid::learner::cross_validate(data, cfg, cv_folds, cv_seed);
        std::cout << "," << metrics.unweighted_mean_auc;
      }
      std::cout << "\n";
    }
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const gelid::pipeline::StageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const gelid::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const gelid::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
