#include "gelid/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "gelid/cluster.hpp"
#include "gelid/learner.hpp"
#include "gelid/visionfeat.hpp"

namespace gelid::pipeline {

Config config_from_json(const nlohmann::json& j) {
  Config cfg;
  cfg.bundle_dirs = j.at("bundles").get<std::vector<std::string>>();
  cfg.model_path = j.at("model").get<std::string>();
  cfg.embeddings_path = j.at("embeddings").get<std::string>();
  cfg.keywords_path = j.at("keywords").get<std::string>();
  cfg.t_shift = j.value("t_shift", 5.0);
  cfg.context_metric = j.value("context_metric", std::string("hsv"));
  cfg.context_algorithm = j.value("context_algorithm", std::string("optics"));
  cfg.issue_algorithm = j.value("issue_algorithm", std::string("dbscan"));
  if (j.contains("epsilon")) cfg.epsilon = j.at("epsilon").get<double>();
  cfg.min_pts = j.value("min_pts", 2);
  cfg.keyframe_threshold = j.value("keyframe_threshold", 0.7);
  cfg.seed = j.value("seed", std::uint64_t{42});
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("invalid config JSON in " + path + ": " + e.what());
  }
  return config_from_json(j);
}

namespace {

std::vector<std::string> frames_in_range(const VideoBundle& bundle, std::int64_t start_ms,
                                         std::int64_t end_ms) {
  std::vector<std::string> out;
  for (size_t i = 0; i < bundle.frame_paths.size(); ++i) {
    const double t_ms = static_cast<double>(i) * 1000.0 / bundle.fps;
    if (t_ms >= static_cast<double>(start_ms) && t_ms <= static_cast<double>(end_ms))
      out.push_back(bundle.frame_paths[i]);
  }
  if (out.empty()) {
    // Degenerately short segment; fall back to the frame nearest its midpoint.
    const double mid_ms = static_cast<double>(start_ms + end_ms) / 2.0;
    size_t best = 0;
    double best_diff = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < bundle.frame_paths.size(); ++i) {
      const double diff = std::abs(static_cast<double>(i) * 1000.0 / bundle.fps - mid_ms);
      if (diff < best_diff) {
        best_diff = diff;
        best = i;
      }
    }
    out.push_back(bundle.frame_paths[best]);
  }
  return out;
}

std::vector<Frame> load_frames(const std::vector<std::string>& paths) {
  std::vector<Frame> frames;
  frames.reserve(paths.size());
  for (const std::string& p : paths) frames.push_back(read_png(p));
  return frames;
}

}  // namespace

std::vector<FeaturizedSegment> featurize_bundle(const VideoBundle& bundle,
                                                const KeywordDictionary& keywords,
                                                const EmbeddingTable& embeddings, double t_shift,
                                                double keyframe_threshold) {
  std::vector<SegmentSpec> segments =
      compute_segments(bundle.subtitles, t_shift, bundle.duration_ms, bundle.id);
  std::vector<SegmentSpec> kept = filter_segments(segments, keywords);

  std::vector<std::string> feature_names;
  for (int i = 0; i < embeddings.dim; ++i) feature_names.push_back("w2v_" + std::to_string(i));
  for (const std::string& n : VideoFeatures::names()) feature_names.push_back(n);

  std::vector<FeaturizedSegment> out;
  int seq = 0;
  for (const SegmentSpec& seg : kept) {
    FeaturizedSegment fs;
    fs.id = bundle.id + ":" + std::to_string(seq++);
    fs.spec = seg;
    fs.game = bundle.game;
    fs.frame_paths = frames_in_range(bundle, seg.start_ms, seg.end_ms);

    std::vector<Frame> frames = load_frames(fs.frame_paths);
    if (frames.size() == 1) frames.push_back(frames.front());  // constant pair series
    PairSeries series = frame_pair_series(frames);
    VideoFeatures video = aggregate_features(series);
    Eigen::VectorXd text = embed_average(tokenize(seg.transcript), embeddings);

    fs.features.names = feature_names;
    fs.features.values.resize(embeddings.dim + 12);
    fs.features.values.head(embeddings.dim) = text;
    fs.features.values.tail(12) = video.to_vector();
    out.push_back(std::move(fs));
  }
  return out;
}

namespace {

// Densify cluster labels so ids are ordered by smallest member segment id.
std::map<int, int> order_clusters(const std::vector<std::pair<std::string, int>>& members) {
  std::map<int, std::string> smallest;
  for (const auto& [id, cluster] : members) {
    auto it = smallest.find(cluster);
    if (it == smallest.end() || id < it->second) smallest[cluster] = id;
  }
  std::vector<std::pair<std::string, int>> ordered;
  for (const auto& [cluster, id] : smallest) ordered.emplace_back(id, cluster);
  std::sort(ordered.begin(), ordered.end());
  std::map<int, int> remap;
  for (const auto& [id, cluster] : ordered) remap[cluster] = static_cast<int>(remap.size());
  return remap;
}

}  // namespace

TriageReport run_pipeline(const Config& config) {
  if (config.bundle_dirs.empty())
    throw StageError("ingest", "config names no bundles");

  std::vector<VideoBundle> bundles;
  try {
    for (const std::string& dir : config.bundle_dirs) bundles.push_back(load_bundle(dir));
  } catch (const Error& e) {
    throw StageError("ingest", e.what());
  }

  KeywordDictionary keywords;
  EmbeddingTable embeddings;
  try {
    keywords = load_keywords(config.keywords_path);
    embeddings = load_embeddings(config.embeddings_path);
  } catch (const Error& e) {
    throw StageError("segment", e.what());
  }

  std::vector<FeaturizedSegment> segments;
  try {
    for (const VideoBundle& b : bundles) {
      auto fs = featurize_bundle(b, keywords, embeddings, config.t_shift,
                                 config.keyframe_threshold);
      segments.insert(segments.end(), std::make_move_iterator(fs.begin()),
                      std::make_move_iterator(fs.end()));
    }
  } catch (const Error& e) {
    throw StageError("featurize", e.what());
  }

  // Categorize and drop non-informative segments.
  struct Categorized {
    const FeaturizedSegment* seg;
    std::string label;
    double confidence;
  };
  std::vector<Categorized> informative;
  try {
    auto model = learner::load_model(config.model_path);
    for (const FeaturizedSegment& fs : segments) {
      if (fs.features.names != model->feature_names)
        throw ValidationError("feature schema mismatch between model and segments");
      Eigen::VectorXd proba = model->predict_proba(fs.features.values);
      int cls = model->predict(fs.features.values);
      const std::string& label = model->classes[cls];
      if (label == "non_informative") continue;
      informative.push_back({&fs, label, proba[cls]});
    }
  } catch (const Error& e) {
    throw StageError("categorize", e.what());
  }

  TriageReport report;
  if (informative.empty()) return report;

  try {
    // Context clustering runs strictly per game.
    std::map<std::string, std::vector<size_t>> by_game;
    for (size_t i = 0; i < informative.size(); ++i)
      by_game[informative[i].seg->game].push_back(i);

    const SimilarityMetric metric =
        config.context_metric == "ssim" ? SimilarityMetric::ssim : SimilarityMetric::hsv;
    const ClusterAlgorithm context_algo = cluster_algorithm_from_string(config.context_algorithm);
    const ClusterAlgorithm issue_algo = cluster_algorithm_from_string(config.issue_algorithm);

    for (const auto& [game, indices] : by_game) {
      std::vector<int> context_labels(indices.size(), 0);
      if (indices.size() >= 2) {
        std::vector<Frame> summaries;
        for (size_t i : indices) {
          std::vector<Frame> frames = load_frames(informative[i].seg->frame_paths);
          summaries.push_back(
              summary_frame(extract_keyframes(frames, config.keyframe_threshold)));
        }
        Eigen::MatrixXd d = context_distances(summaries, metric);
        const double eps =
            config.epsilon ? *config.epsilon
                           : (indices.size() >= 3 ? estimate_epsilon(d) : 0.0);
        context_labels = context_algo == ClusterAlgorithm::dbscan
                             ? dbscan(d, eps, config.min_pts)
                             : optics(d, eps, config.min_pts);
      }

      // Stable context ids: ordered by smallest member segment id.
      std::vector<std::pair<std::string, int>> members;
      for (size_t k = 0; k < indices.size(); ++k)
        members.emplace_back(informative[indices[k]].seg->id, context_labels[k]);
      std::map<int, int> remap = order_clusters(members);

      std::map<int, std::vector<size_t>> by_context;
      for (size_t k = 0; k < indices.size(); ++k)
        by_context[remap[context_labels[k]]].push_back(indices[k]);

      for (const auto& [context_id, ctx_indices] : by_context) {
        ContextGroup ctx;
        ctx.game = game;
        ctx.context_id = context_id;

        std::map<std::string, std::vector<size_t>> by_label;
        for (size_t i : ctx_indices) by_label[informative[i].label].push_back(i);
        for (const auto& [label, label_indices] : by_label) {
          IssueGroup group;
          group.label = label;

          std::vector<std::pair<std::string, Eigen::VectorXd>> vectors;
          for (size_t i : label_indices)
            vectors.emplace_back(informative[i].seg->id, informative[i].seg->features.values);
          Partition part = cluster_by_issue(vectors, issue_algo, config.epsilon, config.min_pts);

          std::vector<std::pair<std::string, int>> issue_members(part.assign.begin(),
                                                                 part.assign.end());
          std::map<int, int> issue_remap = order_clusters(issue_members);
          std::map<int, IssueCluster> clusters;
          for (size_t i : label_indices) {
            const Categorized& cat = informative[i];
            const int cid = issue_remap[part.assign.at(cat.seg->id)];
            IssueCluster& cluster = clusters[cid];
            cluster.cluster_id = cid;
            ReportSegment rs;
            rs.id = cat.seg->id;
            rs.bundle_id = cat.seg->spec.bundle_id;
            rs.start_ms = cat.seg->spec.start_ms;
            rs.end_ms = cat.seg->spec.end_ms;
            rs.transcript = cat.seg->spec.transcript;
            rs.predicted_label = cat.label;
            rs.confidence = cat.confidence;
            cluster.segments.push_back(std::move(rs));
          }
          for (auto& [cid, cluster] : clusters) {
            std::sort(cluster.segments.begin(), cluster.segments.end(),
                      [](const ReportSegment& a, const ReportSegment& b) { return a.id < b.id; });
            group.clusters.push_back(std::move(cluster));
          }
          ctx.issues.push_back(std::move(group));
        }
        report.contexts.push_back(std::move(ctx));
      }
    }
  } catch (const Error& e) {
    throw StageError("cluster", e.what());
  }

  std::sort(report.contexts.begin(), report.contexts.end(),
            [](const ContextGroup& a, const ContextGroup& b) {
              if (a.game != b.game) return a.game < b.game;
              return a.context_id < b.context_id;
            });
  return report;
}

nlohmann::json report_to_json(const TriageReport& report) {
  nlohmann::json j;
  j["contexts"] = nlohmann::json::array();
  for (const ContextGroup& ctx : report.contexts) {
    nlohmann::json jc;
    jc["game"] = ctx.game;
    jc["context_id"] = ctx.context_id;
    jc["issue_types"] = nlohmann::json::array();
    for (const IssueGroup& group : ctx.issues) {
      nlohmann::json jg;
      jg["label"] = group.label;
      jg["clusters"] = nlohmann::json::array();
      for (const IssueCluster& cluster : group.clusters) {
        nlohmann::json jcl;
        jcl["cluster_id"] = cluster.cluster_id;
        jcl["segments"] = nlohmann::json::array();
        for (const ReportSegment& s : cluster.segments) {
          nlohmann::json js;
          js["id"] = s.id;
          js["bundle_id"] = s.bundle_id;
          js["start_ms"] = s.start_ms;
          js["end_ms"] = s.end_ms;
          js["transcript"] = s.transcript;
          js["predicted_label"] = s.predicted_label;
          js["confidence"] = s.confidence;
          jcl["segments"].push_back(std::move(js));
        }
        jg["clusters"].push_back(std::move(jcl));
      }
      jc["issue_types"].push_back(std::move(jg));
    }
    j["contexts"].push_back(std::move(jc));
  }
  return j;
}

void emit_report(const TriageReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write report file: " + path);
  out << report_to_json(report).dump(2) << '\n';
}

}  // namespace gelid::pipeline
