#ifndef GELID_PIPELINE_HPP
#define GELID_PIPELINE_HPP

#include <cstdint>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "gelid/bundle.hpp"
#include "gelid/dataset.hpp"
#include "gelid/segmenter.hpp"
#include "gelid/textfeat.hpp"
#include "gelid/types.hpp"

namespace gelid::pipeline {

// An error attributable to one pipeline stage; the CLI maps these to exit
// code 3 with a stage-tagged diagnostic.
class StageError : public Error {
public:
  StageError(const std::string& stage, const std::string& what)
      : Error("[" + stage + "] " + what), stage_(stage) {}
  const std::string& stage() const { return stage_; }

private:
  std::string stage_;
};

struct Config {
  std::vector<std::string> bundle_dirs;
  std::string model_path;
  std::string embeddings_path;
  std::string keywords_path;
  double t_shift = 5.0;
  std::string context_metric = "hsv";
  std::string context_algorithm = "optics";
  std::string issue_algorithm = "dbscan";
  std::optional<double> epsilon;
  int min_pts = 2;
  double keyframe_threshold = 0.7;
  std::uint64_t seed = 42;
};

Config config_from_json(const nlohmann::json& j);
Config load_config(const std::string& path);

struct ReportSegment {
  std::string id;
  std::string bundle_id;
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;
  std::string transcript;
  std::string predicted_label;
  double confidence = 0.0;
};

struct IssueCluster {
  int cluster_id = 0;
  std::vector<ReportSegment> segments;
};

struct IssueGroup {
  std::string label;
  std::vector<IssueCluster> clusters;
};

struct ContextGroup {
  std::string game;
  int context_id = 0;
  std::vector<IssueGroup> issues;
};

struct TriageReport {
  std::vector<ContextGroup> contexts;
};

// A filtered segment with everything downstream stages need.
struct FeaturizedSegment {
  std::string id;
  SegmentSpec spec;
  std::string game;
  FeatureVector features;
  std::vector<std::string> frame_paths;  // frames inside [start_ms, end_ms]
};

// Segment + filter + featurize for one bundle. Segment ids are
// "<bundle_id>:<seq>" in subtitle order.
std::vector<FeaturizedSegment> featurize_bundle(const VideoBundle& bundle,
                                                const KeywordDictionary& keywords,
                                                const EmbeddingTable& embeddings, double t_shift,
                                                double keyframe_threshold = 0.7);

TriageReport run_pipeline(const Config& config);

nlohmann::json report_to_json(const TriageReport& report);
void emit_report(const TriageReport& report, const std::string& path);

}  // namespace gelid::pipeline

#endif
