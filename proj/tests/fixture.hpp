#ifndef GELID_TESTS_FIXTURE_HPP
#define GELID_TESTS_FIXTURE_HPP

// Synthetic end-to-end fixture: two single-game bundles with constant-colour
// frames, seeded transcripts, a 2-d embedding table and a kNN model whose
// training rows mirror the fixture's feature geometry.

#include <filesystem>
#include <string>
#include <vector>

#include "gelid/dataset.hpp"
#include "gelid/image.hpp"
#include "gelid/learner.hpp"
#include "gelid/visionfeat.hpp"
#include "testutil.hpp"

namespace gelid::test {

inline void write_bundle(const std::filesystem::path& dir, const std::string& id,
                         const std::vector<Frame>& frames, const std::string& srt,
                         const std::string& game = "alpha") {
  namespace fs = std::filesystem;
  fs::create_directories(dir / "frames");
  write_text((dir / "meta.json").string(),
             "{\"id\": \"" + id + "\", \"fps\": 1, \"duration_ms\": " +
                 std::to_string(frames.size() * 1000) + ", \"game\": \"" + game + "\"}");
  for (size_t i = 0; i < frames.size(); ++i) {
    char name[16];
    std::snprintf(name, sizeof(name), "%06zu.png", i);
    write_png(frames[i], (dir / "frames" / name).string());
  }
  write_text((dir / "subs.srt").string(), srt);
}

inline std::string fixture_embeddings_text() {
  return "5 2\n"
         "glitch 1 0\n"
         "crash 0.9 0.1\n"
         "lag 0 1\n"
         "stutter 0.1 0.9\n"
         "bug 0.5 0.5\n";
}

inline std::string fixture_keywords_text() {
  return "# issue keywords\nglitch\ncrash\nlag\nstutter\nbug\nfps drop\n";
}

// Training rows over the pipeline feature schema (w2v_0, w2v_1 + the 12
// video aggregates, all 1.0 for constant-colour segments).
inline std::vector<DatasetRow> fixture_training_rows() {
  std::vector<std::string> names = {"w2v_0", "w2v_1"};
  for (const std::string& n : VideoFeatures::names()) names.push_back(n);
  auto row = [&](double w0, double w1, IssueType label) {
    FeatureVector fv;
    fv.names = names;
    fv.values = Eigen::VectorXd::Ones(14);
    fv.values[0] = w0;
    fv.values[1] = w1;
    return DatasetRow{fv, label};
  };
  std::vector<DatasetRow> rows;
  for (double jitter : {0.0, 0.02, -0.02, 0.04}) {
    rows.push_back(row(1.0 + jitter, 0.0, IssueType::logic));
    rows.push_back(row(0.0, 1.0 + jitter, IssueType::performance));
    rows.push_back(row(0.5 + jitter, 0.5 - jitter, IssueType::non_informative));
  }
  return rows;
}

struct PipelineFixture {
  std::string bundle_a;
  std::string bundle_b;
  std::string keywords_path;
  std::string embeddings_path;
  std::string model_path;
};

inline PipelineFixture make_pipeline_fixture(const TempDir& tmp) {
  PipelineFixture fx;
  const Frame red = Frame::constant(16, 16, 200, 30, 30);
  const Frame blue = Frame::constant(16, 16, 30, 30, 200);
  const Frame green = Frame::constant(16, 16, 30, 200, 30);

  std::vector<Frame> frames_a;
  for (int i = 0; i < 5; ++i) frames_a.push_back(red);
  for (int i = 0; i < 5; ++i) frames_a.push_back(blue);
  const std::string srt_a =
      "1\n00:00:01,000 --> 00:00:03,000\noh no another glitch\n\n"
      "2\n00:00:03,000 --> 00:00:04,000\nnice view from here\n\n"
      "3\n00:00:06,000 --> 00:00:08,000\nso much lag right now\n\n"
      "4\n00:00:02,000 --> 00:00:04,000\nthis bug is boring\n\n";
  fx.bundle_a = tmp.file("vidA");
  write_bundle(fx.bundle_a, "vidA", frames_a, srt_a);

  std::vector<Frame> frames_b(6, green);
  const std::string srt_b = "1\n00:00:01,000 --> 00:00:04,000\nterrible stutter here\n\n";
  fx.bundle_b = tmp.file("vidB");
  write_bundle(fx.bundle_b, "vidB", frames_b, srt_b);

  fx.keywords_path = tmp.file("keywords.txt");
  write_text(fx.keywords_path, fixture_keywords_text());
  fx.embeddings_path = tmp.file("embeddings.txt");
  write_text(fx.embeddings_path, fixture_embeddings_text());

  learner::Dataset train_data = learner::make_dataset(fixture_training_rows(), false);
  auto model = learner::train(train_data, learner::Algorithm::knn, {}, 1);
  fx.model_path = tmp.file("model.json");
  learner::save_model(*model, fx.model_path);
  return fx;
}

}  // namespace gelid::test

#endif
