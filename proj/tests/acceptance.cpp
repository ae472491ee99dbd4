// Acceptance suite: one criterion per section, one PASS/FAIL line each.
// Exits non-zero if any criterion fails. Each criterion is checked against
// independent oracles (see oracles.hpp) rather than against the library's
// own intermediate results.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fixture.hpp"
#include "gelid/bundle.hpp"
#include "gelid/cluster.hpp"
#include "gelid/evaluate.hpp"
#include "gelid/learner.hpp"
#include "gelid/pipeline.hpp"
#include "gelid/segmenter.hpp"
#include "gelid/visionfeat.hpp"
#include "oracles.hpp"

using namespace gelid;

namespace {

std::vector<std::string> g_problems;

void expect(bool condition, const std::string& message) {
  if (!condition && g_problems.size() < 5) g_problems.push_back(message);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Partition partition_from_labels(const std::vector<int>& labels) {
  Partition p;
  for (size_t i = 0; i < labels.size(); ++i) p.assign["e" + std::to_string(i)] = labels[i];
  return p;
}

// Straight-from-the-formula SSIM oracle with explicit loops.
double ssim_oracle(const Frame& a, const Frame& b) {
  const int w = 8;
  auto lum = [](const Frame& f, int r, int c) {
    return 0.299 * f.at(r, c, 0) + 0.587 * f.at(r, c, 1) + 0.114 * f.at(r, c, 2);
  };
  const double c1 = (0.01 * 255) * (0.01 * 255);
  const double c2 = (0.03 * 255) * (0.03 * 255);
  double total = 0;
  int count = 0;
  for (int r = 0; r + w <= a.height; ++r)
    for (int c = 0; c + w <= a.width; ++c) {
      double mx = 0, my = 0;
      for (int i = 0; i < w; ++i)
        for (int j = 0; j < w; ++j) {
          mx += lum(a, r + i, c + j);
          my += lum(b, r + i, c + j);
        }
      mx /= w * w;
      my /= w * w;
      double vx = 0, vy = 0, cov = 0;
      for (int i = 0; i < w; ++i)
        for (int j = 0; j < w; ++j) {
          const double dx = lum(a, r + i, c + j) - mx;
          const double dy = lum(b, r + i, c + j) - my;
          vx += dx * dx;
          vy += dy * dy;
          cov += dx * dy;
        }
      vx /= w * w;
      vy /= w * w;
      cov /= w * w;
      total += ((2 * mx * my + c1) * (2 * cov + c2)) /
               ((mx * mx + my * my + c1) * (vx + vy + c2));
      ++count;
    }
  return total / count;
}

// ---------------------------------------------------------------- criterion 1

void criterion_segmentation() {
  const auto t0 = std::chrono::steady_clock::now();

  // Worked example: cue at 13:45, reaction shift t = 5 s, giving
  // [13:40, 13:52]. The published arithmetic counts the 3-second cue's
  // display seconds inclusively, so its end timestamp is 13:47.
  std::vector<SubtitleEntry> cue = {{1, 825000, 827000, "did you see that"}};
  auto segs = compute_segments(cue, 5.0, 3600000, "v");
  expect(segs.size() == 1, "worked example: segment dropped");
  expect(!segs.empty() && segs[0].start_ms == 820000 && segs[0].end_ms == 832000,
         "worked example: expected [820000, 832000]");

  // Property suite: clamped-interval formula over random entries.
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<std::int64_t> start_dist(0, 3'600'000);
  std::uniform_int_distribution<std::int64_t> len_dist(0, 30'000);
  std::uniform_real_distribution<double> t_dist(0.0, 30.0);
  const std::int64_t duration = 3'605'000;
  for (int trial = 0; trial < 10000; ++trial) {
    SubtitleEntry e{1, start_dist(rng), 0, "x"};
    e.end_ms = e.start_ms + len_dist(rng);
    const double t = t_dist(rng);
    const std::int64_t t_ms = std::llround(t * 1000.0);
    auto out = compute_segments({e}, t, duration, "v");
    const std::int64_t want_start = std::max<std::int64_t>(e.start_ms - t_ms, 0);
    const std::int64_t want_end = std::min<std::int64_t>(e.end_ms + t_ms, duration);
    if (want_start < want_end) {
      expect(out.size() == 1 && out[0].start_ms == want_start && out[0].end_ms == want_end,
             "random entry: clamped-interval formula violated");
    } else {
      expect(out.empty(), "random entry: collapsed interval not dropped");
    }
    // t-monotonicity: a larger shift yields a superset interval.
    auto wider = compute_segments({e}, t + 1.0, duration, "v");
    if (!out.empty()) {
      expect(wider.size() == 1 && wider[0].start_ms <= out[0].start_ms &&
                 wider[0].end_ms >= out[0].end_ms,
             "t-monotonicity violated");
    }
    if (!g_problems.empty()) break;
  }
  expect(seconds_since(t0) < 1.0, "segmentation suite exceeded 1 s");
}

// ---------------------------------------------------------------- criterion 2

void criterion_ssim() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(202);
  for (int i = 0; i < 100; ++i) {
    Frame a = test::random_frame(16, 16, rng);
    Frame b = test::random_frame(16, 16, rng);
    expect(std::abs(ssim(a, b) - ssim_oracle(a, b)) <= 1e-6, "ssim deviates from oracle > 1e-6");
    expect(std::abs(ssim(a, a) - 1.0) <= 1e-9, "ssim(a, a) != 1 within 1e-9");
    if (!g_problems.empty()) break;
  }
  expect(seconds_since(t0) < 10.0, "ssim suite exceeded 10 s");
}

// ---------------------------------------------------------------- criterion 3

void criterion_video_features() {
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  std::uniform_int_distribution<int> len(1, 50);
  for (int trial = 0; trial < 500; ++trial) {
    PairSeries series;
    const int n = len(rng);
    for (int i = 0; i < n; ++i) {
      series.s.push_back(val(rng));
      series.hsv.push_back(val(rng));
    }
    VideoFeatures vf = aggregate_features(series);
    for (const auto& [mn, q1, med, q3, mx] :
         {std::tuple{vf.s_min, vf.s_q1, vf.s_median, vf.s_q3, vf.s_max},
          std::tuple{vf.hsv_min, vf.hsv_q1, vf.hsv_median, vf.hsv_q3, vf.hsv_max}}) {
      expect(mn <= q1 && q1 <= med && med <= q3 && q3 <= mx, "quantile ordering violated");
    }
    auto near = [](double a, double b) { return std::abs(a - b) <= 1e-9; };
    expect(near(vf.s_min, test::quantile_oracle(series.s, 0.0)) &&
               near(vf.s_q1, test::quantile_oracle(series.s, 0.25)) &&
               near(vf.s_median, test::quantile_oracle(series.s, 0.5)) &&
               near(vf.s_q3, test::quantile_oracle(series.s, 0.75)) &&
               near(vf.s_max, test::quantile_oracle(series.s, 1.0)),
           "s aggregates deviate from interpolated-quantile oracle");
    expect(near(vf.hsv_q1, test::quantile_oracle(series.hsv, 0.25)) &&
               near(vf.hsv_median, test::quantile_oracle(series.hsv, 0.5)) &&
               near(vf.hsv_q3, test::quantile_oracle(series.hsv, 0.75)),
           "hsv aggregates deviate from interpolated-quantile oracle");
    if (!g_problems.empty()) break;
  }
}

// ---------------------------------------------------------------- criterion 4

void criterion_mojofm() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(404);

  for (int n = 2; n <= 7; ++n) {
    test::MnoOracle oracle(n);
    const auto& parts = oracle.partitions();
    std::vector<Partition> as_partitions;
    as_partitions.reserve(parts.size());
    for (const auto& p : parts) as_partitions.push_back(partition_from_labels(p));

    // Farthest-partition denominators, one per target partition.
    std::vector<long> max_dist(parts.size(), 0);
    for (size_t j = 0; j < parts.size(); ++j)
      for (size_t k = 0; k < parts.size(); ++k)
        max_dist[j] = std::max(max_dist[j], oracle.distance(parts[k], parts[j]));

    // mno: exhaustive over all ordered pairs.
    for (size_t i = 0; i < parts.size() && g_problems.empty(); ++i)
      for (size_t j = 0; j < parts.size(); ++j) {
        if (evaluate::mno(as_partitions[i], as_partitions[j]) !=
            oracle.distance(parts[i], parts[j])) {
          expect(false, "mno deviates from BFS oracle at n=" + std::to_string(n));
          break;
        }
      }

    // mojofm: exhaustive through n=6; the brute-force denominator makes the
    // full n=7 grid (877^2 pairs) impractical, so n=7 is sampled.
    auto check_mojofm = [&](size_t i, size_t j) {
      const double expected =
          100.0 - static_cast<double>(oracle.distance(parts[i], parts[j])) /
                      static_cast<double>(max_dist[j]) * 100.0;
      if (evaluate::mojofm(as_partitions[i], as_partitions[j]) != expected)
        expect(false, "mojofm deviates from oracle at n=" + std::to_string(n));
    };
    if (n <= 6) {
      for (size_t i = 0; i < parts.size() && g_problems.empty(); ++i)
        for (size_t j = 0; j < parts.size(); ++j) check_mojofm(i, j);
    } else {
      std::uniform_int_distribution<size_t> pick(0, parts.size() - 1);
      for (int trial = 0; trial < 500 && g_problems.empty(); ++trial)
        check_mojofm(pick(rng), pick(rng));
    }
  }

  // Identity: mojofm(A, A) = 100 on random partitions.
  std::uniform_int_distribution<int> n_dist(2, 7);
  for (int trial = 0; trial < 1000 && g_problems.empty(); ++trial) {
    const int n = n_dist(rng);
    std::vector<int> labels(n);
    std::uniform_int_distribution<int> g(0, n - 1);
    for (int& l : labels) l = g(rng);
    Partition p = partition_from_labels(test::canonical(labels));
    expect(evaluate::mojofm(p, p) == 100.0, "mojofm(A, A) != 100");
  }
  expect(seconds_since(t0) < 60.0, "mojofm suite exceeded 60 s");
}

// ---------------------------------------------------------------- criterion 5

void criterion_clustering() {
  std::mt19937_64 rng(505);
  std::uniform_int_distribution<int> n_dist(3, 20);
  std::uniform_real_distribution<double> coord(0.0, 1.0);
  std::uniform_real_distribution<double> eps_dist(0.05, 0.4);
  std::uniform_int_distribution<int> pts_dist(2, 3);

  for (int instance = 0; instance < 200 && g_problems.empty(); ++instance) {
    const int n = n_dist(rng);
    std::vector<Eigen::VectorXd> points;
    for (int i = 0; i < n; ++i) points.push_back(Eigen::Vector2d(coord(rng), coord(rng)));
    Eigen::MatrixXd d = euclidean_distances(points);
    const double eps = eps_dist(rng);
    const int min_pts = pts_dist(rng);

    std::vector<int> labels = dbscan(d, eps, min_pts);
    test::DbscanOracleResult oracle = test::dbscan_oracle(d, eps, min_pts);

    // Border-free: no non-core point lies within epsilon of a core point.
    // Only there is the OPTICS epsilon-cut order-independent and equal to
    // DBSCAN (a border point visited before its cluster is emitted as noise
    // by the OPTICS ordering).
    bool border_free = true;
    for (int i = 0; i < n && border_free; ++i) {
      if (oracle.core[i]) continue;
      for (int j = 0; j < n; ++j)
        if (oracle.core[j] && d(i, j) <= eps) {
          border_free = false;
          break;
        }
    }
    if (border_free)
      expect(test::same_partition(optics(d, eps, min_pts), labels),
             "optics epsilon-cut deviates from dbscan on a border-free instance");

    if (!oracle.border_ambiguous) {
      expect(test::same_partition(labels, oracle.labels),
             "dbscan deviates from reachability-closure oracle");
    } else {
      // Border point touching several core clusters: the assignment is
      // order-dependent, so check the density structure instead of labels.
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          if (oracle.core[i] && oracle.core[j])
            expect((labels[i] == labels[j]) == (oracle.labels[i] == oracle.labels[j]),
                   "dbscan core structure deviates from oracle");
        }
      for (int i = 0; i < n; ++i) {
        if (oracle.core[i]) continue;
        bool has_core_neighbour = false, attached_to_neighbour = false;
        for (int j = 0; j < n; ++j)
          if (j != i && oracle.core[j] && d(i, j) <= eps) {
            has_core_neighbour = true;
            if (labels[i] == labels[j]) attached_to_neighbour = true;
          }
        if (has_core_neighbour) {
          expect(attached_to_neighbour, "border point not attached to any core neighbour");
        } else {
          int shared = 0;
          for (int j = 0; j < n; ++j)
            if (labels[j] == labels[i]) ++shared;
          expect(shared == 1, "noise point not a singleton");
        }
      }
    }
  }

  // MeanShift: two sigma=0.1 blobs separated by 10 sigma, explicit bandwidth.
  std::normal_distribution<double> noise(0.0, 0.1);
  int successes = 0;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Eigen::VectorXd> points;
    for (int i = 0; i < 20; ++i) points.push_back(Eigen::Vector2d(noise(rng), noise(rng)));
    for (int i = 0; i < 20; ++i)
      points.push_back(Eigen::Vector2d(1.0 + noise(rng), noise(rng)));
    std::vector<int> labels = mean_shift(points, 0.3);
    const int clusters = *std::max_element(labels.begin(), labels.end()) + 1;
    bool ok = clusters == 2;
    for (int i = 1; i < 20 && ok; ++i) ok = labels[i] == labels[0];
    for (int i = 21; i < 40 && ok; ++i) ok = labels[i] == labels[20];
    ok = ok && labels[0] != labels[20];
    if (ok) ++successes;
  }
  expect(successes == 50, "mean shift recovered 2 blobs in only " + std::to_string(successes) +
                              "/50 trials");
}

// ---------------------------------------------------------------- criterion 6

void criterion_epsilon() {
  // NN distances {0.1, 0.12, 0.5}: three tight pairs, everything else far.
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(6, 6);
  auto set = [&](int i, int j, double v) { m(i, j) = m(j, i) = v; };
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j) set(i, j, 10.0 + i + j);
  set(0, 1, 0.1);
  set(2, 3, 0.12);
  set(4, 5, 0.5);
  expect(estimate_epsilon(m) == 0.5 - 0.12, "epsilon example 1: expected 0.38");

  // Points on a line at 0, 1, 2, 10: NN distances [1, 1, 1, 8].
  std::vector<double> xs = {0, 1, 2, 10};
  Eigen::MatrixXd line(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) line(i, j) = std::abs(xs[i] - xs[j]);
  expect(estimate_epsilon(line) == 7.0, "epsilon example 2: expected 7");

  // Scale equivariance over random distance matrices.
  std::mt19937_64 rng(606);
  std::uniform_int_distribution<int> n_dist(3, 12);
  std::uniform_real_distribution<double> dist_val(0.01, 5.0);
  std::uniform_real_distribution<double> scale_val(0.1, 10.0);
  for (int trial = 0; trial < 1000 && g_problems.empty(); ++trial) {
    const int n = n_dist(rng);
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) d(i, j) = d(j, i) = dist_val(rng);
    const double c = scale_val(rng);
    const double base = estimate_epsilon(d);
    const double scaled = estimate_epsilon((c * d).eval());
    expect(std::abs(scaled - c * base) <= 1e-9 * std::max(1.0, c * base),
           "epsilon not scale-equivariant");
  }
}

// ---------------------------------------------------------------- criterion 7

learner::Dataset gaussian_dataset(int per_class, double separation, double sigma,
                                  std::mt19937_64& rng) {
  learner::Dataset data;
  data.feature_names = {"f0", "f1"};
  data.classes = {"a", "b"};
  data.X.resize(2 * per_class, 2);
  std::normal_distribution<double> noise(0.0, sigma);
  for (int i = 0; i < per_class; ++i) {
    data.X.row(i) = Eigen::RowVector2d(noise(rng), noise(rng));
    data.y.push_back(0);
  }
  for (int i = 0; i < per_class; ++i) {
    data.X.row(per_class + i) =
        Eigen::RowVector2d(separation + noise(rng), separation + noise(rng));
    data.y.push_back(1);
  }
  return data;
}

void criterion_learner() {
  std::mt19937_64 rng(707);

  // Separable two-Gaussian data, 10-fold CV.
  learner::Dataset data = gaussian_dataset(100, 4.0, 0.7, rng);
  learner::PipelineConfig config;
  auto metrics = learner::cross_validate(data, config, 10, 42);
  expect(metrics.unweighted_mean_auc >= 0.95,
         "10-fold CV AUC below 0.95 on separable data: " +
             std::to_string(metrics.unweighted_mean_auc));

  // SMOTE balance and segment membership.
  learner::Dataset imbalanced = gaussian_dataset(30, 4.0, 0.7, rng);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index r = 0; r < imbalanced.size(); ++r)
    if (imbalanced.y[r] == 0 || r < 38) keep.push_back(r);
  imbalanced = imbalanced.select_rows(keep);  // 30 a's, 8 b's
  learner::Dataset balanced = learner::smote(imbalanced, 5, 9);
  auto counts = balanced.class_counts();
  expect(counts.size() == 2 && counts[0] == counts[1], "smote did not balance class counts");
  bool originals_kept = balanced.size() >= imbalanced.size();
  for (Eigen::Index r = 0; r < imbalanced.size() && originals_kept; ++r)
    originals_kept = (balanced.X.row(r).array() == imbalanced.X.row(r).array()).all() &&
                     balanced.y[r] == imbalanced.y[r];
  expect(originals_kept, "smote did not preserve original rows verbatim");
  for (Eigen::Index r = imbalanced.size(); r < balanced.size(); ++r) {
    const Eigen::VectorXd x = balanced.X.row(r);
    const int cls = balanced.y[r];
    bool on_segment = false;
    for (Eigen::Index p = 0; p < imbalanced.size() && !on_segment; ++p) {
      if (imbalanced.y[p] != cls) continue;
      for (Eigen::Index q = 0; q < imbalanced.size() && !on_segment; ++q) {
        if (q == p || imbalanced.y[q] != cls) continue;
        const Eigen::VectorXd pp = imbalanced.X.row(p);
        const Eigen::VectorXd qq = imbalanced.X.row(q);
        const Eigen::VectorXd seg = qq - pp;
        const double len2 = seg.squaredNorm();
        const double lambda = len2 > 0 ? (x - pp).dot(seg) / len2 : 0.0;
        if (lambda >= -1e-9 && lambda <= 1.0 + 1e-9 &&
            (x - (pp + lambda * seg)).norm() <= 1e-9)
          on_segment = true;
      }
    }
    expect(on_segment, "synthetic point not on a same-class segment");
    if (!g_problems.empty()) break;
  }

  // Info gain against the entropy oracle. Values with even multiplicities so
  // 10-bin equal-frequency discretization of 20 rows groups by exact value.
  std::vector<double> values = {0, 0, 0, 0, 1, 1, 1, 1, 1, 1, 2, 2, 2, 2, 3, 3, 3, 3, 3, 3};
  std::shuffle(values.begin(), values.end(), rng);
  learner::Dataset ig;
  ig.feature_names = {"f0"};
  ig.classes = {"a", "b"};
  ig.X.resize(20, 1);
  std::uniform_int_distribution<int> flip(0, 9);
  for (int r = 0; r < 20; ++r) {
    ig.X(r, 0) = values[r];
    ig.y.push_back(values[r] >= 2 ? (flip(rng) == 0 ? 0 : 1) : 0);
  }
  auto ranked = learner::info_gain_rank(ig);
  std::vector<int> feature_ids, label_ids;
  for (int r = 0; r < 20; ++r) {
    feature_ids.push_back(static_cast<int>(ig.X(r, 0)));
    label_ids.push_back(ig.y[r]);
  }
  const double oracle_gain = test::info_gain_oracle(feature_ids, label_ids);
  if (ranked.empty()) {
    expect(oracle_gain <= 1e-9, "info gain excluded a feature with positive oracle gain");
  } else {
    expect(std::abs(ranked[0].second - oracle_gain) <= 1e-9,
           "info gain deviates from entropy oracle");
  }

  // AUC hand example: labels [+, -, +, -] on descending scores.
  expect(learner::auc({0.9, 0.8, 0.7, 0.6}, {true, false, true, false}) == 0.75,
         "AUC hand example != 0.75");
}

// ---------------------------------------------------------------- criterion 8

void criterion_statistics() {
  // Mann-Whitney hand example.
  auto mw = evaluate::mann_whitney({1, 2}, {3, 4});
  expect(mw.u == 0.0 && mw.exact, "mann-whitney: expected exact U = 0");
  expect(std::abs(mw.p_value - 1.0 / 3.0) <= 1e-12, "mann-whitney: expected p = 1/3");

  // Kappa.
  std::vector<std::string> raters = {"A", "B", "A", "C", "B"};
  expect(evaluate::cohen_kappa(raters, raters) == 1.0, "kappa != 1 on identical raters");
  expect(evaluate::cohen_kappa({"A", "A", "B", "B"}, {"A", "B", "A", "B"}) == 0.0,
         "kappa chance example != 0");
  expect(evaluate::cohen_kappa({"A", "B", "A", "B"}, {"B", "A", "B", "A"}) == -1.0,
         "kappa disagreement example != -1");

  // Cliff's delta: complete separation, identity, and the 1/3-medium case
  // (greater = 2, less = 1 out of 3 pairs).
  auto cd = evaluate::cliffs_delta({1, 2}, {3, 4});
  expect(cd.delta == -1.0 && cd.magnitude == "large", "cliffs delta separation example");
  auto cd0 = evaluate::cliffs_delta({1, 2, 3}, {1, 2, 3});
  expect(cd0.delta == 0.0 && cd0.magnitude == "negligible", "cliffs delta identity example");
  auto cd3 = evaluate::cliffs_delta({1, 3, 4}, {2});
  expect(std::abs(cd3.delta - 1.0 / 3.0) <= 1e-15 && cd3.magnitude == "medium",
         "cliffs delta 1/3 example");

  // Benjamini-Hochberg step-up.
  auto adj = evaluate::bh_adjust({0.01, 0.04, 0.03});
  expect(adj.size() == 3 && std::abs(adj[0] - 0.03) <= 1e-12 &&
             std::abs(adj[1] - 0.04) <= 1e-12 && std::abs(adj[2] - 0.04) <= 1e-12,
         "BH hand example deviates");
}

// ---------------------------------------------------------------- criterion 9

void criterion_end_to_end() {
  const auto t0 = std::chrono::steady_clock::now();
  test::TempDir tmp("acceptance_e2e");
  test::PipelineFixture fx = test::make_pipeline_fixture(tmp);

  pipeline::Config cfg;
  cfg.bundle_dirs = {fx.bundle_a, fx.bundle_b};
  cfg.model_path = fx.model_path;
  cfg.embeddings_path = fx.embeddings_path;
  cfg.keywords_path = fx.keywords_path;
  cfg.t_shift = 1.0;

  pipeline::TriageReport report = pipeline::run_pipeline(cfg);
  std::set<std::string> transcripts;
  bool schema_ok = !report.contexts.empty();
  for (const auto& ctx : report.contexts) {
    schema_ok = schema_ok && !ctx.game.empty();
    for (const auto& group : ctx.issues) {
      schema_ok = schema_ok && !group.label.empty() && group.label != "non_informative";
      for (const auto& cluster : group.clusters)
        for (const auto& seg : cluster.segments) {
          transcripts.insert(seg.transcript);
          schema_ok = schema_ok && !seg.id.empty() && !seg.bundle_id.empty() &&
                      seg.start_ms < seg.end_ms && seg.predicted_label == group.label;
        }
    }
  }
  expect(schema_ok, "report hierarchy violates its schema");
  expect(transcripts.count("oh no another glitch") == 1 &&
             transcripts.count("so much lag right now") == 1 &&
             transcripts.count("terrible stutter here") == 1,
         "seeded issue segments missing from the report");
  expect(transcripts.count("this bug is boring") == 0 &&
             transcripts.count("nice view from here") == 0,
         "non-informative or unmatched segments leaked into the report");

  pipeline::emit_report(report, tmp.file("r1.json"));
  pipeline::emit_report(pipeline::run_pipeline(cfg), tmp.file("r2.json"));
  auto slurp = [](const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
  };
  expect(slurp(tmp.file("r1.json")) == slurp(tmp.file("r2.json")),
         "re-running the pipeline changed the emitted report");
  expect(seconds_since(t0) < 30.0, "end-to-end suite exceeded 30 s");
}

// --------------------------------------------------------------- criterion 10

void criterion_harness() {
  // The published corpus-scale tables need the original labeled video corpus,
  // which is not shipped; what is checked here is that the table-producing
  // machinery (algorithm x preprocessing CV grid) runs end to end on a small
  // labeled stand-in and yields sane numbers. Pointing `gelid-cli evaluate
  // cv-table --data <corpus.csv>` at an equivalently formatted labeled corpus
  // recomputes the full tables.
  std::mt19937_64 rng(1010);
  learner::Dataset data = gaussian_dataset(25, 3.0, 1.0, rng);
  for (auto algo :
       {learner::Algorithm::random_forest, learner::Algorithm::knn, learner::Algorithm::logistic})
    for (bool use_smote : {false, true}) {
      learner::PipelineConfig config;
      config.algorithm = algo;
      config.use_smote = use_smote;
      auto metrics = learner::cross_validate(data, config, 5, 42);
      expect(std::isfinite(metrics.unweighted_mean_auc) && metrics.unweighted_mean_auc >= 0.0 &&
                 metrics.unweighted_mean_auc <= 1.0,
             "cv-table grid produced an out-of-range AUC");
    }
}

struct Criterion {
  int id;
  const char* name;
  std::function<void()> body;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "segmentation exactness", criterion_segmentation},
      {2, "ssim oracle equivalence", criterion_ssim},
      {3, "video-feature contract", criterion_video_features},
      {4, "mojofm correctness", criterion_mojofm},
      {5, "clustering oracles", criterion_clustering},
      {6, "epsilon heuristic", criterion_epsilon},
      {7, "learner sanity", criterion_learner},
      {8, "statistics", criterion_statistics},
      {9, "end-to-end smoke", criterion_end_to_end},
      {10, "corpus-table harness (corpus-dependent numbers not reproducible at desk scale)",
       criterion_harness},
  };

  int failed = 0;
  for (const Criterion& c : criteria) {
    g_problems.clear();
    try {
      c.body();
    } catch (const std::exception& e) {
      g_problems.push_back(std::string("exception: ") + e.what());
    }
    if (g_problems.empty()) {
      std::cout << "PASS criterion " << c.id << ": " << c.name << "\n";
    } else {
      ++failed;
      std::cout << "FAIL criterion " << c.id << ": " << c.name << " -- " << g_problems[0]
                << "\n";
    }
  }
  if (failed) std::cout << failed << " criterion(s) failed\n";
  return failed;
}
