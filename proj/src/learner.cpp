#include "gelid/learner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>
#include <set>

#include "models_impl.hpp"

namespace gelid::learner {

std::vector<long> Dataset::class_counts() const {
  std::vector<long> counts(classes.size(), 0);
  for (int label : y) counts[label]++;
  return counts;
}

Dataset Dataset::select_features(const std::vector<int>& feature_indices) const {
  Dataset out;
  out.classes = classes;
  out.y = y;
  out.X.resize(X.rows(), static_cast<Eigen::Index>(feature_indices.size()));
  for (size_t i = 0; i < feature_indices.size(); ++i) {
    out.feature_names.push_back(feature_names[feature_indices[i]]);
    out.X.col(static_cast<Eigen::Index>(i)) = X.col(feature_indices[i]);
  }
  return out;
}

Dataset Dataset::select_rows(const std::vector<Eigen::Index>& row_indices) const {
  Dataset out;
  out.classes = classes;
  out.feature_names = feature_names;
  out.X.resize(static_cast<Eigen::Index>(row_indices.size()), X.cols());
  out.y.reserve(row_indices.size());
  for (size_t i = 0; i < row_indices.size(); ++i) {
    out.X.row(static_cast<Eigen::Index>(i)) = X.row(row_indices[i]);
    out.y.push_back(y[row_indices[i]]);
  }
  return out;
}

Dataset make_dataset(const std::vector<DatasetRow>& rows, bool binary_mode) {
  if (rows.empty()) throw ValidationError("empty dataset");
  Dataset data;
  data.feature_names = rows.front().first.names;
  if (binary_mode) {
    data.classes = {"informative", "non_informative"};
  } else {
    for (IssueType t : all_issue_types()) data.classes.push_back(to_string(t));
  }
  data.X.resize(static_cast<Eigen::Index>(rows.size()),
                static_cast<Eigen::Index>(data.feature_names.size()));
  for (size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].first.names != data.feature_names)
      throw ValidationError("inconsistent feature names at row " + std::to_string(r));
    data.X.row(static_cast<Eigen::Index>(r)) = rows[r].first.values.transpose();
    if (binary_mode) {
      data.y.push_back(rows[r].second == IssueType::non_informative ? 1 : 0);
    } else {
      const auto& all = all_issue_types();
      data.y.push_back(static_cast<int>(
          std::find(all.begin(), all.end(), rows[r].second) - all.begin()));
    }
  }
  return data;
}

Dataset smote(const Dataset& data, int k, std::uint64_t seed) {
  if (k < 1) throw ValidationError("smote: k must be >= 1");
  std::vector<long> counts = data.class_counts();
  const long majority = *std::max_element(counts.begin(), counts.end());
  for (size_t c = 0; c < counts.size(); ++c)
    if (counts[c] == 1 && counts[c] != majority)
      throw ValidationError("smote: class '" + data.classes[c] +
                            "' has a single member; merge or drop it before balancing");

  Dataset out = data;
  std::mt19937_64 rng(seed);
  std::vector<Eigen::VectorXd> synth_x;
  std::vector<int> synth_y;
  for (size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] == 0 || counts[c] == majority) continue;
    std::vector<Eigen::Index> members;
    for (Eigen::Index r = 0; r < data.size(); ++r)
      if (data.y[r] == static_cast<int>(c)) members.push_back(r);

    // k nearest same-class neighbours per member, tie-broken by row index.
    const int kk = std::min<int>(k, static_cast<int>(members.size()) - 1);
    std::vector<std::vector<Eigen::Index>> neighbours(members.size());
    for (size_t i = 0; i < members.size(); ++i) {
      std::vector<std::pair<double, Eigen::Index>> dist;
      for (size_t j = 0; j < members.size(); ++j) {
        if (i == j) continue;
        dist.emplace_back((data.X.row(members[i]) - data.X.row(members[j])).norm(), members[j]);
      }
      std::partial_sort(dist.begin(), dist.begin() + kk, dist.end());
      for (int n = 0; n < kk; ++n) neighbours[i].push_back(dist[n].second);
    }

    std::uniform_int_distribution<size_t> pick_member(0, members.size() - 1);
    std::uniform_int_distribution<int> pick_neighbour(0, kk - 1);
    std::uniform_real_distribution<double> lambda(0.0, 1.0);
    for (long need = majority - counts[c]; need > 0; --need) {
      const size_t i = pick_member(rng);
      const Eigen::Index q = neighbours[i][pick_neighbour(rng)];
      const double l = lambda(rng);
      Eigen::VectorXd p = data.X.row(members[i]).transpose();
      synth_x.push_back(p + l * (data.X.row(q).transpose() - p));
      synth_y.push_back(static_cast<int>(c));
    }
  }

  const Eigen::Index old_n = out.X.rows();
  out.X.conservativeResize(old_n + static_cast<Eigen::Index>(synth_x.size()), Eigen::NoChange);
  for (size_t i = 0; i < synth_x.size(); ++i) {
    out.X.row(old_n + static_cast<Eigen::Index>(i)) = synth_x[i].transpose();
    out.y.push_back(synth_y[i]);
  }
  return out;
}

namespace {

double entropy_bits(const std::vector<long>& counts, long total) {
  if (total == 0) return 0.0;
  double h = 0.0;
  for (long c : counts) {
    if (c == 0) continue;
    double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h;
}

// Equal-frequency discretization into at most `bins` bins; returns the bin
// index of every row. Tied values always land in the same bin.
std::vector<int> discretize(const Eigen::VectorXd& col, int bins) {
  const Eigen::Index n = col.size();
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index a, Eigen::Index b) { return col[a] < col[b]; });
  std::vector<int> bin(n, 0);
  int current = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (i > 0) {
      const bool boundary = (i * bins) / n != ((i - 1) * bins) / n;
      if (boundary && col[order[i]] != col[order[i - 1]]) ++current;
    }
    bin[order[i]] = current;
  }
  return bin;
}

}  // namespace

std::vector<std::pair<int, double>> info_gain_rank(const Dataset& data) {
  const long n = data.size();
  std::vector<long> label_counts = data.class_counts();
  const double h_y = entropy_bits(label_counts, n);

  std::vector<std::pair<int, double>> ranked;
  for (Eigen::Index f = 0; f < data.n_features(); ++f) {
    std::vector<int> bins = discretize(data.X.col(f), 10);
    const int n_bins = *std::max_element(bins.begin(), bins.end()) + 1;
    std::vector<std::vector<long>> joint(n_bins, std::vector<long>(data.classes.size(), 0));
    std::vector<long> bin_totals(n_bins, 0);
    for (long r = 0; r < n; ++r) {
      joint[bins[r]][data.y[r]]++;
      bin_totals[bins[r]]++;
    }
    double h_cond = 0.0;
    for (int b = 0; b < n_bins; ++b)
      h_cond += static_cast<double>(bin_totals[b]) / n * entropy_bits(joint[b], bin_totals[b]);
    const double gain = h_y - h_cond;
    if (gain > 1e-12) ranked.emplace_back(static_cast<int>(f), gain);
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return ranked;
}

namespace {

// Pooled out-of-fold predictions for an inner-CV scorer.
double knn_cv_auc(const Dataset& data, const std::vector<int>& features, std::uint64_t seed) {
  Dataset proj = data.select_features(features);
  PipelineConfig cfg;
  cfg.algorithm = Algorithm::knn;
  Metrics m = cross_validate(proj, cfg, 5, seed);
  return m.unweighted_mean_auc;
}

}  // namespace

std::vector<int> wrapper_select(const Dataset& data, const std::vector<int>& ranked,
                                std::uint64_t seed) {
  if (ranked.empty()) throw ValidationError("wrapper_select: empty ranking");
  std::vector<int> selected = {ranked[0]};
  double best = knn_cv_auc(data, selected, seed);
  int stale = 0;
  for (size_t i = 1; i < ranked.size() && stale < 5; ++i) {
    std::vector<int> candidate = selected;
    candidate.push_back(ranked[i]);
    const double score = knn_cv_auc(data, candidate, seed);
    if (score > best + 1e-6) {
      selected = std::move(candidate);
      best = score;
      stale = 0;
    } else {
      ++stale;
    }
  }
  return selected;
}

Algorithm algorithm_from_string(const std::string& s) {
  if (s == "random_forest" || s == "rf") return Algorithm::random_forest;
  if (s == "knn") return Algorithm::knn;
  if (s == "logistic") return Algorithm::logistic;
  throw ValidationError("unknown algorithm: " + s);
}

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::random_forest: return "random_forest";
    case Algorithm::knn: return "knn";
    case Algorithm::logistic: return "logistic";
  }
  throw Error("unreachable algorithm");
}

int Model::predict(const Eigen::VectorXd& x) const {
  if (x.size() != static_cast<Eigen::Index>(feature_names.size()))
    throw ValidationError("predict: feature arity mismatch");
  Eigen::VectorXd proba = predict_proba(x);
  int best = 0;
  for (Eigen::Index c = 1; c < proba.size(); ++c)
    if (proba[c] > proba[best]) best = static_cast<int>(c);
  return best;
}

std::unique_ptr<Model> train(const Dataset& data, Algorithm algorithm, const TrainParams& params,
                             std::uint64_t seed) {
  if (data.size() == 0) throw ValidationError("train: empty dataset");
  std::set<int> distinct(data.y.begin(), data.y.end());
  if (distinct.size() < 2) throw ValidationError("train: dataset has a single class");
  switch (algorithm) {
    case Algorithm::random_forest: return detail::train_forest(data, params, seed);
    case Algorithm::knn: return detail::train_knn(data, params);
    case Algorithm::logistic: return detail::train_logistic(data, params);
  }
  throw Error("unreachable algorithm");
}

nlohmann::json model_to_json(const Model& model) {
  nlohmann::json j = model.to_json();
  j["version"] = 1;
  j["classes"] = model.classes;
  j["feature_schema"] = model.feature_names;
  return j;
}

std::unique_ptr<Model> model_from_json(const nlohmann::json& j) {
  if (j.value("version", 0) != 1) throw ValidationError("unsupported model version");
  const std::string algo = j.at("algorithm").get<std::string>();
  std::unique_ptr<Model> model;
  if (algo == "random_forest") {
    auto m = std::make_unique<detail::ForestModel>();
    for (const auto& jt : j.at("trees")) {
      detail::Tree tree;
      for (const auto& jn : jt) {
        detail::TreeNode node;
        node.feature = jn.at(0).get<int>();
        node.threshold = jn.at(1).get<double>();
        node.left = jn.at(2).get<int>();
        node.right = jn.at(3).get<int>();
        node.leaf_class = jn.at(4).get<int>();
        tree.nodes.push_back(node);
      }
      m->trees.push_back(std::move(tree));
    }
    model = std::move(m);
  } else if (algo == "knn") {
    auto m = std::make_unique<detail::KnnModel>();
    m->k = j.at("k").get<int>();
    const auto& rows = j.at("train_x");
    if (!rows.empty()) {
      m->train_x.resize(static_cast<Eigen::Index>(rows.size()),
                        static_cast<Eigen::Index>(rows[0].size()));
      for (size_t r = 0; r < rows.size(); ++r)
        for (size_t c = 0; c < rows[r].size(); ++c)
          m->train_x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
              rows[r][c].get<double>();
    }
    m->train_y = j.at("train_y").get<std::vector<int>>();
    model = std::move(m);
  } else if (algo == "logistic") {
    auto m = std::make_unique<detail::LogisticModel>();
    const auto& w = j.at("weights");
    m->weights.resize(static_cast<Eigen::Index>(w.size()),
                      static_cast<Eigen::Index>(w[0].size()));
    for (size_t r = 0; r < w.size(); ++r)
      for (size_t c = 0; c < w[r].size(); ++c)
        m->weights(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
            w[r][c].get<double>();
    model = std::move(m);
  } else {
    throw ValidationError("unknown model algorithm: " + algo);
  }
  model->classes = j.at("classes").get<std::vector<std::string>>();
  model->feature_names = j.at("feature_schema").get<std::vector<std::string>>();
  return model;
}

void save_model(const Model& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write model file: " + path);
  out << model_to_json(model).dump(2) << '\n';
}

std::unique_ptr<Model> load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read model file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("invalid model JSON in " + path + ": " + e.what());
  }
  return model_from_json(j);
}

double auc(const std::vector<double>& scores, const std::vector<bool>& positive) {
  if (scores.size() != positive.size()) throw ValidationError("auc: length mismatch");
  long n_pos = 0, n_neg = 0;
  for (bool p : positive) (p ? n_pos : n_neg)++;
  if (n_pos == 0 || n_neg == 0) throw ValidationError("auc: need both classes");

  // Midranks over the pooled sample; U from the positive rank sum.
  std::vector<size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return scores[a] < scores[b]; });
  std::vector<double> rank(scores.size());
  size_t i = 0;
  while (i < order.size()) {
    size_t j = i;
    while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double mid = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (size_t t = i; t <= j; ++t) rank[order[t]] = mid;
    i = j + 1;
  }
  double pos_rank_sum = 0.0;
  for (size_t t = 0; t < scores.size(); ++t)
    if (positive[t]) pos_rank_sum += rank[t];
  const double u = pos_rank_sum - static_cast<double>(n_pos) * (n_pos + 1) / 2.0;
  return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

Metrics compute_metrics(const std::vector<int>& predicted, const Eigen::MatrixXd& scores,
                        const std::vector<int>& truth, const std::vector<std::string>& classes) {
  if (predicted.size() != truth.size() ||
      scores.rows() != static_cast<Eigen::Index>(truth.size()))
    throw ValidationError("compute_metrics: length mismatch");
  const int n_classes = static_cast<int>(classes.size());
  Metrics m;
  m.classes = classes;
  m.confusion = Eigen::MatrixXi::Zero(n_classes, n_classes);
  for (size_t i = 0; i < truth.size(); ++i) m.confusion(truth[i], predicted[i])++;

  long correct = 0;
  for (size_t i = 0; i < truth.size(); ++i)
    if (truth[i] == predicted[i]) ++correct;
  m.accuracy = static_cast<double>(correct) / static_cast<double>(truth.size());

  double auc_sum = 0.0;
  int auc_n = 0;
  long total_support = 0;
  for (int c = 0; c < n_classes; ++c) {
    ClassMetrics cm;
    const long tp = m.confusion(c, c);
    const long fp = m.confusion.col(c).sum() - tp;
    const long fn = m.confusion.row(c).sum() - tp;
    cm.support = tp + fn;
    total_support += cm.support;
    if (tp + fp > 0) cm.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    cm.recall = cm.support > 0 ? static_cast<double>(tp) / static_cast<double>(cm.support) : 0.0;
    if (cm.precision && *cm.precision + cm.recall > 0)
      cm.f_measure = 2 * *cm.precision * cm.recall / (*cm.precision + cm.recall);
    else if (cm.precision)
      cm.f_measure = 0.0;

    if (cm.support > 0 && cm.support < static_cast<long>(truth.size())) {
      std::vector<double> class_scores;
      std::vector<bool> positives;
      for (size_t i = 0; i < truth.size(); ++i) {
        class_scores.push_back(scores(static_cast<Eigen::Index>(i), c));
        positives.push_back(truth[i] == c);
      }
      cm.auc = auc(class_scores, positives);
      auc_sum += *cm.auc;
      ++auc_n;
    }
    m.per_class.push_back(cm);
  }
  m.unweighted_mean_auc = auc_n > 0 ? auc_sum / auc_n : 0.0;

  // Weighted means; absent precision contributes 0 at its class weight.
  for (int c = 0; c < n_classes; ++c) {
    const double w = static_cast<double>(m.per_class[c].support) / total_support;
    m.weighted_precision += w * m.per_class[c].precision.value_or(0.0);
    m.weighted_recall += w * m.per_class[c].recall;
    m.weighted_f += w * m.per_class[c].f_measure.value_or(0.0);
  }
  return m;
}

Metrics cross_validate(const Dataset& data, const PipelineConfig& config, int folds,
                       std::uint64_t seed) {
  if (data.size() == 0) throw ValidationError("cross_validate: empty dataset");
  std::vector<long> counts = data.class_counts();
  long min_class = data.size();
  for (long c : counts)
    if (c > 0) min_class = std::min(min_class, c);
  if (min_class < folds) {
    std::cerr << "warning: reducing folds from " << folds << " to " << min_class
              << " (smallest class size)\n";
    folds = static_cast<int>(std::max<long>(2, min_class));
  }

  // Stratified assignment: shuffle per class, deal round-robin.
  std::mt19937_64 rng(seed);
  std::vector<int> fold_of(data.size(), 0);
  for (size_t c = 0; c < counts.size(); ++c) {
    std::vector<Eigen::Index> members;
    for (Eigen::Index r = 0; r < data.size(); ++r)
      if (data.y[r] == static_cast<int>(c)) members.push_back(r);
    std::shuffle(members.begin(), members.end(), rng);
    for (size_t i = 0; i < members.size(); ++i)
      fold_of[members[i]] = static_cast<int>(i % folds);
  }

  std::vector<int> pooled_pred(data.size(), 0);
  Eigen::MatrixXd pooled_scores =
      Eigen::MatrixXd::Zero(data.size(), static_cast<Eigen::Index>(data.classes.size()));
  for (int fold = 0; fold < folds; ++fold) {
    std::vector<Eigen::Index> train_rows, test_rows;
    for (Eigen::Index r = 0; r < data.size(); ++r)
      (fold_of[r] == fold ? test_rows : train_rows).push_back(r);
    Dataset train_set = data.select_rows(train_rows);

    std::vector<int> features(data.n_features());
    std::iota(features.begin(), features.end(), 0);
    if (config.use_attr_select) {
      auto ranked = info_gain_rank(train_set);
      if (!ranked.empty()) {
        std::vector<int> rank_order;
        for (const auto& [f, gain] : ranked) rank_order.push_back(f);
        features = wrapper_select(train_set, rank_order, seed + fold);
        train_set = train_set.select_features(features);
      }
    }
    if (config.use_smote) train_set = smote(train_set, config.smote_k, seed + fold);

    auto model = train(train_set, config.algorithm, config.params, seed + fold);
    for (Eigen::Index r : test_rows) {
      Eigen::VectorXd x(static_cast<Eigen::Index>(features.size()));
      for (size_t i = 0; i < features.size(); ++i)
        x[static_cast<Eigen::Index>(i)] = data.X(r, features[i]);
      pooled_scores.row(r) = model->predict_proba(x).transpose();
      pooled_pred[r] = model->predict(x);
    }
  }
  return compute_metrics(pooled_pred, pooled_scores, data.y, data.classes);
}

}  // namespace gelid::learner
