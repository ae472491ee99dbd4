#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "models_impl.hpp"

namespace gelid::learner::detail {

namespace {

// splitmix64; decorrelates per-tree streams derived from the master seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double gini(const std::vector<long>& counts, long total) {
  if (total == 0) return 0.0;
  double g = 1.0;
  for (long c : counts) {
    double p = static_cast<double>(c) / static_cast<double>(total);
    g -= p * p;
  }
  return g;
}

struct TreeBuilder {
  const Dataset& data;
  int n_classes;
  int mtry;
  std::mt19937_64 rng;
  std::vector<TreeNode> nodes;

  int majority(const std::vector<Eigen::Index>& rows) const {
    std::vector<long> counts(n_classes, 0);
    for (Eigen::Index r : rows) counts[data.y[r]]++;
    return static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin());
  }

  int build(std::vector<Eigen::Index>& rows) {
    std::vector<long> counts(n_classes, 0);
    for (Eigen::Index r : rows) counts[data.y[r]]++;
    const long total = static_cast<long>(rows.size());
    const double node_gini = gini(counts, total);

    const int node_id = static_cast<int>(nodes.size());
    nodes.emplace_back();
    if (node_gini == 0.0 || total < 2) {
      nodes[node_id].leaf_class = majority(rows);
      return node_id;
    }

    // Sample mtry candidate features without replacement.
    std::vector<int> features(data.n_features());
    std::iota(features.begin(), features.end(), 0);
    for (int i = 0; i < mtry; ++i) {
      std::uniform_int_distribution<int> pick(i, static_cast<int>(features.size()) - 1);
      std::swap(features[i], features[pick(rng)]);
    }

    int best_feature = -1;
    double best_threshold = 0.0;
    double best_impurity = node_gini;
    for (int fi = 0; fi < mtry; ++fi) {
      const int f = features[fi];
      std::vector<std::pair<double, int>> vals;
      vals.reserve(rows.size());
      for (Eigen::Index r : rows) vals.emplace_back(data.X(r, f), data.y[r]);
      std::sort(vals.begin(), vals.end());

      std::vector<long> left(n_classes, 0);
      std::vector<long> right = counts;
      for (size_t i = 0; i + 1 < vals.size(); ++i) {
        left[vals[i].second]++;
        right[vals[i].second]--;
        if (vals[i].first == vals[i + 1].first) continue;
        const long nl = static_cast<long>(i) + 1;
        const long nr = total - nl;
        double impurity = (nl * gini(left, nl) + nr * gini(right, nr)) / total;
        if (impurity < best_impurity - 1e-12) {
          best_impurity = impurity;
          best_feature = f;
          best_threshold = (vals[i].first + vals[i + 1].first) / 2.0;
        }
      }
    }

    if (best_feature < 0) {
      nodes[node_id].leaf_class = majority(rows);
      return node_id;
    }

    std::vector<Eigen::Index> left_rows, right_rows;
    for (Eigen::Index r : rows)
      (data.X(r, best_feature) <= best_threshold ? left_rows : right_rows).push_back(r);
    rows.clear();
    rows.shrink_to_fit();

    nodes[node_id].feature = best_feature;
    nodes[node_id].threshold = best_threshold;
    nodes[node_id].left = build(left_rows);
    nodes[node_id].right = build(right_rows);
    return node_id;
  }
};

}  // namespace

int Tree::classify(const Eigen::VectorXd& x) const {
  int node = 0;
  while (nodes[node].feature >= 0)
    node = x[nodes[node].feature] <= nodes[node].threshold ? nodes[node].left : nodes[node].right;
  return nodes[node].leaf_class;
}

Eigen::VectorXd ForestModel::predict_proba(const Eigen::VectorXd& x) const {
  Eigen::VectorXd votes = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(classes.size()));
  for (const Tree& t : trees) votes[t.classify(x)] += 1.0;
  return votes / static_cast<double>(trees.size());
}

nlohmann::json ForestModel::to_json() const {
  nlohmann::json j;
  j["algorithm"] = "random_forest";
  nlohmann::json jt = nlohmann::json::array();
  for (const Tree& t : trees) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const TreeNode& n : t.nodes)
      nodes.push_back({n.feature, n.threshold, n.left, n.right, n.leaf_class});
    jt.push_back(std::move(nodes));
  }
  j["trees"] = std::move(jt);
  return j;
}

Eigen::VectorXd KnnModel::predict_proba(const Eigen::VectorXd& x) const {
  const Eigen::Index n = train_x.rows();
  std::vector<std::pair<double, Eigen::Index>> dist;
  dist.reserve(n);
  for (Eigen::Index r = 0; r < n; ++r)
    dist.emplace_back((train_x.row(r).transpose() - x).norm(), r);
  const Eigen::Index kk = std::min<Eigen::Index>(k, n);
  // Stable ordering: distance, then training row index.
  std::partial_sort(dist.begin(), dist.begin() + kk, dist.end());
  Eigen::VectorXd proba = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(classes.size()));
  for (Eigen::Index i = 0; i < kk; ++i) proba[train_y[dist[i].second]] += 1.0;
  return proba / static_cast<double>(kk);
}

nlohmann::json KnnModel::to_json() const {
  nlohmann::json j;
  j["algorithm"] = "knn";
  j["k"] = k;
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < train_x.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < train_x.cols(); ++c) row.push_back(train_x(r, c));
    rows.push_back(std::move(row));
  }
  j["train_x"] = std::move(rows);
  j["train_y"] = train_y;
  return j;
}

Eigen::VectorXd LogisticModel::predict_proba(const Eigen::VectorXd& x) const {
  Eigen::VectorXd scores(weights.rows());
  for (Eigen::Index c = 0; c < weights.rows(); ++c) {
    double z = weights(c, weights.cols() - 1) + weights.row(c).head(weights.cols() - 1).dot(x);
    scores[c] = 1.0 / (1.0 + std::exp(-z));
  }
  const double total = scores.sum();
  if (total <= 0) return Eigen::VectorXd::Constant(weights.rows(), 1.0 / weights.rows());
  return scores / total;
}

nlohmann::json LogisticModel::to_json() const {
  nlohmann::json j;
  j["algorithm"] = "logistic";
  nlohmann::json w = nlohmann::json::array();
  for (Eigen::Index r = 0; r < weights.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < weights.cols(); ++c) row.push_back(weights(r, c));
    w.push_back(std::move(row));
  }
  j["weights"] = std::move(w);
  return j;
}

std::unique_ptr<ForestModel> train_forest(const Dataset& data, const TrainParams& params,
                                          std::uint64_t seed) {
  auto model = std::make_unique<ForestModel>();
  model->classes = data.classes;
  model->feature_names = data.feature_names;
  const int mtry = params.rf_mtry > 0
                       ? std::min<int>(params.rf_mtry, static_cast<int>(data.n_features()))
                       : std::max(1, static_cast<int>(std::floor(std::sqrt(
                                         static_cast<double>(data.n_features())))));
  model->trees.resize(params.rf_trees);
  for (int t = 0; t < params.rf_trees; ++t) {
    TreeBuilder builder{data, static_cast<int>(data.classes.size()), mtry,
                        std::mt19937_64(mix_seed(seed, t)),
                        {}};
    std::vector<Eigen::Index> sample(data.size());
    std::uniform_int_distribution<Eigen::Index> pick(0, data.size() - 1);
    for (Eigen::Index i = 0; i < data.size(); ++i) sample[i] = pick(builder.rng);
    builder.build(sample);
    model->trees[t].nodes = std::move(builder.nodes);
  }
  return model;
}

std::unique_ptr<KnnModel> train_knn(const Dataset& data, const TrainParams& params) {
  auto model = std::make_unique<KnnModel>();
  model->classes = data.classes;
  model->feature_names = data.feature_names;
  model->train_x = data.X;
  model->train_y = data.y;
  model->k = params.knn_k;
  return model;
}

std::unique_ptr<LogisticModel> train_logistic(const Dataset& data, const TrainParams& params) {
  auto model = std::make_unique<LogisticModel>();
  model->classes = data.classes;
  model->feature_names = data.feature_names;
  const Eigen::Index n = data.size();
  const Eigen::Index f = data.n_features();
  model->weights = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(data.classes.size()), f + 1);

  // One-vs-rest binary fits with L2 penalty, batch gradient descent with
  // step halving on objective increase.
  for (size_t cls = 0; cls < data.classes.size(); ++cls) {
    Eigen::VectorXd target(n);
    for (Eigen::Index r = 0; r < n; ++r) target[r] = data.y[r] == static_cast<int>(cls) ? 1.0 : 0.0;
    Eigen::VectorXd w = Eigen::VectorXd::Zero(f + 1);
    auto objective = [&](const Eigen::VectorXd& wv) {
      double obj = 0.0;
      for (Eigen::Index r = 0; r < n; ++r) {
        double z = wv[f] + wv.head(f).dot(data.X.row(r).transpose());
        obj += std::log1p(std::exp(-std::abs(z))) + std::max(z, 0.0) - target[r] * z;
      }
      return obj / n + 0.5 * params.logistic_lambda * wv.head(f).squaredNorm();
    };
    double step = 1.0;
    double obj = objective(w);
    for (int iter = 0; iter < 5000; ++iter) {
      Eigen::VectorXd grad = Eigen::VectorXd::Zero(f + 1);
      for (Eigen::Index r = 0; r < n; ++r) {
        double z = w[f] + w.head(f).dot(data.X.row(r).transpose());
        double p = 1.0 / (1.0 + std::exp(-z));
        grad.head(f) += (p - target[r]) * data.X.row(r).transpose();
        grad[f] += p - target[r];
      }
      grad /= static_cast<double>(n);
      grad.head(f) += params.logistic_lambda * w.head(f);
      if (grad.norm() < params.logistic_tol) break;
      Eigen::VectorXd next = w - step * grad;
      double next_obj = objective(next);
      while (next_obj > obj && step > 1e-12) {
        step /= 2;
        next = w - step * grad;
        next_obj = objective(next);
      }
      w = next;
      obj = next_obj;
      step *= 1.1;
    }
    model->weights.row(static_cast<Eigen::Index>(cls)) = w.transpose();
  }
  return model;
}

}  // namespace gelid::learner::detail
