#ifndef GELID_LEARNER_HPP
#define GELID_LEARNER_HPP

#include <Eigen/Core>
#include <cstdint>
#include <json.hpp>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gelid/dataset.hpp"

namespace gelid::learner {

struct Dataset {
  std::vector<std::string> feature_names;
  Eigen::MatrixXd X;  // one row per instance
  std::vector<int> y;  // index into classes
  std::vector<std::string> classes;

  Eigen::Index size() const { return X.rows(); }
  Eigen::Index n_features() const { return X.cols(); }
  std::vector<long> class_counts() const;
  Dataset select_features(const std::vector<int>& feature_indices) const;
  Dataset select_rows(const std::vector<Eigen::Index>& row_indices) const;
};

// binary_mode collapses labels to {informative, non_informative}.
Dataset make_dataset(const std::vector<DatasetRow>& rows, bool binary_mode);

// Oversamples every non-majority class to the majority count. Synthetic
// points are uniform interpolations between a minority point and one of its
// k nearest same-class neighbours. Original rows are preserved verbatim.
Dataset smote(const Dataset& data, int k, std::uint64_t seed);

// Features ranked by information gain against the label, computed after
// 10-bin equal-frequency discretization. Zero-gain features are excluded.
std::vector<std::pair<int, double>> info_gain_rank(const Dataset& data);

// Greedy forward selection in rank order, scored by 5-fold CV unweighted
// mean AUC of kNN(k=3). The first candidate is always retained; the search
// stops after 5 consecutive non-improvements.
std::vector<int> wrapper_select(const Dataset& data, const std::vector<int>& ranked,
                                std::uint64_t seed);

enum class Algorithm { random_forest, knn, logistic };
Algorithm algorithm_from_string(const std::string& s);
std::string to_string(Algorithm a);

struct TrainParams {
  int rf_trees = 100;
  int rf_mtry = 0;  // 0 = floor(sqrt(F))
  int knn_k = 3;
  double logistic_lambda = 1e-4;
  double logistic_tol = 1e-6;
};

class Model {
public:
  virtual ~Model() = default;
  virtual Eigen::VectorXd predict_proba(const Eigen::VectorXd& x) const = 0;
  virtual nlohmann::json to_json() const = 0;

  // Argmax of predict_proba; ties break toward the lower class index.
  int predict(const Eigen::VectorXd& x) const;

  std::vector<std::string> classes;
  std::vector<std::string> feature_names;
};

std::unique_ptr<Model> train(const Dataset& data, Algorithm algorithm, const TrainParams& params,
                             std::uint64_t seed);

nlohmann::json model_to_json(const Model& model);
std::unique_ptr<Model> model_from_json(const nlohmann::json& j);
void save_model(const Model& model, const std::string& path);
std::unique_ptr<Model> load_model(const std::string& path);

// Rank-based (Mann-Whitney) AUC; tied scores contribute 1/2.
double auc(const std::vector<double>& scores, const std::vector<bool>& positive);

struct ClassMetrics {
  std::optional<double> precision;  // absent when the class is never predicted
  double recall = 0.0;
  std::optional<double> f_measure;
  std::optional<double> auc;  // absent when the class has no positives or no negatives
  long support = 0;
};

struct Metrics {
  std::vector<ClassMetrics> per_class;
  std::vector<std::string> classes;
  double weighted_precision = 0.0;
  double weighted_recall = 0.0;
  double weighted_f = 0.0;
  double unweighted_mean_auc = 0.0;
  double accuracy = 0.0;
  Eigen::MatrixXi confusion;  // row = truth, col = predicted
};

Metrics compute_metrics(const std::vector<int>& predicted, const Eigen::MatrixXd& scores,
                        const std::vector<int>& truth, const std::vector<std::string>& classes);

struct PipelineConfig {
  bool use_smote = false;
  bool use_attr_select = false;
  Algorithm algorithm = Algorithm::random_forest;
  TrainParams params;
  int smote_k = 5;
};

// Stratified k-fold CV; SMOTE and attribute selection are fitted on the
// training folds only; metrics are computed on pooled out-of-fold
// predictions.
Metrics cross_validate(const Dataset& data, const PipelineConfig& config, int folds,
                       std::uint64_t seed);

}  // namespace gelid::learner

#endif
