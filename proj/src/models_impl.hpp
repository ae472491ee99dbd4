#ifndef GELID_SRC_MODELS_IMPL_HPP
#define GELID_SRC_MODELS_IMPL_HPP

#include "gelid/learner.hpp"

namespace gelid::learner::detail {

struct TreeNode {
  int feature = -1;        // -1 marks a leaf
  double threshold = 0.0;  // go left when x[feature] <= threshold
  int left = -1;
  int right = -1;
  int leaf_class = -1;
};

struct Tree {
  std::vector<TreeNode> nodes;
  int classify(const Eigen::VectorXd& x) const;
};

class ForestModel : public Model {
public:
  std::vector<Tree> trees;
  Eigen::VectorXd predict_proba(const Eigen::VectorXd& x) const override;
  nlohmann::json to_json() const override;
};

class KnnModel : public Model {
public:
  Eigen::MatrixXd train_x;
  std::vector<int> train_y;
  int k = 3;
  Eigen::VectorXd predict_proba(const Eigen::VectorXd& x) const override;
  nlohmann::json to_json() const override;
};

class LogisticModel : public Model {
public:
  Eigen::MatrixXd weights;  // one row per class, intercept in last column
  Eigen::VectorXd predict_proba(const Eigen::VectorXd& x) const override;
  nlohmann::json to_json() const override;
};

std::unique_ptr<ForestModel> train_forest(const Dataset& data, const TrainParams& params,
                                          std::uint64_t seed);
std::unique_ptr<KnnModel> train_knn(const Dataset& data, const TrainParams& params);
std::unique_ptr<LogisticModel> train_logistic(const Dataset& data, const TrainParams& params);

}  // namespace gelid::learner::detail

#endif
