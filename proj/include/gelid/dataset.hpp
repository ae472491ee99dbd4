#ifndef GELID_DATASET_HPP
#define GELID_DATASET_HPP

#include <Eigen/Core>
#include <string>
#include <utility>
#include <vector>

#include "gelid/types.hpp"

namespace gelid {

// Named numeric features for one segment.
struct FeatureVector {
  std::vector<std::string> names;
  Eigen::VectorXd values;
};

using DatasetRow = std::pair<FeatureVector, IssueType>;

// CSV with header "<f1>,...,<fn>,label" plus a sidecar "<path>.schema.json"
// recording feature names and the label domain. Doubles are written with 17
// significant digits so load(persist(x)) == x for finite values.
void persist_dataset(const std::vector<DatasetRow>& rows, const std::string& path);
std::vector<DatasetRow> load_dataset(const std::string& path);

}  // namespace gelid

#endif
