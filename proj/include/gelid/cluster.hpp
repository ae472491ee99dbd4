#ifndef GELID_CLUSTER_HPP
#define GELID_CLUSTER_HPP

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "gelid/image.hpp"
#include "gelid/types.hpp"

namespace gelid {

// Symmetric, zero-diagonal, non-negative. Throws on violations.
void check_distance_matrix(const Eigen::MatrixXd& m);

enum class SimilarityMetric { ssim, hsv };

// d[i][j] = 1 - ssim(i, j) or 1 - pearson(hist(i), hist(j)).
Eigen::MatrixXd context_distances(const std::vector<Frame>& summaries, SimilarityMetric metric);

Eigen::MatrixXd euclidean_distances(const std::vector<Eigen::VectorXd>& vectors);

// Nearest-neighbour distances sorted ascending; returns the maximum adjacent
// gap. Needs n >= 3 so at least one gap exists.
double estimate_epsilon(const Eigen::MatrixXd& m);

// Cluster labels are dense from 0, in order of first appearance. Noise
// points come back as singleton clusters.
std::vector<int> dbscan(const Eigen::MatrixXd& m, double epsilon, int min_pts = 2);

// OPTICS ordering with reachability distances, clusters extracted by an
// epsilon cut (DBSCAN-equivalent extraction).
std::vector<int> optics(const Eigen::MatrixXd& m, double epsilon, int min_pts = 2);

struct OpticsOrdering {
  std::vector<int> order;
  std::vector<double> reachability;  // infinity for ordering starts
  std::vector<double> core_distance;
};
OpticsOrdering optics_ordering(const Eigen::MatrixXd& m, double epsilon, int min_pts);

// Flat-kernel mean shift. Default bandwidth = median pairwise Euclidean
// distance; modes closer than bandwidth/2 are merged.
std::vector<int> mean_shift(const std::vector<Eigen::VectorXd>& vectors,
                            std::optional<double> bandwidth = std::nullopt);

enum class ClusterAlgorithm { dbscan, optics, mean_shift };
ClusterAlgorithm cluster_algorithm_from_string(const std::string& s);

// Euclidean-distance clustering of per-segment feature vectors; epsilon is
// re-estimated for each clustering operation unless overridden.
Partition cluster_by_issue(const std::vector<std::pair<std::string, Eigen::VectorXd>>& segments,
                           ClusterAlgorithm algorithm,
                           std::optional<double> epsilon = std::nullopt, int min_pts = 2);

Partition to_partition(const std::vector<std::string>& ids, const std::vector<int>& labels);

}  // namespace gelid

#endif
