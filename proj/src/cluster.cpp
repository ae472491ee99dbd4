#include "gelid/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "gelid/visionfeat.hpp"

namespace gelid {

void check_distance_matrix(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw ValidationError("distance matrix must be square");
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (m(i, i) != 0.0) throw ValidationError("distance matrix diagonal must be zero");
    for (Eigen::Index j = i + 1; j < m.cols(); ++j) {
      if (m(i, j) < 0) throw ValidationError("distance matrix must be non-negative");
      if (m(i, j) != m(j, i)) throw ValidationError("distance matrix must be symmetric");
    }
  }
}

Eigen::MatrixXd context_distances(const std::vector<Frame>& summaries, SimilarityMetric metric) {
  if (summaries.size() < 2) throw ValidationError("context_distances: need at least 2 summaries");
  const Eigen::Index n = static_cast<Eigen::Index>(summaries.size());
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  std::vector<Eigen::VectorXd> hists;
  if (metric == SimilarityMetric::hsv)
    for (const Frame& f : summaries) hists.push_back(hsv_hist(f));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double sim = metric == SimilarityMetric::ssim
                             ? ssim(summaries[i], summaries[j])
                             : pearson(hists[i], hists[j]);
      d(i, j) = d(j, i) = 1.0 - sim;
    }
  }
  return d;
}

Eigen::MatrixXd euclidean_distances(const std::vector<Eigen::VectorXd>& vectors) {
  const Eigen::Index n = static_cast<Eigen::Index>(vectors.size());
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) d(i, j) = d(j, i) = (vectors[i] - vectors[j]).norm();
  return d;
}

double estimate_epsilon(const Eigen::MatrixXd& m) {
  check_distance_matrix(m);
  const Eigen::Index n = m.rows();
  if (n < 3) throw ValidationError("estimate_epsilon: need at least 3 elements");
  std::vector<double> nn(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < n; ++j)
      if (j != i) best = std::min(best, m(i, j));
    nn[i] = best;
  }
  std::sort(nn.begin(), nn.end());
  double max_gap = 0.0;
  for (Eigen::Index i = 0; i + 1 < n; ++i) max_gap = std::max(max_gap, nn[i + 1] - nn[i]);
  return max_gap;
}

namespace {

std::vector<int> relabel_dense(std::vector<int>& labels) {
  // Noise (-1) becomes singleton clusters; ids dense in first-appearance order.
  std::vector<int> out(labels.size(), -1);
  int next = 0;
  std::vector<int> remap;
  for (size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0) {
      out[i] = next++;
    } else {
      while (static_cast<size_t>(labels[i]) >= remap.size()) remap.push_back(-1);
      if (remap[labels[i]] < 0) remap[labels[i]] = next++;
      out[i] = remap[labels[i]];
    }
  }
  return out;
}

}  // namespace

std::vector<int> dbscan(const Eigen::MatrixXd& m, double epsilon, int min_pts) {
  check_distance_matrix(m);
  if (epsilon < 0) throw ValidationError("dbscan: epsilon must be >= 0");
  const Eigen::Index n = m.rows();
  std::vector<int> labels(n, -1);
  std::vector<char> visited(n, 0);

  auto neighbours = [&](Eigen::Index p) {
    std::vector<Eigen::Index> out;
    for (Eigen::Index q = 0; q < n; ++q)
      if (m(p, q) <= epsilon) out.push_back(q);
    return out;
  };

  int cluster = 0;
  for (Eigen::Index p = 0; p < n; ++p) {
    if (visited[p]) continue;
    visited[p] = 1;
    std::vector<Eigen::Index> seeds = neighbours(p);
    if (static_cast<int>(seeds.size()) < min_pts) continue;  // stays noise unless reached later
    labels[p] = cluster;
    for (size_t i = 0; i < seeds.size(); ++i) {
      const Eigen::Index q = seeds[i];
      if (labels[q] < 0) labels[q] = cluster;
      if (visited[q]) continue;
      visited[q] = 1;
      std::vector<Eigen::Index> qn = neighbours(q);
      if (static_cast<int>(qn.size()) >= min_pts)
        seeds.insert(seeds.end(), qn.begin(), qn.end());
    }
    ++cluster;
  }
  return relabel_dense(labels);
}

OpticsOrdering optics_ordering(const Eigen::MatrixXd& m, double epsilon, int min_pts) {
  check_distance_matrix(m);
  if (epsilon < 0) throw ValidationError("optics: epsilon must be >= 0");
  const Eigen::Index n = m.rows();
  const double inf = std::numeric_limits<double>::infinity();

  OpticsOrdering res;
  res.reachability.assign(n, inf);
  res.core_distance.assign(n, inf);

  for (Eigen::Index p = 0; p < n; ++p) {
    std::vector<double> d;
    for (Eigen::Index q = 0; q < n; ++q)
      if (m(p, q) <= epsilon) d.push_back(m(p, q));
    if (static_cast<int>(d.size()) >= min_pts) {
      std::nth_element(d.begin(), d.begin() + (min_pts - 1), d.end());
      res.core_distance[p] = d[min_pts - 1];
    }
  }

  std::vector<char> processed(n, 0);
  for (Eigen::Index start = 0; start < n; ++start) {
    if (processed[start]) continue;
    // Priority seed list keyed by current reachability, index tie-break.
    using Entry = std::pair<double, Eigen::Index>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> seeds;
    std::vector<double> reach(n, inf);
    seeds.emplace(inf, start);
    while (!seeds.empty()) {
      auto [r, p] = seeds.top();
      seeds.pop();
      if (processed[p] || r > reach[p]) continue;
      processed[p] = 1;
      res.order.push_back(static_cast<int>(p));
      res.reachability[p] = reach[p];
      if (res.core_distance[p] == inf) continue;
      for (Eigen::Index q = 0; q < n; ++q) {
        if (processed[q] || m(p, q) > epsilon) continue;
        const double new_reach = std::max(res.core_distance[p], m(p, q));
        if (new_reach < reach[q]) {
          reach[q] = new_reach;
          seeds.emplace(new_reach, q);
        }
      }
    }
  }
  return res;
}

std::vector<int> optics(const Eigen::MatrixXd& m, double epsilon, int min_pts) {
  OpticsOrdering ord = optics_ordering(m, epsilon, min_pts);
  const Eigen::Index n = m.rows();
  std::vector<int> labels(n, -1);
  int cluster = -1;
  for (int p : ord.order) {
    if (ord.reachability[p] > epsilon) {
      if (ord.core_distance[p] <= epsilon) {
        ++cluster;
        labels[p] = cluster;
      }  // else noise
    } else {
      labels[p] = cluster;
    }
  }
  return relabel_dense(labels);
}

std::vector<int> mean_shift(const std::vector<Eigen::VectorXd>& vectors,
                            std::optional<double> bandwidth) {
  if (vectors.empty()) throw ValidationError("mean_shift: no vectors");
  if (bandwidth && *bandwidth <= 0) throw ValidationError("mean_shift: bandwidth must be > 0");
  const size_t n = vectors.size();
  if (n == 1) return {0};

  double h;
  if (bandwidth) {
    h = *bandwidth;
  } else {
    std::vector<double> pairwise;
    for (size_t i = 0; i < n; ++i)
      for (size_t j = i + 1; j < n; ++j) pairwise.push_back((vectors[i] - vectors[j]).norm());
    h = quantile(pairwise, 0.5);
    if (h <= 0) {
      // All points coincide.
      return std::vector<int>(n, 0);
    }
  }

  constexpr int kMaxIterations = 300;
  constexpr double kTolerance = 1e-5;
  std::vector<Eigen::VectorXd> modes(n);
  for (size_t i = 0; i < n; ++i) {
    Eigen::VectorXd x = vectors[i];
    for (int iter = 0; iter < kMaxIterations; ++iter) {
      Eigen::VectorXd sum = Eigen::VectorXd::Zero(x.size());
      long count = 0;
      for (const Eigen::VectorXd& v : vectors) {
        if ((v - x).norm() <= h) {
          sum += v;
          ++count;
        }
      }
      if (count == 0) break;
      Eigen::VectorXd next = sum / static_cast<double>(count);
      const double shift = (next - x).norm();
      x = next;
      if (shift < kTolerance) break;
    }
    modes[i] = x;
  }

  // Merge modes closer than bandwidth / 2.
  std::vector<int> labels(n, -1);
  std::vector<Eigen::VectorXd> centers;
  for (size_t i = 0; i < n; ++i) {
    for (size_t c = 0; c < centers.size(); ++c) {
      if ((modes[i] - centers[c]).norm() < h / 2.0) {
        labels[i] = static_cast<int>(c);
        break;
      }
    }
    if (labels[i] < 0) {
      labels[i] = static_cast<int>(centers.size());
      centers.push_back(modes[i]);
    }
  }
  return labels;
}

ClusterAlgorithm cluster_algorithm_from_string(const std::string& s) {
  if (s == "dbscan") return ClusterAlgorithm::dbscan;
  if (s == "optics") return ClusterAlgorithm::optics;
  if (s == "mean_shift" || s == "meanshift") return ClusterAlgorithm::mean_shift;
  throw ValidationError("unknown clustering algorithm: " + s);
}

Partition to_partition(const std::vector<std::string>& ids, const std::vector<int>& labels) {
  if (ids.size() != labels.size()) throw ValidationError("to_partition: length mismatch");
  Partition p;
  for (size_t i = 0; i < ids.size(); ++i) p.assign[ids[i]] = labels[i];
  return p;
}

Partition cluster_by_issue(const std::vector<std::pair<std::string, Eigen::VectorXd>>& segments,
                           ClusterAlgorithm algorithm, std::optional<double> epsilon,
                           int min_pts) {
  Partition out;
  if (segments.empty()) return out;
  std::vector<std::string> ids;
  std::vector<Eigen::VectorXd> vectors;
  for (const auto& [id, v] : segments) {
    ids.push_back(id);
    vectors.push_back(v);
  }
  if (algorithm == ClusterAlgorithm::mean_shift) return to_partition(ids, mean_shift(vectors));

  if (vectors.size() == 1) return to_partition(ids, {0});
  Eigen::MatrixXd d = euclidean_distances(vectors);
  // With fewer than 3 elements no nearest-neighbour gap exists; fall back to
  // eps = 0 (cluster together only exact duplicates).
  const double eps = epsilon ? *epsilon : (vectors.size() >= 3 ? estimate_epsilon(d) : 0.0);
  std::vector<int> labels = algorithm == ClusterAlgorithm::dbscan ? dbscan(d, eps, min_pts)
                                                                  : optics(d, eps, min_pts);
  return to_partition(ids, labels);
}

}  // namespace gelid
