#ifndef GELID_EVALUATE_HPP
#define GELID_EVALUATE_HPP

#include <string>
#include <vector>

#include "gelid/types.hpp"

namespace gelid::evaluate {

// Partition serialization: JSON object {element_id: cluster_id}.
Partition load_partition(const std::string& path);
void save_partition(const Partition& p, const std::string& path);

// Minimum number of Move or Join operations transforming A into B. Both
// partitions must cover the identical element set.
long mno(const Partition& a, const Partition& b);

// 100 - mno(A,B) / max over A' of mno(A',B) * 100. The denominator is exact
// (brute force over all partitions) for |E| <= 10 and a candidate-search
// bound above that. Defined as 100 for |E| = 1.
double mojofm(const Partition& a, const Partition& b);

double cohen_kappa(const std::vector<std::string>& r1, const std::vector<std::string>& r2);

struct MannWhitneyResult {
  double u = 0.0;
  double p_value = 1.0;
  bool exact = false;
};

// U from rank sums with midrank ties; exact two-tailed p for n+m <= 20
// without ties, normal approximation with continuity and tie correction
// otherwise.
MannWhitneyResult mann_whitney(const std::vector<double>& x, const std::vector<double>& y);

struct CliffsDelta {
  double delta = 0.0;
  std::string magnitude;  // negligible / small / medium / large
};

CliffsDelta cliffs_delta(const std::vector<double>& x, const std::vector<double>& y);

// Benjamini-Hochberg step-up adjustment; input order preserved.
std::vector<double> bh_adjust(const std::vector<double>& pvalues);

// Enumeration of all set partitions of {0..n-1} as assignment vectors
// (restricted growth strings). Used by mojofm internally; exposed for tests.
std::vector<std::vector<int>> all_partitions(int n);

}  // namespace gelid::evaluate

#endif
