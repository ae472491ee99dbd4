#include "gelid/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <map>
#include <numeric>
#include <set>

namespace gelid::evaluate {

Partition load_partition(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read partition file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("invalid partition JSON in " + path + ": " + e.what());
  }
  Partition p;
  for (auto& [id, cluster] : j.items()) p.assign[id] = cluster.get<int>();
  return p;
}

void save_partition(const Partition& p, const std::string& path) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [id, cluster] : p.assign) j[id] = cluster;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write partition file: " + path);
  out << j.dump(2) << '\n';
}

namespace {

// Group-index form over a shared element ordering.
struct GroupedPair {
  int n = 0;
  std::vector<int> a;  // dense group ids
  std::vector<int> b;
  int a_groups = 0;
  int b_groups = 0;
};

std::vector<int> densify(std::vector<int> v) {
  std::map<int, int> remap;
  for (int& x : v) {
    auto [it, inserted] = remap.emplace(x, static_cast<int>(remap.size()));
    x = it->second;
  }
  return v;
}

GroupedPair group_pair(const Partition& a, const Partition& b) {
  if (a.assign.empty() || b.assign.empty()) throw ValidationError("mno: empty partition");
  if (a.assign.size() != b.assign.size()) throw ValidationError("mno: element sets differ");
  GroupedPair gp;
  std::vector<int> av, bv;
  for (const auto& [id, cluster] : a.assign) {
    auto it = b.assign.find(id);
    if (it == b.assign.end()) throw ValidationError("mno: element sets differ (missing " + id + ")");
    av.push_back(cluster);
    bv.push_back(it->second);
  }
  gp.n = static_cast<int>(av.size());
  gp.a = densify(std::move(av));
  gp.b = densify(std::move(bv));
  gp.a_groups = *std::max_element(gp.a.begin(), gp.a.end()) + 1;
  gp.b_groups = *std::max_element(gp.b.begin(), gp.b.end()) + 1;
  return gp;
}

// Kuhn's augmenting-path maximum bipartite matching.
struct Matcher {
  const std::vector<std::vector<int>>& adj;
  std::vector<int> match_right;
  std::vector<char> used;

  explicit Matcher(const std::vector<std::vector<int>>& adjacency, int right_size)
      : adj(adjacency), match_right(right_size, -1) {}

  bool augment(int left) {
    for (int right : adj[left]) {
      if (used[right]) continue;
      used[right] = 1;
      if (match_right[right] < 0 || augment(match_right[right])) {
        match_right[right] = left;
        return true;
      }
    }
    return false;
  }

  int solve(int left_size) {
    int matched = 0;
    for (int l = 0; l < left_size; ++l) {
      used.assign(match_right.size(), 0);
      if (augment(l)) ++matched;
    }
    return matched;
  }
};

// Exact mno via optimal group tagging. Each A-group is tagged with a target
// B-group; moves relocate the untagged elements, joins merge A-groups that
// share a tag. The optimum assigns each A-group its maximum-overlap tag,
// with a maximum matching on the argmax edges deciding which groups own a
// distinct tag.
long mno_grouped(const std::vector<int>& a, const std::vector<int>& b, int a_groups,
                 int b_groups) {
  const int n = static_cast<int>(a.size());
  std::vector<std::vector<long>> overlap(a_groups, std::vector<long>(b_groups, 0));
  for (int i = 0; i < n; ++i) overlap[a[i]][b[i]]++;

  long sum_best = 0;
  std::vector<std::vector<int>> argmax_edges(a_groups);
  for (int g = 0; g < a_groups; ++g) {
    long best = *std::max_element(overlap[g].begin(), overlap[g].end());
    sum_best += best;
    for (int h = 0; h < b_groups; ++h)
      if (overlap[g][h] == best) argmax_edges[g].push_back(h);
  }
  Matcher matcher(argmax_edges, b_groups);
  const long distinct = matcher.solve(a_groups);
  // moves = n - sum_best, joins = a_groups - distinct
  return (n - sum_best) + (a_groups - distinct);
}

}  // namespace

long mno(const Partition& a, const Partition& b) {
  GroupedPair gp = group_pair(a, b);
  return mno_grouped(gp.a, gp.b, gp.a_groups, gp.b_groups);
}

std::vector<std::vector<int>> all_partitions(int n) {
  // Restricted growth strings: v[0] = 0, v[i] <= max(v[0..i-1]) + 1.
  std::vector<std::vector<int>> out;
  std::vector<int> v(n, 0);
  while (true) {
    out.push_back(v);
    int i = n - 1;
    for (; i > 0; --i) {
      int mx = 0;
      for (int j = 0; j < i; ++j) mx = std::max(mx, v[j]);
      if (v[i] <= mx) break;
    }
    if (i == 0) break;
    ++v[i];
    std::fill(v.begin() + i + 1, v.end(), 0);
  }
  return out;
}

double mojofm(const Partition& a, const Partition& b) {
  GroupedPair gp = group_pair(a, b);
  if (gp.n == 1) return 100.0;
  const long numerator = mno_grouped(gp.a, gp.b, gp.a_groups, gp.b_groups);

  long max_mno = 0;
  if (gp.n <= 10) {
    for (const std::vector<int>& alt : all_partitions(gp.n)) {
      int groups = *std::max_element(alt.begin(), alt.end()) + 1;
      max_mno = std::max(max_mno, mno_grouped(alt, gp.b, groups, gp.b_groups));
    }
  } else {
    // Candidate search over extreme partitions; a lower bound on the true
    // maximum for large element sets.
    std::vector<std::vector<int>> candidates;
    std::vector<int> singletons(gp.n);
    std::iota(singletons.begin(), singletons.end(), 0);
    candidates.push_back(singletons);
    candidates.push_back(std::vector<int>(gp.n, 0));
    for (int h = 0; h < gp.b_groups; ++h) {
      // B-group h exploded into singletons, complement fused into one group.
      std::vector<int> alt(gp.n, 0);
      int next = 1;
      for (int i = 0; i < gp.n; ++i)
        if (gp.b[i] == h) alt[i] = next++;
      candidates.push_back(std::move(alt));
      // Two-group split: h versus its complement.
      std::vector<int> two(gp.n, 0);
      for (int i = 0; i < gp.n; ++i) two[i] = gp.b[i] == h ? 1 : 0;
      candidates.push_back(std::move(two));
    }
    for (std::vector<int>& alt : candidates) {
      alt = densify(std::move(alt));
      int groups = *std::max_element(alt.begin(), alt.end()) + 1;
      max_mno = std::max(max_mno, mno_grouped(alt, gp.b, groups, gp.b_groups));
    }
  }
  if (max_mno == 0) return 100.0;  // only possible when every partition equals B
  return 100.0 - static_cast<double>(numerator) / static_cast<double>(max_mno) * 100.0;
}

double cohen_kappa(const std::vector<std::string>& r1, const std::vector<std::string>& r2) {
  if (r1.size() != r2.size()) throw ValidationError("cohen_kappa: length mismatch");
  if (r1.empty()) throw ValidationError("cohen_kappa: empty series");
  const double n = static_cast<double>(r1.size());
  std::map<std::string, long> m1, m2;
  long agree = 0;
  for (size_t i = 0; i < r1.size(); ++i) {
    m1[r1[i]]++;
    m2[r2[i]]++;
    if (r1[i] == r2[i]) ++agree;
  }
  const double p_o = agree / n;
  double p_e = 0.0;
  for (const auto& [cat, c1] : m1) {
    auto it = m2.find(cat);
    if (it != m2.end()) p_e += (c1 / n) * (it->second / n);
  }
  if (p_e == 1.0) return 1.0;  // both raters constant and equal
  return (p_o - p_e) / (1.0 - p_e);
}

namespace {

// Exact null distribution of the rank-sum W of the first sample: counts of
// k-subsets of ranks {1..N} by sum.
std::vector<std::vector<double>> rank_sum_counts(int n_total, int k) {
  const int max_sum = n_total * (n_total + 1) / 2;
  std::vector<std::vector<double>> f(k + 1, std::vector<double>(max_sum + 1, 0.0));
  f[0][0] = 1.0;
  for (int rank = 1; rank <= n_total; ++rank)
    for (int kk = std::min(rank, k); kk >= 1; --kk)
      for (int s = max_sum; s >= rank; --s) f[kk][s] += f[kk - 1][s - rank];
  return f;
}

double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

}  // namespace

MannWhitneyResult mann_whitney(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.empty() || y.empty()) throw ValidationError("mann_whitney: empty vector");
  const long n1 = static_cast<long>(x.size());
  const long n2 = static_cast<long>(y.size());
  const long n_total = n1 + n2;

  std::vector<std::pair<double, int>> pooled;  // value, sample tag
  for (double v : x) pooled.emplace_back(v, 0);
  for (double v : y) pooled.emplace_back(v, 1);
  std::sort(pooled.begin(), pooled.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  // Midranks + tie group sizes.
  std::vector<double> rank(pooled.size());
  std::vector<long> tie_sizes;
  size_t i = 0;
  bool has_ties = false;
  while (i < pooled.size()) {
    size_t j = i;
    while (j + 1 < pooled.size() && pooled[j + 1].first == pooled[i].first) ++j;
    const long t = static_cast<long>(j - i + 1);
    if (t > 1) {
      has_ties = true;
      tie_sizes.push_back(t);
    }
    const double mid = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (size_t k = i; k <= j; ++k) rank[k] = mid;
    i = j + 1;
  }
  double w1 = 0.0;
  for (size_t k = 0; k < pooled.size(); ++k)
    if (pooled[k].second == 0) w1 += rank[k];
  const double u = w1 - static_cast<double>(n1) * (n1 + 1) / 2.0;
  const double mn = static_cast<double>(n1) * static_cast<double>(n2);

  MannWhitneyResult res;
  res.u = u;
  if (n_total <= 20 && !has_ties) {
    res.exact = true;
    auto f = rank_sum_counts(static_cast<int>(n_total), static_cast<int>(n1));
    const std::vector<double>& dist = f[n1];
    double total = 0.0;
    for (double c : dist) total += c;
    const long w_int = static_cast<long>(std::llround(w1));
    auto cdf_leq = [&](long w) {
      double s = 0.0;
      for (long t = 0; t <= w && t < static_cast<long>(dist.size()); ++t) s += dist[t];
      return s / total;
    };
    const double lower = cdf_leq(w_int);
    const double upper = 1.0 - (w_int >= 1 ? cdf_leq(w_int - 1) : 0.0);
    res.p_value = std::min(1.0, 2.0 * std::min(lower, upper));
  } else {
    double tie_term = 0.0;
    for (long t : tie_sizes) tie_term += static_cast<double>(t) * t * t - t;
    const double nt = static_cast<double>(n_total);
    const double var = mn / 12.0 * ((nt + 1.0) - tie_term / (nt * (nt - 1.0)));
    if (var <= 0) {
      res.p_value = 1.0;  // all observations tied
    } else {
      const double z = (std::abs(u - mn / 2.0) - 0.5) / std::sqrt(var);
      res.p_value = std::min(1.0, 2.0 * normal_sf(std::max(z, 0.0)));
    }
  }
  return res;
}

CliffsDelta cliffs_delta(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.empty() || y.empty()) throw ValidationError("cliffs_delta: empty vector");
  long greater = 0, less = 0;
  for (double a : x)
    for (double b : y) {
      if (a > b) ++greater;
      else if (a < b) ++less;
    }
  CliffsDelta res;
  res.delta = static_cast<double>(greater - less) /
              (static_cast<double>(x.size()) * static_cast<double>(y.size()));
  const double mag = std::abs(res.delta);
  if (mag < 0.147) res.magnitude = "negligible";
  else if (mag < 0.33) res.magnitude = "small";
  else if (mag < 0.474) res.magnitude = "medium";
  else res.magnitude = "large";
  return res;
}

std::vector<double> bh_adjust(const std::vector<double>& pvalues) {
  for (double p : pvalues)
    if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("bh_adjust: p-value outside [0, 1]");
  const size_t m = pvalues.size();
  std::vector<size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return pvalues[a] < pvalues[b]; });
  std::vector<double> adjusted(m);
  double running = 1.0;
  for (size_t i = m; i-- > 0;) {
    const double scaled = pvalues[order[i]] * static_cast<double>(m) / static_cast<double>(i + 1);
    running = std::min(running, scaled);
    // adjusted >= raw holds mathematically; the clamp guards against the
    // one-ulp rounding of p * m / rank at rank == m.
    adjusted[order[i]] = std::max(running, pvalues[order[i]]);
  }
  return adjusted;
}

}  // namespace gelid::evaluate
