#include "hategraph/belief.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "hategraph/io.hpp"
#include "hategraph/rng.hpp"

namespace hategraph {

NormalizedAdjacency build_belief_network(const DirectedGraph& repost_graph) {
  return normalize(reverse(repost_graph), NormKind::RowStochastic);
}

BeliefVector diffuse(const NormalizedAdjacency& op,
                     const std::vector<std::int32_t>& seeds, int iterations) {
  if (op.kind != NormKind::RowStochastic)
    throw std::invalid_argument("diffusion needs a row-stochastic operator");
  if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
  const std::int64_t n = op.m.nrows;
  std::vector<double> b(n, 0.0), next(n, 0.0);
  for (std::int32_t s : seeds) {
    if (s < 0 || s >= n) throw std::invalid_argument("seed out of range");
    b[s] = 1.0;
  }
  for (int it = 0; it < iterations; ++it) {
    for (std::int64_t r = 0; r < n; ++r) {
      double s = 0.0;
      for (std::int64_t e = op.m.offsets[r]; e < op.m.offsets[r + 1]; ++e)
        s += op.m.val[e] * b[op.m.col[e]];
      next[r] = s;
    }
    b.swap(next);
  }
  BeliefVector out;
  out.values = std::move(b);
  out.iterations = iterations;
  return out;
}

namespace {

struct SegmentCost {
  std::vector<double> sum, sum2;
  explicit SegmentCost(const std::vector<double>& x)
      : sum(x.size() + 1, 0.0), sum2(x.size() + 1, 0.0) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      sum[i + 1] = sum[i] + x[i];
      sum2[i + 1] = sum2[i] + x[i] * x[i];
    }
  }
  // SSE of x[i..j] inclusive (0-indexed)
  double operator()(std::int64_t i, std::int64_t j) const {
    double s = sum[j + 1] - sum[i];
    double s2 = sum2[j + 1] - sum2[i];
    double len = static_cast<double>(j - i + 1);
    return s2 - s * s / len;
  }
};

// dp_cur[j] = min over i of dp_prev[i-1] + cost(i, j); the optimal split point
// is monotone in j, so divide and conquer applies.
void dp_layer(const SegmentCost& cost, const std::vector<double>& dp_prev,
              std::vector<double>& dp_cur, std::vector<std::int64_t>& arg_cur,
              std::int64_t jlo, std::int64_t jhi, std::int64_t ilo, std::int64_t ihi,
              std::int64_t cluster_index) {
  if (jlo > jhi) return;
  std::int64_t jm = (jlo + jhi) / 2;
  double best = std::numeric_limits<double>::infinity();
  std::int64_t best_i = ilo;
  std::int64_t top = std::min(ihi, jm);
  for (std::int64_t i = std::max(ilo, cluster_index); i <= top; ++i) {
    double c = dp_prev[i - 1] + cost(i, jm);
    if (c < best) {
      best = c;
      best_i = i;
    }
  }
  dp_cur[jm] = best;
  arg_cur[jm] = best_i;
  dp_layer(cost, dp_prev, dp_cur, arg_cur, jlo, jm - 1, ilo, best_i, cluster_index);
  dp_layer(cost, dp_prev, dp_cur, arg_cur, jm + 1, jhi, best_i, ihi, cluster_index);
}

}  // namespace

TierAssignment kmeans_1d(const std::vector<double>& scores, int k) {
  const std::int64_t n = static_cast<std::int64_t>(scores.size());
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  std::vector<std::int64_t> order(n);
  for (std::int64_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::int64_t a, std::int64_t b) { return scores[a] < scores[b]; });
  std::vector<double> x(n);
  for (std::int64_t i = 0; i < n; ++i) x[i] = scores[order[i]];
  std::int64_t distinct = n > 0 ? 1 : 0;
  for (std::int64_t i = 1; i < n; ++i)
    if (x[i] != x[i - 1]) ++distinct;
  if (distinct < k)
    throw std::invalid_argument("k-means needs at least k distinct values");

  SegmentCost cost(x);
  std::vector<std::vector<std::int64_t>> arg(k, std::vector<std::int64_t>(n, 0));
  std::vector<double> dp_prev(n), dp_cur(n);
  for (std::int64_t j = 0; j < n; ++j) dp_prev[j] = cost(0, j);
  for (int c = 1; c < k; ++c) {
    dp_layer(cost, dp_prev, dp_cur, arg[c], c, n - 1, 1, n - 1, c);
    dp_prev = dp_cur;
  }

  // recover cluster boundaries
  std::vector<std::int64_t> start(k);
  std::int64_t j = n - 1;
  for (int c = k - 1; c >= 1; --c) {
    start[c] = arg[c][j];
    j = start[c] - 1;
  }
  start[0] = 0;

  TierAssignment out;
  out.centroids.resize(k);
  for (int c = 0; c < k; ++c) {
    std::int64_t lo = start[c];
    std::int64_t hi = c + 1 < k ? start[c + 1] - 1 : n - 1;
    out.centroids[c] = (cost.sum[hi + 1] - cost.sum[lo]) / static_cast<double>(hi - lo + 1);
  }
  // nearest-centroid assignment; equidistant points take the lower tier
  out.tier.resize(n, Tier::Low);
  for (std::int64_t i = 0; i < n; ++i) {
    double v = scores[i];
    int best = 0;
    double best_d = std::abs(v - out.centroids[0]);
    for (int c = 1; c < k; ++c) {
      double d = std::abs(v - out.centroids[c]);
      if (d < best_d) {
        best = c;
        best_d = d;
      }
    }
    out.tier[i] = static_cast<Tier>(best);
  }
  return out;
}

TierSample sample_tiers(const TierAssignment& tiers, std::int64_t per_tier,
                        std::int64_t min_posts,
                        const std::vector<std::int64_t>& post_counts,
                        std::uint64_t rng_seed) {
  if (post_counts.size() != tiers.tier.size())
    throw std::invalid_argument("post_counts size mismatch");
  const int k = static_cast<int>(tiers.centroids.size());
  TierSample out;
  out.shortfall.assign(k, 0);
  std::set<std::int32_t> chosen;
  for (int t = 0; t < k; ++t) {
    std::vector<std::int32_t> eligible;
    for (std::size_t i = 0; i < tiers.tier.size(); ++i)
      if (static_cast<int>(tiers.tier[i]) == t && post_counts[i] >= min_posts)
        eligible.push_back(static_cast<std::int32_t>(i));
    Rng rng(mix_seed(substream(rng_seed, "sample-tiers"), static_cast<std::uint64_t>(t)));
    std::int64_t want = std::min<std::int64_t>(per_tier, eligible.size());
    // partial Fisher-Yates: first `want` entries are the sample
    for (std::int64_t i = 0; i < want; ++i) {
      std::int64_t j = i + static_cast<std::int64_t>(rng.below(eligible.size() - i));
      std::swap(eligible[i], eligible[j]);
      chosen.insert(eligible[i]);
    }
    out.shortfall[t] = per_tier - want;
  }
  out.nodes.assign(chosen.begin(), chosen.end());
  return out;
}

void save_belief_csv(const BeliefVector& b, const TierAssignment& t,
                     const std::vector<std::string>& names, const std::string& path) {
  static const char* tier_name[] = {"low", "medium", "high"};
  std::string out = "node_id,score,tier\n";
  for (std::size_t i = 0; i < b.values.size(); ++i) {
    std::string id = names.empty() ? std::to_string(i) : names[i];
    out += csv_escape(id) + "," + format_double(b.values[i]) + "," +
           tier_name[static_cast<int>(t.tier[i])] + "\n";
  }
  write_file(path, out);
}

}  // namespace hategraph
