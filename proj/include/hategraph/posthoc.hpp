#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hategraph/lexicon.hpp"
#include "hategraph/text.hpp"

namespace hategraph {

// Calendar month "YYYY-MM".
struct Month {
  int year = 0;
  int month = 1;  // 1..12

  bool operator==(const Month&) const = default;
};

Month parse_month(const std::string& ym);
std::string month_str(const Month& m);
std::vector<Month> month_range(const Month& first, int count);
std::int64_t month_start_ts(const Month& m);  // UTC seconds
std::int64_t month_end_ts(const Month& m);    // exclusive

struct TimedEdge {
  std::int32_t src = 0;
  std::int32_t dst = 0;
  double weight = 1.0;
  std::int64_t ts = 0;
};

// TSV: src<TAB>dst<TAB>ts, '#' comments skipped; ids resolved via the given
// sorted user table.
std::vector<TimedEdge> load_timed_edges_tsv(const std::string& path,
                                            const std::vector<std::string>& users);
void save_timed_edges_tsv(const std::vector<TimedEdge>& edges,
                          const std::vector<std::string>& users,
                          const std::string& path);

// Cumulative monthly views. Users and posts are indexed against a fixed
// corpus; month t includes exactly the posts/edges with ts <= end of t.
struct SnapshotSeries {
  std::vector<Month> months;
  // posts_upto[t][u]: count of user u's posts visible at month t
  std::vector<std::vector<std::int32_t>> posts_upto;
  // edges_upto[t]: count of edges visible at month t (prefix of sorted edges)
  std::vector<std::int64_t> edges_upto;
  std::vector<TimedEdge> edges_sorted;  // by ts, then (src, dst)
  std::vector<char> eligible;           // >= min_posts lifetime posts
};

SnapshotSeries build_snapshots(const UserCorpus& corpus,
                               const std::vector<TimedEdge>& edges,
                               const std::vector<Month>& months,
                               std::int64_t min_lifetime_posts = 10);

// Hateful-once-hateful-always labels: effective(u,t) = 1 iff raw(u,s) = 1 for
// some s <= t.
std::vector<std::vector<int>> sticky_labels(
    const std::vector<std::vector<int>>& raw_per_month);

// Communities whose lexicon terms appear in any of the posts (hashtags are
// kept as tokens for this matching).
std::vector<std::string> attribute_targets(const std::vector<Post>& posts,
                                           const Lexicon& lex);

// Mutually exclusive joint-target buckets over the tracked communities; a
// user lands in exactly the bucket naming the full set they target.
// Bucket keys join the community names with '-' in tracked order.
std::map<std::string, std::int64_t> joint_target_counts(
    const std::vector<std::vector<std::string>>& per_user_targets,
    const std::vector<std::string>& tracked);

struct TrendingEntry {
  std::string hashtag;
  std::int64_t count = 0;
};

// Frequent now, infrequent before: freq_t >= min_count and
// freq_prev <= ratio * freq_t. Sorted by count descending, then name.
std::vector<TrendingEntry> trending_hashtags(
    const std::map<std::string, std::int64_t>& freq_t,
    const std::map<std::string, std::int64_t>& freq_prev,
    std::int64_t min_count = 10, double ratio = 0.2);

}  // namespace hategraph
