#include "hategraph/posthoc.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <stdexcept>

#include "hategraph/io.hpp"

namespace hategraph {

Month parse_month(const std::string& ym) {
  if (ym.size() != 7 || ym[4] != '-')
    throw std::invalid_argument("month must be YYYY-MM: " + ym);
  Month m;
  m.year = std::stoi(ym.substr(0, 4));
  m.month = std::stoi(ym.substr(5, 2));
  if (m.month < 1 || m.month > 12) throw std::invalid_argument("bad month: " + ym);
  return m;
}

std::string month_str(const Month& m) {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "%04d-%02d", m.year, m.month);
  return buf;
}

std::vector<Month> month_range(const Month& first, int count) {
  if (count < 1) throw std::invalid_argument("month count must be >= 1");
  std::vector<Month> out;
  Month m = first;
  for (int i = 0; i < count; ++i) {
    out.push_back(m);
    if (++m.month > 12) {
      m.month = 1;
      ++m.year;
    }
  }
  return out;
}

namespace {

// days since 1970-01-01 for the first of the month (civil calendar)
std::int64_t days_from_civil(int y, int mo, int d) {
  y -= mo <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * (mo + (mo > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

}  // namespace

std::int64_t month_start_ts(const Month& m) {
  return days_from_civil(m.year, m.month, 1) * 86400;
}

std::int64_t month_end_ts(const Month& m) {
  Month next = m;
  if (++next.month > 12) {
    next.month = 1;
    ++next.year;
  }
  return month_start_ts(next);
}

std::vector<TimedEdge> load_timed_edges_tsv(const std::string& path,
                                            const std::vector<std::string>& users) {
  std::vector<TimedEdge> out;
  auto find_user = [&](std::string_view id, std::size_t ln) {
    auto it = std::lower_bound(users.begin(), users.end(), id);
    if (it == users.end() || *it != id)
      throw std::runtime_error(path + ":" + std::to_string(ln) +
                               ": unknown user id in edge list");
    return static_cast<std::int32_t>(it - users.begin());
  };
  std::vector<std::string> lines = read_lines(path);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const std::string& line = lines[ln];
    if (line.empty() || line[0] == '#') continue;
    auto fields = split(line, '\t');
    if (fields.size() != 3)
      throw std::runtime_error(path + ":" + std::to_string(ln + 1) +
                               ": expected src<TAB>dst<TAB>ts");
    TimedEdge e;
    e.src = find_user(fields[0], ln + 1);
    e.dst = find_user(fields[1], ln + 1);
    e.ts = std::stoll(std::string(fields[2]));
    out.push_back(e);
  }
  return out;
}

void save_timed_edges_tsv(const std::vector<TimedEdge>& edges,
                          const std::vector<std::string>& users,
                          const std::string& path) {
  std::string out;
  for (const TimedEdge& e : edges)
    out += users[e.src] + "\t" + users[e.dst] + "\t" + std::to_string(e.ts) + "\n";
  write_file(path, out);
}

SnapshotSeries build_snapshots(const UserCorpus& corpus,
                               const std::vector<TimedEdge>& edges,
                               const std::vector<Month>& months,
                               std::int64_t min_lifetime_posts) {
  if (months.empty()) throw std::invalid_argument("no months given");
  for (std::size_t i = 1; i < months.size(); ++i) {
    Month expect = months[i - 1];
    if (++expect.month > 12) {
      expect.month = 1;
      ++expect.year;
    }
    if (!(months[i] == expect)) throw std::invalid_argument("months must be contiguous");
  }
  SnapshotSeries s;
  s.months = months;
  const std::int64_t first_start = month_start_ts(months.front());

  s.edges_sorted = edges;
  std::sort(s.edges_sorted.begin(), s.edges_sorted.end(),
            [](const TimedEdge& a, const TimedEdge& b) {
              if (a.ts != b.ts) return a.ts < b.ts;
              if (a.src != b.src) return a.src < b.src;
              return a.dst < b.dst;
            });

  const std::int64_t n_users = corpus.num_users();
  s.posts_upto.assign(months.size(), std::vector<std::int32_t>(n_users, 0));
  s.edges_upto.assign(months.size(), 0);
  bool warned = false;
  for (std::size_t t = 0; t < months.size(); ++t) {
    std::int64_t end = month_end_ts(months[t]);
    for (std::int64_t u = 0; u < n_users; ++u) {
      const auto& posts = corpus.posts[u];
      std::int32_t count = 0;
      for (const Post& p : posts) {
        std::int64_t ts = p.ts;
        if (ts < first_start) {
          if (!warned) {
            std::fprintf(stderr,
                         "warning: post before first snapshot month; assigned to it\n");
            warned = true;
          }
          ts = first_start;  // pre-range posts belong to the first month
        }
        if (ts < end) ++count;
      }
      s.posts_upto[t][u] = count;
    }
    std::int64_t ecount = 0;
    for (const TimedEdge& e : s.edges_sorted) {
      std::int64_t ts = e.ts < first_start ? first_start : e.ts;
      if (ts < end) ++ecount;
    }
    s.edges_upto[t] = ecount;
  }
  s.eligible.assign(n_users, 0);
  for (std::int64_t u = 0; u < n_users; ++u)
    s.eligible[u] =
        static_cast<std::int64_t>(corpus.posts[u].size()) >= min_lifetime_posts;
  return s;
}

std::vector<std::vector<int>> sticky_labels(
    const std::vector<std::vector<int>>& raw_per_month) {
  std::vector<std::vector<int>> out = raw_per_month;
  for (std::size_t t = 1; t < out.size(); ++t) {
    if (out[t].size() != out[t - 1].size())
      throw std::invalid_argument("monthly label vectors must align");
    for (std::size_t u = 0; u < out[t].size(); ++u)
      if (out[t - 1][u] == 1) out[t][u] = 1;
  }
  return out;
}

std::vector<std::string> attribute_targets(const std::vector<Post>& posts,
                                           const Lexicon& lex) {
  std::set<std::string> hit;
  for (const Post& p : posts) {
    std::vector<std::string> tokens = preprocess_keep_hashtags(p.text);
    for (const auto& e : lex.entries)
      if (!hit.count(e.community) && contains_phrase(tokens, e.tokens))
        hit.insert(e.community);
  }
  return {hit.begin(), hit.end()};
}

std::map<std::string, std::int64_t> joint_target_counts(
    const std::vector<std::vector<std::string>>& per_user_targets,
    const std::vector<std::string>& tracked) {
  std::map<std::string, std::int64_t> buckets;
  // pre-create every bucket so reports have stable shape
  const std::size_t k = tracked.size();
  for (std::size_t mask = 0; mask < (1u << k); ++mask) {
    std::string key;
    for (std::size_t i = 0; i < k; ++i)
      if (mask & (1u << i)) key += (key.empty() ? "" : "-") + tracked[i];
    buckets[key.empty() ? "none" : key] = 0;
  }
  for (const auto& targets : per_user_targets) {
    std::string key;
    for (std::size_t i = 0; i < k; ++i) {
      if (std::find(targets.begin(), targets.end(), tracked[i]) != targets.end())
        key += (key.empty() ? "" : "-") + tracked[i];
    }
    buckets[key.empty() ? "none" : key]++;
  }
  return buckets;
}

std::vector<TrendingEntry> trending_hashtags(
    const std::map<std::string, std::int64_t>& freq_t,
    const std::map<std::string, std::int64_t>& freq_prev,
    std::int64_t min_count, double ratio) {
  std::vector<TrendingEntry> out;
  for (const auto& [tag, count] : freq_t) {
    if (count < min_count) continue;
    auto it = freq_prev.find(tag);
    std::int64_t prev = it == freq_prev.end() ? 0 : it->second;
    if (static_cast<double>(prev) <= ratio * static_cast<double>(count))
      out.push_back({tag, count});
  }
  std::sort(out.begin(), out.end(), [](const TrendingEntry& a, const TrendingEntry& b) {
    if (a.count != b.count) return a.count > b.count;
    return a.hashtag < b.hashtag;
  });
  return out;
}

}  // namespace hategraph
