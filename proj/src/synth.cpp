#include "hategraph/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <stdexcept>

#include <json.hpp>

#include "hategraph/io.hpp"
#include "hategraph/rng.hpp"

namespace hategraph {

namespace {

std::string user_id(std::int64_t i) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "u%06lld", static_cast<long long>(i));
  return buf;
}

// cumulative Zipf table; sampled by binary search
std::vector<double> zipf_cdf(int size, double s) {
  std::vector<double> cdf(size);
  double total = 0.0;
  for (int i = 0; i < size; ++i) {
    total += 1.0 / std::pow(static_cast<double>(i + 1), s);
    cdf[i] = total;
  }
  for (double& v : cdf) v /= total;
  return cdf;
}

int sample_cdf(const std::vector<double>& cdf, Rng& rng) {
  double u = rng.real01();
  auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
  return static_cast<int>(std::min<std::size_t>(it - cdf.begin(), cdf.size() - 1));
}

}  // namespace

SynthDataset generate(const SynthConfig& cfg) {
  if (cfg.n < 2) throw std::invalid_argument("need at least 2 nodes");
  if (cfg.hateful_fraction < 0.0 || cfg.hateful_fraction > 1.0 ||
      cfg.p_in < 0.0 || cfg.p_in > 1.0 || cfg.p_out < 0.0 || cfg.p_out > 1.0 ||
      cfg.reciprocity < 0.0 || cfg.reciprocity > 1.0 ||
      cfg.hl_rate_hateful < 0.0 || cfg.hl_rate_hateful > 1.0 ||
      cfg.hl_rate_normal < 0.0 || cfg.hl_rate_normal > 1.0)
    throw std::invalid_argument("probabilities out of range");
  // directed density p needs pair probability p*(2-r) <= 1
  if (cfg.p_in * (2.0 - cfg.reciprocity) > 1.0 ||
      cfg.p_out * (2.0 - cfg.reciprocity) > 1.0)
    throw std::invalid_argument("p_in/p_out too large for the reciprocity setting");
  if (cfg.posts_min < 1 || cfg.posts_max < cfg.posts_min)
    throw std::invalid_argument("bad posts-per-user range");
  const std::int64_t n_hate =
      static_cast<std::int64_t>(std::floor(cfg.hateful_fraction * cfg.n));
  if (n_hate == 0 && cfg.hl_rate_hateful > 0.0 && cfg.hateful_fraction > 0.0)
    throw std::invalid_argument("hateful fraction too small for n");

  SynthDataset ds;
  ds.config = cfg;
  ds.labels.assign(cfg.n, 0);
  for (std::int64_t i = 0; i < n_hate; ++i) ds.labels[i] = 1;

  std::vector<std::pair<std::string, std::string>> lex_pairs;
  for (int t = 0; t < cfg.terms_per_community; ++t)
    for (std::size_t c = 0; c < cfg.communities.size(); ++c)
      lex_pairs.emplace_back(
          "hslur" + std::to_string(t * cfg.communities.size() + c),
          cfg.communities[c]);
  ds.lexicon = make_lexicon(lex_pairs);

  std::vector<Month> months = month_range(parse_month(cfg.start_month), cfg.months);

  // user join months: uniform over the first three quarters of the window so
  // late months still add nodes and edges
  Rng join_rng(substream(cfg.seed, "synth-join"));
  std::vector<int> join(cfg.n);
  int join_span = std::max(1, cfg.months * 3 / 4);
  for (std::int64_t i = 0; i < cfg.n; ++i)
    join[i] = static_cast<int>(join_rng.below(join_span));

  // edges: connected pairs become bidirectional with probability b chosen so
  // the edge-level reciprocity matches cfg.reciprocity, and the pair
  // probability is inflated so the directed density matches p_in/p_out
  const double b = cfg.reciprocity / (2.0 - cfg.reciprocity);
  Rng edge_rng(substream(cfg.seed, "synth-edges"));
  std::vector<double> weight_cdf = zipf_cdf(cfg.weight_max, cfg.weight_zipf);
  auto edge_weight = [&](Rng& rng) {
    return static_cast<double>(1 + sample_cdf(weight_cdf, rng));
  };
  std::vector<Edge> edges;
  ds.timed_edges.clear();
  auto edge_ts = [&](std::int64_t u, std::int64_t v, Rng& rng) {
    int m0 = std::max(join[u], join[v]);
    int m = m0 + static_cast<int>(rng.below(static_cast<std::uint64_t>(cfg.months - m0)));
    std::int64_t lo = month_start_ts(months[m]);
    std::int64_t hi = month_end_ts(months[m]);
    return lo + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(hi - lo)));
  };
  for (std::int64_t i = 0; i < cfg.n; ++i) {
    for (std::int64_t j = i + 1; j < cfg.n; ++j) {
      double p = ds.labels[i] == ds.labels[j] ? cfg.p_in : cfg.p_out;
      double p_pair = p * (2.0 - cfg.reciprocity);
      if (edge_rng.real01() >= p_pair) continue;
      bool both = edge_rng.real01() < b;
      bool forward = both || edge_rng.real01() < 0.5;
      if (both || forward) {
        double w = edge_weight(edge_rng);
        edges.push_back({static_cast<std::int32_t>(i), static_cast<std::int32_t>(j), w});
        ds.timed_edges.push_back({static_cast<std::int32_t>(i),
                                  static_cast<std::int32_t>(j), w,
                                  edge_ts(i, j, edge_rng)});
      }
      if (both || !forward) {
        double w = edge_weight(edge_rng);
        edges.push_back({static_cast<std::int32_t>(j), static_cast<std::int32_t>(i), w});
        ds.timed_edges.push_back({static_cast<std::int32_t>(j),
                                  static_cast<std::int32_t>(i), w,
                                  edge_ts(j, i, edge_rng)});
      }
    }
  }

  std::vector<std::string> names(cfg.n);
  for (std::int64_t i = 0; i < cfg.n; ++i) names[i] = user_id(i);
  ds.graph = build_graph(cfg.n, edges, names);

  // posts
  std::vector<double> word_cdf = zipf_cdf(cfg.vocab_size, cfg.zipf_exponent);
  std::vector<double> topic_cdf = zipf_cdf(cfg.topic_vocab, cfg.zipf_exponent);
  Rng post_rng(substream(cfg.seed, "synth-posts"));
  static const char* kEmoticons[] = {":)", ":(", ":D", ";)", "<3"};
  ds.corpus.users = names;
  ds.corpus.posts.assign(cfg.n, {});
  for (std::int64_t u = 0; u < cfg.n; ++u) {
    int n_posts = cfg.posts_min +
                  static_cast<int>(post_rng.below(cfg.posts_max - cfg.posts_min + 1));
    double base_rate = ds.labels[u] == 1 ? cfg.hl_rate_hateful : cfg.hl_rate_normal;
    double z = 2.0 * post_rng.real01();
    double hl_rate =
        base_rate + (z - 1.0) * cfg.rate_spread * std::min(base_rate, 1.0 - base_rate);
    double jargon_rate = 0.0;
    if (hl_rate > cfg.hl_rate_normal && cfg.hl_rate_normal > 0.0)
      jargon_rate = cfg.jargon_max *
                    (1.0 - std::pow(cfg.hl_rate_normal / hl_rate, cfg.jargon_gamma));
    else if (cfg.hl_rate_normal <= 0.0 && hl_rate > 0.0)
      jargon_rate = cfg.jargon_max;
    std::vector<Post>& posts = ds.corpus.posts[u];
    for (int p = 0; p < n_posts; ++p) {
      int m = join[u] + static_cast<int>(
                            post_rng.below(static_cast<std::uint64_t>(cfg.months - join[u])));
      std::int64_t lo = month_start_ts(months[m]);
      std::int64_t hi = month_end_ts(months[m]);
      Post post;
      post.ts = lo + static_cast<std::int64_t>(
                         post_rng.below(static_cast<std::uint64_t>(hi - lo)));
      int len = cfg.post_tokens_min +
                static_cast<int>(post_rng.below(
                    static_cast<std::uint64_t>(cfg.post_tokens_max - cfg.post_tokens_min + 1)));
      std::vector<std::string> tokens;
      for (int t = 0; t < len; ++t) {
        if (post_rng.real01() < jargon_rate)
          tokens.push_back("j" + std::to_string(sample_cdf(topic_cdf, post_rng)));
        else
          tokens.push_back("w" + std::to_string(sample_cdf(word_cdf, post_rng)));
      }
      if (post_rng.real01() < hl_rate) {
        const auto& entry =
            ds.lexicon.entries[post_rng.below(ds.lexicon.entries.size())];
        tokens.insert(tokens.begin() + post_rng.below(tokens.size() + 1), entry.raw);
      }
      if (post_rng.real01() < cfg.url_rate)
        tokens.push_back("https://example.com/" + std::to_string(post_rng.below(1000)));
      if (post_rng.real01() < cfg.mention_rate)
        tokens.push_back("@" + user_id(post_rng.below(cfg.n)));
      if (post_rng.real01() < cfg.emoticon_rate)
        tokens.push_back(kEmoticons[post_rng.below(5)]);
      if (post_rng.real01() < cfg.hashtag_rate)
        tokens.push_back("#t" + std::to_string(post_rng.below(cfg.hashtag_vocab)));
      std::string text;
      for (std::size_t t = 0; t < tokens.size(); ++t) {
        if (t > 0) text += ' ';
        text += tokens[t];
      }
      post.text = std::move(text);
      post.hashtags = extract_hashtags(post.text);
      posts.push_back(std::move(post));
    }
    std::stable_sort(posts.begin(), posts.end(),
                     [](const Post& a, const Post& b) { return a.ts < b.ts; });
  }
  return ds;
}

void write_dataset(const SynthDataset& ds, const std::string& dir) {
  std::filesystem::create_directories(dir);
  save_edge_tsv(ds.graph, dir + "/edges.tsv");
  save_timed_edges_tsv(ds.timed_edges, ds.corpus.users, dir + "/edge_times.tsv");
  save_posts_jsonl(ds.corpus, dir + "/posts.jsonl");
  save_labels_csv(ds.corpus.users, ds.labels, dir + "/labels.csv");
  save_lexicon_csv(ds.lexicon, dir + "/lexicon.csv");
  write_file(dir + "/config.json", synth_config_to_json(ds.config));
}

std::string synth_config_to_json(const SynthConfig& cfg) {
  nlohmann::json j;
  j["n"] = cfg.n;
  j["hateful_fraction"] = cfg.hateful_fraction;
  j["p_in"] = cfg.p_in;
  j["p_out"] = cfg.p_out;
  j["reciprocity"] = cfg.reciprocity;
  j["hl_rate_hateful"] = cfg.hl_rate_hateful;
  j["hl_rate_normal"] = cfg.hl_rate_normal;
  j["posts_min"] = cfg.posts_min;
  j["posts_max"] = cfg.posts_max;
  j["post_tokens_min"] = cfg.post_tokens_min;
  j["post_tokens_max"] = cfg.post_tokens_max;
  j["vocab_size"] = cfg.vocab_size;
  j["zipf_exponent"] = cfg.zipf_exponent;
  j["topic_vocab"] = cfg.topic_vocab;
  j["jargon_max"] = cfg.jargon_max;
  j["jargon_gamma"] = cfg.jargon_gamma;
  j["rate_spread"] = cfg.rate_spread;
  j["weight_max"] = cfg.weight_max;
  j["weight_zipf"] = cfg.weight_zipf;
  j["hashtag_vocab"] = cfg.hashtag_vocab;
  j["hashtag_rate"] = cfg.hashtag_rate;
  j["url_rate"] = cfg.url_rate;
  j["mention_rate"] = cfg.mention_rate;
  j["emoticon_rate"] = cfg.emoticon_rate;
  j["start_month"] = cfg.start_month;
  j["months"] = cfg.months;
  j["communities"] = cfg.communities;
  j["terms_per_community"] = cfg.terms_per_community;
  j["seed"] = cfg.seed;
  return j.dump(2) + "\n";
}

SynthConfig synth_config_from_json(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  SynthConfig cfg;
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j[key].get<std::decay_t<decltype(field)>>();
  };
  get("n", cfg.n);
  get("hateful_fraction", cfg.hateful_fraction);
  get("p_in", cfg.p_in);
  get("p_out", cfg.p_out);
  get("reciprocity", cfg.reciprocity);
  get("hl_rate_hateful", cfg.hl_rate_hateful);
  get("hl_rate_normal", cfg.hl_rate_normal);
  get("posts_min", cfg.posts_min);
  get("posts_max", cfg.posts_max);
  get("post_tokens_min", cfg.post_tokens_min);
  get("post_tokens_max", cfg.post_tokens_max);
  get("vocab_size", cfg.vocab_size);
  get("zipf_exponent", cfg.zipf_exponent);
  get("topic_vocab", cfg.topic_vocab);
  get("jargon_max", cfg.jargon_max);
  get("jargon_gamma", cfg.jargon_gamma);
  get("rate_spread", cfg.rate_spread);
  get("weight_max", cfg.weight_max);
  get("weight_zipf", cfg.weight_zipf);
  get("hashtag_vocab", cfg.hashtag_vocab);
  get("hashtag_rate", cfg.hashtag_rate);
  get("url_rate", cfg.url_rate);
  get("mention_rate", cfg.mention_rate);
  get("emoticon_rate", cfg.emoticon_rate);
  get("start_month", cfg.start_month);
  get("months", cfg.months);
  get("communities", cfg.communities);
  get("terms_per_community", cfg.terms_per_community);
  get("seed", cfg.seed);
  return cfg;
}

void save_labels_csv(const std::vector<std::string>& users,
                     const std::vector<int>& labels, const std::string& path) {
  std::string out = "user,label\n";
  for (std::size_t i = 0; i < users.size(); ++i)
    out += csv_escape(users[i]) + "," + std::to_string(labels[i]) + "\n";
  write_file(path, out);
}

std::vector<int> load_labels_csv(const std::string& path,
                                 const std::vector<std::string>& users) {
  std::vector<int> labels(users.size(), -1);
  for (const std::string& line : read_lines(path)) {
    if (line.empty() || line == "user,label" || line[0] == '#') continue;
    auto fields = split(line, ',');
    if (fields.size() != 2) throw std::runtime_error(path + ": expected 'user,label'");
    auto it = std::lower_bound(users.begin(), users.end(), fields[0]);
    if (it == users.end() || *it != fields[0]) continue;  // label for absent user
    int v = std::stoi(std::string(fields[1]));
    if (v != 0 && v != 1) throw std::runtime_error(path + ": labels must be 0 or 1");
    labels[it - users.begin()] = v;
  }
  return labels;
}

}  // namespace hategraph
