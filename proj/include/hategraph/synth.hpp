#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hategraph/graph.hpp"
#include "hategraph/lexicon.hpp"
#include "hategraph/posthoc.hpp"
#include "hategraph/text.hpp"

namespace hategraph {

// Two-block directed stochastic block model with planted hateful users whose
// posts carry lexicon terms at an elevated rate. p_in/p_out are directed edge
// densities; reciprocity is the expected fraction of edges whose reverse
// edge also exists.
struct SynthConfig {
  std::int64_t n = 2000;
  double hateful_fraction = 0.3;
  double p_in = 0.02;
  double p_out = 0.002;
  double reciprocity = 0.3;
  double hl_rate_hateful = 0.05;  // per-post probability of a lexicon term
  double hl_rate_normal = 0.02;
  int posts_min = 10;
  int posts_max = 30;
  int post_tokens_min = 6;
  int post_tokens_max = 18;
  int vocab_size = 4000;
  double zipf_exponent = 1.05;
  // class-correlated language: tokens come from a jargon vocabulary at a rate
  // that saturates in the user's lexicon rate r relative to the platform
  // baseline b: jargon_max * (1 - (b/r)^jargon_gamma) for r > b, else 0.
  // Weak-rate hateful users therefore read like ordinary users.
  int topic_vocab = 400;
  double jargon_max = 0.5;
  double jargon_gamma = 2.0;
  // per-user rate heterogeneity: user rate = r + (z-1)*spread*min(r, 1-r)
  // with z ~ U(0,2); class means stay at the configured rates
  double rate_spread = 0.9;
  // repost multiplicity: edge weight drawn from a Zipf tail over 1..weight_max
  int weight_max = 8;
  double weight_zipf = 1.3;
  int hashtag_vocab = 200;
  double hashtag_rate = 0.25;  // per-post probability of appending a hashtag
  double url_rate = 0.03;      // noise tokens exercising preprocessing
  double mention_rate = 0.03;
  double emoticon_rate = 0.05;
  std::string start_month = "2016-10";
  int months = 12;
  std::vector<std::string> communities = {"Jews", "Muslims", "Blacks"};
  int terms_per_community = 3;
  std::uint64_t seed = 1;
};

struct SynthDataset {
  DirectedGraph graph;  // node i <-> corpus.users[i]
  UserCorpus corpus;
  std::vector<int> labels;  // 1 hateful
  std::vector<TimedEdge> timed_edges;
  Lexicon lexicon;
  SynthConfig config;
};

SynthDataset generate(const SynthConfig& cfg);

// edges.tsv, edge_times.tsv, posts.jsonl, labels.csv, lexicon.csv, config.json
void write_dataset(const SynthDataset& ds, const std::string& dir);

SynthConfig synth_config_from_json(const std::string& json_text);
std::string synth_config_to_json(const SynthConfig& cfg);

void save_labels_csv(const std::vector<std::string>& users,
                     const std::vector<int>& labels, const std::string& path);
std::vector<int> load_labels_csv(const std::string& path,
                                 const std::vector<std::string>& users);

}  // namespace hategraph
