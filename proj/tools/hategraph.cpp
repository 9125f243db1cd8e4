#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hategraph/io.hpp"
#include "hategraph/pipeline.hpp"

using namespace hategraph;

namespace {

struct CliFlags {
  std::string config_path;
  std::string out_dir;
  std::string model;
  std::string fractions;
  std::uint64_t seed = 0;
  bool seed_set = false;
  bool out_set = false;
};

PipelineConfig build_config(const CliFlags& flags) {
  nlohmann::json j = nlohmann::json::object();
  if (!flags.config_path.empty()) {
    try {
      j = nlohmann::json::parse(read_file(flags.config_path));
    } catch (const nlohmann::json::exception& e) {
      throw PipelineError(std::string("bad config JSON: ") + e.what(),
                          flags.config_path);
    } catch (const std::runtime_error&) {
      throw PipelineError("missing config file: " + flags.config_path,
                          flags.config_path);
    }
  }
  // precedence: flags > file > defaults
  if (flags.seed_set) j["seed"] = flags.seed;
  if (flags.out_set) j["out"] = flags.out_dir;
  if (!flags.model.empty()) j["model"]["name"] = flags.model;
  if (!flags.fractions.empty()) {
    std::vector<int> fr;
    for (std::string_view part : split(flags.fractions, ','))
      fr.push_back(std::stoi(std::string(part)));
    j["folds"]["fractions"] = fr;
  }
  return parse_pipeline_config(j.dump());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hateful-user detection pipeline"};
  app.require_subcommand(1);

  CliFlags flags;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", flags.config_path, "pipeline config JSON");
    sub->add_option("--seed", flags.seed, "root RNG seed")
        ->each([&](const std::string&) { flags.seed_set = true; });
    sub->add_option("--out", flags.out_dir, "output directory")
        ->each([&](const std::string&) { flags.out_set = true; });
    sub->add_option("--model", flags.model,
                    "model: gcn|cheb|sage|agnn|gat|logistic|deepwalk|node2vec");
    sub->add_option("--fractions", flags.fractions,
                    "label fractions, e.g. 5,10,15,20,50,80");
  };

  CLI::App* synth = app.add_subcommand("synth", "generate a synthetic dataset");
  CLI::App* embed = app.add_subcommand("embed", "train feature embeddings");
  CLI::App* train = app.add_subcommand("train", "train a classifier");
  CLI::App* benchmark =
      app.add_subcommand("benchmark", "label-fraction sweep over models");
  CLI::App* transfer =
      app.add_subcommand("transfer", "zero-shot cross-graph evaluation");
  CLI::App* posthoc = app.add_subcommand("posthoc", "temporal analytics");
  for (CLI::App* sub : {synth, embed, train, benchmark, transfer, posthoc})
    add_common(sub);

  CLI11_PARSE(app, argc, argv);

  try {
    PipelineConfig cfg = build_config(flags);
    if (synth->parsed()) return cmd_synth(cfg);
    if (embed->parsed()) return cmd_embed(cfg);
    if (train->parsed()) return cmd_train(cfg);
    if (benchmark->parsed()) return cmd_benchmark(cfg);
    if (transfer->parsed()) return cmd_transfer(cfg);
    if (posthoc->parsed()) return cmd_posthoc(cfg);
  } catch (const PipelineError& e) {
    nlohmann::json err;
    err["error"] = e.what();
    if (!e.path.empty()) err["path"] = e.path;
    std::fprintf(stderr, "%s\n", err.dump().c_str());
    return 2;
  } catch (const std::exception& e) {
    nlohmann::json err;
    err["error"] = e.what();
    std::fprintf(stderr, "%s\n", err.dump().c_str());
    return 2;
  }
  return 1;
}
