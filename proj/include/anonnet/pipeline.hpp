#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "anonnet/classifier.hpp"
#include "anonnet/netgraph.hpp"
#include "anonnet/topics.hpp"

namespace anonnet {

struct ClassifierConfig {
  std::string model = "forest";  // "forest" or "tree"
  ForestParams forest;
  TreeParams tree;
  int folds = 5;
};

struct TopicsConfig {
  std::size_t accounts = 10;            // top fused-rank accounts to model
  std::vector<std::string> account_ids;  // explicit list, overrides `accounts`
  std::size_t tweet_limit = 1500;
  std::vector<int> grid = default_topic_grid();
  int seeds_per_k = 3;
  int iterations = 1000;
  double beta = 0.01;
  std::size_t top_n = 10;
  std::size_t window = 10;
  double epsilon = 1e-12;
  std::map<std::string, int> overrides;  // raw id or pseudonym -> K
  std::optional<std::filesystem::path> stopwords;
  std::optional<std::filesystem::path> contractions;
  bool merge_bigrams = true;
  std::size_t bigram_min_count = 10;
  double bigram_min_pmi = 3.0;
};

struct PipelineConfig {
  std::filesystem::path config_path;
  std::string config_hash;  // sha256 of the canonical config document

  std::filesystem::path snapshots;
  std::optional<std::filesystem::path> edges;
  std::optional<std::filesystem::path> tweets;
  std::filesystem::path output_dir;

  std::optional<std::filesystem::path> key_file;
  std::optional<std::string> key_env;

  std::optional<std::filesystem::path> keywords;
  std::optional<std::filesystem::path> hacker_terms;
  std::optional<std::filesystem::path> mottos;
  std::optional<std::filesystem::path> sentiment;

  ClassifierConfig classifier;
  int expansion_stages = 2;
  CentralityOptions centrality;
  std::size_t rank_top_k = 10;
  std::size_t curve_limit = 100;
  std::vector<std::size_t> temporal_top_k{100, 200};
  int temporal_from = 2011;
  int temporal_to = 2013;
  long long subgraph_k = 50;
  TopicsConfig topics;

  std::uint64_t seed = 0;
  int workers = 1;
};

// Command-line values that take precedence over the config file.
struct ConfigOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<std::filesystem::path> output_dir;
};

// Reads a JSON config. Relative paths resolve against the config file's
// directory; an overriding output dir resolves against the working directory.
// Unknown keys, missing referenced files and an unset seed are ConfigErrors.
PipelineConfig load_config(const std::filesystem::path& path, const ConfigOverrides& overrides = {});

const std::vector<std::string>& pipeline_commands();

// Runs one command, writing artifacts and the manifest entry under
// config.output_dir. Progress and warnings go to `log`. Throws anonnet::Error.
void run_command(std::string_view command, const PipelineConfig& config, std::ostream& log);

}  // namespace anonnet
