#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "anonnet/classifier.hpp"
#include "anonnet/ingest.hpp"
#include "anonnet/random.hpp"

// Seeded generators for test fixtures and benchmarks.
namespace anonnet::synthetic {

struct AccountSet {
  std::vector<AccountProfile> profiles;
  std::vector<ClassLabel> labels;  // parallel to profiles
};

// Candidate-like accounts: every account carries a collective keyword in a
// name. Positives also use one in the description and mostly carry an image
// flag; negatives have keyword-free descriptions. Ids are "syn<N>".
AccountSet accounts(std::size_t positives, std::size_t negatives, std::uint64_t seed);

// Arbitrary profile for fuzzing: mixed scripts, emoji, digits, punctuation,
// keywords in random case and position, random flags and counters.
AccountProfile fuzz_profile(rng::Engine& eng, std::size_t index);

struct PlantedTopicParams {
  int topics = 5;
  int documents = 500;
  int words_per_topic = 30;
  int shared_words = 1;        // words each topic shares with the next one
  int document_length = 40;
  double dominant_share = 0.9;  // probability a token comes from the document's topic
  double zipf_exponent = 1.0;   // word i of a topic has weight 1 / (i + 1)^s
  std::uint64_t seed = 0;
};

struct PlantedCorpus {
  std::vector<std::string> documents;
  std::vector<std::vector<std::string>> topic_words;  // planted words per topic
  std::vector<int> dominant_topic;                    // per document
};

// Documents are space-joined pseudo-words that pass through preprocessing
// unchanged.
PlantedCorpus planted_topics(const PlantedTopicParams& params);

}  // namespace anonnet::synthetic
