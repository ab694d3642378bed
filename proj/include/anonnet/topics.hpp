#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "anonnet/ingest.hpp"

namespace anonnet {

// Preprocessing -----------------------------------------------------------------

const std::set<std::string>& default_stopwords();
const std::map<std::string, std::string>& default_contractions();

// One word per line, '#' comments.
std::set<std::string> load_stopwords(const std::filesystem::path& path);
// "contraction<TAB>expansion" per line, '#' comments.
std::map<std::string, std::string> load_contractions(const std::filesystem::path& path);

struct PreprocessOptions {
  std::set<std::string> stopwords = default_stopwords();
  std::map<std::string, std::string> contractions = default_contractions();
  std::size_t min_token_chars = 2;
  bool merge_bigrams = true;
  std::size_t bigram_min_count = 10;
  double bigram_min_pmi = 3.0;
};

struct TokenizedCorpus {
  std::vector<std::vector<std::uint32_t>> documents;
  std::vector<std::string> vocabulary;  // sorted; id = position
  std::vector<std::string> source_ids;  // tweet id per document
  std::size_t dropped_empty = 0;

  std::size_t total_tokens() const;
  std::optional<std::uint32_t> id_of(std::string_view token) const;
  // Tokens joined by single spaces.
  std::string render(std::size_t doc) const;
};

// Per tweet: case folding; URLs, "RT" markers and @-mentions removed; '#'
// dropped from hashtags; contractions expanded; split on characters other
// than letters, digits and '_'; stopwords and short tokens removed. Frequent
// adjacent pairs are then merged into "a_b" tokens (count and PMI thresholds)
// until no pair qualifies. Documents left empty are dropped and counted.
TokenizedCorpus preprocess(std::span<const TweetRecord> tweets, const PreprocessOptions& opts = {});
TokenizedCorpus preprocess_texts(std::span<const std::string> texts, const PreprocessOptions& opts = {});

// Tokens of one text before bigram merging.
std::vector<std::string> tokenize(std::string_view text, const PreprocessOptions& opts);

// LDA ----------------------------------------------------------------------------

struct LdaParams {
  int topics = 10;
  int iterations = 1000;
  std::optional<double> alpha;  // default 50 / topics
  double beta = 0.01;
  std::uint64_t seed = 0;
};

class TopicModel {
 public:
  TopicModel(int topics, std::size_t vocabulary, std::size_t documents, double alpha, double beta,
             int iterations, std::uint64_t seed, std::vector<double> phi, std::vector<double> theta);

  int topics() const noexcept { return topics_; }
  std::size_t vocabulary_size() const noexcept { return vocabulary_; }
  std::size_t documents() const noexcept { return documents_; }
  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  int iterations() const noexcept { return iterations_; }
  std::uint64_t seed() const noexcept { return seed_; }

  // Topic-word distribution row (length V).
  std::span<const double> phi(int topic) const;
  // Document-topic distribution row (length K).
  std::span<const double> theta(std::size_t doc) const;

  std::optional<double> coherence;

  bool same_distributions(const TopicModel& o) const { return phi_ == o.phi_ && theta_ == o.theta_; }

 private:
  int topics_;
  std::size_t vocabulary_;
  std::size_t documents_;
  double alpha_;
  double beta_;
  int iterations_;
  std::uint64_t seed_;
  std::vector<double> phi_;
  std::vector<double> theta_;
};

// Collapsed Gibbs sampling; phi and theta are the smoothed final-state
// estimates. Throws DataError for an empty corpus or topics > token count.
TopicModel lda_fit(const TokenizedCorpus& corpus, const LdaParams& params);

// Highest-probability word ids of a topic, ties by id. Throws DataError for an
// out-of-range topic.
std::vector<std::uint32_t> top_words(const TopicModel& model, int topic, std::size_t n = 10);

// Coherence ----------------------------------------------------------------------

// Boolean sliding-window document frequencies over a reference corpus. A
// document no longer than the window is a single window.
class CooccurrenceIndex {
 public:
  CooccurrenceIndex(const TokenizedCorpus& reference, std::size_t window);

  std::size_t windows() const noexcept { return windows_; }
  std::size_t window_size() const noexcept { return window_; }
  double probability(std::uint32_t w) const;
  double joint_probability(std::uint32_t a, std::uint32_t b) const;
  // log((P(a,b) + eps) / (P(a) P(b)))
  double pmi(std::uint32_t a, std::uint32_t b, double epsilon) const;

 private:
  std::size_t window_;
  std::size_t windows_ = 0;
  std::vector<std::vector<std::uint32_t>> postings_;  // word -> sorted window ids
};

// Mean over topics of the mean pairwise PMI of each topic's word list.
double uci_coherence(std::span<const std::vector<std::uint32_t>> topic_words, const CooccurrenceIndex& index,
                     double epsilon = 1e-12);

double uci_coherence(const TopicModel& model, const TokenizedCorpus& reference, std::size_t top_n = 10,
                     std::size_t window = 10, double epsilon = 1e-12);

// Topic-number sweep --------------------------------------------------------------

// 2, 8, ..., 38: start at 2, step 6, not exceeding 40.
std::vector<int> default_topic_grid();

struct SweepOptions {
  std::vector<int> grid = default_topic_grid();
  int seeds_per_k = 3;
  int iterations = 1000;
  double beta = 0.01;
  std::size_t top_n = 10;
  std::size_t window = 10;
  double epsilon = 1e-12;
  std::uint64_t seed = 0;  // run j of every K uses seed + j
  int workers = 1;
};

struct SweepPoint {
  int topics = 0;
  std::vector<double> per_seed;
  double mean = 0.0;
};

struct SweepResult {
  std::vector<SweepPoint> points;  // grid order
  int selected_topics = 0;         // argmax mean coherence; ties to the smaller K
  std::vector<TopicModel> models;  // first-seed model per grid point
};

SweepResult sweep_topic_numbers(const TokenizedCorpus& corpus, const SweepOptions& opts = {});

// Tweet selection --------------------------------------------------------------------

struct RecentSelection {
  std::vector<TweetRecord> tweets;  // newest first
  std::size_t available = 0;
  std::optional<Timestamp> oldest;
  std::optional<Timestamp> newest;
};

// The `limit` most recent tweets; equal timestamps break by tweet id,
// higher (numerically, for digit-only ids) first.
RecentSelection select_recent(std::span<const TweetRecord> tweets, std::size_t limit = 1500);

// Reports -------------------------------------------------------------------------------

// One block per topic with the top words and their probabilities and a blank
// label line for a human to fill in.
std::string format_topic_report(const std::string& account_alias, const TopicModel& model,
                                const TokenizedCorpus& corpus, std::size_t top_n = 10);

// Rows: topics, mean coherence, per-seed coherences.
std::string format_coherence_curve(const SweepResult& sweep);

}  // namespace anonnet
