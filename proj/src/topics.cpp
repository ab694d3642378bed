#include "anonnet/topics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "anonnet/error.hpp"
#include "anonnet/parallel.hpp"
#include "anonnet/random.hpp"
#include "anonnet/text.hpp"

namespace anonnet {

namespace {

bool is_token_char(char32_t c) { return text::is_alnum(c) || c == U'_'; }

std::size_t code_points(std::string_view s) { return text::decode(s).size(); }

// Replaces typographic apostrophes so contraction lookup sees ASCII.
std::string normalize_apostrophes(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char32_t c : text::decode(s)) text::append_utf8(out, c == U'’' || c == U'ʼ' ? U'\'' : c);
  return out;
}

bool is_url(std::string_view t) {
  return t.starts_with("http://") || t.starts_with("https://") || t.starts_with("www.");
}

// Splits into runs of letters, digits and '_'.
void split_runs(std::string_view s, std::vector<std::string>& out) {
  std::u32string cur;
  for (char32_t c : text::decode(s)) {
    if (is_token_char(c)) {
      cur.push_back(c);
    } else if (!cur.empty()) {
      out.push_back(text::encode(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(text::encode(cur));
}

std::string strip_outer_punct(std::string_view t) {
  const std::u32string cps = text::decode(t);
  std::size_t b = 0;
  std::size_t e = cps.size();
  while (b < e && !is_token_char(cps[b])) ++b;
  while (e > b && !is_token_char(cps[e - 1])) --e;
  return text::encode(std::u32string_view(cps).substr(b, e - b));
}

// Expands a contraction using the table, then generic suffix rules.
std::string expand_contraction(const std::string& word, const std::map<std::string, std::string>& table) {
  if (auto it = table.find(word); it != table.end()) return it->second;
  if (word.find('\'') == std::string::npos) return word;
  static const std::vector<std::pair<std::string_view, std::string_view>> kSuffixes{
      {"n't", " not"}, {"'re", " are"}, {"'ll", " will"}, {"'ve", " have"},
      {"'m", " am"},   {"'d", " would"}, {"'s", ""},
  };
  for (const auto& [suffix, replacement] : kSuffixes) {
    if (word.size() > suffix.size() && word.ends_with(suffix)) {
      return word.substr(0, word.size() - suffix.size()) + std::string(replacement);
    }
  }
  return word;
}

std::set<std::string> read_word_set(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::set<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto w = text::trim(line);
    if (!w.empty()) out.insert(text::fold_case(w));
  }
  return out;
}

using TokenDocs = std::vector<std::vector<std::string>>;

// One merging round; returns whether anything was merged.
bool merge_round(TokenDocs& docs, const PreprocessOptions& opts) {
  std::unordered_map<std::string, std::size_t> unigram;
  std::map<std::pair<std::string, std::string>, std::size_t> pairs;
  std::size_t total = 0;
  auto mergeable = [](const std::string& t) { return t.find('_') == std::string::npos; };
  for (const auto& doc : docs) {
    total += doc.size();
    for (std::size_t i = 0; i < doc.size(); ++i) {
      ++unigram[doc[i]];
      if (i + 1 < doc.size() && mergeable(doc[i]) && mergeable(doc[i + 1])) ++pairs[{doc[i], doc[i + 1]}];
    }
  }
  std::set<std::pair<std::string, std::string>> phrases;
  for (const auto& [pair, count] : pairs) {
    if (count < opts.bigram_min_count) continue;
    const double pmi = std::log(static_cast<double>(count) * static_cast<double>(total) /
                                (static_cast<double>(unigram[pair.first]) * static_cast<double>(unigram[pair.second])));
    if (pmi > opts.bigram_min_pmi) phrases.insert(pair);
  }
  if (phrases.empty()) return false;

  bool merged = false;
  for (auto& doc : docs) {
    std::vector<std::string> out;
    out.reserve(doc.size());
    for (std::size_t i = 0; i < doc.size(); ++i) {
      if (i + 1 < doc.size() && phrases.contains({doc[i], doc[i + 1]})) {
        out.push_back(doc[i] + "_" + doc[i + 1]);
        ++i;
        merged = true;
      } else {
        out.push_back(std::move(doc[i]));
      }
    }
    doc = std::move(out);
  }
  return merged;
}

TokenizedCorpus build_corpus(TokenDocs docs, std::vector<std::string> ids, const PreprocessOptions& opts) {
  if (opts.merge_bigrams) {
    while (merge_round(docs, opts)) {
    }
  }
  TokenizedCorpus corpus;
  std::set<std::string> vocab;
  for (const auto& doc : docs) vocab.insert(doc.begin(), doc.end());
  corpus.vocabulary.assign(vocab.begin(), vocab.end());
  std::unordered_map<std::string_view, std::uint32_t> index;
  for (std::size_t i = 0; i < corpus.vocabulary.size(); ++i) {
    index.emplace(corpus.vocabulary[i], static_cast<std::uint32_t>(i));
  }
  for (std::size_t d = 0; d < docs.size(); ++d) {
    if (docs[d].empty()) {
      ++corpus.dropped_empty;
      continue;
    }
    std::vector<std::uint32_t> ids_doc;
    ids_doc.reserve(docs[d].size());
    for (const auto& t : docs[d]) ids_doc.push_back(index.at(t));
    corpus.documents.push_back(std::move(ids_doc));
    corpus.source_ids.push_back(ids[d]);
  }
  return corpus;
}

int resolve_topics(int k) {
  if (k < 1) throw ConfigError("topic count must be >= 1");
  return k;
}

}  // namespace

// ---------------------------------------------------------------------------
// Defaults

const std::set<std::string>& default_stopwords() {
  static const std::set<std::string> kStopwords{
      "a", "about", "above", "after", "again", "against", "ain", "all", "am", "an", "and", "any", "are", "aren",
      "as", "at", "be", "because", "been", "before", "being", "below", "between", "both", "but", "by", "can",
      "couldn", "d", "did", "didn", "do", "does", "doesn", "doing", "don", "down", "during", "each", "few", "for",
      "from", "further", "had", "hadn", "has", "hasn", "have", "haven", "having", "he", "her", "here", "hers",
      "herself", "him", "himself", "his", "how", "i", "if", "in", "into", "is", "isn", "it", "its", "itself",
      "just", "ll", "m", "ma", "me", "mightn", "more", "most", "mustn", "my", "myself", "needn", "no", "nor",
      "not", "now", "o", "of", "off", "on", "once", "only", "or", "other", "our", "ours", "ourselves", "out",
      "over", "own", "re", "s", "same", "shan", "she", "should", "shouldn", "so", "some", "such", "t", "than",
      "that", "the", "their", "theirs", "them", "themselves", "then", "there", "these", "they", "this", "those",
      "through", "to", "too", "under", "until", "up", "ve", "very", "was", "wasn", "we", "were", "weren", "what",
      "when", "where", "which", "while", "who", "whom", "why", "will", "with", "won", "wouldn", "y", "you",
      "your", "yours", "yourself", "yourselves", "would", "could", "also", "get", "got", "amp", "via", "rt",
      "us", "one", "like", "new", "say", "says", "said", "make", "go", "know", "see", "let", "well", "want",
  };
  return kStopwords;
}

const std::map<std::string, std::string>& default_contractions() {
  static const std::map<std::string, std::string> kContractions{
      {"ain't", "am not"},     {"aren't", "are not"},     {"can't", "can not"},     {"cannot", "can not"},
      {"couldn't", "could not"}, {"didn't", "did not"},   {"doesn't", "does not"}, {"don't", "do not"},
      {"hadn't", "had not"},   {"hasn't", "has not"},     {"haven't", "have not"},  {"he's", "he is"},
      {"i'm", "i am"},         {"isn't", "is not"},       {"it's", "it is"},        {"let's", "let us"},
      {"mustn't", "must not"}, {"shan't", "shall not"},   {"she's", "she is"},      {"shouldn't", "should not"},
      {"that's", "that is"},   {"there's", "there is"},   {"they're", "they are"},  {"wasn't", "was not"},
      {"we're", "we are"},     {"weren't", "were not"},   {"what's", "what is"},    {"who's", "who is"},
      {"won't", "will not"},   {"wouldn't", "would not"}, {"you're", "you are"},    {"y'all", "you all"},
  };
  return kContractions;
}

std::set<std::string> load_stopwords(const std::filesystem::path& path) { return read_word_set(path); }

std::map<std::string, std::string> load_contractions(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (text::trim(line).empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError(path.string(), line_no, "", "expected contraction<TAB>expansion");
    out[text::fold_case(normalize_apostrophes(text::trim(std::string_view(line).substr(0, tab))))] =
        text::fold_case(text::trim(std::string_view(line).substr(tab + 1)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Preprocessing

std::size_t TokenizedCorpus::total_tokens() const {
  std::size_t n = 0;
  for (const auto& d : documents) n += d.size();
  return n;
}

std::optional<std::uint32_t> TokenizedCorpus::id_of(std::string_view token) const {
  auto it = std::lower_bound(vocabulary.begin(), vocabulary.end(), token);
  if (it == vocabulary.end() || *it != token) return std::nullopt;
  return static_cast<std::uint32_t>(it - vocabulary.begin());
}

std::string TokenizedCorpus::render(std::size_t doc) const {
  std::string out;
  for (auto id : documents.at(doc)) {
    if (!out.empty()) out.push_back(' ');
    out += vocabulary[id];
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view raw, const PreprocessOptions& opts) {
  const std::string folded = text::fold_case(normalize_apostrophes(raw));
  std::vector<std::string> pieces;
  for (auto token : text::split_whitespace(folded)) {
    if (is_url(token) || token.starts_with('@')) continue;
    std::string word = strip_outer_punct(token);
    if (word.empty()) continue;
    std::string expanded = expand_contraction(word, opts.contractions);
    split_runs(expanded, pieces);
  }
  std::vector<std::string> out;
  for (auto& p : pieces) {
    if (p == "rt" || opts.stopwords.contains(p) || code_points(p) < opts.min_token_chars) continue;
    out.push_back(std::move(p));
  }
  return out;
}

TokenizedCorpus preprocess(std::span<const TweetRecord> tweets, const PreprocessOptions& opts) {
  TokenDocs docs;
  std::vector<std::string> ids;
  for (const auto& t : tweets) {
    docs.push_back(tokenize(t.text, opts));
    ids.push_back(t.tweet_id);
  }
  return build_corpus(std::move(docs), std::move(ids), opts);
}

TokenizedCorpus preprocess_texts(std::span<const std::string> texts, const PreprocessOptions& opts) {
  TokenDocs docs;
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    docs.push_back(tokenize(texts[i], opts));
    ids.push_back(std::to_string(i));
  }
  return build_corpus(std::move(docs), std::move(ids), opts);
}

// ---------------------------------------------------------------------------
// LDA

TopicModel::TopicModel(int topics, std::size_t vocabulary, std::size_t documents, double alpha, double beta,
                       int iterations, std::uint64_t seed, std::vector<double> phi, std::vector<double> theta)
    : topics_(topics),
      vocabulary_(vocabulary),
      documents_(documents),
      alpha_(alpha),
      beta_(beta),
      iterations_(iterations),
      seed_(seed),
      phi_(std::move(phi)),
      theta_(std::move(theta)) {
  if (phi_.size() != static_cast<std::size_t>(topics_) * vocabulary_ ||
      theta_.size() != documents_ * static_cast<std::size_t>(topics_)) {
    throw DataError("topic model dimensions do not match");
  }
}

std::span<const double> TopicModel::phi(int topic) const {
  if (topic < 0 || topic >= topics_) throw DataError("topic " + std::to_string(topic) + " out of range");
  return {phi_.data() + static_cast<std::size_t>(topic) * vocabulary_, vocabulary_};
}

std::span<const double> TopicModel::theta(std::size_t doc) const {
  if (doc >= documents_) throw DataError("document " + std::to_string(doc) + " out of range");
  return {theta_.data() + doc * static_cast<std::size_t>(topics_), static_cast<std::size_t>(topics_)};
}

TopicModel lda_fit(const TokenizedCorpus& corpus, const LdaParams& params) {
  const int k_topics = resolve_topics(params.topics);
  const std::size_t total = corpus.total_tokens();
  if (corpus.documents.empty() || total == 0) throw DataError("cannot fit LDA to an empty corpus");
  if (static_cast<std::size_t>(k_topics) > total) {
    throw DataError("topic count " + std::to_string(k_topics) + " exceeds corpus token count " +
                    std::to_string(total));
  }
  if (params.iterations < 0) throw ConfigError("LDA iterations must be >= 0");
  const double alpha = params.alpha.value_or(50.0 / k_topics);
  const double beta = params.beta;
  if (!(alpha > 0.0) || !(beta > 0.0)) throw ConfigError("LDA hyperparameters must be positive");

  const auto K = static_cast<std::size_t>(k_topics);
  const std::size_t V = corpus.vocabulary.size();
  const std::size_t D = corpus.documents.size();
  const double v_beta = static_cast<double>(V) * beta;

  std::vector<std::uint32_t> doc_topic(D * K, 0);   // n_dk
  std::vector<std::uint32_t> word_topic(V * K, 0);  // n_wk, word-major
  std::vector<std::uint32_t> topic_total(K, 0);     // n_k
  std::vector<std::vector<std::uint32_t>> z(D);

  auto engine = rng::make_engine(params.seed);
  for (std::size_t d = 0; d < D; ++d) {
    const auto& doc = corpus.documents[d];
    z[d].resize(doc.size());
    for (std::size_t i = 0; i < doc.size(); ++i) {
      const auto k = static_cast<std::uint32_t>(rng::uniform_below(engine, K));
      z[d][i] = k;
      ++doc_topic[d * K + k];
      ++word_topic[doc[i] * K + k];
      ++topic_total[k];
    }
  }

  std::vector<double> cumulative(K);
  for (int iter = 0; iter < params.iterations; ++iter) {
    for (std::size_t d = 0; d < D; ++d) {
      const auto& doc = corpus.documents[d];
      for (std::size_t i = 0; i < doc.size(); ++i) {
        const std::uint32_t w = doc[i];
        const std::uint32_t old = z[d][i];
        --doc_topic[d * K + old];
        --word_topic[w * K + old];
        --topic_total[old];

        double acc = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
          acc += (doc_topic[d * K + k] + alpha) * (word_topic[w * K + k] + beta) / (topic_total[k] + v_beta);
          cumulative[k] = acc;
        }
        const double u = rng::uniform01(engine) * acc;
        std::size_t k_new = 0;
        while (k_new + 1 < K && cumulative[k_new] <= u) ++k_new;

        z[d][i] = static_cast<std::uint32_t>(k_new);
        ++doc_topic[d * K + k_new];
        ++word_topic[w * K + k_new];
        ++topic_total[k_new];
      }
    }
#ifndef NDEBUG
    const auto counted = std::accumulate(topic_total.begin(), topic_total.end(), std::size_t{0});
    const auto counted_words = std::accumulate(word_topic.begin(), word_topic.end(), std::size_t{0});
    if (counted != total || counted_words != total) throw Error("Gibbs count tables out of balance");
#endif
  }

  std::vector<double> phi(K * V);
  for (std::size_t k = 0; k < K; ++k) {
    const double denom = topic_total[k] + v_beta;
    for (std::size_t w = 0; w < V; ++w) phi[k * V + w] = (word_topic[w * K + k] + beta) / denom;
  }
  std::vector<double> theta(D * K);
  for (std::size_t d = 0; d < D; ++d) {
    const double denom = static_cast<double>(corpus.documents[d].size()) + static_cast<double>(K) * alpha;
    for (std::size_t k = 0; k < K; ++k) theta[d * K + k] = (doc_topic[d * K + k] + alpha) / denom;
  }
  return TopicModel(k_topics, V, D, alpha, beta, params.iterations, params.seed, std::move(phi), std::move(theta));
}

std::vector<std::uint32_t> top_words(const TopicModel& model, int topic, std::size_t n) {
  const auto row = model.phi(topic);
  std::vector<std::uint32_t> ids(row.size());
  std::iota(ids.begin(), ids.end(), 0u);
  n = std::min(n, ids.size());
  std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n), ids.end(),
                    [&](std::uint32_t a, std::uint32_t b) {
                      if (row[a] != row[b]) return row[a] > row[b];
                      return a < b;
                    });
  ids.resize(n);
  return ids;
}

// ---------------------------------------------------------------------------
// Coherence

CooccurrenceIndex::CooccurrenceIndex(const TokenizedCorpus& reference, std::size_t window)
    : window_(window), postings_(reference.vocabulary.size()) {
  if (window == 0) throw ConfigError("coherence window must be positive");
  std::vector<std::uint32_t> seen;
  for (const auto& doc : reference.documents) {
    if (doc.empty()) continue;
    const std::size_t n_windows = doc.size() <= window ? 1 : doc.size() - window + 1;
    for (std::size_t start = 0; start < n_windows; ++start) {
      const auto id = static_cast<std::uint32_t>(windows_++);
      const std::size_t end = std::min(doc.size(), start + window);
      seen.assign(doc.begin() + static_cast<std::ptrdiff_t>(start), doc.begin() + static_cast<std::ptrdiff_t>(end));
      std::sort(seen.begin(), seen.end());
      seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
      for (auto w : seen) postings_[w].push_back(id);
    }
  }
}

double CooccurrenceIndex::probability(std::uint32_t w) const {
  if (windows_ == 0) return 0.0;
  return static_cast<double>(postings_.at(w).size()) / static_cast<double>(windows_);
}

double CooccurrenceIndex::joint_probability(std::uint32_t a, std::uint32_t b) const {
  if (windows_ == 0) return 0.0;
  const auto& pa = postings_.at(a);
  const auto& pb = postings_.at(b);
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t both = 0;
  while (i < pa.size() && j < pb.size()) {
    if (pa[i] < pb[j]) {
      ++i;
    } else if (pb[j] < pa[i]) {
      ++j;
    } else {
      ++both;
      ++i;
      ++j;
    }
  }
  return static_cast<double>(both) / static_cast<double>(windows_);
}

double CooccurrenceIndex::pmi(std::uint32_t a, std::uint32_t b, double epsilon) const {
  const double pa = probability(a);
  const double pb = probability(b);
  if (pa == 0.0 || pb == 0.0) throw DataError("coherence word absent from the reference corpus");
  return std::log((joint_probability(a, b) + epsilon) / (pa * pb));
}

double uci_coherence(std::span<const std::vector<std::uint32_t>> topic_words, const CooccurrenceIndex& index,
                     double epsilon) {
  if (topic_words.empty()) throw DataError("no topics to score");
  double total = 0.0;
  for (const auto& words : topic_words) {
    double sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < words.size(); ++i) {
      for (std::size_t j = i + 1; j < words.size(); ++j) {
        sum += index.pmi(words[i], words[j], epsilon);
        ++pairs;
      }
    }
    total += pairs == 0 ? 0.0 : sum / static_cast<double>(pairs);
  }
  return total / static_cast<double>(topic_words.size());
}

double uci_coherence(const TopicModel& model, const TokenizedCorpus& reference, std::size_t top_n,
                     std::size_t window, double epsilon) {
  if (top_n > model.vocabulary_size()) {
    throw DataError("top_n " + std::to_string(top_n) + " exceeds vocabulary size " +
                    std::to_string(model.vocabulary_size()));
  }
  const CooccurrenceIndex index(reference, window);
  std::vector<std::vector<std::uint32_t>> words;
  for (int k = 0; k < model.topics(); ++k) words.push_back(top_words(model, k, top_n));
  return uci_coherence(words, index, epsilon);
}

// ---------------------------------------------------------------------------
// Sweep

std::vector<int> default_topic_grid() {
  std::vector<int> grid;
  for (int k = 2; k <= 40; k += 6) grid.push_back(k);
  return grid;
}

SweepResult sweep_topic_numbers(const TokenizedCorpus& corpus, const SweepOptions& opts) {
  if (opts.grid.empty()) throw ConfigError("topic grid is empty");
  for (std::size_t i = 0; i < opts.grid.size(); ++i) {
    resolve_topics(opts.grid[i]);
    if (i > 0 && opts.grid[i] <= opts.grid[i - 1]) throw ConfigError("topic grid must be strictly increasing");
  }
  if (opts.seeds_per_k < 1) throw ConfigError("seeds per topic count must be >= 1");
  if (opts.top_n > corpus.vocabulary.size()) {
    throw DataError("top_n " + std::to_string(opts.top_n) + " exceeds vocabulary size " +
                    std::to_string(corpus.vocabulary.size()));
  }

  const CooccurrenceIndex index(corpus, opts.window);
  const auto runs = static_cast<std::size_t>(opts.seeds_per_k);
  const std::size_t jobs = opts.grid.size() * runs;
  std::vector<std::optional<TopicModel>> fitted(jobs);
  std::vector<double> coherence(jobs, 0.0);
  parallel_for(jobs, opts.workers, [&](std::size_t job) {
    const std::size_t g = job / runs;
    const std::size_t r = job % runs;
    LdaParams p;
    p.topics = opts.grid[g];
    p.iterations = opts.iterations;
    p.beta = opts.beta;
    p.seed = opts.seed + r;
    TopicModel model = lda_fit(corpus, p);
    std::vector<std::vector<std::uint32_t>> words;
    for (int k = 0; k < model.topics(); ++k) words.push_back(top_words(model, k, opts.top_n));
    coherence[job] = uci_coherence(words, index, opts.epsilon);
    model.coherence = coherence[job];
    if (r == 0) fitted[job] = std::move(model);
  });

  SweepResult result;
  for (std::size_t g = 0; g < opts.grid.size(); ++g) {
    SweepPoint point;
    point.topics = opts.grid[g];
    point.per_seed.assign(coherence.begin() + static_cast<std::ptrdiff_t>(g * runs),
                          coherence.begin() + static_cast<std::ptrdiff_t>((g + 1) * runs));
    point.mean = std::accumulate(point.per_seed.begin(), point.per_seed.end(), 0.0) / static_cast<double>(runs);
    result.points.push_back(point);
    result.models.push_back(std::move(*fitted[g * runs]));
  }
  const auto best = std::max_element(result.points.begin(), result.points.end(),
                                     [](const SweepPoint& a, const SweepPoint& b) { return a.mean < b.mean; });
  result.selected_topics = best->topics;
  return result;
}

// ---------------------------------------------------------------------------
// Tweet selection

namespace {

bool is_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

// True when a's id ranks after b's (higher ids first).
bool id_greater(const std::string& a, const std::string& b) {
  if (is_digits(a) && is_digits(b)) {
    const auto ta = a.substr(std::min(a.find_first_not_of('0'), a.size()));
    const auto tb = b.substr(std::min(b.find_first_not_of('0'), b.size()));
    if (ta.size() != tb.size()) return ta.size() > tb.size();
    if (ta != tb) return ta > tb;
  }
  return a > b;
}

}  // namespace

RecentSelection select_recent(std::span<const TweetRecord> tweets, std::size_t limit) {
  RecentSelection sel;
  sel.available = tweets.size();
  sel.tweets.assign(tweets.begin(), tweets.end());
  std::sort(sel.tweets.begin(), sel.tweets.end(), [](const TweetRecord& a, const TweetRecord& b) {
    if (a.created_at != b.created_at) return a.created_at > b.created_at;
    return id_greater(a.tweet_id, b.tweet_id);
  });
  if (sel.tweets.size() > limit) sel.tweets.resize(limit);
  if (!sel.tweets.empty()) {
    sel.newest = sel.tweets.front().created_at;
    sel.oldest = sel.tweets.back().created_at;
  }
  return sel;
}

// ---------------------------------------------------------------------------
// Reports

std::string format_topic_report(const std::string& account_alias, const TopicModel& model,
                                const TokenizedCorpus& corpus, std::size_t top_n) {
  std::ostringstream out;
  out << "account\t" << account_alias << '\n';
  out << "topics\t" << model.topics() << '\n';
  out << "documents\t" << model.documents() << '\n';
  if (model.coherence) out << "coherence\t" << text::format_double(*model.coherence) << '\n';
  for (int k = 0; k < model.topics(); ++k) {
    out << '\n' << "topic\t" << (k + 1) << '\n';
    out << "label\t\n";
    const auto row = model.phi(k);
    for (auto w : top_words(model, k, top_n)) {
      out << corpus.vocabulary[w] << '\t' << text::format_double(row[w]) << '\n';
    }
  }
  return out.str();
}

std::string format_coherence_curve(const SweepResult& sweep) {
  std::ostringstream out;
  out << "topics\tmean_coherence";
  const std::size_t runs = sweep.points.empty() ? 0 : sweep.points.front().per_seed.size();
  for (std::size_t r = 0; r < runs; ++r) out << "\tseed_" << r;
  out << "\tselected\n";
  for (const auto& p : sweep.points) {
    out << p.topics << '\t' << text::format_double(p.mean);
    for (double c : p.per_seed) out << '\t' << text::format_double(c);
    out << '\t' << (p.topics == sweep.selected_topics ? "yes" : "no") << '\n';
  }
  return out.str();
}

}  // namespace anonnet
