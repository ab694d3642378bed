#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "anonnet/error.hpp"
#include "anonnet/synthetic.hpp"
#include "anonnet/topics.hpp"

using namespace anonnet;

namespace {

PreprocessOptions plain(std::set<std::string> stopwords = {}) {
  PreprocessOptions o;
  o.stopwords = std::move(stopwords);
  o.merge_bigrams = false;
  return o;
}

TweetRecord tweet(std::string id, std::string when, std::string text = "x") {
  return {"a", std::move(id), parse_timestamp(when), std::move(text), false};
}

std::vector<std::string> filler(std::size_t docs, std::size_t len, std::size_t vocab, std::uint64_t seed) {
  auto eng = rng::make_engine(seed, 0);
  std::vector<std::string> out;
  for (std::size_t d = 0; d < docs; ++d) {
    std::string s;
    for (std::size_t i = 0; i < len; ++i) {
      if (!s.empty()) s += ' ';
      s += "w" + std::to_string(rng::uniform_below(eng, vocab)) + "x";
    }
    out.push_back(s);
  }
  return out;
}

double row_sum(std::span<const double> r) { return std::accumulate(r.begin(), r.end(), 0.0); }

}  // namespace

TEST(Preprocess, NoiseOnlyTweetDropped) {
  const std::vector<std::string> texts{"RT @bob Check https://x.y NOW", "keep these words"};
  const auto c = preprocess_texts(texts, plain({"check", "now"}));
  EXPECT_EQ(c.dropped_empty, 1u);
  ASSERT_EQ(c.documents.size(), 1u);
  EXPECT_EQ(c.render(0), "keep these words");
}

TEST(Preprocess, Contractions) {
  EXPECT_EQ(tokenize("don't stop", plain()), (std::vector<std::string>{"do", "not", "stop"}));
  EXPECT_EQ(tokenize("don't stop", plain({"not"})), (std::vector<std::string>{"do", "stop"}));
  EXPECT_EQ(tokenize("We’re here", plain()), (std::vector<std::string>{"we", "are", "here"}));
}

TEST(Preprocess, HashtagsKeepTextMentionsDropped) {
  EXPECT_EQ(tokenize("#OpIcarus @someone www.site.net x", plain()), (std::vector<std::string>{"opicarus"}));
}

TEST(Preprocess, FrequentPairMerged) {
  std::vector<std::string> texts = filler(300, 4, 400, 1);
  for (int i = 0; i < 50; ++i) texts.push_back("julian assange news" + std::to_string(i % 7) + "x");
  const auto c = preprocess_texts(texts);
  EXPECT_TRUE(c.id_of("julian_assange").has_value());
  EXPECT_FALSE(c.id_of("julian").has_value());
}

TEST(Preprocess, RareOrWeakPairNotMerged) {
  std::vector<std::string> texts = filler(300, 4, 400, 2);
  for (int i = 0; i < 9; ++i) texts.push_back("julian assange");
  EXPECT_FALSE(preprocess_texts(texts).id_of("julian_assange").has_value());
}

TEST(Preprocess, Idempotent) {
  std::vector<std::string> texts = filler(300, 6, 300, 3);
  for (int i = 0; i < 40; ++i) texts.push_back("RT war crime report don't @x https://t.co/a");
  const auto once = preprocess_texts(texts);
  std::vector<std::string> rendered;
  for (std::size_t d = 0; d < once.documents.size(); ++d) rendered.push_back(once.render(d));
  const auto twice = preprocess_texts(rendered);
  EXPECT_EQ(twice.vocabulary, once.vocabulary);
  EXPECT_EQ(twice.documents, once.documents);
}

TEST(Preprocess, VocabularySortedAndIdsValid) {
  const auto c = preprocess_texts(filler(50, 5, 30, 4));
  EXPECT_TRUE(std::is_sorted(c.vocabulary.begin(), c.vocabulary.end()));
  for (const auto& d : c.documents) {
    EXPECT_FALSE(d.empty());
    for (auto w : d) EXPECT_LT(w, c.vocabulary.size());
  }
}

TEST(Lda, SingleTopicIsSmoothedUnigram) {
  const auto c = preprocess_texts(filler(40, 6, 15, 5), plain());
  LdaParams p;
  p.topics = 1;
  p.iterations = 20;
  const auto m = lda_fit(c, p);
  std::vector<double> counts(c.vocabulary.size(), 0.0);
  for (const auto& d : c.documents)
    for (auto w : d) counts[w] += 1.0;
  const double n = static_cast<double>(c.total_tokens());
  const double v = static_cast<double>(c.vocabulary.size());
  for (std::size_t w = 0; w < counts.size(); ++w) EXPECT_NEAR(m.phi(0)[w], (counts[w] + 0.01) / (n + v * 0.01), 1e-12);
  for (std::size_t d = 0; d < c.documents.size(); ++d) EXPECT_DOUBLE_EQ(m.theta(d)[0], 1.0);
}

TEST(Lda, PlantedDisjointTopics) {
  synthetic::PlantedTopicParams pp;
  pp.topics = 2;
  pp.documents = 200;
  pp.shared_words = 0;
  pp.dominant_share = 1.0;
  pp.seed = 4;
  const auto planted = synthetic::planted_topics(pp);
  const auto c = preprocess_texts(planted.documents, plain());
  LdaParams p;
  p.topics = 2;
  p.iterations = 200;
  p.seed = 9;
  const auto m = lda_fit(c, p);
  std::array<std::set<std::uint32_t>, 2> halves;
  for (int t = 0; t < 2; ++t)
    for (const auto& w : planted.topic_words[static_cast<std::size_t>(t)]) {
      if (auto id = c.id_of(w)) halves[static_cast<std::size_t>(t)].insert(*id);
    }
  auto mass = [&](int topic, int half) {
    double s = 0.0;
    for (auto w : halves[static_cast<std::size_t>(half)]) s += m.phi(topic)[w];
    return s;
  };
  const double straight = std::min(mass(0, 0), mass(1, 1));
  const double swapped = std::min(mass(0, 1), mass(1, 0));
  EXPECT_GE(std::max(straight, swapped), 0.95);
}

TEST(Lda, DeterministicAndNormalised) {
  const auto c = preprocess_texts(filler(60, 8, 40, 6), plain());
  LdaParams p;
  p.topics = 4;
  p.iterations = 50;
  p.seed = 3;
  const auto a = lda_fit(c, p);
  const auto b = lda_fit(c, p);
  EXPECT_TRUE(a.same_distributions(b));
  EXPECT_DOUBLE_EQ(a.alpha(), 12.5);
  for (int k = 0; k < 4; ++k) {
    EXPECT_NEAR(row_sum(a.phi(k)), 1.0, 1e-9);
    for (double x : a.phi(k)) EXPECT_GT(x, 0.0);
  }
  for (std::size_t d = 0; d < c.documents.size(); ++d) EXPECT_NEAR(row_sum(a.theta(d)), 1.0, 1e-9);
  p.seed = 4;
  EXPECT_FALSE(lda_fit(c, p).same_distributions(a));
}

TEST(Lda, Errors) {
  EXPECT_THROW(lda_fit(TokenizedCorpus{}, LdaParams{}), DataError);
  const std::vector<std::string> tiny{"alpha beta"};
  LdaParams p;
  p.topics = 3;
  EXPECT_THROW(lda_fit(preprocess_texts(tiny, plain()), p), DataError);
}

TEST(TopWords, Examples) {
  const std::vector<std::string> texts{"aa aa aa bb bb cc", "aa bb dd"};
  const auto c = preprocess_texts(texts, plain());
  LdaParams p;
  p.topics = 1;
  p.iterations = 5;
  const auto m = lda_fit(c, p);
  const auto top = top_words(m, 0, 2);
  EXPECT_EQ(c.vocabulary[top[0]], "aa");
  EXPECT_EQ(c.vocabulary[top[1]], "bb");
  const auto all = top_words(m, 0, c.vocabulary.size());
  ASSERT_EQ(all.size(), 4u);
  EXPECT_EQ(c.vocabulary[all[2]], "cc");  // tie with dd broken by id
  EXPECT_THROW(top_words(m, 1, 2), DataError);
}

TEST(Coherence, AlwaysTogether) {
  const std::vector<std::string> texts{"aa bb", "aa bb", "cc dd", "cc dd"};
  const auto c = preprocess_texts(texts, plain());
  const CooccurrenceIndex idx(c, 10);
  EXPECT_EQ(idx.windows(), 4u);
  const auto a = *c.id_of("aa");
  const auto b = *c.id_of("bb");
  const auto cc = *c.id_of("cc");
  EXPECT_NEAR(idx.pmi(a, b, 1e-12), std::log(1.0 / 0.5), 1e-9);
  EXPECT_NEAR(idx.pmi(a, cc, 1e-12), std::log(1e-12 / 0.25), 1e-9);
  EXPECT_LT(idx.pmi(a, cc, 1e-12), -20.0);
}

TEST(Coherence, SlidingWindows) {
  const std::vector<std::string> texts{"aa bb cc dd ee"};
  const auto c = preprocess_texts(texts, plain());
  const CooccurrenceIndex idx(c, 2);
  EXPECT_EQ(idx.windows(), 4u);
  EXPECT_DOUBLE_EQ(idx.probability(*c.id_of("cc")), 0.5);
  EXPECT_DOUBLE_EQ(idx.joint_probability(*c.id_of("aa"), *c.id_of("cc")), 0.0);
  EXPECT_DOUBLE_EQ(idx.joint_probability(*c.id_of("bb"), *c.id_of("cc")), 0.25);
}

TEST(Coherence, UniformTextNearZero) {
  const auto c = preprocess_texts(filler(2000, 10, 20, 7), plain());
  LdaParams p;
  p.topics = 1;
  p.iterations = 5;
  const auto m = lda_fit(c, p);
  EXPECT_NEAR(uci_coherence(m, c), 0.0, 0.15);
}

TEST(Coherence, NeverCooccurringWordsLower) {
  std::vector<std::string> texts;
  for (int i = 0; i < 20; ++i) texts.push_back("aa bb cc");
  for (int i = 0; i < 20; ++i) texts.push_back("xx");
  for (int i = 0; i < 20; ++i) texts.push_back("yy");
  for (int i = 0; i < 20; ++i) texts.push_back("zz");
  const auto c = preprocess_texts(texts, plain());
  const CooccurrenceIndex idx(c, 10);
  auto ids = [&](std::initializer_list<const char*> ws) {
    std::vector<std::uint32_t> out;
    for (auto w : ws) out.push_back(*c.id_of(w));
    return out;
  };
  const std::vector<std::vector<std::uint32_t>> good{ids({"aa", "bb", "cc"})};
  const std::vector<std::vector<std::uint32_t>> bad{ids({"xx", "yy", "zz"})};
  EXPECT_GT(uci_coherence(good, idx), uci_coherence(bad, idx));
}

TEST(Sweep, DefaultGrid) {
  EXPECT_EQ(default_topic_grid(), (std::vector<int>{2, 8, 14, 20, 26, 32, 38}));
}

TEST(Sweep, SingleGridPoint) {
  const auto c = preprocess_texts(filler(40, 8, 30, 8), plain());
  SweepOptions o;
  o.grid = {3};
  o.seeds_per_k = 2;
  o.iterations = 30;
  const auto r = sweep_topic_numbers(c, o);
  EXPECT_EQ(r.selected_topics, 3);
  ASSERT_EQ(r.points.size(), 1u);
  EXPECT_EQ(r.points[0].per_seed.size(), 2u);
  EXPECT_DOUBLE_EQ(r.points[0].mean, (r.points[0].per_seed[0] + r.points[0].per_seed[1]) / 2.0);
}

TEST(Sweep, RejectsBadGrid) {
  const auto c = preprocess_texts(filler(10, 8, 30, 8), plain());
  SweepOptions o;
  o.grid = {8, 2};
  EXPECT_THROW(sweep_topic_numbers(c, o), ConfigError);
  o.grid = {};
  EXPECT_THROW(sweep_topic_numbers(c, o), ConfigError);
}

TEST(Sweep, ParallelMatchesSequential) {
  const auto c = preprocess_texts(filler(80, 8, 40, 9), plain());
  SweepOptions o;
  o.grid = {2, 4, 6};
  o.iterations = 40;
  const auto one = sweep_topic_numbers(c, o);
  o.workers = 4;
  const auto four = sweep_topic_numbers(c, o);
  for (std::size_t i = 0; i < one.points.size(); ++i) EXPECT_EQ(one.points[i].per_seed, four.points[i].per_seed);
  EXPECT_EQ(one.selected_topics, four.selected_topics);
}

TEST(Sweep, PlantedEightTopics) {
  int hits = 0;
  for (std::uint64_t seed : {1, 2, 3}) {
    synthetic::PlantedTopicParams pp;
    pp.topics = 8;
    pp.documents = 400;
    pp.seed = seed;
    const auto c = preprocess_texts(synthetic::planted_topics(pp).documents, plain());
    SweepOptions o;
    o.seeds_per_k = 1;
    o.iterations = 300;
    o.seed = seed;
    hits += sweep_topic_numbers(c, o).selected_topics == 8;
  }
  EXPECT_GE(hits, 2);
}

TEST(Recent, CapsAtLimit) {
  std::vector<TweetRecord> t;
  for (int i = 0; i < 2000; ++i) {
    t.push_back(tweet(std::to_string(i), format_timestamp(parse_timestamp("2015-01-01T00:00:00Z") + std::chrono::hours(i))));
  }
  auto eng = rng::make_engine(1, 0);
  rng::shuffle(std::span<TweetRecord>(t), eng);
  const auto r = select_recent(t);
  ASSERT_EQ(r.tweets.size(), 1500u);
  EXPECT_EQ(r.available, 2000u);
  const auto oldest_kept = r.tweets.back().created_at;
  for (const auto& x : t) {
    const bool kept = std::any_of(r.tweets.begin(), r.tweets.end(), [&](const TweetRecord& k) { return k.tweet_id == x.tweet_id; });
    if (!kept) EXPECT_LT(x.created_at, oldest_kept);
  }
  EXPECT_TRUE(std::is_sorted(r.tweets.begin(), r.tweets.end(),
                             [](const TweetRecord& a, const TweetRecord& b) { return a.created_at > b.created_at; }));
  EXPECT_EQ(*r.oldest, oldest_kept);
}

TEST(Recent, FewerThanLimit) {
  std::vector<TweetRecord> t;
  for (int i = 0; i < 900; ++i) t.push_back(tweet(std::to_string(i), "2015-01-01T00:00:00Z"));
  EXPECT_EQ(select_recent(t).tweets.size(), 900u);
}

TEST(Recent, TiesByNumericId) {
  const std::vector<TweetRecord> t{tweet("9", "2015-01-01T00:00:00Z"), tweet("10", "2015-01-01T00:00:00Z"),
                                   tweet("2", "2015-01-01T00:00:00Z")};
  const auto r = select_recent(t, 2);
  ASSERT_EQ(r.tweets.size(), 2u);
  EXPECT_EQ(r.tweets[0].tweet_id, "10");
  EXPECT_EQ(r.tweets[1].tweet_id, "9");
}

TEST(Report, BlocksWithBlankLabels) {
  const auto c = preprocess_texts(filler(30, 6, 20, 10), plain());
  LdaParams p;
  p.topics = 2;
  p.iterations = 10;
  const auto m = lda_fit(c, p);
  const auto text = format_topic_report("acct_000000000000", m, c, 3);
  EXPECT_NE(text.find("acct_000000000000"), std::string::npos);
  std::size_t labels = 0;
  for (std::size_t pos = text.find("label\t"); pos != std::string::npos; pos = text.find("label\t", pos + 1)) ++labels;
  EXPECT_EQ(labels, 2u);
}
