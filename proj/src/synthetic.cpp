#include "anonnet/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <string_view>

#include "anonnet/error.hpp"
#include "anonnet/lexicon.hpp"
#include "anonnet/topics.hpp"

namespace anonnet::synthetic {

namespace {

using namespace std::chrono;

template <typename T, std::size_t N>
const T& pick(rng::Engine& eng, const std::array<T, N>& items) {
  return items[rng::uniform_below(eng, N)];
}

bool coin(rng::Engine& eng, double p) { return rng::uniform01(eng) < p; }

std::int64_t between(rng::Engine& eng, std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(rng::uniform_below(eng, static_cast<std::uint64_t>(hi - lo + 1)));
}

Date random_date(rng::Engine& eng, int from_year, int to_year) {
  const sys_days lo{year{from_year} / January / 1};
  const sys_days hi{year{to_year} / December / 31};
  const auto span = (hi - lo).count();
  return year_month_day{lo + days{between(eng, 0, span)}};
}

constexpr std::array<std::string_view, 12> kNameKeywords{
    "Anonymous", "Anon", "AnonOps", "Legion", "An0n", "l3gion", "Anony", "anonymous", "ANON", "Legi0n",
    "AnonNews", "Anonym0us",
};
constexpr std::array<std::string_view, 16> kNameParts{
    "Fox", "Ghost", "Mask", "Nova", "River", "Echo", "Shadow", "Pixel", "Storm", "Luna", "Raven", "Byte",
    "Orbit", "Vox", "Cipher", "Delta",
};
constexpr std::array<std::string_view, 10> kPositiveDescriptions{
    "We are Anonymous. We are Legion. We do not forgive. We do not forget. Expect us.",
    "Anonymous news and #OpIcarus updates. Knowledge is free.",
    "Part of the legion. Fighting censorship and corruption since 2011.",
    "Anon activist, hacktivism and truth. Expect us!",
    "Anonymous collective member. #OpSafeWinter #AnonOps",
    "we are anonymous, we are legion. free speech for everyone",
    "Just another Anon watching the watchers. infosec + privacy",
    "AnonOps relay. Expect us. http://example.org/anon",
    "Legion never sleeps. Justice for all. @AnonNews",
    "An0n since day one. Operation Payback veteran. lulz",
};
constexpr std::array<std::string_view, 12> kNegativeDescriptions{
    "Coffee lover, dog person, amateur photographer.",
    "Sports fan. Tweets about football and food.",
    "Marketing professional in London. Views my own.",
    "Music, movies and the occasional rant about trains.",
    "PhD student in ecology. I like birds and maps.",
    "Gamer and streamer. Catch me live on weekends!",
    "Mum of two, gardening enthusiast, baking on Sundays.",
    "Software developer who writes about databases.",
    "Travel blogger: 40 countries and counting. https://example.com",
    "Local news from the valley. Weather, traffic, events.",
    "",
    "Fan account for a band you have never heard of.",
};

AccountProfile base_profile(rng::Engine& eng, std::size_t index) {
  AccountProfile p;
  p.account_id = "syn" + std::to_string(index);
  p.tweet_count = between(eng, 0, 50000);
  p.follower_count = between(eng, 0, 20000);
  p.friend_count = between(eng, 0, 5000);
  p.favourites_count = between(eng, 0, 30000);
  p.listed_count = between(eng, 0, 300);
  p.location_provided = coin(eng, 0.5);
  p.is_protected = coin(eng, 0.05);
  p.url_provided = coin(eng, 0.3);
  p.created_at = random_date(eng, 2008, 2016);
  if (coin(eng, 0.9)) {
    const sys_days created{p.created_at};
    p.last_tweet_at = year_month_day{created + days{between(eng, 0, 2500)}};
  }
  return p;
}

std::string keyword_name(rng::Engine& eng) {
  std::string kw(pick(eng, kNameKeywords));
  std::string part(pick(eng, kNameParts));
  return coin(eng, 0.5) ? kw + part : part + kw;
}

}  // namespace

AccountSet accounts(std::size_t positives, std::size_t negatives, std::uint64_t seed) {
  auto eng = rng::make_engine(seed, 0xACC7);
  AccountSet out;
  const std::size_t total = positives + negatives;
  std::vector<ClassLabel> labels(total, ClassLabel::kNegative);
  std::fill(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(positives), ClassLabel::kPositive);
  rng::shuffle(std::span<ClassLabel>(labels), eng);
  for (std::size_t i = 0; i < total; ++i) {
    AccountProfile p = base_profile(eng, i);
    const bool positive = labels[i] == ClassLabel::kPositive;
    p.username = keyword_name(eng);
    p.screen_name = coin(eng, 0.6) ? keyword_name(eng) : std::string(pick(eng, kNameParts)) + "_" +
                                                              std::to_string(between(eng, 1, 999));
    if (positive) {
      p.description = pick(eng, kPositiveDescriptions);
      p.has_fawkes_image = coin(eng, 0.8);
      p.has_businessman_image = !p.has_fawkes_image || coin(eng, 0.1);
    } else {
      p.description = pick(eng, kNegativeDescriptions);
      p.has_fawkes_image = coin(eng, 0.1);
      p.has_businessman_image = coin(eng, 0.05);
    }
    out.profiles.push_back(std::move(p));
  }
  out.labels = std::move(labels);
  return out;
}

AccountProfile fuzz_profile(rng::Engine& eng, std::size_t index) {
  static constexpr std::array<std::string_view, 40> kPieces{
      "anonymous", "ANON", "l3gion", "Legion", "an0ny", "AnonOps", "#OpIcarus", "op", "@someone", "#tag",
      "http://x.io", "www.site.net", "Straße", "ΑΘΗΝΑ", "Ωmega", "東京", "привет", "İstanbul", "ǅemal", "ﬁne",
      "😀", "🔥🔥", "🇬🇧", "☮", "✊", "42", "٣٤", "7", "!!!", "...", "\xe2\x80\x94", "«»", "?", "h4ck", "we are legion",
      "expect us", "not good", "GREAT", "hate", "\t",
  };
  AccountProfile p = base_profile(eng, index);
  p.account_id = "fz" + std::to_string(index);
  auto text = [&](std::size_t max_pieces) {
    std::string s;
    const auto n = rng::uniform_below(eng, max_pieces + 1);
    for (std::uint64_t i = 0; i < n; ++i) {
      if (!s.empty() && coin(eng, 0.7)) s.push_back(' ');
      s += pick(eng, kPieces);
      if (coin(eng, 0.2)) s += pick(eng, kNameParts);
    }
    return s;
  };
  p.username = text(3);
  p.screen_name = text(3);
  p.description = text(12);
  p.has_fawkes_image = coin(eng, 0.5);
  p.has_businessman_image = coin(eng, 0.3);
  return p;
}

PlantedCorpus planted_topics(const PlantedTopicParams& params) {
  if (params.topics < 1 || params.documents < 1 || params.words_per_topic < 2 || params.document_length < 1) {
    throw ConfigError("planted topic parameters out of range");
  }
  if (params.shared_words < 0 || params.shared_words >= params.words_per_topic) {
    throw ConfigError("shared words must be below words per topic");
  }
  auto eng = rng::make_engine(params.seed, 0x70C5);
  static constexpr std::array<std::string_view, 14> kConsonants{"b", "d", "f", "g", "k", "l", "m",
                                                                "n", "p", "r", "s", "t", "v", "z"};
  static constexpr std::array<std::string_view, 5> kVowels{"a", "e", "i", "o", "u"};
  const auto& stop = default_stopwords();
  std::set<std::string> used;
  auto fresh_word = [&] {
    for (;;) {
      std::string w;
      for (int s = 0; s < 3; ++s) {
        w += pick(eng, kConsonants);
        w += pick(eng, kVowels);
      }
      if (!stop.contains(w) && used.insert(w).second) return w;
    }
  };

  PlantedCorpus out;
  const auto K = static_cast<std::size_t>(params.topics);
  const auto own = static_cast<std::size_t>(params.words_per_topic - params.shared_words);
  out.topic_words.resize(K);
  for (auto& words : out.topic_words) {
    for (std::size_t i = 0; i < own; ++i) words.push_back(fresh_word());
  }
  // Topic t borrows the first shared_words words of topic t+1.
  for (std::size_t t = 0; t < K && K > 1; ++t) {
    const auto& next = out.topic_words[(t + 1) % K];
    for (int s = 0; s < params.shared_words; ++s) out.topic_words[t].push_back(next[static_cast<std::size_t>(s)]);
  }

  std::vector<double> cumulative;
  double acc = 0.0;
  for (int i = 0; i < params.words_per_topic; ++i) {
    acc += std::pow(static_cast<double>(i + 1), -params.zipf_exponent);
    cumulative.push_back(acc);
  }
  auto draw_word = [&] {
    const double u = rng::uniform01(eng) * acc;
    std::size_t i = 0;
    while (i + 1 < cumulative.size() && cumulative[i] <= u) ++i;
    return i;
  };

  for (int d = 0; d < params.documents; ++d) {
    const auto topic = static_cast<std::size_t>(d) % K;
    out.dominant_topic.push_back(static_cast<int>(topic));
    std::string doc;
    for (int i = 0; i < params.document_length; ++i) {
      const std::size_t t = coin(eng, params.dominant_share) ? topic : rng::uniform_below(eng, K);
      const auto& words = out.topic_words[t];
      if (!doc.empty()) doc.push_back(' ');
      doc += words[draw_word()];
    }
    out.documents.push_back(std::move(doc));
  }
  return out;
}

}  // namespace anonnet::synthetic
