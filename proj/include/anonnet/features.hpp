#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "anonnet/ingest.hpp"
#include "anonnet/lexicon.hpp"

namespace anonnet {

inline constexpr std::size_t kFeatureCount = 62;
inline constexpr int kFeatureSchemaVersion = 1;

enum class SourceField { kUsername, kScreenName, kDescription, kProfile };
enum class FeatureKind { kBoolean, kCount, kRatio, kScore };

// What a schema entry measures. Text measures are applied to the entry's
// source field; profile measures read counters and flags.
enum class Measure {
  kAnonymousUsed,
  kAnonUsed,
  kAnonyUsed,
  kLegionUsed,
  kOpsUsed,
  kMotto,
  kHackerTerms,
  kLeet,
  kInnerCaps,
  kTweetCount,
  kFollowerCount,
  kFriendCount,
  kFollowerFriendRatio,
  kFavouritesCount,
  kListedCount,
  kLocationProvided,
  kIsProtected,
  kUrlProvided,
  kCharacters,
  kWords,
  kUppercase,
  kLowercase,
  kAlphabetic,
  kNumeric,
  kPunctuation,
  kEmoji,
  kMentions,
  kHashtags,
  kUrlInText,
  kFleschKincaid,
  kSentiment,
};

struct FeatureSpec {
  std::string name;
  SourceField source = SourceField::kProfile;
  FeatureKind kind = FeatureKind::kCount;
  Measure measure = Measure::kCharacters;
};

// Ordered list of the 62 features; the only definition of vector order.
class FeatureSchema {
 public:
  explicit FeatureSchema(std::vector<FeatureSpec> entries, int version = kFeatureSchemaVersion);

  static const FeatureSchema& standard();

  std::size_t size() const noexcept { return entries_.size(); }
  const std::vector<FeatureSpec>& entries() const noexcept { return entries_; }
  const FeatureSpec& operator[](std::size_t i) const { return entries_.at(i); }
  std::optional<std::size_t> index_of(std::string_view name) const;
  int version() const noexcept { return version_; }

 private:
  std::vector<FeatureSpec> entries_;
  int version_;
};

struct FeatureVector {
  std::array<double, kFeatureCount> values{};
  int schema_version = kFeatureSchemaVersion;

  std::size_t size() const noexcept { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  bool operator==(const FeatureVector&) const = default;
};

// Token -> valence in [-4, 4].
class SentimentLexicon {
 public:
  SentimentLexicon() = default;
  explicit SentimentLexicon(std::unordered_map<std::string, double> valences);

  // Compact built-in lexicon.
  static const SentimentLexicon& defaults();
  // "token<TAB>valence" per line; '#' comments. Further columns are ignored.
  static SentimentLexicon load(const std::filesystem::path& path);

  std::optional<double> valence(std::string_view folded_token) const;
  std::size_t size() const noexcept { return valences_.size(); }

 private:
  std::unordered_map<std::string, double> valences_;
};

// Per-field character statistics, counted in Unicode scalar values.
struct CharacterCounts {
  std::int64_t characters = 0;
  std::int64_t words = 0;
  std::int64_t uppercase = 0;
  std::int64_t lowercase = 0;
  std::int64_t alphabetic = 0;
  std::int64_t numeric = 0;
  std::int64_t punctuation = 0;
  std::int64_t emoji = 0;
};

CharacterCounts count_characters(std::string_view text);
std::int64_t count_mentions(std::string_view text);
std::int64_t count_hashtags(std::string_view text);
bool contains_url(std::string_view text);

double follower_friend_ratio(std::int64_t followers, std::int64_t friends);

// Heuristic syllable count: vowel groups (a e i o u y), silent final 'e'
// dropped unless the word ends in consonant+"le", minimum 1.
int count_syllables(std::string_view word);

// Grade level 0.39*(words/sentences) + 11.8*(syllables/words) - 15.59.
// Sentences are runs of '.', '!' or '?' (at least one). Text without words
// scores 0.
double flesch_kincaid(std::string_view text);

// Lexicon valence sum with negation (x -0.74 when a negator is among the three
// preceding tokens) and ALL-CAPS emphasis (+0.733 magnitude when the text also
// has non-caps words), normalised as s / sqrt(s^2 + 15).
double sentiment_compound(std::string_view text, const SentimentLexicon& lexicon);

// An alphanumeric token with letters and a digit from {0,1,3,4,5,7}.
bool detect_l33t(std::string_view text);
// An alphanumeric token with an uppercase letter after its first position and
// at least one lowercase letter.
bool detect_inner_caps(std::string_view text);
bool contains_motto(std::string_view description, const KeywordTable& table);
bool contains_hacker_term(std::string_view text, const KeywordTable& table);
// "op"/"ops" as a word, an "Ops"/"OPS" segment, or "Op" followed by an
// uppercase letter (campaign tags such as "#OpIcarus").
bool detect_ops(std::string_view text);

// Keyword family used by the four keyword-usage booleans, after undoing digit
// substitutions. Returns nullopt for keywords outside the four families.
enum class KeywordFamily { kAnonymous, kAnon, kAnony, kLegion };
std::optional<KeywordFamily> keyword_family(std::string_view folded_keyword);

class FeatureExtractor {
 public:
  FeatureExtractor(KeywordTable table, SentimentLexicon lexicon,
                   FeatureSchema schema = FeatureSchema::standard());

  // Values follow schema order. Requires a 62-entry schema.
  FeatureVector extract(const AccountProfile& profile) const;
  // Same, for any schema length.
  std::vector<double> extract_values(const AccountProfile& profile) const;

  const FeatureSchema& schema() const noexcept { return schema_; }
  const KeywordTable& table() const noexcept { return table_; }

 private:
  KeywordTable table_;
  SentimentLexicon lexicon_;
  FeatureSchema schema_;
  std::array<std::vector<std::string>, 4> family_terms_;
};

FeatureVector extract_features(const AccountProfile& profile, const KeywordTable& table,
                               const SentimentLexicon& lexicon);

std::vector<FeatureVector> extract_all(const FeatureExtractor& extractor,
                                       std::span<const AccountProfile> profiles, int workers = 1);

}  // namespace anonnet
