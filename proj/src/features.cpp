#include "anonnet/features.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>

#include "anonnet/error.hpp"
#include "anonnet/parallel.hpp"
#include "anonnet/text.hpp"

namespace anonnet {

namespace {

constexpr double kNegationScalar = -0.74;
constexpr double kCapsIncrement = 0.733;
constexpr double kCompoundAlpha = 15.0;

std::string field_prefix(SourceField f) {
  switch (f) {
    case SourceField::kUsername: return "username";
    case SourceField::kScreenName: return "screen_name";
    case SourceField::kDescription: return "description";
    case SourceField::kProfile: return "profile";
  }
  return "?";
}

std::vector<FeatureSpec> standard_entries() {
  using enum Measure;
  using K = FeatureKind;
  std::vector<FeatureSpec> out;
  auto add = [&out](SourceField f, std::string_view name, K kind, Measure m) {
    out.push_back({field_prefix(f) + "_" + std::string(name), f, kind, m});
  };
  constexpr std::array kTextFields{SourceField::kUsername, SourceField::kScreenName,
                                   SourceField::kDescription};

  // Collective / hacker-culture features.
  for (auto f : kTextFields) {
    add(f, "kw_anonymous", K::kBoolean, kAnonymousUsed);
    add(f, "kw_anon", K::kBoolean, kAnonUsed);
    add(f, "kw_anony", K::kBoolean, kAnonyUsed);
    add(f, "kw_legion", K::kBoolean, kLegionUsed);
    add(f, "kw_ops", K::kBoolean, kOpsUsed);
  }
  add(SourceField::kDescription, "motto", K::kBoolean, kMotto);
  for (auto f : kTextFields) add(f, "hacker_terms", K::kBoolean, kHackerTerms);
  for (auto f : kTextFields) add(f, "l33t", K::kBoolean, kLeet);
  for (auto f : kTextFields) add(f, "inner_caps", K::kBoolean, kInnerCaps);

  // Profile features.
  const auto p = SourceField::kProfile;
  add(p, "tweet_count", K::kCount, kTweetCount);
  add(p, "follower_count", K::kCount, kFollowerCount);
  add(p, "friend_count", K::kCount, kFriendCount);
  add(p, "follower_friend_ratio", K::kRatio, kFollowerFriendRatio);
  add(p, "favourites_count", K::kCount, kFavouritesCount);
  add(p, "listed_count", K::kCount, kListedCount);
  add(p, "location_provided", K::kBoolean, kLocationProvided);
  add(p, "is_protected", K::kBoolean, kIsProtected);
  add(p, "url_provided", K::kBoolean, kUrlProvided);

  // Content features.
  for (auto f : kTextFields) {
    add(f, "characters", K::kCount, kCharacters);
    add(f, "words", K::kCount, kWords);
    add(f, "uppercase", K::kCount, kUppercase);
    add(f, "lowercase", K::kCount, kLowercase);
    add(f, "alphabetic", K::kCount, kAlphabetic);
    add(f, "numeric", K::kCount, kNumeric);
    add(f, "punctuation", K::kCount, kPunctuation);
  }
  add(SourceField::kScreenName, "emoji", K::kCount, kEmoji);
  add(SourceField::kDescription, "emoji", K::kCount, kEmoji);
  add(SourceField::kDescription, "mentions", K::kCount, kMentions);
  add(SourceField::kDescription, "hashtags", K::kCount, kHashtags);
  add(SourceField::kDescription, "url", K::kBoolean, kUrlInText);
  add(SourceField::kDescription, "flesch_kincaid", K::kScore, kFleschKincaid);
  add(SourceField::kDescription, "sentiment", K::kScore, kSentiment);
  return out;
}

// Alphanumeric runs (letters, digits), as code-point strings.
std::vector<std::u32string> alnum_runs(std::string_view s) {
  std::vector<std::u32string> runs;
  std::u32string cur;
  for (char32_t c : text::decode(s)) {
    if (text::is_alnum(c)) {
      cur.push_back(c);
    } else if (!cur.empty()) {
      runs.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) runs.push_back(std::move(cur));
  return runs;
}

bool is_leet_digit(char32_t c) {
  return c == U'0' || c == U'1' || c == U'3' || c == U'4' || c == U'5' || c == U'7';
}

bool is_word_char(char32_t c) { return text::is_alnum(c) || c == U'_'; }

std::int64_t count_prefixed(std::string_view s, char32_t marker) {
  const std::u32string cps = text::decode(s);
  std::int64_t n = 0;
  for (std::size_t i = 0; i + 1 < cps.size(); ++i) {
    if (cps[i] != marker) continue;
    if (i > 0 && is_word_char(cps[i - 1])) continue;
    if (is_word_char(cps[i + 1])) ++n;
  }
  return n;
}

// Strips leading/trailing punctuation from a whitespace token.
std::string strip_punct(std::string_view token) {
  std::u32string cps = text::decode(token);
  std::size_t b = 0;
  std::size_t e = cps.size();
  while (b < e && text::is_punct(cps[b])) ++b;
  while (e > b && text::is_punct(cps[e - 1])) --e;
  return text::encode(std::u32string_view(cps).substr(b, e - b));
}

bool is_negator(const std::string& folded) {
  static const std::set<std::string> kNegators{
      "not", "no", "never", "none", "nobody", "nothing", "neither", "nor", "nowhere", "cannot", "without",
      "aint", "dont", "doesnt", "didnt", "isnt", "wasnt", "wont", "cant", "shouldnt", "wouldnt", "couldnt",
  };
  if (kNegators.contains(folded)) return true;
  return folded.size() > 3 && (folded.ends_with("n't") || folded.ends_with("n’t"));
}

enum class Caps { kNone, kAll, kMixed };

Caps caps_shape(std::string_view token) {
  bool any_upper = false;
  for (char32_t c : text::decode(token)) {
    if (text::is_lower(c)) return Caps::kMixed;
    if (text::is_upper(c)) any_upper = true;
  }
  return any_upper ? Caps::kAll : Caps::kNone;
}

const FeatureSchema& checked_standard() {
  static const FeatureSchema schema(standard_entries());
  return schema;
}

}  // namespace

// ---------------------------------------------------------------------------
// Schema

FeatureSchema::FeatureSchema(std::vector<FeatureSpec> entries, int version)
    : entries_(std::move(entries)), version_(version) {
  std::set<std::string> names;
  for (const auto& e : entries_) {
    if (e.name.empty()) throw ConfigError("feature schema: empty feature name");
    if (!names.insert(e.name).second) throw ConfigError("feature schema: duplicate name " + e.name);
  }
}

const FeatureSchema& FeatureSchema::standard() { return checked_standard(); }

std::optional<std::size_t> FeatureSchema::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].name == name) return i;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Sentiment lexicon

SentimentLexicon::SentimentLexicon(std::unordered_map<std::string, double> valences) {
  for (auto& [token, v] : valences) {
    if (!(v >= -4.0 && v <= 4.0)) throw ConfigError("sentiment lexicon: valence out of [-4,4] for " + token);
    valences_.emplace(text::fold_case(token), v);
  }
}

const SentimentLexicon& SentimentLexicon::defaults() {
  static const SentimentLexicon kLexicon(std::unordered_map<std::string, double>{
      {"good", 1.9},       {"great", 3.1},      {"excellent", 2.7},  {"amazing", 2.8},    {"awesome", 3.1},
      {"love", 3.2},       {"loved", 2.9},      {"like", 1.5},       {"happy", 2.7},      {"hope", 1.9},
      {"free", 2.3},       {"freedom", 3.2},    {"peace", 2.5},      {"peaceful", 2.2},   {"justice", 2.4},
      {"support", 1.7},    {"truth", 1.3},      {"honest", 2.3},     {"brave", 2.4},      {"proud", 2.1},
      {"best", 3.2},       {"better", 1.9},     {"nice", 1.8},       {"kind", 2.4},       {"fun", 2.3},
      {"win", 2.8},        {"winning", 2.4},    {"safe", 1.9},       {"secure", 1.4},     {"fair", 1.3},
      {"thanks", 1.9},     {"thank", 1.5},      {"welcome", 2.0},    {"friend", 2.2},     {"friends", 2.1},
      {"beautiful", 2.9},  {"strong", 2.3},     {"united", 1.8},     {"unity", 1.7},      {"solidarity", 1.8},
      {"respect", 2.1},    {"glad", 2.0},       {"joy", 2.8},        {"smile", 1.5},      {"wow", 2.8},
      {"yes", 1.7},        {"cool", 1.3},       {"wonderful", 2.7},  {"fantastic", 2.6},  {"protect", 1.6},
      {"bad", -2.5},       {"terrible", -2.1},  {"awful", -2.0},     {"horrible", -2.5},  {"hate", -2.7},
      {"hated", -3.2},     {"evil", -3.4},      {"corrupt", -2.3},   {"corruption", -2.2}, {"war", -2.9},
      {"crime", -2.5},     {"criminal", -2.4},  {"kill", -3.7},      {"killed", -3.5},    {"death", -2.9},
      {"dead", -3.3},      {"fear", -2.2},      {"afraid", -2.2},    {"angry", -2.3},     {"anger", -2.7},
      {"sad", -2.1},       {"pain", -2.3},      {"hurt", -2.4},      {"attack", -2.1},    {"abuse", -3.2},
      {"lie", -1.8},       {"lies", -1.8},      {"liar", -2.9},      {"fake", -2.1},      {"fraud", -2.8},
      {"censorship", -1.8}, {"oppression", -2.5}, {"tyranny", -2.6}, {"injustice", -2.7}, {"torture", -3.1},
      {"stupid", -2.4},    {"idiot", -2.3},     {"worst", -3.1},     {"worse", -2.1},     {"fail", -2.5},
      {"failed", -2.3},    {"wrong", -2.1},     {"problem", -1.7},   {"danger", -2.4},    {"dangerous", -2.1},
      {"threat", -2.4},    {"destroy", -2.5},   {"violence", -3.1},  {"enemy", -2.5},     {"greed", -1.7},
      {"no", -1.2},        {"sick", -2.3},      {"shame", -2.1},     {"disgusting", -2.4}, {"betray", -2.6},
      {"steal", -2.2},     {"stolen", -2.2},    {"arrest", -2.1},    {"arrested", -2.1},  {"prison", -2.3},
      {"surveillance", -1.1}, {"spy", -1.4},    {"propaganda", -1.2}, {"crisis", -3.1},   {"disaster", -3.1},
  });
  return kLexicon;
}

SentimentLexicon SentimentLexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read sentiment lexicon " + path.string());
  std::unordered_map<std::string, double> valences;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (text::trim(line).empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ParseError(path.string(), line_no, "", "expected token<TAB>valence");
    }
    const std::string token(text::trim(std::string_view(line).substr(0, tab)));
    std::string_view rest = std::string_view(line).substr(tab + 1);
    rest = rest.substr(0, rest.find('\t'));
    rest = text::trim(rest);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), v);
    if (ec != std::errc{} || ptr != rest.data() + rest.size() || token.empty()) {
      throw ParseError(path.string(), line_no, "valence", "not a number");
    }
    valences[token] = v;
  }
  return SentimentLexicon(std::move(valences));
}

std::optional<double> SentimentLexicon::valence(std::string_view folded_token) const {
  auto it = valences_.find(std::string(folded_token));
  if (it == valences_.end()) return std::nullopt;
  return it->second;
}

// ---------------------------------------------------------------------------
// Scalar feature functions

CharacterCounts count_characters(std::string_view s) {
  CharacterCounts c;
  for (char32_t cp : text::decode(s)) {
    ++c.characters;
    if (text::is_upper(cp)) ++c.uppercase;
    if (text::is_lower(cp)) ++c.lowercase;
    if (text::is_alpha(cp)) ++c.alphabetic;
    if (text::is_digit(cp)) ++c.numeric;
    if (text::is_punct(cp)) ++c.punctuation;
    if (text::is_emoji(cp)) ++c.emoji;
  }
  c.words = static_cast<std::int64_t>(text::split_whitespace(s).size());
  return c;
}

std::int64_t count_mentions(std::string_view s) { return count_prefixed(s, U'@'); }

std::int64_t count_hashtags(std::string_view s) { return count_prefixed(s, U'#'); }

bool contains_url(std::string_view s) {
  const std::string folded = text::fold_case(s);
  return folded.find("http://") != std::string::npos || folded.find("https://") != std::string::npos ||
         folded.find("www.") != std::string::npos;
}

double follower_friend_ratio(std::int64_t followers, std::int64_t friends) {
  return static_cast<double>(followers) / static_cast<double>(std::max<std::int64_t>(friends, 1));
}

int count_syllables(std::string_view word) {
  std::string w;
  for (char32_t c : text::decode(word)) {
    if (!text::is_alpha(c)) continue;
    w.push_back(c < 0x80 ? static_cast<char>(std::tolower(static_cast<int>(c))) : 'x');
  }
  auto is_vowel = [](char c) { return std::string_view("aeiouy").find(c) != std::string_view::npos; };
  int groups = 0;
  bool prev_vowel = false;
  for (char c : w) {
    const bool v = is_vowel(c);
    if (v && !prev_vowel) ++groups;
    prev_vowel = v;
  }
  if (groups > 1 && w.size() >= 2 && w.back() == 'e') {
    const bool consonant_le = w.size() >= 3 && w[w.size() - 2] == 'l' && !is_vowel(w[w.size() - 3]);
    if (!consonant_le) --groups;
  }
  return std::max(groups, 1);
}

double flesch_kincaid(std::string_view s) {
  long words = 0;
  long syllables = 0;
  for (auto token : text::split_whitespace(s)) {
    const auto cps = text::decode(token);
    if (std::none_of(cps.begin(), cps.end(), text::is_alpha)) continue;
    ++words;
    syllables += count_syllables(token);
  }
  if (words == 0) return 0.0;
  long sentences = 0;
  bool in_run = false;
  for (char c : s) {
    const bool term = c == '.' || c == '!' || c == '?';
    if (term && !in_run) ++sentences;
    in_run = term;
  }
  sentences = std::max(sentences, 1L);
  return 0.39 * (static_cast<double>(words) / static_cast<double>(sentences)) +
         11.8 * (static_cast<double>(syllables) / static_cast<double>(words)) - 15.59;
}

double sentiment_compound(std::string_view s, const SentimentLexicon& lexicon) {
  std::vector<std::string> raw;
  std::vector<std::string> folded;
  for (auto token : text::split_whitespace(s)) {
    std::string t = strip_punct(token);
    if (t.empty()) continue;
    folded.push_back(text::fold_case(t));
    raw.push_back(std::move(t));
  }
  bool has_caps = false;
  bool has_non_caps = false;
  for (const auto& t : raw) {
    switch (caps_shape(t)) {
      case Caps::kAll: has_caps = true; break;
      case Caps::kMixed: has_non_caps = true; break;
      case Caps::kNone: break;
    }
  }
  const bool caps_differential = has_caps && has_non_caps;

  double sum = 0.0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const auto base = lexicon.valence(folded[i]);
    if (!base) continue;
    double v = *base;
    if (caps_differential && caps_shape(raw[i]) == Caps::kAll) v += v > 0 ? kCapsIncrement : -kCapsIncrement;
    for (std::size_t back = 1; back <= 3 && back <= i; ++back) {
      if (is_negator(folded[i - back])) {
        v *= kNegationScalar;
        break;
      }
    }
    sum += v;
  }
  if (sum == 0.0) return 0.0;
  return sum / std::sqrt(sum * sum + kCompoundAlpha);
}

bool detect_l33t(std::string_view s) {
  for (const auto& run : alnum_runs(s)) {
    const bool letters = std::any_of(run.begin(), run.end(), text::is_alpha);
    if (letters && std::any_of(run.begin(), run.end(), is_leet_digit)) return true;
  }
  return false;
}

bool detect_inner_caps(std::string_view s) {
  for (const auto& run : alnum_runs(s)) {
    const bool lower = std::any_of(run.begin(), run.end(), text::is_lower);
    const bool inner_upper = std::any_of(run.begin() + 1, run.end(), text::is_upper);
    if (lower && inner_upper) return true;
  }
  return false;
}

bool contains_motto(std::string_view description, const KeywordTable& table) {
  return contains_any(description, table.motto_patterns());
}

bool contains_hacker_term(std::string_view s, const KeywordTable& table) {
  return contains_any(s, table.hacker_terms());
}

bool detect_ops(std::string_view s) {
  for (const auto& run : alnum_runs(s)) {
    const std::string folded = text::fold_case(text::encode(run));
    if (folded == "op" || folded == "ops") return true;
    for (std::size_t i = 0; i + 1 < run.size(); ++i) {
      if (run[i] != U'O' || (run[i + 1] != U'p' && run[i + 1] != U'P')) continue;
      if (i + 2 >= run.size()) continue;
      const char32_t next = run[i + 2];
      if (next == U's' || next == U'S') return true;   // "AnonOps", "OPS"
      if (run[i + 1] == U'p' && text::is_upper(next)) return true;  // "OpIcarus"
    }
  }
  return false;
}

std::optional<KeywordFamily> keyword_family(std::string_view folded_keyword) {
  std::string plain;
  for (char c : folded_keyword) {
    switch (c) {
      case '0': plain.push_back('o'); break;
      case '1': plain.push_back('i'); break;
      case '3': plain.push_back('e'); break;
      case '4': plain.push_back('a'); break;
      case '5': plain.push_back('s'); break;
      case '7': plain.push_back('t'); break;
      default: plain.push_back(c);
    }
  }
  if (plain.find("leg") != std::string::npos) return KeywordFamily::kLegion;
  if (plain.starts_with("anonymous")) return KeywordFamily::kAnonymous;
  if (plain.starts_with("anony")) return KeywordFamily::kAnony;
  if (plain.starts_with("anon")) return KeywordFamily::kAnon;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Extraction

FeatureExtractor::FeatureExtractor(KeywordTable table, SentimentLexicon lexicon, FeatureSchema schema)
    : table_(std::move(table)), lexicon_(std::move(lexicon)), schema_(std::move(schema)) {
  for (const auto& kw : table_.keywords()) {
    if (auto fam = keyword_family(kw)) family_terms_[static_cast<std::size_t>(*fam)].push_back(kw);
  }
}

std::vector<double> FeatureExtractor::extract_values(const AccountProfile& profile) const {
  struct FieldStats {
    std::string_view text;
    std::string folded;
    std::optional<CharacterCounts> counts;
  };
  std::array<FieldStats, 3> fields{FieldStats{profile.username, text::fold_case(profile.username), {}},
                                   FieldStats{profile.screen_name, text::fold_case(profile.screen_name), {}},
                                   FieldStats{profile.description, text::fold_case(profile.description), {}}};

  auto field = [&](SourceField f) -> FieldStats& {
    if (f == SourceField::kProfile) throw ConfigError("text measure applied to profile source");
    return fields[static_cast<std::size_t>(f)];
  };
  auto counts = [&](SourceField f) -> const CharacterCounts& {
    auto& fs = field(f);
    if (!fs.counts) fs.counts = count_characters(fs.text);
    return *fs.counts;
  };
  auto has_family = [&](SourceField f, KeywordFamily fam) {
    const auto& folded = field(f).folded;
    for (const auto& kw : family_terms_[static_cast<std::size_t>(fam)]) {
      if (folded.find(kw) != std::string::npos) return true;
    }
    return false;
  };
  auto b = [](bool v) { return v ? 1.0 : 0.0; };
  auto d = [](std::int64_t v) { return static_cast<double>(v); };

  std::vector<double> values;
  values.reserve(schema_.size());
  for (const auto& spec : schema_.entries()) {
    const SourceField f = spec.source;
    double v = 0.0;
    switch (spec.measure) {
      case Measure::kAnonymousUsed: v = b(has_family(f, KeywordFamily::kAnonymous)); break;
      case Measure::kAnonUsed: v = b(has_family(f, KeywordFamily::kAnon)); break;
      case Measure::kAnonyUsed: v = b(has_family(f, KeywordFamily::kAnony)); break;
      case Measure::kLegionUsed: v = b(has_family(f, KeywordFamily::kLegion)); break;
      case Measure::kOpsUsed: v = b(detect_ops(field(f).text)); break;
      case Measure::kMotto: v = b(contains_motto(field(f).text, table_)); break;
      case Measure::kHackerTerms: v = b(contains_hacker_term(field(f).text, table_)); break;
      case Measure::kLeet: v = b(detect_l33t(field(f).text)); break;
      case Measure::kInnerCaps: v = b(detect_inner_caps(field(f).text)); break;
      case Measure::kTweetCount: v = d(profile.tweet_count); break;
      case Measure::kFollowerCount: v = d(profile.follower_count); break;
      case Measure::kFriendCount: v = d(profile.friend_count); break;
      case Measure::kFollowerFriendRatio:
        v = follower_friend_ratio(profile.follower_count, profile.friend_count);
        break;
      case Measure::kFavouritesCount: v = d(profile.favourites_count); break;
      case Measure::kListedCount: v = d(profile.listed_count); break;
      case Measure::kLocationProvided: v = b(profile.location_provided); break;
      case Measure::kIsProtected: v = b(profile.is_protected); break;
      case Measure::kUrlProvided: v = b(profile.url_provided); break;
      case Measure::kCharacters: v = d(counts(f).characters); break;
      case Measure::kWords: v = d(counts(f).words); break;
      case Measure::kUppercase: v = d(counts(f).uppercase); break;
      case Measure::kLowercase: v = d(counts(f).lowercase); break;
      case Measure::kAlphabetic: v = d(counts(f).alphabetic); break;
      case Measure::kNumeric: v = d(counts(f).numeric); break;
      case Measure::kPunctuation: v = d(counts(f).punctuation); break;
      case Measure::kEmoji: v = d(counts(f).emoji); break;
      case Measure::kMentions: v = d(count_mentions(field(f).text)); break;
      case Measure::kHashtags: v = d(count_hashtags(field(f).text)); break;
      case Measure::kUrlInText: v = b(contains_url(field(f).text)); break;
      case Measure::kFleschKincaid: v = flesch_kincaid(field(f).text); break;
      case Measure::kSentiment: v = sentiment_compound(field(f).text, lexicon_); break;
    }
    values.push_back(v);
  }
  return values;
}

FeatureVector FeatureExtractor::extract(const AccountProfile& profile) const {
  if (schema_.size() != kFeatureCount) {
    throw ConfigError("feature schema has " + std::to_string(schema_.size()) + " entries, expected " +
                      std::to_string(kFeatureCount));
  }
  const auto values = extract_values(profile);
  FeatureVector fv;
  std::copy(values.begin(), values.end(), fv.values.begin());
  fv.schema_version = schema_.version();
  return fv;
}

FeatureVector extract_features(const AccountProfile& profile, const KeywordTable& table,
                               const SentimentLexicon& lexicon) {
  return FeatureExtractor(table, lexicon).extract(profile);
}

std::vector<FeatureVector> extract_all(const FeatureExtractor& extractor,
                                       std::span<const AccountProfile> profiles, int workers) {
  std::vector<FeatureVector> out(profiles.size());
  parallel_for(profiles.size(), workers, [&](std::size_t i) { out[i] = extractor.extract(profiles[i]); });
  return out;
}

}  // namespace anonnet
