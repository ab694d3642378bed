#include "anonnet/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "anonnet/error.hpp"
#include "anonnet/text.hpp"

namespace anonnet {

namespace {

void validate(std::vector<std::string>& entries, std::string_view what) {
  std::set<std::string> seen;
  for (auto& e : entries) {
    if (e.empty()) throw ConfigError(std::string(what) + ": empty entry");
    if (text::fold_case(e) != e) throw ConfigError(std::string(what) + ": entry not lowercase: " + e);
    if (!seen.insert(e).second) throw ConfigError(std::string(what) + ": duplicate entry: " + e);
  }
}

}  // namespace

const std::vector<std::string>& default_keywords() {
  static const std::vector<std::string> kKeywords{
      "anonymous", "an0nym0u5", "anonymou5", "an0nymous", "anonym0us", "anonym0u5", "an0nymou5",
      "an0nym0us", "anony",     "an0ny",     "anon",      "an0n",      "legion",    "l3gion",
      "legi0n",    "le3gi0n",   "leg1on",    "l3g1on",    "leg10n",    "l3g10n",
  };
  return kKeywords;
}

// Default lists; override via config.
const std::vector<std::string>& default_hacker_terms() {
  static const std::vector<std::string> kTerms{
      "hacker", "hacking", "hacktivis", "hack the", "h4ck", "cyber", "ddos", "0day", "exploit",
      "infosec", "pwn", "phreak", "botnet", "rootkit", "darknet", "deface", "lulz", "opsec",
  };
  return kTerms;
}

const std::vector<std::string>& default_motto_patterns() {
  static const std::vector<std::string> kMotto{
      "we are anonymous", "we are legion", "we do not forgive", "we do not forget", "expect us",
  };
  return kMotto;
}

KeywordTable::KeywordTable(std::vector<std::string> keywords, std::vector<std::string> hacker_terms,
                           std::vector<std::string> motto_patterns)
    : keywords_(std::move(keywords)),
      hacker_terms_(std::move(hacker_terms)),
      motto_patterns_(std::move(motto_patterns)) {
  validate(keywords_, "keywords");
  validate(hacker_terms_, "hacker terms");
  validate(motto_patterns_, "motto patterns");
}

KeywordTable KeywordTable::defaults() {
  return KeywordTable(default_keywords(), default_hacker_terms(), default_motto_patterns());
}

KeywordTable KeywordTable::with_keyword(std::string keyword) const {
  auto kws = keywords_;
  keyword = text::fold_case(keyword);
  if (std::find(kws.begin(), kws.end(), keyword) == kws.end()) kws.push_back(std::move(keyword));
  return KeywordTable(std::move(kws), hacker_terms_, motto_patterns_);
}

std::vector<std::string> load_term_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read term list " + path.string());
  std::vector<std::string> out;
  std::set<std::string> seen;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto entry = text::trim(line);
    if (entry.empty()) continue;
    std::string folded = text::fold_case(entry);
    if (seen.insert(folded).second) out.push_back(std::move(folded));
  }
  return out;
}

bool contains_any(std::string_view text_in, const std::vector<std::string>& folded_terms) {
  if (text_in.empty()) return false;
  const std::string folded = text::fold_case(text_in);
  for (const auto& term : folded_terms) {
    if (folded.find(term) != std::string::npos) return true;
  }
  return false;
}

bool contains_anon_keyword(std::string_view text_in, const KeywordTable& table) {
  return contains_any(text_in, table.keywords());
}

bool name_filter(const AccountProfile& profile, const KeywordTable& table) {
  return contains_anon_keyword(profile.username, table) ||
         contains_anon_keyword(profile.screen_name, table);
}

std::string_view to_string(Label label) {
  switch (label) {
    case Label::kPositive: return "positive";
    case Label::kNegative: return "negative";
    case Label::kCandidate: return "candidate";
    case Label::kExcluded: return "excluded";
  }
  return "unknown";
}

namespace {

std::string clause(std::string_view name, bool fired) {
  return std::string(name) + (fired ? "=yes" : "=no");
}

}  // namespace

LabelDecision filter_decision(const AccountProfile& profile, const KeywordTable& table) {
  LabelDecision d{profile.account_id, Label::kExcluded, {}};
  const bool in_username = contains_anon_keyword(profile.username, table);
  const bool in_screen_name = contains_anon_keyword(profile.screen_name, table);
  d.rule_trace.push_back(clause("username_keyword", in_username));
  d.rule_trace.push_back(clause("screen_name_keyword", in_screen_name));
  if (in_username || in_screen_name) d.label = Label::kCandidate;
  return d;
}

LabelDecision positive_label_rule(const AccountProfile& profile, const KeywordTable& table) {
  LabelDecision d{profile.account_id, Label::kNegative, {}};
  const bool name = name_filter(profile, table);
  const bool description = contains_anon_keyword(profile.description, table);
  const bool image = profile.has_fawkes_image || profile.has_businessman_image;
  d.rule_trace.push_back(clause("name_keyword", name));
  d.rule_trace.push_back(clause("description_keyword", description));
  d.rule_trace.push_back(clause("anon_image", image));
  if (name && description && image) d.label = Label::kPositive;
  return d;
}

std::string join_trace(const std::vector<std::string>& trace) {
  std::string out;
  for (const auto& t : trace) {
    if (!out.empty()) out += ';';
    out += t;
  }
  return out;
}

}  // namespace anonnet
