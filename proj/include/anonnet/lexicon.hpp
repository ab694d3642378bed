#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "anonnet/ingest.hpp"

namespace anonnet {

// Keyword, hacker-term and motto lists. Every entry is stored case-folded,
// non-empty and unique; construction validates this.
class KeywordTable {
 public:
  KeywordTable(std::vector<std::string> keywords, std::vector<std::string> hacker_terms,
               std::vector<std::string> motto_patterns);

  // The twenty collective keywords plus the shipped term and motto lists.
  static KeywordTable defaults();

  const std::vector<std::string>& keywords() const noexcept { return keywords_; }
  const std::vector<std::string>& hacker_terms() const noexcept { return hacker_terms_; }
  const std::vector<std::string>& motto_patterns() const noexcept { return motto_patterns_; }

  KeywordTable with_keyword(std::string keyword) const;

 private:
  std::vector<std::string> keywords_;
  std::vector<std::string> hacker_terms_;
  std::vector<std::string> motto_patterns_;
};

const std::vector<std::string>& default_keywords();
const std::vector<std::string>& default_hacker_terms();
const std::vector<std::string>& default_motto_patterns();

// Plain-text list: one entry per line, '#' starts a comment, blank lines
// ignored. Entries are case-folded.
std::vector<std::string> load_term_list(const std::filesystem::path& path);

// True iff any term occurs as a substring of the case-folded text.
bool contains_any(std::string_view text, const std::vector<std::string>& folded_terms);

bool contains_anon_keyword(std::string_view text, const KeywordTable& table);

// Keyword in username or screen name.
bool name_filter(const AccountProfile& profile, const KeywordTable& table);

enum class Label { kPositive, kNegative, kCandidate, kExcluded };

std::string_view to_string(Label label);

struct LabelDecision {
  std::string account_id;
  Label label = Label::kNegative;
  // "<rule>=yes|no" for each clause evaluated, in evaluation order.
  std::vector<std::string> rule_trace;
};

// Candidate if the name filter fires, excluded otherwise.
LabelDecision filter_decision(const AccountProfile& profile, const KeywordTable& table);

// Positive iff keyword in username or screen name, keyword in description, and
// a mask or businessman image flag.
LabelDecision positive_label_rule(const AccountProfile& profile, const KeywordTable& table);

std::string join_trace(const std::vector<std::string>& trace);

}  // namespace anonnet
