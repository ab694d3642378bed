#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace anonnet {

using Date = std::chrono::year_month_day;
using Timestamp = std::chrono::sys_seconds;

// "YYYY-MM-DD"; throws std::invalid_argument on malformed or impossible dates.
Date parse_date(std::string_view s);
std::string format_date(Date d);
// "YYYY-MM-DDTHH:MM:SSZ" (UTC).
Timestamp parse_timestamp(std::string_view s);
std::string format_timestamp(Timestamp t);

struct AccountProfile {
  std::string account_id;
  std::string username;
  std::string screen_name;
  std::string description;
  std::int64_t tweet_count = 0;
  std::int64_t follower_count = 0;
  std::int64_t friend_count = 0;
  std::int64_t favourites_count = 0;
  std::int64_t listed_count = 0;
  bool location_provided = false;
  bool is_protected = false;
  bool url_provided = false;
  bool has_fawkes_image = false;
  bool has_businessman_image = false;
  Date created_at{std::chrono::year{2006}, std::chrono::month{3}, std::chrono::day{21}};
  std::optional<Date> last_tweet_at;

  bool operator==(const AccountProfile&) const = default;
};

// Snapshot files hold one JSON object per line (see docs/formats.md).
// Errors name the file, line and offending field.
std::vector<AccountProfile> load_snapshots(const std::filesystem::path& path);
std::vector<AccountProfile> read_snapshots(std::istream& in, const std::string& source_name = {});
std::string to_record(const AccountProfile& p);
void write_snapshots(std::ostream& out, std::span<const AccountProfile> profiles);

struct FollowEdge {
  std::string follower_id;
  std::string followee_id;

  auto operator<=>(const FollowEdge&) const = default;
};

struct EdgeLoad {
  std::vector<FollowEdge> edges;  // first-occurrence order, deduplicated
  std::size_t self_loops_dropped = 0;
  std::size_t duplicates_dropped = 0;
  char delimiter = '\t';
};

// Two-column tab- or comma-delimited file of (follower_id, followee_id). The
// delimiter is detected from the first data row. '#' lines and a header row
// named "follower_id<d>followee_id" are skipped.
EdgeLoad load_edges(const std::filesystem::path& path);
EdgeLoad read_edges(std::istream& in, const std::string& source_name = {});

struct EndpointResolution {
  std::size_t unresolved_endpoints = 0;  // edge endpoints with no profile
  std::vector<std::string> unresolved_ids;  // distinct ids, sorted
};

EndpointResolution resolve_endpoints(std::span<const FollowEdge> edges,
                                     std::span<const AccountProfile> profiles);

struct TweetRecord {
  std::string account_id;
  std::string tweet_id;
  Timestamp created_at{};
  std::string text;
  bool is_retweet = false;

  bool operator==(const TweetRecord&) const = default;
};

std::vector<TweetRecord> load_tweets(const std::filesystem::path& path);
std::vector<TweetRecord> read_tweets(std::istream& in, const std::string& source_name = {});
std::string to_record(const TweetRecord& t);

// Keyed-hash aliasing of account ids: "acct_" + first 12 hex chars of
// HMAC-SHA256(key, id).
class Pseudonymizer {
 public:
  explicit Pseudonymizer(std::string secret_key);

  std::string operator()(std::string_view account_id) const;

 private:
  std::string key_;
};

std::string pseudonymize(const Pseudonymizer& p, std::string_view account_id);

// Lookup from pseudonym back to raw id for a known id set. Throws DataError if
// two ids collide.
std::unordered_map<std::string, std::string> pseudonym_index(const Pseudonymizer& p,
                                                             std::span<const AccountProfile> profiles);

// Where snowball expansion gets its accounts from.
class AccountSource {
 public:
  virtual ~AccountSource() = default;
  // nullopt when the account is unavailable (suspended, deleted, protected).
  virtual std::optional<AccountProfile> get_profile(const std::string& account_id) const = 0;
  // Accounts following `account_id`.
  virtual std::vector<std::string> get_followers(const std::string& account_id) const = 0;
  // Accounts `account_id` follows.
  virtual std::vector<std::string> get_friends(const std::string& account_id) const = 0;
};

// File-backed source over a loaded snapshot set and edge list. Neighbour
// lists are returned sorted.
class SnapshotAccountSource final : public AccountSource {
 public:
  SnapshotAccountSource(std::vector<AccountProfile> profiles, std::span<const FollowEdge> edges);

  std::optional<AccountProfile> get_profile(const std::string& account_id) const override;
  std::vector<std::string> get_followers(const std::string& account_id) const override;
  std::vector<std::string> get_friends(const std::string& account_id) const override;

 private:
  std::unordered_map<std::string, AccountProfile> profiles_;
  std::map<std::string, std::vector<std::string>> followers_;
  std::map<std::string, std::vector<std::string>> friends_;
};

}  // namespace anonnet
