#include "anonnet/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include <json.hpp>

#include "anonnet/digest.hpp"
#include "anonnet/error.hpp"
#include "anonnet/text.hpp"

namespace anonnet {

using json = nlohmann::ordered_json;

namespace {

int parse_fixed_int(std::string_view s, std::size_t pos, std::size_t len) {
  if (pos + len > s.size()) throw std::invalid_argument("truncated");
  int value = 0;
  const char* first = s.data() + pos;
  const char* last = first + len;
  if (!std::all_of(first, last, [](char c) { return c >= '0' && c <= '9'; })) {
    throw std::invalid_argument("expected digits");
  }
  std::from_chars(first, last, value);
  return value;
}

std::string two_digits(unsigned v) {
  std::string s = std::to_string(v);
  return s.size() < 2 ? "0" + s : s;
}

std::ifstream open_input(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw DataError("missing file: " + path.string());
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return in;
}

// Strips a trailing '\r' so CRLF files parse.
std::string_view chomp(const std::string& line) {
  std::string_view v = line;
  if (!v.empty() && v.back() == '\r') v.remove_suffix(1);
  return v;
}

struct RecordReader {
  const std::string& source;
  std::size_t line_no;
  const json& obj;
  std::set<std::string> seen{};

  [[noreturn]] void fail(const std::string& field, const std::string& what) const {
    throw ParseError(source, line_no, field, what);
  }

  const json& require(const std::string& key) {
    seen.insert(key);
    auto it = obj.find(key);
    if (it == obj.end()) fail(key, "missing required field");
    return *it;
  }

  const json* optional(const std::string& key) {
    seen.insert(key);
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return nullptr;
    return &*it;
  }

  std::string str(const std::string& key, bool allow_empty = true) {
    const json& v = require(key);
    if (!v.is_string()) fail(key, "expected a string");
    std::string s = v.get<std::string>();
    if (!allow_empty && s.empty()) fail(key, "must be non-empty");
    if (!text::is_valid_utf8(s)) fail(key, "invalid UTF-8");
    return s;
  }

  std::int64_t counter(const std::string& key) {
    const json& v = require(key);
    if (!v.is_number_integer()) fail(key, "expected an integer");
    if (v.is_number_unsigned()) {
      const auto u = v.get<std::uint64_t>();
      if (u > static_cast<std::uint64_t>(INT64_MAX)) fail(key, "counter out of range");
      return static_cast<std::int64_t>(u);
    }
    const auto n = v.get<std::int64_t>();
    if (n < 0) fail(key, "negative counter " + std::to_string(n));
    return n;
  }

  bool flag(const std::string& key) {
    const json& v = require(key);
    if (!v.is_boolean()) fail(key, "expected true or false");
    return v.get<bool>();
  }

  Date date(const std::string& key, const json& v) const {
    if (!v.is_string()) fail(key, "expected a YYYY-MM-DD string");
    try {
      return parse_date(v.get<std::string>());
    } catch (const std::invalid_argument& e) {
      fail(key, std::string("bad date: ") + e.what());
    }
  }

  Timestamp timestamp(const std::string& key) {
    const json& v = require(key);
    if (!v.is_string()) fail(key, "expected a YYYY-MM-DDTHH:MM:SSZ string");
    try {
      return parse_timestamp(v.get<std::string>());
    } catch (const std::invalid_argument& e) {
      fail(key, std::string("bad timestamp: ") + e.what());
    }
  }

  void reject_unknown() const {
    for (const auto& [key, value] : obj.items()) {
      if (!seen.contains(key)) fail(key, "unknown field");
    }
  }
};

json parse_line(std::string_view line, const std::string& source, std::size_t line_no) {
  json obj;
  try {
    obj = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError(source, line_no, "", std::string("malformed record: ") + e.what());
  }
  if (!obj.is_object()) throw ParseError(source, line_no, "", "malformed record: expected a JSON object");
  return obj;
}

}  // namespace

Date parse_date(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') throw std::invalid_argument("expected YYYY-MM-DD");
  const Date d{std::chrono::year{parse_fixed_int(s, 0, 4)},
               std::chrono::month{static_cast<unsigned>(parse_fixed_int(s, 5, 2))},
               std::chrono::day{static_cast<unsigned>(parse_fixed_int(s, 8, 2))}};
  if (!d.ok()) throw std::invalid_argument("no such calendar date");
  return d;
}

std::string format_date(Date d) {
  return std::to_string(static_cast<int>(d.year())) + "-" + two_digits(static_cast<unsigned>(d.month())) +
         "-" + two_digits(static_cast<unsigned>(d.day()));
}

Timestamp parse_timestamp(std::string_view s) {
  if (s.size() != 20 || s[10] != 'T' || s[13] != ':' || s[16] != ':' || s[19] != 'Z') {
    throw std::invalid_argument("expected YYYY-MM-DDTHH:MM:SSZ");
  }
  const Date d = parse_date(s.substr(0, 10));
  const int hh = parse_fixed_int(s, 11, 2);
  const int mm = parse_fixed_int(s, 14, 2);
  const int ss = parse_fixed_int(s, 17, 2);
  if (hh > 23 || mm > 59 || ss > 60) throw std::invalid_argument("time of day out of range");
  return std::chrono::sys_days{d} + std::chrono::hours{hh} + std::chrono::minutes{mm} +
         std::chrono::seconds{ss};
}

std::string format_timestamp(Timestamp t) {
  const auto day = std::chrono::floor<std::chrono::days>(t);
  const std::chrono::hh_mm_ss tod{t - day};
  return format_date(Date{day}) + "T" + two_digits(static_cast<unsigned>(tod.hours().count())) + ":" +
         two_digits(static_cast<unsigned>(tod.minutes().count())) + ":" +
         two_digits(static_cast<unsigned>(tod.seconds().count())) + "Z";
}

// ---------------------------------------------------------------------------
// Snapshots

std::vector<AccountProfile> load_snapshots(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_snapshots(in, path.string());
}

std::vector<AccountProfile> read_snapshots(std::istream& in, const std::string& source_name) {
  std::vector<AccountProfile> out;
  std::unordered_map<std::string, std::size_t> first_line;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = chomp(raw);
    if (text::trim(line).empty()) continue;
    const json obj = parse_line(line, source_name, line_no);
    RecordReader r{source_name, line_no, obj};

    AccountProfile p;
    p.account_id = r.str("account_id", false);
    p.username = r.str("username");
    p.screen_name = r.str("screen_name");
    p.description = r.str("description");
    p.tweet_count = r.counter("tweet_count");
    p.follower_count = r.counter("follower_count");
    p.friend_count = r.counter("friend_count");
    p.favourites_count = r.counter("favourites_count");
    p.listed_count = r.counter("listed_count");
    p.location_provided = r.flag("location_provided");
    p.is_protected = r.flag("is_protected");
    p.url_provided = r.flag("url_provided");
    p.has_fawkes_image = r.flag("has_fawkes_image");
    p.has_businessman_image = r.flag("has_businessman_image");
    p.created_at = r.date("created_at", r.require("created_at"));
    if (const json* last = r.optional("last_tweet_at")) {
      p.last_tweet_at = r.date("last_tweet_at", *last);
      if (std::chrono::sys_days{*p.last_tweet_at} < std::chrono::sys_days{p.created_at}) {
        r.fail("last_tweet_at", "earlier than created_at");
      }
    }
    r.reject_unknown();

    auto [it, inserted] = first_line.emplace(p.account_id, line_no);
    if (!inserted) {
      throw ParseError(source_name, line_no, "account_id",
                       "duplicate account_id (first seen on line " + std::to_string(it->second) + ")");
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::string to_record(const AccountProfile& p) {
  json j;
  j["account_id"] = p.account_id;
  j["username"] = p.username;
  j["screen_name"] = p.screen_name;
  j["description"] = p.description;
  j["tweet_count"] = p.tweet_count;
  j["follower_count"] = p.follower_count;
  j["friend_count"] = p.friend_count;
  j["favourites_count"] = p.favourites_count;
  j["listed_count"] = p.listed_count;
  j["location_provided"] = p.location_provided;
  j["is_protected"] = p.is_protected;
  j["url_provided"] = p.url_provided;
  j["has_fawkes_image"] = p.has_fawkes_image;
  j["has_businessman_image"] = p.has_businessman_image;
  j["created_at"] = format_date(p.created_at);
  j["last_tweet_at"] = p.last_tweet_at ? json(format_date(*p.last_tweet_at)) : json(nullptr);
  return j.dump();
}

void write_snapshots(std::ostream& out, std::span<const AccountProfile> profiles) {
  for (const auto& p : profiles) out << to_record(p) << '\n';
}

// ---------------------------------------------------------------------------
// Edges

EdgeLoad load_edges(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_edges(in, path.string());
}

EdgeLoad read_edges(std::istream& in, const std::string& source_name) {
  EdgeLoad result;
  std::set<FollowEdge> seen;
  bool delimiter_known = false;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = chomp(raw);
    if (text::trim(line).empty() || line.front() == '#') continue;

    if (!delimiter_known) {
      if (line.find('\t') != std::string_view::npos) {
        result.delimiter = '\t';
      } else if (line.find(',') != std::string_view::npos) {
        result.delimiter = ',';
      } else {
        throw ParseError(source_name, line_no, "", "unknown delimiter (expected tab or comma)");
      }
      delimiter_known = true;
    }

    const auto cut = line.find(result.delimiter);
    if (cut == std::string_view::npos || line.find(result.delimiter, cut + 1) != std::string_view::npos) {
      throw ParseError(source_name, line_no, "", "malformed row: expected exactly two columns");
    }
    const std::string follower(text::trim(line.substr(0, cut)));
    const std::string followee(text::trim(line.substr(cut + 1)));
    if (follower.empty() || followee.empty()) {
      throw ParseError(source_name, line_no, follower.empty() ? "follower_id" : "followee_id",
                       "malformed row: empty account id");
    }
    if (follower == "follower_id" && followee == "followee_id") continue;
    if (follower == followee) {
      ++result.self_loops_dropped;
      continue;
    }
    FollowEdge e{follower, followee};
    if (!seen.insert(e).second) {
      ++result.duplicates_dropped;
      continue;
    }
    result.edges.push_back(std::move(e));
  }
  return result;
}

EndpointResolution resolve_endpoints(std::span<const FollowEdge> edges,
                                     std::span<const AccountProfile> profiles) {
  std::unordered_set<std::string_view> known;
  for (const auto& p : profiles) known.insert(p.account_id);
  EndpointResolution r;
  std::set<std::string> missing;
  for (const auto& e : edges) {
    for (const std::string* id : {&e.follower_id, &e.followee_id}) {
      if (!known.contains(*id)) {
        ++r.unresolved_endpoints;
        missing.insert(*id);
      }
    }
  }
  r.unresolved_ids.assign(missing.begin(), missing.end());
  return r;
}

// ---------------------------------------------------------------------------
// Tweets

std::vector<TweetRecord> load_tweets(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_tweets(in, path.string());
}

std::vector<TweetRecord> read_tweets(std::istream& in, const std::string& source_name) {
  std::vector<TweetRecord> out;
  std::set<std::pair<std::string, std::string>> ids;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = chomp(raw);
    if (text::trim(line).empty()) continue;
    const json obj = parse_line(line, source_name, line_no);
    RecordReader r{source_name, line_no, obj};
    TweetRecord t;
    t.account_id = r.str("account_id", false);
    t.tweet_id = r.str("tweet_id", false);
    t.created_at = r.timestamp("created_at");
    t.text = r.str("text");
    t.is_retweet = r.flag("is_retweet");
    r.reject_unknown();
    if (!ids.emplace(t.account_id, t.tweet_id).second) {
      r.fail("tweet_id", "duplicate tweet_id for account");
    }
    out.push_back(std::move(t));
  }
  return out;
}

std::string to_record(const TweetRecord& t) {
  json j;
  j["account_id"] = t.account_id;
  j["tweet_id"] = t.tweet_id;
  j["created_at"] = format_timestamp(t.created_at);
  j["text"] = t.text;
  j["is_retweet"] = t.is_retweet;
  return j.dump();
}

// ---------------------------------------------------------------------------
// Pseudonyms

Pseudonymizer::Pseudonymizer(std::string secret_key) : key_(std::move(secret_key)) {
  if (key_.empty()) throw ConfigError("pseudonymizer key is empty");
}

std::string Pseudonymizer::operator()(std::string_view account_id) const {
  const std::string tag = hmac_sha256(key_, account_id);
  return "acct_" + to_hex(std::string_view(tag).substr(0, 6));
}

std::string pseudonymize(const Pseudonymizer& p, std::string_view account_id) { return p(account_id); }

std::unordered_map<std::string, std::string> pseudonym_index(const Pseudonymizer& p,
                                                             std::span<const AccountProfile> profiles) {
  std::unordered_map<std::string, std::string> index;
  index.reserve(profiles.size());
  for (const auto& prof : profiles) {
    auto [it, inserted] = index.emplace(p(prof.account_id), prof.account_id);
    if (!inserted && it->second != prof.account_id) {
      throw DataError("pseudonym collision between two accounts: " + it->first);
    }
  }
  return index;
}

// ---------------------------------------------------------------------------
// Account source

SnapshotAccountSource::SnapshotAccountSource(std::vector<AccountProfile> profiles,
                                             std::span<const FollowEdge> edges) {
  profiles_.reserve(profiles.size());
  for (auto& p : profiles) {
    std::string id = p.account_id;
    profiles_.emplace(std::move(id), std::move(p));
  }
  for (const auto& e : edges) {
    followers_[e.followee_id].push_back(e.follower_id);
    friends_[e.follower_id].push_back(e.followee_id);
  }
  for (auto* m : {&followers_, &friends_}) {
    for (auto& [id, list] : *m) {
      std::sort(list.begin(), list.end());
      list.erase(std::unique(list.begin(), list.end()), list.end());
    }
  }
}

std::optional<AccountProfile> SnapshotAccountSource::get_profile(const std::string& account_id) const {
  auto it = profiles_.find(account_id);
  if (it == profiles_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> SnapshotAccountSource::get_followers(const std::string& account_id) const {
  auto it = followers_.find(account_id);
  return it == followers_.end() ? std::vector<std::string>{} : it->second;
}

std::vector<std::string> SnapshotAccountSource::get_friends(const std::string& account_id) const {
  auto it = friends_.find(account_id);
  return it == friends_.end() ? std::vector<std::string>{} : it->second;
}

}  // namespace anonnet
