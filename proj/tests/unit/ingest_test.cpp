#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "anonnet/error.hpp"
#include "anonnet/ingest.hpp"

using namespace anonnet;

namespace {

std::string record(const std::string& id, const std::string& extra = "") {
  return R"({"account_id":")" + id +
         R"(","username":"u","screen_name":"s","description":"d","tweet_count":1,"follower_count":2,)"
         R"("friend_count":3,"favourites_count":4,"listed_count":5,"location_provided":false,)"
         R"("is_protected":false,"url_provided":true,"has_fawkes_image":false,"has_businessman_image":false,)"
         R"("created_at":"2012-01-02")" +
         extra + "}";
}

std::vector<AccountProfile> fixture_profiles() {
  return load_snapshots(std::filesystem::path(ANONNET_SOURCE_DIR) / "fixtures" / "e2e" / "snapshots.ndjson");
}

}  // namespace

TEST(Snapshots, EmptyInput) {
  std::istringstream in("");
  EXPECT_TRUE(read_snapshots(in).empty());
}

TEST(Snapshots, KeepsOrder) {
  std::istringstream in(record("3") + "\n" + record("1") + "\n" + record("2") + "\n");
  const auto p = read_snapshots(in);
  ASSERT_EQ(p.size(), 3u);
  EXPECT_EQ(p[0].account_id, "3");
  EXPECT_EQ(p[1].account_id, "1");
  EXPECT_EQ(p[2].account_id, "2");
  EXPECT_EQ(p[0].follower_count, 2);
  EXPECT_TRUE(p[0].url_provided);
  EXPECT_FALSE(p[0].last_tweet_at.has_value());
}

TEST(Snapshots, NegativeCounterNamesLineAndField) {
  std::string bad = record("1");
  bad.replace(bad.find("\"follower_count\":2"), 18, "\"follower_count\":-1");
  std::istringstream in(bad + "\n");
  try {
    read_snapshots(in, "snap.ndjson");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
    EXPECT_EQ(e.field(), "follower_count");
    EXPECT_NE(std::string(e.what()).find("follower_count"), std::string::npos);
  }
}

TEST(Snapshots, MalformedDateRejected) {
  std::string bad = record("1");
  bad.replace(bad.find("2012-01-02"), 10, "2012-02-30");
  std::istringstream in(bad);
  EXPECT_THROW(read_snapshots(in), ParseError);
}

TEST(Snapshots, RecordRoundTrip) {
  std::istringstream in(record("42", R"(,"last_tweet_at":"2016-05-01")"));
  const auto p = read_snapshots(in);
  std::ostringstream out;
  write_snapshots(out, p);
  std::istringstream again(out.str());
  EXPECT_EQ(read_snapshots(again), p);
}

TEST(Edges, Deduplicates) {
  std::istringstream in("a\tb\na\tb\n");
  const auto load = read_edges(in);
  ASSERT_EQ(load.edges.size(), 1u);
  EXPECT_EQ(load.duplicates_dropped, 1u);
}

TEST(Edges, SelfLoopDropped) {
  std::istringstream in("a\ta\n");
  const auto load = read_edges(in);
  EXPECT_TRUE(load.edges.empty());
  EXPECT_EQ(load.self_loops_dropped, 1u);
}

TEST(Edges, DirectionMatters) {
  std::istringstream in("follower_id,followee_id\na,b\nb,a\n");
  const auto load = read_edges(in);
  ASSERT_EQ(load.edges.size(), 2u);
  EXPECT_EQ(load.delimiter, ',');
  EXPECT_EQ(load.edges[0], (FollowEdge{"a", "b"}));
  EXPECT_EQ(load.edges[1], (FollowEdge{"b", "a"}));
}

TEST(Edges, MissingColumnIsError) {
  std::istringstream in("a\tb\nc\n");
  EXPECT_THROW(read_edges(in), ParseError);
}

TEST(Edges, UnresolvedEndpoints) {
  std::istringstream in(record("a") + "\n");
  const auto profiles = read_snapshots(in);
  const std::vector<FollowEdge> edges{{"a", "x"}, {"y", "a"}, {"x", "a"}};
  const auto r = resolve_endpoints(edges, profiles);
  EXPECT_EQ(r.unresolved_endpoints, 3u);
  EXPECT_EQ(r.unresolved_ids, (std::vector<std::string>{"x", "y"}));
}

TEST(Tweets, ParsesRecords) {
  std::istringstream in(
      R"({"account_id":"1","tweet_id":"9","created_at":"2015-01-02T03:04:05Z","text":"hi","is_retweet":false})"
      "\n");
  const auto t = read_tweets(in);
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(format_timestamp(t[0].created_at), "2015-01-02T03:04:05Z");
  std::istringstream again(to_record(t[0]) + "\n");
  EXPECT_EQ(read_tweets(again), t);
}

TEST(Pseudonyms, Deterministic) {
  const Pseudonymizer p("key");
  EXPECT_EQ(p("1000001"), p("1000001"));
  EXPECT_TRUE(std::regex_match(p("1000001"), std::regex("acct_[0-9a-f]{12}")));
}

TEST(Pseudonyms, DistinctOverFixture) {
  const Pseudonymizer p("fixture-pseudonym-key-7f3a");
  const auto profiles = fixture_profiles();
  std::set<std::string> seen;
  for (const auto& a : profiles) seen.insert(p(a.account_id));
  EXPECT_EQ(seen.size(), profiles.size());
  EXPECT_NO_THROW(pseudonym_index(p, profiles));
}

TEST(Pseudonyms, KeyDependent) {
  EXPECT_NE(Pseudonymizer("k1")("1000001"), Pseudonymizer("k2")("1000001"));
}

TEST(Pseudonyms, KnownHmacValue) {
  // HMAC-SHA256("key", "The quick brown fox jumps over the lazy dog") = f7bc83f430538424...
  EXPECT_EQ(Pseudonymizer("key")("The quick brown fox jumps over the lazy dog"), "acct_f7bc83f43053");
}

TEST(AccountSourceTest, SortedNeighbours) {
  std::istringstream in(record("a") + "\n" + record("b") + "\n");
  const std::vector<FollowEdge> edges{{"c", "a"}, {"b", "a"}, {"a", "b"}};
  const SnapshotAccountSource src(read_snapshots(in), edges);
  EXPECT_EQ(src.get_followers("a"), (std::vector<std::string>{"b", "c"}));
  EXPECT_EQ(src.get_friends("a"), (std::vector<std::string>{"b"}));
  EXPECT_FALSE(src.get_profile("c").has_value());
  EXPECT_TRUE(src.get_profile("b").has_value());
}
