#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "anonnet/classifier.hpp"
#include "anonnet/features.hpp"
#include "anonnet/ingest.hpp"

namespace anonnet {

using NodeIndex = std::uint32_t;
using Scores = std::vector<double>;  // indexed by NodeIndex

// Directed, unweighted follower graph: an edge u -> v means u follows v.
// Nodes are indexed in ascending account-id order; neighbour lists are sorted.
class FollowGraph {
 public:
  FollowGraph() = default;
  // Self-loops are rejected; parallel edges collapse.
  FollowGraph(std::vector<std::string> ids, std::span<const std::pair<NodeIndex, NodeIndex>> edges);

  std::size_t size() const noexcept { return ids_.size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }
  const std::vector<std::string>& ids() const noexcept { return ids_; }
  const std::string& id(NodeIndex v) const { return ids_[v]; }
  std::optional<NodeIndex> index_of(std::string_view id) const;

  // Accounts v follows.
  const std::vector<NodeIndex>& out(NodeIndex v) const { return out_[v]; }
  // Accounts following v.
  const std::vector<NodeIndex>& in(NodeIndex v) const { return in_[v]; }

  std::vector<std::pair<NodeIndex, NodeIndex>> edges() const;

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, NodeIndex> index_;
  std::vector<std::vector<NodeIndex>> out_;
  std::vector<std::vector<NodeIndex>> in_;
  std::size_t edge_count_ = 0;
};

struct GraphBuild {
  FollowGraph graph;
  std::size_t dropped_edges = 0;  // edges with an endpoint outside the filter
};

// Graph induced on `node_filter`. Throws DataError on an empty filter.
GraphBuild build_graph(std::span<const FollowEdge> edges, std::span<const std::string> node_filter);

// (in-degree + out-degree) / (n - 1); 0 for a single node. Can exceed 1.
Scores degree_centrality(const FollowGraph& g);

enum class EigenDirection {
  kIncoming,  // a node's score is the sum of its followers' scores
  kOutgoing,  // transpose: the sum over accounts it follows
};

struct EigenOptions {
  double tol = 1e-8;
  int max_iter = 1000;
  EigenDirection direction = EigenDirection::kIncoming;
};

// Power iteration on (A^T + I), L2-normalised. Converged when successive
// iterates differ by less than tol in L1. A graph without edges yields the
// uniform vector. Throws ConvergenceError.
Scores eigenvector_centrality(const FollowGraph& g, const EigenOptions& opts = {});

struct PageRankOptions {
  double damping = 0.85;
  double tol = 1e-9;
  int max_iter = 200;
};

// Damped random surfer; dangling mass is spread uniformly. Sums to 1.
// Throws ConvergenceError.
Scores pagerank(const FollowGraph& g, const PageRankOptions& opts = {});

struct Betweenness {
  Scores raw;
  Scores normalized;  // raw / ((n - 1)(n - 2)); zeros when n < 3
};

// Brandes accumulation over all sources on directed shortest paths. Sources
// are processed in fixed blocks and the block sums are added in source order,
// so the result is bitwise identical for any worker count.
Betweenness betweenness_centrality(const FollowGraph& g, int workers = 1);

// Number of shortest paths from `source` to every node (0 when unreachable,
// 1 for the source itself).
std::vector<double> shortest_path_counts(const FollowGraph& g, NodeIndex source);

// Min-max scaling to [0, 1]; a constant input maps to all zeros.
Scores normalize_scores(std::span<const double> raw);

enum class Centrality { kDegree = 0, kEigenvector = 1, kPageRank = 2, kBetweenness = 3 };
inline constexpr std::array<Centrality, 4> kAllCentralities{Centrality::kDegree, Centrality::kEigenvector,
                                                            Centrality::kPageRank, Centrality::kBetweenness};
std::string_view to_string(Centrality c);

struct CentralityRow {
  std::string account_id;
  std::array<double, 4> raw{};
  std::array<double, 4> normalized{};
  double fused = 0.0;
  std::size_t rank = 0;  // 1-based
};

// Rows sorted by rank: fused score descending, then account id ascending.
struct CentralityReport {
  std::vector<CentralityRow> rows;

  std::vector<std::string> top_k(std::size_t k) const;
  const CentralityRow* find(std::string_view account_id) const;
};

// Fused score is the mean of the four normalised scores. All score sets must
// have one entry per id. Throws DataError on mismatch.
CentralityReport fuse_and_rank(std::span<const std::string> ids, const std::array<Scores, 4>& raw,
                               const std::array<Scores, 4>& normalized);

struct CentralityOptions {
  EigenOptions eigen;
  PageRankOptions pagerank;
};

struct CentralityResult {
  std::array<Scores, 4> raw;
  std::array<Scores, 4> normalized;
  Scores betweenness_normalized;  // directed (n-1)(n-2) scaling, for reference
  CentralityReport report;
};

CentralityResult compute_centrality(const FollowGraph& g, const CentralityOptions& opts = {}, int workers = 1);

// Ranked (rank, score) points per measure, highest first, up to `limit` each.
struct ScoreCurvePoint {
  Centrality measure = Centrality::kDegree;
  std::size_t rank = 0;
  std::string account_id;
  double raw = 0.0;
  double normalized = 0.0;
};

std::vector<ScoreCurvePoint> score_curves(const CentralityReport& report, std::size_t limit);

// Snowball expansion --------------------------------------------------------

using ProfileClassifier = std::function<Prediction(const AccountProfile&)>;

struct SnowballStage {
  int stage = 0;                       // 1-based
  std::vector<std::string> frontier;   // accounts whose neighbours were examined
  std::vector<std::string> examined;   // new neighbours, sorted
  std::vector<std::string> accepted;   // classifier-positive among examined
  std::size_t rejected = 0;
  std::size_t unavailable = 0;         // neighbours the source has no profile for
};

struct StageFailure {
  int stage = 0;
  std::string message;
};

struct SnowballRun {
  std::vector<std::string> seeds;
  int stages_requested = 0;
  std::vector<SnowballStage> stages;
  std::vector<std::string> frontier;            // next frontier (seeds when no stage ran)
  std::map<std::string, int> accepted_stage;    // accepted account -> stage it was accepted in
  std::map<std::string, double> scores;         // classifier score per examined account
  std::optional<StageFailure> failure;

  std::vector<std::string> accepted() const;    // sorted union over stages
};

// Stage 1 classifies all followers and friends of the seeds; stage k classifies
// the not-yet-seen followers and friends of stage k-1 acceptances. Throws
// DataError for an unresolvable seed. Source errors stop the run and are
// recorded in `failure` with completed stages preserved.
SnowballRun snowball_expand(std::span<const std::string> seeds, const AccountSource& source,
                            const ProfileClassifier& classify, int stages = 2, int workers = 1);

SnowballRun snowball_expand(std::span<const std::string> seeds, const AccountSource& source,
                            const Model& model, const FeatureExtractor& extractor, int stages = 2,
                            int workers = 1);

// Temporal analysis -----------------------------------------------------------

struct EraFraction {
  std::size_t k_requested = 0;
  std::size_t k_used = 0;  // clamped to the number of ranked accounts
  std::size_t in_window = 0;
  double fraction = 0.0;
};

struct TemporalReport {
  std::map<int, std::size_t> created_per_year;
  std::map<int, std::size_t> last_tweet_per_year;
  std::size_t last_tweet_unknown = 0;
  int window_from = 2011;
  int window_to = 2013;
  std::vector<EraFraction> era;
};

// Year histograms over `profiles`, plus the fraction of each top-k of
// `ranked_ids` created within [window_from, window_to].
TemporalReport temporal_report(std::span<const AccountProfile> profiles, std::span<const std::string> ranked_ids,
                               std::span<const std::size_t> top_ks, int window_from = 2011,
                               int window_to = 2013);

// Top-k subgraph --------------------------------------------------------------

struct Subgraph {
  std::vector<std::string> ids;  // highest score first
  std::vector<double> scores;
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // indices into ids
  bool clamped = false;
};

// Induced subgraph on the k highest-scoring nodes (ties by account id). k
// larger than the graph is clamped. Throws ConfigError for k <= 0.
Subgraph top_k_subgraph(const FollowGraph& g, std::span<const double> scores, long long k);

// Gephi-style CSV pair: nodes "Id,Label,score" and edges "Source,Target,Type".
using IdMapper = std::function<std::string(const std::string&)>;
void write_subgraph_csv(std::ostream& nodes, std::ostream& edges, const Subgraph& sub, const IdMapper& map_id);

}  // namespace anonnet
