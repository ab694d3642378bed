#include "anonnet/netgraph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <set>

#include "anonnet/error.hpp"
#include "anonnet/parallel.hpp"
#include "anonnet/text.hpp"

namespace anonnet {

namespace {

constexpr std::size_t kBetweennessBlock = 32;

double l1_distance(const Scores& a, const Scores& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += std::abs(a[i] - b[i]);
  return d;
}

// Node order by score descending, then account id ascending.
std::vector<NodeIndex> order_by_score(const FollowGraph& g, std::span<const double> scores) {
  std::vector<NodeIndex> order(g.size());
  std::iota(order.begin(), order.end(), NodeIndex{0});
  std::stable_sort(order.begin(), order.end(), [&](NodeIndex a, NodeIndex b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return g.id(a) < g.id(b);
  });
  return order;
}

// Brandes single-source pass; adds dependencies of `s` into `acc`.
struct BrandesWorkspace {
  explicit BrandesWorkspace(std::size_t n) : sigma(n), dist(n), delta(n) { order.reserve(n); }

  void bfs(const FollowGraph& g, NodeIndex s) {
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(dist.begin(), dist.end(), -1);
    order.clear();
    sigma[s] = 1.0;
    dist[s] = 0;
    order.push_back(s);
    for (std::size_t head = 0; head < order.size(); ++head) {
      const NodeIndex v = order[head];
      for (NodeIndex w : g.out(v)) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          order.push_back(w);
        }
        if (dist[w] == dist[v] + 1) sigma[w] += sigma[v];
      }
    }
  }

  void accumulate(const FollowGraph& g, NodeIndex s, std::vector<double>& acc) {
    bfs(g, s);
    for (NodeIndex v : order) delta[v] = 0.0;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const NodeIndex w = *it;
      const double coeff = (1.0 + delta[w]) / sigma[w];
      for (NodeIndex v : g.in(w)) {
        if (dist[v] >= 0 && dist[v] == dist[w] - 1) delta[v] += sigma[v] * coeff;
      }
      if (w != s) acc[w] += delta[w];
    }
  }

  std::vector<double> sigma;
  std::vector<int> dist;
  std::vector<double> delta;
  std::vector<NodeIndex> order;
};

}  // namespace

// ---------------------------------------------------------------------------
// Graph

FollowGraph::FollowGraph(std::vector<std::string> ids, std::span<const std::pair<NodeIndex, NodeIndex>> edges)
    : ids_(std::move(ids)), out_(ids_.size()), in_(ids_.size()) {
  index_.reserve(ids_.size());
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (!index_.emplace(ids_[i], static_cast<NodeIndex>(i)).second) {
      throw DataError("duplicate node id " + ids_[i]);
    }
  }
  for (const auto& [u, v] : edges) {
    if (u >= ids_.size() || v >= ids_.size()) throw DataError("edge endpoint out of range");
    if (u == v) throw DataError("self-loop on " + ids_[u]);
    out_[u].push_back(v);
    in_[v].push_back(u);
  }
  for (auto* adj : {&out_, &in_}) {
    for (auto& list : *adj) {
      std::sort(list.begin(), list.end());
      list.erase(std::unique(list.begin(), list.end()), list.end());
    }
  }
  for (const auto& list : out_) edge_count_ += list.size();
}

std::optional<NodeIndex> FollowGraph::index_of(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::pair<NodeIndex, NodeIndex>> FollowGraph::edges() const {
  std::vector<std::pair<NodeIndex, NodeIndex>> out;
  out.reserve(edge_count_);
  for (NodeIndex u = 0; u < size(); ++u) {
    for (NodeIndex v : out_[u]) out.emplace_back(u, v);
  }
  return out;
}

GraphBuild build_graph(std::span<const FollowEdge> edges, std::span<const std::string> node_filter) {
  if (node_filter.empty()) throw DataError("graph node filter is empty");
  std::vector<std::string> ids(node_filter.begin(), node_filter.end());
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::unordered_map<std::string_view, NodeIndex> index;
  for (std::size_t i = 0; i < ids.size(); ++i) index.emplace(ids[i], static_cast<NodeIndex>(i));

  GraphBuild result;
  std::vector<std::pair<NodeIndex, NodeIndex>> kept;
  for (const auto& e : edges) {
    auto u = index.find(e.follower_id);
    auto v = index.find(e.followee_id);
    if (u == index.end() || v == index.end()) {
      ++result.dropped_edges;
      continue;
    }
    if (u->second == v->second) continue;
    kept.emplace_back(u->second, v->second);
  }
  result.graph = FollowGraph(std::move(ids), kept);
  return result;
}

// ---------------------------------------------------------------------------
// Centrality measures

Scores degree_centrality(const FollowGraph& g) {
  Scores s(g.size(), 0.0);
  if (g.size() < 2) return s;
  const double scale = 1.0 / static_cast<double>(g.size() - 1);
  for (NodeIndex v = 0; v < g.size(); ++v) {
    s[v] = static_cast<double>(g.in(v).size() + g.out(v).size()) * scale;
  }
  return s;
}

Scores eigenvector_centrality(const FollowGraph& g, const EigenOptions& opts) {
  const std::size_t n = g.size();
  if (n == 0) throw DataError("eigenvector centrality of an empty graph");
  Scores x(n, 1.0 / std::sqrt(static_cast<double>(n)));
  if (g.edge_count() == 0) return x;

  const bool incoming = opts.direction == EigenDirection::kIncoming;
  Scores next(n);
  for (int iter = 1; iter <= opts.max_iter; ++iter) {
    for (NodeIndex v = 0; v < n; ++v) {
      double sum = x[v];
      for (NodeIndex u : incoming ? g.in(v) : g.out(v)) sum += x[u];
      next[v] = sum;
    }
    double norm = 0.0;
    for (double value : next) norm += value * value;
    norm = std::sqrt(norm);
    for (double& value : next) value /= norm;
    const double diff = l1_distance(next, x);
    x.swap(next);
    if (diff < opts.tol) return x;
  }
  throw ConvergenceError("eigenvector centrality", opts.max_iter);
}

Scores pagerank(const FollowGraph& g, const PageRankOptions& opts) {
  const std::size_t n = g.size();
  if (n == 0) throw DataError("PageRank of an empty graph");
  if (!(opts.damping >= 0.0 && opts.damping <= 1.0)) throw ConfigError("PageRank damping must lie in [0, 1]");
  const double inv_n = 1.0 / static_cast<double>(n);
  Scores x(n, inv_n);
  Scores next(n);
  for (int iter = 1; iter <= opts.max_iter; ++iter) {
    double dangling = 0.0;
    for (NodeIndex u = 0; u < n; ++u) {
      if (g.out(u).empty()) dangling += x[u];
    }
    const double base = (1.0 - opts.damping) * inv_n + opts.damping * dangling * inv_n;
    for (NodeIndex v = 0; v < n; ++v) {
      double sum = 0.0;
      for (NodeIndex u : g.in(v)) sum += x[u] / static_cast<double>(g.out(u).size());
      next[v] = base + opts.damping * sum;
    }
    const double diff = l1_distance(next, x);
    x.swap(next);
    if (diff < opts.tol) {
      const double total = std::accumulate(x.begin(), x.end(), 0.0);
      for (double& value : x) value /= total;
      return x;
    }
  }
  throw ConvergenceError("PageRank", opts.max_iter);
}

std::vector<double> shortest_path_counts(const FollowGraph& g, NodeIndex source) {
  BrandesWorkspace ws(g.size());
  ws.bfs(g, source);
  return ws.sigma;
}

Betweenness betweenness_centrality(const FollowGraph& g, int workers) {
  const std::size_t n = g.size();
  Betweenness result{Scores(n, 0.0), Scores(n, 0.0)};
  if (n == 0) return result;

  const std::size_t blocks = (n + kBetweennessBlock - 1) / kBetweennessBlock;
  const std::size_t wave = std::max<std::size_t>(1, static_cast<std::size_t>(std::max(workers, 1)) * 4);
  std::vector<std::vector<double>> partial;
  for (std::size_t first = 0; first < blocks; first += wave) {
    const std::size_t count = std::min(wave, blocks - first);
    partial.assign(count, {});
    parallel_for(count, workers, [&](std::size_t b) {
      std::vector<double> acc(n, 0.0);
      BrandesWorkspace ws(n);
      const std::size_t lo = (first + b) * kBetweennessBlock;
      const std::size_t hi = std::min(n, lo + kBetweennessBlock);
      for (std::size_t s = lo; s < hi; ++s) ws.accumulate(g, static_cast<NodeIndex>(s), acc);
      partial[b] = std::move(acc);
    });
    for (const auto& acc : partial) {
      for (std::size_t v = 0; v < n; ++v) result.raw[v] += acc[v];
    }
  }
  if (n > 2) {
    const double scale = 1.0 / (static_cast<double>(n - 1) * static_cast<double>(n - 2));
    for (std::size_t v = 0; v < n; ++v) result.normalized[v] = result.raw[v] * scale;
  }
  return result;
}

Scores normalize_scores(std::span<const double> raw) {
  Scores out(raw.size(), 0.0);
  if (raw.empty()) return out;
  const auto [lo, hi] = std::minmax_element(raw.begin(), raw.end());
  const double min = *lo;
  const double range = *hi - *lo;
  if (range == 0.0) return out;
  for (std::size_t i = 0; i < raw.size(); ++i) out[i] = (raw[i] - min) / range;
  return out;
}

std::string_view to_string(Centrality c) {
  switch (c) {
    case Centrality::kDegree: return "degree";
    case Centrality::kEigenvector: return "eigenvector";
    case Centrality::kPageRank: return "pagerank";
    case Centrality::kBetweenness: return "betweenness";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Fusion and ranking

std::vector<std::string> CentralityReport::top_k(std::size_t k) const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < std::min(k, rows.size()); ++i) out.push_back(rows[i].account_id);
  return out;
}

const CentralityRow* CentralityReport::find(std::string_view account_id) const {
  for (const auto& r : rows) {
    if (r.account_id == account_id) return &r;
  }
  return nullptr;
}

CentralityReport fuse_and_rank(std::span<const std::string> ids, const std::array<Scores, 4>& raw,
                               const std::array<Scores, 4>& normalized) {
  for (std::size_t m = 0; m < 4; ++m) {
    if (raw[m].size() != ids.size() || normalized[m].size() != ids.size()) {
      throw DataError("centrality score set '" + std::string(to_string(kAllCentralities[m])) +
                      "' does not cover the node set");
    }
  }
  CentralityReport report;
  report.rows.resize(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    auto& row = report.rows[i];
    row.account_id = ids[i];
    double sum = 0.0;
    for (std::size_t m = 0; m < 4; ++m) {
      row.raw[m] = raw[m][i];
      row.normalized[m] = normalized[m][i];
      sum += normalized[m][i];
    }
    row.fused = sum / 4.0;
  }
  std::sort(report.rows.begin(), report.rows.end(), [](const CentralityRow& a, const CentralityRow& b) {
    if (a.fused != b.fused) return a.fused > b.fused;
    return a.account_id < b.account_id;
  });
  for (std::size_t i = 0; i < report.rows.size(); ++i) report.rows[i].rank = i + 1;
  return report;
}

CentralityResult compute_centrality(const FollowGraph& g, const CentralityOptions& opts, int workers) {
  CentralityResult r;
  r.raw[0] = degree_centrality(g);
  r.raw[1] = eigenvector_centrality(g, opts.eigen);
  r.raw[2] = pagerank(g, opts.pagerank);
  Betweenness b = betweenness_centrality(g, workers);
  r.raw[3] = std::move(b.raw);
  r.betweenness_normalized = std::move(b.normalized);
  for (std::size_t m = 0; m < 4; ++m) r.normalized[m] = normalize_scores(r.raw[m]);
  r.report = fuse_and_rank(g.ids(), r.raw, r.normalized);
  return r;
}

std::vector<ScoreCurvePoint> score_curves(const CentralityReport& report, std::size_t limit) {
  std::vector<ScoreCurvePoint> out;
  for (std::size_t m = 0; m < 4; ++m) {
    std::vector<const CentralityRow*> rows;
    for (const auto& r : report.rows) rows.push_back(&r);
    std::sort(rows.begin(), rows.end(), [m](const CentralityRow* a, const CentralityRow* b) {
      if (a->raw[m] != b->raw[m]) return a->raw[m] > b->raw[m];
      return a->account_id < b->account_id;
    });
    for (std::size_t i = 0; i < std::min(limit, rows.size()); ++i) {
      out.push_back({kAllCentralities[m], i + 1, rows[i]->account_id, rows[i]->raw[m], rows[i]->normalized[m]});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Snowball expansion

std::vector<std::string> SnowballRun::accepted() const {
  std::vector<std::string> out;
  for (const auto& [id, stage] : accepted_stage) out.push_back(id);
  return out;
}

SnowballRun snowball_expand(std::span<const std::string> seeds, const AccountSource& source,
                            const ProfileClassifier& classify, int stages, int workers) {
  if (stages < 0) throw ConfigError("snowball stages must be >= 0");
  SnowballRun run;
  run.seeds.assign(seeds.begin(), seeds.end());
  std::sort(run.seeds.begin(), run.seeds.end());
  run.seeds.erase(std::unique(run.seeds.begin(), run.seeds.end()), run.seeds.end());
  run.stages_requested = stages;
  for (const auto& s : run.seeds) {
    if (!source.get_profile(s)) throw DataError("unresolvable seed account " + s);
  }

  std::set<std::string> seen(run.seeds.begin(), run.seeds.end());
  run.frontier = run.seeds;
  for (int stage = 1; stage <= stages; ++stage) {
    SnowballStage st;
    st.stage = stage;
    st.frontier = run.frontier;
    std::vector<AccountProfile> profiles;
    try {
      std::set<std::string> neighbours;
      for (const auto& id : st.frontier) {
        for (auto& n : source.get_followers(id)) neighbours.insert(std::move(n));
        for (auto& n : source.get_friends(id)) neighbours.insert(std::move(n));
      }
      for (const auto& n : neighbours) {
        if (seen.contains(n)) continue;
        st.examined.push_back(n);
      }
      for (const auto& n : st.examined) {
        auto p = source.get_profile(n);
        if (!p) {
          ++st.unavailable;
          continue;
        }
        profiles.push_back(std::move(*p));
      }
    } catch (const std::exception& e) {
      run.failure = StageFailure{stage, e.what()};
      return run;
    }

    std::vector<Prediction> predictions(profiles.size());
    parallel_for(profiles.size(), workers, [&](std::size_t i) { predictions[i] = classify(profiles[i]); });

    for (const auto& n : st.examined) seen.insert(n);
    for (std::size_t i = 0; i < profiles.size(); ++i) {
      const auto& id = profiles[i].account_id;
      run.scores[id] = predictions[i].score;
      if (predictions[i].label == ClassLabel::kPositive) {
        st.accepted.push_back(id);
        run.accepted_stage.emplace(id, stage);
      } else {
        ++st.rejected;
      }
    }
    run.frontier = st.accepted;
    run.stages.push_back(std::move(st));
  }
  return run;
}

SnowballRun snowball_expand(std::span<const std::string> seeds, const AccountSource& source,
                            const Model& model, const FeatureExtractor& extractor, int stages, int workers) {
  const ProfileClassifier classify = [&](const AccountProfile& p) {
    return predict(model, extractor.extract(p));
  };
  return snowball_expand(seeds, source, classify, stages, workers);
}

// ---------------------------------------------------------------------------
// Temporal report

TemporalReport temporal_report(std::span<const AccountProfile> profiles, std::span<const std::string> ranked_ids,
                               std::span<const std::size_t> top_ks, int window_from, int window_to) {
  TemporalReport r;
  r.window_from = window_from;
  r.window_to = window_to;
  std::unordered_map<std::string_view, const AccountProfile*> by_id;
  for (const auto& p : profiles) {
    by_id.emplace(p.account_id, &p);
    ++r.created_per_year[static_cast<int>(p.created_at.year())];
    if (p.last_tweet_at) {
      ++r.last_tweet_per_year[static_cast<int>(p.last_tweet_at->year())];
    } else {
      ++r.last_tweet_unknown;
    }
  }
  for (std::size_t k : top_ks) {
    EraFraction e;
    e.k_requested = k;
    e.k_used = std::min(k, ranked_ids.size());
    for (std::size_t i = 0; i < e.k_used; ++i) {
      auto it = by_id.find(ranked_ids[i]);
      if (it == by_id.end()) throw DataError("ranked account has no profile: " + ranked_ids[i]);
      const int year = static_cast<int>(it->second->created_at.year());
      if (year >= window_from && year <= window_to) ++e.in_window;
    }
    e.fraction = e.k_used == 0 ? 0.0 : static_cast<double>(e.in_window) / static_cast<double>(e.k_used);
    r.era.push_back(e);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Subgraph export

Subgraph top_k_subgraph(const FollowGraph& g, std::span<const double> scores, long long k) {
  if (k <= 0) throw ConfigError("subgraph size k must be positive");
  if (scores.size() != g.size()) throw DataError("score vector does not match graph size");
  Subgraph sub;
  auto want = static_cast<std::size_t>(k);
  if (want > g.size()) {
    want = g.size();
    sub.clamped = true;
  }
  const auto order = order_by_score(g, scores);
  std::vector<long long> pos(g.size(), -1);
  for (std::size_t i = 0; i < want; ++i) {
    pos[order[i]] = static_cast<long long>(i);
    sub.ids.push_back(g.id(order[i]));
    sub.scores.push_back(scores[order[i]]);
  }
  for (std::size_t i = 0; i < want; ++i) {
    for (NodeIndex v : g.out(order[i])) {
      if (pos[v] >= 0) sub.edges.emplace_back(i, static_cast<std::size_t>(pos[v]));
    }
  }
  std::sort(sub.edges.begin(), sub.edges.end());
  return sub;
}

void write_subgraph_csv(std::ostream& nodes, std::ostream& edges, const Subgraph& sub, const IdMapper& map_id) {
  nodes << "Id,Label,score\n";
  for (std::size_t i = 0; i < sub.ids.size(); ++i) {
    const std::string alias = map_id(sub.ids[i]);
    nodes << alias << ',' << alias << ',' << text::format_double(sub.scores[i]) << '\n';
  }
  edges << "Source,Target,Type\n";
  for (const auto& [u, v] : sub.edges) {
    edges << map_id(sub.ids[u]) << ',' << map_id(sub.ids[v]) << ",Directed\n";
  }
}

}  // namespace anonnet
