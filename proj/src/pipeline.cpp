#include "anonnet/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include <json.hpp>

#include "anonnet/digest.hpp"
#include "anonnet/error.hpp"
#include "anonnet/features.hpp"
#include "anonnet/ingest.hpp"
#include "anonnet/lexicon.hpp"
#include "anonnet/parallel.hpp"
#include "anonnet/text.hpp"

#ifndef ANONNET_VERSION
#define ANONNET_VERSION "0.0.0"
#endif

namespace anonnet {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr int kArtifactFormat = 1;

// ---------------------------------------------------------------------------
// Config parsing

class ConfigReader {
 public:
  ConfigReader(const json& doc, std::string where, fs::path base)
      : doc_(doc), where_(std::move(where)), base_(std::move(base)) {
    if (!doc_.is_object()) throw ConfigError(where_ + ": expected an object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return doc_.contains(key) && !doc_.at(key).is_null();
  }

  template <typename T>
  void get(const std::string& key, T& out) {
    if (!has(key)) return;
    try {
      out = doc_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError(where_ + "." + key + ": wrong type");
    }
  }

  template <typename T>
  void get(const std::string& key, std::optional<T>& out) {
    if (!has(key)) return;
    T v{};
    get(key, v);
    out = std::move(v);
  }

  void path(const std::string& key, std::optional<fs::path>& out) {
    std::optional<std::string> s;
    get(key, s);
    if (s) out = resolve(*s);
  }

  void path(const std::string& key, fs::path& out) {
    std::optional<fs::path> p;
    path(key, p);
    if (p) out = *p;
  }

  ConfigReader child(const std::string& key) {
    if (!has(key)) return ConfigReader(empty(), where_ + "." + key, base_);
    return ConfigReader(doc_.at(key), where_ + "." + key, base_);
  }

  void finish() const {
    for (const auto& [key, value] : doc_.items()) {
      if (!seen_.contains(key)) throw ConfigError(where_ + ": unknown key '" + key + "'");
    }
  }

  fs::path resolve(const std::string& p) const {
    const fs::path path(p);
    return path.is_absolute() ? path : (base_ / path).lexically_normal();
  }

 private:
  static const json& empty() {
    static const json kEmpty = json::object();
    return kEmpty;
  }

  const json& doc_;
  std::string where_;
  fs::path base_;
  std::set<std::string> seen_;
};

void require_file(const fs::path& p, const std::string& what) {
  if (!fs::is_regular_file(p)) throw ConfigError(what + ": file not found: " + p.string());
}

void require_positive(long long v, const std::string& what) {
  if (v <= 0) throw ConfigError(what + " must be positive");
}

// ---------------------------------------------------------------------------
// Artifact IO

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw DataError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_atomic(const fs::path& p, const std::string& content) {
  fs::create_directories(p.parent_path());
  const fs::path tmp = p.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw DataError("cannot write " + tmp.string());
  }
  fs::rename(tmp, p);
}

std::vector<std::string> split_tab(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto tab = line.find('\t', start);
    out.emplace_back(line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return out;
}

// Rows of a TSV artifact, header checked and removed.
std::vector<std::vector<std::string>> read_tsv(const fs::path& p, const std::string& expected_header) {
  std::istringstream in(read_text(p));
  std::string line;
  if (!std::getline(in, line) || line != expected_header) {
    throw DataError(p.string() + ": unexpected header");
  }
  const auto columns = split_tab(expected_header).size();
  std::vector<std::vector<std::string>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto row = split_tab(line);
    if (row.size() != columns) throw ParseError(p.string(), line_no, "", "expected " + std::to_string(columns) + " columns");
    rows.push_back(std::move(row));
  }
  return rows;
}

double parse_double(const std::string& s, const std::string& where) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw DataError(where + ": bad number '" + s + "'");
  return v;
}

long long parse_int(const std::string& s, const std::string& where) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw DataError(where + ": bad integer '" + s + "'");
  return v;
}

const std::string kCandidatesHeader = "account\tdecision\ttrace";
const std::string kLabelsHeader = "account\tlabel\ttrace";
const std::string kPredictionsHeader = "account\tlabel\tscore";
const std::string kExpansionHeader = "account\tstage\tscore";
const std::string kStagesHeader = "stage\tfrontier\texamined\taccepted\trejected\tunavailable";
const std::string kNodesHeader = "account\tin_degree\tout_degree";
const std::string kEdgesHeader = "follower\tfollowee";
const std::string kCentralityHeader =
    "rank\taccount\tfused\tdegree\teigenvector\tpagerank\tbetweenness\tdegree_norm\teigenvector_norm\t"
    "pagerank_norm\tbetweenness_norm";
const std::string kTopHeader = "list\trank\taccount\tscore";
const std::string kCurvesHeader = "measure\trank\taccount\traw\tnormalized";
const std::string kYearsHeader = "series\tyear\tcount";
const std::string kEraHeader = "window\tk_requested\tk_used\tin_window\tfraction";
const std::string kTopicsSummaryHeader =
    "account\ttweets_used\ttweets_available\tdocuments\tvocabulary\tselected_k\tfitted_k\toverride\tcoherence\tstatus";

// ---------------------------------------------------------------------------
// Command context

class Context {
 public:
  Context(const PipelineConfig& cfg, std::string command, std::ostream& log)
      : cfg_(cfg), command_(std::move(command)), log_(log), start_(std::chrono::steady_clock::now()) {
    fs::create_directories(cfg_.output_dir);
    inputs_["config"] = cfg_.config_hash;
  }

  const PipelineConfig& cfg() const { return cfg_; }
  std::ostream& log() { return log_; }

  const Pseudonymizer& pseudonymizer() {
    if (!pseudonymizer_) pseudonymizer_.emplace(load_key());
    return *pseudonymizer_;
  }

  std::string alias(std::string_view raw_id) { return pseudonymizer()(raw_id); }

  const std::vector<AccountProfile>& profiles() {
    if (!profiles_) {
      record_input("snapshots", cfg_.snapshots);
      profiles_ = load_snapshots(cfg_.snapshots);
    }
    return *profiles_;
  }

  const AccountProfile& profile(const std::string& raw_id) {
    if (profile_index_.empty()) {
      for (const auto& p : profiles()) profile_index_.emplace(p.account_id, &p);
    }
    auto it = profile_index_.find(raw_id);
    if (it == profile_index_.end()) throw DataError("no snapshot for account " + alias(raw_id));
    return *it->second;
  }

  // Pseudonym -> raw id over the snapshot set.
  const std::string& raw_id(const std::string& alias_id) {
    if (!reverse_) reverse_ = pseudonym_index(pseudonymizer(), profiles());
    auto it = reverse_->find(alias_id);
    if (it == reverse_->end()) throw DataError("unknown account alias " + alias_id);
    return it->second;
  }

  const EdgeLoad& edges() {
    if (!edges_) {
      if (!cfg_.edges) throw ConfigError("paths.edges is required for " + command_);
      record_input("edges", *cfg_.edges);
      edges_ = load_edges(*cfg_.edges);
    }
    return *edges_;
  }

  const KeywordTable& table() {
    if (!table_) {
      auto list = [&](const std::optional<fs::path>& p, const char* name, const std::vector<std::string>& dflt) {
        if (!p) return dflt;
        record_input(name, *p);
        return load_term_list(*p);
      };
      table_.emplace(list(cfg_.keywords, "keywords", default_keywords()),
                     list(cfg_.hacker_terms, "hacker_terms", default_hacker_terms()),
                     list(cfg_.mottos, "mottos", default_motto_patterns()));
    }
    return *table_;
  }

  const FeatureExtractor& extractor() {
    if (!extractor_) {
      SentimentLexicon lex = SentimentLexicon::defaults();
      if (cfg_.sentiment) {
        record_input("sentiment", *cfg_.sentiment);
        lex = SentimentLexicon::load(*cfg_.sentiment);
      }
      extractor_.emplace(table(), std::move(lex));
    }
    return *extractor_;
  }

  fs::path artifact_path(const std::string& rel) const { return cfg_.output_dir / rel; }

  // Path of an artifact written by an earlier command, recorded as an input.
  fs::path upstream(const std::string& rel, const std::string& producer) {
    const fs::path p = artifact_path(rel);
    if (!fs::is_regular_file(p)) {
      throw DataError("missing artifact " + p.string() + " (run '" + producer + "' first)");
    }
    record_input("artifact:" + rel, p);
    return p;
  }

  void write(const std::string& rel, const std::string& content) {
    write_text_atomic(artifact_path(rel), content);
    artifacts_[rel] = sha256_hex(content);
  }

  void note(const std::string& key, json value) { notes_[key] = std::move(value); }

  void record_input(const std::string& name, const fs::path& p) {
    if (!fs::is_regular_file(p)) throw DataError("missing file: " + p.string());
    inputs_[name] = file_sha256_hex(p);
  }

  void finish() {
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    const fs::path manifest_path = artifact_path("manifest.json");
    json manifest = json::object();
    if (fs::is_regular_file(manifest_path)) {
      try {
        manifest = json::parse(read_text(manifest_path));
      } catch (const json::exception&) {
        log_ << "warning: replacing unreadable manifest\n";
        manifest = json::object();
      }
    }
    manifest["tool"] = "anonnet";
    manifest["tool_version"] = ANONNET_VERSION;
    json entry;
    entry["command"] = command_;
    entry["config_hash"] = cfg_.config_hash;
    entry["seed"] = cfg_.seed;
    entry["workers"] = cfg_.workers;
    entry["tool_version"] = ANONNET_VERSION;
    entry["artifact_format"] = kArtifactFormat;
    entry["feature_schema_version"] = kFeatureSchemaVersion;
    entry["inputs"] = inputs_;
    entry["artifacts"] = artifacts_;
    entry["wall_time_seconds"] = seconds;
    if (!notes_.empty()) entry["notes"] = notes_;
    manifest["commands"][command_] = std::move(entry);
    write_text_atomic(manifest_path, manifest.dump(2) + "\n");
  }

 private:
  std::string load_key() {
    std::string key;
    if (cfg_.key_file) {
      record_input("pseudonym_key", *cfg_.key_file);
      key = std::string(text::trim(read_text(*cfg_.key_file)));
    } else if (cfg_.key_env) {
      const char* v = std::getenv(cfg_.key_env->c_str());
      if (v == nullptr) throw ConfigError("environment variable " + *cfg_.key_env + " is not set");
      key = v;
    } else {
      throw ConfigError("no pseudonym key configured (pseudonym.key_file or pseudonym.key_env)");
    }
    if (key.empty()) throw ConfigError("pseudonym key is empty");
    return key;
  }

  const PipelineConfig& cfg_;
  std::string command_;
  std::ostream& log_;
  std::chrono::steady_clock::time_point start_;
  json inputs_ = json::object();
  json artifacts_ = json::object();
  json notes_ = json::object();
  std::optional<Pseudonymizer> pseudonymizer_;
  std::optional<std::vector<AccountProfile>> profiles_;
  std::unordered_map<std::string, const AccountProfile*> profile_index_;
  std::optional<std::unordered_map<std::string, std::string>> reverse_;
  std::optional<EdgeLoad> edges_;
  std::optional<KeywordTable> table_;
  std::optional<FeatureExtractor> extractor_;
};

std::string fmt(double v) { return text::format_double(v); }

// ---------------------------------------------------------------------------
// Shared artifact readers

struct LabelledAccount {
  std::string raw_id;
  ClassLabel label;
};

std::vector<LabelledAccount> read_labels(Context& ctx) {
  std::vector<LabelledAccount> out;
  const auto path = ctx.upstream("labels.tsv", "label");
  for (const auto& row : read_tsv(path, kLabelsHeader)) {
    ClassLabel label;
    if (row[1] == "positive") {
      label = ClassLabel::kPositive;
    } else if (row[1] == "negative") {
      label = ClassLabel::kNegative;
    } else {
      throw DataError(path.string() + ": unknown label '" + row[1] + "'");
    }
    out.push_back({ctx.raw_id(row[0]), label});
  }
  return out;
}

Dataset labelled_dataset(Context& ctx) {
  const auto labels = read_labels(ctx);
  std::vector<AccountProfile> profiles;
  for (const auto& l : labels) profiles.push_back(ctx.profile(l.raw_id));
  const auto features = extract_all(ctx.extractor(), profiles, ctx.cfg().workers);
  Dataset data(kFeatureCount);
  for (std::size_t i = 0; i < labels.size(); ++i) data.add(features[i].values, labels[i].label);
  return data;
}

ModelSpec model_spec(const ClassifierConfig& c) {
  if (c.model == "forest") return c.forest;
  if (c.model == "tree") return c.tree;
  throw ConfigError("classifier.model must be 'forest' or 'tree'");
}

Model read_model(Context& ctx) {
  const auto path = ctx.upstream("model.txt", "train");
  std::ifstream in(path);
  return load_model(in, path.string());
}

// Raw ids of the expansion result: seeds and accepted accounts.
std::vector<std::string> read_network_members(Context& ctx) {
  std::vector<std::string> out;
  for (const auto& row : read_tsv(ctx.upstream("expansion.tsv", "expand"), kExpansionHeader)) {
    out.push_back(ctx.raw_id(row[0]));
  }
  std::sort(out.begin(), out.end());
  return out;
}

FollowGraph read_graph(Context& ctx) {
  std::vector<std::string> nodes;
  for (const auto& row : read_tsv(ctx.upstream("graph_nodes.tsv", "graph"), kNodesHeader)) {
    nodes.push_back(ctx.raw_id(row[0]));
  }
  std::vector<FollowEdge> edges;
  for (const auto& row : read_tsv(ctx.upstream("graph_edges.tsv", "graph"), kEdgesHeader)) {
    edges.push_back({ctx.raw_id(row[0]), ctx.raw_id(row[1])});
  }
  return build_graph(edges, nodes).graph;
}

CentralityReport read_centrality(Context& ctx) {
  const auto path = ctx.upstream("centrality.tsv", "centrality");
  CentralityReport report;
  for (const auto& row : read_tsv(path, kCentralityHeader)) {
    CentralityRow r;
    const std::string where = path.string();
    r.rank = static_cast<std::size_t>(parse_int(row[0], where));
    r.account_id = ctx.raw_id(row[1]);
    r.fused = parse_double(row[2], where);
    for (std::size_t m = 0; m < 4; ++m) {
      r.raw[m] = parse_double(row[3 + m], where);
      r.normalized[m] = parse_double(row[7 + m], where);
    }
    report.rows.push_back(std::move(r));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Commands

void cmd_filter(Context& ctx) {
  std::ostringstream out;
  out << kCandidatesHeader << '\n';
  std::size_t candidates = 0;
  for (const auto& p : ctx.profiles()) {
    const auto d = filter_decision(p, ctx.table());
    if (d.label != Label::kCandidate) continue;
    ++candidates;
    out << ctx.alias(p.account_id) << '\t' << to_string(d.label) << '\t' << join_trace(d.rule_trace) << '\n';
  }
  ctx.write("candidates.tsv", out.str());
  ctx.note("snapshots", ctx.profiles().size());
  ctx.note("candidates", candidates);
  ctx.log() << "filter: " << candidates << " candidates of " << ctx.profiles().size() << " snapshots\n";
}

void cmd_label(Context& ctx) {
  std::ostringstream out;
  out << kLabelsHeader << '\n';
  std::size_t positives = 0;
  std::size_t total = 0;
  for (const auto& row : read_tsv(ctx.upstream("candidates.tsv", "filter"), kCandidatesHeader)) {
    const auto& p = ctx.profile(ctx.raw_id(row[0]));
    auto d = positive_label_rule(p, ctx.table());
    ++total;
    if (d.label == Label::kPositive) ++positives;
    out << row[0] << '\t' << to_string(d.label) << '\t' << join_trace(d.rule_trace) << '\n';
  }
  ctx.write("labels.tsv", out.str());
  ctx.note("positives", positives);
  ctx.note("negatives", total - positives);
  ctx.log() << "label: " << positives << " positive, " << (total - positives) << " negative\n";
}

void cmd_train(Context& ctx) {
  const Dataset data = labelled_dataset(ctx);
  const auto spec = model_spec(ctx.cfg().classifier);
  const Model model = train_model(data, spec, ctx.cfg().seed, ctx.cfg().workers);
  std::ostringstream out;
  save_model(out, model);
  ctx.write("model.txt", out.str());
  ctx.note("model", describe(spec));
  ctx.note("examples", data.size());
  ctx.log() << "train: " << describe(spec) << " on " << data.size() << " examples\n";
}

void cmd_evaluate(Context& ctx) {
  const Dataset data = labelled_dataset(ctx);
  const auto& c = ctx.cfg().classifier;
  std::vector<EvalReport> reports;
  for (const ModelSpec& spec : {ModelSpec{c.forest}, ModelSpec{c.tree}}) {
    reports.push_back(cross_validate(data, spec, c.folds, ctx.cfg().seed, ctx.cfg().workers));
  }
  ctx.write("evaluation.tsv", report_rows(reports));
  std::string text;
  for (const auto& r : reports) text += format_report(r) + "\n";
  ctx.write("evaluation.txt", text);
  for (const auto& r : reports) {
    ctx.note("f1:" + r.model_name, r.f1);
    ctx.log() << "evaluate: " << r.model_name << " weighted f1 " << fmt(r.f1) << '\n';
  }
}

void cmd_classify(Context& ctx) {
  const Model model = read_model(ctx);
  const auto& profiles = ctx.profiles();
  const auto features = extract_all(ctx.extractor(), profiles, ctx.cfg().workers);
  std::vector<Prediction> predictions(profiles.size());
  parallel_for(profiles.size(), ctx.cfg().workers,
               [&](std::size_t i) { predictions[i] = predict(model, features[i]); });
  std::ostringstream out;
  out << kPredictionsHeader << '\n';
  std::size_t positives = 0;
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    if (predictions[i].label == ClassLabel::kPositive) ++positives;
    out << ctx.alias(profiles[i].account_id) << '\t' << to_string(predictions[i].label) << '\t'
        << fmt(predictions[i].score) << '\n';
  }
  ctx.write("predictions.tsv", out.str());
  ctx.note("positives", positives);
  ctx.log() << "classify: " << positives << " of " << profiles.size() << " predicted positive\n";
}

void cmd_expand(Context& ctx) {
  const Model model = read_model(ctx);
  std::vector<std::string> seeds;
  for (const auto& l : read_labels(ctx)) {
    if (l.label == ClassLabel::kPositive) seeds.push_back(l.raw_id);
  }
  const SnapshotAccountSource source(ctx.profiles(), ctx.edges().edges);
  const SnowballRun run =
      snowball_expand(seeds, source, model, ctx.extractor(), ctx.cfg().expansion_stages, ctx.cfg().workers);

  std::vector<std::pair<std::string, std::string>> rows;  // alias, line
  for (const auto& s : run.seeds) rows.emplace_back(ctx.alias(s), "0\t-");
  for (const auto& [id, stage] : run.accepted_stage) {
    rows.emplace_back(ctx.alias(id), std::to_string(stage) + "\t" + fmt(run.scores.at(id)));
  }
  std::sort(rows.begin(), rows.end());
  std::ostringstream out;
  out << kExpansionHeader << '\n';
  for (const auto& [alias, rest] : rows) out << alias << '\t' << rest << '\n';
  ctx.write("expansion.tsv", out.str());

  std::ostringstream stages;
  stages << kStagesHeader << '\n';
  for (const auto& st : run.stages) {
    stages << st.stage << '\t' << st.frontier.size() << '\t' << st.examined.size() << '\t' << st.accepted.size()
           << '\t' << st.rejected << '\t' << st.unavailable << '\n';
  }
  ctx.write("expansion_stages.tsv", stages.str());
  ctx.note("seeds", run.seeds.size());
  ctx.note("accepted", run.accepted_stage.size());
  ctx.note("stages_completed", run.stages.size());
  ctx.log() << "expand: " << run.seeds.size() << " seeds, " << run.accepted_stage.size() << " accepted over "
            << run.stages.size() << " stage(s)\n";
  if (run.failure) {
    ctx.note("failure", "stage " + std::to_string(run.failure->stage) + ": " + run.failure->message);
    ctx.finish();
    throw SourceError("expansion stopped in stage " + std::to_string(run.failure->stage) + ": " +
                      run.failure->message + " (completed stages kept)");
  }
}

void cmd_graph(Context& ctx) {
  const auto members = read_network_members(ctx);
  const auto& load = ctx.edges();
  const GraphBuild build = build_graph(load.edges, members);
  const FollowGraph& g = build.graph;
  std::ostringstream nodes;
  nodes << kNodesHeader << '\n';
  for (NodeIndex v = 0; v < g.size(); ++v) {
    nodes << ctx.alias(g.id(v)) << '\t' << g.in(v).size() << '\t' << g.out(v).size() << '\n';
  }
  std::ostringstream edges;
  edges << kEdgesHeader << '\n';
  for (const auto& [u, v] : g.edges()) edges << ctx.alias(g.id(u)) << '\t' << ctx.alias(g.id(v)) << '\n';
  ctx.write("graph_nodes.tsv", nodes.str());
  ctx.write("graph_edges.tsv", edges.str());
  ctx.note("nodes", g.size());
  ctx.note("edges", g.edge_count());
  ctx.note("edges_outside_network", build.dropped_edges);
  ctx.note("self_loops_dropped", load.self_loops_dropped);
  ctx.note("duplicate_edges_dropped", load.duplicates_dropped);
  ctx.log() << "graph: " << g.size() << " nodes, " << g.edge_count() << " edges\n";
}

void cmd_centrality(Context& ctx) {
  const FollowGraph g = read_graph(ctx);
  const auto result = compute_centrality(g, ctx.cfg().centrality, ctx.cfg().workers);
  std::ostringstream out;
  out << kCentralityHeader << '\n';
  for (const auto& r : result.report.rows) {
    out << r.rank << '\t' << ctx.alias(r.account_id) << '\t' << fmt(r.fused);
    for (double v : r.raw) out << '\t' << fmt(v);
    for (double v : r.normalized) out << '\t' << fmt(v);
    out << '\n';
  }
  ctx.write("centrality.tsv", out.str());
  ctx.log() << "centrality: scored " << g.size() << " accounts\n";
}

void cmd_rank(Context& ctx) {
  const CentralityReport report = read_centrality(ctx);
  const std::size_t k = ctx.cfg().rank_top_k;
  std::ostringstream top;
  top << kTopHeader << '\n';
  for (std::size_t i = 0; i < std::min(k, report.rows.size()); ++i) {
    const auto& r = report.rows[i];
    top << "fused\t" << r.rank << '\t' << ctx.alias(r.account_id) << '\t' << fmt(r.fused) << '\n';
  }
  const auto curves = score_curves(report, std::max(k, ctx.cfg().curve_limit));
  for (const auto& p : curves) {
    if (p.rank > k) continue;
    top << to_string(p.measure) << '\t' << p.rank << '\t' << ctx.alias(p.account_id) << '\t' << fmt(p.raw) << '\n';
  }
  std::ostringstream curve;
  curve << kCurvesHeader << '\n';
  for (const auto& p : curves) {
    if (p.rank > ctx.cfg().curve_limit) continue;
    curve << to_string(p.measure) << '\t' << p.rank << '\t' << ctx.alias(p.account_id) << '\t' << fmt(p.raw)
          << '\t' << fmt(p.normalized) << '\n';
  }
  ctx.write("top.tsv", top.str());
  ctx.write("score_curves.tsv", curve.str());
  if (k > report.rows.size()) {
    ctx.log() << "warning: top-k " << k << " exceeds " << report.rows.size() << " ranked accounts; clamped\n";
    ctx.note("top_k_clamped_to", report.rows.size());
  }
  if (!report.rows.empty()) ctx.log() << "rank: top account " << ctx.alias(report.rows.front().account_id) << '\n';
}

void cmd_temporal(Context& ctx) {
  const CentralityReport report = read_centrality(ctx);
  std::vector<AccountProfile> profiles;
  std::vector<std::string> ranked;
  for (const auto& r : report.rows) {
    ranked.push_back(r.account_id);
    profiles.push_back(ctx.profile(r.account_id));
  }
  const auto& cfg = ctx.cfg();
  const auto t = temporal_report(profiles, ranked, cfg.temporal_top_k, cfg.temporal_from, cfg.temporal_to);
  std::ostringstream years;
  years << kYearsHeader << '\n';
  for (const auto& [y, n] : t.created_per_year) years << "created\t" << y << '\t' << n << '\n';
  for (const auto& [y, n] : t.last_tweet_per_year) years << "last_tweet\t" << y << '\t' << n << '\n';
  if (t.last_tweet_unknown > 0) years << "last_tweet\tunknown\t" << t.last_tweet_unknown << '\n';
  std::ostringstream era;
  era << kEraHeader << '\n';
  for (const auto& e : t.era) {
    era << t.window_from << '-' << t.window_to << '\t' << e.k_requested << '\t' << e.k_used << '\t' << e.in_window
        << '\t' << fmt(e.fraction) << '\n';
    if (e.k_used < e.k_requested) {
      ctx.log() << "warning: top-" << e.k_requested << " clamped to " << e.k_used << " accounts\n";
    }
  }
  ctx.write("temporal_years.tsv", years.str());
  ctx.write("temporal_era.tsv", era.str());
  ctx.log() << "temporal: " << profiles.size() << " accounts\n";
}

void cmd_subgraph(Context& ctx) {
  const FollowGraph g = read_graph(ctx);
  const CentralityReport report = read_centrality(ctx);
  Scores fused(g.size(), 0.0);
  for (const auto& r : report.rows) {
    const auto v = g.index_of(r.account_id);
    if (!v) throw DataError("ranked account missing from graph: " + ctx.alias(r.account_id));
    fused[*v] = r.fused;
  }
  const Subgraph sub = top_k_subgraph(g, fused, ctx.cfg().subgraph_k);
  if (sub.clamped) {
    ctx.log() << "warning: subgraph k " << ctx.cfg().subgraph_k << " exceeds " << g.size() << " nodes; clamped\n";
    ctx.note("k_clamped_to", g.size());
  }
  std::ostringstream nodes;
  std::ostringstream edges;
  write_subgraph_csv(nodes, edges, sub, [&](const std::string& id) { return ctx.alias(id); });
  ctx.write("subgraph_nodes.csv", nodes.str());
  ctx.write("subgraph_edges.csv", edges.str());
  ctx.log() << "subgraph: " << sub.ids.size() << " nodes, " << sub.edges.size() << " edges\n";
}

void cmd_topics(Context& ctx) {
  const auto& cfg = ctx.cfg();
  const auto& tc = cfg.topics;
  if (!cfg.tweets) throw ConfigError("paths.tweets is required for topics");

  std::vector<std::string> accounts;
  if (!tc.account_ids.empty()) {
    for (const auto& id : tc.account_ids) {
      ctx.profile(id);
      accounts.push_back(id);
    }
  } else {
    const auto report = read_centrality(ctx);
    for (std::size_t i = 0; i < std::min(tc.accounts, report.rows.size()); ++i) {
      accounts.push_back(report.rows[i].account_id);
    }
  }

  std::map<std::string, int> overrides;  // raw id -> K
  for (const auto& [key, k] : tc.overrides) {
    require_positive(k, "topics.overrides." + key);
    const bool is_alias = key.starts_with("acct_");
    overrides[is_alias ? ctx.raw_id(key) : key] = k;
  }

  ctx.record_input("tweets", *cfg.tweets);
  const auto tweets = load_tweets(*cfg.tweets);
  std::map<std::string, std::vector<TweetRecord>> by_account;
  for (const auto& t : tweets) by_account[t.account_id].push_back(t);

  PreprocessOptions popts;
  if (tc.stopwords) {
    ctx.record_input("stopwords", *tc.stopwords);
    popts.stopwords = load_stopwords(*tc.stopwords);
  }
  if (tc.contractions) {
    ctx.record_input("contractions", *tc.contractions);
    popts.contractions = load_contractions(*tc.contractions);
  }
  popts.merge_bigrams = tc.merge_bigrams;
  popts.bigram_min_count = tc.bigram_min_count;
  popts.bigram_min_pmi = tc.bigram_min_pmi;

  std::ostringstream summary;
  summary << kTopicsSummaryHeader << '\n';
  json override_notes = json::object();
  std::size_t modelled = 0;
  for (const auto& raw : accounts) {
    const std::string alias = ctx.alias(raw);
    const auto& own = by_account[raw];
    const auto selection = select_recent(own, tc.tweet_limit);
    if (selection.tweets.size() < tc.tweet_limit) {
      ctx.log() << "topics: " << alias << " has " << selection.tweets.size() << " tweets (limit "
                << tc.tweet_limit << ")\n";
    }
    const TokenizedCorpus corpus = preprocess(selection.tweets, popts);
    auto skip = [&](const std::string& status) {
      ctx.log() << "warning: " << alias << ": " << status << "\n";
      summary << alias << '\t' << selection.tweets.size() << '\t' << selection.available << '\t'
              << corpus.documents.size() << '\t' << corpus.vocabulary.size() << "\t-\t-\t-\t-\t" << status << '\n';
    };
    if (corpus.total_tokens() == 0) {
      skip("empty corpus");
      continue;
    }
    if (corpus.vocabulary.size() < tc.top_n) {
      skip("vocabulary smaller than top_n");
      continue;
    }
    if (corpus.total_tokens() < static_cast<std::size_t>(tc.grid.back())) {
      skip("fewer tokens than the largest topic count");
      continue;
    }

    SweepOptions sopts;
    sopts.grid = tc.grid;
    sopts.seeds_per_k = tc.seeds_per_k;
    sopts.iterations = tc.iterations;
    sopts.beta = tc.beta;
    sopts.top_n = tc.top_n;
    sopts.window = tc.window;
    sopts.epsilon = tc.epsilon;
    sopts.seed = cfg.seed;
    sopts.workers = cfg.workers;
    SweepResult sweep = sweep_topic_numbers(corpus, sopts);

    const auto ov = overrides.find(raw);
    const int fitted_k = ov != overrides.end() ? ov->second : sweep.selected_topics;
    std::optional<TopicModel> model;
    for (auto& m : sweep.models) {
      if (m.topics() == fitted_k) model = std::move(m);
    }
    if (!model) {
      LdaParams p;
      p.topics = fitted_k;
      p.iterations = tc.iterations;
      p.beta = tc.beta;
      p.seed = cfg.seed;
      model = lda_fit(corpus, p);
      model->coherence = uci_coherence(*model, corpus, tc.top_n, tc.window, tc.epsilon);
    }
    if (ov != overrides.end()) {
      override_notes[alias] = {{"selected", sweep.selected_topics}, {"used", fitted_k}};
    }

    const std::string dir = "topics/" + alias + "/";
    ctx.write(dir + "coherence.tsv", format_coherence_curve(sweep));
    ctx.write(dir + "topics.txt", format_topic_report(alias, *model, corpus, tc.top_n));
    summary << alias << '\t' << selection.tweets.size() << '\t' << selection.available << '\t'
            << corpus.documents.size() << '\t' << corpus.vocabulary.size() << '\t' << sweep.selected_topics << '\t'
            << fitted_k << '\t' << (ov != overrides.end() ? "yes" : "no") << '\t' << fmt(*model->coherence)
            << "\tok\n";
    ++modelled;
    ctx.log() << "topics: " << alias << " selected K " << sweep.selected_topics << ", fitted K " << fitted_k << '\n';
  }
  ctx.write("topics/summary.tsv", summary.str());
  ctx.note("accounts", accounts.size());
  ctx.note("modelled", modelled);
  if (!override_notes.empty()) ctx.note("overrides", override_notes);
  if (!accounts.empty() && modelled == 0) throw DataError("no account had a usable tweet corpus");
}

void cmd_report(Context& ctx) {
  std::ostringstream out;
  auto section = [&](const std::string& title, const std::string& rel) {
    const fs::path p = ctx.artifact_path(rel);
    if (!fs::is_regular_file(p)) return;
    ctx.record_input("artifact:" + rel, p);
    out << "== " << title << " (" << rel << ")\n" << read_text(p) << '\n';
  };
  out << "anonnet " << ANONNET_VERSION << " report\n\n";
  if (fs::is_regular_file(ctx.artifact_path("labels.tsv"))) {
    std::size_t positives = 0;
    std::size_t negatives = 0;
    for (const auto& row : read_tsv(ctx.upstream("labels.tsv", "label"), kLabelsHeader)) {
      ++(row[1] == "positive" ? positives : negatives);
    }
    out << "== Labels (labels.tsv)\npositive\t" << positives << "\nnegative\t" << negatives << "\n\n";
  }
  section("Classifier evaluation", "evaluation.txt");
  section("Expansion stages", "expansion_stages.tsv");
  section("Top accounts", "top.tsv");
  section("Account creation and last-tweet years", "temporal_years.tsv");
  section("Era fractions", "temporal_era.tsv");
  section("Topic summary", "topics/summary.tsv");
  const fs::path topics_dir = ctx.artifact_path("topics");
  if (fs::is_directory(topics_dir)) {
    std::vector<fs::path> dirs;
    for (const auto& e : fs::directory_iterator(topics_dir)) {
      if (e.is_directory()) dirs.push_back(e.path().filename());
    }
    std::sort(dirs.begin(), dirs.end());
    for (const auto& d : dirs) section("Topics " + d.string(), "topics/" + d.string() + "/topics.txt");
  }
  ctx.write("report.txt", out.str());
  ctx.log() << "report: " << ctx.artifact_path("report.txt").string() << '\n';
}

using Command = std::function<void(Context&)>;

const std::vector<std::pair<std::string, Command>>& command_table() {
  static const std::vector<std::pair<std::string, Command>> kTable{
      {"filter", cmd_filter},         {"label", cmd_label},     {"train", cmd_train},
      {"evaluate", cmd_evaluate},     {"classify", cmd_classify}, {"expand", cmd_expand},
      {"graph", cmd_graph},           {"centrality", cmd_centrality}, {"rank", cmd_rank},
      {"temporal", cmd_temporal},     {"subgraph", cmd_subgraph}, {"topics", cmd_topics},
      {"report", cmd_report},
  };
  return kTable;
}

}  // namespace

// ---------------------------------------------------------------------------
// Config loading

PipelineConfig load_config(const fs::path& path, const ConfigOverrides& overrides) {
  if (!fs::is_regular_file(path)) throw ConfigError("config file not found: " + path.string());
  json doc;
  try {
    doc = json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  PipelineConfig cfg;
  cfg.config_path = path;
  const fs::path base = fs::absolute(path).parent_path();
  ConfigReader root(doc, "config", base);

  std::optional<std::uint64_t> seed;
  root.get("seed", seed);
  root.get("workers", cfg.workers);

  {
    auto paths = root.child("paths");
    if (!paths.has("snapshots")) throw ConfigError("paths.snapshots is required");
    paths.path("snapshots", cfg.snapshots);
    paths.path("edges", cfg.edges);
    paths.path("tweets", cfg.tweets);
    std::optional<fs::path> out;
    paths.path("output_dir", out);
    cfg.output_dir = out.value_or(base / "out");
    paths.finish();
  }
  {
    auto p = root.child("pseudonym");
    p.path("key_file", cfg.key_file);
    p.get("key_env", cfg.key_env);
    p.finish();
  }
  {
    auto l = root.child("lexicon");
    l.path("keywords", cfg.keywords);
    l.path("hacker_terms", cfg.hacker_terms);
    l.path("mottos", cfg.mottos);
    l.path("sentiment", cfg.sentiment);
    l.finish();
  }
  {
    auto c = root.child("classifier");
    c.get("model", cfg.classifier.model);
    c.get("folds", cfg.classifier.folds);
    c.get("trees", cfg.classifier.forest.trees);
    c.get("features_per_split", cfg.classifier.forest.features_per_split);
    c.get("bootstrap", cfg.classifier.forest.bootstrap);
    c.get("max_depth", cfg.classifier.forest.max_depth);
    c.get("min_samples_leaf", cfg.classifier.forest.min_samples_leaf);
    cfg.classifier.tree.max_depth = cfg.classifier.forest.max_depth;
    cfg.classifier.tree.min_samples_leaf = cfg.classifier.forest.min_samples_leaf;
    c.finish();
    model_spec(cfg.classifier);
    require_positive(cfg.classifier.forest.trees, "classifier.trees");
    if (cfg.classifier.folds < 2) throw ConfigError("classifier.folds must be >= 2");
  }
  {
    auto e = root.child("expansion");
    e.get("stages", cfg.expansion_stages);
    e.finish();
    if (cfg.expansion_stages < 0) throw ConfigError("expansion.stages must be >= 0");
  }
  {
    auto c = root.child("centrality");
    c.get("pagerank_damping", cfg.centrality.pagerank.damping);
    c.get("pagerank_tol", cfg.centrality.pagerank.tol);
    c.get("pagerank_max_iter", cfg.centrality.pagerank.max_iter);
    c.get("eigen_tol", cfg.centrality.eigen.tol);
    c.get("eigen_max_iter", cfg.centrality.eigen.max_iter);
    std::string direction = "incoming";
    c.get("eigen_direction", direction);
    if (direction == "incoming") {
      cfg.centrality.eigen.direction = EigenDirection::kIncoming;
    } else if (direction == "outgoing") {
      cfg.centrality.eigen.direction = EigenDirection::kOutgoing;
    } else {
      throw ConfigError("centrality.eigen_direction must be 'incoming' or 'outgoing'");
    }
    c.get("top_k", cfg.rank_top_k);
    c.get("curve_limit", cfg.curve_limit);
    c.get("subgraph_k", cfg.subgraph_k);
    c.finish();
    const double d = cfg.centrality.pagerank.damping;
    if (!(d > 0.0 && d < 1.0)) throw ConfigError("centrality.pagerank_damping must lie in (0, 1)");
    require_positive(static_cast<long long>(cfg.rank_top_k), "centrality.top_k");
  }
  {
    auto t = root.child("temporal");
    t.get("top_k", cfg.temporal_top_k);
    t.get("from", cfg.temporal_from);
    t.get("to", cfg.temporal_to);
    t.finish();
    if (cfg.temporal_from > cfg.temporal_to) throw ConfigError("temporal.from must not exceed temporal.to");
  }
  {
    auto t = root.child("topics");
    auto& tc = cfg.topics;
    t.get("accounts", tc.accounts);
    t.get("account_ids", tc.account_ids);
    t.get("tweet_limit", tc.tweet_limit);
    t.get("grid", tc.grid);
    t.get("seeds_per_k", tc.seeds_per_k);
    t.get("iterations", tc.iterations);
    t.get("beta", tc.beta);
    t.get("top_n", tc.top_n);
    t.get("window", tc.window);
    t.get("epsilon", tc.epsilon);
    t.get("overrides", tc.overrides);
    t.path("stopwords", tc.stopwords);
    t.path("contractions", tc.contractions);
    t.get("merge_bigrams", tc.merge_bigrams);
    t.get("bigram_min_count", tc.bigram_min_count);
    t.get("bigram_min_pmi", tc.bigram_min_pmi);
    t.finish();
    if (tc.grid.empty()) throw ConfigError("topics.grid is empty");
    for (std::size_t i = 0; i < tc.grid.size(); ++i) {
      require_positive(tc.grid[i], "topics.grid entries");
      if (i > 0 && tc.grid[i] <= tc.grid[i - 1]) throw ConfigError("topics.grid must be strictly increasing");
    }
    require_positive(tc.seeds_per_k, "topics.seeds_per_k");
    require_positive(static_cast<long long>(tc.tweet_limit), "topics.tweet_limit");
    require_positive(static_cast<long long>(tc.top_n), "topics.top_n");
    require_positive(static_cast<long long>(tc.window), "topics.window");
    if (tc.iterations < 0) throw ConfigError("topics.iterations must be >= 0");
  }
  root.finish();

  if (overrides.seed) seed = overrides.seed;
  if (!seed) throw ConfigError("seed must be set in the config or with --seed");
  cfg.seed = *seed;
  if (overrides.workers) cfg.workers = *overrides.workers;
  if (cfg.workers < 1) throw ConfigError("workers must be >= 1");
  if (overrides.output_dir) cfg.output_dir = fs::absolute(*overrides.output_dir).lexically_normal();

  require_file(cfg.snapshots, "paths.snapshots");
  for (const auto* p : {&cfg.edges, &cfg.tweets, &cfg.key_file, &cfg.keywords, &cfg.hacker_terms, &cfg.mottos,
                        &cfg.sentiment, &cfg.topics.stopwords, &cfg.topics.contractions}) {
    if (*p) require_file(**p, "config");
  }
  if (fs::exists(cfg.output_dir) && !fs::is_directory(cfg.output_dir)) {
    throw ConfigError("output dir is not a directory: " + cfg.output_dir.string());
  }

  // Worker count and output location do not change results and stay out of the hash.
  json effective = doc;
  effective["seed"] = cfg.seed;
  effective.erase("workers");
  cfg.config_hash = sha256_hex(effective.dump());
  return cfg;
}

const std::vector<std::string>& pipeline_commands() {
  static const std::vector<std::string> kNames = [] {
    std::vector<std::string> names;
    for (const auto& [name, fn] : command_table()) names.push_back(name);
    return names;
  }();
  return kNames;
}

void run_command(std::string_view command, const PipelineConfig& config, std::ostream& log) {
  for (const auto& [name, fn] : command_table()) {
    if (name != command) continue;
    Context ctx(config, name, log);
    fn(ctx);
    ctx.finish();
    return;
  }
  throw ConfigError("unknown command '" + std::string(command) + "'");
}

}  // namespace anonnet
