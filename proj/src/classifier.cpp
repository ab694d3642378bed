#include "anonnet/classifier.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "anonnet/error.hpp"
#include "anonnet/parallel.hpp"
#include "anonnet/random.hpp"
#include "anonnet/text.hpp"

namespace anonnet {

namespace {

__extension__ typedef unsigned __int128 u128;

constexpr std::string_view kModelMagic = "anonnet-model";
constexpr int kModelVersion = 1;

std::size_t idx(ClassLabel l) { return static_cast<std::size_t>(l); }

ClassLabel label_for_score(double score) {
  return score >= 0.5 ? ClassLabel::kPositive : ClassLabel::kNegative;
}

// Split quality as the exact rational (S_L / n_L + S_R / n_R), where S is the
// sum of squared class counts. Maximising it minimises weighted Gini.
struct SplitScore {
  u128 num = 0;
  u128 den = 1;

  static SplitScore of(const std::array<std::uint64_t, 2>& left, const std::array<std::uint64_t, 2>& right) {
    const u128 nl = left[0] + left[1];
    const u128 nr = right[0] + right[1];
    const u128 sl = u128(left[0]) * left[0] + u128(left[1]) * left[1];
    const u128 sr = u128(right[0]) * right[0] + u128(right[1]) * right[1];
    return {sl * nr + sr * nl, nl * nr};
  }

  // Compares by cross-multiplication; operands stay below n^5.
  int compare(const SplitScore& o) const {
    const u128 a = num * o.den;
    const u128 b = o.num * den;
    return a < b ? -1 : (a > b ? 1 : 0);
  }
};

struct Candidate {
  bool valid = false;
  int feature = -1;
  double threshold = 0.0;
  SplitScore score;

  bool better_than(const Candidate& o) const {
    if (!o.valid) return valid;
    if (!valid) return false;
    const int c = score.compare(o.score);
    if (c != 0) return c > 0;
    if (feature != o.feature) return feature < o.feature;
    return threshold < o.threshold;
  }
};

class TreeBuilder {
 public:
  TreeBuilder(const Dataset& data, const TreeParams& params, rng::Engine* engine)
      : data_(data), params_(params), engine_(engine) {}

  std::vector<DecisionTree::Node> build(std::vector<std::uint32_t> rows) {
    nodes_.clear();
    grow(rows, 0);
    return std::move(nodes_);
  }

 private:
  std::array<std::uint64_t, 2> counts_of(const std::vector<std::uint32_t>& rows) const {
    std::array<std::uint64_t, 2> c{};
    for (auto r : rows) ++c[idx(data_.label(r))];
    return c;
  }

  int grow(std::vector<std::uint32_t>& rows, int depth) {
    const int self = static_cast<int>(nodes_.size());
    nodes_.push_back({});
    nodes_[self].counts = counts_of(rows);
    const auto counts = nodes_[self].counts;

    const auto min_leaf = static_cast<std::size_t>(std::max(params_.min_samples_leaf, 1));
    const bool pure = counts[0] == 0 || counts[1] == 0;
    const bool depth_reached = params_.max_depth > 0 && depth >= params_.max_depth;
    if (pure || depth_reached || rows.size() < 2 * min_leaf) return self;

    const Candidate best = find_split(rows, min_leaf);
    if (!best.valid) return self;

    std::vector<std::uint32_t> left;
    std::vector<std::uint32_t> right;
    for (auto r : rows) {
      (data_.row(r)[static_cast<std::size_t>(best.feature)] <= best.threshold ? left : right).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();

    nodes_[self].feature = best.feature;
    nodes_[self].threshold = best.threshold;
    const int l = grow(left, depth + 1);
    nodes_[self].left = l;
    const int r = grow(right, depth + 1);
    nodes_[self].right = r;
    return self;
  }

  // Best split on one feature; `constant` reports whether the feature takes a
  // single value in this node.
  Candidate scan_feature(const std::vector<std::uint32_t>& rows, int feature, std::size_t min_leaf,
                         bool& constant) {
    scratch_.clear();
    for (auto r : rows) scratch_.emplace_back(data_.row(r)[static_cast<std::size_t>(feature)], data_.label(r));
    std::sort(scratch_.begin(), scratch_.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    constant = scratch_.front().first == scratch_.back().first;

    const auto total = counts_of(rows);
    std::array<std::uint64_t, 2> left{};
    Candidate best;
    for (std::size_t i = 0; i + 1 < scratch_.size(); ++i) {
      ++left[idx(scratch_[i].second)];
      if (scratch_[i].first == scratch_[i + 1].first) continue;
      const std::size_t n_left = i + 1;
      if (n_left < min_leaf || scratch_.size() - n_left < min_leaf) continue;
      const std::array<std::uint64_t, 2> right{total[0] - left[0], total[1] - left[1]};
      double threshold = scratch_[i].first + (scratch_[i + 1].first - scratch_[i].first) / 2.0;
      if (!(threshold < scratch_[i + 1].first)) threshold = scratch_[i].first;
      Candidate c{true, feature, threshold, SplitScore::of(left, right)};
      if (c.better_than(best)) best = c;
    }
    return best;
  }

  Candidate find_split(const std::vector<std::uint32_t>& rows, std::size_t min_leaf) {
    const auto d = static_cast<int>(data_.n_features());
    const int mtry = params_.features_per_split;
    Candidate best;
    bool constant = false;

    if (mtry <= 0 || mtry >= d || engine_ == nullptr) {
      for (int f = 0; f < d; ++f) {
        const Candidate c = scan_feature(rows, f, min_leaf, constant);
        if (c.better_than(best)) best = c;
      }
      return best;
    }

    // Draw features without replacement until `mtry` non-constant features have
    // been examined or all features are exhausted.
    order_.resize(static_cast<std::size_t>(d));
    std::iota(order_.begin(), order_.end(), 0);
    int examined = 0;
    for (int drawn = 0; drawn < d && examined < mtry; ++drawn) {
      const auto j = drawn + static_cast<int>(rng::uniform_below(*engine_, static_cast<std::uint64_t>(d - drawn)));
      std::swap(order_[static_cast<std::size_t>(drawn)], order_[static_cast<std::size_t>(j)]);
      const int f = order_[static_cast<std::size_t>(drawn)];
      const Candidate c = scan_feature(rows, f, min_leaf, constant);
      if (!constant) ++examined;
      if (c.better_than(best)) best = c;
    }
    return best;
  }

  const Dataset& data_;
  TreeParams params_;
  rng::Engine* engine_;
  std::vector<DecisionTree::Node> nodes_;
  std::vector<std::pair<double, ClassLabel>> scratch_;
  std::vector<int> order_;
};

void require_nonempty(const Dataset& data) {
  if (data.empty()) throw DataError("cannot train on an empty dataset");
}

void check_width(std::size_t expected, std::size_t got) {
  if (expected != got) {
    throw DataError("feature length mismatch: model expects " + std::to_string(expected) + ", got " +
                    std::to_string(got));
  }
}

double safe_div(double a, double b) { return b == 0.0 ? 0.0 : a / b; }

}  // namespace

std::string_view to_string(ClassLabel label) {
  return label == ClassLabel::kPositive ? "positive" : "negative";
}

// ---------------------------------------------------------------------------
// Dataset

Dataset::Dataset(std::size_t n_features) : n_features_(n_features) {}

void Dataset::add(std::span<const double> row, ClassLabel label) {
  check_width(n_features_, row.size());
  values_.insert(values_.end(), row.begin(), row.end());
  labels_.push_back(label);
}

std::array<std::size_t, 2> Dataset::class_counts() const {
  std::array<std::size_t, 2> c{};
  for (auto l : labels_) ++c[idx(l)];
  return c;
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  Dataset out(n_features_);
  for (auto r : rows) out.add(row(r), label(r));
  return out;
}

Dataset make_dataset(std::span<const LabeledExample> examples) {
  Dataset data(kFeatureCount);
  for (const auto& e : examples) data.add(e.features.values, e.label);
  return data;
}

double gini(std::span<const std::uint64_t> class_counts) {
  double total = 0.0;
  for (auto c : class_counts) total += static_cast<double>(c);
  if (total == 0.0) throw DataError("gini impurity of an empty node");
  double sum_sq = 0.0;
  for (auto c : class_counts) {
    const double p = static_cast<double>(c) / total;
    sum_sq += p * p;
  }
  return 1.0 - sum_sq;
}

// ---------------------------------------------------------------------------
// Decision tree

DecisionTree::DecisionTree(std::size_t n_features, TreeParams params, std::vector<Node> nodes)
    : n_features_(n_features), params_(params), nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw DataError("decision tree has no nodes");
  for (const auto& n : nodes_) {
    if (n.is_leaf()) {
      if (n.counts[0] + n.counts[1] == 0) throw DataError("decision tree leaf with no class counts");
      continue;
    }
    const auto size = static_cast<int>(nodes_.size());
    if (static_cast<std::size_t>(n.feature) >= n_features_ || n.left <= 0 || n.right <= 0 || n.left >= size ||
        n.right >= size) {
      throw DataError("decision tree node out of range");
    }
  }
}

const DecisionTree::Node& DecisionTree::leaf_for(std::span<const double> x) const {
  check_width(n_features_, x.size());
  const Node* n = &nodes_.front();
  while (!n->is_leaf()) {
    n = &nodes_[static_cast<std::size_t>(x[static_cast<std::size_t>(n->feature)] <= n->threshold ? n->left
                                                                                                   : n->right)];
  }
  return *n;
}

Prediction DecisionTree::predict(std::span<const double> x) const {
  const Node& leaf = leaf_for(x);
  const double score =
      static_cast<double>(leaf.counts[1]) / static_cast<double>(leaf.counts[0] + leaf.counts[1]);
  return {label_for_score(score), score};
}

int DecisionTree::depth() const {
  std::vector<int> d(nodes_.size(), 0);
  int best = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    best = std::max(best, d[i]);
    if (!nodes_[i].is_leaf()) {
      d[static_cast<std::size_t>(nodes_[i].left)] = d[i] + 1;
      d[static_cast<std::size_t>(nodes_[i].right)] = d[i] + 1;
    }
  }
  return best;
}

std::size_t DecisionTree::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.is_leaf(); }));
}

DecisionTree train_tree(const Dataset& data, const TreeParams& params) {
  require_nonempty(data);
  std::vector<std::uint32_t> rows(data.size());
  std::iota(rows.begin(), rows.end(), 0u);
  TreeParams all = params;
  all.features_per_split = 0;
  TreeBuilder builder(data, all, nullptr);
  return DecisionTree(data.n_features(), params, builder.build(std::move(rows)));
}

DecisionTree train_tree(std::span<const LabeledExample> examples, const TreeParams& params) {
  return train_tree(make_dataset(examples), params);
}

// ---------------------------------------------------------------------------
// Random forest

RandomForest::RandomForest(ForestParams params, std::uint64_t seed, std::vector<DecisionTree> trees)
    : params_(params), seed_(seed), trees_(std::move(trees)) {
  if (trees_.empty()) throw DataError("random forest needs at least one tree");
}

Prediction RandomForest::predict(std::span<const double> x) const {
  std::size_t positive = 0;
  for (const auto& t : trees_) {
    if (t.predict(x).label == ClassLabel::kPositive) ++positive;
  }
  const double score = static_cast<double>(positive) / static_cast<double>(trees_.size());
  return {label_for_score(score), score};
}

RandomForest train_forest(const Dataset& data, const ForestParams& params, std::uint64_t seed, int workers) {
  require_nonempty(data);
  if (params.trees < 1) throw ConfigError("forest needs at least one tree");
  const TreeParams tree_params{params.max_depth, params.min_samples_leaf, params.features_per_split};
  std::vector<DecisionTree> trees(static_cast<std::size_t>(params.trees));
  parallel_for(trees.size(), workers, [&](std::size_t t) {
    auto engine = rng::make_engine(seed, t);
    std::vector<std::uint32_t> rows(data.size());
    if (params.bootstrap) {
      for (auto& r : rows) r = static_cast<std::uint32_t>(rng::uniform_below(engine, data.size()));
      std::sort(rows.begin(), rows.end());
    } else {
      std::iota(rows.begin(), rows.end(), 0u);
    }
    TreeBuilder builder(data, tree_params, &engine);
    trees[t] = DecisionTree(data.n_features(), tree_params, builder.build(std::move(rows)));
  });
  return RandomForest(params, seed, std::move(trees));
}

RandomForest train_forest(std::span<const LabeledExample> examples, const ForestParams& params,
                          std::uint64_t seed, int workers) {
  return train_forest(make_dataset(examples), params, seed, workers);
}

// ---------------------------------------------------------------------------
// Model variant helpers

std::size_t model_feature_count(const Model& model) {
  return std::visit([](const auto& m) { return m.n_features(); }, model);
}

Prediction predict(const Model& model, std::span<const double> x) {
  check_width(model_feature_count(model), x.size());
  return std::visit([&](const auto& m) { return m.predict(x); }, model);
}

Prediction predict(const Model& model, const FeatureVector& x) {
  return predict(model, std::span<const double>(x.values));
}

Model train_model(const Dataset& data, const ModelSpec& spec, std::uint64_t seed, int workers) {
  if (const auto* tp = std::get_if<TreeParams>(&spec)) return train_tree(data, *tp);
  return train_forest(data, std::get<ForestParams>(spec), seed, workers);
}

std::string describe(const ModelSpec& spec) {
  if (const auto* tp = std::get_if<TreeParams>(&spec)) {
    return "decision_tree(max_depth=" + std::to_string(tp->max_depth) +
           ",min_samples_leaf=" + std::to_string(tp->min_samples_leaf) + ")";
  }
  const auto& fp = std::get<ForestParams>(spec);
  return "random_forest(trees=" + std::to_string(fp.trees) +
         ",features_per_split=" + std::to_string(fp.features_per_split) +
         ",bootstrap=" + (fp.bootstrap ? "true" : "false") + ",max_depth=" + std::to_string(fp.max_depth) +
         ",min_samples_leaf=" + std::to_string(fp.min_samples_leaf) + ")";
}

// ---------------------------------------------------------------------------
// Evaluation

std::size_t EvalReport::evaluated() const {
  return confusion[0][0] + confusion[0][1] + confusion[1][0] + confusion[1][1];
}

EvalReport score_predictions(std::span<const ClassLabel> actual, std::span<const ClassLabel> predicted) {
  if (actual.size() != predicted.size()) throw DataError("prediction count does not match label count");
  EvalReport r;
  for (std::size_t i = 0; i < actual.size(); ++i) ++r.confusion[idx(actual[i])][idx(predicted[i])];
  const double n = static_cast<double>(actual.size());
  double correct = 0.0;
  for (std::size_t c = 0; c < 2; ++c) {
    const auto tp = static_cast<double>(r.confusion[c][c]);
    const auto support = r.confusion[c][0] + r.confusion[c][1];
    const auto predicted_c = static_cast<double>(r.confusion[0][c] + r.confusion[1][c]);
    auto& s = r.per_class[c];
    s.support = support;
    s.precision = safe_div(tp, predicted_c);
    s.recall = safe_div(tp, static_cast<double>(support));
    s.f1 = safe_div(2.0 * s.precision * s.recall, s.precision + s.recall);
    correct += tp;
    const double w = safe_div(static_cast<double>(support), n);
    r.precision += w * s.precision;
    r.recall += w * s.recall;
    r.f1 += w * s.f1;
  }
  r.accuracy = safe_div(correct, n);
  r.predictions.assign(predicted.begin(), predicted.end());
  return r;
}

EvalReport cross_validate(const Dataset& data, const ModelSpec& spec, int k, std::uint64_t seed, int workers) {
  if (k < 2) throw ConfigError("cross-validation needs at least 2 folds");
  const auto counts = data.class_counts();
  for (std::size_t c = 0; c < 2; ++c) {
    if (counts[c] < static_cast<std::size_t>(k)) {
      throw DataError("class " + std::string(to_string(static_cast<ClassLabel>(c))) + " has " +
                      std::to_string(counts[c]) + " examples, fewer than " + std::to_string(k) + " folds");
    }
  }

  std::vector<int> fold_of(data.size(), -1);
  auto engine = rng::make_engine(seed, 0xF01D);
  for (std::size_t c = 0; c < 2; ++c) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (idx(data.label(i)) == c) members.push_back(i);
    }
    rng::shuffle(std::span(members), engine);
    for (std::size_t p = 0; p < members.size(); ++p) fold_of[members[p]] = static_cast<int>(p % static_cast<std::size_t>(k));
  }

  std::vector<ClassLabel> predicted(data.size(), ClassLabel::kNegative);
  for (int fold = 0; fold < k; ++fold) {
    std::vector<std::size_t> train_rows;
    std::vector<std::size_t> test_rows;
    for (std::size_t i = 0; i < data.size(); ++i) (fold_of[i] == fold ? test_rows : train_rows).push_back(i);
    const Model model = train_model(data.subset(train_rows), spec, seed + static_cast<std::uint64_t>(fold), workers);
    for (auto i : test_rows) predicted[i] = predict(model, data.row(i)).label;
  }

  std::vector<ClassLabel> actual(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) actual[i] = data.label(i);
  EvalReport r = score_predictions(actual, predicted);
  r.model_name = describe(spec);
  r.folds = k;
  r.fold_of = std::move(fold_of);
  return r;
}

std::string format_report(const EvalReport& r) {
  std::ostringstream out;
  out << "model: " << r.model_name << '\n';
  out << "folds: " << r.folds << '\n';
  out << "examples: " << r.evaluated() << '\n';
  out << "weighted precision: " << text::format_double(r.precision) << '\n';
  out << "weighted recall: " << text::format_double(r.recall) << '\n';
  out << "weighted f1: " << text::format_double(r.f1) << '\n';
  out << "accuracy: " << text::format_double(r.accuracy) << '\n';
  for (std::size_t c = 0; c < 2; ++c) {
    const auto& s = r.per_class[c];
    out << "class " << to_string(static_cast<ClassLabel>(c)) << ": precision " << text::format_double(s.precision)
        << " recall " << text::format_double(s.recall) << " f1 " << text::format_double(s.f1) << " support "
        << s.support << '\n';
  }
  out << "confusion (actual x predicted, negative/positive):\n";
  out << "  " << r.confusion[0][0] << ' ' << r.confusion[0][1] << '\n';
  out << "  " << r.confusion[1][0] << ' ' << r.confusion[1][1] << '\n';
  return out.str();
}

std::string report_rows(std::span<const EvalReport> reports) {
  std::ostringstream out;
  out << "model\tclass\tprecision\trecall\tf1\tsupport\n";
  for (const auto& r : reports) {
    for (std::size_t c = 0; c < 2; ++c) {
      const auto& s = r.per_class[c];
      out << r.model_name << '\t' << to_string(static_cast<ClassLabel>(c)) << '\t'
          << text::format_double(s.precision) << '\t' << text::format_double(s.recall) << '\t'
          << text::format_double(s.f1) << '\t' << s.support << '\n';
    }
    out << r.model_name << "\tweighted\t" << text::format_double(r.precision) << '\t'
        << text::format_double(r.recall) << '\t' << text::format_double(r.f1) << '\t' << r.evaluated() << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

void write_tree(std::ostream& out, const DecisionTree& t) {
  out << "nodes " << t.nodes().size() << '\n';
  for (const auto& n : t.nodes()) {
    if (n.is_leaf()) {
      out << "L " << n.counts[0] << ' ' << n.counts[1] << '\n';
    } else {
      out << "S " << n.feature << ' ' << text::format_double(n.threshold) << ' ' << n.left << ' ' << n.right << ' '
          << n.counts[0] << ' ' << n.counts[1] << '\n';
    }
  }
}

class ModelReader {
 public:
  ModelReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

  std::vector<std::string> line() {
    std::string raw;
    if (!std::getline(in_, raw)) fail("unexpected end of model file");
    ++line_no_;
    std::istringstream ss(raw);
    std::vector<std::string> toks;
    for (std::string t; ss >> t;) toks.push_back(t);
    return toks;
  }

  std::vector<std::string> expect(std::string_view key, std::size_t n_fields) {
    auto toks = line();
    if (toks.size() != n_fields || toks[0] != key) fail("expected '" + std::string(key) + "' line");
    return toks;
  }

  template <typename T>
  T num(const std::string& s) {
    T v{};
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) fail("bad number '" + s + "'");
    return v;
  }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(source_, line_no_, "", what); }

  DecisionTree tree(std::size_t n_features, const TreeParams& params) {
    const auto n = num<std::size_t>(expect("nodes", 2)[1]);
    std::vector<DecisionTree::Node> nodes(n);
    for (auto& node : nodes) {
      auto t = line();
      if (t.size() == 3 && t[0] == "L") {
        node.counts = {num<std::uint64_t>(t[1]), num<std::uint64_t>(t[2])};
      } else if (t.size() == 7 && t[0] == "S") {
        node.feature = num<int>(t[1]);
        node.threshold = num<double>(t[2]);
        node.left = num<int>(t[3]);
        node.right = num<int>(t[4]);
        node.counts = {num<std::uint64_t>(t[5]), num<std::uint64_t>(t[6])};
      } else {
        fail("bad node line");
      }
    }
    try {
      return DecisionTree(n_features, params, std::move(nodes));
    } catch (const DataError& e) {
      fail(e.what());
    }
  }

 private:
  std::istream& in_;
  std::string source_;
  std::size_t line_no_ = 0;
};

}  // namespace

void save_model(std::ostream& out, const Model& model) {
  out << kModelMagic << ' ' << kModelVersion << '\n';
  out << "n_features " << model_feature_count(model) << '\n';
  if (const auto* t = std::get_if<DecisionTree>(&model)) {
    const auto& p = t->params();
    out << "kind tree\n";
    out << "params " << p.max_depth << ' ' << p.min_samples_leaf << ' ' << p.features_per_split << '\n';
    write_tree(out, *t);
  } else {
    const auto& f = std::get<RandomForest>(model);
    const auto& p = f.params();
    out << "kind forest\n";
    out << "params " << p.trees << ' ' << p.features_per_split << ' ' << (p.bootstrap ? 1 : 0) << ' '
        << p.max_depth << ' ' << p.min_samples_leaf << '\n';
    out << "seed " << f.seed() << '\n';
    for (std::size_t i = 0; i < f.trees().size(); ++i) {
      out << "tree " << i << '\n';
      write_tree(out, f.trees()[i]);
    }
  }
  out << "end\n";
}

Model load_model(std::istream& in, const std::string& source_name) {
  ModelReader r(in, source_name);
  const auto header = r.line();
  if (header.size() != 2 || header[0] != kModelMagic) r.fail("not an anonnet model file");
  if (r.num<int>(header[1]) != kModelVersion) r.fail("unsupported model version " + header[1]);
  const auto n_features = r.num<std::size_t>(r.expect("n_features", 2)[1]);
  const auto kind = r.expect("kind", 2)[1];
  if (kind == "tree") {
    const auto p = r.expect("params", 4);
    const TreeParams params{r.num<int>(p[1]), r.num<int>(p[2]), r.num<int>(p[3])};
    DecisionTree tree = r.tree(n_features, params);
    r.expect("end", 1);
    return tree;
  }
  if (kind != "forest") r.fail("unknown model kind " + kind);
  const auto p = r.expect("params", 6);
  ForestParams params{r.num<int>(p[1]), r.num<int>(p[2]), r.num<int>(p[3]) != 0, r.num<int>(p[4]),
                      r.num<int>(p[5])};
  const auto seed = r.num<std::uint64_t>(r.expect("seed", 2)[1]);
  const TreeParams tree_params{params.max_depth, params.min_samples_leaf, params.features_per_split};
  std::vector<DecisionTree> trees;
  for (int i = 0; i < params.trees; ++i) {
    const auto t = r.expect("tree", 2);
    if (r.num<int>(t[1]) != i) r.fail("trees out of order");
    trees.push_back(r.tree(n_features, tree_params));
  }
  r.expect("end", 1);
  return RandomForest(params, seed, std::move(trees));
}

}  // namespace anonnet
