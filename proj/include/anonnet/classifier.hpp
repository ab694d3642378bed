#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "anonnet/features.hpp"

namespace anonnet {

enum class ClassLabel : std::uint8_t { kNegative = 0, kPositive = 1 };

std::string_view to_string(ClassLabel label);

struct LabeledExample {
  FeatureVector features;
  ClassLabel label = ClassLabel::kNegative;
  std::string account_id;
};

// Row-major feature matrix with one label per row.
class Dataset {
 public:
  explicit Dataset(std::size_t n_features);

  void add(std::span<const double> row, ClassLabel label);

  std::size_t size() const noexcept { return labels_.size(); }
  bool empty() const noexcept { return labels_.empty(); }
  std::size_t n_features() const noexcept { return n_features_; }
  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * n_features_, n_features_};
  }
  ClassLabel label(std::size_t i) const { return labels_[i]; }
  std::array<std::size_t, 2> class_counts() const;

  Dataset subset(std::span<const std::size_t> rows) const;

 private:
  std::size_t n_features_;
  std::vector<double> values_;
  std::vector<ClassLabel> labels_;
};

Dataset make_dataset(std::span<const LabeledExample> examples);

// Tie-breaking of probabilities: score >= 0.5 is positive.
struct Prediction {
  ClassLabel label = ClassLabel::kNegative;
  double score = 0.0;  // positive-class score in [0, 1]
};

struct TreeParams {
  int max_depth = 0;         // 0 = unlimited
  int min_samples_leaf = 1;
  int features_per_split = 0;  // 0 = all features

  bool operator==(const TreeParams&) const = default;
};

// Binary tree stored as a preorder node list. Rows with x[feature] <= threshold
// go left.
class DecisionTree {
 public:
  struct Node {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    std::array<std::uint64_t, 2> counts{};  // training rows per class reaching this node

    bool is_leaf() const noexcept { return feature < 0; }
    bool operator==(const Node&) const = default;
  };

  DecisionTree() = default;
  DecisionTree(std::size_t n_features, TreeParams params, std::vector<Node> nodes);

  Prediction predict(std::span<const double> x) const;
  const Node& leaf_for(std::span<const double> x) const;

  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  std::size_t n_features() const noexcept { return n_features_; }
  const TreeParams& params() const noexcept { return params_; }
  int depth() const;
  std::size_t leaf_count() const;

  bool operator==(const DecisionTree&) const = default;

 private:
  std::size_t n_features_ = 0;
  TreeParams params_;
  std::vector<Node> nodes_;
};

// Greedy Gini-minimising tree. Split candidates are midpoints between distinct
// consecutive values; ties go to the lowest feature index, then the lowest
// threshold. Leaves predict the majority class, ties positive.
DecisionTree train_tree(const Dataset& data, const TreeParams& params);
DecisionTree train_tree(std::span<const LabeledExample> examples, const TreeParams& params);

struct ForestParams {
  int trees = 100;
  int features_per_split = 7;  // floor(sqrt(62))
  bool bootstrap = true;
  int max_depth = 0;
  int min_samples_leaf = 1;

  bool operator==(const ForestParams&) const = default;
};

class RandomForest {
 public:
  RandomForest() = default;
  RandomForest(ForestParams params, std::uint64_t seed, std::vector<DecisionTree> trees);

  // Score is the fraction of trees voting positive.
  Prediction predict(std::span<const double> x) const;

  const ForestParams& params() const noexcept { return params_; }
  std::uint64_t seed() const noexcept { return seed_; }
  const std::vector<DecisionTree>& trees() const noexcept { return trees_; }
  std::size_t n_features() const noexcept { return trees_.empty() ? 0 : trees_.front().n_features(); }

  bool operator==(const RandomForest&) const = default;

 private:
  ForestParams params_;
  std::uint64_t seed_ = 0;
  std::vector<DecisionTree> trees_;
};

// Tree i draws its bootstrap sample and feature subsets from a stream seeded by
// (seed, i), so the result does not depend on `workers`.
RandomForest train_forest(const Dataset& data, const ForestParams& params, std::uint64_t seed,
                          int workers = 1);
RandomForest train_forest(std::span<const LabeledExample> examples, const ForestParams& params,
                          std::uint64_t seed, int workers = 1);

using Model = std::variant<DecisionTree, RandomForest>;
using ModelSpec = std::variant<TreeParams, ForestParams>;

// Throws DataError on feature-length mismatch.
Prediction predict(const Model& model, std::span<const double> x);
Prediction predict(const Model& model, const FeatureVector& x);
std::size_t model_feature_count(const Model& model);

Model train_model(const Dataset& data, const ModelSpec& spec, std::uint64_t seed, int workers = 1);

double gini(std::span<const std::uint64_t> class_counts);

struct ClassScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
};

struct EvalReport {
  std::string model_name;
  int folds = 0;
  // Support-weighted averages over the two classes.
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double accuracy = 0.0;
  std::array<ClassScores, 2> per_class{};  // indexed by ClassLabel
  // confusion[actual][predicted]
  std::array<std::array<std::size_t, 2>, 2> confusion{};
  std::vector<ClassLabel> predictions;  // out-of-fold prediction per example
  std::vector<int> fold_of;             // fold each example was held out in

  std::size_t evaluated() const;
};

EvalReport score_predictions(std::span<const ClassLabel> actual, std::span<const ClassLabel> predicted);

// Stratified k-fold: each class is shuffled with `seed` and dealt round-robin
// into folds. Requires at least k members per class.
EvalReport cross_validate(const Dataset& data, const ModelSpec& spec, int k, std::uint64_t seed,
                          int workers = 1);

std::string describe(const ModelSpec& spec);
std::string format_report(const EvalReport& report);
// Tab-separated rows: model, class, precision, recall, f1, support.
std::string report_rows(std::span<const EvalReport> reports);

// Versioned text format: header, params, then each tree as a preorder node list.
void save_model(std::ostream& out, const Model& model);
Model load_model(std::istream& in, const std::string& source_name = {});

}  // namespace anonnet
