#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "bloc/encoder.hpp"
#include "bloc/timeline.hpp"
#include "bloc/vectorspace.hpp"

namespace bloc {

inline constexpr int kLabelHuman = 0;
inline constexpr int kLabelBot = 1;  // positive class

// Dense TF-IDF rows for the labeled accounts of a dataset, in account-id
// order. The vocabulary is fit on exactly these rows.
struct FeatureMatrix {
    Vocabulary vocab;
    std::vector<std::string> account_ids;
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    std::vector<std::string> warnings;
};

// encode -> bigram tokenize -> vocabulary -> TF-IDF for every labeled
// account. Throws data_error when the dataset is empty, has no labels, or
// carries labels other than bot/human. Accounts with empty timelines keep
// an all-zero row and add a warning.
FeatureMatrix extract_features(const Dataset& dataset, const LanguageConfig& cfg);

struct TreeNode {
    std::int32_t feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    std::int32_t left = -1;   // feature value <= threshold
    std::int32_t right = -1;  // feature value > threshold
    std::int32_t label = -1;  // majority class at a leaf

    bool is_leaf() const { return feature < 0; }
};

struct DecisionTree {
    std::vector<TreeNode> nodes;  // node 0 is the root

    int predict(std::span<const double> row) const;
};

struct TreeEnsembleModel {
    std::vector<DecisionTree> trees;
    std::uint32_t dimensions = 0;
    std::uint64_t seed = 0;
};

// Bootstrap sample per tree, ceil(sqrt(k)) random features per split,
// Gini impurity, growth to purity with min-leaf 1. Deterministic for a
// given seed. Throws std::invalid_argument when fewer than two classes
// are present.
TreeEnsembleModel train_forest(const FeatureMatrix& features, int trees,
                               std::uint64_t seed);

struct Prediction {
    int label = kLabelHuman;
    double score = 0.0;  // fraction of trees voting bot; ties predict human
};

Prediction predict(const TreeEnsembleModel& model, std::span<const double> row);

struct FoldMetrics {
    int fold = 0;
    std::int64_t tp = 0, fp = 0, fn = 0, tn = 0;
    double precision = 0, recall = 0, f1 = 0;
};

struct EvalReport {
    int folds = 0;
    int trees = 0;
    std::uint64_t seed = 0;
    bool balanced = false;
    std::int64_t tp = 0, fp = 0, fn = 0, tn = 0;
    double precision = 0, recall = 0, f1 = 0;  // micro-averaged over folds
    std::vector<FoldMetrics> per_fold;
};

double f1_score(double precision, double recall);

// Called once per fold with the fold index, the vocabulary fit on that
// fold's training rows, and the held-out account ids; used by leakage
// instrumentation tests.
using FoldObserver = std::function<void(int fold, const Vocabulary& vocab,
                                        std::span<const std::string> test_ids)>;

// Stratified k-fold cross-validation; the vocabulary and forest are fit on
// each training split only, predictions are pooled over all held-out rows,
// and bot is the positive class. `balance` downsamples the majority class
// before folding. Throws data_error when any class has fewer members than
// folds.
EvalReport cross_validate(const Dataset& dataset, int folds,
                          const LanguageConfig& cfg, int trees,
                          std::uint64_t seed, bool balance = false,
                          const FoldObserver& observer = {});

// Persisted classifier: language parameters, vocabulary, and forest, in a
// versioned JSON container.
struct BotModel {
    LanguageConfig language;
    Vocabulary vocab;
    TreeEnsembleModel forest;
};

BotModel train_bot_model(const Dataset& dataset, const LanguageConfig& cfg,
                         int trees, std::uint64_t seed);
void save_bot_model(const BotModel& model, std::ostream& out);
BotModel load_bot_model(std::istream& in);

// Featurizes one account under the model's vocabulary (out-of-vocabulary
// words dropped) and votes the forest.
Prediction classify_account(const BotModel& model, const AccountTimeline& timeline,
                            const SocialGraphContext& graph);

}  // namespace bloc
