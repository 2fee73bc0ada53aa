#include "bloc/botdetect.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "bloc/errors.hpp"
#include "bloc/tokenizer.hpp"
#include "parallel.hpp"

namespace bloc {

using nlohmann::json;

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    // splitmix64 step
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::vector<double> dense_row(const TfIdfVector& vec, std::size_t k) {
    std::vector<double> row(k, 0.0);
    for (const auto& [dim, w] : vec.weights) row[dim] = w;
    return row;
}

struct LabeledTerms {
    std::vector<std::string> account_ids;
    std::vector<TermMultiset> terms;
    std::vector<int> labels;
    std::vector<std::string> warnings;
};

// Per-account multisets for every labeled account, in account-id order.
// Encoding and tokenization carry no corpus statistics, so they are safe
// to compute once; only the vocabulary must be refit per training split.
LabeledTerms labeled_terms(const Dataset& dataset, const LanguageConfig& cfg) {
    if (dataset.timelines.empty()) throw data_error("empty dataset");
    if (dataset.labels.empty()) throw data_error("dataset has no labels");

    LabeledTerms out;
    for (const auto& tl : dataset.timelines) {
        auto it = dataset.labels.find(tl.account_id);
        if (it == dataset.labels.end()) continue;
        int label;
        if (it->second == "bot") {
            label = kLabelBot;
        } else if (it->second == "human") {
            label = kLabelHuman;
        } else {
            throw data_error("bot detection needs bot/human labels; account \"" +
                             tl.account_id + "\" is labeled \"" + it->second + "\"");
        }
        if (tl.posts.empty()) {
            out.warnings.push_back("account \"" + tl.account_id +
                                   "\" has an empty timeline; keeping all-zero row");
        }
        out.account_ids.push_back(tl.account_id);
        out.terms.push_back(tokenize(encode(tl, dataset.graph, cfg), cfg));
        out.labels.push_back(label);
    }
    if (out.account_ids.empty()) throw data_error("dataset has no labels");
    return out;
}

struct SplitChoice {
    int feature = -1;
    double threshold = 0.0;
    double impurity = std::numeric_limits<double>::infinity();
};

double gini(std::int64_t positives, std::int64_t total) {
    if (total == 0) return 0.0;
    double p = static_cast<double>(positives) / static_cast<double>(total);
    return 1.0 - p * p - (1.0 - p) * (1.0 - p);
}

class TreeBuilder {
  public:
    TreeBuilder(const FeatureMatrix& data, std::uint64_t seed)
        : data_(data), rng_(seed) {
        feature_pool_.resize(data.rows.empty() ? 0 : data.rows[0].size());
        std::iota(feature_pool_.begin(), feature_pool_.end(), 0);
        subset_size_ = static_cast<std::size_t>(
            std::ceil(std::sqrt(static_cast<double>(feature_pool_.size()))));
    }

    DecisionTree build() {
        DecisionTree tree;
        std::vector<std::size_t> sample = bootstrap_sample();
        struct Pending {
            std::int32_t node;
            std::vector<std::size_t> rows;
        };
        tree.nodes.emplace_back();
        std::vector<Pending> stack;
        stack.push_back({0, std::move(sample)});
        while (!stack.empty()) {
            Pending work = std::move(stack.back());
            stack.pop_back();
            grow(tree, work.node, work.rows, stack);
        }
        return tree;
    }

  private:
    std::vector<std::size_t> bootstrap_sample() {
        std::size_t n = data_.rows.size();
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        std::vector<std::size_t> sample(n);
        for (auto& s : sample) s = pick(rng_);
        return sample;
    }

    int majority(const std::vector<std::size_t>& rows) const {
        std::int64_t bots = 0;
        for (auto r : rows) bots += data_.labels[r];
        std::int64_t humans = static_cast<std::int64_t>(rows.size()) - bots;
        return bots > humans ? kLabelBot : kLabelHuman;  // tie -> human
    }

    // ceil(sqrt(k)) distinct features, then sorted so the split search
    // order does not depend on the draw order.
    std::vector<std::uint32_t> sample_features() {
        std::size_t k = feature_pool_.size();
        for (std::size_t i = 0; i < subset_size_; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, k - 1);
            std::swap(feature_pool_[i], feature_pool_[pick(rng_)]);
        }
        std::vector<std::uint32_t> chosen(feature_pool_.begin(),
                                          feature_pool_.begin() +
                                              static_cast<std::ptrdiff_t>(subset_size_));
        std::sort(chosen.begin(), chosen.end());
        return chosen;
    }

    SplitChoice best_split(const std::vector<std::size_t>& rows,
                           const std::vector<std::uint32_t>& features) {
        SplitChoice best;
        std::vector<std::pair<double, int>> values(rows.size());
        for (std::uint32_t f : features) {
            for (std::size_t i = 0; i < rows.size(); ++i) {
                values[i] = {data_.rows[rows[i]][f], data_.labels[rows[i]]};
            }
            std::sort(values.begin(), values.end());
            std::int64_t total_pos = 0;
            for (const auto& [v, label] : values) {
                (void)v;
                total_pos += label;
            }
            std::int64_t n = static_cast<std::int64_t>(values.size());
            std::int64_t left_pos = 0;
            for (std::int64_t i = 1; i < n; ++i) {
                left_pos += values[i - 1].second;
                if (values[i].first == values[i - 1].first) continue;
                double weighted =
                    (static_cast<double>(i) * gini(left_pos, i) +
                     static_cast<double>(n - i) * gini(total_pos - left_pos, n - i)) /
                    static_cast<double>(n);
                if (weighted < best.impurity) {
                    best.impurity = weighted;
                    best.feature = static_cast<int>(f);
                    best.threshold =
                        values[i - 1].first +
                        (values[i].first - values[i - 1].first) / 2.0;
                }
            }
        }
        return best;
    }

    template <typename Stack>
    void grow(DecisionTree& tree, std::int32_t node,
              const std::vector<std::size_t>& rows, Stack& stack) {
        std::int64_t bots = 0;
        for (auto r : rows) bots += data_.labels[r];
        bool pure = bots == 0 || bots == static_cast<std::int64_t>(rows.size());
        SplitChoice split;
        if (!pure) split = best_split(rows, sample_features());
        if (pure || split.feature < 0) {
            tree.nodes[node].feature = -1;
            tree.nodes[node].label = majority(rows);
            return;
        }
        std::vector<std::size_t> left, right;
        for (auto r : rows) {
            if (data_.rows[r][static_cast<std::size_t>(split.feature)] <=
                split.threshold) {
                left.push_back(r);
            } else {
                right.push_back(r);
            }
        }
        std::int32_t left_index = static_cast<std::int32_t>(tree.nodes.size());
        tree.nodes.emplace_back();
        std::int32_t right_index = static_cast<std::int32_t>(tree.nodes.size());
        tree.nodes.emplace_back();
        TreeNode& n = tree.nodes[static_cast<std::size_t>(node)];
        n.feature = split.feature;
        n.threshold = split.threshold;
        n.left = left_index;
        n.right = right_index;
        // left pushed last so it is grown first; node numbering is fixed
        // above, making build order irrelevant to the result
        stack.push_back({right_index, std::move(right)});
        stack.push_back({left_index, std::move(left)});
    }

    const FeatureMatrix& data_;
    std::mt19937_64 rng_;
    std::vector<std::uint32_t> feature_pool_;
    std::size_t subset_size_ = 0;
};

}  // namespace

FeatureMatrix extract_features(const Dataset& dataset, const LanguageConfig& cfg) {
    LabeledTerms labeled = labeled_terms(dataset, cfg);
    FeatureMatrix matrix;
    matrix.vocab = build_vocabulary(labeled.terms);
    matrix.account_ids = std::move(labeled.account_ids);
    matrix.labels = std::move(labeled.labels);
    matrix.warnings = std::move(labeled.warnings);
    matrix.rows.reserve(labeled.terms.size());
    for (std::size_t i = 0; i < labeled.terms.size(); ++i) {
        matrix.rows.push_back(dense_row(
            tf_idf(labeled.terms[i], matrix.vocab, matrix.account_ids[i]),
            matrix.vocab.size()));
    }
    return matrix;
}

int DecisionTree::predict(std::span<const double> row) const {
    std::int32_t node = 0;
    while (!nodes[static_cast<std::size_t>(node)].is_leaf()) {
        const TreeNode& n = nodes[static_cast<std::size_t>(node)];
        node = row[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left
                                                                       : n.right;
    }
    return nodes[static_cast<std::size_t>(node)].label;
}

TreeEnsembleModel train_forest(const FeatureMatrix& features, int trees,
                               std::uint64_t seed) {
    if (trees < 1) throw std::invalid_argument("need at least one tree");
    if (features.rows.empty()) throw std::invalid_argument("empty feature matrix");
    bool has_bot = false, has_human = false;
    for (int label : features.labels) {
        (has_bot |= label == kLabelBot, has_human |= label == kLabelHuman);
    }
    if (!has_bot || !has_human) {
        throw std::invalid_argument("training data must hold both classes");
    }

    TreeEnsembleModel model;
    model.dimensions = static_cast<std::uint32_t>(features.rows[0].size());
    model.seed = seed;
    model.trees.resize(static_cast<std::size_t>(trees));
    detail::parallel_for(static_cast<std::size_t>(trees), [&](std::size_t i) {
        TreeBuilder builder(features, mix_seed(seed, i));
        model.trees[i] = builder.build();
    });
    return model;
}

Prediction predict(const TreeEnsembleModel& model, std::span<const double> row) {
    if (row.size() != model.dimensions) {
        throw std::invalid_argument("feature dimension mismatch");
    }
    std::int64_t bot_votes = 0;
    for (const auto& tree : model.trees) bot_votes += tree.predict(row);
    Prediction p;
    p.score = static_cast<double>(bot_votes) /
              static_cast<double>(model.trees.size());
    p.label = 2 * bot_votes > static_cast<std::int64_t>(model.trees.size())
                  ? kLabelBot
                  : kLabelHuman;
    return p;
}

double f1_score(double precision, double recall) {
    if (precision + recall == 0.0) return 0.0;
    return 2.0 * precision * recall / (precision + recall);
}

namespace {

FoldMetrics fold_metrics(int fold, std::int64_t tp, std::int64_t fp,
                         std::int64_t fn, std::int64_t tn) {
    FoldMetrics m;
    m.fold = fold;
    m.tp = tp;
    m.fp = fp;
    m.fn = fn;
    m.tn = tn;
    m.precision = tp + fp == 0 ? 0.0
                               : static_cast<double>(tp) /
                                     static_cast<double>(tp + fp);
    m.recall = tp + fn == 0 ? 0.0
                            : static_cast<double>(tp) /
                                  static_cast<double>(tp + fn);
    m.f1 = f1_score(m.precision, m.recall);
    return m;
}

}  // namespace

EvalReport cross_validate(const Dataset& dataset, int folds,
                          const LanguageConfig& cfg, int trees,
                          std::uint64_t seed, bool balance,
                          const FoldObserver& observer) {
    if (folds < 2) throw config_error("cross-validation needs at least 2 folds");
    LabeledTerms labeled = labeled_terms(dataset, cfg);

    std::vector<std::size_t> bots, humans;
    for (std::size_t i = 0; i < labeled.labels.size(); ++i) {
        (labeled.labels[i] == kLabelBot ? bots : humans).push_back(i);
    }
    std::mt19937_64 rng(mix_seed(seed, 0));
    if (balance && bots.size() != humans.size()) {
        auto& majority = bots.size() > humans.size() ? bots : humans;
        std::size_t keep = std::min(bots.size(), humans.size());
        std::shuffle(majority.begin(), majority.end(), rng);
        majority.resize(keep);
        std::sort(majority.begin(), majority.end());
    }
    if (bots.size() < static_cast<std::size_t>(folds) ||
        humans.size() < static_cast<std::size_t>(folds)) {
        throw data_error("too few samples to stratify into " +
                         std::to_string(folds) + " folds");
    }

    // round-robin deal of each shuffled class so every fold sees both
    std::vector<int> fold_of(labeled.labels.size(), -1);
    for (auto* cls : {&bots, &humans}) {
        std::shuffle(cls->begin(), cls->end(), rng);
        for (std::size_t i = 0; i < cls->size(); ++i) {
            fold_of[(*cls)[i]] = static_cast<int>(i % static_cast<std::size_t>(folds));
        }
    }

    EvalReport report;
    report.folds = folds;
    report.trees = trees;
    report.seed = seed;
    report.balanced = balance;

    for (int fold = 0; fold < folds; ++fold) {
        std::vector<std::size_t> train_rows, test_rows;
        for (std::size_t i = 0; i < fold_of.size(); ++i) {
            if (fold_of[i] < 0) continue;  // balanced out
            (fold_of[i] == fold ? test_rows : train_rows).push_back(i);
        }

        std::vector<TermMultiset> train_terms;
        train_terms.reserve(train_rows.size());
        FeatureMatrix train;
        for (auto i : train_rows) train_terms.push_back(labeled.terms[i]);
        train.vocab = build_vocabulary(train_terms);
        for (std::size_t j = 0; j < train_rows.size(); ++j) {
            train.rows.push_back(dense_row(
                tf_idf(train_terms[j], train.vocab), train.vocab.size()));
            train.labels.push_back(labeled.labels[train_rows[j]]);
        }

        if (observer) {
            std::vector<std::string> test_ids;
            for (auto i : test_rows) test_ids.push_back(labeled.account_ids[i]);
            observer(fold, train.vocab, test_ids);
        }

        TreeEnsembleModel model =
            train_forest(train, trees, mix_seed(seed, static_cast<std::uint64_t>(fold) + 1));

        std::int64_t tp = 0, fp = 0, fn = 0, tn = 0;
        for (auto i : test_rows) {
            auto row = dense_row(tf_idf(labeled.terms[i], train.vocab),
                                 train.vocab.size());
            int predicted = predict(model, row).label;
            int actual = labeled.labels[i];
            if (actual == kLabelBot) {
                (predicted == kLabelBot ? tp : fn) += 1;
            } else {
                (predicted == kLabelBot ? fp : tn) += 1;
            }
        }
        report.per_fold.push_back(fold_metrics(fold, tp, fp, fn, tn));
        report.tp += tp;
        report.fp += fp;
        report.fn += fn;
        report.tn += tn;
    }

    FoldMetrics pooled = fold_metrics(-1, report.tp, report.fp, report.fn, report.tn);
    report.precision = pooled.precision;
    report.recall = pooled.recall;
    report.f1 = pooled.f1;
    return report;
}

namespace {

json language_to_json(const LanguageConfig& cfg) {
    return json{
        {"p1_seconds", cfg.session_threshold_s},
        {"p2", cfg.pause_alphabet == PauseAlphabet::f1 ? "f1" : "f2"},
        {"p3_sessions_as_content_words", cfg.sessions_as_content_words},
        {"p4", cfg.tokenization == Tokenization::ngram ? "ngram" : "pause"},
        {"ngram_n", cfg.ngram_size},
        {"p5_sort_symbols", cfg.sort_word_symbols},
        {"p6_truncation", cfg.truncation_length},
    };
}

LanguageConfig language_from_json(const json& obj) {
    LanguageConfig cfg;
    cfg.session_threshold_s = obj.at("p1_seconds").get<std::int64_t>();
    cfg.pause_alphabet = obj.at("p2").get<std::string>() == "f1"
                             ? PauseAlphabet::f1
                             : PauseAlphabet::f2;
    cfg.sessions_as_content_words = obj.at("p3_sessions_as_content_words").get<bool>();
    cfg.tokenization = obj.at("p4").get<std::string>() == "ngram"
                           ? Tokenization::ngram
                           : Tokenization::pause;
    cfg.ngram_size = obj.at("ngram_n").get<int>();
    cfg.sort_word_symbols = obj.at("p5_sort_symbols").get<bool>();
    cfg.truncation_length = obj.at("p6_truncation").get<int>();
    cfg.validate();
    return cfg;
}

constexpr int kModelVersion = 1;

}  // namespace

BotModel train_bot_model(const Dataset& dataset, const LanguageConfig& cfg,
                         int trees, std::uint64_t seed) {
    FeatureMatrix matrix = extract_features(dataset, cfg);
    bool has_bot = std::count(matrix.labels.begin(), matrix.labels.end(), kLabelBot) > 0;
    bool has_human = std::count(matrix.labels.begin(), matrix.labels.end(), kLabelHuman) > 0;
    if (!has_bot || !has_human) {
        throw data_error("training data must hold both bot and human accounts");
    }
    BotModel model;
    model.language = cfg;
    model.vocab = matrix.vocab;
    model.forest = train_forest(matrix, trees, seed);
    return model;
}

void save_bot_model(const BotModel& model, std::ostream& out) {
    json words = json::array();
    for (std::size_t i = 0; i < model.vocab.size(); ++i) {
        words.push_back(json{{"w", canonical_word_text(model.vocab.words[i])},
                             {"df", model.vocab.doc_frequency[i]}});
    }
    json trees = json::array();
    for (const auto& tree : model.forest.trees) {
        json nodes = json::array();
        for (const auto& n : tree.nodes) {
            nodes.push_back(json::array({n.feature, n.threshold, n.left, n.right, n.label}));
        }
        trees.push_back(std::move(nodes));
    }
    json doc{
        {"format", "bloc-bot-model"},
        {"version", kModelVersion},
        {"positive_class", "bot"},
        {"language", language_to_json(model.language)},
        {"vocabulary",
         {{"total_documents", model.vocab.total_documents}, {"words", std::move(words)}}},
        {"forest",
         {{"dimensions", model.forest.dimensions},
          {"seed", model.forest.seed},
          {"trees", std::move(trees)}}},
    };
    out << doc.dump(2) << "\n";
}

BotModel load_bot_model(std::istream& in) {
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw data_error(std::string("model file is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || doc.value("format", "") != "bloc-bot-model") {
        throw data_error("model file is not a bloc-bot-model container");
    }
    if (doc.value("version", -1) != kModelVersion) {
        throw data_error("unsupported model version");
    }
    BotModel model;
    model.language = language_from_json(doc.at("language"));

    const json& vocab = doc.at("vocabulary");
    model.vocab.total_documents = vocab.at("total_documents").get<std::int64_t>();
    for (const auto& entry : vocab.at("words")) {
        Word word = word_from_text(entry.at("w").get<std::string>());
        model.vocab.index.emplace(word,
                                  static_cast<std::uint32_t>(model.vocab.words.size()));
        model.vocab.words.push_back(std::move(word));
        model.vocab.doc_frequency.push_back(entry.at("df").get<std::int64_t>());
    }

    const json& forest = doc.at("forest");
    model.forest.dimensions = forest.at("dimensions").get<std::uint32_t>();
    model.forest.seed = forest.at("seed").get<std::uint64_t>();
    for (const auto& tree_json : forest.at("trees")) {
        DecisionTree tree;
        for (const auto& n : tree_json) {
            TreeNode node;
            node.feature = n.at(0).get<std::int32_t>();
            node.threshold = n.at(1).get<double>();
            node.left = n.at(2).get<std::int32_t>();
            node.right = n.at(3).get<std::int32_t>();
            node.label = n.at(4).get<std::int32_t>();
            tree.nodes.push_back(node);
        }
        model.forest.trees.push_back(std::move(tree));
    }
    if (model.forest.dimensions != model.vocab.size()) {
        throw data_error("model forest and vocabulary disagree on dimensions");
    }
    return model;
}

Prediction classify_account(const BotModel& model, const AccountTimeline& timeline,
                            const SocialGraphContext& graph) {
    TermMultiset terms = tokenize(encode(timeline, graph, model.language),
                                  model.language);
    auto row = dense_row(tf_idf(terms, model.vocab, timeline.account_id),
                         model.vocab.size());
    return predict(model.forest, row);
}

}  // namespace bloc
