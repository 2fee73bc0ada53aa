// bloc: behavioral-language encoding and account classification pipelines.
//
// Subcommands cover the whole flow: encode / tokenize / vectorize /
// langmodel for representations, cluster for unsupervised behavioral
// groups, bot-train / bot-predict / bot-eval for supervised bot
// detection, and coord-eval for coordinated-campaign detection.
// Machine-readable artifacts go to files (or stdout with `-o -`), human
// summaries to stdout, warnings to stderr.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bloc/botdetect.hpp"
#include "bloc/config.hpp"
#include "bloc/coorddetect.hpp"
#include "bloc/errors.hpp"
#include "bloc/langmodel.hpp"
#include "bloc/tokenizer.hpp"

namespace {

using nlohmann::json;

constexpr const char* kVersion = "1.0.0";

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitInternal = 4;

// Shortest round-trip formatting, identical to the JSON encoder, so every
// text artifact is byte-stable.
std::string fmt(double value) { return json(value).dump(); }

class Output {
  public:
    explicit Output(const std::string& path) : to_stdout_(path == "-" || path.empty()) {
        if (!to_stdout_) {
            file_.open(path, std::ios::binary);
            if (!file_) throw bloc::data_error("cannot write output file \"" + path + "\"");
            path_ = path;
        }
    }

    std::ostream& stream() { return to_stdout_ ? std::cout : file_; }
    bool to_stdout() const { return to_stdout_; }
    const std::string& path() const { return path_; }

  private:
    bool to_stdout_;
    std::ofstream file_;
    std::string path_;
};

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

bloc::GlyphTable glyph_table(const bloc::RunConfig& cfg) {
    bloc::GlyphTable glyphs;
    for (std::size_t i = 0; i < 6; ++i) glyphs.long_pause[i] = cfg.pause_glyphs[i];
    return glyphs;
}

bloc::NativeAppList native_apps(const bloc::RunConfig& cfg) {
    if (cfg.native_apps.empty()) return bloc::NativeAppList::defaults();
    bloc::NativeAppList list;
    list.names.insert(cfg.native_apps.begin(), cfg.native_apps.end());
    return list;
}

// Options shared by every data-consuming subcommand.
struct DataArgs {
    std::string data;
    std::string graph;
    std::string labels;
    std::string output = "-";
};

void add_data_options(CLI::App* cmd, DataArgs& args, bool with_labels,
                      bool with_output = true) {
    cmd->add_option("--data", args.data, "posts file (JSON Lines)")->required();
    cmd->add_option("--graph", args.graph, "follow graph file (JSON)");
    if (with_labels) {
        cmd->add_option("--labels", args.labels, "labels file (CSV account_id,label)");
    }
    if (with_output) {
        cmd->add_option("-o,--output", args.output,
                        "output path; - for stdout (default)");
    }
}

struct EncodedAccounts {
    std::vector<bloc::BlocDocument> docs;
    std::vector<bloc::TermMultiset> terms;
};

EncodedAccounts encode_all(const bloc::Dataset& dataset,
                           const bloc::LanguageConfig& language) {
    EncodedAccounts out;
    out.docs.reserve(dataset.timelines.size());
    out.terms.reserve(dataset.timelines.size());
    for (const auto& tl : dataset.timelines) {
        out.docs.push_back(bloc::encode(tl, dataset.graph, language));
        out.terms.push_back(bloc::tokenize(out.docs.back(), language));
    }
    return out;
}

int cmd_encode(const DataArgs& args, const bloc::RunConfig& cfg) {
    bloc::Dataset dataset = bloc::load_dataset(args.data, args.graph);
    print_warnings(dataset.warnings);
    bloc::GlyphTable glyphs = glyph_table(cfg);

    Output out(args.output);
    for (const auto& tl : dataset.timelines) {
        bloc::BlocDocument doc = bloc::encode(tl, dataset.graph, cfg.language);
        out.stream() << doc.account_id << '\t'
                     << bloc::render_symbols(doc.action_string, glyphs) << '\t';
        for (const auto& word : doc.content_words) {
            out.stream() << '(' << bloc::render_symbols(word, glyphs) << ')';
        }
        out.stream() << '\n';
    }
    if (!out.to_stdout()) {
        std::cout << "encoded " << dataset.timelines.size() << " account(s) to "
                  << out.path() << "\n";
    }
    return 0;
}

int cmd_tokenize(const DataArgs& args, const bloc::RunConfig& cfg,
                 std::size_t top_words) {
    bloc::Dataset dataset = bloc::load_dataset(args.data, args.graph);
    print_warnings(dataset.warnings);
    bloc::GlyphTable glyphs = glyph_table(cfg);
    EncodedAccounts encoded = encode_all(dataset, cfg.language);

    Output out(args.output);
    for (std::size_t i = 0; i < dataset.timelines.size(); ++i) {
        out.stream() << dataset.timelines[i].account_id << '\t';
        bool first = true;
        for (const auto& [word, count] : encoded.terms[i]) {
            if (!first) out.stream() << ',';
            first = false;
            out.stream() << bloc::render_word(word, glyphs) << ':' << count;
        }
        out.stream() << '\n';
    }
    if (top_words > 0) {
        auto ranked = bloc::top_words(encoded.terms, top_words);
        std::cout << "top words:";
        for (const auto& [word, count] : ranked) {
            std::cout << ' ' << bloc::render_word(word, glyphs) << '(' << count << ')';
        }
        std::cout << "\n";
    }
    if (!out.to_stdout()) {
        std::cout << "tokenized " << dataset.timelines.size() << " account(s) to "
                  << out.path() << "\n";
    }
    return 0;
}

int cmd_vectorize(const DataArgs& args, const bloc::RunConfig& cfg) {
    bloc::Dataset dataset = bloc::load_dataset(args.data, args.graph);
    print_warnings(dataset.warnings);
    if (dataset.timelines.empty()) throw bloc::data_error("no accounts in dataset");
    EncodedAccounts encoded = encode_all(dataset, cfg.language);

    bloc::Vocabulary vocab = bloc::build_vocabulary(encoded.terms);
    Output out(args.output);
    out.stream() << vocab.total_documents << ' ' << vocab.size() << '\n';
    for (std::size_t i = 0; i < dataset.timelines.size(); ++i) {
        bloc::TfIdfVector vec = bloc::tf_idf(encoded.terms[i], vocab,
                                             dataset.timelines[i].account_id);
        out.stream() << vec.account_id;
        for (const auto& [dim, weight] : vec.weights) {
            out.stream() << ' ' << dim << ':' << fmt(weight);
        }
        out.stream() << '\n';
    }
    if (!out.to_stdout()) {
        std::cout << "vectorized " << dataset.timelines.size() << " account(s) ("
                  << vocab.size() << " dimensions) to " << out.path() << "\n";
    }
    return 0;
}

int cmd_langmodel(const DataArgs& args, const bloc::RunConfig& cfg) {
    bloc::Dataset dataset = bloc::load_dataset(args.data, args.graph);
    print_warnings(dataset.warnings);

    std::vector<std::vector<bloc::Symbol>> strings;
    for (const auto& tl : dataset.timelines) {
        strings.push_back(bloc::encode(tl, dataset.graph, cfg.language).action_string);
    }
    bloc::TransitionModel model = bloc::fit_transitions(strings);

    Output out(args.output);
    out.stream() << "from,to,prob\n";
    for (const auto& [from, row] : model.counts) {
        for (const auto& [to, count] : row) {
            (void)count;
            out.stream() << bloc::symbol_text(from) << ',' << bloc::symbol_text(to)
                         << ',' << fmt(model.probability(from, to)) << '\n';
        }
    }
    if (!out.to_stdout()) {
        std::cout << "wrote transition table (" << model.counts.size()
                  << " states) to " << out.path() << "\n";
    }
    return 0;
}

int cmd_cluster(const DataArgs& args, const bloc::RunConfig& cfg,
                const std::string& edges_path, const std::string& communities_path) {
    bloc::Dataset dataset = bloc::load_dataset(args.data, args.graph);
    print_warnings(dataset.warnings);
    if (dataset.timelines.empty()) throw bloc::data_error("no accounts in dataset");

    std::vector<const bloc::AccountTimeline*> accounts;
    if (cfg.top_n > 0) {
        accounts = bloc::most_active(dataset, static_cast<std::size_t>(cfg.top_n));
        std::sort(accounts.begin(), accounts.end(),
                  [](const auto* a, const auto* b) { return a->account_id < b->account_id; });
    } else {
        for (const auto& tl : dataset.timelines) accounts.push_back(&tl);
    }

    auto vectors = bloc::method_vectors(accounts, dataset.graph, cfg.language,
                                        bloc::CoordinationMethod::bloc);
    auto pairs = bloc::pairwise_similarity(vectors);
    std::vector<std::string> ids;
    for (const auto* tl : accounts) ids.push_back(tl->account_id);
    bloc::SimilarityNetwork network = bloc::threshold_network(ids, pairs, cfg.threshold);

    Output edges(edges_path);
    edges.stream() << "a,b,weight\n";
    for (const auto& edge : network.edges) {
        edges.stream() << network.nodes[edge.a] << ',' << network.nodes[edge.b] << ','
                       << fmt(edge.similarity) << '\n';
    }

    json report{{"threshold", cfg.threshold},
                {"resolution", cfg.resolution},
                {"node_count", network.nodes.size()},
                {"edge_count", network.edges.size()},
                {"communities", json::array()}};
    if (!network.nodes.empty()) {
        bloc::LouvainResult louvain =
            bloc::louvain_communities(network, cfg.resolution, cfg.seed);
        bloc::NativeAppList native = native_apps(cfg);
        std::vector<bloc::BehavioralProfile> profiles;
        for (const auto* tl : accounts) {
            profiles.push_back(bloc::profile(
                *tl, bloc::encode(*tl, dataset.graph, cfg.language), native));
        }
        auto communities = bloc::annotate_communities(network, louvain, profiles);
        report["modularity"] = louvain.modularity;
        for (const auto& community : communities) {
            json entry{{"members", community.members},
                       {"size", community.members.size()},
                       {"mean_entropy", community.mean_entropy}};
            if (community.mean_automation) {
                entry["mean_automation"] = *community.mean_automation;
            } else {
                entry["mean_automation"] = nullptr;
            }
            report["communities"].push_back(std::move(entry));
        }
    } else {
        report["modularity"] = nullptr;
    }
    Output communities(communities_path);
    communities.stream() << report.dump(2) << '\n';

    std::cout << "network: " << network.nodes.size() << " node(s), "
              << network.edges.size() << " edge(s), "
              << report["communities"].size() << " community(ies) at threshold "
              << fmt(cfg.threshold) << "\n";
    return 0;
}

int cmd_bot_train(const DataArgs& args, const bloc::RunConfig& cfg,
                  const std::string& model_path) {
    bloc::Dataset dataset = bloc::load_dataset(args.data, args.graph, args.labels);
    print_warnings(dataset.warnings);
    bloc::BotModel model =
        bloc::train_bot_model(dataset, cfg.language, cfg.trees, cfg.seed);

    Output out(model_path);
    bloc::save_bot_model(model, out.stream());
    if (!out.to_stdout()) {
        std::cout << "trained " << cfg.trees << "-tree model over "
                  << model.vocab.size() << " words; saved to " << out.path() << "\n";
    }
    return 0;
}

int cmd_bot_predict(const DataArgs& args, const std::string& model_path) {
    std::ifstream model_in(model_path);
    if (!model_in) throw bloc::data_error("cannot open model file \"" + model_path + "\"");
    bloc::BotModel model = bloc::load_bot_model(model_in);

    bloc::Dataset dataset = bloc::load_dataset(args.data, args.graph);
    print_warnings(dataset.warnings);

    Output out(args.output);
    out.stream() << "account_id,label,score\n";
    for (const auto& tl : dataset.timelines) {
        bloc::Prediction p = bloc::classify_account(model, tl, dataset.graph);
        out.stream() << tl.account_id << ','
                     << (p.label == bloc::kLabelBot ? "bot" : "human") << ','
                     << fmt(p.score) << '\n';
    }
    if (!out.to_stdout()) {
        std::cout << "classified " << dataset.timelines.size() << " account(s) to "
                  << out.path() << "\n";
    }
    return 0;
}

json report_to_json(const bloc::EvalReport& report) {
    json per_fold = json::array();
    for (const auto& fold : report.per_fold) {
        per_fold.push_back(json{{"fold", fold.fold},
                                {"precision", fold.precision},
                                {"recall", fold.recall},
                                {"f1", fold.f1},
                                {"tp", fold.tp},
                                {"fp", fold.fp},
                                {"fn", fold.fn},
                                {"tn", fold.tn}});
    }
    return json{{"task", "bot-detection"},
                {"positive_class", "bot"},
                {"folds", report.folds},
                {"trees", report.trees},
                {"seed", report.seed},
                {"balanced", report.balanced},
                {"precision", report.precision},
                {"recall", report.recall},
                {"f1", report.f1},
                {"confusion",
                 {{"tp", report.tp}, {"fp", report.fp}, {"fn", report.fn}, {"tn", report.tn}}},
                {"per_fold", std::move(per_fold)}};
}

int cmd_bot_eval(const DataArgs& args, const bloc::RunConfig& cfg) {
    if (args.labels.empty()) throw bloc::config_error("bot-eval requires --labels");
    bloc::Dataset dataset = bloc::load_dataset(args.data, args.graph, args.labels);
    print_warnings(dataset.warnings);

    bloc::EvalReport report = bloc::cross_validate(dataset, cfg.folds, cfg.language,
                                                   cfg.trees, cfg.seed, cfg.balance);
    Output out(args.output);
    out.stream() << report_to_json(report).dump(2) << '\n';
    if (!out.to_stdout()) {
        std::cout << "cross-validated (" << cfg.folds << " folds): precision "
                  << fmt(report.precision) << ", recall " << fmt(report.recall)
                  << ", f1 " << fmt(report.f1) << "; report at " << out.path() << "\n";
    }
    return 0;
}

int cmd_coord_eval(const DataArgs& args, const bloc::RunConfig& cfg,
                   const std::string& method_name) {
    if (args.labels.empty()) throw bloc::config_error("coord-eval requires --labels");
    bloc::Dataset dataset = bloc::load_dataset(args.data, args.graph, args.labels);
    print_warnings(dataset.warnings);

    bloc::CoordinationMethod method = bloc::coordination_method_from_name(method_name);
    std::vector<std::string> warnings;
    auto series = bloc::windowed_eval(dataset, method, cfg.language, cfg.window_weeks,
                                      cfg.knn_max_k, &warnings);
    print_warnings(warnings);

    Output out(args.output);
    out.stream() << "weeks,k,precision,recall,f1\n";
    for (const auto& point : series) {
        for (const auto& k : point.knn.per_k) {
            out.stream() << point.weeks << ',' << k.k << ',' << fmt(k.precision) << ','
                         << fmt(k.recall) << ',' << fmt(k.f1) << '\n';
        }
    }
    for (const auto& point : series) {
        std::cout << "week " << point.weeks << ": best f1 " << fmt(point.knn.best_f1)
                  << " at k=" << point.knn.best_k << "\n";
    }
    if (!out.to_stdout()) {
        std::cout << "method " << method_name << ": " << series.size()
                  << " window(s) written to " << out.path() << "\n";
    }
    return 0;
}

void print_version() {
    std::cout << "bloc " << kVersion << "\n"
              << "posts-jsonl schema 1\n"
              << "graph-json schema 1\n"
              << "labels-csv schema 1\n"
              << "bot-model format 1\n"
              << "edges-csv schema 1\n"
              << "communities-json schema 1\n"
              << "eval-report-json schema 1\n"
              << "coord-eval-csv schema 1\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"behavioral language encoder and account classification pipelines"};
    app.require_subcommand(0, 1);

    std::string config_path;
    bool show_version = false;
    app.add_option("--config", config_path, "run configuration file (key = value)");
    app.add_flag("--version", show_version, "print tool and schema versions");

    DataArgs args;
    std::size_t top_words = 0;
    std::string pause_glyphs_flag;
    std::string edges_path = "-";
    std::string communities_path = "-";
    std::string model_path = "-";
    std::string method_name = "bloc";
    std::optional<double> threshold_flag;
    std::optional<int> trees_flag, folds_flag, window_weeks_flag, max_k_flag;
    std::optional<std::int64_t> top_n_flag;
    std::optional<std::uint64_t> seed_flag;
    bool balance_flag = false;

    CLI::App* encode = app.add_subcommand("encode", "emit action/content strings per account");
    add_data_options(encode, args, false);
    encode->add_option("--pause-glyphs", pause_glyphs_flag,
                       "six comma-separated glyphs for the long-pause symbols");

    CLI::App* tokenize = app.add_subcommand("tokenize", "emit word:count multisets per account");
    add_data_options(tokenize, args, false);
    tokenize->add_option("--top-words", top_words, "also print the top K words overall");

    CLI::App* vectorize = app.add_subcommand("vectorize", "emit sparse TF-IDF vectors");
    add_data_options(vectorize, args, false);

    CLI::App* langmodel = app.add_subcommand("langmodel", "emit the symbol transition table");
    add_data_options(langmodel, args, false);

    CLI::App* cluster = app.add_subcommand("cluster", "behavioral similarity network and communities");
    add_data_options(cluster, args, false, false);
    cluster->add_option("--threshold", threshold_flag, "minimum cosine for an edge");
    cluster->add_option("--top-n", top_n_flag, "keep only the N most active accounts");
    cluster->add_option("--seed", seed_flag, "community detection seed");
    cluster->add_option("--edges-out", edges_path, "edge list CSV path; - for stdout");
    cluster->add_option("--communities-out", communities_path,
                        "community report JSON path; - for stdout");

    CLI::App* bot_train = app.add_subcommand("bot-train", "train and save a bot classifier");
    add_data_options(bot_train, args, true, false);
    bot_train->add_option("--trees", trees_flag, "ensemble size");
    bot_train->add_option("--seed", seed_flag, "training seed");
    bot_train->add_option("--model-out", model_path, "model file path; - for stdout");

    CLI::App* bot_predict = app.add_subcommand("bot-predict", "classify accounts with a saved model");
    add_data_options(bot_predict, args, false);
    bot_predict->add_option("--model", model_path, "model file path")->required();

    CLI::App* bot_eval = app.add_subcommand("bot-eval", "cross-validated bot detection report");
    add_data_options(bot_eval, args, true);
    bot_eval->add_option("--folds", folds_flag, "cross-validation folds");
    bot_eval->add_option("--trees", trees_flag, "ensemble size");
    bot_eval->add_option("--seed", seed_flag, "run seed");
    bot_eval->add_flag("--balance", balance_flag, "downsample the majority class");

    CLI::App* coord_eval = app.add_subcommand("coord-eval", "windowed driver detection evaluation");
    add_data_options(coord_eval, args, true);
    coord_eval->add_option("--method", method_name,
                           "bloc|hashtag5|activity|coretweet|combined");
    coord_eval->add_option("--window-weeks", window_weeks_flag, "evaluation window size");
    coord_eval->add_option("--max-k", max_k_flag, "largest neighbor count");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    if (show_version) {
        print_version();
        return 0;
    }
    if (app.get_subcommands().empty()) {
        std::cerr << app.help();
        return kExitConfig;
    }

    try {
        bloc::RunConfig cfg;
        if (!config_path.empty()) cfg = bloc::load_run_config(config_path);

        // flags override the config file; unset keys fall back per command
        if (threshold_flag) cfg.threshold = *threshold_flag;
        if (trees_flag) cfg.trees = *trees_flag;
        if (folds_flag) cfg.folds = *folds_flag;
        if (seed_flag) cfg.seed = *seed_flag;
        if (window_weeks_flag) cfg.window_weeks = *window_weeks_flag;
        if (max_k_flag) cfg.knn_max_k = *max_k_flag;
        if (top_n_flag) cfg.top_n = *top_n_flag;
        if (balance_flag) cfg.balance = true;
        if (!pause_glyphs_flag.empty()) {
            std::istringstream in(pause_glyphs_flag);
            std::string item;
            std::vector<std::string> glyphs;
            while (std::getline(in, item, ',')) glyphs.push_back(item);
            if (glyphs.size() != 6) {
                throw bloc::config_error("--pause-glyphs needs six comma-separated entries");
            }
            std::copy(glyphs.begin(), glyphs.end(), cfg.pause_glyphs.begin());
        }

        if (cluster->parsed()) {
            // behavioral clustering defaults to pause-delimited words with
            // run truncation unless the config says otherwise
            if (!cfg.is_set("p4")) cfg.language.tokenization = bloc::Tokenization::pause;
            if (!cfg.is_set("p6")) cfg.language.truncation_length = 4;
            if (!cfg.is_set("p5")) cfg.language.sort_word_symbols = false;
        }
        cfg.validate();

        if (encode->parsed()) return cmd_encode(args, cfg);
        if (tokenize->parsed()) return cmd_tokenize(args, cfg, top_words);
        if (vectorize->parsed()) return cmd_vectorize(args, cfg);
        if (langmodel->parsed()) return cmd_langmodel(args, cfg);
        if (cluster->parsed()) return cmd_cluster(args, cfg, edges_path, communities_path);
        if (bot_train->parsed()) return cmd_bot_train(args, cfg, model_path);
        if (bot_predict->parsed()) return cmd_bot_predict(args, model_path);
        if (bot_eval->parsed()) return cmd_bot_eval(args, cfg);
        if (coord_eval->parsed()) return cmd_coord_eval(args, cfg, method_name);
        std::cerr << app.help();
        return kExitConfig;
    } catch (const bloc::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const bloc::data_error& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}
