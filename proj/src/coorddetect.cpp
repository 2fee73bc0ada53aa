#include "bloc/coorddetect.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>
#include <unordered_map>

#include "bloc/botdetect.hpp"
#include "bloc/errors.hpp"
#include "bloc/langmodel.hpp"
#include "bloc/tokenizer.hpp"
#include "parallel.hpp"

namespace bloc {

std::vector<SimilarityPair> pairwise_similarity(
    const std::vector<TfIdfVector>& vectors) {
    std::size_t n = vectors.size();
    if (n < 2) return {};
    std::size_t total = n * (n - 1) / 2;
    std::vector<SimilarityPair> pairs(total);
    // slot of (a, .) block: pairs with lower index a come first
    auto offset = [n](std::size_t a) { return a * (2 * n - a - 1) / 2; };
    detail::parallel_for(n - 1, [&](std::size_t a) {
        std::size_t base = offset(a);
        for (std::size_t b = a + 1; b < n; ++b) {
            pairs[base + (b - a - 1)] = {static_cast<std::uint32_t>(a),
                                         static_cast<std::uint32_t>(b),
                                         cosine(vectors[a], vectors[b])};
        }
    });
    return pairs;
}

SimilarityNetwork threshold_network(const std::vector<std::string>& account_ids,
                                    const std::vector<SimilarityPair>& pairs,
                                    double threshold) {
    if (threshold < 0.0 || threshold > 1.0) {
        throw std::invalid_argument("threshold must lie in [0, 1]");
    }
    std::vector<bool> keep(account_ids.size(), false);
    std::vector<SimilarityPair> kept_edges;
    for (const auto& pair : pairs) {
        if (pair.a == pair.b) continue;  // no self-loops
        if (pair.similarity < threshold) continue;
        kept_edges.push_back(pair);
        keep[pair.a] = true;
        keep[pair.b] = true;
    }

    SimilarityNetwork network;
    network.threshold = threshold;
    std::vector<std::uint32_t> remap(account_ids.size(), 0);
    for (std::size_t i = 0; i < account_ids.size(); ++i) {
        if (!keep[i]) continue;
        remap[i] = static_cast<std::uint32_t>(network.nodes.size());
        network.nodes.push_back(account_ids[i]);
    }
    for (auto& edge : kept_edges) {
        edge.a = remap[edge.a];
        edge.b = remap[edge.b];
        network.edges.push_back(edge);
    }
    return network;
}

namespace {

// Working graph for the aggregation phases. self_weight stores the full
// diagonal mass A_ii (twice the collapsed internal edge weight), so that
// modularity is preserved across aggregation.
struct LocalGraph {
    std::vector<std::vector<std::pair<std::uint32_t, double>>> adj;
    std::vector<double> self_weight;
    std::vector<double> strength;
    double two_m = 0.0;

    std::size_t size() const { return adj.size(); }
};

LocalGraph local_graph(const SimilarityNetwork& network) {
    LocalGraph g;
    g.adj.resize(network.nodes.size());
    g.self_weight.assign(network.nodes.size(), 0.0);
    for (const auto& edge : network.edges) {
        g.adj[edge.a].emplace_back(edge.b, edge.similarity);
        g.adj[edge.b].emplace_back(edge.a, edge.similarity);
    }
    g.strength.assign(g.size(), 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
        for (const auto& [j, w] : g.adj[i]) {
            (void)j;
            g.strength[i] += w;
        }
        g.strength[i] += g.self_weight[i];
        g.two_m += g.strength[i];
    }
    return g;
}

double graph_modularity(const LocalGraph& g,
                        const std::vector<std::uint32_t>& comm,
                        double resolution) {
    if (g.two_m == 0.0) return 0.0;
    std::map<std::uint32_t, double> internal, total;
    for (std::size_t i = 0; i < g.size(); ++i) {
        total[comm[i]] += g.strength[i];
        internal[comm[i]] += g.self_weight[i];
        for (const auto& [j, w] : g.adj[i]) {
            if (comm[j] == comm[i]) internal[comm[i]] += w;  // counts both directions
        }
    }
    double q = 0.0;
    for (const auto& [c, in] : internal) {
        double tot = total[c];
        q += in / g.two_m - resolution * (tot / g.two_m) * (tot / g.two_m);
    }
    return q;
}

// One pass of greedy local moves; returns the community assignment.
std::vector<std::uint32_t> one_level(const LocalGraph& g, double resolution,
                                     std::mt19937_64& rng) {
    std::size_t n = g.size();
    std::vector<std::uint32_t> comm(n);
    std::iota(comm.begin(), comm.end(), 0);
    std::vector<double> sum_tot = g.strength;

    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);

    bool moved = true;
    while (moved) {
        moved = false;
        for (std::uint32_t i : order) {
            std::uint32_t current = comm[i];
            // weight from i into each neighboring community
            std::map<std::uint32_t, double> weight_to;
            for (const auto& [j, w] : g.adj[i]) {
                if (j != i) weight_to[comm[j]] += w;
            }
            sum_tot[current] -= g.strength[i];

            double scale = resolution * g.strength[i] / g.two_m;
            double best_gain = weight_to[current] - scale * sum_tot[current];
            std::uint32_t best = current;
            for (const auto& [candidate, w_in] : weight_to) {
                if (candidate == current) continue;
                double gain = w_in - scale * sum_tot[candidate];
                if (gain > best_gain) {
                    best_gain = gain;
                    best = candidate;
                }
            }
            sum_tot[best] += g.strength[i];
            if (best != current) {
                comm[i] = best;
                moved = true;
            }
        }
    }
    return comm;
}

// Renumber communities densely in order of their lowest member.
std::vector<std::uint32_t> compact_labels(const std::vector<std::uint32_t>& comm) {
    std::map<std::uint32_t, std::uint32_t> remap;
    std::vector<std::uint32_t> out(comm.size());
    for (std::size_t i = 0; i < comm.size(); ++i) {
        auto [it, fresh] = remap.emplace(comm[i], static_cast<std::uint32_t>(remap.size()));
        (void)fresh;
        out[i] = it->second;
    }
    return out;
}

LocalGraph aggregate(const LocalGraph& g, const std::vector<std::uint32_t>& comm,
                     std::size_t community_count) {
    LocalGraph out;
    out.adj.resize(community_count);
    out.self_weight.assign(community_count, 0.0);
    std::map<std::pair<std::uint32_t, std::uint32_t>, double> between;
    for (std::size_t i = 0; i < g.size(); ++i) {
        out.self_weight[comm[i]] += g.self_weight[i];
        for (const auto& [j, w] : g.adj[i]) {
            if (j < i) continue;  // each undirected edge once
            std::uint32_t a = comm[i], b = comm[j];
            if (a == b) {
                out.self_weight[a] += 2.0 * w;
            } else {
                between[{std::min(a, b), std::max(a, b)}] += w;
            }
        }
    }
    for (const auto& [key, w] : between) {
        out.adj[key.first].emplace_back(key.second, w);
        out.adj[key.second].emplace_back(key.first, w);
    }
    out.strength.assign(community_count, 0.0);
    for (std::size_t i = 0; i < community_count; ++i) {
        for (const auto& [j, w] : out.adj[i]) {
            (void)j;
            out.strength[i] += w;
        }
        out.strength[i] += out.self_weight[i];
        out.two_m += out.strength[i];
    }
    return out;
}

constexpr double kMinLevelGain = 1e-7;

}  // namespace

double network_modularity(const SimilarityNetwork& network,
                          const std::vector<std::uint32_t>& community_of,
                          double resolution) {
    if (community_of.size() != network.nodes.size()) {
        throw std::invalid_argument("assignment does not cover the network");
    }
    return graph_modularity(local_graph(network), community_of, resolution);
}

LouvainResult louvain_communities(const SimilarityNetwork& network,
                                  double resolution, std::uint64_t seed) {
    if (network.nodes.empty()) throw std::invalid_argument("empty network");

    std::mt19937_64 rng(seed);
    LocalGraph graph = local_graph(network);
    std::size_t n = network.nodes.size();

    std::vector<std::uint32_t> assignment(n);
    std::iota(assignment.begin(), assignment.end(), 0);

    LouvainResult result;
    double q_prev = graph_modularity(
        graph, [&] {
            std::vector<std::uint32_t> identity(graph.size());
            std::iota(identity.begin(), identity.end(), 0);
            return identity;
        }(), resolution);
    result.modularity = q_prev;

    while (true) {
        std::vector<std::uint32_t> comm =
            compact_labels(one_level(graph, resolution, rng));
        double q_new = graph_modularity(graph, comm, resolution);
        if (q_new - q_prev < kMinLevelGain) break;

        for (auto& a : assignment) a = comm[a];
        std::size_t communities =
            1 + *std::max_element(comm.begin(), comm.end());
        graph = aggregate(graph, comm, communities);
        result.level_modularity.push_back(q_new);
        result.modularity = q_new;
        q_prev = q_new;
        if (communities == graph.size() && communities == 1) break;
    }

    result.community_of = compact_labels(assignment);
    std::size_t count = result.community_of.empty()
                            ? 0
                            : 1 + *std::max_element(result.community_of.begin(),
                                                    result.community_of.end());
    result.communities.resize(count);
    for (std::size_t i = 0; i < result.community_of.size(); ++i) {
        result.communities[result.community_of[i]].push_back(
            static_cast<std::uint32_t>(i));
    }
    return result;
}

NativeAppList NativeAppList::defaults() {
    return NativeAppList{{
        "TweetDeck",
        "Twitter for Advertisers",
        "Twitter for Advertisers (legacy)",
        "Twitter for Android",
        "Twitter for iPad",
        "Twitter for iPhone",
        "Twitter for Mac",
        "Twitter Media Studio",
        "Twitter Web App",
        "Twitter Web Client",
    }};
}

BehavioralProfile profile(const AccountTimeline& timeline,
                          const BlocDocument& doc, const NativeAppList& native) {
    BehavioralProfile out;
    out.account_id = timeline.account_id;
    out.post_count = static_cast<std::int64_t>(timeline.posts.size());
    out.entropy_bits =
        doc.action_string.empty() ? 0.0 : symbol_entropy(doc.action_string);
    std::int64_t known = 0, automated = 0;
    for (const auto& post : timeline.posts) {
        if (!post.source_app) continue;
        ++known;
        if (!native.is_native(*post.source_app)) ++automated;
    }
    if (known > 0) {
        out.automation = static_cast<double>(automated) / static_cast<double>(known);
    }
    return out;
}

std::vector<Community> annotate_communities(
    const SimilarityNetwork& network, const LouvainResult& louvain,
    const std::vector<BehavioralProfile>& profiles) {
    std::unordered_map<std::string, const BehavioralProfile*> by_id;
    for (const auto& p : profiles) by_id[p.account_id] = &p;

    std::vector<Community> out;
    for (const auto& members : louvain.communities) {
        Community community;
        double entropy_sum = 0.0;
        double automation_sum = 0.0;
        std::int64_t automation_known = 0;
        for (std::uint32_t node : members) {
            const std::string& id = network.nodes[node];
            community.members.push_back(id);
            auto it = by_id.find(id);
            if (it == by_id.end()) {
                throw std::invalid_argument("missing profile for account \"" + id + "\"");
            }
            entropy_sum += it->second->entropy_bits;
            if (it->second->automation) {
                automation_sum += *it->second->automation;
                ++automation_known;
            }
        }
        community.mean_entropy =
            members.empty() ? 0.0 : entropy_sum / static_cast<double>(members.size());
        if (automation_known > 0) {
            community.mean_automation =
                automation_sum / static_cast<double>(automation_known);
        }
        out.push_back(std::move(community));
    }
    return out;
}

CoordinationMethod coordination_method_from_name(const std::string& name) {
    if (name == "bloc") return CoordinationMethod::bloc;
    if (name == "hashtag5") return CoordinationMethod::hashtag5;
    if (name == "activity") return CoordinationMethod::activity;
    if (name == "coretweet") return CoordinationMethod::coretweet;
    if (name == "combined") return CoordinationMethod::combined;
    throw config_error("unknown coordination method \"" + name + "\"");
}

std::string coordination_method_name(CoordinationMethod method) {
    switch (method) {
        case CoordinationMethod::bloc: return "bloc";
        case CoordinationMethod::hashtag5: return "hashtag5";
        case CoordinationMethod::activity: return "activity";
        case CoordinationMethod::coretweet: return "coretweet";
        case CoordinationMethod::combined: return "combined";
    }
    return "?";
}

TermMultiset hashtag_5gram_terms(const AccountTimeline& timeline) {
    std::vector<std::string> sequence;
    for (const auto& post : timeline.posts) {
        sequence.insert(sequence.end(), post.hashtags.begin(), post.hashtags.end());
    }
    TermMultiset terms;
    constexpr std::size_t n = 5;
    if (sequence.size() < n) return terms;
    for (std::size_t i = 0; i + n <= sequence.size(); ++i) {
        std::string gram;
        for (std::size_t j = 0; j < n; ++j) {
            if (j > 0) gram += '\x1F';  // unit separator keeps tags unambiguous
            gram += sequence[i + j];
        }
        ++terms[gram];
    }
    return terms;
}

TermMultiset activity_bucket_terms(const AccountTimeline& timeline) {
    constexpr std::int64_t bucket_s = 30 * 60;  // epoch-aligned bins
    TermMultiset terms;
    for (const auto& post : timeline.posts) {
        std::int64_t bucket = post.timestamp >= 0
                                  ? post.timestamp / bucket_s
                                  : (post.timestamp - bucket_s + 1) / bucket_s;
        ++terms[std::to_string(bucket)];
    }
    return terms;
}

TermMultiset coretweet_terms(const AccountTimeline& timeline) {
    TermMultiset terms;
    for (const auto& post : timeline.posts) {
        if (post.reshared_post_id) ++terms[*post.reshared_post_id];
    }
    return terms;
}

std::vector<TfIdfVector> method_vectors(
    const std::vector<const AccountTimeline*>& accounts,
    const SocialGraphContext& graph, const LanguageConfig& cfg,
    CoordinationMethod method) {
    if (method == CoordinationMethod::combined) {
        throw std::invalid_argument(
            "combined method has no single vector set; build per-method vectors");
    }
    std::vector<TermMultiset> corpus;
    corpus.reserve(accounts.size());
    for (const auto* tl : accounts) {
        switch (method) {
            case CoordinationMethod::bloc:
                corpus.push_back(tokenize(encode(*tl, graph, cfg), cfg));
                break;
            case CoordinationMethod::hashtag5:
                corpus.push_back(hashtag_5gram_terms(*tl));
                break;
            case CoordinationMethod::activity:
                corpus.push_back(activity_bucket_terms(*tl));
                break;
            case CoordinationMethod::coretweet:
                corpus.push_back(coretweet_terms(*tl));
                break;
            case CoordinationMethod::combined:
                break;  // handled above
        }
    }
    Vocabulary vocab = build_vocabulary(corpus);
    std::vector<TfIdfVector> vectors;
    vectors.reserve(accounts.size());
    for (std::size_t i = 0; i < accounts.size(); ++i) {
        vectors.push_back(tf_idf(corpus[i], vocab, accounts[i]->account_id));
    }
    return vectors;
}

namespace {

SimilarityMatrix matrix_from_vectors(const std::vector<TfIdfVector>& vectors) {
    SimilarityMatrix matrix;
    std::size_t n = vectors.size();
    matrix.ids.reserve(n);
    for (const auto& v : vectors) matrix.ids.push_back(v.account_id);
    matrix.values.assign(n * n, 0.0);
    detail::parallel_for(n, [&](std::size_t i) {
        for (std::size_t j = i; j < n; ++j) {
            double s = cosine(vectors[i], vectors[j]);
            matrix.values[i * n + j] = s;
            matrix.values[j * n + i] = s;
        }
    });
    return matrix;
}

}  // namespace

SimilarityMatrix method_similarity(
    const std::vector<const AccountTimeline*>& accounts,
    const SocialGraphContext& graph, const LanguageConfig& cfg,
    CoordinationMethod method) {
    if (method != CoordinationMethod::combined) {
        return matrix_from_vectors(method_vectors(accounts, graph, cfg, method));
    }
    SimilarityMatrix combined;
    bool first = true;
    for (CoordinationMethod component :
         {CoordinationMethod::bloc, CoordinationMethod::hashtag5,
          CoordinationMethod::activity, CoordinationMethod::coretweet}) {
        SimilarityMatrix m = method_similarity(accounts, graph, cfg, component);
        if (first) {
            combined = std::move(m);
            first = false;
        } else {
            for (std::size_t i = 0; i < combined.values.size(); ++i) {
                combined.values[i] = std::max(combined.values[i], m.values[i]);
            }
        }
    }
    return combined;
}

double combined_similarity(std::initializer_list<double> components) {
    double best = 0.0;
    for (double c : components) best = std::max(best, c);
    return best;
}

KnnReport knn_driver_eval(const SimilarityMatrix& similarity,
                          const std::vector<int>& driver_labels, int k_max) {
    std::size_t n = similarity.ids.size();
    if (driver_labels.size() != n) {
        throw std::invalid_argument("labels do not cover the similarity matrix");
    }
    std::int64_t drivers = std::accumulate(driver_labels.begin(),
                                           driver_labels.end(), std::int64_t{0});
    if (drivers == 0 || drivers == static_cast<std::int64_t>(n)) {
        throw data_error("driver evaluation needs both driver and control accounts");
    }

    // neighbor order per account: similarity descending, index ascending
    std::vector<std::vector<std::uint32_t>> neighbors(n);
    detail::parallel_for(n, [&](std::size_t i) {
        auto& order = neighbors[i];
        order.reserve(n - 1);
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) order.push_back(static_cast<std::uint32_t>(j));
        }
        std::stable_sort(order.begin(), order.end(),
                         [&](std::uint32_t a, std::uint32_t b) {
                             return similarity.at(i, a) > similarity.at(i, b);
                         });
    });

    KnnReport report;
    for (int k = 1; k <= k_max; ++k) {
        if (static_cast<std::size_t>(k) > n - 1) {
            report.warnings.push_back("k=" + std::to_string(k) +
                                      " exceeds available neighbors; skipped");
            continue;
        }
        KnnPoint point;
        point.k = k;
        for (std::size_t i = 0; i < n; ++i) {
            int votes = 0;
            for (int t = 0; t < k; ++t) votes += driver_labels[neighbors[i][static_cast<std::size_t>(t)]];
            bool predicted_driver = 2 * votes > k;  // vote tie -> control
            if (driver_labels[i] == 1) {
                (predicted_driver ? point.tp : point.fn) += 1;
            } else {
                (predicted_driver ? point.fp : point.tn) += 1;
            }
        }
        point.precision = point.tp + point.fp == 0
                              ? 0.0
                              : static_cast<double>(point.tp) /
                                    static_cast<double>(point.tp + point.fp);
        point.recall = point.tp + point.fn == 0
                           ? 0.0
                           : static_cast<double>(point.tp) /
                                 static_cast<double>(point.tp + point.fn);
        point.f1 = f1_score(point.precision, point.recall);
        if (report.best_k == 0 || point.f1 > report.best_f1) {
            report.best_f1 = point.f1;
            report.best_k = k;
        }
        report.per_k.push_back(point);
    }
    return report;
}

std::vector<WindowPoint> windowed_eval(const Dataset& dataset,
                                       CoordinationMethod method,
                                       const LanguageConfig& cfg,
                                       int window_weeks, int k_max,
                                       std::vector<std::string>* warnings) {
    if (window_weeks < 1) throw config_error("window must be at least one week");

    struct Labeled {
        const AccountTimeline* timeline;
        int driver;
    };
    std::vector<Labeled> labeled;
    for (const auto& tl : dataset.timelines) {
        auto it = dataset.labels.find(tl.account_id);
        if (it == dataset.labels.end()) continue;
        if (it->second == "driver") {
            labeled.push_back({&tl, 1});
        } else if (it->second == "control") {
            labeled.push_back({&tl, 0});
        } else {
            throw data_error("coordination evaluation needs driver/control labels; "
                             "account \"" + tl.account_id + "\" is labeled \"" +
                             it->second + "\"");
        }
    }
    if (labeled.empty()) throw data_error("dataset has no driver/control labels");

    std::int64_t first_driver_post = std::numeric_limits<std::int64_t>::max();
    std::int64_t last_post = std::numeric_limits<std::int64_t>::min();
    for (const auto& entry : labeled) {
        if (entry.timeline->posts.empty()) continue;
        if (entry.driver == 1) {
            first_driver_post =
                std::min(first_driver_post, entry.timeline->posts.front().timestamp);
        }
        last_post = std::max(last_post, entry.timeline->posts.back().timestamp);
    }
    if (first_driver_post == std::numeric_limits<std::int64_t>::max()) {
        throw data_error("no driver posts in dataset");
    }

    const std::int64_t window_s = static_cast<std::int64_t>(window_weeks) * 7 * 86400;
    std::int64_t span = last_post - first_driver_post;
    if (span < window_s) {
        throw data_error("labeled data spans less than one evaluation window");
    }
    std::int64_t window_count = (span + window_s - 1) / window_s;

    std::vector<WindowPoint> series;
    for (std::int64_t w = 1; w <= window_count; ++w) {
        std::int64_t cutoff = first_driver_post + w * window_s;

        std::vector<AccountTimeline> truncated;
        std::vector<int> labels;
        for (const auto& entry : labeled) {
            AccountTimeline tl;
            tl.account_id = entry.timeline->account_id;
            for (const auto& post : entry.timeline->posts) {
                if (post.timestamp >= first_driver_post && post.timestamp < cutoff) {
                    tl.posts.push_back(post);
                }
            }
            if (tl.posts.empty()) continue;  // inactive in this prefix
            truncated.push_back(std::move(tl));
            labels.push_back(entry.driver);
        }

        bool has_driver = std::find(labels.begin(), labels.end(), 1) != labels.end();
        bool has_control = std::find(labels.begin(), labels.end(), 0) != labels.end();
        if (!has_driver || !has_control) {
            if (warnings) {
                warnings->push_back("window of " + std::to_string(w * window_weeks) +
                                    " weeks lacks both classes; skipped");
            }
            continue;
        }

        std::vector<const AccountTimeline*> accounts;
        accounts.reserve(truncated.size());
        for (const auto& tl : truncated) accounts.push_back(&tl);
        SimilarityMatrix matrix = method_similarity(accounts, dataset.graph, cfg, method);

        WindowPoint point;
        point.weeks = static_cast<int>(w) * window_weeks;
        point.knn = knn_driver_eval(matrix, labels, k_max);
        series.push_back(std::move(point));
    }
    return series;
}

std::vector<const AccountTimeline*> most_active(const Dataset& dataset,
                                                std::size_t limit) {
    struct Ranked {
        const AccountTimeline* timeline;
        std::size_t active_days;
        std::size_t posts;
    };
    std::vector<Ranked> ranked;
    ranked.reserve(dataset.timelines.size());
    for (const auto& tl : dataset.timelines) {
        std::set<std::int64_t> days;
        for (const auto& post : tl.posts) {
            std::int64_t day = post.timestamp >= 0
                                   ? post.timestamp / 86400
                                   : (post.timestamp - 86399) / 86400;
            days.insert(day);
        }
        ranked.push_back({&tl, days.size(), tl.posts.size()});
    }
    std::sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
        if (a.active_days != b.active_days) return a.active_days > b.active_days;
        if (a.posts != b.posts) return a.posts > b.posts;
        return a.timeline->account_id < b.timeline->account_id;
    });
    if (ranked.size() > limit) ranked.resize(limit);
    std::vector<const AccountTimeline*> out;
    out.reserve(ranked.size());
    for (const auto& r : ranked) out.push_back(r.timeline);
    return out;
}

}  // namespace bloc
