#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "bloc/encoder.hpp"
#include "bloc/timeline.hpp"
#include "bloc/vectorspace.hpp"

namespace bloc {

struct SimilarityPair {
    std::uint32_t a = 0;  // index of the lower-ordered account
    std::uint32_t b = 0;
    double similarity = 0.0;
};

// All unordered pairs, ordered by (a, b). Pair values are independent, so
// the computation is spread across threads.
std::vector<SimilarityPair> pairwise_similarity(
    const std::vector<TfIdfVector>& vectors);

// Weighted undirected account network: edges at or above the threshold,
// singletons removed.
struct SimilarityNetwork {
    std::vector<std::string> nodes;
    std::vector<SimilarityPair> edges;  // indices into nodes
    double threshold = 0.0;
};

SimilarityNetwork threshold_network(const std::vector<std::string>& account_ids,
                                    const std::vector<SimilarityPair>& pairs,
                                    double threshold = 0.98);

struct LouvainResult {
    // node index -> community index, communities numbered densely in
    // order of their lowest member
    std::vector<std::uint32_t> community_of;
    std::vector<std::vector<std::uint32_t>> communities;
    double modularity = 0.0;
    std::vector<double> level_modularity;  // after each aggregation level
};

// Two-phase greedy modularity maximization; node visit order is shuffled
// with the seed and levels stop when the gain drops below 1e-7. Throws
// std::invalid_argument on an empty network.
LouvainResult louvain_communities(const SimilarityNetwork& network,
                                  double resolution = 1.0,
                                  std::uint64_t seed = 0);

// Weighted modularity of an arbitrary assignment on the network; used to
// cross-check the value reported by louvain_communities.
double network_modularity(const SimilarityNetwork& network,
                          const std::vector<std::uint32_t>& community_of,
                          double resolution = 1.0);

// Client applications treated as manual posting.
struct NativeAppList {
    std::set<std::string> names;

    static NativeAppList defaults();
    bool is_native(const std::string& app) const { return names.count(app) > 0; }
};

struct BehavioralProfile {
    std::string account_id;
    double entropy_bits = 0.0;  // 0 for an empty action string
    std::optional<double> automation;  // absent when no post names a source
    std::int64_t post_count = 0;
};

BehavioralProfile profile(const AccountTimeline& timeline,
                          const BlocDocument& doc, const NativeAppList& native);

struct Community {
    std::vector<std::string> members;
    double mean_entropy = 0.0;
    std::optional<double> mean_automation;
};

std::vector<Community> annotate_communities(
    const SimilarityNetwork& network, const LouvainResult& louvain,
    const std::vector<BehavioralProfile>& profiles);

enum class CoordinationMethod { bloc, hashtag5, activity, coretweet, combined };

CoordinationMethod coordination_method_from_name(const std::string& name);
std::string coordination_method_name(CoordinationMethod method);

// Baseline term extraction per account.
TermMultiset hashtag_5gram_terms(const AccountTimeline& timeline);
TermMultiset activity_bucket_terms(const AccountTimeline& timeline);  // 30-min bins
TermMultiset coretweet_terms(const AccountTimeline& timeline);

// TF-IDF vectors for one method over a fixed account set; the bloc method
// uses the supplied language config.
std::vector<TfIdfVector> method_vectors(
    const std::vector<const AccountTimeline*>& accounts,
    const SocialGraphContext& graph, const LanguageConfig& cfg,
    CoordinationMethod method);

// Dense symmetric account-by-account similarity.
struct SimilarityMatrix {
    std::vector<std::string> ids;
    std::vector<double> values;  // row-major n*n

    double at(std::size_t i, std::size_t j) const { return values[i * ids.size() + j]; }
};

SimilarityMatrix method_similarity(
    const std::vector<const AccountTimeline*>& accounts,
    const SocialGraphContext& graph, const LanguageConfig& cfg,
    CoordinationMethod method);

// Maximum over the component methods; a missing or empty vector
// contributes 0 through its cosines.
double combined_similarity(std::initializer_list<double> components);

struct KnnPoint {
    int k = 0;
    std::int64_t tp = 0, fp = 0, fn = 0, tn = 0;
    double precision = 0, recall = 0, f1 = 0;
};

struct KnnReport {
    std::vector<KnnPoint> per_k;
    double best_f1 = 0.0;
    int best_k = 0;
    std::vector<std::string> warnings;
};

// Leave-one-out k-nearest-neighbor majority vote for k = 1..k_max, driver
// as the positive class, vote ties predicting control. Neighbor ranking
// ties break toward the earlier account. k values exceeding the labeled
// set are skipped with a warning. Throws data_error unless both classes
// are present.
KnnReport knn_driver_eval(const SimilarityMatrix& similarity,
                          const std::vector<int>& driver_labels, int k_max = 10);

struct WindowPoint {
    int weeks = 0;
    KnnReport knn;
};

// Cumulative evaluation: prefixes of window_weeks, 2*window_weeks, ...
// starting at the earliest driver post; vectors are rebuilt from the posts
// inside each prefix. Windows whose active accounts miss a class are
// skipped with a warning. Throws data_error when the labeled data spans
// less than one window.
std::vector<WindowPoint> windowed_eval(const Dataset& dataset,
                                       CoordinationMethod method,
                                       const LanguageConfig& cfg,
                                       int window_weeks = 2, int k_max = 10,
                                       std::vector<std::string>* warnings = nullptr);

// The pre-filter used before clustering: accounts ranked by number of
// distinct active days, ties by total posts, then by id.
std::vector<const AccountTimeline*> most_active(const Dataset& dataset,
                                                std::size_t limit);

}  // namespace bloc
