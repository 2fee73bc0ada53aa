#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace bloc {

enum class ActionKind { original, reply, reshare };

// One social-media message, platform-agnostic. Timestamps are unix
// seconds; ordering between posts is by timestamp with input order
// preserved on ties.
struct Post {
    std::string post_id;
    std::string author_id;
    std::int64_t timestamp = 0;
    ActionKind action_kind = ActionKind::original;
    std::optional<std::string> target_author_id;
    std::vector<std::string> mentions;
    std::vector<std::string> hashtags;
    std::vector<std::string> urls;
    int media_count = 0;
    bool has_text = false;
    std::optional<std::string> quoted_author_id;
    std::optional<std::string> reshared_post_id;
    std::optional<std::string> source_app;

    bool operator==(const Post&) const = default;
};

// Outgoing-follow sets; an absent account has an empty friend set.
struct SocialGraphContext {
    std::unordered_map<std::string, std::unordered_set<std::string>> friends_of;

    bool contains_edge(std::string_view actor, std::string_view target) const;
};

struct AccountTimeline {
    std::string account_id;
    std::vector<Post> posts;  // ascending by timestamp, unique post_id

    bool operator==(const AccountTimeline&) const = default;
};

struct Dataset {
    std::vector<AccountTimeline> timelines;  // sorted by account_id
    SocialGraphContext graph;
    std::map<std::string, std::string> labels;  // account_id -> label
    std::vector<std::string> warnings;          // non-fatal load notes

    const AccountTimeline* find(std::string_view account_id) const;
};

enum class Relation { self, friend_target, non_friend };

// self iff target == actor; friend iff target is in the actor's outgoing
// follow set; non_friend otherwise (including absent target or graph entry).
Relation resolve_relation(std::string_view actor,
                          const std::optional<std::string>& target,
                          const SocialGraphContext& graph);

// Parses an RFC 3339 timestamp ("2021-01-04T10:00:00Z", optional
// fractional seconds and numeric offsets) to unix seconds, truncating any
// fraction. Throws data_error on malformed input.
std::int64_t parse_rfc3339(std::string_view text);

// Reads one JSON Lines post file plus optional graph (JSON object mapping
// account id to followed ids) and labels (CSV account_id,label). Malformed
// lines fail the load with a line-numbered report; duplicate post ids keep
// the first occurrence and add a warning.
Dataset load_dataset(const std::string& posts_path,
                     const std::string& graph_path = {},
                     const std::string& labels_path = {});

SocialGraphContext load_graph(const std::string& path);
std::map<std::string, std::string> load_labels(const std::string& path);

// Assembles a dataset from in-memory posts; shares the sorting,
// deduplication, and label validation used by load_dataset.
Dataset build_dataset(std::vector<Post> posts, SocialGraphContext graph = {},
                      std::map<std::string, std::string> labels = {});

}  // namespace bloc
