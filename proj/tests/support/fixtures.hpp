#pragma once

// Shared test fixtures: hand-built timelines matching the documented
// golden encodings, plus seeded synthetic corpora for the end-to-end
// detection suites.

#include <unistd.h>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bloc/timeline.hpp"

namespace fixtures {

using bloc::ActionKind;
using bloc::Dataset;
using bloc::Post;
using bloc::SocialGraphContext;

inline Post make_post(std::string id, std::string author, std::int64_t ts,
                      ActionKind kind,
                      std::optional<std::string> target = std::nullopt) {
    Post p;
    p.post_id = std::move(id);
    p.author_id = std::move(author);
    p.timestamp = ts;
    p.action_kind = kind;
    p.target_author_id = std::move(target);
    return p;
}

// Three tweets by one account: a reply to a non-friend carrying one image,
// one non-friend mention and text; an original with two non-friend
// mentions and text; and a reshare of a non-friend with five non-friend
// mentions, one link and text. Gaps exceed the one-minute session
// threshold, giving action p.T.r and content (Emt)(mmt)(mmmmmUt).
inline Dataset nasa_dataset() {
    std::vector<Post> posts;
    Post reply = make_post("n1", "nasa", 1000, ActionKind::reply, "alex");
    reply.media_count = 1;
    reply.mentions = {"alex"};
    reply.has_text = true;
    posts.push_back(reply);

    Post original = make_post("n2", "nasa", 1300, ActionKind::original);
    original.mentions = {"alex", "blair"};
    original.has_text = true;
    posts.push_back(original);

    Post reshare = make_post("n3", "nasa", 2000, ActionKind::reshare, "alex");
    reshare.mentions = {"alex", "blair", "casey", "drew", "emery"};
    reshare.urls = {"https://example.org/launch"};
    reshare.has_text = true;
    reshare.reshared_post_id = "orig9";
    posts.push_back(reshare);

    return bloc::build_dataset(std::move(posts));
}

// Four actions with 150 s / 50 s / 3 d gaps: a text-only post, a reply to
// a non-friend with two images and a hashtag, a self-reply mentioning a
// friend with one link, and a reshare of a friend mentioning a non-friend.
// f1 gives T.p(pi).R, f2 gives T t_h p (pi) t_w R.
inline Dataset alice_dataset() {
    std::vector<Post> posts;
    std::int64_t t0 = 10'000;

    Post first = make_post("a1", "alice", t0, ActionKind::original);
    first.has_text = true;
    posts.push_back(first);

    Post reply = make_post("a2", "alice", t0 + 150, ActionKind::reply, "carol");
    reply.media_count = 2;
    reply.hashtags = {"space"};
    posts.push_back(reply);

    Post self_reply = make_post("a3", "alice", t0 + 200, ActionKind::reply, "alice");
    self_reply.mentions = {"bob"};
    self_reply.urls = {"https://example.org"};
    posts.push_back(self_reply);

    Post reshare = make_post("a4", "alice", t0 + 200 + 3 * 86400,
                             ActionKind::reshare, "bob");
    reshare.mentions = {"dave"};
    reshare.reshared_post_id = "b7";
    posts.push_back(reshare);

    SocialGraphContext graph;
    graph.friends_of["alice"] = {"bob"};
    return bloc::build_dataset(std::move(posts), std::move(graph));
}

// ---------------------------------------------------------------------
// Synthetic supervised corpus: bursty reshare bots against paced accounts
// that mostly post or reply with text. Separable by construction.

struct BotCorpusOptions {
    int bots = 100;
    int humans = 100;
    std::uint64_t seed = 7;
};

inline Dataset synthetic_bot_dataset(const BotCorpusOptions& options = {}) {
    std::mt19937_64 rng(options.seed);
    std::vector<Post> posts;
    std::map<std::string, std::string> labels;
    std::int64_t base = 1'600'000'000;
    int post_serial = 0;

    auto next_id = [&post_serial]() { return "p" + std::to_string(post_serial++); };

    for (int b = 0; b < options.bots; ++b) {
        char name[16];
        std::snprintf(name, sizeof(name), "bot%03d", b);
        labels[name] = "bot";
        std::int64_t t = base + std::uniform_int_distribution<int>(0, 86'400)(rng);
        int bursts = std::uniform_int_distribution<int>(4, 7)(rng);
        for (int s = 0; s < bursts; ++s) {
            int burst_len = std::uniform_int_distribution<int>(8, 14)(rng);
            for (int j = 0; j < burst_len; ++j) {
                Post p = make_post(next_id(), name, t, ActionKind::reshare, "feed");
                p.reshared_post_id = "src" + std::to_string(
                    std::uniform_int_distribution<int>(0, 5000)(rng));
                posts.push_back(p);
                t += std::uniform_int_distribution<int>(5, 20)(rng);
            }
            t += std::uniform_int_distribution<int>(2 * 3600, 5 * 3600)(rng);
        }
    }

    for (int h = 0; h < options.humans; ++h) {
        char name[16];
        std::snprintf(name, sizeof(name), "hum%03d", h);
        labels[name] = "human";
        std::int64_t t = base + std::uniform_int_distribution<int>(0, 86'400)(rng);
        int count = std::uniform_int_distribution<int>(30, 60)(rng);
        for (int j = 0; j < count; ++j) {
            int roll = std::uniform_int_distribution<int>(0, 9)(rng);
            Post p;
            if (roll < 5) {
                p = make_post(next_id(), name, t, ActionKind::original);
                p.has_text = true;
            } else if (roll < 8) {
                p = make_post(next_id(), name, t, ActionKind::reply, "someone");
                p.has_text = true;
            } else {
                p = make_post(next_id(), name, t, ActionKind::reshare, "someone");
                p.reshared_post_id = "src" + std::to_string(
                    std::uniform_int_distribution<int>(0, 5000)(rng));
            }
            posts.push_back(p);
            t += std::uniform_int_distribution<int>(2 * 3600, 2 * 86'400)(rng);
        }
    }

    return bloc::build_dataset(std::move(posts), {}, std::move(labels));
}

// ---------------------------------------------------------------------
// Synthetic campaign: drivers reshare from a common pool in bursts, while
// controls post at a human pace and share a few reshares only with one
// paired control, so both classes have in-class nearest neighbors.

struct CampaignOptions {
    int drivers = 20;
    int controls = 200;
    int weeks = 4;
    bool identical_drivers = false;  // byte-identical driver timelines
    std::uint64_t seed = 11;
};

inline Dataset synthetic_campaign_dataset(const CampaignOptions& options = {}) {
    std::mt19937_64 rng(options.seed);
    std::vector<Post> posts;
    std::map<std::string, std::string> labels;
    std::int64_t base = 1'650'000'000;
    int post_serial = 0;
    auto next_id = [&post_serial]() { return "c" + std::to_string(post_serial++); };

    const std::int64_t horizon = static_cast<std::int64_t>(options.weeks) * 7 * 86'400;

    for (int d = 0; d < options.drivers; ++d) {
        char name[16];
        std::snprintf(name, sizeof(name), "drv%03d", d);
        labels[name] = "driver";
        std::int64_t t = base;  // drivers define the campaign start
        int day = 0;
        int pool_cursor = options.identical_drivers ? 0 : d;
        while (t < base + horizon) {
            int burst_len = options.identical_drivers
                                ? 10
                                : std::uniform_int_distribution<int>(8, 12)(rng);
            for (int j = 0; j < burst_len; ++j) {
                Post p = make_post(next_id(), name, t, ActionKind::reshare, "target");
                p.reshared_post_id =
                    "campaign" + std::to_string(pool_cursor % 50);
                ++pool_cursor;
                posts.push_back(p);
                t += options.identical_drivers
                         ? 10
                         : std::uniform_int_distribution<int>(5, 25)(rng);
            }
            ++day;
            t = base + static_cast<std::int64_t>(day) * 86'400 +
                (options.identical_drivers
                     ? 0
                     : std::uniform_int_distribution<int>(0, 3600)(rng));
        }
    }

    for (int c = 0; c < options.controls; ++c) {
        char name[16];
        std::snprintf(name, sizeof(name), "ctl%03d", c);
        labels[name] = "control";
        std::int64_t t = base + std::uniform_int_distribution<int>(0, 86'400)(rng);
        int pair = c / 2;
        int quota = std::uniform_int_distribution<int>(25, 40)(rng);
        int shared_left = 3;
        for (int j = 0; j < quota && t < base + horizon; ++j) {
            int roll = std::uniform_int_distribution<int>(0, 9)(rng);
            Post p;
            if (roll < 4) {
                p = make_post(next_id(), name, t, ActionKind::original);
                p.has_text = true;
                if (roll == 0) p.hashtags = {"news"};
            } else if (roll < 6) {
                p = make_post(next_id(), name, t, ActionKind::reply, "someone");
                p.has_text = true;
            } else if (shared_left > 0) {
                p = make_post(next_id(), name, t, ActionKind::reshare, "someone");
                p.reshared_post_id =
                    "pair" + std::to_string(pair) + "_" + std::to_string(3 - shared_left);
                --shared_left;
            } else {
                p = make_post(next_id(), name, t, ActionKind::reshare, "someone");
                p.reshared_post_id = "solo_" + std::string(name) + "_" +
                                     std::to_string(j);
            }
            posts.push_back(p);
            t += std::uniform_int_distribution<int>(4 * 3600, 86'400)(rng);
        }
    }

    return bloc::build_dataset(std::move(posts), {}, std::move(labels));
}

// ---------------------------------------------------------------------
// Random timelines for property tests.

inline bloc::AccountTimeline random_timeline(std::mt19937_64& rng,
                                             const std::string& account_id,
                                             int max_posts = 40) {
    bloc::AccountTimeline tl;
    tl.account_id = account_id;
    int count = std::uniform_int_distribution<int>(0, max_posts)(rng);
    std::int64_t t = 1'500'000'000 + std::uniform_int_distribution<int>(0, 1000)(rng);
    for (int i = 0; i < count; ++i) {
        int kind = std::uniform_int_distribution<int>(0, 2)(rng);
        Post p;
        switch (kind) {
            case 0:
                p = make_post("r" + account_id + std::to_string(i), account_id, t,
                              ActionKind::original);
                break;
            case 1:
                p = make_post("r" + account_id + std::to_string(i), account_id, t,
                              ActionKind::reply,
                              std::uniform_int_distribution<int>(0, 1)(rng)
                                  ? account_id
                                  : "peer");
                break;
            default:
                p = make_post("r" + account_id + std::to_string(i), account_id, t,
                              ActionKind::reshare, "peer");
                p.reshared_post_id = "s" + std::to_string(
                    std::uniform_int_distribution<int>(0, 20)(rng));
                break;
        }
        p.has_text = std::uniform_int_distribution<int>(0, 1)(rng) == 1;
        p.media_count = std::uniform_int_distribution<int>(0, 3)(rng);
        int hashtags = std::uniform_int_distribution<int>(0, 2)(rng);
        for (int h = 0; h < hashtags; ++h) p.hashtags.push_back("tag" + std::to_string(h));
        if (std::uniform_int_distribution<int>(0, 3)(rng) == 0) {
            p.urls.push_back("https://example.org");
        }
        tl.posts.push_back(p);
        // mix short and long gaps so both pause alphabets get exercised
        static const std::int64_t gaps[] = {0, 5, 30, 59, 60, 61, 150, 3600,
                                            86'400, 604'800, 2'592'000, 31'536'000};
        t += gaps[std::uniform_int_distribution<std::size_t>(0, 11)(rng)];
    }
    return tl;
}

// ---------------------------------------------------------------------
// File writers for CLI-level tests.

inline std::string format_rfc3339(std::int64_t unix_s) {
    // civil-from-days inverse of the loader's day arithmetic
    std::int64_t days = unix_s >= 0 ? unix_s / 86'400
                                    : (unix_s - 86'399) / 86'400;
    std::int64_t rem = unix_s - days * 86'400;
    std::int64_t z = days + 719'468;
    std::int64_t era = (z >= 0 ? z : z - 146'096) / 146'097;
    std::uint64_t doe = static_cast<std::uint64_t>(z - era * 146'097);
    std::uint64_t yoe = (doe - doe / 1460 + doe / 36'524 - doe / 146'096) / 365;
    std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    std::uint64_t doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    std::uint64_t mp = (5 * doy + 2) / 153;
    std::uint64_t day = doy - (153 * mp + 2) / 5 + 1;
    std::uint64_t month = mp < 10 ? mp + 3 : mp - 9;
    if (month <= 2) ++y;
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%04lld-%02llu-%02lluT%02lld:%02lld:%02lldZ",
                  static_cast<long long>(y), static_cast<unsigned long long>(month),
                  static_cast<unsigned long long>(day),
                  static_cast<long long>(rem / 3600),
                  static_cast<long long>((rem / 60) % 60),
                  static_cast<long long>(rem % 60));
    return buffer;
}

inline nlohmann::json post_to_json(const Post& post) {
    nlohmann::json obj{
        {"id", post.post_id},
        {"author_id", post.author_id},
        {"created_at", format_rfc3339(post.timestamp)},
        {"kind", post.action_kind == ActionKind::original ? "original"
                 : post.action_kind == ActionKind::reply  ? "reply"
                                                          : "reshare"},
        {"mentions", post.mentions},
        {"hashtags", post.hashtags},
        {"urls", post.urls},
        {"media_count", post.media_count},
        {"has_text", post.has_text},
    };
    obj["target_author_id"] =
        post.target_author_id ? nlohmann::json(*post.target_author_id) : nullptr;
    obj["quoted_author_id"] =
        post.quoted_author_id ? nlohmann::json(*post.quoted_author_id) : nullptr;
    obj["reshared_post_id"] =
        post.reshared_post_id ? nlohmann::json(*post.reshared_post_id) : nullptr;
    obj["source_app"] = post.source_app ? nlohmann::json(*post.source_app) : nullptr;
    return obj;
}

inline void write_jsonl(const Dataset& dataset, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    for (const auto& tl : dataset.timelines) {
        for (const auto& post : tl.posts) {
            out << post_to_json(post).dump() << "\n";
        }
    }
}

inline void write_labels(const Dataset& dataset, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    out << "account_id,label\n";
    for (const auto& [account, label] : dataset.labels) {
        out << account << ',' << label << "\n";
    }
}

inline void write_graph(const SocialGraphContext& graph,
                        const std::filesystem::path& path) {
    nlohmann::json obj = nlohmann::json::object();
    for (const auto& [account, friends] : graph.friends_of) {
        std::vector<std::string> sorted(friends.begin(), friends.end());
        std::sort(sorted.begin(), sorted.end());
        obj[account] = sorted;
    }
    std::ofstream out(path, std::ios::binary);
    out << obj.dump(2) << "\n";
}

// Unique scratch directory, removed on destruction.
class TempDir {
  public:
    TempDir() {
        auto base = std::filesystem::temp_directory_path();
        for (int attempt = 0; attempt < 1000; ++attempt) {
            auto candidate = base / ("bloc_test_" + std::to_string(::getpid()) + "_" +
                                     std::to_string(counter_++));
            std::error_code ec;
            if (std::filesystem::create_directory(candidate, ec)) {
                path_ = candidate;
                return;
            }
        }
        throw std::runtime_error("cannot create temp directory");
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }

  private:
    static inline int counter_ = 0;
    std::filesystem::path path_;
};

}  // namespace fixtures
