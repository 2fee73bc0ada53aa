#include "bloc/timeline.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "bloc/errors.hpp"

namespace bloc {

using nlohmann::json;

bool SocialGraphContext::contains_edge(std::string_view actor,
                                       std::string_view target) const {
    auto it = friends_of.find(std::string(actor));
    if (it == friends_of.end()) return false;
    return it->second.count(std::string(target)) > 0;
}

const AccountTimeline* Dataset::find(std::string_view account_id) const {
    auto it = std::lower_bound(
        timelines.begin(), timelines.end(), account_id,
        [](const AccountTimeline& tl, std::string_view id) {
            return tl.account_id < id;
        });
    if (it == timelines.end() || it->account_id != account_id) return nullptr;
    return &*it;
}

Relation resolve_relation(std::string_view actor,
                          const std::optional<std::string>& target,
                          const SocialGraphContext& graph) {
    if (!target) return Relation::non_friend;
    if (*target == actor) return Relation::self;
    if (graph.contains_edge(actor, *target)) return Relation::friend_target;
    return Relation::non_friend;
}

namespace {

bool parse_fixed_int(std::string_view text, std::size_t pos, std::size_t len,
                     int& out) {
    if (pos + len > text.size()) return false;
    int value = 0;
    for (std::size_t i = 0; i < len; ++i) {
        char c = text[pos + i];
        if (c < '0' || c > '9') return false;
        value = value * 10 + (c - '0');
    }
    out = value;
    return true;
}

// Howard Hinnant's days-from-civil: days since 1970-01-01 for a proleptic
// Gregorian date.
std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const int era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy =
        (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
        static_cast<unsigned>(d) - 1u;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return static_cast<std::int64_t>(era) * 146097 +
           static_cast<std::int64_t>(doe) - 719468;
}

int days_in_month(int y, int m) {
    static const int lengths[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2) {
        bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
        return leap ? 29 : 28;
    }
    return lengths[m - 1];
}

}  // namespace

std::int64_t parse_rfc3339(std::string_view text) {
    auto fail = [&]() -> std::int64_t {
        throw data_error("invalid RFC 3339 timestamp \"" + std::string(text) +
                         "\"");
    };
    int year, month, day, hour, minute, second;
    if (text.size() < 20) return fail();
    if (!parse_fixed_int(text, 0, 4, year)) return fail();
    if (text[4] != '-' || !parse_fixed_int(text, 5, 2, month)) return fail();
    if (text[7] != '-' || !parse_fixed_int(text, 8, 2, day)) return fail();
    if (text[10] != 'T' && text[10] != 't' && text[10] != ' ') return fail();
    if (!parse_fixed_int(text, 11, 2, hour)) return fail();
    if (text[13] != ':' || !parse_fixed_int(text, 14, 2, minute)) return fail();
    if (text[16] != ':' || !parse_fixed_int(text, 17, 2, second)) return fail();

    if (month < 1 || month > 12 || day < 1 || day > days_in_month(year, month) ||
        hour > 23 || minute > 59 || second > 60) {
        return fail();
    }
    if (second == 60) second = 59;  // fold leap seconds

    std::size_t pos = 19;
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        std::size_t digits = 0;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            ++pos;
            ++digits;
        }
        if (digits == 0) return fail();
    }
    if (pos >= text.size()) return fail();

    std::int64_t offset = 0;
    if (text[pos] == 'Z' || text[pos] == 'z') {
        ++pos;
    } else if (text[pos] == '+' || text[pos] == '-') {
        int sign = text[pos] == '+' ? 1 : -1;
        int oh, om;
        if (!parse_fixed_int(text, pos + 1, 2, oh)) return fail();
        if (pos + 3 >= text.size() || text[pos + 3] != ':') return fail();
        if (!parse_fixed_int(text, pos + 4, 2, om)) return fail();
        if (oh > 23 || om > 59) return fail();
        offset = sign * (oh * 3600 + om * 60);
        pos += 6;
    } else {
        return fail();
    }
    if (pos != text.size()) return fail();

    return days_from_civil(year, month, day) * 86400 + hour * 3600 +
           minute * 60 + second - offset;
}

namespace {

std::optional<std::string> optional_string(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) throw data_error(std::string(key) + " must be a string or null");
    return it->get<std::string>();
}

std::vector<std::string> string_list(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return {};
    if (!it->is_array()) throw data_error(std::string(key) + " must be an array");
    std::vector<std::string> out;
    for (const auto& v : *it) {
        if (!v.is_string()) throw data_error(std::string(key) + " entries must be strings");
        out.push_back(v.get<std::string>());
    }
    return out;
}

Post parse_post_line(const std::string& line) {
    json obj = json::parse(line);  // throws json::parse_error
    if (!obj.is_object()) throw data_error("line is not a JSON object");

    Post post;
    for (const char* key : {"id", "author_id", "created_at", "kind"}) {
        if (!obj.contains(key) || !obj[key].is_string()) {
            throw data_error(std::string("missing or non-string \"") + key + "\"");
        }
    }
    post.post_id = obj["id"].get<std::string>();
    post.author_id = obj["author_id"].get<std::string>();
    post.timestamp = parse_rfc3339(obj["created_at"].get<std::string>());

    std::string kind = obj["kind"].get<std::string>();
    if (kind == "original") {
        post.action_kind = ActionKind::original;
    } else if (kind == "reply") {
        post.action_kind = ActionKind::reply;
    } else if (kind == "reshare") {
        post.action_kind = ActionKind::reshare;
    } else {
        throw data_error("unknown kind \"" + kind + "\"");
    }

    post.target_author_id = optional_string(obj, "target_author_id");
    post.mentions = string_list(obj, "mentions");
    post.hashtags = string_list(obj, "hashtags");
    post.urls = string_list(obj, "urls");
    post.quoted_author_id = optional_string(obj, "quoted_author_id");
    post.reshared_post_id = optional_string(obj, "reshared_post_id");
    post.source_app = optional_string(obj, "source_app");

    if (auto it = obj.find("media_count"); it != obj.end() && !it->is_null()) {
        if (!it->is_number_integer() || it->get<std::int64_t>() < 0) {
            throw data_error("media_count must be a non-negative integer");
        }
        post.media_count = static_cast<int>(it->get<std::int64_t>());
    }
    if (auto it = obj.find("has_text"); it != obj.end() && !it->is_null()) {
        if (!it->is_boolean()) throw data_error("has_text must be a boolean");
        post.has_text = it->get<bool>();
    }

    if (post.action_kind != ActionKind::original && !post.target_author_id) {
        throw data_error("kind \"" + kind + "\" requires target_author_id");
    }
    for (auto& h : post.hashtags) {
        std::transform(h.begin(), h.end(), h.begin(), [](unsigned char c) {
            return static_cast<char>(std::tolower(c));
        });
    }
    return post;
}

}  // namespace

Dataset build_dataset(std::vector<Post> posts, SocialGraphContext graph,
                      std::map<std::string, std::string> labels) {
    Dataset dataset;
    dataset.graph = std::move(graph);

    std::map<std::string, AccountTimeline> by_account;
    std::map<std::string, std::set<std::string>> seen_ids;
    for (auto& post : posts) {
        auto& seen = seen_ids[post.author_id];
        if (!seen.insert(post.post_id).second) {
            dataset.warnings.push_back("duplicate post id \"" + post.post_id +
                                       "\" for account \"" + post.author_id +
                                       "\"; keeping first occurrence");
            continue;
        }
        auto& tl = by_account[post.author_id];
        tl.account_id = post.author_id;
        tl.posts.push_back(std::move(post));
    }
    for (auto& [id, tl] : by_account) {
        std::stable_sort(tl.posts.begin(), tl.posts.end(),
                         [](const Post& a, const Post& b) {
                             return a.timestamp < b.timestamp;
                         });
        dataset.timelines.push_back(std::move(tl));
    }

    static const std::set<std::string> known_labels = {"bot", "human", "driver",
                                                       "control"};
    for (const auto& [account, label] : labels) {
        if (!known_labels.count(label)) {
            throw data_error("unknown label \"" + label + "\" for account \"" +
                             account + "\"");
        }
        if (!dataset.find(account)) {
            throw data_error("label references unknown account \"" + account +
                             "\"");
        }
    }
    dataset.labels = std::move(labels);
    return dataset;
}

SocialGraphContext load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open graph file \"" + path + "\"");
    json obj;
    try {
        in >> obj;
    } catch (const json::parse_error& e) {
        throw data_error("graph file \"" + path + "\": " + e.what());
    }
    if (!obj.is_object()) {
        throw data_error("graph file \"" + path + "\" must hold a JSON object");
    }
    SocialGraphContext graph;
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!it.value().is_array()) {
            throw data_error("graph entry \"" + it.key() + "\" must be an array");
        }
        auto& friends = graph.friends_of[it.key()];
        for (const auto& v : it.value()) {
            if (!v.is_string()) {
                throw data_error("graph entry \"" + it.key() +
                                 "\" must list account id strings");
            }
            friends.insert(v.get<std::string>());
        }
    }
    return graph;
}

std::map<std::string, std::string> load_labels(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open labels file \"" + path + "\"");
    std::map<std::string, std::string> labels;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line_no == 1 && line == "account_id,label") continue;
        auto comma = line.find(',');
        if (comma == std::string::npos || comma == 0 || comma + 1 >= line.size()) {
            throw data_error("labels file \"" + path + "\" line " +
                             std::to_string(line_no) + ": expected account_id,label");
        }
        labels[line.substr(0, comma)] = line.substr(comma + 1);
    }
    return labels;
}

Dataset load_dataset(const std::string& posts_path, const std::string& graph_path,
                     const std::string& labels_path) {
    std::ifstream in(posts_path);
    if (!in) throw data_error("cannot open posts file \"" + posts_path + "\"");

    std::vector<Post> posts;
    std::vector<std::string> problems;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        try {
            posts.push_back(parse_post_line(line));
        } catch (const std::exception& e) {
            problems.push_back("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (!problems.empty()) {
        std::ostringstream report;
        report << posts_path << ": " << problems.size() << " malformed record(s)";
        std::size_t shown = std::min<std::size_t>(problems.size(), 20);
        for (std::size_t i = 0; i < shown; ++i) report << "\n  " << problems[i];
        if (shown < problems.size()) {
            report << "\n  ... and " << (problems.size() - shown) << " more";
        }
        throw data_error(report.str());
    }

    SocialGraphContext graph;
    if (!graph_path.empty()) graph = load_graph(graph_path);
    std::map<std::string, std::string> labels;
    if (!labels_path.empty()) labels = load_labels(labels_path);
    return build_dataset(std::move(posts), std::move(graph), std::move(labels));
}

}  // namespace bloc
