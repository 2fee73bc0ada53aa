#include "bloc/encoder.hpp"

#include <stdexcept>

#include "bloc/errors.hpp"

namespace bloc {

namespace {

constexpr std::int64_t kHour = 3600;
constexpr std::int64_t kDay = 86400;
constexpr std::int64_t kWeek = 7 * kDay;
constexpr std::int64_t kMonth = 30 * kDay;
constexpr std::int64_t kYear = 365 * kDay;

}  // namespace

void LanguageConfig::validate() const {
    if (session_threshold_s <= 0) {
        throw config_error("p1 (session threshold) must be positive");
    }
    if (tokenization == Tokenization::ngram && ngram_size < 1) {
        throw config_error("n-gram size must be at least 1");
    }
    if (truncation_length != 0 && truncation_length < 2) {
        throw config_error("p6 (truncation length) must be 0 (off) or >= 2");
    }
}

LanguageConfig bigram_defaults() {
    LanguageConfig cfg;
    cfg.session_threshold_s = 60;
    cfg.pause_alphabet = PauseAlphabet::f2;
    cfg.tokenization = Tokenization::ngram;
    cfg.ngram_size = 2;
    return cfg;
}

LanguageConfig pause_word_defaults() {
    LanguageConfig cfg;
    cfg.session_threshold_s = 60;
    cfg.pause_alphabet = PauseAlphabet::f2;
    cfg.tokenization = Tokenization::pause;
    cfg.sort_word_symbols = false;
    cfg.truncation_length = 4;
    return cfg;
}

Symbol action_symbol(const Post& post, const SocialGraphContext& graph) {
    switch (post.action_kind) {
        case ActionKind::original:
            return Symbol::post;
        case ActionKind::reply:
            switch (resolve_relation(post.author_id, post.target_author_id, graph)) {
                case Relation::self: return Symbol::reply_to_self;
                case Relation::friend_target: return Symbol::reply_to_friend;
                case Relation::non_friend: return Symbol::reply_to_non_friend;
            }
            break;
        case ActionKind::reshare:
            switch (resolve_relation(post.author_id, post.target_author_id, graph)) {
                case Relation::self: return Symbol::reshare_of_self;
                case Relation::friend_target: return Symbol::reshare_of_friend;
                case Relation::non_friend: return Symbol::reshare_of_non_friend;
            }
            break;
    }
    return Symbol::post;  // unreachable
}

std::optional<Symbol> pause_symbol(std::int64_t delta_s,
                                   const LanguageConfig& cfg) {
    if (delta_s < 0) {
        throw std::invalid_argument("negative gap between actions");
    }
    if (delta_s < cfg.session_threshold_s) return std::nullopt;
    if (cfg.pause_alphabet == PauseAlphabet::f1) return Symbol::session_break;
    if (delta_s < kHour) return Symbol::gap_under_hour;
    if (delta_s < kDay) return Symbol::gap_under_day;
    if (delta_s < kWeek) return Symbol::gap_under_week;
    if (delta_s < kMonth) return Symbol::gap_under_month;
    if (delta_s < kYear) return Symbol::gap_under_year;
    return Symbol::gap_over_year;
}

std::vector<Symbol> content_symbols(const Post& post,
                                    const SocialGraphContext& graph) {
    std::vector<Symbol> word;
    for (int i = 0; i < post.media_count; ++i) word.push_back(Symbol::media);
    for (std::size_t i = 0; i < post.hashtags.size(); ++i) {
        word.push_back(Symbol::hashtag);
    }
    int friend_mentions = 0;
    int other_mentions = 0;
    for (const auto& mention : post.mentions) {
        // a self-mention counts as a friend mention
        if (resolve_relation(post.author_id, mention, graph) == Relation::non_friend) {
            ++other_mentions;
        } else {
            ++friend_mentions;
        }
    }
    for (int i = 0; i < friend_mentions; ++i) word.push_back(Symbol::mention_of_friend);
    for (int i = 0; i < other_mentions; ++i) word.push_back(Symbol::mention_of_non_friend);
    if (post.quoted_author_id) {
        word.push_back(*post.quoted_author_id == post.author_id
                           ? Symbol::quote_of_self
                           : Symbol::quote_of_other);
    }
    if (post.has_text) word.push_back(Symbol::text);
    for (std::size_t i = 0; i < post.urls.size(); ++i) word.push_back(Symbol::link);
    return word;
}

BlocDocument encode(const AccountTimeline& timeline,
                    const SocialGraphContext& graph,
                    const LanguageConfig& cfg) {
    cfg.validate();
    BlocDocument doc;
    doc.account_id = timeline.account_id;
    if (timeline.posts.empty()) return doc;

    std::vector<std::vector<Symbol>> post_words;
    std::vector<std::size_t> session_of_post;
    std::size_t session = 0;

    doc.session_boundaries.push_back(0);
    for (std::size_t i = 0; i < timeline.posts.size(); ++i) {
        const Post& post = timeline.posts[i];
        if (i > 0) {
            std::int64_t delta = post.timestamp - timeline.posts[i - 1].timestamp;
            if (auto pause = pause_symbol(delta, cfg)) {
                doc.action_string.push_back(*pause);
                doc.session_boundaries.push_back(doc.action_string.size());
                ++session;
            }
        }
        doc.action_string.push_back(action_symbol(post, graph));
        post_words.push_back(content_symbols(post, graph));
        session_of_post.push_back(session);
    }

    if (cfg.sessions_as_content_words) {
        doc.content_words.resize(session + 1);
        for (std::size_t i = 0; i < post_words.size(); ++i) {
            auto& word = doc.content_words[session_of_post[i]];
            word.insert(word.end(), post_words[i].begin(), post_words[i].end());
        }
    } else {
        doc.content_words = std::move(post_words);
    }
    return doc;
}

}  // namespace bloc
