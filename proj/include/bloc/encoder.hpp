#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bloc/symbols.hpp"
#include "bloc/timeline.hpp"

namespace bloc {

// Pause alphabet selector: f1 emits a single session break, f2 discretizes
// the gap on a logarithmic calendar scale.
enum class PauseAlphabet { f1, f2 };

enum class Tokenization { ngram, pause };

// The six language parameters. Durations are in seconds; calendar units
// are fixed at hour = 3600 s, day = 86400 s, week = 7 d, month = 30 d,
// year = 365 d.
struct LanguageConfig {
    std::int64_t session_threshold_s = 60;                   // p1
    PauseAlphabet pause_alphabet = PauseAlphabet::f2;        // p2
    bool sessions_as_content_words = false;                  // p3
    Tokenization tokenization = Tokenization::ngram;         // p4
    int ngram_size = 2;
    bool sort_word_symbols = false;                          // p5
    int truncation_length = 0;                               // p6; 0 disables

    // Throws config_error on out-of-range parameters.
    void validate() const;
};

// Defaults used by the supervised bot-detection pipeline.
LanguageConfig bigram_defaults();

// Defaults used by behavioral clustering and the similarity network:
// pause-delimited words, unsorted, runs truncated at four.
LanguageConfig pause_word_defaults();

// An account's encoded behavior: the action string with pauses
// interleaved, one content word per post (or per session), and the index
// into action_string where each session starts.
struct BlocDocument {
    std::string account_id;
    std::vector<Symbol> action_string;
    std::vector<std::vector<Symbol>> content_words;  // words may be empty
    std::vector<std::size_t> session_boundaries;
};

// Action symbol for one post; total over all inputs.
Symbol action_symbol(const Post& post, const SocialGraphContext& graph);

// Pause symbol for the gap before an action, or nothing when the gap is
// below the session threshold. Throws std::invalid_argument on negative
// gaps (timelines are sorted, so the pipeline never produces one).
std::optional<Symbol> pause_symbol(std::int64_t delta_s,
                                   const LanguageConfig& cfg);

// Content word for one post, in the fixed emission order
// E, H, M, m, q, phi, t, U with multiplicity preserved.
std::vector<Symbol> content_symbols(const Post& post,
                                    const SocialGraphContext& graph);

BlocDocument encode(const AccountTimeline& timeline,
                    const SocialGraphContext& graph,
                    const LanguageConfig& cfg);

}  // namespace bloc
