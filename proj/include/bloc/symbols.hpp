#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace bloc {

// One symbol of the behavioral language. Three alphabets share the enum:
// account actions, pauses between actions, and per-post content traits.
// The numeric order of the enumerators is the canonical alphabet order used
// everywhere a fixed symbol order is needed (word sorting, tie breaking,
// vocabulary order). Content symbols are listed in the order they are
// emitted within a word.
enum class Symbol : std::uint8_t {
    // action alphabet
    post,                   // T
    reply_to_friend,        // P
    reply_to_non_friend,    // p
    reply_to_self,          // pi
    reshare_of_friend,      // R
    reshare_of_non_friend,  // r
    reshare_of_self,        // rho

    // pause alphabet; the long-pause symbols are atomic multi-character
    // glyphs and are ordered by increasing gap duration
    session_break,   // .
    gap_under_hour,  // t_h
    gap_under_day,   // t_d
    gap_under_week,  // t_w
    gap_under_month, // t_m
    gap_under_year,  // t_y
    gap_over_year,   // t_z

    // content alphabet, in canonical within-word order
    media,                  // E
    hashtag,                // H
    mention_of_friend,      // M
    mention_of_non_friend,  // m
    quote_of_other,         // q
    quote_of_self,          // phi
    text,                   // t
    link,                   // U

    // marker appended in place of a truncated symbol run
    run_elision,  // +
};

inline constexpr std::uint8_t symbol_count = 23;

constexpr bool is_action_symbol(Symbol s) {
    return s >= Symbol::post && s <= Symbol::reshare_of_self;
}

constexpr bool is_pause_symbol(Symbol s) {
    return s >= Symbol::session_break && s <= Symbol::gap_over_year;
}

constexpr bool is_content_symbol(Symbol s) {
    return s >= Symbol::media && s <= Symbol::link;
}

// Canonical text of one symbol (UTF-8; long pauses as t_h, t_d, ...).
std::string_view symbol_text(Symbol s);

// Parses the canonical text of a whole symbol sequence (longest match
// first, so t_h wins over t). Throws data_error on unknown glyphs.
std::vector<Symbol> parse_symbols(std::string_view text);

// A word is a sequence of symbols stored one byte per symbol, so that
// std::string comparison equals lexicographic comparison in canonical
// alphabet order. Words are map keys throughout the vector models.
using Word = std::string;

// Multiset of words with positive counts.
using TermMultiset = std::map<Word, std::int64_t>;

Word word_from_symbols(const std::vector<Symbol>& symbols);
std::vector<Symbol> symbols_of_word(const Word& word);

// Glyphs used when rendering symbols for display; the six long-pause
// placeholders are configurable from the CLI.
struct GlyphTable {
    std::string long_pause[6] = {"□h", "□d", "□w",
                                 "□m", "□y", "□z"};
};

std::string render_symbol(Symbol s, const GlyphTable& glyphs);
std::string render_symbols(const std::vector<Symbol>& symbols,
                           const GlyphTable& glyphs,
                           std::string_view separator = "");
std::string render_word(const Word& word, const GlyphTable& glyphs);

// Canonical text with default separators; used for golden comparisons
// and the model file format.
std::string canonical_text(const std::vector<Symbol>& symbols);
std::string canonical_word_text(const Word& word);
Word word_from_text(std::string_view text);

}  // namespace bloc
