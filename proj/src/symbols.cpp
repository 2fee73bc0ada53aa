#include "bloc/symbols.hpp"

#include <array>

#include "bloc/errors.hpp"

namespace bloc {

namespace {

constexpr std::array<std::string_view, symbol_count> kCanonicalText = {
    "T", "P", "p", "π", "R", "r", "ρ",           // actions
    ".", "t_h", "t_d", "t_w", "t_m", "t_y", "t_z",         // pauses
    "E", "H", "M", "m", "q", "φ", "t", "U",           // content
    "+",
};

}  // namespace

std::string_view symbol_text(Symbol s) {
    return kCanonicalText[static_cast<std::uint8_t>(s)];
}

std::vector<Symbol> parse_symbols(std::string_view text) {
    std::vector<Symbol> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        bool matched = false;
        // longest glyph first so t_h is not read as the content symbol t
        for (std::size_t len : {3, 2, 1}) {
            if (pos + len > text.size()) continue;
            std::string_view candidate = text.substr(pos, len);
            for (std::uint8_t i = 0; i < symbol_count; ++i) {
                if (kCanonicalText[i] == candidate) {
                    out.push_back(static_cast<Symbol>(i));
                    pos += len;
                    matched = true;
                    break;
                }
            }
            if (matched) break;
        }
        if (!matched) {
            throw data_error("unknown symbol glyph at offset " +
                             std::to_string(pos) + " in \"" +
                             std::string(text) + "\"");
        }
    }
    return out;
}

Word word_from_symbols(const std::vector<Symbol>& symbols) {
    Word w;
    w.reserve(symbols.size());
    for (Symbol s : symbols) w.push_back(static_cast<char>(s));
    return w;
}

std::vector<Symbol> symbols_of_word(const Word& word) {
    std::vector<Symbol> out;
    out.reserve(word.size());
    for (char c : word) out.push_back(static_cast<Symbol>(c));
    return out;
}

std::string render_symbol(Symbol s, const GlyphTable& glyphs) {
    if (s >= Symbol::gap_under_hour && s <= Symbol::gap_over_year) {
        auto i = static_cast<std::uint8_t>(s) -
                 static_cast<std::uint8_t>(Symbol::gap_under_hour);
        return glyphs.long_pause[i];
    }
    return std::string(symbol_text(s));
}

std::string render_symbols(const std::vector<Symbol>& symbols,
                           const GlyphTable& glyphs,
                           std::string_view separator) {
    std::string out;
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        if (i > 0) out += separator;
        out += render_symbol(symbols[i], glyphs);
    }
    return out;
}

std::string render_word(const Word& word, const GlyphTable& glyphs) {
    std::string out;
    for (char c : word) out += render_symbol(static_cast<Symbol>(c), glyphs);
    return out;
}

std::string canonical_text(const std::vector<Symbol>& symbols) {
    std::string out;
    for (Symbol s : symbols) out += symbol_text(s);
    return out;
}

std::string canonical_word_text(const Word& word) {
    return canonical_text(symbols_of_word(word));
}

Word word_from_text(std::string_view text) {
    return word_from_symbols(parse_symbols(text));
}

}  // namespace bloc
