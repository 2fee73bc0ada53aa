#include "bloc/tokenizer.hpp"

#include <algorithm>
#include <stdexcept>

namespace bloc {

Word sorted_word(Word word) {
    std::sort(word.begin(), word.end());
    return word;
}

Word truncate_runs(Word word, int limit) {
    if (limit == 0) return word;
    if (limit < 2) throw std::invalid_argument("truncation limit must be >= 2");
    Word out;
    out.reserve(word.size());
    std::size_t i = 0;
    while (i < word.size()) {
        std::size_t j = i;
        while (j < word.size() && word[j] == word[i]) ++j;
        std::size_t run = j - i;
        if (run >= static_cast<std::size_t>(limit)) {
            out.append(static_cast<std::size_t>(limit - 1), word[i]);
            out.push_back(static_cast<char>(Symbol::run_elision));
        } else {
            out.append(run, word[i]);
        }
        i = j;
    }
    return out;
}

namespace {

void add_ngrams(const Word& stream, int n, TermMultiset& terms) {
    if (stream.size() < static_cast<std::size_t>(n)) return;
    for (std::size_t i = 0; i + n <= stream.size(); ++i) {
        ++terms[stream.substr(i, n)];
    }
}

}  // namespace

TermMultiset tokenize_ngram(const BlocDocument& doc, int n) {
    if (n < 1) throw std::invalid_argument("n-gram size must be >= 1");
    TermMultiset terms;
    add_ngrams(word_from_symbols(doc.action_string), n, terms);
    std::vector<Symbol> content;
    for (const auto& word : doc.content_words) {
        content.insert(content.end(), word.begin(), word.end());
    }
    add_ngrams(word_from_symbols(content), n, terms);
    return terms;
}

TermMultiset tokenize_pause(const BlocDocument& doc, bool sort_symbols,
                            int truncation_length) {
    TermMultiset terms;
    auto emit = [&](Word word) {
        if (word.empty()) return;
        if (sort_symbols) word = sorted_word(std::move(word));
        if (truncation_length != 0) {
            word = truncate_runs(std::move(word), truncation_length);
        }
        ++terms[word];
    };

    Word current;
    for (Symbol s : doc.action_string) {
        if (is_pause_symbol(s)) {
            emit(std::move(current));
            current.clear();
            emit(Word(1, static_cast<char>(s)));
        } else {
            current.push_back(static_cast<char>(s));
        }
    }
    emit(std::move(current));

    for (const auto& word : doc.content_words) {
        emit(word_from_symbols(word));
    }
    return terms;
}

TermMultiset tokenize(const BlocDocument& doc, const LanguageConfig& cfg) {
    if (cfg.tokenization == Tokenization::ngram) {
        return tokenize_ngram(doc, cfg.ngram_size);
    }
    return tokenize_pause(doc, cfg.sort_word_symbols, cfg.truncation_length);
}

}  // namespace bloc
