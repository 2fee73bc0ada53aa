#pragma once

#include "bloc/encoder.hpp"
#include "bloc/symbols.hpp"

namespace bloc {

// Sorts the symbols of a word into canonical alphabet order.
Word sorted_word(Word word);

// Replaces every maximal run of one repeated symbol of length >= limit
// with limit - 1 copies followed by the elision marker. limit 0 disables;
// limit 1 is rejected.
Word truncate_runs(Word word, int limit);

// Slides an n-symbol window over the action stream (pauses included) and
// over the concatenated content stream, pooling the windows of both
// streams into one multiset. Streams shorter than n contribute nothing.
TermMultiset tokenize_ngram(const BlocDocument& doc, int n);

// Splits the action string at pause symbols; each pause symbol is itself
// a single-symbol word and each content word is one word. Sorting and run
// truncation apply per word, in that order.
TermMultiset tokenize_pause(const BlocDocument& doc, bool sort_symbols,
                            int truncation_length);

// Dispatches on p4; n-gram mode ignores p5 and p6.
TermMultiset tokenize(const BlocDocument& doc, const LanguageConfig& cfg);

}  // namespace bloc
