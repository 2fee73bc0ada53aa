#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bloc/symbols.hpp"

namespace bloc {

// Shared word space over a corpus of accounts. Dimension indices are
// dense and follow lexicographic word order, which makes every product of
// the vector model reproducible.
struct Vocabulary {
    std::vector<Word> words;                    // by dimension index
    std::vector<std::int64_t> doc_frequency;    // d_i, by dimension index
    std::int64_t total_documents = 0;           // D
    std::map<Word, std::uint32_t> index;

    std::size_t size() const { return words.size(); }
};

// D = corpus size; d_i = number of multisets containing word i. Throws
// std::invalid_argument on an empty corpus.
Vocabulary build_vocabulary(const std::vector<TermMultiset>& corpus);

// Sparse non-negative account vector over a fixed vocabulary. Entries are
// sorted by dimension; `dimensions` records the vocabulary size so that
// mismatched spaces are detected.
struct TfIdfVector {
    std::string account_id;
    std::uint32_t dimensions = 0;
    std::vector<std::pair<std::uint32_t, double>> weights;

    double norm() const;
};

// w_i = f_i * (1 + ln(D / d_i)); words missing from the vocabulary are
// dropped.
TfIdfVector tf_idf(const TermMultiset& terms, const Vocabulary& vocab,
                   std::string account_id = {});

// dot(u, v) / (|u| |v|), clamped to [0, 1]; 0 when either norm is 0.
// Throws std::invalid_argument when the vectors belong to different
// vocabularies.
double cosine(const TfIdfVector& u, const TfIdfVector& v);

// Words ranked by total frequency across the group; ties broken by
// lexicographic word order. Returns at most k entries.
std::vector<std::pair<Word, std::int64_t>> top_words(
    const std::vector<TermMultiset>& group, std::size_t k);

}  // namespace bloc
