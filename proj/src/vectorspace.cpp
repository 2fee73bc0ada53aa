#include "bloc/vectorspace.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bloc {

Vocabulary build_vocabulary(const std::vector<TermMultiset>& corpus) {
    if (corpus.empty()) throw std::invalid_argument("empty corpus");
    Vocabulary vocab;
    vocab.total_documents = static_cast<std::int64_t>(corpus.size());

    std::map<Word, std::int64_t> df;
    for (const auto& terms : corpus) {
        for (const auto& [word, count] : terms) {
            (void)count;
            ++df[word];
        }
    }
    vocab.words.reserve(df.size());
    vocab.doc_frequency.reserve(df.size());
    for (const auto& [word, d] : df) {  // std::map iterates lexicographically
        vocab.index.emplace(word, static_cast<std::uint32_t>(vocab.words.size()));
        vocab.words.push_back(word);
        vocab.doc_frequency.push_back(d);
    }
    return vocab;
}

double TfIdfVector::norm() const {
    double sum = 0;
    for (const auto& [dim, w] : weights) {
        (void)dim;
        sum += w * w;
    }
    return std::sqrt(sum);
}

TfIdfVector tf_idf(const TermMultiset& terms, const Vocabulary& vocab,
                   std::string account_id) {
    TfIdfVector vec;
    vec.account_id = std::move(account_id);
    vec.dimensions = static_cast<std::uint32_t>(vocab.size());
    for (const auto& [word, frequency] : terms) {
        auto it = vocab.index.find(word);
        if (it == vocab.index.end()) continue;  // out of vocabulary: dropped
        double idf = 1.0 + std::log(static_cast<double>(vocab.total_documents) /
                                    static_cast<double>(vocab.doc_frequency[it->second]));
        vec.weights.emplace_back(it->second,
                                 static_cast<double>(frequency) * idf);
    }
    // terms iterate in word order and the index preserves it, so weights
    // are already sorted by dimension
    return vec;
}

double cosine(const TfIdfVector& u, const TfIdfVector& v) {
    if (u.dimensions != v.dimensions) {
        throw std::invalid_argument("cosine over mismatched vocabularies");
    }
    double dot = 0;
    std::size_t i = 0, j = 0;
    while (i < u.weights.size() && j < v.weights.size()) {
        if (u.weights[i].first < v.weights[j].first) {
            ++i;
        } else if (u.weights[i].first > v.weights[j].first) {
            ++j;
        } else {
            dot += u.weights[i].second * v.weights[j].second;
            ++i;
            ++j;
        }
    }
    double nu = u.norm();
    double nv = v.norm();
    if (nu == 0.0 || nv == 0.0) return 0.0;
    return std::clamp(dot / (nu * nv), 0.0, 1.0);
}

std::vector<std::pair<Word, std::int64_t>> top_words(
    const std::vector<TermMultiset>& group, std::size_t k) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    std::map<Word, std::int64_t> totals;
    for (const auto& terms : group) {
        for (const auto& [word, count] : terms) totals[word] += count;
    }
    std::vector<std::pair<Word, std::int64_t>> ranked(totals.begin(), totals.end());
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    if (ranked.size() > k) ranked.resize(k);
    return ranked;
}

}  // namespace bloc
