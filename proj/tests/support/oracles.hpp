#pragma once

// Independent oracles used to cross-check the library: a direct
// evaluation of the TF-IDF weight, a matrix-form modularity, and an
// exhaustive search over all partitions of small graphs. These stay
// deliberately separate from the implementation paths they verify.

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "bloc/symbols.hpp"

namespace oracles {

// w = f * (1 + ln(D / d)) evaluated straight from the corpus.
inline double direct_tfidf(const bloc::Word& word,
                           const bloc::TermMultiset& account,
                           const std::vector<bloc::TermMultiset>& corpus) {
    auto it = account.find(word);
    double f = it == account.end() ? 0.0 : static_cast<double>(it->second);
    if (f == 0.0) return 0.0;
    double D = static_cast<double>(corpus.size());
    double d = 0.0;
    for (const auto& doc : corpus) {
        if (doc.count(word)) d += 1.0;
    }
    return f * (1.0 + std::log(D / d));
}

struct Edge {
    std::size_t a;
    std::size_t b;
    double w;
};

// Matrix-form modularity Q = (1/2m) sum_ij (A_ij - g k_i k_j / 2m) d(ci,cj).
inline double matrix_modularity(std::size_t n, const std::vector<Edge>& edges,
                                const std::vector<std::uint32_t>& part,
                                double gamma = 1.0) {
    std::vector<std::vector<double>> A(n, std::vector<double>(n, 0.0));
    for (const auto& e : edges) {
        A[e.a][e.b] += e.w;
        A[e.b][e.a] += e.w;
    }
    std::vector<double> k(n, 0.0);
    double two_m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) k[i] += A[i][j];
        two_m += k[i];
    }
    if (two_m == 0.0) return 0.0;
    double q = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (part[i] != part[j]) continue;
            q += A[i][j] - gamma * k[i] * k[j] / two_m;
        }
    }
    return q / two_m;
}

// Visits every partition of {0..n-1} as a restricted growth string.
inline void for_each_partition(
    std::size_t n, const std::function<void(const std::vector<std::uint32_t>&)>& visit) {
    std::vector<std::uint32_t> assignment(n, 0);
    std::function<void(std::size_t, std::uint32_t)> recurse =
        [&](std::size_t i, std::uint32_t blocks) {
            if (i == n) {
                visit(assignment);
                return;
            }
            for (std::uint32_t c = 0; c <= blocks; ++c) {
                assignment[i] = c;
                recurse(i + 1, c == blocks ? blocks + 1 : blocks);
            }
        };
    if (n > 0) recurse(0, 0);
}

struct BestPartition {
    double q = -1e9;
    std::vector<std::uint32_t> part;
};

inline BestPartition best_partition(std::size_t n, const std::vector<Edge>& edges,
                                    double gamma = 1.0) {
    BestPartition best;
    for_each_partition(n, [&](const std::vector<std::uint32_t>& part) {
        double q = matrix_modularity(n, edges, part, gamma);
        if (q > best.q) {
            best.q = q;
            best.part = part;
        }
    });
    return best;
}

}  // namespace oracles
