#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "bloc/symbols.hpp"

namespace bloc {

// First-order Markov chain over symbols, estimated by maximum likelihood
// from adjacent pairs. States with no observed outgoing transition have no
// row at all.
struct TransitionModel {
    std::map<Symbol, std::map<Symbol, std::int64_t>> counts;
    std::map<Symbol, std::int64_t> outgoing_total;

    bool has_state(Symbol from) const;
    // 0 for any unseen pair or state.
    double probability(Symbol from, Symbol to) const;
};

// Counts adjacent pairs within each sequence; sequences are never
// concatenated across accounts. Empty input yields an empty model.
TransitionModel fit_transitions(const std::vector<std::vector<Symbol>>& strings);

// Argmax over outgoing probabilities; ties broken by canonical symbol
// order. Throws std::invalid_argument on a state with no observed
// outgoing transitions.
Symbol predict_next(const TransitionModel& model, Symbol state);

// Product of transition probabilities; any unseen transition makes the
// result 0. Throws std::invalid_argument when the sequence is shorter
// than 2.
double sequence_likelihood(const TransitionModel& model,
                           const std::vector<Symbol>& sequence);

// Shannon entropy (base 2) of the empirical symbol distribution. Throws
// std::invalid_argument on an empty sequence.
double symbol_entropy(const std::vector<Symbol>& sequence);

}  // namespace bloc
