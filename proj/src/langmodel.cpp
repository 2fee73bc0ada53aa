#include "bloc/langmodel.hpp"

#include <cmath>
#include <stdexcept>

namespace bloc {

bool TransitionModel::has_state(Symbol from) const {
    return outgoing_total.count(from) > 0;
}

double TransitionModel::probability(Symbol from, Symbol to) const {
    auto row = counts.find(from);
    if (row == counts.end()) return 0.0;
    auto cell = row->second.find(to);
    if (cell == row->second.end()) return 0.0;
    return static_cast<double>(cell->second) /
           static_cast<double>(outgoing_total.at(from));
}

TransitionModel fit_transitions(const std::vector<std::vector<Symbol>>& strings) {
    TransitionModel model;
    for (const auto& sequence : strings) {
        for (std::size_t i = 0; i + 1 < sequence.size(); ++i) {
            ++model.counts[sequence[i]][sequence[i + 1]];
            ++model.outgoing_total[sequence[i]];
        }
    }
    return model;
}

Symbol predict_next(const TransitionModel& model, Symbol state) {
    auto row = model.counts.find(state);
    if (row == model.counts.end() || row->second.empty()) {
        throw std::invalid_argument("no observed transitions out of state");
    }
    Symbol best = row->second.begin()->first;
    std::int64_t best_count = row->second.begin()->second;
    for (const auto& [to, count] : row->second) {
        if (count > best_count) {  // map order breaks ties toward lower symbols
            best = to;
            best_count = count;
        }
    }
    return best;
}

double sequence_likelihood(const TransitionModel& model,
                           const std::vector<Symbol>& sequence) {
    if (sequence.size() < 2) {
        throw std::invalid_argument("sequence must hold at least 2 symbols");
    }
    double likelihood = 1.0;
    for (std::size_t i = 0; i + 1 < sequence.size(); ++i) {
        likelihood *= model.probability(sequence[i], sequence[i + 1]);
        if (likelihood == 0.0) return 0.0;
    }
    return likelihood;
}

double symbol_entropy(const std::vector<Symbol>& sequence) {
    if (sequence.empty()) throw std::invalid_argument("empty symbol sequence");
    std::map<Symbol, std::int64_t> counts;
    for (Symbol s : sequence) ++counts[s];
    double n = static_cast<double>(sequence.size());
    double entropy = 0.0;
    for (const auto& [s, c] : counts) {
        (void)s;
        double p = static_cast<double>(c) / n;
        entropy -= p * std::log2(p);
    }
    return entropy;
}

}  // namespace bloc
