#pragma once

// Shared fixtures for the test binaries.

#include <map>
#include <string>

#include "rwrs/measures.hpp"

namespace fixtures {

// Stationary, additive, no-holding explicit table of depth 3 that fits
// neither solver regime: mu[R] = mu[L] = 0.5 (not strongly asymmetric) but
// mu[RRR] = 0.25 != mu[LLL] = 0.15 (not symmetric).
inline rwrs::StepMeasure unsupported_table() {
    const std::map<std::string, double> values{
        {"R", 0.5},    {"L", 0.5},    {"RR", 0.3},   {"RL", 0.2},   {"LR", 0.2},
        {"LL", 0.3},   {"RRR", 0.25}, {"RRL", 0.05}, {"RLR", 0.05}, {"RLL", 0.15},
        {"LRR", 0.05}, {"LRL", 0.15}, {"LLR", 0.15}, {"LLL", 0.15},
    };
    return rwrs::StepMeasure::table(values, 3);
}

// Two-state chain with transition probabilities p(R->R) = 0.8 and
// p(L->L) = 0.4; stationary distribution (R: 0.75, L: 0.25).
inline rwrs::StepMeasure markov_84() {
    return rwrs::StepMeasure::markov(
        {{"RR", 0.8}, {"RL", 0.2}, {"LL", 0.4}, {"LR", 0.6}});
}

}  // namespace fixtures
