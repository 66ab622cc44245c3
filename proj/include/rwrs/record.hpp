#pragma once

// The forward map from a step measure and a scenery law to the law of the
// colour record: walk-path patterns, exact cylinder vectors, per-scenery
// record vectors, simulation, and empirical estimation from a record.

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "rwrs/measures.hpp"
#include "rwrs/words.hpp"

namespace rwrs {

// The colours a walk word forces on its visited sites when the record reads
// a given colour word.  Visited sites form the integer interval
// span_lo..span_hi containing 0 (the start), and anchored_word[i] is the
// colour forced at site span_lo + i.  consistent is false when two visits
// to one site demand different colours; the other fields are then
// meaningless.
struct PathPattern {
    int span_lo = 0;
    int span_hi = 0;
    std::string anchored_word;
    bool consistent = true;
};

// steps is a walk word u, colours the intended record w with
// |w| == |u| + 1 (w[0] is read before the first step).
PathPattern walk_pattern(std::string_view steps, std::string_view colours);

// A vector of record-cylinder values indexed by the palindrome-first order.
struct CylinderVector {
    WordOrder order;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    double at(std::string_view w) const { return values[order.index_of(w)]; }
};

// rho[w] = sum over walk words u of length |w|-1 of mu[u] * lambda[v] where
// v is the anchored word of (u, w); inconsistent patterns contribute
// nothing.  Each entry is summed over u in lexicographic L < H < R order
// (walk words with probability exactly zero are skipped, which drops only
// zero terms).  threads parallelizes across entries; every entry's sum is
// unchanged, so results are bit-identical for any thread count.
CylinderVector exact_record_vector(const StepMeasure& mu, const SceneryMeasure& lambda,
                                   int depth, int threads = 1);

// Record law for the walk started at site 0 of one periodic scenery
// (scenery_word repeated over all of the line):
// rho_x[w] = sum of mu[u] over walk words whose visited sites read w.
CylinderVector record_vector_for_scenery(const StepMeasure& mu, std::string_view scenery_word,
                                         int depth,
                                         const ColourAlphabet& alphabet = ColourAlphabet::binary(),
                                         int threads = 1);

struct RecordSequence {
    std::string colours;
    ColourAlphabet alphabet{ColourAlphabet::binary()};
    std::string scenery_word;
    std::string mu_description;
    std::uint64_t seed = 0;
};

// Simulates length record colours of the walk on the periodic scenery.
// Sampling draws one uniform double per step via a fixed inverse-CDF rule,
// so equal seeds give equal records on every platform.
RecordSequence simulate_record(const StepMeasure& mu, std::string_view scenery_word, long length,
                               std::uint64_t seed,
                               const ColourAlphabet& alphabet = ColourAlphabet::binary());

// Sliding-window cylinder frequencies of the record: value[w] = (number of
// windows reading w) / (|record| - |w| + 1).
CylinderVector empirical_cylinders(const RecordSequence& record, int depth);

// Colour recorded at time n by the walk whose step at time k is
// steps[origin + k], walking on the periodic scenery: the record at n >= 1
// is the scenery colour at position steps[origin] + ... + steps[origin+n-1],
// while n <= -1 reads the colour at -(steps[origin-1] + ... + steps[origin+n]).
char record_at(std::string_view steps, long origin, std::string_view scenery_word, long n);

// Checks that recording intertwines the step shift with the scenery shift:
// the record of (omega, x) at time n+1 equals the record of
// (shifted omega, scenery shifted by omega_0) at time n, for
// n = 0..horizon-1, together with the iterated backward-time consequence
// that returning the origin to the walker's position reproduces the time-0
// colour.  Requires |omega| >= horizon + 1.
bool check_equivariance(std::string_view omega, std::string_view scenery_word, int horizon);

}  // namespace rwrs
