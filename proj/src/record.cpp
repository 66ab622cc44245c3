#include "rwrs/record.hpp"

#include <algorithm>

#include "internal.hpp"

namespace rwrs {

using internal::enumerate_patterns;
using internal::parallel_for;

namespace {

long floor_mod(long a, long q) {
    const long r = a % q;
    return r < 0 ? r + q : r;
}

}  // namespace

PathPattern walk_pattern(std::string_view steps, std::string_view colours) {
    if (colours.size() != steps.size() + 1)
        throw ContractError("walk_pattern: need one more colour than steps");
    if (!is_step_word(steps))
        throw ContractError("walk_pattern: steps must be a word over L, H, R");
    const int n = static_cast<int>(steps.size());
    std::vector<char> site(static_cast<std::size_t>(2 * n + 1), '\0');
    const int origin = n;
    site[static_cast<std::size_t>(origin)] = colours[0];
    int pos = 0, lo = 0, hi = 0;
    for (int i = 0; i < n; ++i) {
        pos += step_value(steps[static_cast<std::size_t>(i)]);
        lo = std::min(lo, pos);
        hi = std::max(hi, pos);
        char& cell = site[static_cast<std::size_t>(origin + pos)];
        const char want = colours[static_cast<std::size_t>(i) + 1];
        if (cell != '\0' && cell != want) return {0, 0, "", false};
        cell = want;
    }
    PathPattern out;
    out.span_lo = lo;
    out.span_hi = hi;
    out.anchored_word.assign(site.data() + origin + lo, static_cast<std::size_t>(hi - lo + 1));
    return out;
}

CylinderVector exact_record_vector(const StepMeasure& mu, const SceneryMeasure& lambda, int depth,
                                   int threads) {
    CylinderVector v;
    v.order = canonical_order(lambda.alphabet(), depth);
    v.values.assign(v.order.size(), 0.0);
    parallel_for(v.order.size(), threads, [&](std::size_t i) {
        double acc = 0.0;
        enumerate_patterns(mu, v.order.entries[i],
                           [&](double p, int, int, std::string_view anchored) {
                               acc += p * lambda.cylinder_prob(anchored);
                           });
        v.values[i] = acc;
    });
    return v;
}

CylinderVector record_vector_for_scenery(const StepMeasure& mu, std::string_view scenery_word,
                                         int depth, const ColourAlphabet& alphabet, int threads) {
    if (scenery_word.empty()) throw ContractError("scenery word must be nonempty");
    if (!alphabet.contains_word(scenery_word))
        throw ContractError("scenery word uses symbols outside \"" + alphabet.symbols() + "\"");
    const long q = static_cast<long>(scenery_word.size());
    const bool incremental = mu.incremental();

    CylinderVector v;
    v.order = canonical_order(alphabet, depth);
    v.values.assign(v.order.size(), 0.0);
    parallel_for(v.order.size(), threads, [&](std::size_t wi) {
        const std::string& w = v.order.entries[wi];
        if (w[0] != scenery_word[0]) return;  // site 0 already disagrees
        const int n = static_cast<int>(w.size()) - 1;
        if (n == 0) {
            v.values[wi] = 1.0;
            return;
        }
        std::string u(static_cast<std::size_t>(n), '\0');
        double acc = 0.0;
        // Same step order and pruning as enumerate_patterns, but colours are
        // matched against the fixed scenery instead of being accumulated.
        auto rec = [&](auto&& self, int i, long pos, double prob) -> void {
            if (i == n) {
                const double p = incremental ? prob : mu.word_prob(u);
                acc += p;
                return;
            }
            const char want = w[static_cast<std::size_t>(i) + 1];
            for (char s : kStepSymbols) {
                double p2 = prob;
                if (incremental) {
                    p2 = i == 0 ? mu.first_prob(s)
                                : mu.extend_prob(prob, u[static_cast<std::size_t>(i) - 1], s);
                    if (p2 == 0.0) continue;
                }
                const long pos2 = pos + step_value(s);
                if (scenery_word[static_cast<std::size_t>(floor_mod(pos2, q))] != want) continue;
                u[static_cast<std::size_t>(i)] = s;
                self(self, i + 1, pos2, p2);
            }
        };
        rec(rec, 0, 0, 1.0);
        v.values[wi] = acc;
    });
    return v;
}

RecordSequence simulate_record(const StepMeasure& mu, std::string_view scenery_word, long length,
                               std::uint64_t seed, const ColourAlphabet& alphabet) {
    if (length < 1) throw ContractError("simulate_record: length must be >= 1");
    if (scenery_word.empty()) throw ContractError("scenery word must be nonempty");
    if (!alphabet.contains_word(scenery_word))
        throw ContractError("scenery word uses symbols outside \"" + alphabet.symbols() + "\"");
    if (!mu.sampleable()) throw NotSampleableError("table step measures cannot be sampled");

    const long q = static_cast<long>(scenery_word.size());
    RecordSequence rec;
    rec.alphabet = alphabet;
    rec.scenery_word = scenery_word;
    rec.mu_description = mu.describe();
    rec.seed = seed;
    rec.colours.reserve(static_cast<std::size_t>(length));
    rec.colours.push_back(scenery_word[0]);

    std::mt19937_64 rng(seed);
    long pos = 0;
    char prev = '\0';
    for (long t = 1; t < length; ++t) {
        const char s = t == 1 ? mu.sample_first(rng) : mu.sample_next(rng, prev);
        prev = s;
        pos = floor_mod(pos + step_value(s), q);
        rec.colours.push_back(scenery_word[static_cast<std::size_t>(pos)]);
    }
    return rec;
}

CylinderVector empirical_cylinders(const RecordSequence& record, int depth) {
    const long t = static_cast<long>(record.colours.size());
    if (depth < 1) throw ContractError("empirical_cylinders: depth must be >= 1");
    if (t < depth)
        throw InsufficientDataError("record of length " + std::to_string(t) +
                                    " cannot estimate depth " + std::to_string(depth));
    CylinderVector v;
    v.order = canonical_order(record.alphabet, depth);
    v.values.assign(v.order.size(), 0.0);
    std::vector<long> counts(v.order.size(), 0);
    const std::string_view colours = record.colours;
    for (int k = 1; k <= depth; ++k) {
        for (long s = 0; s + k <= t; ++s) {
            const auto it = v.order.index.find(colours.substr(static_cast<std::size_t>(s),
                                                              static_cast<std::size_t>(k)));
            if (it == v.order.index.end())
                throw ContractError("record contains a symbol outside its alphabet");
            ++counts[it->second];
        }
    }
    for (std::size_t i = 0; i < v.values.size(); ++i) {
        const long windows = t - static_cast<long>(v.order.entries[i].size()) + 1;
        v.values[i] = static_cast<double>(counts[i]) / static_cast<double>(windows);
    }
    return v;
}

char record_at(std::string_view steps, long origin, std::string_view scenery_word, long n) {
    if (scenery_word.empty()) throw ContractError("scenery word must be nonempty");
    if (!is_step_word(steps)) throw ContractError("record_at: steps must be a word over L, H, R");
    const long len = static_cast<long>(steps.size());
    long pos = 0;
    if (n >= 1) {
        if (origin < 0 || origin + n > len)
            throw ContractError("record_at: steps word too short for the requested time");
        for (long k = 0; k < n; ++k)
            pos += step_value(steps[static_cast<std::size_t>(origin + k)]);
    } else if (n <= -1) {
        if (origin + n < 0 || origin > len)
            throw ContractError("record_at: steps word too short for the requested time");
        for (long k = -1; k >= n; --k)
            pos -= step_value(steps[static_cast<std::size_t>(origin + k)]);
    }
    const long q = static_cast<long>(scenery_word.size());
    return scenery_word[static_cast<std::size_t>(floor_mod(pos, q))];
}

bool check_equivariance(std::string_view omega, std::string_view scenery_word, int horizon) {
    if (horizon < 1) throw ContractError("check_equivariance: horizon must be >= 1");
    if (omega.size() < static_cast<std::size_t>(horizon) + 1)
        throw ContractError("check_equivariance: omega must have at least horizon + 1 steps");
    if (!is_step_word(omega))
        throw ContractError("check_equivariance: omega must be a word over L, H, R");
    if (scenery_word.empty()) throw ContractError("scenery word must be nonempty");

    const long q = static_cast<long>(scenery_word.size());
    auto shifted_scenery = [&](long j) {
        return rotate_word(scenery_word, static_cast<std::size_t>(floor_mod(j, q)));
    };

    // One-step identity at forward times.
    const std::string tail(omega.substr(1));
    const std::string x1 = shifted_scenery(step_value(omega[0]));
    for (int n = 0; n < horizon; ++n) {
        if (record_at(omega, 0, scenery_word, n + 1) != record_at(tail, 0, x1, n)) return false;
    }
    // Iterated identity read backwards: after k steps, the walker relabelled
    // as the new origin must see its starting colour at time -k.
    long walked = 0;
    for (int k = 1; k <= horizon; ++k) {
        walked += step_value(omega[static_cast<std::size_t>(k) - 1]);
        if (record_at(omega, k, shifted_scenery(walked), -k) !=
            record_at(omega, 0, scenery_word, 0))
            return false;
    }
    return true;
}

}  // namespace rwrs
