#include "rwrs/distinguish.hpp"

#include <algorithm>
#include <cmath>

#include "rwrs/record.hpp"
#include "rwrs/reconstruct.hpp"

namespace rwrs {

namespace {

long floor_mod(long a, long q) {
    const long r = a % q;
    return r < 0 ? r + q : r;
}

// Reflecting the sequence about the origin turns the period word into its
// reversal, up to a rotation fixing the new site 0.
std::string reflected_word(const std::string& word) {
    std::string rev = reverse_word(word);
    return rotate_word(rev, rev.size() - 1);
}

struct DepthScan {
    bool diverged = false;
    std::size_t word_index = 0;
    double divergence = 0.0;
    double value_x = 0.0;
    double value_y = 0.0;
};

// First entry of length exactly `depth` (in order) where the two vectors
// differ by more than tol.
DepthScan scan_depth(const WordOrder& order, const std::vector<double>& vx,
                     const std::vector<double>& vy, int depth, double tol) {
    DepthScan out;
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (static_cast<int>(order.entries[i].size()) != depth) continue;
        const double d = std::abs(vx[i] - vy[i]);
        if (d > tol) {
            out.diverged = true;
            out.word_index = i;
            out.divergence = d;
            out.value_x = vx[i];
            out.value_y = vy[i];
            return out;
        }
    }
    return out;
}

}  // namespace

PeriodicScenery::PeriodicScenery(std::string word, ColourAlphabet alphabet)
    : alphabet_(std::move(alphabet)) {
    if (word.empty()) throw ContractError("periodic scenery word must be nonempty");
    if (!alphabet_.contains_word(word))
        throw ContractError("scenery word \"" + word + "\" uses symbols outside \"" +
                            alphabet_.symbols() + "\"");
    word_ = primitive_root(word);
}

char PeriodicScenery::colour_at(long site) const {
    return word_[static_cast<std::size_t>(floor_mod(site, static_cast<long>(word_.size())))];
}

SceneryMeasure PeriodicScenery::orbit_measure() const {
    return SceneryMeasure::periodic_orbit(word_, alphabet_);
}

std::string primitive_root(std::string_view word) {
    const std::size_t n = word.size();
    for (std::size_t d = 1; d <= n; ++d) {
        if (n % d != 0) continue;
        bool tiles = true;
        for (std::size_t i = d; i < n && tiles; ++i) tiles = word[i] == word[i - d];
        if (tiles) return std::string(word.substr(0, d));
    }
    return std::string(word);
}

std::optional<std::size_t> is_translate(const PeriodicScenery& x, const PeriodicScenery& y) {
    if (x.period() != y.period() || !(x.alphabet() == y.alphabet())) return std::nullopt;
    for (std::size_t k = 0; k < x.period(); ++k)
        if (rotate_word(x.word(), k) == y.word()) return k;
    return std::nullopt;
}

std::optional<Equivalence> is_equivalent(const PeriodicScenery& x, const PeriodicScenery& y) {
    if (auto k = is_translate(x, y)) return Equivalence{*k, false};
    if (x.period() != y.period() || !(x.alphabet() == y.alphabet())) return std::nullopt;
    const std::string reflected = reflected_word(x.word());
    for (std::size_t k = 0; k < x.period(); ++k)
        if (rotate_word(reflected, k) == y.word()) return Equivalence{k, true};
    return std::nullopt;
}

Verdict distinguish(const PeriodicScenery& x, const PeriodicScenery& y, const StepMeasure& mu,
                    int n_max, double tol) {
    if (!(x.alphabet() == y.alphabet()))
        throw ContractError("sceneries must share one colour alphabet");
    if (n_max <= 0) n_max = static_cast<int>(x.period() + y.period());
    // A table measure cannot be queried past its depth, which caps the
    // cylinder depth at table_depth + 1.
    if (mu.kind() == StepKind::Table) n_max = std::min(n_max, mu.table_depth() + 1);
    if (n_max < 1) throw ContractError("distinguish: search depth must be >= 1");
    const int classify_depth = std::max(1, n_max - 1);

    Verdict verdict;
    verdict.regime = classify_regime(mu, classify_depth);

    const SceneryMeasure lam_x = x.orbit_measure();
    const SceneryMeasure lam_y = y.orbit_measure();
    const bool symmetric = verdict.regime == Regime::Symmetric;

    std::optional<Equivalence> same;
    if (symmetric) {
        same = is_equivalent(x, y);
    } else if (auto k = is_translate(x, y)) {
        same = Equivalence{*k, false};
    }
    if (same) {
        // The laws agree exactly; confirm no divergence up to n_max before
        // answering, since a divergence here would mean a defect in the
        // forward computation.
        const CylinderVector vx = exact_record_vector(mu, lam_x, n_max);
        const CylinderVector vy = exact_record_vector(mu, lam_y, n_max);
        const std::vector<double> sx = symmetric ? symmetrize(vx).values : vx.values;
        const std::vector<double> sy = symmetric ? symmetrize(vy).values : vy.values;
        for (int d = 1; d <= n_max; ++d) {
            const DepthScan scan = scan_depth(vx.order, sx, sy, d, tol);
            if (scan.diverged)
                throw Error("record laws of equivalent sceneries diverge at \"" +
                            vx.order.entries[scan.word_index] + "\"");
        }
        verdict.relation = same->reflected ? Relation::ReflectionEquivalent : Relation::Translate;
        verdict.shift = same->shift;
        verdict.reflected = same->reflected;
        return verdict;
    }

    for (int d = 1; d <= n_max; ++d) {
        const CylinderVector vx = exact_record_vector(mu, lam_x, d);
        const CylinderVector vy = exact_record_vector(mu, lam_y, d);
        const std::vector<double> sx = symmetric ? symmetrize(vx).values : vx.values;
        const std::vector<double> sy = symmetric ? symmetrize(vy).values : vy.values;
        const DepthScan scan = scan_depth(vx.order, sx, sy, d, tol);
        if (scan.diverged) {
            verdict.relation = Relation::Distinguishable;
            verdict.certificate_word = vx.order.entries[scan.word_index];
            verdict.depth = d;
            verdict.divergence = scan.divergence;
            verdict.value_x = scan.value_x;
            verdict.value_y = scan.value_y;
            return verdict;
        }
    }
    throw InconclusiveDepthError("no record-cylinder divergence found up to depth " +
                                     std::to_string(n_max),
                                 n_max);
}

}  // namespace rwrs
