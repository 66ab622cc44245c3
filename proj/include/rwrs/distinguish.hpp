#pragma once

// Deciding whether two periodic sceneries look alike through the record:
// translates of each other give identical record laws; for symmetric step
// measures so do reflections; anything else diverges on some record
// cylinder, and the shallowest divergent word is an exact certificate.

#include <optional>
#include <string>
#include <vector>

#include "rwrs/measures.hpp"
#include "rwrs/words.hpp"

namespace rwrs {

// A two-sided periodic colour sequence, stored as the primitive word of its
// period (the shortest word whose repetition gives the sequence).
class PeriodicScenery {
public:
    explicit PeriodicScenery(std::string word,
                             ColourAlphabet alphabet = ColourAlphabet::binary());

    const std::string& word() const { return word_; }
    std::size_t period() const { return word_.size(); }
    const ColourAlphabet& alphabet() const { return alphabet_; }

    char colour_at(long site) const;
    // The uniform measure on the finitely many shifts of this scenery.
    SceneryMeasure orbit_measure() const;

private:
    std::string word_;
    ColourAlphabet alphabet_;
};

std::string primitive_root(std::string_view word);

// Smallest k >= 0 with y = x shifted by k, if any.
std::optional<std::size_t> is_translate(const PeriodicScenery& x, const PeriodicScenery& y);

struct Equivalence {
    std::size_t shift = 0;
    bool reflected = false;
};

// Equality up to shift, or up to reflection (site i -> -i) and shift.
// Prefers a pure translate when both hold.
std::optional<Equivalence> is_equivalent(const PeriodicScenery& x, const PeriodicScenery& y);

enum class Relation { Translate, ReflectionEquivalent, Distinguishable };

struct Verdict {
    Relation relation = Relation::Distinguishable;
    Regime regime = Regime::Asymmetric;
    // Translate / ReflectionEquivalent:
    std::size_t shift = 0;
    bool reflected = false;
    // Distinguishable: the shallowest record word whose exact cylinder
    // values differ (symmetrized values in the symmetric regime).
    std::string certificate_word;
    int depth = 0;
    double divergence = 0.0;
    double value_x = 0.0;
    double value_y = 0.0;
};

// Decides how the record laws of the two sceneries relate, comparing exact
// record vectors of the orbit measures depth by depth up to n_max.
//
// n_max <= 0 picks Per(x) + Per(y) (clamped for table measures so that no
// query exceeds the table depth).  The step measure must be strongly
// asymmetric, in which case the laws themselves are compared, or symmetric
// and straightforward, in which case reflection cannot be seen and the
// symmetrized laws are compared; anything else throws
// UnsupportedRegimeError.  If no divergence shows up to n_max for a
// non-equivalent pair, InconclusiveDepthError reports the search depth.
Verdict distinguish(const PeriodicScenery& x, const PeriodicScenery& y, const StepMeasure& mu,
                    int n_max = 0, double tol = 1e-10);

}  // namespace rwrs
