#pragma once

// Stationary step measures on two-sided sequences over {L, H, R} and
// shift-invariant scenery measures over a colour alphabet, both queried
// through finite-word probabilities.

#include <array>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rwrs/words.hpp"

namespace rwrs {

inline constexpr double kDefaultEps = 1e-12;

enum class StepKind { Iid, Markov, Table };

// Law of the step sequence.  Iid and Markov support incremental word
// probabilities and sampling; Table is a finite list of word probabilities
// up to a declared depth and can only be queried.
class StepMeasure {
public:
    static StepMeasure iid(double p_r, double p_l, double p_h = 0.0);
    // Keys are two-symbol words "from to" over {L,H,R}; each given row must
    // sum to 1 and the chain restricted to the given states must be
    // irreducible.  The initial distribution is the stationary one.
    static StepMeasure markov(const std::map<std::string, double>& transition);
    // values maps step words (length 1..depth) to probabilities; missing
    // words are read as 0.  Consistency is not enforced here; validate()
    // reports violations.
    static StepMeasure table(std::map<std::string, double> values, int depth);

    StepKind kind() const { return kind_; }
    int table_depth() const { return table_depth_; }
    bool sampleable() const { return kind_ != StepKind::Table; }
    bool incremental() const { return kind_ != StepKind::Table; }

    // mu[u]; mu of the empty word is 1.  Table kind throws DepthExceededError
    // past its depth.
    double word_prob(std::string_view u) const;
    double run_prob(char s, int n) const;  // mu[s^n]

    // Prefix-probability recursion for enumeration; Iid and Markov only.
    double first_prob(char s) const;
    double extend_prob(double prefix_prob, char prev, char next) const;

    char sample_first(std::mt19937_64& rng) const;
    char sample_next(std::mt19937_64& rng, char prev) const;

    // Stationary distribution over (L, H, R); zero on absent states.
    std::array<double, 3> stationary() const;
    double transition_prob(char from, char to) const;  // Markov only
    bool has_holding(double eps = kDefaultEps) const;

    std::string describe() const;

private:
    StepMeasure() = default;

    StepKind kind_ = StepKind::Iid;
    std::array<double, 3> p_{};                    // Iid: step distribution (L,H,R)
    std::array<double, 3> pi_{};                   // Markov: stationary distribution
    std::array<std::array<double, 3>, 3> trans_{};  // Markov: row-stochastic on active states
    std::array<bool, 3> active_{};                 // Markov: states with a given row
    std::map<std::string, double> table_;
    int table_depth_ = 0;
};

enum class SceneryKind { Periodic, Iid, Table };

// Shift-invariant law of the colour sequence.  Periodic is the uniform
// measure on the orbit of a periodic sequence; Iid draws colours
// independently; Table lists cylinder probabilities up to a depth.
class SceneryMeasure {
public:
    static SceneryMeasure periodic_orbit(std::string word,
                                         ColourAlphabet alphabet = ColourAlphabet::binary());
    static SceneryMeasure iid(std::vector<double> probs,
                              ColourAlphabet alphabet = ColourAlphabet::binary());
    static SceneryMeasure table(std::map<std::string, double> values, int depth,
                                ColourAlphabet alphabet = ColourAlphabet::binary());

    SceneryKind kind() const { return kind_; }
    const ColourAlphabet& alphabet() const { return alphabet_; }
    int table_depth() const { return table_depth_; }
    const std::string& period_word() const;  // Periodic kind only

    // lambda[v]; lambda of the empty word is 1.  Table kind throws
    // DepthExceededError past its depth.
    double cylinder_prob(std::string_view v) const;

    std::string describe() const;

private:
    SceneryMeasure() = default;

    SceneryKind kind_ = SceneryKind::Iid;
    ColourAlphabet alphabet_{ColourAlphabet::binary()};
    std::string word_;
    std::vector<double> probs_;
    std::map<std::string, double> table_;
    int table_depth_ = 0;
};

struct AsymmetryCheck {
    bool strongly_asymmetric = false;
    int witness_n = 0;  // smallest N with mu[R^N] == mu[L^N], when not strongly asymmetric
};

struct SymmetryCheck {
    bool symmetric = true;
    std::string witness;  // shortest step word with mu[witness] != mu[mirror(witness)]
};

struct StraightforwardCheck {
    bool straightforward = true;
    int witness_n = 0;  // smallest N with mu[R^N] == 0, when not straightforward
};

// mu[u] == mu[mirror(u)] for all words up to the given length.
SymmetryCheck symmetry_check(const StepMeasure& mu, int depth, double eps = kDefaultEps);
bool is_symmetric(const StepMeasure& mu, int depth, double eps = kDefaultEps);
// mu[R^N] != mu[L^N] for N = 1..depth.
AsymmetryCheck is_strongly_asymmetric(const StepMeasure& mu, int depth, double eps = kDefaultEps);
// mu[R^N] > 0 for N = 1..depth.
StraightforwardCheck straightforward_check(const StepMeasure& mu, int depth,
                                           double eps = kDefaultEps);
bool is_straightforward(const StepMeasure& mu, int depth, double eps = kDefaultEps);

enum class Regime { Asymmetric, Symmetric };

// Which reconstruction regime mu falls in, with all checks run on words up
// to the given depth: strongly asymmetric measures determine the scenery
// law itself, symmetric straightforward ones its reversal symmetrization.
// Throws UnsupportedRegimeError naming witnesses when neither applies.
Regime classify_regime(const StepMeasure& mu, int depth, double eps = kDefaultEps);

struct Violation {
    std::string check;
    std::string where;
    double magnitude = 0.0;
};

// Additivity, shift stationarity and range of word probabilities up to the
// given depth (clamped to a table's declared depth).
std::vector<Violation> validate(const StepMeasure& mu, int depth = 6, double eps = 1e-9);
std::vector<Violation> validate(const SceneryMeasure& lambda, int depth = 6, double eps = 1e-9);

}  // namespace rwrs
