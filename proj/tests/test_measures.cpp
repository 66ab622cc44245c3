#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "rwrs/measures.hpp"

using namespace rwrs;
using doctest::Approx;

TEST_CASE("iid step measure construction and word probabilities") {
    const StepMeasure mu = StepMeasure::iid(0.7, 0.3);
    CHECK(mu.kind() == StepKind::Iid);
    CHECK(mu.word_prob("") == 1.0);
    CHECK(mu.word_prob("R") == 0.7);
    CHECK(mu.word_prob("L") == 0.3);
    CHECK(mu.word_prob("H") == 0.0);
    CHECK(mu.word_prob("RRL") == Approx(0.7 * 0.7 * 0.3).epsilon(1e-15));
    CHECK(mu.run_prob('R', 3) == Approx(0.343).epsilon(1e-15));
    CHECK(mu.run_prob('R', 0) == 1.0);
    CHECK_FALSE(mu.has_holding());
    CHECK(StepMeasure::iid(0.5, 0.3, 0.2).has_holding());
    CHECK_THROWS_AS(mu.word_prob("RX"), ContractError);
    CHECK_THROWS_AS(StepMeasure::iid(0.7, 0.2), ContractError);
    CHECK_THROWS_AS(StepMeasure::iid(1.2, -0.2), ContractError);
}

TEST_CASE("markov step measure stationary law is frozen") {
    const StepMeasure mu = fixtures::markov_84();
    const auto pi = mu.stationary();
    CHECK(pi[step_index('R')] == Approx(0.75).epsilon(1e-14));
    CHECK(pi[step_index('L')] == Approx(0.25).epsilon(1e-14));
    CHECK(pi[step_index('H')] == 0.0);
    CHECK(mu.word_prob("R") == Approx(0.75).epsilon(1e-14));
    CHECK(mu.word_prob("RR") == Approx(0.6).epsilon(1e-14));
    CHECK(mu.word_prob("RRR") == Approx(0.48).epsilon(1e-14));
    CHECK(mu.word_prob("L") == Approx(0.25).epsilon(1e-14));
    CHECK(mu.word_prob("LL") == Approx(0.1).epsilon(1e-14));
    CHECK(mu.word_prob("LLL") == Approx(0.04).epsilon(1e-14));
    CHECK(mu.word_prob("H") == 0.0);
    // pi P = pi.
    for (char to : {'R', 'L'}) {
        double in = 0.0;
        for (char from : {'R', 'L'})
            in += pi[step_index(from)] * mu.transition_prob(from, to);
        CHECK(in == Approx(pi[step_index(to)]).epsilon(1e-13));
    }
}

TEST_CASE("markov construction rejects broken chains") {
    // Two closed classes.
    CHECK_THROWS_AS(StepMeasure::markov({{"RR", 1.0}, {"LL", 1.0}}), ContractError);
    // Mass leaks into a state without a row.
    CHECK_THROWS_AS(StepMeasure::markov({{"RR", 0.5}, {"RL", 0.5}}), ContractError);
    // Row does not sum to 1.
    CHECK_THROWS_AS(StepMeasure::markov({{"RR", 0.5}, {"RL", 0.4}, {"LR", 1.0}}),
                    ContractError);
    // Bad key.
    CHECK_THROWS_AS(StepMeasure::markov({{"RX", 1.0}}), ContractError);
    CHECK_THROWS_AS(StepMeasure::markov({}), ContractError);
}

TEST_CASE("three-state markov chain with holding") {
    const StepMeasure mu = StepMeasure::markov({{"RR", 0.5},
                                                {"RH", 0.3},
                                                {"RL", 0.2},
                                                {"HR", 0.6},
                                                {"HL", 0.4},
                                                {"LL", 0.1},
                                                {"LR", 0.6},
                                                {"LH", 0.3}});
    const auto pi = mu.stationary();
    CHECK(pi[0] + pi[1] + pi[2] == Approx(1.0).epsilon(1e-13));
    CHECK(mu.has_holding());
    for (char to : {'R', 'H', 'L'}) {
        double in = 0.0;
        for (char from : {'R', 'H', 'L'})
            in += pi[step_index(from)] * mu.transition_prob(from, to);
        CHECK(in == Approx(pi[step_index(to)]).epsilon(1e-13));
    }
    CHECK(validate(mu, 5).empty());
}

TEST_CASE("table step measure lookup and depth guard") {
    const StepMeasure mu = fixtures::unsupported_table();
    CHECK(mu.kind() == StepKind::Table);
    CHECK(mu.table_depth() == 3);
    CHECK(mu.word_prob("RRR") == 0.25);
    CHECK(mu.word_prob("H") == 0.0);  // absent words read as zero
    CHECK(mu.word_prob("") == 1.0);
    CHECK_THROWS_AS(mu.word_prob("RRRR"), DepthExceededError);
    CHECK_FALSE(mu.sampleable());
    std::mt19937_64 rng(1);
    CHECK_THROWS_AS(mu.sample_first(rng), NotSampleableError);
    CHECK_THROWS_AS(StepMeasure::table({{"RRRR", 1.0}}, 3), ContractError);
}

TEST_CASE("validate flags additivity violations with their magnitude") {
    const StepMeasure broken = StepMeasure::table({{"R", 0.5}, {"L", 0.4}}, 1);
    const auto violations = validate(broken, 1);
    REQUIRE_FALSE(violations.empty());
    bool found = false;
    for (const auto& v : violations)
        if (v.check == "additivity" && v.where == "(empty)" &&
            std::abs(v.magnitude - 0.1) < 1e-12)
            found = true;
    CHECK(found);
}

TEST_CASE("validate passes exact measures") {
    CHECK(validate(StepMeasure::iid(0.7, 0.3), 5).empty());
    CHECK(validate(StepMeasure::iid(0.5, 0.3, 0.2), 5).empty());
    CHECK(validate(fixtures::markov_84(), 5).empty());
    CHECK(validate(fixtures::unsupported_table(), 6).empty());  // clamped to depth 3
}

TEST_CASE("classification: symmetric, strongly asymmetric, straightforward") {
    const StepMeasure sym = StepMeasure::iid(0.35, 0.35, 0.3);
    CHECK(is_symmetric(sym, 6));
    CHECK(is_straightforward(sym, 6));
    CHECK_FALSE(is_strongly_asymmetric(sym, 6).strongly_asymmetric);
    CHECK(is_strongly_asymmetric(sym, 6).witness_n == 1);
    CHECK(classify_regime(sym, 6) == Regime::Symmetric);

    const StepMeasure asym = StepMeasure::iid(0.7, 0.3);
    const SymmetryCheck sc = symmetry_check(asym, 6);
    CHECK_FALSE(sc.symmetric);
    CHECK(sc.witness == "L");
    CHECK(is_strongly_asymmetric(asym, 8).strongly_asymmetric);
    CHECK(classify_regime(asym, 6) == Regime::Asymmetric);
    CHECK(classify_regime(fixtures::markov_84(), 6) == Regime::Asymmetric);

    // Symmetric but not straightforward: all mass on holding.
    const StepMeasure hold = StepMeasure::iid(0.0, 0.0, 1.0);
    CHECK(is_symmetric(hold, 4));
    CHECK_FALSE(is_straightforward(hold, 4));
    CHECK(straightforward_check(hold, 4).witness_n == 1);
    CHECK_THROWS_AS(classify_regime(hold, 4), UnsupportedRegimeError);
}

TEST_CASE("the frozen unsupported table fits neither regime") {
    const StepMeasure mu = fixtures::unsupported_table();
    CHECK_FALSE(is_strongly_asymmetric(mu, 3).strongly_asymmetric);
    CHECK(is_strongly_asymmetric(mu, 3).witness_n == 1);
    const SymmetryCheck sc = symmetry_check(mu, 3);
    CHECK_FALSE(sc.symmetric);
    CHECK(sc.witness == "LLL");
    try {
        classify_regime(mu, 3);
        FAIL("expected UnsupportedRegimeError");
    } catch (const UnsupportedRegimeError& e) {
        const std::string what = e.what();
        CHECK(what.find("LLL") != std::string::npos);
    }
}

TEST_CASE("sampling is deterministic per seed and honours the distribution") {
    const StepMeasure mu = StepMeasure::iid(0.7, 0.3);
    std::mt19937_64 a(42), b(42), c(43);
    std::string sa, sb, sc;
    char pa = 'R', pb = 'R', pc = 'R';
    for (int i = 0; i < 200; ++i) {
        pa = i == 0 ? mu.sample_first(a) : mu.sample_next(a, pa);
        pb = i == 0 ? mu.sample_first(b) : mu.sample_next(b, pb);
        pc = i == 0 ? mu.sample_first(c) : mu.sample_next(c, pc);
        sa += pa;
        sb += pb;
        sc += pc;
    }
    CHECK(sa == sb);
    CHECK(sa != sc);

    const StepMeasure sure = StepMeasure::iid(1.0, 0.0);
    std::mt19937_64 rng(7);
    for (int i = 0; i < 50; ++i) CHECK(sure.sample_next(rng, 'R') == 'R');
}

TEST_CASE("scenery measures: periodic, iid, table") {
    const SceneryMeasure orbit = SceneryMeasure::periodic_orbit("001");
    CHECK(orbit.cylinder_prob("") == 1.0);
    CHECK(orbit.cylinder_prob("0") == Approx(2.0 / 3).epsilon(1e-15));
    CHECK(orbit.cylinder_prob("1") == Approx(1.0 / 3).epsilon(1e-15));
    CHECK(orbit.cylinder_prob("001") == Approx(1.0 / 3).epsilon(1e-15));
    CHECK(orbit.cylinder_prob("100") == Approx(1.0 / 3).epsilon(1e-15));
    CHECK(orbit.cylinder_prob("11") == 0.0);
    CHECK(orbit.cylinder_prob("0010010") == Approx(1.0 / 3).epsilon(1e-15));

    const SceneryMeasure coin = SceneryMeasure::iid({0.6, 0.4});
    CHECK(coin.cylinder_prob("01") == Approx(0.24).epsilon(1e-15));
    CHECK_THROWS_AS(SceneryMeasure::iid({0.6, 0.3}), ContractError);
    CHECK_THROWS_AS(coin.cylinder_prob("2"), ContractError);

    const SceneryMeasure tab = SceneryMeasure::table({{"0", 0.5}, {"1", 0.5}}, 1);
    CHECK(tab.cylinder_prob("0") == 0.5);
    CHECK_THROWS_AS(tab.cylinder_prob("00"), DepthExceededError);
    CHECK_THROWS_AS(SceneryMeasure::periodic_orbit(""), ContractError);
    CHECK_THROWS_AS(SceneryMeasure::periodic_orbit("012"), ContractError);
    CHECK(validate(orbit, 5).empty());
    CHECK(validate(coin, 5).empty());
}

TEST_CASE("periodic cylinder values are multiples of 1/period") {
    for (const char* word : {"01", "001", "0010", "001011"}) {
        const SceneryMeasure lam = SceneryMeasure::periodic_orbit(word);
        const double q = static_cast<double>(std::string(word).size());
        for (const auto& v : ColourAlphabet::binary().words_of_length(4)) {
            const double scaled = lam.cylinder_prob(v) * q;
            CHECK(std::abs(scaled - std::round(scaled)) < 1e-12);
        }
    }
}
