#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "helpers.hpp"
#include "rwrs/reconstruct.hpp"

using namespace rwrs;
using doctest::Approx;

namespace {

// The scenery law written as a vector over the canonical order.
CylinderVector scenery_vector(const SceneryMeasure& lambda, int depth) {
    CylinderVector v;
    v.order = canonical_order(lambda.alphabet(), depth);
    v.values.reserve(v.order.size());
    for (const auto& w : v.order.entries) v.values.push_back(lambda.cylinder_prob(w));
    return v;
}

double max_dev(const std::vector<double>& a, const std::vector<double>& b) {
    REQUIRE(a.size() == b.size());
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST_CASE("depth-2 system matrix of a drifting walk, every entry frozen") {
    const ReconMatrix a = build_matrix(StepMeasure::iid(0.7, 0.3), 2);
    REQUIRE(a.size() == 6);
    REQUIRE(a.order.entries == std::vector<std::string>{"0", "1", "00", "11", "01", "10"});
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 6; ++j) CHECK(a.at(i, j) == (i == j ? 1.0 : 0.0));
    const std::vector<double> row01 = {0, 0, 0, 0, 0.7, 0.3};
    const std::vector<double> row10 = {0, 0, 0, 0, 0.3, 0.7};
    for (std::size_t j = 0; j < 6; ++j) {
        CHECK(a.at(4, j) == row01[j]);
        CHECK(a.at(5, j) == row10[j]);
    }
    CHECK_FALSE(a.holding);
    CHECK_FALSE(a.symmetric_form);
    CHECK(a.effective_rank == 6);
}

TEST_CASE("holding walks fill in strictly below the diagonal blocks") {
    const ReconMatrix a = build_matrix(StepMeasure::iid(0.56, 0.24, 0.2), 2);
    CHECK(a.holding);
    CHECK(a.at(2, 0) == 0.2);  // a held step reads the start colour twice
    CHECK(a.at(2, 2) == Approx(0.8).epsilon(1e-15));
    CHECK(a.at(3, 1) == 0.2);
    CHECK(a.at(4, 0) == 0.0);  // holding cannot produce two different colours
    const StructureReport rep = verify_structure(a, StepMeasure::iid(0.56, 0.24, 0.2));
    CHECK(rep.ok());
    CHECK(rep.nonzero_below_blocks == 2);
    REQUIRE(rep.holding_comparison.has_value());
    CHECK(rep.holding_comparison->baseline_nonzero_below == 0);
    CHECK(rep.holding_comparison->variant_nonzero_below == 2);
}

TEST_CASE("diagonal blocks partition the order") {
    const ReconMatrix a = build_matrix(StepMeasure::iid(0.7, 0.3), 3);
    REQUIRE(a.size() == 14);
    CHECK(a.blocks.size() == 11);  // 2 + 3 + 6 over lengths 1..3
    CHECK(a.effective_rank == 14);
    std::size_t covered = 0;
    for (const auto& b : a.blocks) {
        CHECK(b.begin == covered);
        covered += b.size;
        CHECK((b.size == 1 || b.size == 2));
        if (b.size == 2) {
            CHECK(a.order.entries[b.begin] ==
                  reverse_word(a.order.entries[b.begin + 1]));
        } else {
            CHECK(is_palindrome(a.order.entries[b.begin]));
        }
    }
    CHECK(covered == a.size());
    CHECK(a.block_of(4).begin == 4);
    CHECK(a.block_of(5).begin == 4);
    CHECK(a.block_of(0).size == 1);
    CHECK_THROWS_AS(a.block_of(14), ContractError);

    const ReconMatrix s = build_symmetric_matrix(StepMeasure::iid(0.5, 0.5), 3);
    CHECK(s.symmetric_form);
    CHECK(s.effective_rank == 11);
}

TEST_CASE("structure verification passes real measures and frozen pair blocks") {
    const StepMeasure mu = fixtures::markov_84();
    const ReconMatrix a = build_matrix(mu, 4);
    CHECK(verify_structure(a, mu).ok());

    // The reversal pair (0001, 1000) is coupled through the two full runs.
    REQUIRE(a.order.entries[18] == "0001");
    REQUIRE(a.order.entries[19] == "1000");
    CHECK(a.at(18, 18) == Approx(0.48).epsilon(1e-14));
    CHECK(a.at(18, 19) == Approx(0.04).epsilon(1e-14));
    CHECK(a.at(19, 18) == Approx(0.04).epsilon(1e-14));
    CHECK(a.at(19, 19) == Approx(0.48).epsilon(1e-14));
    for (std::size_t col = 20; col < a.size(); ++col) CHECK(a.at(18, col) == 0.0);

    CHECK(verify_structure(build_matrix(StepMeasure::iid(0.5, 0.3, 0.2), 3),
                           StepMeasure::iid(0.5, 0.3, 0.2))
              .ok());
    const StructureReport tab =
        verify_structure(build_matrix(fixtures::unsupported_table(), 3),
                         fixtures::unsupported_table());
    CHECK(tab.ok());
    CHECK_FALSE(tab.holding_comparison.has_value());  // nothing to compare against
    CHECK(verify_structure(build_symmetric_matrix(StepMeasure::iid(0.4, 0.4, 0.2), 3),
                           StepMeasure::iid(0.4, 0.4, 0.2))
              .ok());
}

TEST_CASE("structure verification catches injected faults") {
    ReconMatrix a = build_matrix(StepMeasure::iid(0.7, 0.3), 3);
    a.at(0, 5) = 0.25;  // above the first diagonal block
    StructureReport rep;
    rep = verify_structure(a, StepMeasure::iid(0.7, 0.3));
    REQUIRE_FALSE(rep.ok());
    CHECK(rep.violations.front().check == "zero-pattern");
    CHECK(rep.violations.front().where == "0,10");
    CHECK(rep.violations.front().magnitude == 0.25);

    ReconMatrix b = build_matrix(StepMeasure::iid(0.7, 0.3), 3);
    b.at(4, 4) += 0.5;  // break a pair-block diagonal
    rep = verify_structure(b, StepMeasure::iid(0.7, 0.3));
    REQUIRE_FALSE(rep.ok());
    bool block_value = false, same_length = false;
    for (const auto& v : rep.violations) {
        block_value = block_value || v.check == "block-value";
        same_length = same_length || v.check == "same-length-pattern";
    }
    CHECK(block_value);

    ReconMatrix c = build_matrix(StepMeasure::iid(0.7, 0.3), 3);
    c.at(3, 2) = 0.125;  // same length, outside the block
    rep = verify_structure(c, StepMeasure::iid(0.7, 0.3));
    REQUIRE_FALSE(rep.ok());
    same_length = false;
    for (const auto& v : rep.violations) same_length = same_length || v.check == "same-length-pattern";
    CHECK(same_length);
}

TEST_CASE("forward-then-solve returns the scenery law, asymmetric regime") {
    const std::vector<StepMeasure> mus = {StepMeasure::iid(0.7, 0.3), fixtures::markov_84(),
                                          StepMeasure::iid(0.6, 0.2, 0.2)};
    const std::vector<SceneryMeasure> lambdas = {SceneryMeasure::periodic_orbit("001011"),
                                                 SceneryMeasure::periodic_orbit("0001"),
                                                 SceneryMeasure::iid({0.5, 0.5})};
    for (const auto& mu : mus)
        for (const auto& lam : lambdas) {
            const int depth = 4;
            const ReconMatrix a = build_matrix(mu, depth);
            const CylinderVector rho = exact_record_vector(mu, lam, depth);
            const CylinderVector x = solve_asymmetric(a, rho);
            CHECK(max_dev(x.values, scenery_vector(lam, depth).values) < 1e-10);
            CHECK(residual_inf(a, x.values, rho) < 1e-12);
        }
}

TEST_CASE("singular systems are refused with the offending run length") {
    const StepMeasure fair = StepMeasure::iid(0.5, 0.5);
    const ReconMatrix a = build_matrix(fair, 2);
    const CylinderVector rho = exact_record_vector(fair, SceneryMeasure::periodic_orbit("01"), 2);
    try {
        solve_asymmetric(a, rho);
        FAIL("expected SingularSystemError");
    } catch (const SingularSystemError& e) {
        CHECK(e.witness_n == 1);
    }

    // Unequal step rates whose two-step runs still coincide: singular only
    // from the second block length on.
    const StepMeasure lopsided = StepMeasure::markov({{"RR", 0.2},
                                                      {"RH", 0.8},
                                                      {"LL", 0.4},
                                                      {"LH", 0.6},
                                                      {"HR", 8.0 / 11.0},
                                                      {"HL", 3.0 / 11.0}});
    const auto pi = lopsided.stationary();
    CHECK(pi[step_index('R')] == Approx(10.0 / 26.0).epsilon(1e-13));
    CHECK(pi[step_index('L')] == Approx(5.0 / 26.0).epsilon(1e-13));
    CHECK(lopsided.word_prob("RR") == Approx(lopsided.word_prob("LL")).epsilon(1e-13));
    const SceneryMeasure lam = SceneryMeasure::periodic_orbit("0010");
    CHECK_NOTHROW(solve_asymmetric(build_matrix(lopsided, 2),
                                   exact_record_vector(lopsided, lam, 2)));
    try {
        solve_asymmetric(build_matrix(lopsided, 3), exact_record_vector(lopsided, lam, 3));
        FAIL("expected SingularSystemError");
    } catch (const SingularSystemError& e) {
        CHECK(e.witness_n == 2);
    }
}

TEST_CASE("collapsed system matrix for a fair walk, row 0001 frozen") {
    const ReconMatrix s = build_symmetric_matrix(StepMeasure::iid(0.5, 0.5), 4);
    const std::size_t row = s.order.index_of("0001");
    for (std::size_t col = 0; col < s.size(); ++col) {
        const double want = col == row                      ? 0.25
                            : col == s.order.index_of("001") ? 0.25
                                                             : 0.0;
        CHECK(s.at(row, col) == want);
    }
}

TEST_CASE("symmetric solve recovers the reversal symmetrization") {
    const std::vector<StepMeasure> mus = {StepMeasure::iid(0.5, 0.5),
                                          StepMeasure::iid(0.4, 0.4, 0.2)};
    const std::vector<SceneryMeasure> lambdas = {SceneryMeasure::periodic_orbit("001011"),
                                                 SceneryMeasure::periodic_orbit("0010"),
                                                 SceneryMeasure::iid({0.3, 0.7})};
    for (const auto& mu : mus)
        for (const auto& lam : lambdas) {
            const int depth = 4;
            const CylinderVector rho = exact_record_vector(mu, lam, depth);
            const SymmetrizedVector x = solve_symmetric(mu, rho);
            const SymmetrizedVector want = symmetrize(scenery_vector(lam, depth));
            CHECK(max_dev(x.values, want.values) < 1e-10);
            for (const auto& w : x.order.entries)
                CHECK(x.at(w) == x.at(reverse_word(w)));  // exactly, by construction
        }

    // The orbit of 001011 is chiral: its symmetrization is a genuinely
    // different vector, so the solver must not return the plain law.
    const SceneryMeasure chiral = SceneryMeasure::periodic_orbit("001011");
    const CylinderVector plain = scenery_vector(chiral, 4);
    const SymmetrizedVector sym =
        solve_symmetric(StepMeasure::iid(0.5, 0.5),
                        exact_record_vector(StepMeasure::iid(0.5, 0.5), chiral, 4));
    CHECK(plain.at("0010") == Approx(1.0 / 6).epsilon(1e-12));
    CHECK(plain.at("0100") == 0.0);
    CHECK(sym.at("0010") == Approx(1.0 / 12).epsilon(1e-10));
    CHECK(sym.at("0100") == Approx(1.0 / 12).epsilon(1e-10));
}

TEST_CASE("symmetric solve refuses wrong regimes") {
    const CylinderVector rho = exact_record_vector(StepMeasure::iid(0.0, 0.0, 1.0),
                                                   SceneryMeasure::periodic_orbit("01"), 2);
    try {
        solve_symmetric(StepMeasure::iid(0.0, 0.0, 1.0), rho);
        FAIL("expected SingularSystemError");
    } catch (const SingularSystemError& e) {
        CHECK(e.witness_n == 1);
    }

    const CylinderVector rho2 = exact_record_vector(StepMeasure::iid(0.7, 0.3),
                                                    SceneryMeasure::periodic_orbit("01"), 2);
    CHECK_THROWS_AS(solve_symmetric(StepMeasure::iid(0.7, 0.3), rho2), ContractError);
}

TEST_CASE("reflected sceneries share a record law under symmetric walks") {
    const StepMeasure mu = StepMeasure::iid(0.4, 0.4, 0.2);
    const CylinderVector a =
        exact_record_vector(mu, SceneryMeasure::periodic_orbit("001011"), 4);
    const CylinderVector b =
        exact_record_vector(mu, SceneryMeasure::periodic_orbit("110100"), 4);
    CHECK(max_dev(a.values, b.values) < 1e-12);
}

TEST_CASE("symmetrize is idempotent and leaves palindromes untouched") {
    CylinderVector v;
    v.order = canonical_order(ColourAlphabet::binary(), 3);
    std::mt19937_64 rng(5);
    for (std::size_t i = 0; i < v.order.size(); ++i)
        v.values.push_back(static_cast<double>(rng() % 1000) / 997.0);
    const SymmetrizedVector once = symmetrize(v);
    CylinderVector carrier;
    carrier.order = once.order;
    carrier.values = once.values;
    const SymmetrizedVector twice = symmetrize(carrier);
    CHECK(once.values == twice.values);
    for (const auto& w : v.order.entries)
        if (is_palindrome(w)) CHECK(once.values[v.order.index_of(w)] == v.at(w));
}

TEST_CASE("solver contract errors") {
    const ReconMatrix sym = build_symmetric_matrix(StepMeasure::iid(0.5, 0.5), 2);
    CylinderVector rho = exact_record_vector(StepMeasure::iid(0.5, 0.5),
                                             SceneryMeasure::periodic_orbit("01"), 2);
    CHECK_THROWS_AS(solve_asymmetric(sym, rho), ContractError);
    const ReconMatrix deeper = build_matrix(StepMeasure::iid(0.7, 0.3), 3);
    CHECK_THROWS_AS(solve_asymmetric(deeper, rho), ContractError);
    CHECK_THROWS_AS(build_matrix(StepMeasure::iid(0.7, 0.3), 0), ContractError);
}
