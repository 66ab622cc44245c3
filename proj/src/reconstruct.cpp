#include "rwrs/reconstruct.hpp"

#include <algorithm>
#include <cmath>

#include "internal.hpp"

namespace rwrs {

using internal::enumerate_patterns;
using internal::parallel_for;

namespace {

std::vector<DiagonalBlock> blocks_of(const WordOrder& order) {
    std::vector<DiagonalBlock> blocks;
    for (std::size_t i = 0; i < order.entries.size();) {
        const std::string& w = order.entries[i];
        DiagonalBlock b;
        b.begin = i;
        b.size = is_palindrome(w) ? 1 : 2;
        b.word_length = static_cast<int>(w.size());
        blocks.push_back(b);
        i += b.size;
    }
    return blocks;
}

ReconMatrix build(const StepMeasure& mu, int depth, int threads, const ColourAlphabet& alphabet,
                  bool symmetric_form) {
    if (depth < 1) throw ContractError("build_matrix: depth must be >= 1");
    ReconMatrix a;
    a.order = canonical_order(alphabet, depth);
    a.entries.assign(a.order.size() * a.order.size(), 0.0);
    a.blocks = blocks_of(a.order);
    a.holding = mu.has_holding();
    a.symmetric_form = symmetric_form;
    a.effective_rank = symmetric_form ? a.blocks.size() : a.order.size();

    const std::size_t n_cols = a.order.size();
    parallel_for(n_cols, threads, [&](std::size_t row) {
        const std::string& w = a.order.entries[row];
        double* out = a.entries.data() + row * n_cols;
        enumerate_patterns(mu, w, [&](double p, int, int, std::string_view anchored) {
            std::size_t col;
            if (symmetric_form) {
                if (anchored.size() == w.size()) {
                    col = row;  // anchored is w or reverse(w); both land on the diagonal
                } else {
                    std::string rev = reverse_word(anchored);
                    col = a.order.index_of(a.order.alphabet.lex_less(rev, anchored)
                                               ? std::string_view(rev)
                                               : anchored);
                }
            } else {
                col = a.order.index_of(anchored);
            }
            out[col] += p;
        });
    });
    return a;
}

bool same_order(const WordOrder& a, const WordOrder& b) {
    return a.depth == b.depth && a.alphabet == b.alphabet && a.entries == b.entries;
}

// Structural checks for one matrix: zero pattern and diagonal block values.
void check_one(const ReconMatrix& a, const StepMeasure& mu, std::vector<Violation>& out,
               std::size_t& nonzero_below) {
    const std::size_t n = a.size();
    nonzero_below = 0;
    for (std::size_t row = 0; row < n; ++row) {
        const DiagonalBlock& b = a.block_of(row);
        const std::size_t w_len = a.order.entries[row].size();
        for (std::size_t col = 0; col < n; ++col) {
            const double value = a.at(row, col);
            const bool in_block = col >= b.begin && col < b.end();
            if (in_block) continue;
            if (col >= b.end()) {
                if (value != 0.0)
                    out.push_back({"zero-pattern",
                                   a.order.entries[row] + "," + a.order.entries[col],
                                   std::abs(value)});
                continue;
            }
            if (a.order.entries[col].size() == w_len && value != 0.0) {
                out.push_back({"same-length-pattern",
                               a.order.entries[row] + "," + a.order.entries[col],
                               std::abs(value)});
                continue;
            }
            if (value != 0.0) ++nonzero_below;
        }
    }
    for (const DiagonalBlock& b : a.blocks) {
        const int big_n = b.word_length - 1;
        const double r_run = big_n == 0 ? 1.0 : mu.run_prob(kStepR, big_n);
        const double l_run = big_n == 0 ? 0.0 : mu.run_prob(kStepL, big_n);
        auto expect = [&](std::size_t row, std::size_t col, double want) {
            const double got = a.at(row, col);
            if (std::abs(got - want) > 1e-12)
                out.push_back({"block-value", a.order.entries[row] + "," + a.order.entries[col],
                               std::abs(got - want)});
        };
        if (big_n == 0) {
            // Single symbols are palindromes, so these blocks are 1x1.
            expect(b.begin, b.begin, 1.0);
            continue;
        }
        if (a.symmetric_form) {
            // Both runs land on the diagonal; off-diagonal block entries stay
            // empty because full-length anchored words are not redirected.
            for (std::size_t i = 0; i < b.size; ++i) expect(b.begin + i, b.begin + i, r_run + l_run);
            if (b.size == 2) {
                expect(b.begin, b.begin + 1, 0.0);
                expect(b.begin + 1, b.begin, 0.0);
            }
        } else if (b.size == 1) {
            expect(b.begin, b.begin, r_run + l_run);
        } else {
            expect(b.begin, b.begin, r_run);
            expect(b.begin, b.begin + 1, l_run);
            expect(b.begin + 1, b.begin, l_run);
            expect(b.begin + 1, b.begin + 1, r_run);
        }
    }
}

// A copy of mu with holding probability h mixed in, and the matching
// no-holding projection.  Iid and Markov kinds only.
StepMeasure with_holding(const StepMeasure& mu, double h) {
    if (mu.kind() == StepKind::Iid) {
        const auto p = mu.stationary();
        return StepMeasure::iid(p[2] * (1.0 - h), p[0] * (1.0 - h), p[1] + h * (p[0] + p[2]));
    }
    std::map<std::string, double> t;
    const char states[] = {kStepL, kStepH, kStepR};
    bool h_has_row = false;
    for (char from : states) {
        bool any = false;
        for (char to : states) any = any || mu.transition_prob(from, to) > 0.0;
        if (!any) continue;
        if (from == kStepH) h_has_row = true;
        for (char to : states) {
            const double p = mu.transition_prob(from, to) * (1.0 - h);
            if (p > 0.0) t[std::string{from, to}] += p;
        }
        t[std::string{from, kStepH}] += h;
    }
    if (!h_has_row) {
        t[std::string{kStepH, kStepL}] += (1.0 - h) / 2.0;
        t[std::string{kStepH, kStepR}] += (1.0 - h) / 2.0;
        t[std::string{kStepH, kStepH}] += h;
    }
    return StepMeasure::markov(t);
}

std::optional<StepMeasure> without_holding(const StepMeasure& mu) {
    if (mu.kind() == StepKind::Iid) {
        const auto p = mu.stationary();
        const double s = p[0] + p[2];
        if (s <= 0.0) return std::nullopt;
        return StepMeasure::iid(p[2] / s, p[0] / s, 0.0);
    }
    // Drop the H column and renormalize the L and R rows.
    std::map<std::string, double> t;
    for (char from : {kStepL, kStepR}) {
        const double keep =
            mu.transition_prob(from, kStepL) + mu.transition_prob(from, kStepR);
        if (keep <= 0.0) return std::nullopt;
        for (char to : {kStepL, kStepR}) {
            const double p = mu.transition_prob(from, to) / keep;
            if (p > 0.0) t[std::string{from, to}] = p;
        }
    }
    if (t.empty()) return std::nullopt;
    try {
        return StepMeasure::markov(t);
    } catch (const ContractError&) {
        return std::nullopt;
    }
}

}  // namespace

const DiagonalBlock& ReconMatrix::block_of(std::size_t row) const {
    for (const DiagonalBlock& b : blocks)
        if (row >= b.begin && row < b.end()) return b;
    throw ContractError("block_of: row " + std::to_string(row) + " out of range");
}

ReconMatrix build_matrix(const StepMeasure& mu, int depth, int threads,
                         const ColourAlphabet& alphabet) {
    return build(mu, depth, threads, alphabet, false);
}

ReconMatrix build_symmetric_matrix(const StepMeasure& mu, int depth, int threads,
                                   const ColourAlphabet& alphabet) {
    return build(mu, depth, threads, alphabet, true);
}

StructureReport verify_structure(const ReconMatrix& a, const StepMeasure& mu) {
    StructureReport report;
    check_one(a, mu, report.violations, report.nonzero_below_blocks);

    if (mu.kind() == StepKind::Table) return report;
    const int depth = a.order.depth;
    std::optional<StepMeasure> base;
    std::optional<StepMeasure> variant;
    if (mu.has_holding()) {
        base = without_holding(mu);
        variant = mu;
    } else {
        base = mu;
        variant = with_holding(mu, 0.2);
    }
    if (!base || !variant) return report;

    HoldingComparison cmp;
    cmp.baseline = base->describe();
    cmp.variant = variant->describe();
    const auto build_form = a.symmetric_form ? build_symmetric_matrix : build_matrix;
    const ReconMatrix base_m = build_form(*base, depth, 1, a.order.alphabet);
    const ReconMatrix var_m = build_form(*variant, depth, 1, a.order.alphabet);
    check_one(base_m, *base, report.violations, cmp.baseline_nonzero_below);
    check_one(var_m, *variant, report.violations, cmp.variant_nonzero_below);
    report.holding_comparison = cmp;
    return report;
}

SymmetrizedVector symmetrize(const CylinderVector& v) {
    SymmetrizedVector out;
    out.order = v.order;
    out.values.resize(v.values.size());
    for (std::size_t i = 0; i < v.values.size(); ++i) {
        const std::string& w = out.order.entries[i];
        if (is_palindrome(w)) {
            out.values[i] = v.values[i];
            continue;
        }
        const std::size_t j = out.order.index_of(reverse_word(w));
        out.values[i] = 0.5 * (v.values[i] + v.values[j]);
    }
    return out;
}

CylinderVector solve_asymmetric(const ReconMatrix& a, const CylinderVector& rho, double eps) {
    if (a.symmetric_form)
        throw ContractError("solve_asymmetric expects the full system matrix");
    if (!same_order(a.order, rho.order))
        throw ContractError("matrix and vector use different word orders");

    CylinderVector x;
    x.order = rho.order;
    x.values.assign(rho.values.size(), 0.0);
    for (const DiagonalBlock& b : a.blocks) {
        const int big_n = b.word_length - 1;
        double t[2];
        for (std::size_t i = 0; i < b.size; ++i) {
            const std::size_t row = b.begin + i;
            double acc = rho.values[row];
            for (std::size_t col = 0; col < b.begin; ++col)
                acc -= a.at(row, col) * x.values[col];
            t[i] = acc;
        }
        if (b.size == 1) {
            const double d = a.at(b.begin, b.begin);
            if (std::abs(d) <= eps)
                throw SingularSystemError("diagonal entry mu[R^N] + mu[L^N] vanishes at N = " +
                                              std::to_string(big_n),
                                          big_n);
            x.values[b.begin] = t[0] / d;
        } else {
            const double r_run = a.at(b.begin, b.begin);
            const double l_run = a.at(b.begin, b.begin + 1);
            if (std::abs(r_run - l_run) <= eps)
                throw SingularSystemError("mu[R^N] = mu[L^N] at N = " + std::to_string(big_n) +
                                              "; the pair block is singular",
                                          big_n);
            if (std::abs(r_run + l_run) <= eps)
                throw SingularSystemError("mu[R^N] + mu[L^N] vanishes at N = " +
                                              std::to_string(big_n),
                                          big_n);
            const double det = r_run * r_run - l_run * l_run;
            x.values[b.begin] = (r_run * t[0] - l_run * t[1]) / det;
            x.values[b.begin + 1] = (r_run * t[1] - l_run * t[0]) / det;
        }
    }
    return x;
}

SymmetrizedVector solve_symmetric(const StepMeasure& mu, const CylinderVector& rho, double eps) {
    const int depth = rho.order.depth;
    if (depth > 1 && !is_symmetric(mu, depth - 1))
        throw ContractError("solve_symmetric requires a symmetric step measure");
    const ReconMatrix a = build_symmetric_matrix(mu, depth, 1, rho.order.alphabet);
    if (!same_order(a.order, rho.order))
        throw ContractError("matrix and vector use different word orders");

    SymmetrizedVector x;
    x.order = rho.order;
    x.values.assign(rho.values.size(), 0.0);
    for (const DiagonalBlock& b : a.blocks) {
        const int big_n = b.word_length - 1;
        double solved[2];
        for (std::size_t i = 0; i < b.size; ++i) {
            const std::size_t row = b.begin + i;
            double acc = rho.values[row];
            for (std::size_t col = 0; col < b.begin; ++col)
                acc -= a.at(row, col) * x.values[col];
            const double d = a.at(row, row);
            if (d <= eps)
                throw SingularSystemError(
                    "2 mu[R^N] vanishes at N = " + std::to_string(big_n) +
                        "; the step measure is not straightforward",
                    big_n);
            solved[i] = acc / d;
        }
        if (b.size == 1) {
            x.values[b.begin] = solved[0];
        } else {
            const double mean = 0.5 * (solved[0] + solved[1]);
            x.values[b.begin] = mean;
            x.values[b.begin + 1] = mean;
        }
    }
    return x;
}

double residual_inf(const ReconMatrix& a, const std::vector<double>& x,
                    const CylinderVector& rho) {
    if (x.size() != a.size() || rho.values.size() != a.size())
        throw ContractError("residual_inf: size mismatch");
    double worst = 0.0;
    for (std::size_t row = 0; row < a.size(); ++row) {
        double acc = 0.0;
        for (std::size_t col = 0; col < a.size(); ++col) acc += a.at(row, col) * x[col];
        worst = std::max(worst, std::abs(acc - rho.values[row]));
    }
    return worst;
}

}  // namespace rwrs
