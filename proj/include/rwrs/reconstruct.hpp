#pragma once

// The linear system tying scenery cylinders to record cylinders, and its
// solution by block forward substitution.
//
// In the palindrome-first order the system matrix is block lower triangular:
// row w only involves scenery words no longer than w, and among the words of
// full length only w and reverse(w).  The diagonal blocks are 1x1 on
// palindromes with entry mu[R^N] + mu[L^N] and 2x2 on reversal pairs with
// entries [[mu[R^N], mu[L^N]], [mu[L^N], mu[R^N]]], where N = |w| - 1 (rows
// of length 1 have diagonal entry 1).  Solving is possible whenever
// mu[R^N] != mu[L^N] for every block length.
//
// When mu is symmetric those blocks are singular and only the reversal
// symmetrization of the scenery law is determined: the collapsed system
// maps each anchored word to its reversal class, is strictly lower
// triangular with diagonal mu[R^N] + mu[L^N] = 2 mu[R^N], and is solvable
// whenever mu[R^N] > 0.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "rwrs/measures.hpp"
#include "rwrs/record.hpp"
#include "rwrs/words.hpp"

namespace rwrs {

struct DiagonalBlock {
    std::size_t begin = 0;  // first row/column index
    std::size_t size = 1;   // 1 for a palindrome, 2 for a reversal pair
    int word_length = 1;

    std::size_t end() const { return begin + size; }  // one past the last index
};

struct ReconMatrix {
    WordOrder order;
    std::vector<double> entries;  // row-major, size() x size()
    std::vector<DiagonalBlock> blocks;
    bool holding = false;         // the step measure moves mass through H
    bool symmetric_form = false;  // collapsed reversal-class system
    std::size_t effective_rank = 0;

    std::size_t size() const { return order.size(); }
    double at(std::size_t row, std::size_t col) const { return entries[row * size() + col]; }
    double& at(std::size_t row, std::size_t col) { return entries[row * size() + col]; }
    const DiagonalBlock& block_of(std::size_t row) const;
};

// Matrix of the full system: entry (w, v) sums mu[u] over walk words u whose
// pattern with w anchors the scenery word v.
ReconMatrix build_matrix(const StepMeasure& mu, int depth, int threads = 1,
                         const ColourAlphabet& alphabet = ColourAlphabet::binary());

// Matrix of the collapsed system for symmetric mu: same row sums, but each
// shorter anchored word is credited to its reversal-class representative
// (the lexicographically smaller of v and reverse(v)) and full-length words
// to the row's own diagonal.  Rows w and reverse(w) stay duplicated, so
// effective_rank counts reversal classes rather than rows.
ReconMatrix build_symmetric_matrix(const StepMeasure& mu, int depth, int threads = 1,
                                   const ColourAlphabet& alphabet = ColourAlphabet::binary());

// Structure comparison against a holding variant of the same measure (or
// against its no-holding projection when mu already holds): holding must
// not create entries above the diagonal blocks.
struct HoldingComparison {
    std::string baseline;  // description of the no-holding measure
    std::string variant;   // description of the holding measure
    std::size_t baseline_nonzero_below = 0;
    std::size_t variant_nonzero_below = 0;
};

struct StructureReport {
    std::vector<Violation> violations;
    std::size_t nonzero_below_blocks = 0;
    std::optional<HoldingComparison> holding_comparison;

    bool ok() const { return violations.empty(); }
};

// Checks the zero pattern (nothing above or after a row's diagonal block,
// no same-length entries outside the block) and the block entry formulas
// against mu, for both matrix forms.  For iid and markov measures the same
// checks are repeated on a holding variant pair.
StructureReport verify_structure(const ReconMatrix& a, const StepMeasure& mu);

// A cylinder vector with values[w] == values[reverse(w)].
struct SymmetrizedVector {
    WordOrder order;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    double at(std::string_view w) const { return values[order.index_of(w)]; }
};

// Averages each entry with its reversal: palindrome entries are returned
// bit-identically, and the map is idempotent.
SymmetrizedVector symmetrize(const CylinderVector& v);

// Solves A x = rho by block forward substitution, reading only the
// structural entries of A.  Throws SingularSystemError naming the block
// length N when |mu[R^N] - mu[L^N]| <= eps (2x2 blocks) or the diagonal is
// within eps of zero (1x1 blocks).
CylinderVector solve_asymmetric(const ReconMatrix& a, const CylinderVector& rho,
                                double eps = kDefaultEps);

// Solves the collapsed system for the reversal symmetrization of the
// scenery law.  Requires mu symmetric to depth |rho| - 1; throws
// SingularSystemError naming N when the diagonal 2 mu[R^N] is <= eps.
// Duplicated pair rows are solved independently and averaged.
SymmetrizedVector solve_symmetric(const StepMeasure& mu, const CylinderVector& rho,
                                  double eps = kDefaultEps);

// max over rows of |(A x)_row - rho_row|, using every stored entry of A.
double residual_inf(const ReconMatrix& a, const std::vector<double>& x,
                    const CylinderVector& rho);

}  // namespace rwrs
