#pragma once

// Finite words over the step alphabet {L, H, R} and over a colour alphabet,
// plus the fixed "palindrome first" order on colour words that all cylinder
// vectors and matrices use.
//
// The order lists words of length 1, 2, ... in turn.  Within one length the
// palindromes come first, in lexicographic order, followed by the
// non-palindromes in adjacent pairs (w, reverse(w)), pairs sorted by their
// lexicographically smaller member.  Lexicographic always means the order of
// symbols fixed by the ColourAlphabet, not raw char order.

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rwrs/errors.hpp"

namespace rwrs {

// Step symbols; step_value maps them to -1 / 0 / +1.
inline constexpr char kStepL = 'L';
inline constexpr char kStepH = 'H';
inline constexpr char kStepR = 'R';
inline constexpr char kStepSymbols[3] = {kStepL, kStepH, kStepR};

int step_value(char s);
std::size_t step_index(char s);  // L -> 0, H -> 1, R -> 2
bool is_step_word(std::string_view u);

std::string reverse_word(std::string_view w);
// Swaps R and L, keeps H; defined on step words only.
std::string mirror_word(std::string_view u);
bool is_palindrome(std::string_view w);
// Left rotation: w[k:] + w[:k], k taken modulo |w|.
std::string rotate_word(std::string_view w, std::size_t k);

// Ordered finite set of colour symbols.  The constructor argument fixes the
// symbol order used by every lexicographic comparison downstream.
class ColourAlphabet {
public:
    explicit ColourAlphabet(std::string symbols);
    static const ColourAlphabet& binary();  // "01"

    std::size_t size() const { return symbols_.size(); }
    char symbol(std::size_t i) const { return symbols_[i]; }
    const std::string& symbols() const { return symbols_; }
    bool contains(char c) const;
    std::size_t index_of(char c) const;  // ContractError on a foreign symbol
    bool contains_word(std::string_view w) const;
    bool lex_less(std::string_view a, std::string_view b) const;

    // All words of length k, lexicographic.
    std::vector<std::string> words_of_length(std::size_t k) const;

    friend bool operator==(const ColourAlphabet& a, const ColourAlphabet& b) {
        return a.symbols_ == b.symbols_;
    }

private:
    std::string symbols_;
};

struct TransparentStringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const {
        return std::hash<std::string_view>{}(s);
    }
};

// The palindrome-first order on all words of length 1..depth.
struct WordOrder {
    ColourAlphabet alphabet{ColourAlphabet::binary()};
    int depth = 0;
    std::vector<std::string> entries;
    std::unordered_map<std::string, std::size_t, TransparentStringHash, std::equal_to<>> index;

    std::size_t size() const { return entries.size(); }
    bool contains(std::string_view w) const { return index.find(w) != index.end(); }
    std::size_t index_of(std::string_view w) const;  // ContractError if absent
};

WordOrder canonical_order(const ColourAlphabet& alphabet, int depth);

}  // namespace rwrs
