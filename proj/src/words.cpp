#include "rwrs/words.hpp"

#include <algorithm>

namespace rwrs {

int step_value(char s) {
    switch (s) {
        case kStepL: return -1;
        case kStepH: return 0;
        case kStepR: return 1;
    }
    throw ContractError(std::string("not a step symbol: '") + s + "'");
}

std::size_t step_index(char s) {
    switch (s) {
        case kStepL: return 0;
        case kStepH: return 1;
        case kStepR: return 2;
    }
    throw ContractError(std::string("not a step symbol: '") + s + "'");
}

bool is_step_word(std::string_view u) {
    return std::all_of(u.begin(), u.end(),
                       [](char c) { return c == kStepL || c == kStepH || c == kStepR; });
}

std::string reverse_word(std::string_view w) {
    return std::string(w.rbegin(), w.rend());
}

std::string mirror_word(std::string_view u) {
    std::string out;
    out.reserve(u.size());
    for (char c : u) {
        switch (c) {
            case kStepL: out.push_back(kStepR); break;
            case kStepR: out.push_back(kStepL); break;
            case kStepH: out.push_back(kStepH); break;
            default:
                throw ContractError(std::string("not a step symbol: '") + c + "'");
        }
    }
    return out;
}

bool is_palindrome(std::string_view w) {
    std::size_t i = 0, j = w.size();
    while (i + 1 < j) {
        if (w[i] != w[j - 1]) return false;
        ++i;
        --j;
    }
    return true;
}

std::string rotate_word(std::string_view w, std::size_t k) {
    if (w.empty()) return {};
    k %= w.size();
    std::string out(w.substr(k));
    out.append(w.substr(0, k));
    return out;
}

ColourAlphabet::ColourAlphabet(std::string symbols) : symbols_(std::move(symbols)) {
    if (symbols_.size() < 2)
        throw ContractError("colour alphabet needs at least two symbols");
    for (std::size_t i = 0; i < symbols_.size(); ++i)
        for (std::size_t j = i + 1; j < symbols_.size(); ++j)
            if (symbols_[i] == symbols_[j])
                throw ContractError("colour alphabet has a repeated symbol");
}

const ColourAlphabet& ColourAlphabet::binary() {
    static const ColourAlphabet a{"01"};
    return a;
}

bool ColourAlphabet::contains(char c) const {
    return symbols_.find(c) != std::string::npos;
}

std::size_t ColourAlphabet::index_of(char c) const {
    auto pos = symbols_.find(c);
    if (pos == std::string::npos)
        throw ContractError(std::string("symbol '") + c + "' not in alphabet \"" + symbols_ + "\"");
    return pos;
}

bool ColourAlphabet::contains_word(std::string_view w) const {
    return std::all_of(w.begin(), w.end(), [this](char c) { return contains(c); });
}

bool ColourAlphabet::lex_less(std::string_view a, std::string_view b) const {
    const std::size_t m = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < m; ++i) {
        if (a[i] != b[i]) return index_of(a[i]) < index_of(b[i]);
    }
    return a.size() < b.size();
}

std::vector<std::string> ColourAlphabet::words_of_length(std::size_t k) const {
    std::size_t count = 1;
    for (std::size_t i = 0; i < k; ++i) {
        if (count > 10'000'000 / symbols_.size())
            throw ContractError("words_of_length: too many words at this length");
        count *= symbols_.size();
    }
    std::vector<std::string> out;
    out.reserve(count);
    std::vector<std::size_t> digit(k, 0);
    for (std::size_t n = 0; n < count; ++n) {
        std::string w(k, symbols_[0]);
        for (std::size_t i = 0; i < k; ++i) w[i] = symbols_[digit[i]];
        out.push_back(std::move(w));
        for (std::size_t i = k; i-- > 0;) {
            if (++digit[i] < symbols_.size()) break;
            digit[i] = 0;
        }
    }
    return out;
}

std::size_t WordOrder::index_of(std::string_view w) const {
    auto it = index.find(w);
    if (it == index.end())
        throw ContractError("word \"" + std::string(w) + "\" not in order of depth " +
                            std::to_string(depth));
    return it->second;
}

WordOrder canonical_order(const ColourAlphabet& alphabet, int depth) {
    if (depth < 1) throw ContractError("canonical_order: depth must be >= 1");
    WordOrder order;
    order.alphabet = alphabet;
    order.depth = depth;
    for (int k = 1; k <= depth; ++k) {
        const auto words = alphabet.words_of_length(static_cast<std::size_t>(k));
        for (const auto& w : words)
            if (is_palindrome(w)) order.entries.push_back(w);
        for (const auto& w : words) {
            if (is_palindrome(w)) continue;
            std::string rev = reverse_word(w);
            if (alphabet.lex_less(w, rev)) {
                order.entries.push_back(w);
                order.entries.push_back(std::move(rev));
            }
        }
    }
    order.index.reserve(order.entries.size());
    for (std::size_t i = 0; i < order.entries.size(); ++i)
        order.index.emplace(order.entries[i], i);
    return order;
}

}  // namespace rwrs
