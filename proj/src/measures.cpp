#include "rwrs/measures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace rwrs {

namespace {

constexpr double kSumSlack = 1e-9;

double u01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Inverse CDF over the fixed L, H, R symbol order.
char pick_step(std::mt19937_64& rng, const std::array<double, 3>& dist) {
    const double u = u01(rng);
    double acc = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        acc += dist[i];
        if (u < acc) return kStepSymbols[i];
    }
    return kStepR;  // guard against accumulated rounding
}

void require_prob(double p, const char* what) {
    if (!(p >= 0.0) || !(p <= 1.0 + kSumSlack))
        throw ContractError(std::string(what) + " must lie in [0, 1]");
}

// Solves pi P = pi, sum pi = 1 on the m active states by Gaussian
// elimination with partial pivoting (m <= 3).
std::array<double, 3> stationary_of(const std::array<std::array<double, 3>, 3>& trans,
                                    const std::array<bool, 3>& active) {
    std::vector<std::size_t> states;
    for (std::size_t i = 0; i < 3; ++i)
        if (active[i]) states.push_back(i);
    const std::size_t m = states.size();

    // Rows 0..m-2: balance equations; last row: normalization.
    std::vector<std::vector<double>> a(m, std::vector<double>(m + 1, 0.0));
    for (std::size_t eq = 0; eq + 1 < m; ++eq) {
        for (std::size_t j = 0; j < m; ++j)
            a[eq][j] = trans[states[j]][states[eq]] - (j == eq ? 1.0 : 0.0);
        a[eq][m] = 0.0;
    }
    for (std::size_t j = 0; j < m; ++j) a[m - 1][j] = 1.0;
    a[m - 1][m] = 1.0;

    for (std::size_t col = 0; col < m; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < m; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        std::swap(a[col], a[piv]);
        if (std::abs(a[col][col]) < 1e-14)
            throw ContractError("markov chain has no unique stationary distribution");
        for (std::size_t r = 0; r < m; ++r) {
            if (r == col) continue;
            const double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c <= m; ++c) a[r][c] -= f * a[col][c];
        }
    }

    std::array<double, 3> pi{};
    for (std::size_t j = 0; j < m; ++j) {
        double v = a[j][m] / a[j][j];
        if (v < 0.0 && v > -1e-12) v = 0.0;
        if (v < 0.0) throw ContractError("markov stationary distribution has a negative entry");
        pi[states[j]] = v;
    }
    return pi;
}

bool strongly_connected(const std::array<std::array<double, 3>, 3>& trans,
                        const std::array<bool, 3>& active) {
    auto reach_all = [&](std::size_t start, bool transpose) {
        std::array<bool, 3> seen{};
        std::vector<std::size_t> stack{start};
        seen[start] = true;
        while (!stack.empty()) {
            const std::size_t v = stack.back();
            stack.pop_back();
            for (std::size_t w = 0; w < 3; ++w) {
                if (!active[w] || seen[w]) continue;
                const double edge = transpose ? trans[w][v] : trans[v][w];
                if (edge > 0.0) {
                    seen[w] = true;
                    stack.push_back(w);
                }
            }
        }
        for (std::size_t w = 0; w < 3; ++w)
            if (active[w] && !seen[w]) return false;
        return true;
    };
    std::size_t start = 0;
    while (start < 3 && !active[start]) ++start;
    if (start == 3) return false;
    return reach_all(start, false) && reach_all(start, true);
}

std::string format_prob(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

}  // namespace

StepMeasure StepMeasure::iid(double p_r, double p_l, double p_h) {
    require_prob(p_r, "p_R");
    require_prob(p_l, "p_L");
    require_prob(p_h, "p_H");
    if (std::abs(p_r + p_l + p_h - 1.0) > kSumSlack)
        throw ContractError("iid step probabilities must sum to 1");
    StepMeasure mu;
    mu.kind_ = StepKind::Iid;
    mu.p_ = {p_l, p_h, p_r};
    return mu;
}

StepMeasure StepMeasure::markov(const std::map<std::string, double>& transition) {
    StepMeasure mu;
    mu.kind_ = StepKind::Markov;
    for (const auto& [key, p] : transition) {
        if (key.size() != 2 || !is_step_word(key))
            throw ContractError("markov transition key must be two step symbols, got \"" + key +
                                "\"");
        require_prob(p, ("transition " + key).c_str());
        mu.active_[step_index(key[0])] = true;
        mu.trans_[step_index(key[0])][step_index(key[1])] = p;
    }
    std::size_t n_active = 0;
    for (std::size_t i = 0; i < 3; ++i) {
        if (!mu.active_[i]) continue;
        ++n_active;
        double row = 0.0;
        for (std::size_t j = 0; j < 3; ++j) {
            if (mu.trans_[i][j] > 0.0 && !mu.active_[j])
                throw ContractError(std::string("markov chain leaks into state '") +
                                    kStepSymbols[j] + "' which has no transition row");
            row += mu.trans_[i][j];
        }
        if (std::abs(row - 1.0) > kSumSlack)
            throw ContractError(std::string("markov row for '") + kStepSymbols[i] +
                                "' must sum to 1");
    }
    if (n_active == 0) throw ContractError("markov transition table is empty");
    if (!strongly_connected(mu.trans_, mu.active_))
        throw ContractError("markov chain must be irreducible over its given states");
    mu.pi_ = stationary_of(mu.trans_, mu.active_);
    return mu;
}

StepMeasure StepMeasure::table(std::map<std::string, double> values, int depth) {
    if (depth < 1) throw ContractError("table depth must be >= 1");
    for (const auto& [word, p] : values) {
        if (word.empty() || static_cast<int>(word.size()) > depth)
            throw ContractError("table word \"" + word + "\" outside depth 1.." +
                                std::to_string(depth));
        if (!is_step_word(word))
            throw ContractError("table word \"" + word + "\" is not a step word");
        require_prob(p, ("mu[" + word + "]").c_str());
    }
    StepMeasure mu;
    mu.kind_ = StepKind::Table;
    mu.table_ = std::move(values);
    mu.table_depth_ = depth;
    return mu;
}

double StepMeasure::word_prob(std::string_view u) const {
    if (!is_step_word(u))
        throw ContractError("word_prob: \"" + std::string(u) + "\" is not a step word");
    if (u.empty()) return 1.0;
    switch (kind_) {
        case StepKind::Iid: {
            double p = 1.0;
            for (char s : u) p *= p_[step_index(s)];
            return p;
        }
        case StepKind::Markov: {
            double p = pi_[step_index(u[0])];
            for (std::size_t i = 1; i < u.size() && p != 0.0; ++i)
                p *= trans_[step_index(u[i - 1])][step_index(u[i])];
            return p;
        }
        case StepKind::Table: {
            if (static_cast<int>(u.size()) > table_depth_)
                throw DepthExceededError("word \"" + std::string(u) + "\" exceeds table depth " +
                                         std::to_string(table_depth_));
            auto it = table_.find(std::string(u));
            return it == table_.end() ? 0.0 : it->second;
        }
    }
    return 0.0;
}

double StepMeasure::run_prob(char s, int n) const {
    if (n < 0) throw ContractError("run_prob: negative length");
    return word_prob(std::string(static_cast<std::size_t>(n), s));
}

double StepMeasure::first_prob(char s) const {
    switch (kind_) {
        case StepKind::Iid: return p_[step_index(s)];
        case StepKind::Markov: return pi_[step_index(s)];
        case StepKind::Table: break;
    }
    throw ContractError("first_prob: table measures have no incremental form");
}

double StepMeasure::extend_prob(double prefix_prob, char prev, char next) const {
    switch (kind_) {
        case StepKind::Iid: return prefix_prob * p_[step_index(next)];
        case StepKind::Markov: return prefix_prob * trans_[step_index(prev)][step_index(next)];
        case StepKind::Table: break;
    }
    throw ContractError("extend_prob: table measures have no incremental form");
}

char StepMeasure::sample_first(std::mt19937_64& rng) const {
    if (!sampleable()) throw NotSampleableError("table step measures cannot be sampled");
    return pick_step(rng, kind_ == StepKind::Iid ? p_ : pi_);
}

char StepMeasure::sample_next(std::mt19937_64& rng, char prev) const {
    if (!sampleable()) throw NotSampleableError("table step measures cannot be sampled");
    if (kind_ == StepKind::Iid) return pick_step(rng, p_);
    return pick_step(rng, trans_[step_index(prev)]);
}

std::array<double, 3> StepMeasure::stationary() const {
    switch (kind_) {
        case StepKind::Iid: return p_;
        case StepKind::Markov: return pi_;
        case StepKind::Table: {
            std::array<double, 3> out{};
            for (std::size_t i = 0; i < 3; ++i)
                out[i] = word_prob(std::string_view(&kStepSymbols[i], 1));
            return out;
        }
    }
    return {};
}

double StepMeasure::transition_prob(char from, char to) const {
    if (kind_ != StepKind::Markov)
        throw ContractError("transition_prob is defined for markov measures only");
    return trans_[step_index(from)][step_index(to)];
}

bool StepMeasure::has_holding(double eps) const {
    return stationary()[step_index(kStepH)] > eps;
}

std::string StepMeasure::describe() const {
    switch (kind_) {
        case StepKind::Iid:
            return "iid(pR=" + format_prob(p_[2]) + ",pL=" + format_prob(p_[0]) +
                   ",pH=" + format_prob(p_[1]) + ")";
        case StepKind::Markov: {
            std::ostringstream os;
            os << "markov(";
            bool first = true;
            for (std::size_t i = 0; i < 3; ++i) {
                if (!active_[i]) continue;
                for (std::size_t j = 0; j < 3; ++j) {
                    if (trans_[i][j] == 0.0) continue;
                    if (!first) os << ",";
                    first = false;
                    os << kStepSymbols[i] << kStepSymbols[j] << "=" << format_prob(trans_[i][j]);
                }
            }
            os << ")";
            return os.str();
        }
        case StepKind::Table:
            return "table(depth=" + std::to_string(table_depth_) + "," +
                   std::to_string(table_.size()) + " words)";
    }
    return {};
}

SceneryMeasure SceneryMeasure::periodic_orbit(std::string word, ColourAlphabet alphabet) {
    if (word.empty()) throw ContractError("periodic scenery word must be nonempty");
    if (!alphabet.contains_word(word))
        throw ContractError("periodic scenery word \"" + word + "\" uses symbols outside \"" +
                            alphabet.symbols() + "\"");
    SceneryMeasure lam;
    lam.kind_ = SceneryKind::Periodic;
    lam.alphabet_ = std::move(alphabet);
    lam.word_ = std::move(word);
    return lam;
}

SceneryMeasure SceneryMeasure::iid(std::vector<double> probs, ColourAlphabet alphabet) {
    if (probs.size() != alphabet.size())
        throw ContractError("iid scenery needs one probability per colour");
    double sum = 0.0;
    for (double p : probs) {
        require_prob(p, "colour probability");
        sum += p;
    }
    if (std::abs(sum - 1.0) > kSumSlack)
        throw ContractError("iid colour probabilities must sum to 1");
    SceneryMeasure lam;
    lam.kind_ = SceneryKind::Iid;
    lam.alphabet_ = std::move(alphabet);
    lam.probs_ = std::move(probs);
    return lam;
}

SceneryMeasure SceneryMeasure::table(std::map<std::string, double> values, int depth,
                                     ColourAlphabet alphabet) {
    if (depth < 1) throw ContractError("table depth must be >= 1");
    for (const auto& [word, p] : values) {
        if (word.empty() || static_cast<int>(word.size()) > depth)
            throw ContractError("table word \"" + word + "\" outside depth 1.." +
                                std::to_string(depth));
        if (!alphabet.contains_word(word))
            throw ContractError("table word \"" + word + "\" uses symbols outside \"" +
                                alphabet.symbols() + "\"");
        require_prob(p, ("lambda[" + word + "]").c_str());
    }
    SceneryMeasure lam;
    lam.kind_ = SceneryKind::Table;
    lam.alphabet_ = std::move(alphabet);
    lam.table_ = std::move(values);
    lam.table_depth_ = depth;
    return lam;
}

const std::string& SceneryMeasure::period_word() const {
    if (kind_ != SceneryKind::Periodic)
        throw ContractError("period_word is defined for periodic sceneries only");
    return word_;
}

double SceneryMeasure::cylinder_prob(std::string_view v) const {
    if (v.empty()) return 1.0;
    if (!alphabet_.contains_word(v))
        throw ContractError("cylinder word \"" + std::string(v) + "\" uses symbols outside \"" +
                            alphabet_.symbols() + "\"");
    switch (kind_) {
        case SceneryKind::Periodic: {
            const std::size_t q = word_.size();
            std::size_t hits = 0;
            for (std::size_t k = 0; k < q; ++k) {
                bool match = true;
                for (std::size_t i = 0; i < v.size() && match; ++i)
                    match = word_[(k + i) % q] == v[i];
                hits += match;
            }
            return static_cast<double>(hits) / static_cast<double>(q);
        }
        case SceneryKind::Iid: {
            double p = 1.0;
            for (char c : v) p *= probs_[alphabet_.index_of(c)];
            return p;
        }
        case SceneryKind::Table: {
            if (static_cast<int>(v.size()) > table_depth_)
                throw DepthExceededError("cylinder \"" + std::string(v) +
                                         "\" exceeds table depth " +
                                         std::to_string(table_depth_));
            auto it = table_.find(std::string(v));
            return it == table_.end() ? 0.0 : it->second;
        }
    }
    return 0.0;
}

std::string SceneryMeasure::describe() const {
    switch (kind_) {
        case SceneryKind::Periodic: return "periodic(\"" + word_ + "\")";
        case SceneryKind::Iid: {
            std::ostringstream os;
            os << "iid(";
            for (std::size_t i = 0; i < probs_.size(); ++i) {
                if (i) os << ",";
                os << alphabet_.symbol(i) << "=" << format_prob(probs_[i]);
            }
            os << ")";
            return os.str();
        }
        case SceneryKind::Table:
            return "table(depth=" + std::to_string(table_depth_) + "," +
                   std::to_string(table_.size()) + " words)";
    }
    return {};
}

namespace {

// Enumerates step words of the given length in L < H < R lexicographic
// order, invoking f(word).
template <typename F>
void for_each_step_word(int length, F&& f) {
    std::string u(static_cast<std::size_t>(length), kStepL);
    std::vector<std::size_t> digit(static_cast<std::size_t>(length), 0);
    while (true) {
        f(std::string_view(u));
        std::size_t i = u.size();
        while (i-- > 0) {
            if (++digit[i] < 3) {
                u[i] = kStepSymbols[digit[i]];
                break;
            }
            digit[i] = 0;
            u[i] = kStepSymbols[0];
        }
        if (i == static_cast<std::size_t>(-1)) break;
    }
}

int clamp_depth(const StepMeasure& mu, int depth) {
    if (mu.kind() == StepKind::Table) return std::min(depth, mu.table_depth());
    return depth;
}

}  // namespace

SymmetryCheck symmetry_check(const StepMeasure& mu, int depth, double eps) {
    if (depth < 1) throw ContractError("symmetry_check: depth must be >= 1");
    depth = clamp_depth(mu, depth);
    SymmetryCheck out;
    for (int k = 1; k <= depth && out.symmetric; ++k) {
        for_each_step_word(k, [&](std::string_view u) {
            if (!out.symmetric) return;
            if (std::abs(mu.word_prob(u) - mu.word_prob(mirror_word(u))) > eps) {
                out.symmetric = false;
                out.witness = std::string(u);
            }
        });
    }
    return out;
}

bool is_symmetric(const StepMeasure& mu, int depth, double eps) {
    return symmetry_check(mu, depth, eps).symmetric;
}

AsymmetryCheck is_strongly_asymmetric(const StepMeasure& mu, int depth, double eps) {
    if (depth < 1) throw ContractError("is_strongly_asymmetric: depth must be >= 1");
    depth = clamp_depth(mu, depth);
    for (int n = 1; n <= depth; ++n) {
        if (std::abs(mu.run_prob(kStepR, n) - mu.run_prob(kStepL, n)) <= eps)
            return {false, n};
    }
    return {true, 0};
}

StraightforwardCheck straightforward_check(const StepMeasure& mu, int depth, double eps) {
    if (depth < 1) throw ContractError("straightforward_check: depth must be >= 1");
    depth = clamp_depth(mu, depth);
    for (int n = 1; n <= depth; ++n)
        if (mu.run_prob(kStepR, n) <= eps) return {false, n};
    return {true, 0};
}

bool is_straightforward(const StepMeasure& mu, int depth, double eps) {
    return straightforward_check(mu, depth, eps).straightforward;
}

Regime classify_regime(const StepMeasure& mu, int depth, double eps) {
    const AsymmetryCheck asym = is_strongly_asymmetric(mu, depth, eps);
    if (asym.strongly_asymmetric) return Regime::Asymmetric;
    const SymmetryCheck sym = symmetry_check(mu, depth, eps);
    if (sym.symmetric) {
        const StraightforwardCheck st = straightforward_check(mu, depth, eps);
        if (st.straightforward) return Regime::Symmetric;
        throw UnsupportedRegimeError("step measure is symmetric but not straightforward: mu[R^" +
                                     std::to_string(st.witness_n) + "] = 0");
    }
    throw UnsupportedRegimeError(
        "step measure is neither strongly asymmetric (mu[R^" + std::to_string(asym.witness_n) +
        "] = mu[L^" + std::to_string(asym.witness_n) + "]) nor symmetric (mu[" + sym.witness +
        "] != mu[" + mirror_word(sym.witness) + "])");
}

std::vector<Violation> validate(const StepMeasure& mu, int depth, double eps) {
    if (depth < 1) throw ContractError("validate: depth must be >= 1");
    depth = clamp_depth(mu, depth);
    std::vector<Violation> out;
    auto shown = [](std::string_view u) {
        return u.empty() ? std::string("(empty)") : std::string(u);
    };
    for (int k = 0; k < depth; ++k) {
        for_each_step_word(k, [&](std::string_view u) {
            const double p = mu.word_prob(u);
            double right = 0.0, left = 0.0;
            for (char s : kStepSymbols) {
                right += mu.word_prob(std::string(u) + s);
                left += mu.word_prob(s + std::string(u));
            }
            if (std::abs(p - right) > eps)
                out.push_back({"additivity", shown(u), std::abs(p - right)});
            if (std::abs(p - left) > eps)
                out.push_back({"stationarity", shown(u), std::abs(p - left)});
        });
    }
    for (int k = 1; k <= depth; ++k) {
        for_each_step_word(k, [&](std::string_view u) {
            const double p = mu.word_prob(u);
            if (p < -eps || p > 1.0 + eps)
                out.push_back({"range", shown(u), std::max(-p, p - 1.0)});
        });
    }
    return out;
}

std::vector<Violation> validate(const SceneryMeasure& lambda, int depth, double eps) {
    if (depth < 1) throw ContractError("validate: depth must be >= 1");
    if (lambda.kind() == SceneryKind::Table) depth = std::min(depth, lambda.table_depth());
    std::vector<Violation> out;
    const auto& alphabet = lambda.alphabet();
    auto shown = [](std::string_view v) {
        return v.empty() ? std::string("(empty)") : std::string(v);
    };
    for (int k = 0; k < depth; ++k) {
        for (const auto& v : alphabet.words_of_length(static_cast<std::size_t>(k))) {
            const double p = lambda.cylinder_prob(v);
            double right = 0.0, left = 0.0;
            for (std::size_t i = 0; i < alphabet.size(); ++i) {
                right += lambda.cylinder_prob(v + alphabet.symbol(i));
                left += lambda.cylinder_prob(alphabet.symbol(i) + v);
            }
            if (std::abs(p - right) > eps)
                out.push_back({"additivity", shown(v), std::abs(p - right)});
            if (std::abs(p - left) > eps)
                out.push_back({"stationarity", shown(v), std::abs(p - left)});
        }
    }
    for (int k = 1; k <= depth; ++k) {
        for (const auto& v : alphabet.words_of_length(static_cast<std::size_t>(k))) {
            const double p = lambda.cylinder_prob(v);
            if (p < -eps || p > 1.0 + eps)
                out.push_back({"range", shown(v), std::max(-p, p - 1.0)});
        }
    }
    return out;
}

}  // namespace rwrs
