#pragma once

// Shared between the record and reconstruction translation units; not part
// of the public headers.

#include <algorithm>
#include <atomic>
#include <functional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "rwrs/measures.hpp"
#include "rwrs/words.hpp"

namespace rwrs::internal {

// Runs fn(i) for i = 0..count-1, splitting the range over the given number
// of threads.  Each index is processed exactly once, so any per-index
// output is independent of the split.
inline void parallel_for(std::size_t count, int threads,
                         const std::function<void(std::size_t)>& fn) {
    const unsigned hw = std::thread::hardware_concurrency();
    const int cap = static_cast<int>(std::min<std::size_t>(count, hw ? hw : 1));
    const int usable = std::max(1, std::min(threads, cap));
    if (usable == 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(usable));
    for (int t = 0; t < usable; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

// Depth-first enumeration of walk words u of length |w|-1 against the fixed
// record word w, choosing steps in L < H < R order.  Maintains the colours
// forced on visited sites; branches that would force two colours on one
// site, and branches whose walk-word prefix has probability exactly zero
// (incremental measures only), are pruned.  Prefix pruning removes only
// terms that are exactly zero, so the surviving leaf order equals the
// subsequence order of the full lexicographic enumeration.
//
// sink(prob, lo, hi, anchored) receives mu[u], the visited interval, and a
// view of the anchored word (anchored[i] is the colour at site lo + i).
template <typename Sink>
void enumerate_patterns(const StepMeasure& mu, std::string_view w, const Sink& sink) {
    const int n = static_cast<int>(w.size()) - 1;
    if (n < 0) throw ContractError("enumerate_patterns: empty record word");
    if (n == 0) {
        const char colour = w[0];
        sink(1.0, 0, 0, std::string_view(&colour, 1));
        return;
    }
    std::vector<char> site(static_cast<std::size_t>(2 * n + 1), '\0');
    const int origin = n;
    site[static_cast<std::size_t>(origin)] = w[0];
    std::string u(static_cast<std::size_t>(n), '\0');
    const bool incremental = mu.incremental();

    auto rec = [&](auto&& self, int i, int pos, int lo, int hi, double prob) -> void {
        if (i == n) {
            const double p = incremental ? prob : mu.word_prob(u);
            if (p != 0.0)
                sink(p, lo, hi,
                     std::string_view(site.data() + origin + lo,
                                      static_cast<std::size_t>(hi - lo + 1)));
            return;
        }
        const char want = w[static_cast<std::size_t>(i) + 1];
        for (char s : kStepSymbols) {
            double p2 = prob;
            if (incremental) {
                p2 = i == 0 ? mu.first_prob(s)
                            : mu.extend_prob(prob, u[static_cast<std::size_t>(i) - 1], s);
                if (p2 == 0.0) continue;
            }
            const int pos2 = pos + step_value(s);
            char& cell = site[static_cast<std::size_t>(origin + pos2)];
            if (cell != '\0' && cell != want) continue;
            const char saved = cell;
            cell = want;
            u[static_cast<std::size_t>(i)] = s;
            self(self, i + 1, pos2, std::min(lo, pos2), std::max(hi, pos2), p2);
            cell = saved;
        }
    };
    rec(rec, 0, 0, 0, 0, 1.0);
}

}  // namespace rwrs::internal
