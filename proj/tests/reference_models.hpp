#pragma once

// Straightforward restatements of the credit-assignment rules, kept free of
// the library's data structures so the tests check against an independent
// model rather than the implementation under test.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <vector>

#include <deaos/core.hpp>

namespace testsupport {

/// Sliding window model: plain vector, newest first, linear scans.
struct ReferenceWindow {
    std::size_t capacity;
    std::size_t metric;
    std::size_t num_operators;
    std::vector<deaos::OMRecord> entries; // newest first
    std::vector<long long> ages;          // insertion counter per entry

    ReferenceWindow(std::size_t cap, std::size_t m, std::size_t k)
        : capacity(cap), metric(m), num_operators(k) {}

    void insert(const deaos::OMRecord& rec) {
        if (!rec.improved)
            return;
        if (entries.size() >= capacity) {
            // Rule 1: same operator present -> drop its first-inserted entry.
            std::size_t victim = entries.size();
            long long oldest = std::numeric_limits<long long>::max();
            for (std::size_t i = 0; i < entries.size(); ++i) {
                if (entries[i].op == rec.op && ages[i] < oldest) {
                    oldest = ages[i];
                    victim = i;
                }
            }
            if (victim == entries.size()) {
                // Rule 2: drop the worst metric value, oldest among equals.
                double worst = std::numeric_limits<double>::infinity();
                for (std::size_t i = 0; i < entries.size(); ++i) {
                    const double v = entries[i].metrics[metric];
                    if (v < worst || (v == worst && ages[i] < oldest)) {
                        worst = v;
                        oldest = ages[i];
                        victim = i;
                    }
                }
            }
            entries.erase(entries.begin() + static_cast<std::ptrdiff_t>(victim));
            ages.erase(ages.begin() + static_cast<std::ptrdiff_t>(victim));
        }
        entries.insert(entries.begin(), rec);
        ages.insert(ages.begin(), next_age_++);
    }

  private:
    long long next_age_ = 0;
};

/// Brute-force pairwise dominance counts over diversity/quality points
/// (both axes maximised, strict dominance).
struct DominanceCounts {
    std::vector<int> dominated_by_me;
    std::vector<int> dominating_me;
};

inline DominanceCounts brute_force_dominance(const std::vector<std::pair<double, double>>& pts) {
    const std::size_t n = pts.size();
    DominanceCounts out;
    out.dominated_by_me.assign(n, 0);
    out.dominating_me.assign(n, 0);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            if (a == b)
                continue;
            const bool geq = pts[a].first >= pts[b].first && pts[a].second >= pts[b].second;
            const bool strict = pts[a].first > pts[b].first || pts[a].second > pts[b].second;
            if (geq && strict) {
                out.dominated_by_me[a] += 1;
                out.dominating_me[b] += 1;
            }
        }
    }
    return out;
}

} // namespace testsupport
