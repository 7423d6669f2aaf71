#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <stdexcept>
#include <vector>

namespace deaos {

/// Index of an enabled mutation strategy, in [0, K).
using OperatorId = std::size_t;

/// Number of offspring metrics computed per operator application.
inline constexpr std::size_t kNumMetrics = 6;

/// A candidate solution: search-space coordinates and (minimised) objective value.
struct Solution {
    std::vector<double> position;
    double fitness = std::numeric_limits<double>::infinity();
};

/// The six offspring-metric values produced by one operator application in one
/// generation. `improved` is true iff the offspring is strictly better than its
/// parent, which is exactly metrics[1] > 0.
struct OMRecord {
    OperatorId op = 0;
    std::size_t generation = 0;
    std::array<double, kNumMetrics> metrics{};
    bool improved = false;
};

/// Per-generation success/failure counters plus the raw records they came from.
/// An application counts as a success when its value under the configured
/// metric is strictly positive.
struct GenerationStats {
    std::vector<long long> n_succ;
    std::vector<long long> n_fail;
    std::vector<OMRecord> records;
};

/// Append-only per-generation store of operator applications, plus a bounded
/// per-operator deque of the most recent metric values (successes and failures
/// alike) for the fixed-application-count credit horizon.
class GenerationMemory {
  public:
    /// `metric` selects which of the six offspring metrics drives counters and
    /// recent-value deques; `recent_capacity` bounds the per-operator deques.
    GenerationMemory(std::size_t num_operators, std::size_t metric, std::size_t recent_capacity)
        : num_operators_(num_operators), metric_(metric),
          recent_capacity_(recent_capacity), recent_(num_operators) {
        if (num_operators == 0)
            throw std::invalid_argument("GenerationMemory: need at least one operator");
        if (metric >= kNumMetrics)
            throw std::invalid_argument("GenerationMemory: metric index out of range");
        if (recent_capacity == 0)
            throw std::invalid_argument("GenerationMemory: recent capacity must be positive");
    }

    /// Appends one generation of records. All records must carry the current
    /// generation index (the number of generations committed so far).
    void commit_generation(std::vector<OMRecord> records) {
        const std::size_t gen = history_.size();
        GenerationStats stats;
        stats.n_succ.assign(num_operators_, 0);
        stats.n_fail.assign(num_operators_, 0);
        for (const OMRecord& rec : records) {
            if (rec.generation != gen)
                throw std::invalid_argument("commit_generation: mixed generation indices");
            if (rec.op >= num_operators_)
                throw std::invalid_argument("commit_generation: operator index out of range");
            const double value = rec.metrics[metric_];
            if (value > 0.0)
                ++stats.n_succ[rec.op];
            else
                ++stats.n_fail[rec.op];
            auto& dq = recent_[rec.op];
            dq.push_back(value);
            if (dq.size() > recent_capacity_)
                dq.pop_front();
        }
        stats.records = std::move(records);
        history_.push_back(std::move(stats));
    }

    struct HorizonView {
        long long succ = 0;
        long long fail = 0;
        std::vector<double> values; // configured-metric values of this operator, oldest first
    };

    /// Aggregates counters and metric values of `op` over the last
    /// min(max_gen, completed) generations.
    HorizonView applications_in_horizon(OperatorId op, std::size_t max_gen) const {
        if (max_gen == 0)
            throw std::invalid_argument("applications_in_horizon: max_gen must be >= 1");
        HorizonView view;
        const std::size_t span = std::min(max_gen, history_.size());
        for (std::size_t g = history_.size() - span; g < history_.size(); ++g) {
            const GenerationStats& stats = history_[g];
            view.succ += stats.n_succ[op];
            view.fail += stats.n_fail[op];
            for (const OMRecord& rec : stats.records)
                if (rec.op == op)
                    view.values.push_back(rec.metrics[metric_]);
        }
        return view;
    }

    /// Most recent configured-metric values of `op`, oldest first.
    const std::deque<double>& recent(OperatorId op) const { return recent_.at(op); }

    const std::vector<GenerationStats>& history() const { return history_; }
    std::size_t completed() const { return history_.size(); }
    std::size_t num_operators() const { return num_operators_; }
    std::size_t metric() const { return metric_; }

  private:
    std::size_t num_operators_;
    std::size_t metric_;
    std::size_t recent_capacity_;
    std::vector<GenerationStats> history_;
    std::vector<std::deque<double>> recent_;
};

/// Fixed-capacity store of improved applications, newest first.
///
/// Eviction on a full window: if the incoming operator already has entries,
/// its oldest entry leaves (FIFO per operator); otherwise the entry with the
/// worst configured-metric value leaves, oldest first among equals.
class WindowMemory {
  public:
    struct Entry {
        OMRecord record;
        std::uint64_t seq = 0; // global insertion counter; larger = newer
    };

    WindowMemory(std::size_t capacity, std::size_t metric)
        : capacity_(capacity), metric_(metric) {
        if (capacity == 0)
            throw std::invalid_argument("WindowMemory: capacity must be positive");
        if (metric >= kNumMetrics)
            throw std::invalid_argument("WindowMemory: metric index out of range");
    }

    /// Inserts an improved record; returns false (window unchanged) for
    /// non-improving offspring, which never enter the window.
    bool insert(const OMRecord& rec) {
        if (!rec.improved)
            return false;
        if (entries_.size() >= capacity_)
            evict_for(rec.op);
        entries_.insert(entries_.begin(), Entry{rec, next_seq_++});
        return true;
    }

    const std::vector<Entry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    std::size_t capacity() const { return capacity_; }
    std::size_t metric() const { return metric_; }

    /// Value of an entry under the configured metric.
    double value_of(const Entry& e) const { return e.record.metrics[metric_]; }

    std::size_t count_of(OperatorId op) const {
        std::size_t n = 0;
        for (const Entry& e : entries_)
            n += e.record.op == op ? 1 : 0;
        return n;
    }

  private:
    void evict_for(OperatorId incoming) {
        std::size_t victim = entries_.size();
        std::uint64_t victim_seq = std::numeric_limits<std::uint64_t>::max();
        // Oldest entry produced by the incoming operator, if any.
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            if (entries_[i].record.op == incoming && entries_[i].seq < victim_seq) {
                victim = i;
                victim_seq = entries_[i].seq;
            }
        }
        if (victim == entries_.size()) {
            // No entry by this operator: drop the worst value, oldest among ties.
            double worst = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < entries_.size(); ++i) {
                const double v = value_of(entries_[i]);
                if (v < worst || (v == worst && entries_[i].seq < victim_seq)) {
                    worst = v;
                    victim = i;
                    victim_seq = entries_[i].seq;
                }
            }
        }
        entries_.erase(entries_.begin() + static_cast<std::ptrdiff_t>(victim));
    }

    std::size_t capacity_;
    std::size_t metric_;
    std::uint64_t next_seq_ = 0;
    std::vector<Entry> entries_;
};

} // namespace deaos
