#pragma once

#include "enas/encoding.hpp"
#include "enas/objective.hpp"

#include <atomic>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace enas {

using ObjectiveFn = std::function<EvaluationRecord(const Genome&)>;

struct IterationTrace {
    int iteration = 0;
    double mean_j = 0.0;
    double best_j = 0.0;
    double mean_e = 0.0;
    double mean_c = 0.0;
    double mean_cf = 0.0;
    double mean_cs = 0.0;
    double mean_cl = 0.0;
    double mean_p = 0.0;
};

struct SearchResult {
    Genome best;
    double best_j = 0.0;
    EvaluationRecord best_record;
    std::vector<IterationTrace> trace;
    std::uint64_t evaluations = 0;
};

// Thread-safe call counter around an objective; audits the exact-budget
// contract of the optimizers.
class CountingObjective {
public:
    explicit CountingObjective(ObjectiveFn fn) : fn_(std::move(fn)) {}

    EvaluationRecord operator()(const Genome& g) const {
        count_.fetch_add(1, std::memory_order_relaxed);
        return fn_(g);
    }
    std::uint64_t count() const { return count_.load(std::memory_order_relaxed); }

private:
    ObjectiveFn fn_;
    mutable std::atomic<std::uint64_t> count_{0};
};

// Applies fn to [0, n) on a small worker pool; results land at their index,
// so reductions are schedule-independent. Worker count comes from the
// ENAS_WORKERS environment variable (default: hardware concurrency).
int worker_count();
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

void write_trace_csv(const std::vector<IterationTrace>& trace, const std::string& path);

IterationTrace summarize_iteration(int iteration, const std::vector<EvaluationRecord>& records,
                                   double best_j);

}  // namespace enas
