#include "enas/search_common.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace enas {

int worker_count() {
    if (const char* env = std::getenv("ENAS_WORKERS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    const int workers = worker_count();
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto run = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    const int spawn = static_cast<int>(std::min<std::size_t>(n, static_cast<std::size_t>(workers)));
    pool.reserve(static_cast<std::size_t>(spawn));
    for (int t = 1; t < spawn; ++t) pool.emplace_back(run);
    run();
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

IterationTrace summarize_iteration(int iteration, const std::vector<EvaluationRecord>& records,
                                   double best_j) {
    IterationTrace t;
    t.iteration = iteration;
    t.best_j = best_j;
    if (records.empty()) return t;
    for (const auto& r : records) {
        t.mean_j += r.criterion;
        t.mean_e += r.efficacy;
        t.mean_c += r.complexity;
        t.mean_cf += r.parts.features;
        t.mean_cs += r.parts.neurons;
        t.mean_cl += r.parts.layers;
        t.mean_p += r.penalty;
    }
    const double n = static_cast<double>(records.size());
    t.mean_j /= n;
    t.mean_e /= n;
    t.mean_c /= n;
    t.mean_cf /= n;
    t.mean_cs /= n;
    t.mean_cl /= n;
    t.mean_p /= n;
    return t;
}

void write_trace_csv(const std::vector<IterationTrace>& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write trace '" + path + "'");
    out << "iteration,mean_J,best_J,mean_E,mean_C,C_f,C_s,C_l,mean_P\n";
    char buf[256];
    for (const auto& t : trace) {
        std::snprintf(buf, sizeof buf, "%d,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g\n",
                      t.iteration, t.mean_j, t.best_j, t.mean_e, t.mean_c, t.mean_cf, t.mean_cs,
                      t.mean_cl, t.mean_p);
        out << buf;
    }
}

}  // namespace enas
