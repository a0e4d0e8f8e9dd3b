#include "sarsim/batch.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "sarsim/engine.hpp"

namespace sar {

BatchResult run_batch(const BatchSpec& spec) {
    std::vector<ScenarioConfig> tasks;
    for (const ControllerKind controller : spec.controllers) {
        for (const std::uint64_t seed : spec.seeds) {
            ScenarioConfig cfg = spec.base;
            cfg.controller = controller;
            cfg.seed = seed;
            tasks.push_back(std::move(cfg));
        }
    }

    BatchResult result;
    result.rows.resize(tasks.size());
    if (tasks.empty()) return result;

    unsigned jobs = spec.jobs > 0 ? static_cast<unsigned>(spec.jobs)
                                  : std::thread::hardware_concurrency();
    if (jobs == 0) jobs = 1;
    jobs = std::min<unsigned>(jobs, static_cast<unsigned>(tasks.size()));

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            try {
                result.rows[i] = summarize(run_scenario(tasks[i]));
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };

    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);

    result.aggregates = aggregate(result.rows, spec.base.steps);
    return result;
}

} // namespace sar
