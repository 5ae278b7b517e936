#include "duosim/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace duosim {
namespace {

Trace run_isolated(const RunConfig& cfg) {
    try {
        return execute(cfg);
    } catch (const DefectionDetected& e) {
        Trace t;
        t.config = cfg;
        t.records = e.records();
        summarise(t);
        t.summary.error = e.what();
        return t;
    } catch (const std::exception& e) {
        Trace t;
        t.config = cfg;
        t.summary.error = e.what();
        return t;
    }
}

}  // namespace

std::vector<Trace> sweep(const std::vector<RunConfig>& configs, unsigned threads) {
    std::vector<Trace> out(configs.size());
    if (configs.empty()) return out;

    unsigned n = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
    n = std::min<unsigned>(n, static_cast<unsigned>(configs.size()));

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < configs.size(); i = next++) out[i] = run_isolated(configs[i]);
    };
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < n; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return out;
}

}  // namespace duosim
