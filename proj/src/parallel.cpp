#include "xeb/parallel.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>

namespace xeb {

namespace {

std::atomic<int> g_override{0};

int env_threads() {
    if (const char* env = std::getenv("XEB_THREADS")) {
        try {
            const int v = std::stoi(env);
            if (v > 0) return v;
        } catch (...) {
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace

int thread_count() {
    const int o = g_override.load(std::memory_order_relaxed);
    return o > 0 ? o : env_threads();
}

void set_threads(int threads) { g_override.store(threads > 0 ? threads : 0); }

double detail::neumaier(std::span<const double> partials) {
    double sum = 0.0, comp = 0.0;
    for (double v : partials) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }
    return sum + comp;
}

double deterministic_sum(std::span<const double> values) {
    return deterministic_sum(values.size(), [&](std::size_t i) { return values[i]; });
}

}  // namespace xeb
