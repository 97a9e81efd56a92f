#ifndef SEQSTAT_PARALLEL_HPP
#define SEQSTAT_PARALLEL_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace seqstat {

// Worker count for parallel loops. 0 means hardware concurrency.
void set_num_threads(int n);
int num_threads();

// Runs body(chunk_index, begin, end) over [0, n) split in chunks of `grain`.
// Chunk boundaries depend only on n and grain, never on the thread count,
// so callers that reduce per-chunk results in chunk order are reproducible.
template <class Body>
void parallel_chunks(std::size_t n, std::size_t grain, Body&& body) {
    if (n == 0) {
        return;
    }
    grain = std::max<std::size_t>(grain, 1);
    const std::size_t nchunks = (n + grain - 1) / grain;
    const std::size_t nthreads = std::min<std::size_t>(static_cast<std::size_t>(num_threads()), nchunks);

    auto run = [&](std::size_t c) {
        const std::size_t b = c * grain;
        body(c, b, std::min(n, b + grain));
    };

    if (nthreads <= 1) {
        for (std::size_t c = 0; c < nchunks; ++c) {
            run(c);
        }
        return;
    }

    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(nthreads);
    pool.reserve(nthreads);
    for (std::size_t t = 0; t < nthreads; ++t) {
        pool.emplace_back([&, t]() {
            try {
                for (std::size_t c = t; c < nchunks; c += nthreads) {
                    run(c);
                }
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) {
        th.join();
    }
    for (auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

template <class Body>
void parallel_for(std::size_t n, std::size_t grain, Body&& body) {
    parallel_chunks(n, grain, [&](std::size_t, std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            body(i);
        }
    });
}

// Kahan-Babuska-Neumaier running sum.
template <class T>
struct NeumaierSum {
    T sum{};
    T comp{};

    void add(T x) {
        T t = sum + x;
        if (std::abs(sum) >= std::abs(x)) {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }

    T value() const { return sum + comp; }
};

}

#endif
