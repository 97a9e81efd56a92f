#include "doctest.h"

#include <cmath>
#include <set>

#include "seqstat/error.hpp"
#include "seqstat/moments.hpp"

using namespace seqstat;

namespace {

const auto kSpec = SequenceSpec::log_power(1.0, 2.0);

// Direct double sum over n <= N and a generous k range.
double brute_S(const SequenceSpec& spec, std::size_t N, const TestFunction& f, double s) {
    double total = 0.0;
    double kmax = std::ceil(eval_omega(spec, static_cast<double>(N)) + 2.0 + f.support().width());
    for (std::size_t n = 1; n <= N; ++n) {
        double w = eval_omega(spec, static_cast<double>(n));
        for (double k = -kmax - 2.0; k <= kmax + 2.0; k += 1.0) {
            total += f(N * (w + k + s));
        }
    }
    return total;
}

// Bell numbers by the triangle recurrence, and the count of partitions with
// no singleton block via inclusion-exclusion over singletons.
std::vector<long> bell_numbers(int n) {
    std::vector<std::vector<long>> t(n + 1);
    t[0] = {1};
    for (int i = 1; i <= n; ++i) {
        t[i].push_back(t[i - 1].back());
        for (long v : t[i - 1]) {
            t[i].push_back(t[i].back() + v);
        }
    }
    std::vector<long> b;
    for (int i = 0; i <= n; ++i) {
        b.push_back(t[i][0]);
    }
    return b;
}

long binom(int n, int k) {
    long r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
    }
    return r;
}

}

TEST_CASE("count_statistic") {
    auto box = TestFunction::smoothed_box(-0.5, 0.5, 1e-3);
    CHECK(count_statistic(kSpec, 1, box, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    // N = 1 and a support that misses 0 modulo 1.
    auto narrow = TestFunction::smoothed_box(0.2, 0.3, 0.01);
    CHECK(count_statistic(kSpec, 1, narrow, 0.0) == 0.0);
    auto b = TestFunction::bump(0, 1, 1);
    for (double s : {0.0, 0.013, 0.37, 0.5, 0.999}) {
        CHECK(count_statistic(kSpec, 100, b, s) == doctest::Approx(brute_S(kSpec, 100, b, s)).epsilon(1e-13));
    }
    auto wide = TestFunction::bump(0.3, 2.5, 1.0);
    for (double s : {0.1, 0.77}) {
        CHECK(count_statistic(kSpec, 1, wide, s) == doctest::Approx(brute_S(kSpec, 1, wide, s)).epsilon(1e-13));
        CHECK(count_statistic(kSpec, 3, wide, s) == doctest::Approx(brute_S(kSpec, 3, wide, s)).epsilon(1e-13));
    }
    CHECK(count_statistic(kSpec, 50, b, 0.2) == doctest::Approx(count_statistic(kSpec, 50, b, 1.2)).epsilon(1e-13));
}

TEST_CASE("first moment is the integral of f") {
    for (const auto& f : {TestFunction::bump(0, 1, 1), TestFunction::smoothed_box(-0.5, 0.5, 0.1)}) {
        for (std::size_t N : {1u, 7u, 200u}) {
            CHECK(std::abs(moment_m(kSpec, N, f, 1) - expectation_power(f, 1)) < 1e-10);
        }
    }
}

TEST_CASE("moment of a tiny-support f is its diagonal") {
    // Generic points: the lifted supports never overlap.
    auto tiny = TestFunction::bump(0, 1e-3, 1.0);
    for (int m = 2; m <= 3; ++m) {
        double d = expectation_power(tiny, m);
        CHECK(completed_sum(kSpec, 30, tiny, m) == doctest::Approx(d).epsilon(1e-10));
        CHECK(moment_m(kSpec, 30, tiny, m) == doctest::Approx(d).epsilon(1e-8));
    }
}

TEST_CASE("completed_sum at N = 1") {
    auto box = TestFunction::smoothed_box(-0.4, 0.4, 0.01);
    CHECK(completed_sum(kSpec, 1, box, 2) == doctest::Approx(expectation_power(box, 2)).epsilon(1e-12));
    // A mollified box of width exactly one tiles the line, so the k = +-1
    // overlaps restore the full mass.
    auto unit = TestFunction::smoothed_box(-0.5, 0.5, 0.01);
    CHECK(completed_sum(kSpec, 1, unit, 2) == doctest::Approx(1.0).epsilon(1e-12));
    // A wider f picks up neighbouring lifts too.
    auto b = TestFunction::bump(0, 1, 1);
    double lifted = construct_F(b, {0.0}) + construct_F(b, {1.0}) + construct_F(b, {-1.0});
    CHECK(completed_sum(kSpec, 1, b, 2) == doctest::Approx(lifted).epsilon(1e-12));
}

TEST_CASE("moment identity") {
    auto b = TestFunction::bump(0, 1, 1);
    auto box = TestFunction::smoothed_box(-0.5, 0.5, 0.1);
    auto off = TestFunction::bump(0.3, 0.8, 1.5);
    for (const auto& f : {b, box, off}) {
        for (std::size_t N : {17u, 60u}) {
            for (int m = 2; m <= 3; ++m) {
                CHECK(std::abs(moment_m(kSpec, N, f, m) - completed_sum(kSpec, N, f, m)) < 1e-8);
            }
        }
    }
    // Mixed moments.
    std::vector<TestFunction> fs{b, box, off};
    CHECK(std::abs(mixed_moment(kSpec, 40, fs) - completed_sum(kSpec, 40, fs)) < 1e-8);
    // m = 4 at small N.
    CHECK(std::abs(moment_m(kSpec, 12, b, 4) - completed_sum(kSpec, 12, b, 4)) < 1e-8);
}

TEST_CASE("moment_m limits") {
    auto b = TestFunction::bump(0, 1, 1);
    CHECK_THROWS_AS(moment_m(kSpec, 10, b, 5), DomainError);
    CHECK_THROWS_AS(moment_m(kSpec, 20000, b, 2), BudgetError);
}

TEST_CASE("enumerate_partitions") {
    auto all2 = enumerate_partitions(2, false);
    REQUIRE(all2.size() == 2);
    CHECK(all2[0].blocks == std::vector<std::vector<int>>{{1, 2}});
    CHECK(all2[1].blocks == std::vector<std::vector<int>>{{1}, {2}});
    auto ni2 = enumerate_partitions(2, true);
    REQUIRE(ni2.size() == 1);
    CHECK(ni2[0].blocks == std::vector<std::vector<int>>{{1, 2}});
    auto ni3 = enumerate_partitions(3, true);
    REQUIRE(ni3.size() == 1);
    CHECK(ni3[0].blocks == std::vector<std::vector<int>>{{1, 2, 3}});

    auto bell = bell_numbers(8);
    for (int m = 1; m <= 8; ++m) {
        auto all = enumerate_partitions(m, false);
        CHECK(static_cast<long>(all.size()) == bell[m]);
        long noniso = 0;
        for (int k = 0; k <= m; ++k) {
            noniso += ((k % 2) ? -1 : 1) * binom(m, k) * bell[m - k];
        }
        CHECK(static_cast<long>(enumerate_partitions(m, true).size()) == noniso);
        std::set<std::vector<std::vector<int>>> uniq;
        for (const auto& p : all) {
            std::vector<int> seen;
            for (std::size_t i = 0; i < p.blocks.size(); ++i) {
                CHECK(!p.blocks[i].empty());
                if (i > 0) {
                    CHECK(p.blocks[i].front() > p.blocks[i - 1].front());
                }
                seen.insert(seen.end(), p.blocks[i].begin(), p.blocks[i].end());
            }
            std::sort(seen.begin(), seen.end());
            CHECK(seen.size() == static_cast<std::size_t>(m));
            for (int i = 0; i < m; ++i) {
                CHECK(seen[i] == i + 1);
            }
            uniq.insert(p.blocks);
        }
        CHECK(uniq.size() == all.size());
    }
}

TEST_CASE("partition_target") {
    auto b = TestFunction::bump(0, 1, 1);
    double e1 = expectation_power(b, 1), e2 = expectation_power(b, 2), e4 = expectation_power(b, 4);
    CHECK(partition_target(b, 2, true) == doctest::Approx(e2).epsilon(1e-14));
    CHECK(partition_target(b, 2, false) == doctest::Approx(e1 * e1 + e2).epsilon(1e-14));
    CHECK(std::abs(partition_target(b, 4, true) - (e4 + 3 * e2 * e2)) < 1e-12);
}
