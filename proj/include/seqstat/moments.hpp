#ifndef SEQSTAT_MOMENTS_HPP
#define SEQSTAT_MOMENTS_HPP

#include <cstddef>
#include <vector>

#include "seqstat/sequences.hpp"
#include "seqstat/testfn.hpp"

namespace seqstat {

// S_N(s) = sum_{n <= N} sum_{k in Z} f(N (omega(n) + k + s)), precomputed for
// repeated evaluation in s.
class CountStatistic {
public:
    CountStatistic(const SequenceSpec& spec, std::size_t N, const TestFunction& f);
    double operator()(double s) const;
    // Points in [0,1] where a lifted term enters or leaves (or changes
    // regime inside) the support.
    std::vector<double> breakpoints() const;
    const std::vector<double>& fracs() const { return x_; }

private:
    std::size_t N_;
    TestFunction f_;
    std::vector<double> x_;
    std::vector<double> lifted_; // sorted values -x_n - k
};

double count_statistic(const SequenceSpec& spec, std::size_t N, const TestFunction& f, double s);

// int_0^1 prod_i S_N(s, f_i) ds. With a single f this is M^(m) for m = fs.size().
double mixed_moment(const SequenceSpec& spec, std::size_t N, const std::vector<TestFunction>& fs,
                    double abs_tol = 1e-12);
double moment_m(const SequenceSpec& spec, std::size_t N, const TestFunction& f, int m);

// (1/N) sum_{n in [N]^m} sum_{k in Z^{m-1}} F(N(omega(n_1) - omega(n_2) + k_1), ...).
double completed_sum(const SequenceSpec& spec, std::size_t N, const std::vector<TestFunction>& fs);
double completed_sum(const SequenceSpec& spec, std::size_t N, const TestFunction& f, int m);

struct SetPartition {
    std::vector<std::vector<int>> blocks; // 1-based elements, blocks ordered by least element
    bool is_non_isolating() const;
};

std::vector<SetPartition> enumerate_partitions(int m, bool only_non_isolating);

double partition_target(const TestFunction& f, int m, bool only_non_isolating);

struct MomentReport {
    int m = 0;
    std::size_t N = 0;
    double moment_value = 0.0;
    double completed_sum_value = 0.0;
    double poisson_target = 0.0;     // all partitions
    double nonisolating_target = 0.0;
    double identity_residual() const { return moment_value - completed_sum_value; }
};

MomentReport moment_report(const SequenceSpec& spec, std::size_t N, const TestFunction& f, int m);

}

#endif
