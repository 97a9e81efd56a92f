#ifndef SEQSTAT_TESTSTAT_HPP
#define SEQSTAT_TESTSTAT_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "seqstat/sequences.hpp"
#include "seqstat/testfn.hpp"

namespace seqstat {

struct OrderedSample {
    std::size_t N = 0;
    std::vector<double> values; // sorted, in [0,1)
    std::string source;

    // Raw circular gap after position i; the last one wraps through 1.
    // These sum to 1 up to rounding.
    double gap(std::size_t i) const;
    // N * gap(i) for all i.
    std::vector<double> scaled_gaps() const;
};

OrderedSample ordered_points(const SequenceSpec& spec, std::size_t N);
OrderedSample sample_from_values(std::vector<double> values, std::string source = "values");
// i.i.d. uniform diagnostic sample.
OrderedSample uniform_sample(std::size_t N, std::uint64_t seed);

// Fraction of scaled circular gaps strictly below each s.
std::vector<double> gap_cdf(const OrderedSample& sample, const std::vector<double>& s_grid);

// Kolmogorov-Smirnov distance between the scaled-gap law and 1 - e^{-s}.
double ks_exponential(const OrderedSample& sample);

// One-sample KS distance of the scaled gaps against an arbitrary CDF.
double ks_statistic(std::vector<double> data, double (*cdf)(double));

struct GapHistogram {
    std::vector<double> edges;        // bins+1 edges on [0, smax]
    std::vector<std::uint64_t> counts; // per bin
    std::uint64_t overflow = 0;        // gaps >= smax
    std::size_t N = 0;
    std::vector<double> density;      // count / (N width)
    double overflow_mass = 0.0;       // overflow / N
};

GapHistogram gap_histogram(const OrderedSample& sample, int bins, double smax);

// Empirical CDF of N * (circular distance to the i-th nearest neighbour).
std::vector<double> nearest_neighbor_cdf(const OrderedSample& sample, int i, const std::vector<double>& s_grid);
// N * distance to the i-th nearest neighbour, per point.
std::vector<double> nearest_neighbor_distances(const OrderedSample& sample, int i);
// Poisson limit: Gamma(i, rate 2) CDF.
double poisson_nn_cdf(int i, double s);

struct CorrelationEstimate {
    int m = 0;
    std::size_t N = 0;
    double value = 0.0;
    double reference = 0.0;
    std::string test_function;
    double relative_deviation() const { return reference != 0.0 ? value / reference - 1.0 : 0.0; }
};

// Number of first positions accumulated into one partial sum; partial sums
// are then added in chunk order.
inline constexpr std::size_t kCorrChunk = 4096;

// N * ||a - b||, ||.|| the distance to the nearest integer.
inline double scaled_circular_distance(double a, double b, double N) {
    double t = a - b;
    t = t < 0.0 ? -t : t;
    t = t > 0.5 ? 1.0 - t : t;
    return N * t;
}

// (1/N) sum over pairwise-distinct index tuples (n_1..n_m) of
// prod_k f_k(N ||x(n_k) - x(n_{k+1})||). `factors` holds the m-1 link
// functions; each needs support inside (-S,S) with S <= 10 and 2S < N.
CorrelationEstimate correlate_m(const OrderedSample& sample, const std::vector<TestFunction>& factors);
CorrelationEstimate correlate_m(const OrderedSample& sample, const TestFunction& f, int m);

// Full enumeration over [N]^m, same summation order as correlate_m.
// Intended for N <= 50.
double correlate_brute_force(const OrderedSample& sample, const std::vector<TestFunction>& factors);

// Poisson limit prod_k int f_k(|x|) dx (equals prod int f_k for even f_k).
double correlation_reference(const std::vector<TestFunction>& factors);

}

#endif
