#include "seqstat/teststat.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "seqstat/error.hpp"
#include "seqstat/parallel.hpp"
#include "seqstat/quadrature.hpp"

namespace seqstat {

double OrderedSample::gap(std::size_t i) const {
    if (i + 1 < N) {
        return values[i + 1] - values[i];
    }
    return values[0] + 1.0 - values[N - 1];
}

std::vector<double> OrderedSample::scaled_gaps() const {
    std::vector<double> g(N);
    const double n = static_cast<double>(N);
    for (std::size_t i = 0; i < N; ++i) {
        g[i] = n * gap(i);
    }
    return g;
}

OrderedSample ordered_points(const SequenceSpec& spec, std::size_t N) {
    spec.validate();
    if (N < 2) {
        throw DomainError("ordered_points: need N >= 2");
    }
    if (spec.precision == Precision::Double && N > kDoubleModeCap) {
        throw PrecisionError("ordered_points: N above " + std::to_string(kDoubleModeCap) +
                             " needs Compensated precision");
    }
    std::vector<double> v(N);
    parallel_for(N, 1 << 15, [&](std::size_t i) { v[i] = eval_frac(spec, i + 1); });
    return sample_from_values(std::move(v), spec.describe());
}

OrderedSample sample_from_values(std::vector<double> values, std::string source) {
    for (double& x : values) {
        if (!(x >= 0.0 && x < 1.0)) {
            x -= std::floor(x);
            if (x >= 1.0) {
                x = 0.0;
            }
        }
    }
    std::stable_sort(values.begin(), values.end());
    OrderedSample s;
    s.N = values.size();
    s.values = std::move(values);
    s.source = std::move(source);
    return s;
}

OrderedSample uniform_sample(std::size_t N, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<double> v(N);
    for (auto& x : v) {
        x = static_cast<double>(rng() >> 11) * 0x1p-53;
    }
    return sample_from_values(std::move(v), "uniform(seed=" + std::to_string(seed) + ")");
}

std::vector<double> gap_cdf(const OrderedSample& sample, const std::vector<double>& s_grid) {
    auto g = sample.scaled_gaps();
    std::sort(g.begin(), g.end());
    std::vector<double> out;
    out.reserve(s_grid.size());
    for (double s : s_grid) {
        auto it = std::lower_bound(g.begin(), g.end(), s);
        out.push_back(static_cast<double>(it - g.begin()) / static_cast<double>(g.size()));
    }
    return out;
}

double ks_statistic(std::vector<double> data, double (*cdf)(double)) {
    std::sort(data.begin(), data.end());
    const double n = static_cast<double>(data.size());
    double d = 0.0;
    for (std::size_t k = 0; k < data.size(); ++k) {
        double F = cdf(data[k]);
        d = std::max(d, std::max((k + 1) / n - F, F - k / n));
    }
    return d;
}

namespace {

double exp_cdf(double s) {
    return s <= 0.0 ? 0.0 : -std::expm1(-s);
}

}

double ks_exponential(const OrderedSample& sample) {
    if (sample.N < 100) {
        throw DomainError("ks_exponential: need N >= 100");
    }
    return ks_statistic(sample.scaled_gaps(), exp_cdf);
}

GapHistogram gap_histogram(const OrderedSample& sample, int bins, double smax) {
    if (bins < 1 || !(smax > 0.0)) {
        throw DomainError("gap_histogram: need bins >= 1 and smax > 0");
    }
    GapHistogram h;
    h.N = sample.N;
    h.edges.resize(bins + 1);
    for (int b = 0; b <= bins; ++b) {
        h.edges[b] = smax * b / bins;
    }
    h.counts.assign(bins, 0);
    for (double g : sample.scaled_gaps()) {
        if (g >= smax) {
            ++h.overflow;
            continue;
        }
        int b = static_cast<int>(g / smax * bins);
        b = std::clamp(b, 0, bins - 1);
        // Guard against the division landing one bin off at an edge.
        if (g < h.edges[b]) {
            --b;
        } else if (b + 1 < bins && g >= h.edges[b + 1]) {
            ++b;
        }
        ++h.counts[b];
    }
    const double n = static_cast<double>(sample.N);
    h.density.resize(bins);
    for (int b = 0; b < bins; ++b) {
        h.density[b] = h.counts[b] / (n * (h.edges[b + 1] - h.edges[b]));
    }
    h.overflow_mass = h.overflow / n;
    return h;
}

std::vector<double> nearest_neighbor_distances(const OrderedSample& sample, int i) {
    if (i < 1 || i > 3) {
        throw DomainError("nearest_neighbor: i must be in 1..3");
    }
    const std::size_t N = sample.N;
    if (N < static_cast<std::size_t>(i) + 1) {
        throw DomainError("nearest_neighbor: sample too small");
    }
    const double n = static_cast<double>(N);
    std::vector<double> out(N);
    for (std::size_t p = 0; p < N; ++p) {
        // Merge the forward and backward cumulative gap sequences.
        double fwd = sample.gap(p);
        double bwd = sample.gap((p + N - 1) % N);
        std::size_t fi = 1, bi = 1;
        double d = 0.0;
        for (int k = 0; k < i; ++k) {
            if (fwd <= bwd) {
                d = fwd;
                fwd += sample.gap((p + fi) % N);
                ++fi;
            } else {
                d = bwd;
                bwd += sample.gap((p + N - 1 - bi) % N);
                ++bi;
            }
        }
        out[p] = n * std::min(d, 1.0 - d);
    }
    return out;
}

std::vector<double> nearest_neighbor_cdf(const OrderedSample& sample, int i, const std::vector<double>& s_grid) {
    auto d = nearest_neighbor_distances(sample, i);
    std::sort(d.begin(), d.end());
    std::vector<double> out;
    for (double s : s_grid) {
        out.push_back(static_cast<double>(std::lower_bound(d.begin(), d.end(), s) - d.begin()) / d.size());
    }
    return out;
}

double poisson_nn_cdf(int i, double s) {
    if (s <= 0.0) {
        return 0.0;
    }
    double term = 1.0;
    double sum = 0.0;
    for (int k = 0; k < i; ++k) {
        sum += term;
        term *= 2.0 * s / (k + 1);
    }
    return 1.0 - std::exp(-2.0 * s) * sum;
}

namespace {

double support_radius(const std::vector<TestFunction>& factors) {
    double S = 0.0;
    for (const auto& f : factors) {
        auto sup = f.support();
        S = std::max({S, std::abs(sup.lo), std::abs(sup.hi)});
    }
    return S;
}

void check_correlation_args(const OrderedSample& sample, const std::vector<TestFunction>& factors) {
    const int m = static_cast<int>(factors.size()) + 1;
    if (m < 2 || m > 5) {
        throw DomainError("correlate_m: m must be in 2..5");
    }
    double S = support_radius(factors);
    if (S > 10.0) {
        throw DomainError("correlate_m: factor support must lie in (-10,10)");
    }
    if (2.0 * S >= static_cast<double>(sample.N)) {
        throw DomainError("correlate_m: window 2S/N reaches half the circle; increase N");
    }
}

// Neighbours of every point within scaled distance R, each list sorted by
// index. Compressed row storage.
struct Neighbours {
    std::vector<std::size_t> start;
    std::vector<std::uint32_t> idx;
};

Neighbours build_neighbours(const OrderedSample& s, double R) {
    const std::size_t N = s.N;
    const double n = static_cast<double>(N);
    const double lim = R * (1.0 + 1e-9);
    std::vector<std::vector<std::uint32_t>> per_chunk((N + kCorrChunk - 1) / kCorrChunk);
    std::vector<std::size_t> counts(N + 1, 0);
    parallel_chunks(N, kCorrChunk, [&](std::size_t c, std::size_t b, std::size_t e) {
        auto& out = per_chunk[c];
        std::vector<std::uint32_t> tmp;
        for (std::size_t i = b; i < e; ++i) {
            tmp.clear();
            // Forward scan, wrapping through 1.
            for (std::size_t k = 1; k < N; ++k) {
                std::size_t j = (i + k) % N;
                double fwd = s.values[j] - s.values[i] + (j < i ? 1.0 : 0.0);
                if (n * fwd > lim) {
                    break;
                }
                tmp.push_back(static_cast<std::uint32_t>(j));
            }
            for (std::size_t k = 1; k < N; ++k) {
                std::size_t j = (i + N - k) % N;
                double bwd = s.values[i] - s.values[j] + (j > i ? 1.0 : 0.0);
                if (n * bwd > lim) {
                    break;
                }
                tmp.push_back(static_cast<std::uint32_t>(j));
            }
            std::sort(tmp.begin(), tmp.end());
            tmp.erase(std::unique(tmp.begin(), tmp.end()), tmp.end());
            counts[i + 1] = tmp.size();
            out.insert(out.end(), tmp.begin(), tmp.end());
        }
    });
    Neighbours nb;
    nb.start.resize(N + 1, 0);
    for (std::size_t i = 0; i < N; ++i) {
        nb.start[i + 1] = nb.start[i] + counts[i + 1];
    }
    nb.idx.reserve(nb.start[N]);
    for (auto& v : per_chunk) {
        nb.idx.insert(nb.idx.end(), v.begin(), v.end());
    }
    return nb;
}

struct ChainWalker {
    const OrderedSample& s;
    const std::vector<TestFunction>& f;
    const Neighbours& nb;
    double n;
    int links;
    std::uint32_t used[8];

    // Adds, in lexicographic index order, every completed chain product.
    void walk(int k, std::uint32_t cur, double p, double& acc) {
        if (k >= 6) {
            return;
        }
        for (std::size_t q = nb.start[cur]; q < nb.start[cur + 1]; ++q) {
            std::uint32_t j = nb.idx[q];
            bool seen = false;
            for (int t = 0; t <= k; ++t) {
                seen |= used[t] == j;
            }
            if (seen) {
                continue;
            }
            double v = f[k](scaled_circular_distance(s.values[cur], s.values[j], n));
            if (v == 0.0) {
                continue;
            }
            double pv = p * v;
            if (k + 1 == links) {
                acc += pv;
            } else {
                used[k + 1] = j;
                walk(k + 1, j, pv, acc);
            }
        }
    }
};

double reduce_chunks(const std::vector<double>& chunk_sums) {
    double total = 0.0;
    for (double c : chunk_sums) {
        total += c;
    }
    return total;
}

}

CorrelationEstimate correlate_m(const OrderedSample& sample, const std::vector<TestFunction>& factors) {
    check_correlation_args(sample, factors);
    const std::size_t N = sample.N;
    const double R = support_radius(factors);
    auto nb = build_neighbours(sample, R);

    std::vector<double> chunk_sums((N + kCorrChunk - 1) / kCorrChunk, 0.0);
    parallel_chunks(N, kCorrChunk, [&](std::size_t c, std::size_t b, std::size_t e) {
        ChainWalker w{sample, factors, nb, static_cast<double>(N), static_cast<int>(factors.size()), {}};
        double chunk = 0.0;
        for (std::size_t i = b; i < e; ++i) {
            double acc = 0.0;
            // The first factor is applied with product 1, matching the
            // brute-force product order f_1 * f_2 * ...
            w.used[0] = static_cast<std::uint32_t>(i);
            w.walk(0, static_cast<std::uint32_t>(i), 1.0, acc);
            chunk += acc;
        }
        chunk_sums[c] = chunk;
    });

    CorrelationEstimate est;
    est.m = static_cast<int>(factors.size()) + 1;
    est.N = N;
    est.value = reduce_chunks(chunk_sums) / static_cast<double>(N);
    est.reference = correlation_reference(factors);
    for (std::size_t k = 0; k < factors.size(); ++k) {
        est.test_function += (k ? "*" : "") + factors[k].describe();
    }
    return est;
}

CorrelationEstimate correlate_m(const OrderedSample& sample, const TestFunction& f, int m) {
    if (m < 2 || m > 5) {
        throw DomainError("correlate_m: m must be in 2..5");
    }
    return correlate_m(sample, std::vector<TestFunction>(static_cast<std::size_t>(m - 1), f));
}

double correlate_brute_force(const OrderedSample& sample, const std::vector<TestFunction>& factors) {
    check_correlation_args(sample, factors);
    const std::size_t N = sample.N;
    const int links = static_cast<int>(factors.size());
    const double n = static_cast<double>(N);
    std::vector<double> chunk_sums((N + kCorrChunk - 1) / kCorrChunk, 0.0);
    std::vector<std::size_t> t(links + 1);
    for (std::size_t i = 0; i < N; ++i) {
        double acc = 0.0;
        t[0] = i;
        // Odometer over (n_2..n_m) in lexicographic order.
        std::fill(t.begin() + 1, t.end(), 0);
        while (true) {
            bool distinct = true;
            for (int a = 0; a <= links && distinct; ++a) {
                for (int b = a + 1; b <= links; ++b) {
                    if (t[a] == t[b]) {
                        distinct = false;
                        break;
                    }
                }
            }
            if (distinct) {
                double p = 1.0;
                bool zero = false;
                for (int k = 0; k < links; ++k) {
                    double v = factors[k](scaled_circular_distance(sample.values[t[k]], sample.values[t[k + 1]], n));
                    if (v == 0.0) {
                        zero = true;
                        break;
                    }
                    p *= v;
                }
                if (!zero) {
                    acc += p;
                }
            }
            int pos = links;
            while (pos >= 1 && ++t[pos] == N) {
                t[pos] = 0;
                --pos;
            }
            if (pos < 1) {
                break;
            }
        }
        chunk_sums[i / kCorrChunk] += acc;
    }
    return reduce_chunks(chunk_sums) / n;
}

double correlation_reference(const std::vector<TestFunction>& factors) {
    double ref = 1.0;
    for (const auto& f : factors) {
        auto sup = f.support();
        double total = 0.0;
        // The engine only evaluates f at nonnegative arguments, so the
        // limit is int f(|x|) dx = 2 int_0^inf f.
        if (sup.hi > 0.0) {
            std::vector<double> pts{std::max(0.0, sup.lo)};
            for (double b : f.breakpoints()) {
                if (b > pts.front()) {
                    pts.push_back(b);
                }
            }
            for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
                total += adaptive_simpson(f, pts[i], pts[i + 1], 1e-13).value;
            }
        }
        ref *= 2.0 * total;
    }
    return ref;
}

}
