#include "seqstat/moments.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "seqstat/error.hpp"
#include "seqstat/parallel.hpp"
#include "seqstat/quadrature.hpp"

namespace seqstat {

namespace {

std::vector<double> fracs_of(const SequenceSpec& spec, std::size_t N) {
    spec.validate();
    if (N < 1) {
        throw DomainError("moments: need N >= 1");
    }
    std::vector<double> x(N);
    for (std::size_t n = 0; n < N; ++n) {
        x[n] = eval_frac(spec, n + 1);
    }
    return x;
}

// All values base + j with j integer, for every base, that fall in [lo, hi].
std::vector<double> lifts(const std::vector<double>& base, double lo, double hi) {
    std::vector<double> out;
    for (double b : base) {
        for (double j = std::ceil(lo - b); b + j <= hi; j += 1.0) {
            out.push_back(b + j);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}

CountStatistic::CountStatistic(const SequenceSpec& spec, std::size_t N, const TestFunction& f)
    : N_(N), f_(f), x_(fracs_of(spec, N)) {
    auto sup = f.support();
    const double n = static_cast<double>(N);
    std::vector<double> neg(x_.size());
    for (std::size_t i = 0; i < x_.size(); ++i) {
        neg[i] = -x_[i];
    }
    // f(N(s - l)) != 0 needs l in [s - hi/N, s - lo/N]; s is reduced to [0,1).
    lifted_ = lifts(neg, -sup.hi / n - 1.0, 1.0 - sup.lo / n + 1.0);
}

double CountStatistic::operator()(double s) const {
    s -= std::floor(s);
    auto sup = f_.support();
    const double n = static_cast<double>(N_);
    auto b = std::lower_bound(lifted_.begin(), lifted_.end(), s - sup.hi / n - 1e-15);
    auto e = std::upper_bound(lifted_.begin(), lifted_.end(), s - sup.lo / n + 1e-15);
    double total = 0.0;
    for (auto it = b; it != e; ++it) {
        total += f_(n * (s - *it));
    }
    return total;
}

std::vector<double> CountStatistic::breakpoints() const {
    const double n = static_cast<double>(N_);
    std::vector<double> out;
    for (double l : lifted_) {
        for (double bp : f_.breakpoints()) {
            double s = l + bp / n;
            if (s > 0.0 && s < 1.0) {
                out.push_back(s);
            }
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

double count_statistic(const SequenceSpec& spec, std::size_t N, const TestFunction& f, double s) {
    return CountStatistic(spec, N, f)(s);
}

double mixed_moment(const SequenceSpec& spec, std::size_t N, const std::vector<TestFunction>& fs, double abs_tol) {
    if (fs.empty()) {
        throw DomainError("mixed_moment: need at least one function");
    }
    std::vector<CountStatistic> S;
    std::vector<double> breaks;
    for (const auto& f : fs) {
        S.emplace_back(spec, N, f);
        auto b = S.back().breakpoints();
        breaks.insert(breaks.end(), b.begin(), b.end());
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

    // Integrate piece by piece in parallel; pieces are summed in order.
    std::vector<double> pts{0.0};
    pts.insert(pts.end(), breaks.begin(), breaks.end());
    pts.push_back(1.0);
    const std::size_t pieces = pts.size() - 1;
    std::vector<double> vals(pieces, 0.0);
    const double piece_tol = abs_tol / static_cast<double>(pieces);
    parallel_for(pieces, 16, [&](std::size_t i) {
        auto integrand = [&](double s) {
            double p = 1.0;
            for (const auto& Si : S) {
                p *= Si(s);
                if (p == 0.0) {
                    break;
                }
            }
            return p;
        };
        vals[i] = gauss_kronrod(integrand, pts[i], pts[i + 1], piece_tol, 2000).value;
    });
    NeumaierSum<double> sum;
    for (double v : vals) {
        sum.add(v);
    }
    return sum.value();
}

double moment_m(const SequenceSpec& spec, std::size_t N, const TestFunction& f, int m) {
    if (m < 1 || m > 4) {
        throw DomainError("moment_m: m must be in 1..4");
    }
    if (N > 10000) {
        throw BudgetError("moment_m: N above 1e4 is outside the supported budget");
    }
    return mixed_moment(spec, N, std::vector<TestFunction>(static_cast<std::size_t>(m), f));
}

double completed_sum(const SequenceSpec& spec, std::size_t N, const std::vector<TestFunction>& fs) {
    const std::size_t m = fs.size();
    if (m < 2) {
        throw DomainError("completed_sum: need m >= 2");
    }
    auto x = fracs_of(spec, N);
    const double n = static_cast<double>(N);
    auto sm = fs[m - 1].support();
    // Z_j = N(x_{n_j} + k_j - x_{n_m}) must lie in supp f_j - supp f_m.
    std::vector<Interval> zr(m - 1);
    double span = 0.0;
    for (std::size_t j = 0; j + 1 < m; ++j) {
        auto sj = fs[j].support();
        zr[j] = {sj.lo - sm.hi, sj.hi - sm.lo};
        span = std::max({span, std::abs(zr[j].lo), std::abs(zr[j].hi)});
    }
    auto L = lifts(x, -span / n - 1.0, 1.0 + span / n + 1.0);

    std::vector<double> per_anchor(N, 0.0);
    parallel_for(N, 1, [&](std::size_t a) {
        const double xa = x[a];
        std::vector<std::vector<double>> cand(m - 1);
        for (std::size_t j = 0; j + 1 < m; ++j) {
            auto b = std::lower_bound(L.begin(), L.end(), xa + zr[j].lo / n - 1e-15);
            auto e = std::upper_bound(L.begin(), L.end(), xa + zr[j].hi / n + 1e-15);
            for (auto it = b; it != e; ++it) {
                cand[j].push_back(n * (*it - xa));
            }
        }
        std::vector<double> Z(m - 1), z(m - 1);
        double acc = 0.0;
        std::function<void(std::size_t)> rec = [&](std::size_t j) {
            if (j + 1 == m) {
                for (std::size_t i = 0; i + 1 < m; ++i) {
                    z[i] = Z[i] - (i + 2 < m ? Z[i + 1] : 0.0);
                }
                acc += construct_F(fs, z);
                return;
            }
            for (double c : cand[j]) {
                // Pairwise support compatibility prunes empty overlaps early.
                bool ok = true;
                auto sj = fs[j].support();
                for (std::size_t i = 0; i < j && ok; ++i) {
                    auto si = fs[i].support();
                    double d = Z[i] - c;
                    ok = d > si.lo - sj.hi && d < si.hi - sj.lo;
                }
                if (!ok) {
                    continue;
                }
                Z[j] = c;
                rec(j + 1);
            }
        };
        rec(0);
        per_anchor[a] = acc;
    });
    NeumaierSum<double> sum;
    for (double v : per_anchor) {
        sum.add(v);
    }
    return sum.value() / n;
}

double completed_sum(const SequenceSpec& spec, std::size_t N, const TestFunction& f, int m) {
    if (m < 2 || m > 4) {
        throw DomainError("completed_sum: m must be in 2..4");
    }
    if (N > 10000) {
        throw BudgetError("completed_sum: N above 1e4 is outside the supported budget");
    }
    return completed_sum(spec, N, std::vector<TestFunction>(static_cast<std::size_t>(m), f));
}

bool SetPartition::is_non_isolating() const {
    for (const auto& b : blocks) {
        if (b.size() < 2) {
            return false;
        }
    }
    return true;
}

std::vector<SetPartition> enumerate_partitions(int m, bool only_non_isolating) {
    if (m < 1 || m > 8) {
        throw DomainError("enumerate_partitions: m must be in 1..8");
    }
    // Restricted growth strings in lexicographic order.
    std::vector<SetPartition> out;
    std::vector<int> a(m, 0), mx(m, 0);
    while (true) {
        SetPartition p;
        int nb = *std::max_element(a.begin(), a.end()) + 1;
        p.blocks.resize(nb);
        for (int i = 0; i < m; ++i) {
            p.blocks[a[i]].push_back(i + 1);
        }
        if (!only_non_isolating || p.is_non_isolating()) {
            out.push_back(std::move(p));
        }
        int i = m - 1;
        while (i > 0 && a[i] == mx[i - 1] + 1) {
            --i;
        }
        if (i == 0) {
            break;
        }
        ++a[i];
        mx[i] = std::max(mx[i - 1], a[i]);
        for (int j = i + 1; j < m; ++j) {
            a[j] = 0;
            mx[j] = mx[i];
        }
    }
    return out;
}

double partition_target(const TestFunction& f, int m, bool only_non_isolating) {
    std::vector<double> E(static_cast<std::size_t>(m) + 1, 0.0);
    for (int j = 1; j <= m; ++j) {
        E[j] = expectation_power(f, j);
    }
    double total = 0.0;
    for (const auto& p : enumerate_partitions(m, only_non_isolating)) {
        double prod = 1.0;
        for (const auto& b : p.blocks) {
            prod *= E[b.size()];
        }
        total += prod;
    }
    return total;
}

MomentReport moment_report(const SequenceSpec& spec, std::size_t N, const TestFunction& f, int m) {
    MomentReport r;
    r.m = m;
    r.N = N;
    r.moment_value = moment_m(spec, N, f, m);
    r.completed_sum_value = m >= 2 ? completed_sum(spec, N, f, m) : r.moment_value;
    r.poisson_target = partition_target(f, m, false);
    r.nonisolating_target = partition_target(f, m, true);
    return r;
}

}
