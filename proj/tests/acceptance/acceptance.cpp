// Runs every acceptance criterion and prints one PASS/FAIL line each.
//
//   acceptance [--expect-red=ID,ID,...] [--only=PREFIX,...]
//
// Exit status is 0 when the set of failing criteria equals the expected-red
// set, 1 otherwise.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "seqstat/expsum.hpp"
#include "seqstat/moments.hpp"
#include "seqstat/parallel.hpp"
#include "seqstat/stationary.hpp"
#include "seqstat/teststat.hpp"
#include "seqstat/vandermonde.hpp"
#include "seqstat/windows.hpp"

using namespace seqstat;

namespace {

using Clock = std::chrono::steady_clock;
using big = boost::multiprecision::cpp_bin_float_50;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::set<std::string> g_failed;
std::vector<std::string> g_only;

bool selected(const std::string& id) {
    if (g_only.empty()) {
        return true;
    }
    for (const auto& p : g_only) {
        if (id.rfind(p, 0) == 0) {
            return true;
        }
    }
    return false;
}

void report(const std::string& id, bool ok, const std::string& what, const std::string& detail) {
    std::printf("%s %-4s %s [%s]\n", ok ? "PASS" : "FAIL", id.c_str(), what.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) {
        g_failed.insert(id);
    }
}

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::set<std::string> split(const std::string& s) {
    std::set<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) {
            out.insert(item);
        }
    }
    return out;
}

double gk(const std::function<double(double)>& g, double a, double b) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(g, a, b, 12, 1e-14);
}

// int f^j over the support, independent of the library quadrature.
double oracle_power(const TestFunction& f, int j) {
    auto br = f.breakpoints();
    std::sort(br.begin(), br.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < br.size(); ++i) {
        total += gk([&](double x) { return std::pow(f(x), j); }, br[i], br[i + 1]);
    }
    return total;
}

// --- 1. gap histograms -----------------------------------------------------

void criterion1() {
    const std::size_t N = 100000;
    auto t0 = Clock::now();
    double ks[4] = {0, 0, 0, 0};
    bool shaped = true;
    for (int A = 1; A <= 3; ++A) {
        auto s = ordered_points(SequenceSpec::log_power(1.0, A), N);
        GapHistogram h = gap_histogram(s, 50, 5.0);
        std::uint64_t total = h.overflow;
        for (auto c : h.counts) {
            total += c;
        }
        shaped = shaped && h.counts.size() == 50 && total == N;
        ks[A] = ks_exponential(s);
    }
    double secs = seconds_since(t0);
    report("1a", ks[2] < 0.05, "KS(A=2) < 0.05", fmt("%.4g", ks[2]));
    report("1b", ks[3] < 0.05, "KS(A=3) < 0.05", fmt("%.4g", ks[3]));
    report("1c", ks[1] > 0.1, "KS(A=1) > 0.1", fmt("%.4g", ks[1]));
    report("1d", shaped && secs < 10.0, "50 bins on [0,5], runtime < 10 s", fmt("%.2f s", secs));
}

// --- 2. pair correlation ---------------------------------------------------

void criterion2() {
    auto f = TestFunction::bump(0.0, 1.0, 1.0);
    double ref = 0.0;
    std::vector<double> dev;
    double secs_1e6 = 0.0;
    for (std::size_t N : {10000UL, 100000UL, 1000000UL}) {
        auto t0 = Clock::now();
        auto s = ordered_points(SequenceSpec::log_power(1.0, 2.0), N);
        CorrelationEstimate e = correlate_m(s, f, 2);
        if (N == 1000000) {
            secs_1e6 = seconds_since(t0);
        }
        ref = e.reference;
        dev.push_back(std::abs(e.relative_deviation()));
        std::printf("     R2(N=%zu) = %.6f, reference %.6f, |dev| %.4f\n", N, e.value, e.reference, dev.back());
    }
    double oracle_ref = oracle_power(f, 1);
    report("2r", std::abs(ref - oracle_ref) < 1e-10, "reference equals int f", fmt("%.12g", oracle_ref));
    report("2a", dev[1] < 0.10, "|dev| < 10% at N=1e5", fmt("%.4f", dev[1]));
    report("2b", dev[2] < 0.05, "|dev| < 5% at N=1e6", fmt("%.4f", dev[2]));
    std::string trend = fmt("%.4f", dev[0]) + " " + fmt("%.4f", dev[1]) + " " + fmt("%.4f", dev[2]);
    report("2c", dev[0] > dev[1] && dev[1] > dev[2], "|dev| decreasing over N=1e4,1e5,1e6", trend);
    report("2d", secs_1e6 < 60.0, "runtime < 60 s at N=1e6", fmt("%.2f s", secs_1e6));
}

// --- 3. triple correlation -------------------------------------------------

void criterion3() {
    auto f = TestFunction::bump(0.0, 1.0, 1.0);
    auto s = ordered_points(SequenceSpec::log_power(1.0, 2.0), 100000);
    CorrelationEstimate e = correlate_m(s, f, 3);
    double I = oracle_power(f, 1);
    double dev = std::abs(e.value / (I * I) - 1.0);
    report("3", dev < 0.15, "R3 at N=1e5 within 15% of (int f)^2", fmt("%.4f", dev) + ", R3 " + fmt("%.6f", e.value));
}

// --- 4. moment identity ----------------------------------------------------

void criterion4() {
    auto t0 = Clock::now();
    std::vector<TestFunction> fs = {TestFunction::bump(0.0, 1.0, 1.0), TestFunction::bump(0.3, 2.0, 0.5),
                                    TestFunction::smoothed_box(-1.0, 1.5, 0.4)};
    auto spec = SequenceSpec::log_power(1.0, 2.0);
    double worst = 0.0;
    for (std::size_t N : {50UL, 100UL, 200UL}) {
        for (int m = 2; m <= 3; ++m) {
            for (const auto& f : fs) {
                worst = std::max(worst, std::abs(moment_m(spec, N, f, m) - completed_sum(spec, N, f, m)));
            }
        }
    }
    double secs = seconds_since(t0);
    report("4a", worst < 1e-8, "|moment - completed sum| < 1e-8 on 18 cases", fmt("max %.3g", worst));
    report("4b", secs < 30.0, "identity suite < 30 s", fmt("%.2f s", secs));
}

// --- 5. partition targets --------------------------------------------------

// Restricted growth strings enumerate set partitions of {1..m} once each.
void rgs_counts(int m, long& all, long& nonisolating) {
    all = nonisolating = 0;
    std::vector<int> a(m, 0);
    std::function<void(int, int)> rec = [&](int i, int blocks) {
        if (i == m) {
            ++all;
            std::vector<int> size(blocks, 0);
            for (int v : a) {
                ++size[v];
            }
            nonisolating += std::none_of(size.begin(), size.end(), [](int s) { return s == 1; }) ? 1 : 0;
            return;
        }
        for (int v = 0; v <= blocks; ++v) {
            a[i] = v;
            rec(i + 1, std::max(blocks, v + 1));
        }
    };
    rec(0, 0);
}

void criterion5() {
    const long bell[] = {1, 2, 5, 15, 52};
    const long noniso[] = {0, 1, 1, 4, 11};
    bool ok_all = true, ok_non = true;
    std::string detail;
    for (int m = 1; m <= 5; ++m) {
        long oa, on;
        rgs_counts(m, oa, on);
        long la = static_cast<long>(enumerate_partitions(m, false).size());
        long ln = static_cast<long>(enumerate_partitions(m, true).size());
        ok_all = ok_all && la == oa && oa == bell[m - 1];
        ok_non = ok_non && ln == on && (m == 1 || on == noniso[m - 1]);
        detail += (m > 1 ? " " : "") + std::to_string(la) + "/" + std::to_string(ln);
    }
    report("5a", ok_all, "partition counts are Bell numbers 1,2,5,15,52", detail);
    report("5b", ok_non, "non-isolating counts 1,1,4,11 for m=2..5", detail);
    double worst = 0.0;
    for (const auto& f : {TestFunction::bump(0.0, 1.0, 1.0), TestFunction::smoothed_box(-1.0, 1.5, 0.4)}) {
        double e2 = oracle_power(f, 2), e4 = oracle_power(f, 4);
        double want = e4 + 3.0 * e2 * e2;
        worst = std::max(worst, std::abs(partition_target(f, 4, true) - want) / want);
    }
    report("5c", worst < 1e-12, "m=4 target equals E(f^4) + 3 E(f^2)^2", fmt("rel %.3g", worst));
}

// --- 6. B-process fidelity -------------------------------------------------

NormReport expsum_norms(int q, int u, double logN) {
    double N = std::exp(logN);
    PhaseModel model(SequenceSpec::log_power(1.0, 2.0));
    ExpSumEngine eng(model, DyadicWindows::for_N(N), TestFunction::bump(0.0, 1.0, 1.0), N);
    return compare_variants(eng, q, u, uniform_grid(64), 2.0);
}

void criterion6() {
    NormReport a = expsum_norms(8, 10, 10.0);
    NormReport b = expsum_norms(10, 12, 12.0);
    report("6a", a.ratio_exact_b() < 0.05, "|Exact-B|/|Exact| < 0.05 at (8,10,e^10)", fmt("%.4g", a.ratio_exact_b()));
    report("6b", a.ratio_b_bb() < 0.05, "|B-BB|/|Exact| < 0.05 at (8,10,e^10)", fmt("%.4g", a.ratio_b_bb()));
    report("6c", b.ratio_exact_b() < a.ratio_exact_b(), "Exact-B ratio decreases at (10,12,e^12)",
           fmt("%.4g", b.ratio_exact_b()));
    report("6d", b.ratio_b_bb() < a.ratio_b_bb(), "B-BB ratio decreases at (10,12,e^12)", fmt("%.4g", b.ratio_b_bb()));
}

// --- 7. stationary phase ---------------------------------------------------

std::complex<double> gk_oscillatory(const std::function<double(double)>& w, const std::function<double(double)>& psi,
                                    double a, double b, double freq) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    int panels = static_cast<int>(std::ceil((b - a) * freq / 0.5)) + 1;
    double h = (b - a) / panels;
    NeumaierSum<double> re, im;
    for (int p = 0; p < panels; ++p) {
        double lo = a + p * h, hi = p + 1 == panels ? b : lo + h;
        re.add(GK::integrate([&](double x) { return w(x) * std::cos(kTwoPi * psi(x)); }, lo, hi, 0));
        im.add(GK::integrate([&](double x) { return w(x) * std::sin(kTwoPi * psi(x)); }, lo, hi, 0));
    }
    return {re.value(), im.value()};
}

void criterion7() {
    const double x0 = 0.3;
    auto f = TestFunction::bump(x0, 1.0, 1.0);
    WindowRecord w = window_from(f);
    std::vector<double> scaled;
    bool improves = true;
    std::string detail;
    for (double lambda : {1e2, 1e3, 1e4}) {
        PhaseRecord psi;
        psi.value = [=](double x) { return lambda * (x - x0) * (x - x0); };
        psi.derivs = [=](double x, int n) {
            std::vector<double> d(n + 1, 0.0);
            d[0] = lambda * (x - x0) * (x - x0);
            if (n >= 1) d[1] = 2.0 * lambda * (x - x0);
            if (n >= 2) d[2] = 2.0 * lambda;
            return d;
        };
        psi.Lambda = lambda;
        auto ref = gk_oscillatory(w.value, psi.value, x0 - 1.0, x0 + 1.0, 2.0 * lambda);
        double e0 = std::abs(stationary_phase(w, psi, 0) - ref) / std::abs(ref);
        double e1 = std::abs(stationary_phase(w, psi, 1) - ref) / std::abs(ref);
        improves = improves && e1 < e0;
        scaled.push_back(e0 * lambda);
        detail += fmt(" %.3g", e0) + fmt("/%.3g", e1);
    }
    double spread = *std::max_element(scaled.begin(), scaled.end()) / *std::min_element(scaled.begin(), scaled.end());
    report("7a", spread < 3.0, "order-0 error * Lambda varies < 3x over 1e2..1e4", fmt("spread %.3f", spread));
    report("7b", improves, "order 1 beats order 0 at each Lambda", detail.substr(1));
}

// --- 8. Khare-Tao sampling -------------------------------------------------

void criterion8() {
    bool positive = true, stable = true;
    std::string detail;
    for (const auto& box : kt_default_boxes()) {
        KTStats a = kt_sample(box, 10000, 1);
        KTStats b = kt_sample(box, 10000, 2);
        positive = positive && a.positive == 10000 && b.positive == 10000;
        stable = stable && std::abs(a.min_ratio / b.min_ratio - 1.0) <= 0.1 &&
                 std::abs(a.max_ratio / b.max_ratio - 1.0) <= 0.1;
        std::printf("     %s: [%.6g, %.6g] vs [%.6g, %.6g]\n", box.name.c_str(), a.min_ratio, a.max_ratio,
                    b.min_ratio, b.max_ratio);
        detail += box.name + " ";
    }
    report("8a", positive, "KT ratio positive on 1e4 samples per box, two seeds", detail + "ok");
    report("8b", stable, "per-box min/max stable within 10% across seeds", "see above");
    double worst = 0.0;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(0.2, 3.0);
    for (int t = 0; t < 50; ++t) {
        int M = 2 + t % 4;
        std::vector<double> u(M), n(M);
        for (int i = 0; i < M; ++i) {
            u[i] = U(rng);
            n[i] = i;
        }
        std::sort(u.begin(), u.end());
        worst = std::max(worst, std::abs(kt_ratio(u, n) - 1.0));
    }
    report("8c", worst < 1e-12, "n = n_min gives ratio 1", fmt("max |r-1| %.3g", worst));
}

// --- 9. derivative system --------------------------------------------------

// j-th derivative by Richardson-extrapolated central differences, carried
// in 50 digits: the components of the phase cancel to a few parts in 1e8.
double ridders(const std::function<big(big)>& F, double x, int j, big h) {
    auto cd = [&](big step) {
        big s = 0, binom = 1;
        for (int i = 0; i <= j; ++i) {
            big term = binom * F(big(x) + (big(j) / 2 - i) * step);
            s += (i % 2) ? big(-term) : term;
            binom = binom * (j - i) / (i + 1);
        }
        return big(s / pow(step, j));
    };
    big a = cd(h), b = cd(h / 2), c = cd(h / 4);
    big ab = (4 * b - a) / 3, bc = (4 * c - b) / 3;
    return static_cast<double>((16 * bc - ab) / 15);
}

void criterion9() {
    std::mt19937_64 rng(11);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        PhaseDerivativeSystem sys;
        int m = 1 + trial % 4;
        sys.A = trial % 2 ? 2.0 : 3.0;
        sys.s = 0.1 + 0.8 * ((rng() >> 11) * 0x1.0p-53);
        while (sys.m() < m) {
            long v = 30 + static_cast<long>(rng() % 300);
            if (std::find(sys.h.begin(), sys.h.end(), v) == sys.h.end()) {
                long r = static_cast<long>(rng() % 21) - 10;
                sys.h.push_back(v);
                sys.r.push_back(r == 0 ? 3 : r);
            }
        }
        auto D = d_vector(sys);
        auto Phi = [&](big t) {
            big acc = 0;
            for (int i = 0; i < m; ++i) {
                acc += big(sys.r[i]) * exp(pow(big(sys.h[i]) + t, big(1) / big(sys.A)));
            }
            return acc;
        };
        for (int j = 1; j <= m; ++j) {
            double fd = ridders(Phi, sys.s, j, big("0.01"));
            worst = std::max(worst, std::abs(D[j - 1] - fd) / std::abs(fd));
        }
    }
    report("9a", worst < 1e-5, "b M matches FD derivatives, m <= 4", fmt("max rel %.3g", worst));

    bool trend = true;
    std::string detail;
    for (int m = 2; m <= 4; ++m) {
        double prev = INFINITY;
        for (long H : {1000L, 10000L, 100000L}) {
            PhaseDerivativeSystem sys;
            sys.s = 0.3;
            for (int i = 0; i < m; ++i) {
                sys.h.push_back(H * (i + 1) + 3 * i);
                sys.r.push_back(i + 1);
            }
            double gap = std::abs(detM_leading(sys).ratio - 1.0);
            trend = trend && gap < prev;
            prev = gap;
            detail += fmt(" %.2g", gap);
        }
    }
    report("9b", trend, "|det M / leading - 1| decreases as min h grows", detail.substr(1));

    int holds = 0;
    const int samples = 1000;
    for (int k = 0; k < samples; ++k) {
        int q = 5 + static_cast<int>(rng() % 8);
        int m = 1 + static_cast<int>(rng() % 4);
        double qA = q * static_cast<double>(q);
        PhaseDerivativeSystem sys;
        sys.s = (rng() >> 11) * 0x1.0p-53;
        while (sys.m() < m) {
            long h = static_cast<long>(qA / 2) + static_cast<long>(rng() % static_cast<std::uint64_t>(1.5 * qA + 1));
            if (std::find(sys.h.begin(), sys.h.end(), h) == sys.h.end()) {
                long r = static_cast<long>(rng() % 101) - 50;
                sys.h.push_back(h);
                sys.r.push_back(r == 0 ? 1 : r);
            }
        }
        holds += d_norm_lower_bound(sys).holds ? 1 : 0;
    }
    report("9c", holds == samples, "|D| >= |b| / |M^-1| on 1e3 random systems",
           std::to_string(holds) + "/" + std::to_string(samples));
}

// --- 10. engine vs brute force ---------------------------------------------

void criterion10() {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> A(1.2, 3.5), w(0.3, 3.0), c(-0.5, 0.5);
    int equal = 0;
    const int cases = 200;
    for (int t = 0; t < cases; ++t) {
        std::size_t N = 8 + rng() % 43;
        int m = 2 + static_cast<int>(rng() % 2);
        auto s = ordered_points(SequenceSpec::log_power(1.0, A(rng)), N);
        std::vector<TestFunction> f;
        for (int k = 0; k < m - 1; ++k) {
            double wk = w(rng);
            f.push_back(rng() % 2 ? TestFunction::bump(c(rng), wk, 1.0)
                                  : TestFunction::smoothed_box(-wk, wk * 0.8, 0.2));
        }
        equal += correlate_m(s, f).value == correlate_brute_force(s, f) ? 1 : 0;
    }
    report("10", equal == cases, "correlate_m bitwise equals brute force, N <= 50, m <= 3",
           std::to_string(equal) + "/" + std::to_string(cases));
}

}

int main(int argc, char** argv) {
    std::set<std::string> expect_red;
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        if (a.rfind("--expect-red=", 0) == 0) {
            expect_red = split(a.substr(13));
        } else if (a.rfind("--only=", 0) == 0) {
            auto s = split(a.substr(7));
            g_only.assign(s.begin(), s.end());
        } else {
            std::fprintf(stderr, "usage: acceptance [--expect-red=ID,...] [--only=PREFIX,...]\n");
            return 2;
        }
    }
    const std::vector<std::pair<std::string, void (*)()>> all = {
        {"1", criterion1}, {"2", criterion2}, {"3", criterion3}, {"4", criterion4}, {"5", criterion5},
        {"6", criterion6}, {"7", criterion7}, {"8", criterion8}, {"9", criterion9}, {"10", criterion10}};
    for (const auto& [id, fn] : all) {
        if (selected(id)) {
            auto t0 = Clock::now();
            fn();
            std::printf("     (criterion %s: %.1f s)\n", id.c_str(), seconds_since(t0));
        }
    }
    std::set<std::string> expected;
    for (const auto& id : expect_red) {
        if (selected(id)) {
            expected.insert(id);
        }
    }
    std::printf("failed:");
    for (const auto& id : g_failed) {
        std::printf(" %s", id.c_str());
    }
    std::printf("\nexpected red:");
    for (const auto& id : expected) {
        std::printf(" %s", id.c_str());
    }
    std::printf("\n");
    return g_failed == expected ? 0 : 1;
}
