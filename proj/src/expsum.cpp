#include "seqstat/expsum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "seqstat/error.hpp"
#include "seqstat/parallel.hpp"
#include "seqstat/stationary.hpp"

namespace seqstat {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// e(t) for t already reduced to a modest range.
inline cplx ephase(double t) {
    return {std::cos(kTwoPi * t), std::sin(kTwoPi * t)};
}

inline double frac_ld(long double t) {
    return static_cast<double>(t - std::floor(t));
}

long double omega_ld(const PhaseModel& m, long double x) {
    return static_cast<long double>(m.spec.alpha) * std::pow(std::log(x), static_cast<long double>(m.spec.A));
}

// Integer range [lo, hi] (possibly empty) inside the closed interval.
struct IntRange {
    long lo = 1, hi = 0;
    long size() const { return hi >= lo ? hi - lo + 1 : 0; }
};

IntRange ints_in(double a, double b) {
    return {static_cast<long>(std::ceil(a)), static_cast<long>(std::floor(b))};
}

// Lower end of the usable branch of omega' inside supp N_q.
double branch_lo(const PhaseModel& m, double a) {
    return std::max(a, std::exp(m.spec.A - 1.0) * (1.0 + 1e-9));
}

constexpr int kTileN = 512;
constexpr int kBlockK = 256;

// T(k) = sum_n w_n e(k x_n) for k = k0 .. k0+count-1, x_n in [0,1).
// Rotation in k, reseeded per block; n tiled so the state stays in cache.
std::vector<cplx> window_dft(const std::vector<double>& x, const std::vector<double>& w, long k0, long count) {
    std::vector<cplx> out(static_cast<std::size_t>(count));
    const std::size_t nn = x.size();
    std::vector<double> sr(nn), si(nn);
    for (std::size_t n = 0; n < nn; ++n) {
        sr[n] = std::cos(kTwoPi * x[n]);
        si[n] = std::sin(kTwoPi * x[n]);
    }
    const std::size_t nblocks = static_cast<std::size_t>((count + kBlockK - 1) / kBlockK);
    parallel_chunks(nblocks, 1, [&](std::size_t, std::size_t b0, std::size_t b1) {
        std::vector<double> zr(kTileN), zi(kTileN);
        std::vector<double> ar(kBlockK), ai(kBlockK);
        for (std::size_t b = b0; b < b1; ++b) {
            const long kb = k0 + static_cast<long>(b) * kBlockK;
            const int len = static_cast<int>(std::min<long>(kBlockK, k0 + count - kb));
            std::fill(ar.begin(), ar.end(), 0.0);
            std::fill(ai.begin(), ai.end(), 0.0);
            for (std::size_t t0 = 0; t0 < nn; t0 += kTileN) {
                const int tn = static_cast<int>(std::min<std::size_t>(kTileN, nn - t0));
                const double* xs = x.data() + t0;
                const double* ws = w.data() + t0;
                const double* srs = sr.data() + t0;
                const double* sis = si.data() + t0;
                for (int i = 0; i < tn; ++i) {
                    double p = static_cast<double>(kb) * xs[i];
                    p -= std::floor(p);
                    zr[i] = ws[i] * std::cos(kTwoPi * p);
                    zi[i] = ws[i] * std::sin(kTwoPi * p);
                }
                for (int j = 0; j < len; ++j) {
                    double re = 0.0, im = 0.0;
#pragma omp simd reduction(+ : re, im)
                    for (int i = 0; i < tn; ++i) {
                        const double a = zr[i], c = zi[i];
                        re += a;
                        im += c;
                        zr[i] = a * srs[i] - c * sis[i];
                        zi[i] = a * sis[i] + c * srs[i];
                    }
                    ar[j] += re;
                    ai[j] += im;
                }
            }
            for (int j = 0; j < len; ++j) {
                out[b * kBlockK + j] = {ar[j], ai[j]};
            }
        }
    });
    return out;
}

// values[i] = sum_j c_j e((k0 + j) s_i), summed in j order.
std::vector<cplx> sum_over_k(long k0, const std::vector<cplx>& c, const std::vector<double>& s) {
    std::vector<cplx> out(s.size());
    parallel_for(s.size(), 1, [&](std::size_t i) {
        const double si = s[i] - std::floor(s[i]);
        const cplx step = ephase(si);
        double re = 0.0, im = 0.0;
        cplx z;
        for (std::size_t j = 0; j < c.size(); ++j) {
            if (j % kBlockK == 0) {
                long double p = static_cast<long double>(k0 + static_cast<long>(j)) * si;
                z = ephase(frac_ld(p));
            }
            const cplx t = c[j] * z;
            re += t.real();
            im += t.imag();
            z *= step;
        }
        out[i] = {re, im};
    });
    return out;
}

}

std::string variant_name(Variant v) {
    switch (v) {
    case Variant::Exact: return "exact";
    case Variant::B: return "B";
    case Variant::BB: return "BB";
    }
    return "?";
}

double stationary_x(const PhaseModel& model, double k, double r) {
    if (!(k > 0.0) || !(r > 0.0)) {
        throw DomainError("stationary_x: need k, r > 0");
    }
    return omega_tilde(model, r / k);
}

double phase_phi(const PhaseModel& model, double k, double r) {
    const long double x = stationary_x(model, k, r);
    return static_cast<double>(static_cast<long double>(k) * omega_ld(model, x) - static_cast<long double>(r) * x);
}

double phase_phi_dk(const PhaseModel& model, double k, double r) {
    return model.omega(stationary_x(model, k, r));
}

double phase_phi_dkk(const PhaseModel& model, double k, double r) {
    const double x = stationary_x(model, k, r);
    return -(r * r) / (k * k * k) / model.deriv(2, x);
}

double mu_of(const PhaseModel& model, double h, double r, double s) {
    const double y = h - s;
    if (!(y > 0.0)) {
        throw DomainError("mu_of: need h - s > 0");
    }
    const double A = model.spec.A;
    const double alpha = model.spec.alpha;
    const double t = std::pow(y / alpha, 1.0 / A);
    return r * std::exp(t) / (alpha * A * std::pow(t, A - 1.0));
}

ExpSumEngine::ExpSumEngine(const PhaseModel& model, const DyadicWindows& windows, const TestFunction& f, double N)
    : model_(model), win_(windows), f_(f), N_(N) {
    if (!(N > 1.0)) {
        throw DomainError("expsum: need N > 1");
    }
    caches_.resize(static_cast<std::size_t>(win_.U()) + 1);
}

const FourierCache& ExpSumEngine::fhat_cache(int u) const {
    const auto a = static_cast<std::size_t>(std::abs(u));
    if (!caches_[a]) {
        Interval sup = win_.k_base_support(u);
        caches_[a] = std::make_unique<FourierCache>(f_, sup.lo / N_, sup.hi / N_, 1e-13);
    }
    return *caches_[a];
}

double ExpSumEngine::exact_cost(int q, int u) const {
    Interval ns = win_.n_support(q);
    Interval ks = win_.k_base_support(u);
    double nk = static_cast<double>(ints_in(ns.lo, ns.hi).size());
    double kk = static_cast<double>(ints_in(ks.lo, ks.hi).size());
    return nk * kk * (u == 0 ? 2.0 : 1.0);
}

cplx ExpSumEngine::inner_exact(int q, long k) const {
    Interval ns = win_.n_support(q);
    IntRange nr = ints_in(std::max(ns.lo, 1.0), ns.hi);
    SequenceSpec spec = model_.spec;
    spec.precision = Precision::Compensated;
    double re = 0.0, im = 0.0;
    for (long n = nr.lo; n <= nr.hi; ++n) {
        const double w = win_.n_window(q, static_cast<double>(n));
        if (w == 0.0) {
            continue;
        }
        const double fr = eval_omega_ext(spec, static_cast<double>(n)).frac;
        long double p = static_cast<long double>(k) * fr;
        const cplx z = w * ephase(frac_ld(p));
        re += z.real();
        im += z.imag();
    }
    return {re, im};
}

cplx ExpSumEngine::inner_b(int q, double k) const {
    Interval ns = win_.n_support(q);
    const double a = branch_lo(model_, ns.lo);
    const double b = ns.hi;
    if (!(b > a)) {
        return {0.0, 0.0};
    }
    const double alpha = model_.spec.alpha;
    const double A = model_.spec.A;
    IntRange rr = ints_in(k * model_.deriv(1, b), k * model_.deriv(1, a));
    double re = 0.0, im = 0.0;
    // In t = log x, omega'(x) = r/k reads t - (A-1) log t = log(alpha A k / r).
    // The left side is convex and increasing on t > A-1, and t decreases in
    // r, so Newton from the previous root converges monotonically.
    double t = std::log(b);
    const double tlo = std::log(a);
    for (long r = std::max(rr.lo, 1L); r <= rr.hi; ++r) {
        const double c = std::log(alpha * A * k / static_cast<double>(r));
        bool ok = false;
        for (int it = 0; it < 60; ++it) {
            const double g = t - (A - 1.0) * std::log(t) - c;
            const double dt = g / (1.0 - (A - 1.0) / t);
            t -= dt;
            if (!(t > A - 1.0)) {
                break;
            }
            if (std::abs(dt) <= 1e-15 * t) {
                ok = true;
                break;
            }
        }
        if (!ok) {
            t = std::log(omega_tilde(model_, static_cast<double>(r) / k));
        }
        if (t < tlo) {
            break;
        }
        const double x = std::exp(t);
        const double w = win_.n_window(q, x);
        if (w == 0.0) {
            continue;
        }
        const double ta = alpha * std::pow(t, A);
        // omega''(x) = alpha A t^{A-2} ((A-1) - t) / x^2.
        const double w2 = alpha * A * std::pow(t, A - 2.0) * (t - (A - 1.0)) / (x * x);
        const double amp = w / std::sqrt(k * w2);
        const double phi = std::fma(k, ta, -static_cast<double>(r) * x);
        const cplx z = amp * ephase(phi - std::floor(phi));
        re += z.real();
        im += z.imag();
    }
    return cplx{re, im} * ephase(-0.125);
}

cplx ExpSumEngine::inner_poisson(int q, double k) const {
    Interval ns = win_.n_support(q);
    const double a = ns.lo;
    const double b = ns.hi;
    auto w = [&](double x) { return win_.n_window(q, x); };
    double dmin = INFINITY, dmax = -INFINITY;
    for (int i = 0; i <= 256; ++i) {
        double x = a + (b - a) * i / 256.0;
        double d = k * model_.deriv(1, x);
        dmin = std::min(dmin, d);
        dmax = std::max(dmax, d);
    }
    auto term = [&](long r) {
        auto psi = [&](double x) { return k * model_.omega(x) - static_cast<double>(r) * x; };
        double freq = std::max(std::abs(dmax - r), std::abs(dmin - r)) + 1.0;
        return oscillatory_integral(w, psi, a, b, freq, 0.5);
    };
    double re = 0.0, im = 0.0;
    const long r0 = static_cast<long>(std::floor(dmin));
    const long r1 = static_cast<long>(std::ceil(dmax));
    for (long r = r0; r <= r1; ++r) {
        cplx t = term(r);
        re += t.real();
        im += t.imag();
    }
    // Tails: stop after several consecutive negligible terms.
    for (int dir : {-1, 1}) {
        int quiet = 0;
        for (long r = dir < 0 ? r0 - 1 : r1 + 1; quiet < 4 && std::abs(r - (dir < 0 ? r0 : r1)) < 400; r += dir) {
            cplx t = term(r);
            re += t.real();
            im += t.imag();
            quiet = std::abs(t) < 1e-12 ? quiet + 1 : 0;
        }
    }
    return {re, im};
}

std::vector<cplx> ExpSumEngine::k_sum(int q, int u, const std::vector<double>& s, bool stationary) const {
    Interval ks = win_.k_base_support(u);
    IntRange kr = ints_in(std::max(ks.lo, 1.0), ks.hi);
    const FourierCache& fh = fhat_cache(u);
    std::vector<cplx> c(static_cast<std::size_t>(std::max<long>(kr.size(), 0)));
    auto coeff = [&](long k) {
        const double kd = static_cast<double>(k);
        return win_.k_window(std::abs(u), kd) * fh(kd / N_) / N_;
    };
    if (stationary) {
        parallel_for(c.size(), 16, [&](std::size_t j) {
            const long k = kr.lo + static_cast<long>(j);
            c[j] = coeff(k) * inner_b(q, static_cast<double>(k));
        });
    } else {
        // Positive k only; negative k is handled by the caller.
        Interval ns = win_.n_support(q);
        IntRange nr = ints_in(std::max(ns.lo, 1.0), ns.hi);
        SequenceSpec spec = model_.spec;
        spec.precision = Precision::Compensated;
        std::vector<double> xs, ws;
        for (long n = nr.lo; n <= nr.hi; ++n) {
            const double w = win_.n_window(q, static_cast<double>(n));
            if (w != 0.0) {
                xs.push_back(eval_omega_ext(spec, static_cast<double>(n)).frac);
                ws.push_back(w);
            }
        }
        std::vector<cplx> T = window_dft(xs, ws, kr.lo, kr.size());
        for (std::size_t j = 0; j < c.size(); ++j) {
            c[j] = coeff(kr.lo + static_cast<long>(j)) * T[j];
        }
    }
    return sum_over_k(kr.lo, c, s);
}

std::vector<cplx> ExpSumEngine::exact(int q, int u, const std::vector<double>& s, double budget) const {
    const double cost = exact_cost(q, u);
    if (cost > budget) {
        throw BudgetError("exact_sum: " + std::to_string(cost) + " (n,k) pairs exceeds the budget of " +
                          std::to_string(budget) + "; use smaller q or u");
    }
    if (u > 0) {
        return k_sum(q, u, s, false);
    }
    // k < 0 evaluated directly rather than by symmetry.
    Interval ks = win_.k_base_support(u);
    IntRange kr = ints_in(std::max(ks.lo, 1.0), ks.hi);
    const FourierCache& fh = fhat_cache(u);
    Interval ns = win_.n_support(q);
    IntRange nr = ints_in(std::max(ns.lo, 1.0), ns.hi);
    SequenceSpec spec = model_.spec;
    spec.precision = Precision::Compensated;
    std::vector<double> xs, ws;
    for (long n = nr.lo; n <= nr.hi; ++n) {
        const double w = win_.n_window(q, static_cast<double>(n));
        if (w != 0.0) {
            xs.push_back(eval_omega_ext(spec, static_cast<double>(n)).frac);
            ws.push_back(w);
        }
    }
    // k runs over -kr.hi .. -kr.lo in increasing order.
    std::vector<cplx> T = window_dft(xs, ws, -kr.hi, kr.size());
    std::vector<cplx> c(T.size());
    for (std::size_t j = 0; j < c.size(); ++j) {
        const double kd = static_cast<double>(-kr.hi + static_cast<long>(j));
        c[j] = win_.k_window(u, kd) * std::conj(fh(-kd / N_)) / N_ * T[j];
    }
    std::vector<cplx> neg = sum_over_k(-kr.hi, c, s);
    if (u < 0) {
        return neg;
    }
    std::vector<cplx> pos = k_sum(q, u, s, false);
    for (std::size_t i = 0; i < pos.size(); ++i) {
        pos[i] += neg[i];
    }
    return pos;
}

std::vector<cplx> ExpSumEngine::b_process(int q, int u, const std::vector<double>& s) const {
    // Real f: the k < 0 half is the conjugate of the k > 0 half.
    std::vector<cplx> pos = k_sum(q, u, s, true);
    for (cplx& z : pos) {
        if (u < 0) {
            z = std::conj(z);
        } else if (u == 0) {
            z += std::conj(z);
        }
    }
    return pos;
}

std::vector<cplx> ExpSumEngine::bb_process(int q, int u, const std::vector<double>& s) const {
    Interval ns = win_.n_support(q);
    const double a = branch_lo(model_, ns.lo);
    const double b = ns.hi;
    Interval ks = win_.k_base_support(u);
    const FourierCache& fh = fhat_cache(u);
    const int au = std::abs(u);
    const double alpha = model_.spec.alpha;
    const long double A = model_.spec.A;
    // Positive-k part at s.
    auto part = [&](double sv) -> cplx {
        if (!(b > a)) {
            return {0.0, 0.0};
        }
        IntRange hr = ints_in(model_.omega(a) + sv, model_.omega(b) + sv);
        double re = 0.0, im = 0.0;
        for (long h = hr.lo; h <= hr.hi; ++h) {
            const long double y = static_cast<long double>(h) - sv;
            if (!(y > 0.0L)) {
                continue;
            }
            const long double t = std::pow(y / alpha, 1.0L / A);
            const long double x = std::exp(t);
            const double w = win_.n_window(q, static_cast<double>(x));
            if (w == 0.0) {
                continue;
            }
            const long double d = alpha * A * std::pow(t, A - 1.0L) / x;
            IntRange rr = ints_in(static_cast<double>(d * ks.lo), static_cast<double>(d * ks.hi));
            for (long r = std::max(rr.lo, 1L); r <= rr.hi; ++r) {
                const double mu = static_cast<double>(r / d);
                const double kw = win_.k_window(au, mu);
                if (kw == 0.0) {
                    continue;
                }
                const cplx z = kw * w / static_cast<double>(d) * fh(mu / N_) *
                               ephase(-frac_ld(static_cast<long double>(r) * x));
                re += z.real();
                im += z.imag();
            }
        }
        return cplx{re, im} / N_;
    };
    std::vector<cplx> out(s.size());
    parallel_for(s.size(), 1, [&](std::size_t i) {
        const cplx z = part(s[i]);
        out[i] = u > 0 ? z : (u < 0 ? std::conj(z) : z + std::conj(z));
    });
    return out;
}

SmoothedSumResult ExpSumEngine::run(Variant v, int q, int u, const std::vector<double>& s) const {
    SmoothedSumResult res;
    res.q = q;
    res.u = u;
    res.s_grid = s;
    res.variant = v;
    switch (v) {
    case Variant::Exact: res.values = exact(q, u, s); break;
    case Variant::B: res.values = b_process(q, u, s); break;
    case Variant::BB: res.values = bb_process(q, u, s); break;
    }
    return res;
}

cplx exact_sum(const PhaseModel& model, const DyadicWindows& w, const TestFunction& f, int q, int u, double N,
               double s) {
    return ExpSumEngine(model, w, f, N).exact(q, u, {s})[0];
}

cplx b_sum(const PhaseModel& model, const DyadicWindows& w, const TestFunction& f, int q, int u, double N,
           double s) {
    return ExpSumEngine(model, w, f, N).b_process(q, u, {s})[0];
}

cplx bb_sum(const PhaseModel& model, const DyadicWindows& w, const TestFunction& f, int q, int u, double N,
            double s) {
    return ExpSumEngine(model, w, f, N).bb_process(q, u, {s})[0];
}

std::vector<double> uniform_grid(int G) {
    if (G < 1) {
        throw DomainError("uniform_grid: need G >= 1");
    }
    std::vector<double> s(static_cast<std::size_t>(G));
    for (int i = 0; i < G; ++i) {
        s[static_cast<std::size_t>(i)] = static_cast<double>(i) / G;
    }
    return s;
}

double lp_norm(const std::vector<cplx>& v, double p) {
    if (v.empty()) {
        return 0.0;
    }
    NeumaierSum<double> acc;
    for (const cplx& z : v) {
        acc.add(std::pow(std::abs(z), p));
    }
    return std::pow(acc.value() / static_cast<double>(v.size()), 1.0 / p);
}

double lp_distance(const std::vector<cplx>& a, const std::vector<cplx>& b, double p) {
    if (a.size() != b.size()) {
        throw DomainError("lp_distance: size mismatch");
    }
    std::vector<cplx> d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        d[i] = a[i] - b[i];
    }
    return lp_norm(d, p);
}

NormReport compare_variants(const ExpSumEngine& engine, int q, int u, const std::vector<double>& s_grid, double p,
                            std::vector<cplx>* exact_out, std::vector<cplx>* b_out, std::vector<cplx>* bb_out) {
    NormReport rep;
    rep.q = q;
    rep.u = u;
    rep.G = static_cast<int>(s_grid.size());
    rep.p = p;
    auto ex = engine.exact(q, u, s_grid);
    auto bp = engine.b_process(q, u, s_grid);
    auto bbp = engine.bb_process(q, u, s_grid);
    rep.norm_exact = lp_norm(ex, p);
    rep.norm_b = lp_norm(bp, p);
    rep.norm_bb = lp_norm(bbp, p);
    rep.exact_minus_b = lp_distance(ex, bp, p);
    rep.b_minus_bb = lp_distance(bp, bbp, p);
    rep.exact_minus_bb = lp_distance(ex, bbp, p);
    if (exact_out) *exact_out = std::move(ex);
    if (b_out) *b_out = std::move(bp);
    if (bb_out) *bb_out = std::move(bbp);
    return rep;
}

bool is_non_degenerate(const PhaseModel& model, int q, int u, int Q, int m) {
    const double A = model.spec.A;
    return std::abs(u) >= std::pow(static_cast<double>(q), (A - 1.0) / 2.0) &&
           static_cast<double>(q) > static_cast<double>(Q) / (m + 1);
}

bool has_stationary_regime(const PhaseModel& model, int q, int u) {
    const double A = model.spec.A;
    return u >= q - (A - 1.0) * std::log(static_cast<double>(q)) - 10.0 * A;
}

ConditionReport condition_report(const PhaseModel& model, int q, int u, double N, int m) {
    ConditionReport c;
    c.q = q;
    c.u = u;
    c.m = m;
    c.N = N;
    c.A = model.spec.A;
    c.Q = static_cast<int>(std::floor(std::log(N) + 1e-12));
    c.non_degenerate = is_non_degenerate(model, q, u, c.Q, m);
    c.has_stationary_points = has_stationary_regime(model, q, u);
    const double qd = q, au = std::abs(u), A = c.A, d = c.delta;
    auto check = [d](double Lp, double Op, double Ow, double Lw, double& Z, bool& lok, bool& ook) {
        Z = Op + Lw + Lp + Ow + 1.0;
        lok = Lp >= std::pow(Z, 3.0 * d);
        ook = Ow >= Op * std::pow(Z, d / 2.0) / std::sqrt(Lp);
    };
    c.b1_Lambda_psi = std::pow(qd, A) * std::exp(au);
    c.b1_Omega_psi = std::exp(qd);
    c.b1_Omega_w = std::exp(qd);
    c.b1_Lambda_w = 1.0;
    check(c.b1_Lambda_psi, c.b1_Omega_psi, c.b1_Omega_w, c.b1_Lambda_w, c.b1_Z, c.b1_lambda_ok, c.b1_omega_ok);
    c.b2_Lambda_psi = std::exp(au) * std::pow(qd, A - 1.0);
    c.b2_Omega_psi = std::exp(au);
    c.b2_Omega_w = std::exp(au);
    c.b2_Lambda_w = std::exp(qd - au / 2.0);
    check(c.b2_Lambda_psi, c.b2_Omega_psi, c.b2_Omega_w, c.b2_Lambda_w, c.b2_Z, c.b2_lambda_ok, c.b2_omega_ok);
    return c;
}

}
