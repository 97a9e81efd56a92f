#ifndef SEQSTAT_QUADRATURE_HPP
#define SEQSTAT_QUADRATURE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <queue>
#include <vector>

#include "seqstat/parallel.hpp"

namespace seqstat {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    std::size_t panels = 0;
    bool converged = true;
};

namespace detail {

template <class F>
double simpson_rec(F& f, double a, double b, double fa, double fm, double fb, double whole, double tol,
                   int depth, std::size_t& panels, std::size_t cap, double& err, bool& ok) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m);
    double rm = 0.5 * (m + b);
    double flm = f(lm);
    double frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    ++panels;
    if (depth <= 0 || panels >= cap) {
        ok = false;
        err += std::abs(delta) / 15.0;
        return left + right + delta / 15.0;
    }
    // At least two levels below the initial panels before accepting.
    if (depth <= 48 && std::abs(delta) <= 15.0 * tol) {
        err += std::abs(delta) / 15.0;
        return left + right + delta / 15.0;
    }
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, panels, cap, err, ok) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, panels, cap, err, ok);
}

}

// Adaptive Simpson with Richardson correction and absolute tolerance.
template <class F>
QuadResult adaptive_simpson(F&& f, double a, double b, double abs_tol = 1e-12,
                            std::size_t panel_cap = std::size_t(1) << 20) {
    QuadResult res;
    if (!(b > a)) {
        return res;
    }
    // Start from 16 panels so that narrow features are seen.
    const int init = 16;
    double h = (b - a) / init;
    for (int i = 0; i < init; ++i) {
        double x0 = a + i * h;
        double x1 = (i + 1 == init) ? b : a + (i + 1) * h;
        double f0 = f(x0);
        double f1 = f(x1);
        double fm = f(0.5 * (x0 + x1));
        double whole = (x1 - x0) / 6.0 * (f0 + 4.0 * fm + f1);
        res.value += detail::simpson_rec(f, x0, x1, f0, fm, f1, whole, abs_tol / init, 50, res.panels, panel_cap,
                                         res.error, res.converged);
    }
    return res;
}

namespace detail {

inline constexpr std::array<double, 8> kronrod_x = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kronrod_w = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> gauss_w = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment gk15(F& f, double a, double b) {
    double c = 0.5 * (a + b);
    double h = 0.5 * (b - a);
    double fc = f(c);
    double k = kronrod_w[7] * fc;
    double g = gauss_w[3] * fc;
    for (int i = 0; i < 7; ++i) {
        double dx = h * kronrod_x[i];
        double s = f(c - dx) + f(c + dx);
        k += kronrod_w[i] * s;
        if (i % 2 == 1) {
            g += gauss_w[i / 2] * s;
        }
    }
    return {a, b, k * h, std::abs((k - g) * h)};
}

}

// Globally adaptive Gauss-Kronrod 7-15 with absolute tolerance. `breaks`
// are forced subdivision points (e.g. support edges of a piecewise-smooth
// integrand); they are clipped to (a,b).
template <class F>
QuadResult gauss_kronrod(F&& f, double a, double b, double abs_tol = 1e-12, std::size_t max_segments = 20000,
                         const std::vector<double>& breaks = {}) {
    QuadResult res;
    if (!(b > a)) {
        return res;
    }
    std::vector<double> pts{a};
    for (double x : breaks) {
        if (x > a && x < b) {
            pts.push_back(x);
        }
    }
    pts.push_back(b);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    std::priority_queue<detail::Segment> heap;
    double total_err = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        auto s = detail::gk15(f, pts[i], pts[i + 1]);
        total_err += s.error;
        heap.push(s);
    }
    std::size_t count = heap.size();
    while (total_err > abs_tol && count < max_segments) {
        auto s = heap.top();
        // Segments that can no longer be split in floating point are final.
        double m = 0.5 * (s.a + s.b);
        if (!(m > s.a && m < s.b)) {
            break;
        }
        heap.pop();
        auto l = detail::gk15(f, s.a, m);
        auto r = detail::gk15(f, m, s.b);
        total_err += l.error + r.error - s.error;
        heap.push(l);
        heap.push(r);
        ++count;
    }
    std::vector<detail::Segment> segs;
    segs.reserve(heap.size());
    while (!heap.empty()) {
        segs.push_back(heap.top());
        heap.pop();
    }
    std::sort(segs.begin(), segs.end(), [](auto& x, auto& y) { return x.a < y.a; });
    NeumaierSum<double> sum;
    double err = 0.0;
    for (auto& s : segs) {
        sum.add(s.value);
        err += s.error;
    }
    res.value = sum.value();
    res.error = err;
    res.panels = segs.size();
    res.converged = err <= abs_tol;
    return res;
}

}

#endif
