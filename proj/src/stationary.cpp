#include "seqstat/stationary.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <numbers>

#include "seqstat/error.hpp"
#include "seqstat/parallel.hpp"
#include "seqstat/quadrature.hpp"

namespace seqstat {

namespace {

using cplx = std::complex<double>;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

cplx e_of(double x) {
    double f = x - std::floor(x);
    return std::polar(1.0, kTwoPi * f);
}

// Derivatives 0..n of g at x by repeated central differencing.
std::vector<double> fd_derivs(const std::function<double(double)>& g, double x, int n, double h) {
    std::vector<double> out(n + 1, 0.0);
    out[0] = g(x);
    for (int k = 1; k <= n; ++k) {
        // k-th central difference with step h.
        double s = 0.0;
        double binom = 1.0;
        for (int i = 0; i <= k; ++i) {
            double sign = (i % 2) ? -1.0 : 1.0;
            s += sign * binom * g(x + (0.5 * k - i) * h);
            binom = binom * (k - i) / (i + 1);
        }
        out[k] = s / std::pow(h, k);
    }
    return out;
}

std::vector<double> derivs_of(const std::function<double(double)>& v,
                              const std::function<std::vector<double>(double, int)>& d, double x, int n, double h) {
    if (d) {
        return d(x, n);
    }
    return fd_derivs(v, x, n, h);
}

}

WindowRecord window_from(const TestFunction& f) {
    WindowRecord w;
    w.value = [f](double x) { return f(x); };
    w.derivs = [f](double x, int n) { return f.derivs(x, n); };
    w.support = f.support();
    w.Omega = f.support().width();
    w.Lambda = f.sup();
    return w;
}

double critical_point(const WindowRecord& w, const PhaseRecord& psi) {
    auto d1 = [&](double x) { return derivs_of(psi.value, psi.derivs, x, 1, psi.h)[1]; };
    double a = w.support.lo, b = w.support.hi;
    double fa = d1(a), fb = d1(b);
    if (fa == 0.0) {
        return a;
    }
    if (fb == 0.0) {
        return b;
    }
    if ((fa > 0.0) == (fb > 0.0)) {
        throw DomainError("stationary_phase: no critical point in the window support");
    }
    for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
        double m = 0.5 * (a + b);
        double fm = d1(m);
        if ((fm > 0.0) == (fa > 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

std::complex<double> stationary_phase(const WindowRecord& w, const PhaseRecord& psi, int order) {
    if (order < 0 || order > 6) {
        throw DomainError("stationary_phase: order must be in 0..6");
    }
    const double x0 = critical_point(w, psi);
    const int n2 = 2 * order;
    auto pd = derivs_of(psi.value, psi.derivs, x0, std::max(n2, 2), psi.h);
    auto wd = derivs_of(w.value, w.derivs, x0, n2, w.h);
    const double p2 = pd[2];
    if (p2 == 0.0) {
        throw DomainError("stationary_phase: degenerate critical point");
    }
    // E = e(H): E^(n+1) = sum_k C(n,k) 2 pi i H^(k+1) E^(n-k), with
    // H(x0) = H'(x0) = H''(x0) = 0 and H^(j) = psi^(j) for j >= 3.
    std::vector<cplx> E(n2 + 1);
    E[0] = 1.0;
    for (int n = 0; n < n2; ++n) {
        cplx s = 0.0;
        double binom = 1.0;
        for (int k = 0; k <= n; ++k) {
            int j = k + 1;
            if (j >= 3) {
                s += binom * cplx(0.0, kTwoPi * pd[j]) * E[n - k];
            }
            binom = binom * (n - k) / (k + 1);
        }
        E[n + 1] = s;
    }
    const double sgn = p2 > 0.0 ? 1.0 : -1.0;
    const cplx c = cplx(0.0, 1.0) / (4.0 * std::numbers::pi * p2);
    cplx total = 0.0;
    cplx cpow = 1.0;
    double fact = 1.0;
    for (int j = 0; j <= order; ++j) {
        if (j > 0) {
            cpow *= c;
            fact *= j;
        }
        // G^(2j) by Leibniz.
        cplx G = 0.0;
        double binom = 1.0;
        for (int i = 0; i <= 2 * j; ++i) {
            G += binom * wd[i] * E[2 * j - i];
            binom = binom * (2 * j - i) / (i + 1);
        }
        total += cpow / fact * G;
    }
    return e_of(pd[0] + sgn / 8.0) / std::sqrt(std::abs(p2)) * total;
}

double vdc_bound(const PhaseRecord&, const WindowRecord& w, int j, double Lambda) {
    if (j < 1) {
        throw DomainError("vdc_bound: j must be >= 1");
    }
    if (!(Lambda > 0.0)) {
        throw DomainError("vdc_bound: Lambda must be positive");
    }
    double a = w.support.lo, b = w.support.hi;
    auto dw = [&](double x) { return std::abs(derivs_of(w.value, w.derivs, x, 1, w.h)[1]); };
    double var = gauss_kronrod(dw, a, b, 1e-12, 4000).value;
    return (std::abs(w.value(b)) + var) * std::pow(Lambda, -1.0 / j);
}

double vdc_constant(int j) {
    // Standard van der Corput constant 5 * 2^{j-1} - 2 for |psi^(j)| >= Lambda
    // written with e(.) = exp(2 pi i .): the 2 pi moves into Lambda.
    return (5.0 * std::pow(2.0, j - 1) - 2.0) / std::pow(kTwoPi, 1.0 / j);
}

std::complex<double> oscillatory_integral(const std::function<double(double)>& w,
                                          const std::function<double(double)>& psi, double a, double b,
                                          double freq, double max_turn) {
    if (!(b > a)) {
        return 0.0;
    }
    std::size_t panels = static_cast<std::size_t>(std::ceil((b - a) * std::abs(freq) / max_turn)) + 1;
    const double h = (b - a) / panels;
    NeumaierSum<double> re, im;
    using GL = boost::math::quadrature::gauss<double, 20>;
    for (std::size_t p = 0; p < panels; ++p) {
        double lo = a + p * h;
        double hi = (p + 1 == panels) ? b : lo + h;
        re.add(GL::integrate([&](double x) { return w(x) * std::cos(kTwoPi * psi(x)); }, lo, hi));
        im.add(GL::integrate([&](double x) { return w(x) * std::sin(kTwoPi * psi(x)); }, lo, hi));
    }
    return {re.value(), im.value()};
}

}
