#include "seqstat/testfn.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "seqstat/error.hpp"
#include "seqstat/quadrature.hpp"

namespace seqstat {

double bump_kernel(double t) {
    if (!(t > -1.0 && t < 1.0)) {
        return 0.0;
    }
    return std::exp(-1.0 / ((1.0 - t) * (1.0 + t)));
}

std::vector<double> bump_kernel_derivs(double t, int n) {
    std::vector<double> d(static_cast<std::size_t>(n) + 1, 0.0);
    double f0 = bump_kernel(t);
    if (f0 == 0.0) {
        return d;
    }
    d[0] = f0;
    // f = exp(g) with g = -(1/(1-t) + 1/(1+t))/2, so
    // g^(k) = -k!/2 * (1/(1-t)^{k+1} + (-1)^k/(1+t)^{k+1}) and
    // f^(n+1) = sum_k C(n,k) g^(k+1) f^(n-k).
    std::vector<double> g(static_cast<std::size_t>(n) + 1, 0.0);
    double fact = 1.0;
    for (int k = 1; k <= n; ++k) {
        fact *= k;
        double a = std::pow(1.0 - t, -(k + 1));
        double b = std::pow(1.0 + t, -(k + 1));
        g[k] = -0.5 * fact * (a + ((k % 2) ? -b : b));
    }
    for (int m = 0; m < n; ++m) {
        double s = 0.0;
        double binom = 1.0;
        for (int k = 0; k <= m; ++k) {
            s += binom * g[k + 1] * d[m - k];
            binom = binom * (m - k) / (k + 1);
        }
        d[m + 1] = s;
    }
    return d;
}

namespace {

constexpr std::array<double, 8> gl8_x = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                         -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                         0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> gl8_w = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                         0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                         0.2223810344533745, 0.1012285362903763};

double gl8(double a, double b) {
    double c = 0.5 * (a + b);
    double h = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < 8; ++i) {
        s += gl8_w[i] * bump_kernel(c + h * gl8_x[i]);
    }
    return s * h;
}

struct StepTable {
    static constexpr int cells = 2048;
    std::array<long double, cells + 1> cum{};
    double mass = 0.0;

    StepTable() {
        long double acc = 0.0L;
        cum[0] = 0.0L;
        for (int i = 0; i < cells; ++i) {
            acc += gl8(edge(i), edge(i + 1));
            cum[i + 1] = acc;
        }
        mass = static_cast<double>(acc);
    }

    static double edge(int i) { return -1.0 + 2.0 * i / cells; }
};

const StepTable& step_table() {
    static const StepTable table;
    return table;
}

double smoothstep_left(double t) {
    const auto& tb = step_table();
    int i = static_cast<int>(std::floor((t + 1.0) * 0.5 * StepTable::cells));
    i = std::clamp(i, 0, StepTable::cells - 1);
    double part = gl8(StepTable::edge(i), t);
    return static_cast<double>((tb.cum[i] + part) / tb.cum[StepTable::cells]);
}

}

double bump_kernel_mass() {
    return step_table().mass;
}

double smoothstep(double t) {
    if (t <= -1.0) {
        return 0.0;
    }
    if (t >= 1.0) {
        return 1.0;
    }
    // Evaluate on the side where the value is small so the relative
    // accuracy of the tail is kept.
    return t <= 0.0 ? smoothstep_left(t) : 1.0 - smoothstep_left(-t);
}

TestFunction TestFunction::bump(double center, double halfwidth, double height) {
    if (!(halfwidth > 0.0) || !(height > 0.0)) {
        throw DomainError("bump: need halfwidth > 0 and height > 0");
    }
    TestFunction f;
    f.shape_ = Shape::Bump;
    f.p0 = center;
    f.p1 = halfwidth;
    f.p2 = height;
    return f;
}

TestFunction TestFunction::smoothed_box(double left, double right, double mollify) {
    if (!(right > left) || !(mollify > 0.0)) {
        throw DomainError("box: need left < right and mollify > 0");
    }
    TestFunction f;
    f.shape_ = Shape::SmoothedBox;
    f.p0 = left;
    f.p1 = right;
    f.p2 = mollify;
    return f;
}

TestFunction TestFunction::parse(const std::string& desc) {
    auto colon = desc.find(':');
    if (colon == std::string::npos) {
        throw UsageError("test function descriptor must look like bump:c,w,h or box:l,r,delta: '" + desc + "'");
    }
    std::string kind = desc.substr(0, colon);
    std::vector<double> vals;
    std::stringstream ss(desc.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            vals.push_back(std::stod(item, &used));
            if (used != item.size()) {
                throw std::invalid_argument(item);
            }
        } catch (const std::exception&) {
            throw UsageError("bad number '" + item + "' in test function descriptor '" + desc + "'");
        }
    }
    if (vals.size() != 3) {
        throw UsageError("test function descriptor needs three parameters: '" + desc + "'");
    }
    try {
        if (kind == "bump") {
            return bump(vals[0], vals[1], vals[2]);
        }
        if (kind == "box") {
            return smoothed_box(vals[0], vals[1], vals[2]);
        }
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
    throw UsageError("unknown test function kind '" + kind + "'");
}

std::string TestFunction::describe() const {
    std::ostringstream os;
    os.precision(17);
    os << (shape_ == Shape::Bump ? "bump:" : "box:") << p0 << "," << p1 << "," << p2;
    return os.str();
}

double TestFunction::operator()(double x) const {
    if (shape_ == Shape::Bump) {
        return p2 * bump_kernel((x - p0) / p1);
    }
    return smoothstep((x - p0) / p2) - smoothstep((x - p1) / p2);
}

std::vector<double> TestFunction::derivs(double x, int n) const {
    std::vector<double> out(static_cast<std::size_t>(n) + 1, 0.0);
    if (shape_ == Shape::Bump) {
        auto d = bump_kernel_derivs((x - p0) / p1, n);
        double scale = p2;
        for (int k = 0; k <= n; ++k) {
            out[k] = d[k] * scale;
            scale /= p1;
        }
        return out;
    }
    out[0] = (*this)(x);
    if (n == 0) {
        return out;
    }
    auto dl = bump_kernel_derivs((x - p0) / p2, n - 1);
    auto dr = bump_kernel_derivs((x - p1) / p2, n - 1);
    double scale = 1.0 / (bump_kernel_mass() * p2);
    for (int k = 1; k <= n; ++k) {
        out[k] = (dl[k - 1] - dr[k - 1]) * scale;
        scale /= p2;
    }
    return out;
}

Interval TestFunction::support() const {
    if (shape_ == Shape::Bump) {
        return {p0 - p1, p0 + p1};
    }
    return {p0 - p2, p1 + p2};
}

bool TestFunction::even() const {
    if (shape_ == Shape::Bump) {
        return p0 == 0.0;
    }
    return p0 == -p1;
}

std::vector<double> TestFunction::breakpoints() const {
    if (shape_ == Shape::Bump) {
        return {p0 - p1, p0 + p1};
    }
    std::vector<double> b{p0 - p2, p0 + p2, p1 - p2, p1 + p2};
    std::sort(b.begin(), b.end());
    return b;
}

double TestFunction::sup() const {
    if (shape_ == Shape::Bump) {
        return p2 * std::exp(-1.0);
    }
    double mid = 0.5 * (p0 + p1);
    return (*this)(mid);
}

double eval_f(const TestFunction& f, double x) {
    return f(x);
}

double expectation_power(const TestFunction& f, int j) {
    if (j < 1) {
        throw DomainError("expectation_power: j must be >= 1");
    }
    auto bp = f.breakpoints();
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
        if (!(bp[i + 1] > bp[i])) {
            continue;
        }
        auto r = adaptive_simpson([&](double x) { return std::pow(f(x), j); }, bp[i], bp[i + 1], 1e-12 / bp.size());
        total += r.value;
    }
    return total;
}

std::complex<double> fourier_f(const TestFunction& f, double xi) {
    auto sup = f.support();
    std::vector<double> breaks = f.breakpoints();
    // One forced break per half oscillation.
    int n = static_cast<int>(std::ceil(2.0 * sup.width() * std::abs(xi)));
    for (int i = 1; i < n; ++i) {
        breaks.push_back(sup.lo + sup.width() * i / n);
    }
    const double w = 2.0 * std::numbers::pi * xi;
    auto re = gauss_kronrod([&](double x) { return f(x) * std::cos(w * x); }, sup.lo, sup.hi, 1e-14, 20000, breaks);
    auto im = gauss_kronrod([&](double x) { return -f(x) * std::sin(w * x); }, sup.lo, sup.hi, 1e-14, 20000, breaks);
    return {re.value, im.value};
}

double construct_F(const std::vector<TestFunction>& fs, const std::vector<double>& z) {
    const std::size_t m = fs.size();
    if (m < 2 || z.size() + 1 != m) {
        throw DomainError("construct_F: need m >= 2 functions and m-1 shifts");
    }
    std::vector<double> Z(m, 0.0);
    for (std::size_t j = m - 1; j-- > 0;) {
        Z[j] = Z[j + 1] + z[j];
    }
    double lo = -INFINITY;
    double hi = INFINITY;
    for (std::size_t j = 0; j < m; ++j) {
        auto s = fs[j].support();
        lo = std::max(lo, s.lo - Z[j]);
        hi = std::min(hi, s.hi - Z[j]);
    }
    if (!(hi > lo)) {
        return 0.0;
    }
    std::vector<double> breaks;
    for (std::size_t j = 0; j < m; ++j) {
        for (double b : fs[j].breakpoints()) {
            breaks.push_back(b - Z[j]);
        }
    }
    auto r = gauss_kronrod(
        [&](double s) {
            double p = 1.0;
            for (std::size_t j = 0; j < m && p != 0.0; ++j) {
                p *= fs[j](Z[j] + s);
            }
            return p;
        },
        lo, hi, 1e-14, 20000, breaks);
    return r.value;
}

double construct_F(const TestFunction& f, const std::vector<double>& z) {
    return construct_F(std::vector<TestFunction>(z.size() + 1, f), z);
}

namespace {

std::vector<double> cheb_coeffs(const std::vector<double>& vals) {
    // vals at Chebyshev points of the second kind x_k = cos(pi k/n); DCT-I.
    const int n = static_cast<int>(vals.size()) - 1;
    std::vector<double> c(n + 1, 0.0);
    for (int j = 0; j <= n; ++j) {
        double s = 0.0;
        for (int k = 0; k <= n; ++k) {
            double w = (k == 0 || k == n) ? 0.5 : 1.0;
            s += w * vals[k] * std::cos(std::numbers::pi * j * k / n);
        }
        c[j] = 2.0 * s / n;
    }
    c[0] *= 0.5;
    c[n] *= 0.5;
    return c;
}

double clenshaw(const std::vector<double>& c, double t) {
    double b1 = 0.0, b2 = 0.0;
    for (std::size_t j = c.size(); j-- > 1;) {
        double b0 = 2.0 * t * b1 - b2 + c[j];
        b2 = b1;
        b1 = b0;
    }
    return t * b1 - b2 + c[0];
}

}

FourierCache::FourierCache(const TestFunction& f, double a, double b, double tol) : a_(a), b_(b), f_(f) {
    if (!(b > a)) {
        b_ = a_ + 1e-9;
    }
    auto map = [&](double t) { return 0.5 * (a_ + b_) + 0.5 * (b_ - a_) * t; };
    for (int n = 32; n <= 4096; n *= 2) {
        std::vector<double> vr(n + 1), vi(n + 1);
        parallel_for(n + 1, 8, [&](std::size_t k) {
            auto v = fourier_f(f_, map(std::cos(std::numbers::pi * k / n)));
            vr[k] = v.real();
            vi[k] = v.imag();
        });
        re_ = cheb_coeffs(vr);
        im_ = cheb_coeffs(vi);
        // Check at points between nodes.
        double err = 0.0;
        for (int k = 0; k < 7; ++k) {
            double t = std::cos(std::numbers::pi * (k + 0.37) / 7.0);
            auto v = fourier_f(f_, map(t));
            auto w = (*this)(map(t));
            err = std::max(err, std::abs(v - w));
        }
        if (err < tol) {
            return;
        }
    }
}

std::complex<double> FourierCache::operator()(double xi) const {
    if (xi < a_ || xi > b_) {
        return fourier_f(f_, xi);
    }
    double t = (2.0 * xi - a_ - b_) / (b_ - a_);
    return {clenshaw(re_, t), clenshaw(im_, t)};
}

}
