#include "doctest.h"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "seqstat/testfn.hpp"

using namespace seqstat;

namespace {

double trapezoid(const TestFunction& f, int power, double a, double b, int n) {
    double h = (b - a) / n;
    double s = 0.0;
    for (int i = 1; i < n; ++i) {
        s += std::pow(f(a + i * h), power);
    }
    return s * h;
}

// Composite 30-point Gauss-Legendre over many short panels.
template <class G>
double gauss_panels(G&& g, double a, double b, int panels) {
    double h = (b - a) / panels;
    double s = 0.0;
    for (int i = 0; i < panels; ++i) {
        s += boost::math::quadrature::gauss<double, 30>::integrate(g, a + i * h, a + (i + 1) * h);
    }
    return s;
}

}

TEST_CASE("eval_f spot values") {
    auto b = TestFunction::bump(0, 1, 1);
    CHECK(b(0.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK(b(1.0) == 0.0);
    CHECK(b(-1.0) == 0.0);
    CHECK(b(3.0) == 0.0);
    auto box = TestFunction::smoothed_box(-0.5, 0.5, 0.1);
    CHECK(box(0.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(box(0.6) == 0.0);
    CHECK(box(-0.6) == 0.0);
    CHECK(box(0.5) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(b.even());
    CHECK(box.even());
    CHECK_FALSE(TestFunction::bump(0.2, 1, 1).even());
}

TEST_CASE("smoothstep") {
    CHECK(smoothstep(-1.0) == 0.0);
    CHECK(smoothstep(1.0) == 1.0);
    CHECK(smoothstep(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    boost::math::quadrature::tanh_sinh<double> ts;
    double mass = ts.integrate([](double t) { return bump_kernel(t); }, -1.0, 1.0);
    for (double t : {-0.9, -0.5, -0.1, 0.3, 0.77, 0.99}) {
        double part = ts.integrate([](double u) { return bump_kernel(u); }, -1.0, t);
        CHECK(smoothstep(t) == doctest::Approx(part / mass).epsilon(1e-13));
        CHECK(smoothstep(t) + smoothstep(-t) == doctest::Approx(1.0).epsilon(1e-15));
    }
}

TEST_CASE("bump derivatives against finite differences") {
    auto f = TestFunction::bump(0.3, 1.4, 2.0);
    auto box = TestFunction::smoothed_box(-0.7, 0.4, 0.25);
    for (const auto& g : {f, box}) {
        for (double x : {-0.8, -0.5, 0.1, 0.35, 0.9}) {
            auto d = g.derivs(x, 5);
            auto dp = g.derivs(x + 1e-6, 5);
            auto dm = g.derivs(x - 1e-6, 5);
            CHECK(d[0] == doctest::Approx(g(x)).epsilon(1e-13));
            for (int k = 1; k <= 5; ++k) {
                double fd = (dp[k - 1] - dm[k - 1]) / 2e-6;
                CHECK(d[k] == doctest::Approx(fd).epsilon(1e-5).scale(std::abs(d[k - 1]) + 1.0));
            }
        }
    }
}

TEST_CASE("expectation_power") {
    auto b = TestFunction::bump(0, 1, 1);
    double v = expectation_power(b, 1);
    boost::math::quadrature::tanh_sinh<double> ts;
    double o1 = ts.integrate([&](double x) { return b(x); }, -1.0, 1.0);
    double o2 = boost::math::quadrature::gauss_kronrod<double, 61>::integrate([&](double x) { return b(x); }, -1.0,
                                                                               1.0, 15, 1e-14);
    CHECK(std::abs(o1 - o2) < 1e-10);
    CHECK(std::abs(v - o1) < 1e-10);
    CHECK(v == doctest::Approx(0.443994).epsilon(1e-6));

    // Box with a vanishing mollifier has unit mass.
    auto thin = TestFunction::smoothed_box(-0.5, 0.5, 1e-7);
    CHECK(std::abs(expectation_power(thin, 1) - 1.0) < 1e-10);

    for (const auto& f : {b, TestFunction::smoothed_box(-0.5, 0.5, 0.1), TestFunction::bump(0.4, 0.3, 0.9)}) {
        auto s = f.support();
        double tr = trapezoid(f, 2, s.lo, s.hi, 20000);
        CHECK(std::abs(expectation_power(f, 2) - tr) < 1e-9);
    }
}

TEST_CASE("expectation_power decreases in j for 0 <= f <= 1") {
    for (const auto& f : {TestFunction::bump(0, 1, 1), TestFunction::smoothed_box(-0.5, 0.5, 0.1),
                          TestFunction::bump(1, 2, 2.5)}) {
        double prev = expectation_power(f, 1);
        for (int j = 2; j <= 6; ++j) {
            double cur = expectation_power(f, j);
            CHECK(cur < prev);
            prev = cur;
        }
    }
}

TEST_CASE("fourier_f") {
    auto b = TestFunction::bump(0, 1, 1);
    auto f0 = fourier_f(b, 0.0);
    CHECK(std::abs(f0.real() - expectation_power(b, 1)) < 1e-12);
    for (double xi : {0.3, 1.0, 2.7, 11.0}) {
        CHECK(std::abs(fourier_f(b, xi).imag()) < 1e-12);
    }
    double w = 2.0 * std::numbers::pi;
    double re = gauss_panels([&](double x) { return b(x) * std::cos(w * x); }, -1.0, 1.0, 64);
    double im = gauss_panels([&](double x) { return -b(x) * std::sin(w * x); }, -1.0, 1.0, 64);
    auto v = fourier_f(b, 1.0);
    CHECK(std::abs(v.real() - re) < 1e-9);
    CHECK(std::abs(v.imag() - im) < 1e-9);

    auto g = TestFunction::bump(0.37, 0.8, 1.2);
    double l1 = expectation_power(g, 1);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-30.0, 30.0);
    for (int i = 0; i < 40; ++i) {
        double xi = u(rng);
        auto gv = fourier_f(g, xi);
        CHECK(std::abs(gv) <= l1 + 1e-12);
        double wr = gauss_panels([&](double x) { return g(x) * std::cos(2 * std::numbers::pi * xi * x); }, -0.43,
                                 1.17, 128);
        CHECK(std::abs(gv.real() - wr) < 1e-10);
    }
}

TEST_CASE("FourierCache reproduces direct evaluation") {
    auto g = TestFunction::smoothed_box(-0.5, 0.5, 0.2);
    FourierCache cache(g, -3.0, 3.0);
    for (double xi = -3.0; xi <= 3.0; xi += 0.0917) {
        CHECK(std::abs(cache(xi) - fourier_f(g, xi)) < 1e-11);
    }
}

TEST_CASE("construct_F") {
    auto b = TestFunction::bump(0, 1, 1);
    CHECK(construct_F(b, {0.0}) == doctest::Approx(expectation_power(b, 2)).epsilon(1e-11));
    CHECK(construct_F(b, {0.0, 0.0}) == doctest::Approx(expectation_power(b, 3)).epsilon(1e-11));
    CHECK(construct_F(b, {3.0}) == 0.0);

    // Direct convolution on a fine grid.
    double conv = 0.0;
    const int n = 200000;
    const double h = 2.0 / n;
    for (int i = 1; i < n; ++i) {
        double s = -1.0 + i * h;
        conv += b(s) * b(s + 0.5);
    }
    conv *= h;
    CHECK(std::abs(construct_F(b, {0.5}) - conv) < 1e-9);

    // Evenness: F(z) = F(-z) for m = 2.
    for (double z : {0.1, 0.7, 1.3}) {
        CHECK(construct_F(b, {z}) == doctest::Approx(construct_F(b, {-z})).epsilon(1e-12));
    }

    // m = 3 against an explicit product integral.
    std::vector<double> z{0.3, -0.2};
    boost::math::quadrature::tanh_sinh<double> ts;
    double ref = ts.integrate([&](double s) { return b(s) * b(0.1 + s) * b(-0.2 + s); }, -1.0, 1.0);
    CHECK(construct_F(b, z) == doctest::Approx(ref).epsilon(1e-10));
}
