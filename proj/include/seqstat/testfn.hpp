#ifndef SEQSTAT_TESTFN_HPP
#define SEQSTAT_TESTFN_HPP

#include <complex>
#include <string>
#include <vector>

namespace seqstat {

// exp(-1/(1-t^2)) on (-1,1), zero elsewhere.
double bump_kernel(double t);

// Derivatives 0..n of bump_kernel at t.
std::vector<double> bump_kernel_derivs(double t, int n);

// Integral of bump_kernel over (-1,1).
double bump_kernel_mass();

// Normalized antiderivative of bump_kernel: 0 for t <= -1, 1 for t >= 1,
// C-infinity in between, smoothstep(-t) = 1 - smoothstep(t).
double smoothstep(double t);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double width() const { return hi - lo; }
    bool contains(double x) const { return x >= lo && x <= hi; }
};

enum class Shape { Bump, SmoothedBox };

// Bump(center, halfwidth, height): height * bump_kernel((x-center)/halfwidth).
// SmoothedBox(left, right, mollify): indicator of [left,right] convolved with
// a unit-mass bump of halfwidth `mollify`.
class TestFunction {
public:
    static TestFunction bump(double center, double halfwidth, double height);
    static TestFunction smoothed_box(double left, double right, double mollify);

    // Descriptor syntax: "bump:c,w,h" or "box:l,r,delta".
    static TestFunction parse(const std::string& desc);
    std::string describe() const;

    Shape shape() const { return shape_; }
    double operator()(double x) const;
    // Derivatives 0..n at x.
    std::vector<double> derivs(double x, int n) const;
    Interval support() const;
    bool even() const;
    // Points where the function is not locally analytic (support edges and
    // transition-zone edges). Useful as forced quadrature breaks.
    std::vector<double> breakpoints() const;
    double sup() const;

    double p0 = 0.0, p1 = 0.0, p2 = 0.0;

private:
    Shape shape_ = Shape::Bump;
};

double eval_f(const TestFunction& f, double x);

// int f^j dx, adaptive Simpson, absolute tolerance 1e-12.
double expectation_power(const TestFunction& f, int j);

// int f(x) e(-x xi) dx.
std::complex<double> fourier_f(const TestFunction& f, double xi);

// F(z) = int prod_{j=1..m} f_j(Z_j + s) ds with Z_j = z_j + ... + z_{m-1}
// and Z_m = 0. fs has m entries, z has m-1.
double construct_F(const std::vector<TestFunction>& fs, const std::vector<double>& z);
double construct_F(const TestFunction& f, const std::vector<double>& z);

// Chebyshev interpolant of f-hat on [a,b], refined until the interpolation
// error at check points is below tol.
class FourierCache {
public:
    FourierCache(const TestFunction& f, double a, double b, double tol = 1e-12);
    std::complex<double> operator()(double xi) const;
    double lo() const { return a_; }
    double hi() const { return b_; }
    int degree() const { return static_cast<int>(re_.size()) - 1; }

private:
    double a_, b_;
    std::vector<double> re_, im_;
    TestFunction f_;
};

}

#endif
