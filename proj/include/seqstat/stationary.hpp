#ifndef SEQSTAT_STATIONARY_HPP
#define SEQSTAT_STATIONARY_HPP

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "seqstat/testfn.hpp"

namespace seqstat {

// A smooth amplitude. `derivs(x, n)` returns w, w', ..., w^(n) at x; when
// absent, derivatives come from nested central differences with step `h`.
struct WindowRecord {
    std::function<double(double)> value;
    std::function<std::vector<double>(double, int)> derivs;
    Interval support;
    double Omega = 1.0; // length scale
    double Lambda = 1.0; // size
    double h = 1e-3;
};

// A smooth phase with the same conventions as WindowRecord.
struct PhaseRecord {
    std::function<double(double)> value;
    std::function<std::vector<double>(double, int)> derivs;
    double Omega = 1.0;
    double Lambda = 1.0;
    double h = 1e-3;
};

WindowRecord window_from(const TestFunction& f);

// Sum_{j <= order} of the stationary-phase terms for int w e(psi):
//   e(psi(x0)) / sqrt|psi''(x0)| * sum_j p_j(x0),
//   p_j = e(sgn/8) / j! * (i / (4 pi psi''(x0)))^j * G^(2j)(x0),
//   G = w e(H), H = psi - psi(x0) - psi''(x0) (x - x0)^2 / 2,
// with sgn the sign of psi''. Throws DomainError when psi' has no zero in
// the support of w.
std::complex<double> stationary_phase(const WindowRecord& w, const PhaseRecord& psi, int order);

// The critical point of psi inside w's support (bisection on psi').
double critical_point(const WindowRecord& w, const PhaseRecord& psi);

// (|w(b)| + int_a^b |w'|) * Lambda^{-1/j}.
double vdc_bound(const PhaseRecord& psi, const WindowRecord& w, int j, double Lambda);

// Calibration constants C_j with |int w e(psi)| <= C_j * vdc_bound.
double vdc_constant(int j);

// Direct oscillatory quadrature of int_a^b w e(psi) over panels short
// enough that the phase moves by at most `max_turn` per panel; `freq`
// bounds |psi'| on [a,b].
std::complex<double> oscillatory_integral(const std::function<double(double)>& w,
                                          const std::function<double(double)>& psi, double a, double b,
                                          double freq, double max_turn = 0.25);

}

#endif
