#include "seqstat/windows.hpp"

#include <algorithm>
#include <cmath>

#include "seqstat/error.hpp"

namespace seqstat {

DyadicWindows::DyadicWindows(int Q, int U) : Q_(Q), U_(U) {
    if (Q < 2) {
        throw DomainError("windows: need Q >= 2");
    }
    if (U < 0) {
        throw DomainError("windows: need U >= 0");
    }
    const double e = std::exp(1.0);
    nz_.push_back({0.5, 2.0 / e});
    for (int q = 1; q < Q; ++q) {
        nz_.push_back({std::exp(q) / 2.0, 2.0 * std::exp(q - 1)});
    }
    const double eQ = std::exp(Q);
    const double h = eQ / (2.0 * Q);
    for (int i = 0; i <= Q; ++i) {
        nz_.push_back({eQ / 2.0 + i * h, eQ / 2.0 + (i + 1) * h});
    }
    kz_.push_back({0.5, 2.0 / e});
    for (int u = 1; u <= U + 1; ++u) {
        kz_.push_back({std::exp(u) / 2.0, 2.0 * std::exp(u - 1)});
    }
}

DyadicWindows DyadicWindows::for_N(double N) {
    if (!(N >= std::exp(2.0))) {
        throw DomainError("windows: need N >= e^2");
    }
    int Q = static_cast<int>(std::floor(std::log(N) + 1e-12));
    int U = static_cast<int>(std::ceil(std::log(N) - 1e-12));
    return DyadicWindows(Q, U);
}

double DyadicWindows::rise(const Interval& z, double x) {
    return smoothstep(2.0 * (x - z.lo) / (z.hi - z.lo) - 1.0);
}

double DyadicWindows::rise_deriv(const Interval& z, double x) {
    double t = 2.0 * (x - z.lo) / (z.hi - z.lo) - 1.0;
    return bump_kernel(t) / bump_kernel_mass() * 2.0 / (z.hi - z.lo);
}

double DyadicWindows::window(const std::vector<Interval>& zones, int j, double x) {
    const Interval& up = zones[j];
    const Interval& down = zones[j + 1];
    if (x <= up.lo || x >= down.hi) {
        return 0.0;
    }
    if (x < up.hi) {
        return rise(up, x);
    }
    if (x > down.lo) {
        return 1.0 - rise(down, x);
    }
    return 1.0;
}

double DyadicWindows::window_deriv(const std::vector<Interval>& zones, int j, double x) {
    const Interval& up = zones[j];
    const Interval& down = zones[j + 1];
    if (x <= up.lo || x >= down.hi) {
        return 0.0;
    }
    if (x < up.hi) {
        return rise_deriv(up, x);
    }
    if (x > down.lo) {
        return -rise_deriv(down, x);
    }
    return 0.0;
}

double DyadicWindows::n_window(int q, double x) const {
    if (q < 0 || q >= 2 * Q_) {
        throw DomainError("n_window: q out of range");
    }
    return window(nz_, q, x);
}

double DyadicWindows::n_window_deriv(int q, double x) const {
    if (q < 0 || q >= 2 * Q_) {
        throw DomainError("n_window: q out of range");
    }
    return window_deriv(nz_, q, x);
}

Interval DyadicWindows::n_support(int q) const {
    if (q < 0 || q >= 2 * Q_) {
        throw DomainError("n_window: q out of range");
    }
    return {nz_[q].lo, nz_[q + 1].hi};
}

double DyadicWindows::n_transition(int q) const {
    return std::min(nz_[q].width(), nz_[q + 1].width());
}

double DyadicWindows::k_base(int u, double k) const {
    return window(kz_, u, k);
}

double DyadicWindows::k_base_deriv(int u, double k) const {
    return window_deriv(kz_, u, k);
}

double DyadicWindows::k_window(int u, double k) const {
    if (u < -U_ || u > U_) {
        throw DomainError("k_window: u out of range");
    }
    if (u == 0) {
        return k_base(0, std::abs(k));
    }
    if (u > 0) {
        return k > 0.0 ? k_base(u, k) : 0.0;
    }
    return k < 0.0 ? k_base(-u, -k) : 0.0;
}

double DyadicWindows::k_window_deriv(int u, double k) const {
    if (u < -U_ || u > U_) {
        throw DomainError("k_window: u out of range");
    }
    if (u == 0) {
        return k >= 0.0 ? k_base_deriv(0, k) : -k_base_deriv(0, -k);
    }
    if (u > 0) {
        return k > 0.0 ? k_base_deriv(u, k) : 0.0;
    }
    return k < 0.0 ? -k_base_deriv(-u, -k) : 0.0;
}

Interval DyadicWindows::k_base_support(int u) const {
    int a = std::abs(u);
    if (a > U_) {
        throw DomainError("k_window: u out of range");
    }
    return {kz_[a].lo, kz_[a + 1].hi};
}

}
