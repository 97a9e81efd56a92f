#ifndef SEQSTAT_WINDOWS_HPP
#define SEQSTAT_WINDOWS_HPP

#include <vector>

#include "seqstat/testfn.hpp"

namespace seqstat {

// Smooth partitions of unity in n (windows N_q, 0 <= q < 2Q) and in k
// (windows K_u, -U <= u <= U).
//
// Each family is described by a sorted list of transition zones; window j
// rises across zone j and falls across zone j+1, using the same smoothstep
// in both places so neighbouring windows sum to one exactly.
//
// n-zones: [1/2, 2/e], then [e^q/2, 2e^{q-1}] for 1 <= q < Q, then Q+1
// equal zones of width e^Q/(2Q) covering [e^Q/2, e^Q + e^Q/(2Q)].
// So supp N_q = [e^q/2, 2e^q) for q < Q-1, N_{Q-1} falls on the first
// equal zone, and the tail windows N_{Q+i} live on [t_i, t_{i+2}] with
// t_i = e^Q/2 + i e^Q/(2Q).
//
// k-zones: [1/2, 2/e], then [e^u/2, 2e^{u-1}] for 1 <= u <= U+1. The base
// window b_u has support [e^u/2, 2e^u); K_0(k) = b_0(|k|) and, for u > 0,
// K_u(k) = b_u(k) for k > 0 and K_{-u}(k) = b_u(-k).
class DyadicWindows {
public:
    DyadicWindows(int Q, int U);
    // Q from e^Q <= N < e^{Q+1}, U = ceil(log N).
    static DyadicWindows for_N(double N);

    int Q() const { return Q_; }
    int U() const { return U_; }
    int num_n_windows() const { return 2 * Q_; }

    double n_window(int q, double x) const;
    double n_window_deriv(int q, double x) const;
    Interval n_support(int q) const;
    // Width of the narrower of the two transition zones of N_q.
    double n_transition(int q) const;

    double k_window(int u, double k) const;
    double k_window_deriv(int u, double k) const;
    // Support on the positive axis of the base window b_|u|.
    Interval k_base_support(int u) const;

    const std::vector<Interval>& n_zones() const { return nz_; }
    const std::vector<Interval>& k_zones() const { return kz_; }

private:
    static double rise(const Interval& z, double x);
    static double rise_deriv(const Interval& z, double x);
    static double window(const std::vector<Interval>& zones, int j, double x);
    static double window_deriv(const std::vector<Interval>& zones, int j, double x);
    double k_base(int u, double k) const;
    double k_base_deriv(int u, double k) const;

    int Q_, U_;
    std::vector<Interval> nz_, kz_;
};

}

#endif
