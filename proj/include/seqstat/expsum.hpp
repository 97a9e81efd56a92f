#ifndef SEQSTAT_EXPSUM_HPP
#define SEQSTAT_EXPSUM_HPP

#include <complex>
#include <memory>
#include <string>
#include <vector>

#include "seqstat/sequences.hpp"
#include "seqstat/testfn.hpp"
#include "seqstat/windows.hpp"

namespace seqstat {

using cplx = std::complex<double>;

enum class Variant { Exact, B, BB };
std::string variant_name(Variant v);

struct SmoothedSumResult {
    int q = 0, u = 0;
    std::vector<double> s_grid;
    std::vector<cplx> values;
    Variant variant = Variant::Exact;
};

// x_{k,r} = omega_tilde(r/k).
double stationary_x(const PhaseModel& model, double k, double r);
// phi(k,r) = k omega(x_{k,r}) - r x_{k,r}.
double phase_phi(const PhaseModel& model, double k, double r);
// d/dk phi and d^2/dk^2 phi in closed form.
double phase_phi_dk(const PhaseModel& model, double k, double r);
double phase_phi_dkk(const PhaseModel& model, double k, double r);
// mu = r / omega'(omega^{-1}(h - s)).
double mu_of(const PhaseModel& model, double h, double r, double s);

// Default work limit for exact_sum, in (n, k) pairs.
inline constexpr double kExactBudget = 2.5e10;

// Evaluates E_{q,u}, E^(B)_{q,u} and E^(BB)_{q,u} for one (model, windows,
// f, N). f-hat is interpolated once per (q,u) k-range.
class ExpSumEngine {
public:
    ExpSumEngine(const PhaseModel& model, const DyadicWindows& windows, const TestFunction& f, double N);

    const PhaseModel& model() const { return model_; }
    const DyadicWindows& windows() const { return win_; }
    double N() const { return N_; }

    // Direct double sum. Throws BudgetError above `budget` (n,k) pairs.
    std::vector<cplx> exact(int q, int u, const std::vector<double>& s, double budget = kExactBudget) const;
    std::vector<cplx> b_process(int q, int u, const std::vector<double>& s) const;
    std::vector<cplx> bb_process(int q, int u, const std::vector<double>& s) const;
    SmoothedSumResult run(Variant v, int q, int u, const std::vector<double>& s) const;

    // Inner sums for one k > 0: sum_n N_q(n) e(k omega(n)) directly, and
    // the stationary-point sum e(-1/8) sum_r N_q(x)/sqrt|k omega''| e(phi).
    cplx inner_exact(int q, long k) const;
    cplx inner_b(int q, double k) const;
    // Poisson-side check: sum_r int N_q(x) e(k omega(x) - r x) dx by
    // quadrature, over every r whose integrand is not negligible.
    cplx inner_poisson(int q, double k) const;

    // Number of (n,k) pairs exact() would touch.
    double exact_cost(int q, int u) const;

private:
    std::vector<cplx> k_sum(int q, int u, const std::vector<double>& s, bool stationary) const;
    const FourierCache& fhat_cache(int u) const;

    PhaseModel model_;
    DyadicWindows win_;
    TestFunction f_;
    double N_;
    mutable std::vector<std::unique_ptr<FourierCache>> caches_;
};

cplx exact_sum(const PhaseModel& model, const DyadicWindows& w, const TestFunction& f, int q, int u, double N,
               double s);
cplx b_sum(const PhaseModel& model, const DyadicWindows& w, const TestFunction& f, int q, int u, double N,
           double s);
cplx bb_sum(const PhaseModel& model, const DyadicWindows& w, const TestFunction& f, int q, int u, double N,
            double s);

std::vector<double> uniform_grid(int G);
double lp_norm(const std::vector<cplx>& v, double p);
double lp_distance(const std::vector<cplx>& a, const std::vector<cplx>& b, double p);

struct NormReport {
    int q = 0, u = 0, G = 0;
    double p = 2.0;
    double norm_exact = 0.0, norm_b = 0.0, norm_bb = 0.0;
    double exact_minus_b = 0.0, b_minus_bb = 0.0, exact_minus_bb = 0.0;
    double ratio_exact_b() const { return norm_exact > 0.0 ? exact_minus_b / norm_exact : 0.0; }
    double ratio_b_bb() const { return norm_exact > 0.0 ? b_minus_bb / norm_exact : 0.0; }
};

NormReport compare_variants(const ExpSumEngine& engine, int q, int u, const std::vector<double>& s_grid, double p,
                            std::vector<cplx>* exact_out = nullptr, std::vector<cplx>* b_out = nullptr,
                            std::vector<cplx>* bb_out = nullptr);

// Scale parameters of the two stationary-phase applications and whether
// the side conditions hold at this (q,u,N).
struct ConditionReport {
    int q = 0, u = 0, Q = 0, m = 2;
    double A = 0.0, N = 0.0, delta = 1.0 / 11.0;
    bool non_degenerate = false;
    bool has_stationary_points = false;
    // First B-process (in n).
    double b1_Lambda_psi = 0, b1_Omega_psi = 0, b1_Omega_w = 0, b1_Lambda_w = 1, b1_Z = 0;
    bool b1_lambda_ok = false, b1_omega_ok = false;
    // Second B-process (in k).
    double b2_Lambda_psi = 0, b2_Omega_psi = 0, b2_Omega_w = 0, b2_Lambda_w = 0, b2_Z = 0;
    bool b2_lambda_ok = false, b2_omega_ok = false;
};

ConditionReport condition_report(const PhaseModel& model, int q, int u, double N, int m = 2);

// (q,u) is degenerate when |u| < q^{(A-1)/2} or q <= Q/(m+1).
bool is_non_degenerate(const PhaseModel& model, int q, int u, int Q, int m);
// u >= q - (A-1) log q - 10 A.
bool has_stationary_regime(const PhaseModel& model, int q, int u);

}

#endif
