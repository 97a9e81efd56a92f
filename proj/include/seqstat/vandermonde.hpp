#ifndef SEQSTAT_VANDERMONDE_HPP
#define SEQSTAT_VANDERMONDE_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace seqstat {

using Matrix = std::vector<std::vector<double>>;

// det(u_i^{n_j}) by partial-pivoted LU in long double, redone with 50-digit
// arithmetic when the 1-norm condition estimate exceeds 1e12. M <= 12.
double gvdm_det(const std::vector<double>& u, const std::vector<double>& n);

// 1-norm condition estimate of (u_i^{n_j}) in long double.
double gvdm_condition(const std::vector<double>& u, const std::vector<double>& n);

// det(u^{n}) / (V(u) prod_i u_i^{n_i - (i-1)}) for strictly increasing u > 0
// and n. Throws DomainError on ties, PrecisionError if the ratio comes out
// non-positive.
double kt_ratio(const std::vector<double>& u, const std::vector<double>& n);

// Coordinate box of exponents, nodes drawn uniformly from [u_lo, u_hi].
struct ExponentBox {
    std::string name;
    std::vector<double> n_lo, n_hi;
    double u_lo = 1.0, u_hi = 2.0;
};

struct KTStats {
    std::string box;
    int samples = 0;
    int positive = 0;
    double min_ratio = 0.0, max_ratio = 0.0;
};

std::vector<ExponentBox> kt_default_boxes();
KTStats kt_sample(const ExponentBox& box, int samples, std::uint64_t seed);

// h pairwise distinct positive integers, r nonzero integers, s in [0,1],
// A > 1. b_i = r_i exp((h_i + s)^{1/A}).
struct PhaseDerivativeSystem {
    std::vector<long> h;
    std::vector<long> r;
    double s = 0.0;
    double A = 2.0;

    int m() const { return static_cast<int>(h.size()); }
    void validate() const;
    std::vector<double> b() const;
};

// One term c (x)^{t/A - j} of P_j, x = h + s. The coefficient is a
// polynomial in a = 1/A with integer coefficients, poly[i] * a^i.
struct PTerm {
    int t = 1;
    std::vector<long long> poly;
    double coefficient(double A) const;
};

struct PPolynomial {
    int j = 1;
    std::vector<PTerm> terms; // sorted by t
    long double operator()(long double x, double A) const;
};

// P_1 = (1/A) x^{1/A-1}, P_{j+1} = P_j' + P_j (1/A) x^{1/A-1}, so that
// d^j/ds^j exp((h+s)^{1/A}) = exp((h+s)^{1/A}) P_j(h+s).
PPolynomial p_polynomial(int j);
PPolynomial p_polynomials(const PhaseDerivativeSystem& sys, int j);

// (M)_{ij} = P_j(h_i + s), m <= 8.
Matrix deriv_matrix(const PhaseDerivativeSystem& sys);

// D = b M, the first m derivatives in s of sum_i r_i exp((h_i + s)^{1/A}).
std::vector<double> d_vector(const PhaseDerivativeSystem& sys);

struct DetMReport {
    double det = 0.0;
    // A^{-m(m+1)/2} det((h_i+s)^{j/A - j}): the top-degree part of every P_j.
    double leading = 0.0;
    double ratio = 0.0;
    // A^{-m(m+1)/2} prod_j (h_j+s)^{j/A-2j+1} prod_{i<j} |h_i - h_j|.
    double product_form = 0.0;
    double product_ratio = 0.0;
};

DetMReport detM_leading(const PhaseDerivativeSystem& sys);

double matrix_det(const Matrix& M);
Matrix matrix_inverse(const Matrix& M);
// Largest singular value by power iteration on M^T M.
double spectral_norm(const Matrix& M, int max_iter = 500);

struct DNormReport {
    double norm_D = 0.0;
    double inv_norm = 0.0;
    double lower_bound = 0.0;
    bool holds = false;
};

// ||D||_2 against ||b||_2 / ||M^{-1}||_2. Throws DomainError when M is
// singular.
DNormReport d_norm_lower_bound(const PhaseDerivativeSystem& sys);

}

#endif
