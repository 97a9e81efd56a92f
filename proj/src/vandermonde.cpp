#include "seqstat/vandermonde.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>
#include <random>

#include "seqstat/error.hpp"

namespace seqstat {

namespace {

using big = boost::multiprecision::cpp_bin_float_50;
constexpr double kCondLimit = 1e12;
constexpr int kMaxGvdm = 12;
constexpr int kMaxDeriv = 8;

template <class T>
using Mat = std::vector<std::vector<T>>;

template <class T>
T lu_det(Mat<T> a) {
    using std::abs;
    const std::size_t n = a.size();
    T det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < n; ++r) {
            if (abs(a[r][c]) > abs(a[p][c])) {
                p = r;
            }
        }
        if (a[p][c] == 0) {
            return T(0);
        }
        if (p != c) {
            std::swap(a[p], a[c]);
            det = -det;
        }
        det *= a[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            T f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k) {
                a[r][k] -= f * a[c][k];
            }
        }
    }
    return det;
}

// Gauss-Jordan with partial pivoting; false when singular.
template <class T>
bool gj_inverse(Mat<T> a, Mat<T>& inv) {
    using std::abs;
    const std::size_t n = a.size();
    inv.assign(n, std::vector<T>(n, T(0)));
    for (std::size_t i = 0; i < n; ++i) {
        inv[i][i] = 1;
    }
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < n; ++r) {
            if (abs(a[r][c]) > abs(a[p][c])) {
                p = r;
            }
        }
        if (a[p][c] == 0) {
            return false;
        }
        std::swap(a[p], a[c]);
        std::swap(inv[p], inv[c]);
        T d = a[c][c];
        for (std::size_t k = 0; k < n; ++k) {
            a[c][k] /= d;
            inv[c][k] /= d;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || a[r][c] == 0) {
                continue;
            }
            T f = a[r][c];
            for (std::size_t k = 0; k < n; ++k) {
                a[r][k] -= f * a[c][k];
                inv[r][k] -= f * inv[c][k];
            }
        }
    }
    return true;
}

template <class T>
T norm1(const Mat<T>& a) {
    using std::abs;
    T best = 0;
    for (std::size_t c = 0; c < a.size(); ++c) {
        T s = 0;
        for (std::size_t r = 0; r < a.size(); ++r) {
            s += abs(a[r][c]);
        }
        best = std::max(best, s);
    }
    return best;
}

template <class T>
Mat<T> gvdm_matrix(const std::vector<double>& u, const std::vector<double>& n) {
    using std::pow;
    const std::size_t M = u.size();
    Mat<T> a(M, std::vector<T>(M));
    for (std::size_t i = 0; i < M; ++i) {
        for (std::size_t j = 0; j < M; ++j) {
            a[i][j] = pow(T(u[i]), T(n[j]));
        }
    }
    return a;
}

template <class T>
double condition_of(const Mat<T>& a) {
    Mat<T> inv;
    if (!gj_inverse(a, inv)) {
        return INFINITY;
    }
    return static_cast<double>(norm1(a) * norm1(inv));
}

void check_gvdm_args(const std::vector<double>& u, const std::vector<double>& n) {
    if (u.size() != n.size() || u.empty()) {
        throw DomainError("gvdm: u and n must have the same nonzero length");
    }
    if (u.size() > static_cast<std::size_t>(kMaxGvdm)) {
        throw DomainError("gvdm: at most 12 nodes");
    }
    for (double x : u) {
        if (!(x > 0.0)) {
            throw DomainError("gvdm: nodes must be positive");
        }
    }
}

big gvdm_det_big(const std::vector<double>& u, const std::vector<double>& n) {
    auto a = gvdm_matrix<long double>(u, n);
    if (condition_of(a) <= kCondLimit) {
        return big(lu_det(a));
    }
    return lu_det(gvdm_matrix<big>(u, n));
}

// Matrix in long double, determinant escalated like gvdm_det.
big det_escalated(const Mat<long double>& a) {
    if (condition_of(a) <= kCondLimit) {
        return big(lu_det(a));
    }
    Mat<big> b(a.size(), std::vector<big>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < a.size(); ++j) {
            b[i][j] = big(a[i][j]);
        }
    }
    return lu_det(b);
}

Mat<long double> deriv_matrix_ld(const PhaseDerivativeSystem& sys) {
    const int m = sys.m();
    Mat<long double> M(m, std::vector<long double>(m));
    for (int j = 1; j <= m; ++j) {
        PPolynomial P = p_polynomial(j);
        for (int i = 0; i < m; ++i) {
            M[i][j - 1] = P(static_cast<long double>(sys.h[i]) + sys.s, sys.A);
        }
    }
    return M;
}

}

double gvdm_det(const std::vector<double>& u, const std::vector<double>& n) {
    check_gvdm_args(u, n);
    return static_cast<double>(gvdm_det_big(u, n));
}

double gvdm_condition(const std::vector<double>& u, const std::vector<double>& n) {
    check_gvdm_args(u, n);
    return condition_of(gvdm_matrix<long double>(u, n));
}

double kt_ratio(const std::vector<double>& u, const std::vector<double>& n) {
    check_gvdm_args(u, n);
    for (std::size_t i = 1; i < u.size(); ++i) {
        if (!(u[i] > u[i - 1])) {
            throw DomainError("kt_ratio: nodes must be strictly increasing");
        }
        if (!(n[i] > n[i - 1])) {
            throw DomainError("kt_ratio: exponents must be strictly increasing");
        }
    }
    big det = gvdm_det_big(u, n);
    big denom = 1;
    for (std::size_t i = 0; i < u.size(); ++i) {
        for (std::size_t j = i + 1; j < u.size(); ++j) {
            denom *= big(u[j]) - big(u[i]);
        }
        denom *= pow(big(u[i]), big(n[i]) - big(static_cast<double>(i)));
    }
    double ratio = static_cast<double>(det / denom);
    if (!(ratio > 0.0)) {
        throw PrecisionError("kt_ratio: non-positive ratio, determinant lost to rounding");
    }
    return ratio;
}

std::vector<ExponentBox> kt_default_boxes() {
    return {
        {"M2", {0.0, 1.0}, {0.5, 2.5}, 1.0, 4.0},
        {"M3", {-0.3, 0.7, 1.7}, {0.3, 1.3, 2.3}, 0.5, 2.0},
        {"M4", {0.0, 1.5, 3.0, 4.5}, {0.5, 2.0, 3.5, 5.0}, 1.0, 3.0},
    };
}

KTStats kt_sample(const ExponentBox& box, int samples, std::uint64_t seed) {
    const std::size_t M = box.n_lo.size();
    if (M == 0 || box.n_hi.size() != M || !(box.u_hi > box.u_lo) || !(box.u_lo > 0.0)) {
        throw DomainError("kt_sample: malformed box");
    }
    for (std::size_t i = 1; i < M; ++i) {
        if (!(box.n_lo[i] > box.n_hi[i - 1])) {
            throw DomainError("kt_sample: exponent ranges must be ordered and disjoint");
        }
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    KTStats st;
    st.box = box.name;
    st.min_ratio = INFINITY;
    st.max_ratio = -INFINITY;
    std::vector<double> u(M), n(M);
    for (int k = 0; k < samples; ++k) {
        for (;;) {
            for (std::size_t i = 0; i < M; ++i) {
                u[i] = box.u_lo + (box.u_hi - box.u_lo) * uni(rng);
            }
            std::sort(u.begin(), u.end());
            bool distinct = true;
            for (std::size_t i = 1; i < M; ++i) {
                distinct = distinct && u[i] > u[i - 1];
            }
            if (distinct) {
                break;
            }
        }
        for (std::size_t i = 0; i < M; ++i) {
            n[i] = box.n_lo[i] + (box.n_hi[i] - box.n_lo[i]) * uni(rng);
        }
        double r = kt_ratio(u, n);
        ++st.samples;
        st.positive += r > 0.0 ? 1 : 0;
        st.min_ratio = std::min(st.min_ratio, r);
        st.max_ratio = std::max(st.max_ratio, r);
    }
    return st;
}

void PhaseDerivativeSystem::validate() const {
    if (h.empty() || r.size() != h.size()) {
        throw DomainError("derivative system: h and r must have the same nonzero length");
    }
    if (h.size() > static_cast<std::size_t>(kMaxDeriv)) {
        throw DomainError("derivative system: m <= 8");
    }
    if (!(A > 1.0)) {
        throw DomainError("derivative system: need A > 1");
    }
    if (!(s >= 0.0 && s <= 1.0)) {
        throw DomainError("derivative system: s must lie in [0,1]");
    }
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (h[i] <= 0) {
            throw DomainError("derivative system: h must be positive");
        }
        if (r[i] == 0) {
            throw DomainError("derivative system: r must be nonzero");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (h[i] == h[j]) {
                throw DomainError("derivative system: h must be pairwise distinct");
            }
        }
    }
}

std::vector<double> PhaseDerivativeSystem::b() const {
    std::vector<double> out(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) {
        out[i] = static_cast<double>(r[i]) * std::exp(std::pow(static_cast<double>(h[i]) + s, 1.0 / A));
    }
    return out;
}

double PTerm::coefficient(double A) const {
    const long double a = 1.0L / A;
    long double v = 0.0L;
    for (std::size_t i = poly.size(); i-- > 0;) {
        v = v * a + static_cast<long double>(poly[i]);
    }
    return static_cast<double>(v);
}

long double PPolynomial::operator()(long double x, double A) const {
    long double v = 0.0L;
    for (const PTerm& t : terms) {
        const long double a = 1.0L / A;
        long double c = 0.0L;
        for (std::size_t i = t.poly.size(); i-- > 0;) {
            c = c * a + static_cast<long double>(t.poly[i]);
        }
        v += c * std::pow(x, t.t * a - j);
    }
    return v;
}

PPolynomial p_polynomial(int j) {
    if (j < 1 || j > 20) {
        throw DomainError("p_polynomial: need 1 <= j <= 20");
    }
    PPolynomial P;
    P.j = 1;
    P.terms = {PTerm{1, {0, 1}}};
    while (P.j < j) {
        std::vector<PTerm> next;
        auto add = [&next](int t, const std::vector<long long>& poly) {
            for (PTerm& e : next) {
                if (e.t == t) {
                    if (e.poly.size() < poly.size()) {
                        e.poly.resize(poly.size(), 0);
                    }
                    for (std::size_t i = 0; i < poly.size(); ++i) {
                        e.poly[i] += poly[i];
                    }
                    return;
                }
            }
            next.push_back(PTerm{t, poly});
        };
        for (const PTerm& term : P.terms) {
            // d/dx c x^{t a - j} = c (t a - j) x^{t a - (j+1)}.
            std::vector<long long> d(term.poly.size() + 1, 0);
            for (std::size_t i = 0; i < term.poly.size(); ++i) {
                d[i + 1] += term.t * term.poly[i];
                d[i] -= static_cast<long long>(P.j) * term.poly[i];
            }
            add(term.t, d);
            // c x^{t a - j} * a x^{a - 1} = c a x^{(t+1) a - (j+1)}.
            std::vector<long long> g(term.poly.size() + 1, 0);
            for (std::size_t i = 0; i < term.poly.size(); ++i) {
                g[i + 1] = term.poly[i];
            }
            add(term.t + 1, g);
        }
        std::sort(next.begin(), next.end(), [](const PTerm& x, const PTerm& y) { return x.t < y.t; });
        for (PTerm& e : next) {
            while (!e.poly.empty() && e.poly.back() == 0) {
                e.poly.pop_back();
            }
        }
        std::erase_if(next, [](const PTerm& e) { return e.poly.empty(); });
        P.terms = std::move(next);
        ++P.j;
    }
    return P;
}

PPolynomial p_polynomials(const PhaseDerivativeSystem& sys, int j) {
    if (j < 1 || j > sys.m()) {
        throw DomainError("p_polynomials: need 1 <= j <= m");
    }
    return p_polynomial(j);
}

Matrix deriv_matrix(const PhaseDerivativeSystem& sys) {
    sys.validate();
    auto M = deriv_matrix_ld(sys);
    Matrix out(M.size(), std::vector<double>(M.size()));
    for (std::size_t i = 0; i < M.size(); ++i) {
        for (std::size_t j = 0; j < M.size(); ++j) {
            out[i][j] = static_cast<double>(M[i][j]);
        }
    }
    return out;
}

std::vector<double> d_vector(const PhaseDerivativeSystem& sys) {
    sys.validate();
    auto M = deriv_matrix_ld(sys);
    auto b = sys.b();
    std::vector<double> D(M.size());
    for (std::size_t j = 0; j < M.size(); ++j) {
        long double acc = 0.0L;
        for (std::size_t i = 0; i < M.size(); ++i) {
            acc += static_cast<long double>(b[i]) * M[i][j];
        }
        D[j] = static_cast<double>(acc);
    }
    return D;
}

DetMReport detM_leading(const PhaseDerivativeSystem& sys) {
    sys.validate();
    const int m = sys.m();
    const double A = sys.A;
    DetMReport rep;
    big det = det_escalated(deriv_matrix_ld(sys));
    std::vector<double> x(m), n(m);
    for (int i = 0; i < m; ++i) {
        x[i] = static_cast<double>(sys.h[i]) + sys.s;
    }
    for (int j = 1; j <= m; ++j) {
        n[j - 1] = j / A - j;
    }
    const big c = pow(big(A), -big(m * (m + 1) / 2));
    big lead = c * gvdm_det_big(x, n);
    big prod = c;
    for (int j = 0; j < m; ++j) {
        const int jj = j + 1;
        prod *= pow(big(x[j]), big(jj / A - 2.0 * jj + 1.0));
        for (int i = 0; i < j; ++i) {
            prod *= abs(big(sys.h[i]) - big(sys.h[j]));
        }
    }
    rep.det = static_cast<double>(det);
    rep.leading = static_cast<double>(lead);
    rep.ratio = static_cast<double>(det / lead);
    rep.product_form = static_cast<double>(prod);
    rep.product_ratio = static_cast<double>(abs(det) / prod);
    return rep;
}

double matrix_det(const Matrix& M) {
    Mat<long double> a(M.size(), std::vector<long double>(M.size()));
    for (std::size_t i = 0; i < M.size(); ++i) {
        for (std::size_t j = 0; j < M.size(); ++j) {
            a[i][j] = M[i][j];
        }
    }
    return static_cast<double>(det_escalated(a));
}

Matrix matrix_inverse(const Matrix& M) {
    Mat<big> a(M.size(), std::vector<big>(M.size()));
    for (std::size_t i = 0; i < M.size(); ++i) {
        for (std::size_t j = 0; j < M.size(); ++j) {
            a[i][j] = M[i][j];
        }
    }
    Mat<big> inv;
    if (!gj_inverse(a, inv)) {
        throw DomainError("matrix_inverse: singular matrix");
    }
    Matrix out(M.size(), std::vector<double>(M.size()));
    for (std::size_t i = 0; i < M.size(); ++i) {
        for (std::size_t j = 0; j < M.size(); ++j) {
            out[i][j] = static_cast<double>(inv[i][j]);
        }
    }
    return out;
}

double spectral_norm(const Matrix& M, int max_iter) {
    const std::size_t n = M.size();
    if (n == 0) {
        return 0.0;
    }
    // Scale out the magnitude so M^T M stays finite.
    long double scale = 0.0L;
    for (const auto& row : M) {
        for (double v : row) {
            scale = std::max(scale, std::abs(static_cast<long double>(v)));
        }
    }
    if (scale == 0.0L) {
        return 0.0;
    }
    std::vector<long double> v(n), w(n), z(n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = 1.0L + 0.01L * static_cast<long double>(i);
    }
    long double sigma2 = 0.0L;
    for (int it = 0; it < max_iter; ++it) {
        long double nv = 0.0L;
        for (long double x : v) {
            nv += x * x;
        }
        nv = std::sqrt(nv);
        for (long double& x : v) {
            x /= nv;
        }
        for (std::size_t i = 0; i < n; ++i) {
            long double acc = 0.0L;
            for (std::size_t j = 0; j < n; ++j) {
                acc += (M[i][j] / scale) * v[j];
            }
            w[i] = acc;
        }
        for (std::size_t j = 0; j < n; ++j) {
            long double acc = 0.0L;
            for (std::size_t i = 0; i < n; ++i) {
                acc += (M[i][j] / scale) * w[i];
            }
            z[j] = acc;
        }
        long double nz = 0.0L;
        for (long double x : z) {
            nz += x * x;
        }
        nz = std::sqrt(nz);
        const bool done = it > 0 && std::abs(nz - sigma2) <= 1e-17L * nz;
        sigma2 = nz;
        v = z;
        if (done) {
            break;
        }
    }
    return static_cast<double>(std::sqrt(sigma2) * scale);
}

DNormReport d_norm_lower_bound(const PhaseDerivativeSystem& sys) {
    sys.validate();
    Matrix M = deriv_matrix(sys);
    if (matrix_det(M) == 0.0) {
        throw DomainError("d_norm_lower_bound: singular derivative matrix");
    }
    Matrix inv = matrix_inverse(M);
    DNormReport rep;
    auto D = d_vector(sys);
    auto b = sys.b();
    long double nd = 0.0L, nb = 0.0L;
    for (double x : D) {
        nd += static_cast<long double>(x) * x;
    }
    for (double x : b) {
        nb += static_cast<long double>(x) * x;
    }
    rep.norm_D = static_cast<double>(std::sqrt(nd));
    rep.inv_norm = spectral_norm(inv);
    rep.lower_bound = static_cast<double>(std::sqrt(nb)) / rep.inv_norm;
    // Power iteration approaches the top singular value from below, so allow
    // a rounding margin on the bound.
    rep.holds = rep.norm_D >= rep.lower_bound * (1.0 - 1e-9);
    return rep;
}

}
