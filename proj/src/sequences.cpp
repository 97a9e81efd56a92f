#include "seqstat/sequences.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "seqstat/error.hpp"

namespace seqstat {

SequenceSpec SequenceSpec::log_power(double alpha, double A, Precision p) {
    SequenceSpec s;
    s.family = Family::LogPower;
    s.alpha = alpha;
    s.A = A;
    s.precision = p;
    s.validate();
    return s;
}

SequenceSpec SequenceSpec::monomial(double alpha, double theta, Precision p) {
    SequenceSpec s;
    s.family = Family::Monomial;
    s.alpha = alpha;
    s.theta = theta;
    s.precision = p;
    s.validate();
    return s;
}

SequenceSpec SequenceSpec::log_base(double b, Precision p) {
    SequenceSpec s;
    s.family = Family::LogBase;
    s.base = b;
    s.precision = p;
    s.validate();
    return s;
}

SequenceSpec SequenceSpec::equispaced(double period) {
    SequenceSpec s;
    s.family = Family::Equispaced;
    s.period = period;
    s.validate();
    return s;
}

void SequenceSpec::validate() const {
    switch (family) {
    case Family::LogPower:
        // A <= 1 is allowed for statistics-only contrast runs (A = 1 is the
        // plain log n baseline); PhaseModel enforces A > 1.
        if (!(alpha > 0.0) || !(A > 0.0) || !std::isfinite(alpha) || !std::isfinite(A)) {
            throw DomainError("logpow: need alpha > 0 and A > 0");
        }
        break;
    case Family::Monomial:
        if (!(alpha > 0.0) || !(theta > 0.0 && theta < 1.0)) {
            throw DomainError("monomial: need alpha > 0 and 0 < theta < 1");
        }
        break;
    case Family::LogBase:
        if (!(base > 1.0) || !std::isfinite(base)) {
            throw DomainError("logbase: need b > 1");
        }
        break;
    case Family::Equispaced:
        if (!(period > 0.0)) {
            throw DomainError("equispaced: need period > 0");
        }
        break;
    }
}

std::string SequenceSpec::describe() const {
    std::ostringstream os;
    os.precision(17);
    switch (family) {
    case Family::LogPower:
        os << "logpow(alpha=" << alpha << ",A=" << A << ")";
        break;
    case Family::Monomial:
        os << "monomial(alpha=" << alpha << ",theta=" << theta << ")";
        break;
    case Family::LogBase:
        os << "logbase(b=" << base << ")";
        break;
    case Family::Equispaced:
        os << "equispaced(period=" << period << ")";
        break;
    }
    if (precision == Precision::Compensated) {
        os << "[compensated]";
    }
    return os.str();
}

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr long double kEpsL = std::numeric_limits<long double>::epsilon();

double frac_of(double v) {
    double f = v - std::floor(v);
    return f >= 1.0 ? 0.0 : f;
}

OmegaValue eval_double(const SequenceSpec& spec, double n) {
    OmegaValue out;
    switch (spec.family) {
    case Family::LogPower: {
        double L = std::log(n);
        double p = spec.A == 2.0 ? L * L : std::pow(L, spec.A);
        out.value = spec.alpha * p;
        // log: 1 ulp, amplified by A through the power; pow and the alpha
        // product add about 1 ulp each.
        out.error = (spec.A + 2.0) * kEps * std::abs(out.value);
        break;
    }
    case Family::Monomial:
        out.value = spec.alpha * std::pow(n, spec.theta);
        out.error = 3.0 * kEps * std::abs(out.value);
        break;
    case Family::LogBase:
        out.value = std::log(n) / std::log(spec.base);
        out.error = 3.0 * kEps * std::abs(out.value);
        break;
    case Family::Equispaced:
        out.value = n / spec.period;
        out.error = kEps * std::abs(out.value);
        break;
    }
    out.frac = frac_of(out.value);
    return out;
}

// Integer powers of a double-double, by squaring.
dd dd_pow(dd x, unsigned k) {
    dd r{1.0, 0.0};
    while (k) {
        if (k & 1u) {
            r = r * x;
        }
        x = x * x;
        k >>= 1u;
    }
    return r;
}

OmegaValue eval_compensated(const SequenceSpec& spec, double n) {
    OmegaValue out;
    long double nl = n;
    dd w;
    long double rel = 0.0L;
    switch (spec.family) {
    case Family::LogPower: {
        long double L = std::log(nl);
        dd Ld = dd_from(L);
        double Ai = std::round(spec.A);
        if (Ai == spec.A && Ai >= 1.0 && Ai <= 64.0) {
            w = dd_pow(Ld, static_cast<unsigned>(Ai)) * spec.alpha;
            rel = (spec.A + 1.0L) * kEpsL + 4.0L * spec.A * 0x1p-104L;
        } else {
            long double p = std::pow(L, static_cast<long double>(spec.A));
            w = dd_from(p) * spec.alpha;
            rel = (spec.A + 3.0L) * kEpsL;
        }
        break;
    }
    case Family::Monomial: {
        long double p = std::pow(nl, static_cast<long double>(spec.theta));
        w = dd_from(p) * spec.alpha;
        rel = 4.0L * kEpsL;
        break;
    }
    case Family::LogBase: {
        long double p = std::log(nl) / std::log(static_cast<long double>(spec.base));
        w = dd_from(p);
        rel = 4.0L * kEpsL;
        break;
    }
    case Family::Equispaced: {
        long double p = nl / static_cast<long double>(spec.period);
        w = dd_from(p);
        rel = kEpsL;
        break;
    }
    }
    out.value = w.hi + w.lo;
    out.frac = dd_frac(w);
    out.error = static_cast<double>(rel * std::abs(to_ld(w))) + 0x1p-53 * 0x1p-53;
    return out;
}

}

OmegaValue eval_omega_ext(const SequenceSpec& spec, double n) {
    if (!(n >= 1.0)) {
        throw DomainError("eval_omega: n must be >= 1");
    }
    return spec.precision == Precision::Compensated ? eval_compensated(spec, n) : eval_double(spec, n);
}

double eval_omega(const SequenceSpec& spec, double n) {
    return eval_omega_ext(spec, n).value;
}

double eval_frac(const SequenceSpec& spec, std::uint64_t n) {
    return eval_omega_ext(spec, static_cast<double>(n)).frac;
}

PhaseModel::PhaseModel(const SequenceSpec& s, double tol) : spec(s), root_tol(tol) {
    spec.validate();
    if (spec.family != Family::LogPower) {
        throw DomainError("phase model: only the logpow family supports B-process operations");
    }
    if (!(spec.A > 1.0)) {
        throw DomainError("phase model: need A > 1");
    }
}

double PhaseModel::omega(double x) const {
    if (!(x >= 1.0)) {
        throw DomainError("omega: x must be >= 1");
    }
    return spec.alpha * std::pow(std::log(x), spec.A);
}

double PhaseModel::deriv(int j, double x) const {
    if (!(x > 1.0)) {
        throw DomainError("omega_deriv: x must be > 1");
    }
    if (j < 0 || j > 8) {
        throw DomainError("omega_deriv: order must be in 0..8");
    }
    // The j-th derivative is x^{-j} * sum_a c[a] L^{A-a}. Differentiating
    // x^{-j} L^e gives x^{-j-1} (e L^{e-1} - j L^e).
    std::vector<double> c{spec.alpha};
    for (int d = 0; d < j; ++d) {
        std::vector<double> next(c.size() + 1, 0.0);
        for (std::size_t a = 0; a < c.size(); ++a) {
            double e = spec.A - static_cast<double>(a);
            next[a + 1] += c[a] * e;
            next[a] -= c[a] * d;
        }
        c = std::move(next);
    }
    double L = std::log(x);
    double sum = 0.0;
    for (std::size_t a = c.size(); a-- > 0;) {
        if (c[a] != 0.0) {
            sum += c[a] * std::pow(L, spec.A - static_cast<double>(a));
        }
    }
    return sum * std::pow(x, -static_cast<double>(j));
}

double PhaseModel::omega_prime_max() const {
    double t = spec.A - 1.0;
    return spec.alpha * spec.A * std::pow(t, t) * std::exp(-t);
}

double omega_deriv(const PhaseModel& model, int j, double x) {
    if (j < 1 || j > 4) {
        throw DomainError("omega_deriv: j must be in 1..4");
    }
    return model.deriv(j, x);
}

namespace {

// In t = log x the equation omega'(x) = y reads g(t) = log y with
// g(t) = log(alpha A) + (A-1) log t - t, decreasing for t > A-1.
struct TildeEq {
    double c0, Am1, target;
    double g(double t) const { return c0 + Am1 * std::log(t) - t - target; }
    double dg(double t) const { return Am1 / t - 1.0; }
};

double newton_polish(const TildeEq& eq, double t, double lo, double hi, double tol) {
    for (int it = 0; it < 60; ++it) {
        double v = eq.g(t);
        if (v > 0.0) {
            lo = std::max(lo, t);
        } else {
            hi = std::min(hi, t);
        }
        double step = v / eq.dg(t);
        double tn = t - step;
        if (!(tn > lo && tn < hi)) {
            tn = 0.5 * (lo + hi);
        }
        if (std::abs(tn - t) <= tol * std::max(1.0, std::abs(tn))) {
            return tn;
        }
        t = tn;
    }
    return t;
}

}

double omega_tilde(const PhaseModel& model, double y) {
    if (!(y > 0.0) || !std::isfinite(y)) {
        throw DomainError("omega_tilde: need y > 0");
    }
    const double Am1 = model.spec.A - 1.0;
    TildeEq eq{std::log(model.spec.alpha * model.spec.A), Am1, std::log(y)};
    double lo = Am1;
    if (!(eq.g(lo) > 0.0)) {
        throw DomainError("omega_tilde: y is not below the maximum of omega' on the branch");
    }
    // x_hi doubling is t_hi += log 2.
    double hi = lo + std::log(2.0);
    int guard = 0;
    while (eq.g(hi) > 0.0) {
        lo = hi;
        hi += std::log(2.0) * (1 << std::min(guard, 10));
        if (++guard > 4000) {
            throw DomainError("omega_tilde: no bracket");
        }
    }
    for (int it = 0; it < 8; ++it) {
        double mid = 0.5 * (lo + hi);
        (eq.g(mid) > 0.0 ? lo : hi) = mid;
    }
    double t = newton_polish(eq, 0.5 * (lo + hi), lo, hi, 1e-3 * model.root_tol);
    return std::exp(t);
}

double omega_tilde(const PhaseModel& model, double y, double x_guess) {
    const double Am1 = model.spec.A - 1.0;
    if (!(y > 0.0) || !(x_guess > std::exp(Am1))) {
        return omega_tilde(model, y);
    }
    TildeEq eq{std::log(model.spec.alpha * model.spec.A), Am1, std::log(y)};
    double t = std::log(x_guess);
    for (int it = 0; it < 20; ++it) {
        double tn = t - eq.g(t) / eq.dg(t);
        if (!(tn > Am1) || !std::isfinite(tn)) {
            return omega_tilde(model, y);
        }
        if (std::abs(tn - t) <= 1e-3 * model.root_tol * std::max(1.0, std::abs(tn))) {
            return std::exp(tn);
        }
        t = tn;
    }
    return omega_tilde(model, y);
}

double omega_inv(const PhaseModel& model, double y) {
    if (!(y > 0.0)) {
        throw DomainError("omega_inv: need y > 0");
    }
    return std::exp(std::pow(y / model.spec.alpha, 1.0 / model.spec.A));
}

}
