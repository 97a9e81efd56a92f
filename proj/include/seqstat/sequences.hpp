#ifndef SEQSTAT_SEQUENCES_HPP
#define SEQSTAT_SEQUENCES_HPP

#include <cstdint>
#include <string>

#include "seqstat/dd.hpp"

namespace seqstat {

enum class Family { LogPower, Monomial, LogBase, Equispaced };
enum class Precision { Double, Compensated };

// omega(n) for one of:
//   LogPower    alpha (log n)^A
//   Monomial    alpha n^theta
//   LogBase     log n / log b
//   Equispaced  n / period   (diagnostic only)
struct SequenceSpec {
    Family family = Family::LogPower;
    double alpha = 1.0;
    double A = 2.0;
    double theta = 0.5;
    double base = 2.0;
    double period = 1.0;
    Precision precision = Precision::Double;

    static SequenceSpec log_power(double alpha, double A, Precision p = Precision::Double);
    static SequenceSpec monomial(double alpha, double theta, Precision p = Precision::Double);
    static SequenceSpec log_base(double b, Precision p = Precision::Double);
    static SequenceSpec equispaced(double period);

    // Throws DomainError when the parameters are outside the family's range.
    void validate() const;
    std::string describe() const;
};

// Largest N accepted for sample generation in Double mode.
inline constexpr std::uint64_t kDoubleModeCap = 10'000'000;

struct OmegaValue {
    double value = 0.0;
    double frac = 0.0;
    double error = 0.0; // absolute error bound estimate for value (and frac)
};

double eval_omega(const SequenceSpec& spec, double n);

// Same as eval_omega but also returns frac and an error estimate. In
// Compensated mode the log/power chain is carried in double-double.
OmegaValue eval_omega_ext(const SequenceSpec& spec, double n);

double eval_frac(const SequenceSpec& spec, std::uint64_t n);

// The smooth phase x -> alpha (log x)^A on x > 1, with the inverse maps used
// by the B-process. Only LogPower specs are accepted.
struct PhaseModel {
    SequenceSpec spec;
    double root_tol = 1e-13;

    explicit PhaseModel(const SequenceSpec& s, double tol = 1e-13);

    double omega(double x) const;
    double deriv(int j, double x) const;
    // Maximum of omega' over the branch x > e^{A-1}; attained at x = e^{A-1}.
    double omega_prime_max() const;
};

double omega_deriv(const PhaseModel& model, int j, double x);

// x > e^{A-1} with omega'(x) = y.
double omega_tilde(const PhaseModel& model, double y);

// Newton from a nearby guess, falling back to the bracketed solver.
double omega_tilde(const PhaseModel& model, double y, double x_guess);

// x with omega(x) = y, x > 1.
double omega_inv(const PhaseModel& model, double y);

}

#endif
