#include "doctest.h"
#include "oracles.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "seqstat/error.hpp"
#include "seqstat/sequences.hpp"

using namespace seqstat;

TEST_CASE("eval_omega at e") {
    auto s = SequenceSpec::log_power(1.0, 2.0);
    CHECK(eval_omega(s, std::numbers::e) == doctest::Approx(1.0).epsilon(1e-15));
    auto s3 = SequenceSpec::log_power(2.5, 3.0);
    CHECK(eval_omega(s3, std::numbers::e) == doctest::Approx(2.5).epsilon(1e-15));
    CHECK_THROWS_AS(eval_omega(s, 0.5), DomainError);
}

TEST_CASE("eval_omega and eval_frac against 256-bit oracle") {
    for (auto prec : {Precision::Double, Precision::Compensated}) {
        auto s = SequenceSpec::log_power(1.0, 2.0, prec);
        for (double n : {1e5, 12345.0, 9999991.0}) {
            auto ref = oracle::log_power(1.0, 2.0, n);
            CHECK(std::abs(eval_omega(s, n) - static_cast<double>(ref)) < 1e-10);
            CHECK(std::abs(eval_frac(s, static_cast<std::uint64_t>(n)) - oracle::frac_of(ref)) < 1e-10);
        }
    }
}

TEST_CASE("compensated mode tracks the oracle far below double rounding") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::uint64_t> pick(2, 100'000'000);
    for (double A : {2.0, 3.0, 2.5}) {
        auto s = SequenceSpec::log_power(1.3, A, Precision::Compensated);
        for (int i = 0; i < 200; ++i) {
            double n = static_cast<double>(pick(rng));
            auto v = eval_omega_ext(s, n);
            double f_ref = oracle::frac_of(oracle::log_power(1.3, A, n));
            double d = std::abs(v.frac - f_ref);
            d = std::min(d, 1.0 - d);
            CHECK(d <= v.error + 1e-16);
            CHECK(v.error < 1e-12);
        }
    }
}

TEST_CASE("double mode error estimate covers the actual error") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::uint64_t> pick(2, 10'000'000);
    auto s = SequenceSpec::log_power(1.0, 3.0);
    for (int i = 0; i < 300; ++i) {
        double n = static_cast<double>(pick(rng));
        auto v = eval_omega_ext(s, n);
        double ref = static_cast<double>(oracle::log_power(1.0, 3.0, n));
        CHECK(std::abs(v.value - ref) <= v.error);
    }
}

TEST_CASE("eval_frac basics") {
    auto s = SequenceSpec::log_power(1.0, 2.0);
    CHECK(eval_frac(s, 1) == 0.0);
    double l3 = std::log(3.0);
    CHECK(eval_frac(s, 3) == doctest::Approx(l3 * l3 - std::floor(l3 * l3)).epsilon(1e-15));
    auto eq = SequenceSpec::equispaced(10.0);
    CHECK(eval_frac(eq, 3) == doctest::Approx(0.3));
    CHECK(eval_frac(eq, 10) == 0.0);
}

TEST_CASE("family validation") {
    CHECK_THROWS_AS(SequenceSpec::log_power(0.0, 2.0), DomainError);
    CHECK_THROWS_AS(SequenceSpec::monomial(1.0, 1.5), DomainError);
    CHECK_THROWS_AS(SequenceSpec::log_base(1.0), DomainError);
    CHECK_THROWS_AS(PhaseModel(SequenceSpec::monomial(1.0, 0.5)), DomainError);
    CHECK_THROWS_AS(PhaseModel(SequenceSpec::log_base(2.0)), DomainError);
    CHECK_THROWS_AS(PhaseModel(SequenceSpec::log_power(1.0, 1.0)), DomainError);
    CHECK(eval_omega(SequenceSpec::log_base(10.0), 1000.0) == doctest::Approx(3.0));
    CHECK(eval_omega(SequenceSpec::monomial(2.0, 0.5), 16.0) == doctest::Approx(8.0));
}

TEST_CASE("omega_deriv closed forms") {
    PhaseModel m(SequenceSpec::log_power(1.0, 2.0));
    double e = std::numbers::e;
    CHECK(omega_deriv(m, 1, e * e) == doctest::Approx(4.0 / (e * e)).epsilon(1e-14));
    PhaseModel m3(SequenceSpec::log_power(1.0, 3.0));
    CHECK(omega_deriv(m3, 1, e) == doctest::Approx(3.0 / e).epsilon(1e-14));
    CHECK_THROWS_AS(omega_deriv(m, 1, 1.0), DomainError);
    CHECK_THROWS_AS(omega_deriv(m, 5, 10.0), DomainError);
}

TEST_CASE("omega_deriv matches finite differences of the previous order") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> lx(std::log(10.0), std::log(1e6));
    for (double A : {1.5, 2.0, 3.0}) {
        PhaseModel m(SequenceSpec::log_power(1.7, A));
        for (int i = 0; i < 50; ++i) {
            double x = std::exp(lx(rng));
            for (int j = 1; j <= 4; ++j) {
                double h = 1e-4 * x;
                double fd = (m.deriv(j - 1, x + h) - m.deriv(j - 1, x - h)) / (2 * h);
                CHECK(omega_deriv(m, j, x) == doctest::Approx(fd).epsilon(1e-6));
            }
        }
    }
}

TEST_CASE("omega' is strictly decreasing past e^{A-1}") {
    for (double A : {1.5, 2.0, 3.0, 4.0}) {
        PhaseModel m(SequenceSpec::log_power(1.0, A));
        double prev = m.deriv(1, std::exp(A - 1.0) * 1.0001);
        for (double lx = A - 1.0 + 0.01; lx < 25.0; lx += 0.05) {
            double cur = m.deriv(1, std::exp(lx));
            CHECK(cur < prev);
            prev = cur;
        }
        CHECK(m.omega_prime_max() == doctest::Approx(m.deriv(1, std::exp(A - 1.0))).epsilon(1e-13));
    }
}

TEST_CASE("omega_tilde inverts omega'") {
    PhaseModel m(SequenceSpec::log_power(1.0, 2.0));
    for (double x0 : {10.0, 1e3, 1e6}) {
        CHECK(omega_tilde(m, omega_deriv(m, 1, x0)) == doctest::Approx(x0).epsilon(1e-12));
    }
    CHECK(omega_tilde(m, 2.0 * std::log(100.0) / 100.0) == doctest::Approx(100.0).epsilon(1e-12));

    std::mt19937_64 rng(5);
    for (double A : {1.5, 2.0, 3.0}) {
        PhaseModel mA(SequenceSpec::log_power(0.8, A));
        double ymax = mA.omega_prime_max();
        std::uniform_real_distribution<double> ly(std::log(ymax) - 25.0, std::log(ymax) - 1e-3);
        for (int i = 0; i < 200; ++i) {
            double y = std::exp(ly(rng));
            double x = omega_tilde(mA, y);
            CHECK(x > std::exp(A - 1.0));
            CHECK(omega_deriv(mA, 1, x) == doctest::Approx(y).epsilon(1e-12));
            CHECK(omega_tilde(mA, y, x * 1.3) == doctest::Approx(x).epsilon(1e-12));
        }
        CHECK_THROWS_AS(omega_tilde(mA, ymax * 1.01), DomainError);
    }
    CHECK_THROWS_AS(omega_tilde(m, -1.0), DomainError);
}

TEST_CASE("omega_inv") {
    PhaseModel m(SequenceSpec::log_power(1.0, 2.0));
    CHECK(omega_inv(m, 1.0) == doctest::Approx(std::numbers::e).epsilon(1e-15));
    PhaseModel m3(SequenceSpec::log_power(1.0, 3.0));
    CHECK(omega_inv(m3, 8.0) == doctest::Approx(std::exp(2.0)).epsilon(1e-14));
    for (double n : {10.0, 1e5}) {
        CHECK(omega_inv(m, eval_omega(m.spec, n)) == doctest::Approx(n).epsilon(1e-12));
    }
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> lx(std::log(2.0), std::log(1e9));
    PhaseModel mg(SequenceSpec::log_power(2.2, 2.7));
    for (int i = 0; i < 300; ++i) {
        double x = std::exp(lx(rng));
        CHECK(omega_inv(mg, mg.omega(x)) == doctest::Approx(x).epsilon(1e-12));
    }
    CHECK_THROWS_AS(omega_inv(m, 0.0), DomainError);
}
