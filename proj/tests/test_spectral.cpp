#include <doctest.h>

#include <cmath>
#include <numbers>

#include "membrane/spectral.hpp"

using namespace membrane;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("roots satisfy the transcendental equation and branch quadratics") {
    const auto roots = eigen_roots(20);
    REQUIRE(roots.size() == 20);
    for (const SpectralRoot& r : roots) {
        CHECK(std::fabs(std::fabs(std::sin(3 * r.t)) - 2 * std::fabs(std::sin(5 * r.t))) <= 1e-12);
        if (r.multiplicity == 1) {
            // t in pi*Z comes from the common sin t factor, not the quadratics
            const double beta = 4 * std::cos(2 * r.t);
            const double lhs = beta * beta + 2 * beta - 4;
            const double rhs = r.branch == QuadraticBranch::Plus ? beta + 2 : -(beta + 2);
            CHECK(lhs == doctest::Approx(rhs).scale(1.0).epsilon(1e-11));
        }
        CHECK(r.sqrt_lambda == doctest::Approx(6 * r.t / kPi).epsilon(1e-14));
        CHECK(r.lambda == doctest::Approx(r.sqrt_lambda * r.sqrt_lambda).epsilon(1e-14));
    }
    for (std::size_t i = 0; i + 1 < roots.size(); ++i)
        CHECK(roots[i].t < roots[i + 1].t);
}

TEST_CASE("nine roots per period, multiplicity two exactly at t in pi Z") {
    const auto roots = eigen_roots(19);
    int in_first_period = 0;
    for (const SpectralRoot& r : roots)
        if (r.t < kPi) ++in_first_period;
    CHECK(in_first_period == 9);
    for (const SpectralRoot& r : roots) {
        const bool integer_t = std::fabs(std::remainder(r.t, kPi)) < 1e-12;
        CHECK(r.multiplicity == (integer_t ? 2 : 1));
    }
    // the known list
    CHECK(roots[0].t == doctest::Approx(0.0));
    CHECK(roots[1].t == doctest::Approx(kPi / 6).epsilon(1e-12));
    CHECK(roots[1].sqrt_lambda == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(roots[2].sqrt_lambda == doctest::Approx(1.3654948248550427).epsilon(1e-12));
    CHECK(roots[3].sqrt_lambda == doctest::Approx(2.309839631512152).epsilon(1e-12));
    CHECK(roots[4].sqrt_lambda == doctest::Approx(2.5487011486197937).epsilon(1e-12));
    // the bracket printed for the next eigenvalue after 1 matches the fifth
    CHECK(roots[3].sqrt_lambda > 2.0);
    CHECK(roots[3].sqrt_lambda < 12.0 / 5.0);
}

TEST_CASE("root symmetry: t and pi - t appear together") {
    const auto roots = eigen_roots(9);
    for (const SpectralRoot& r : roots) {
        if (r.t == 0.0) continue;
        bool found = false;
        for (const SpectralRoot& s : roots)
            if (std::fabs(s.t - (kPi - r.t)) < 1e-10) found = true;
        CHECK(found);
    }
}

TEST_CASE("asymptotic density: count(sqrt_lambda <= L) ~ (5/3) L") {
    const auto roots = eigen_roots(60);
    for (double L = 5; L <= 20; L += 1.0) {
        int count = 0;
        for (const SpectralRoot& r : roots)
            if (r.sqrt_lambda <= L) count += r.multiplicity;
        CHECK(std::fabs(count - (5.0 / 3.0) * L) <= 2.0);
    }
}

TEST_CASE("alpha0 closed form and its identities") {
    // closed form 0.3654948...; quoted elsewhere with only two stable digits
    // after 0.3654, hence the loose second check
    CHECK(alpha0() == doctest::Approx(0.3654948248550427).epsilon(1e-13));
    CHECK(std::fabs(alpha0() - 0.365575) <= 1e-4);
    CHECK(std::fabs(std::cos(kPi / 3 * (1 + alpha0())) - (std::sqrt(17.0) - 3) / 8) <= 1e-12);
    const auto roots = eigen_roots(3);
    CHECK(1 + alpha0() == doctest::Approx(roots[2].sqrt_lambda).epsilon(1e-13));

    // brute-force bisection oracle on |sin 3t| - 2|sin 5t| around the root
    double lo = 0.6, hi = 0.8;
    auto f = [](double t) { return std::fabs(std::sin(3 * t)) - 2 * std::fabs(std::sin(5 * t)); };
    REQUIRE(f(lo) * f(hi) < 0);
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (f(lo) * f(mid) <= 0 ? hi : lo) = mid;
    }
    CHECK(roots[2].t == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-12));
}

TEST_CASE("matching residuals vanish for listed eigenpairs and not otherwise") {
    const auto roots = eigen_roots(3);
    const SpectralRoot lam3 = roots[1];
    CHECK(lam3.mu1 == doctest::Approx(1.0));
    CHECK(lam3.mu3 == doctest::Approx(-1.0).epsilon(1e-12));
    const MatchingResiduals r3 = matching_check(lam3);
    CHECK(r3.derivative_left <= 1e-12);
    CHECK(r3.derivative_right <= 1e-12);
    CHECK(r3.flux <= 1e-12);

    const SpectralRoot lam4 = roots[2];
    CHECK(lam4.mu3 == doctest::Approx(1.0).epsilon(1e-12));
    const MatchingResiduals r4 = matching_check(lam4);
    CHECK(r4.derivative_left <= 1e-12);
    CHECK(r4.derivative_right <= 1e-12);
    CHECK(r4.flux <= 1e-12);

    SpectralRoot off = lam3;
    off.mu3 = -1.1;
    const MatchingResiduals rb = matching_check(off);
    CHECK(rb.derivative_left > 1e-3);
}

TEST_CASE("q_energy on simple candidates") {
    const int m = 200;
    std::vector<double> zero(m, 0.0), one(m, 1.0);
    CHECK(q_energy(one, zero, 1.0) == doctest::Approx(0.5 * q_norm(one, zero, 1.0) * q_norm(one, zero, 1.0)).epsilon(1e-10));

    // eigenpair for lambda_3 = 1 with p = 1: Q = sqrt(lambda) * <W, W>
    const SectorGeometry geo;
    std::vector<double> w1(m), w3(m);
    for (int j = 0; j < m; ++j) {
        const double th1 = -geo.b + (geo.a + geo.b) * j / double(m - 1);
        const double th3 = -geo.a + (geo.a + geo.b) * j / double(m - 1);
        w1[j] = std::cos(th1 + geo.b);
        w3[j] = -std::cos(th3 - geo.b);
    }
    const double n2 = q_norm(w1, w3, 1.0) * q_norm(w1, w3, 1.0);
    CHECK(q_energy(w1, w3, 1.0) == doctest::Approx(n2).epsilon(5e-3));

    // equal fields on the overlap: the coupling term contributes nothing there
    CHECK(q_energy(one, one, 1.0) > 0.0);
    CHECK_THROWS(q_energy(one, one, 0.0));
    CHECK_THROWS(q_energy({1.0}, one, 1.0));
}

TEST_CASE("discrete eigenvalues match the analytic list") {
    CHECK(rayleigh_eigen(1, 256) == doctest::Approx(0.0).scale(1.0).epsilon(1e-8));
    CHECK(rayleigh_eigen(2, 256) == doctest::Approx(0.0).scale(1.0).epsilon(1e-8));
    CHECK(rayleigh_eigen(3, 256) == doctest::Approx(1.0).epsilon(2e-4));
    const double lam4 = (1 + alpha0()) * (1 + alpha0());
    CHECK(rayleigh_eigen(4, 256) == doctest::Approx(lam4).epsilon(2e-3));
    CHECK_THROWS(rayleigh_eigen(0, 256));
    CHECK_THROWS(rayleigh_eigen(3, 32));
}

TEST_CASE("discrete eigenvalue convergence order is at least 1.8") {
    const double exact = 1.0 + alpha0();
    const double lam = exact * exact;
    const double e128 = std::fabs(rayleigh_eigen(4, 128) - lam);
    const double e512 = std::fabs(rayleigh_eigen(4, 512) - lam);
    REQUIRE(e512 > 0);
    const double order = std::log2(e128 / e512) / 2.0;
    CHECK(order >= 1.8);
}

TEST_CASE("spectrum table expands multiplicity and indexes from one") {
    const auto rows = spectrum_table(4);
    REQUIRE(rows.size() >= 5);
    CHECK(rows[0].k == 1);
    CHECK(rows[0].lambda == 0.0);
    CHECK(rows[1].lambda == 0.0);
    CHECK(rows[2].sqrt_lambda == doctest::Approx(1.0));
    CHECK(rows[3].sqrt_lambda == doctest::Approx(1.3654948248550427).epsilon(1e-12));
}
