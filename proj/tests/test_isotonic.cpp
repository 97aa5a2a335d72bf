#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "membrane/isotonic.hpp"

using namespace membrane;

namespace {

double dist2(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return s;
}

// Exact oracle: the projection is piecewise constant on consecutive blocks
// with nonincreasing block means, so enumerate all 2^(N-1) block partitions
// and keep the feasible candidate closest to v.
std::vector<double> brute_force_project(const std::vector<double>& v) {
    const int n = int(v.size());
    std::vector<double> best;
    double best_d = 0;
    for (int cuts = 0; cuts < (1 << (n - 1)); ++cuts) {
        std::vector<double> cand(n);
        int start = 0;
        double prev_mean = 0;
        bool feasible = true;
        for (int i = 0; i < n; ++i) {
            const bool block_ends = i == n - 1 || (cuts >> i) & 1;
            if (!block_ends) continue;
            double mean = 0;
            for (int j = start; j <= i; ++j) mean += v[j];
            mean /= (i - start + 1);
            if (start > 0 && mean > prev_mean) {
                feasible = false;
                break;
            }
            for (int j = start; j <= i; ++j) cand[j] = mean;
            prev_mean = mean;
            start = i + 1;
        }
        if (!feasible) continue;
        const double d = dist2(cand, v);
        if (best.empty() || d < best_d) {
            best = cand;
            best_d = d;
        }
    }
    return best;
}

}  // namespace

TEST_CASE("projection matches the brute-force oracle (250 cases, N <= 5)") {
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> unif(-2.0, 2.0);
    std::uniform_int_distribution<int> size(2, 5);
    for (int trial = 0; trial < 250; ++trial) {
        std::vector<double> v(size(rng));
        for (double& x : v) x = unif(rng);
        const auto got = isotonic_project(v);
        const auto want = brute_force_project(v);
        for (std::size_t i = 0; i < v.size(); ++i)
            CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-12));
    }
}

TEST_CASE("projection output is nonincreasing and idempotent") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> v(2 + trial % 7);
        for (double& x : v) x = unif(rng);
        const auto p = isotonic_project(v);
        for (std::size_t i = 0; i + 1 < p.size(); ++i)
            CHECK(p[i] >= p[i + 1] - 1e-14);
        const auto pp = isotonic_project(p);
        for (std::size_t i = 0; i < p.size(); ++i)
            CHECK(pp[i] == doctest::Approx(p[i]).epsilon(1e-14));
    }
}

TEST_CASE("projection preserves the mean") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(-3.0, 3.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> v(2 + trial % 6);
        double mean = 0;
        for (double& x : v) mean += (x = unif(rng));
        const auto p = isotonic_project(v);
        double pmean = 0;
        for (double x : p) pmean += x;
        CHECK(pmean == doctest::Approx(mean).epsilon(1e-12));
    }
}

TEST_CASE("already ordered input is a fixed point") {
    const std::vector<double> v = {3.0, 1.0, 1.0, -2.0};
    const auto p = isotonic_project(v);
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(p[i] == v[i]);
}
