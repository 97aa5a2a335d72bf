#include <doctest.h>

#include <random>
#include <sstream>

#include "membrane/io.hpp"

using namespace membrane;

namespace {

MembraneStack random_stack(std::mt19937_64& rng, bool two_d) {
    std::uniform_real_distribution<double> unif(-5.0, 5.0);
    const Grid g = two_d ? Grid::make_2d(-1.5, 2.0, 0.0, 1.0, 6, 4)
                         : Grid::make_1d(-2.0, 3.0, 10);
    MembraneStack s(g, 3, 1e30);  // unordered random data, tolerance off
    for (int i = 0; i < 3; ++i)
        for (std::size_t p = 0; p < g.node_count(); ++p) s.field(i)[p] = unif(rng);
    return s;
}

}  // namespace

TEST_CASE("stack round trip is bit-exact") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 20; ++trial) {
        const MembraneStack s = random_stack(rng, trial % 2 == 0);
        std::stringstream buf;
        write_stack(buf, s);
        const MembraneStack r = read_stack(buf);
        REQUIRE(r.grid().same_as(s.grid()));
        REQUIRE(r.n_membranes() == s.n_membranes());
        for (int i = 0; i < 3; ++i)
            for (std::size_t p = 0; p < s.grid().node_count(); ++p)
                CHECK(r.value(i, p) == s.value(i, p));
    }
}

TEST_CASE("format_full round-trips doubles") {
    for (double v : {0.0, -0.0, 1.0 / 3.0, 1e-300, -6.02e23, 3.863703305156273}) {
        CHECK(std::stod(format_full(v)) == v);
    }
}

TEST_CASE("malformed input is rejected") {
    std::stringstream buf("not a stack\n");
    CHECK_THROWS(read_stack(buf));
    std::stringstream empty;
    CHECK_THROWS(read_stack(empty));
}
