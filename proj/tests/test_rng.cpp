#include <doctest.h>

#include <set>
#include <vector>

#include "interimsim/rng.hpp"

using interimsim::RngStream;

TEST_CASE("philox4x32-10 known-answer vectors") {
    using A4 = std::array<std::uint32_t, 4>;
    using A2 = std::array<std::uint32_t, 2>;
    CHECK(RngStream::philox4x32_10(A4{0, 0, 0, 0}, A2{0, 0}) == A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(RngStream::philox4x32_10(A4{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, A2{0xffffffff, 0xffffffff}) ==
          A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(RngStream::philox4x32_10(A4{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, A2{0xa4093822, 0x299f31d0}) ==
          A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("equal (seed, stream) reproduces the sequence") {
    RngStream a(42, 7), b(42, 7);
    for (int i = 0; i < 1000; ++i) REQUIRE(a() == b());
}

TEST_CASE("distinct streams and substreams differ") {
    RngStream a(42, 7), b(42, 8), c(42, 7, 1), d(43, 7);
    std::set<std::uint64_t> firsts{a(), b(), c(), d()};
    CHECK(firsts.size() == 4);
    CHECK(RngStream(42, 7).substream(1)() == RngStream(42, 7, 1)());
}

TEST_CASE("uniform lies in (0, 1) with mean 1/2") {
    RngStream r(1, 0);
    double sum = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = r.uniform();
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    CHECK(sum / n == doctest::Approx(0.5).epsilon(0.005));
}

TEST_CASE("streams are uncorrelated") {
    RngStream a(5, 1), b(5, 2);
    const int n = 100000;
    double sab = 0, sa = 0, sb = 0;
    for (int i = 0; i < n; ++i) {
        const double x = a.uniform(), y = b.uniform();
        sab += x * y;
        sa += x;
        sb += y;
    }
    const double cov = sab / n - (sa / n) * (sb / n);
    CHECK(std::abs(cov / (1.0 / 12.0)) < 0.015);  // ~5 SE of a correlation at n = 1e5
}
