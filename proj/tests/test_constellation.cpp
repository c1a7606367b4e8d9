#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "scdma/constellation.hpp"

using namespace scdma;

TEST_CASE("qpsk alphabet is the unit-energy QPSK set") {
    const auto& a = qpsk_alphabet();
    for (const auto& s : a) {
        CHECK(std::abs(std::abs(s) - 1.0) < 1e-12);
        CHECK(std::abs(std::abs(s.real()) - 1.0 / kSqrt2) < 1e-12);
        CHECK(std::abs(std::abs(s.imag()) - 1.0 / kSqrt2) < 1e-12);
    }
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) CHECK(std::abs(a[i] - a[j]) > 1e-9);
}

TEST_CASE("difference alphabet matches brute force over ordered pairs") {
    const auto& a = qpsk_alphabet();
    const auto& d = difference_alphabet();

    // count ordered pairs by difference value
    std::map<std::pair<long, long>, int> counts;
    auto key = [](cplx v) {
        return std::make_pair(std::lround(v.real() * 1e6), std::lround(v.imag() * 1e6));
    };
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) counts[key(a[i] - a[j])]++;

    CHECK(counts.size() == 9);
    int total = 0;
    for (const auto& ds : d) {
        REQUIRE(counts.count(key(ds.value)) == 1);
        CHECK(counts[key(ds.value)] == ds.pair_count);
        total += ds.pair_count;
    }
    CHECK(total == 16);
}

TEST_CASE("pair counts are 4 / 2 / 1 by difference magnitude") {
    const auto& d = difference_alphabet();
    CHECK(d[0].pair_count == 4);
    CHECK(std::abs(d[0].value) < 1e-12);
    for (int i = 1; i <= 8; ++i) {
        double m = std::abs(d[i].value);
        if (d[i].pair_count == 2) CHECK(std::abs(m - kSqrt2) < 1e-12);
        else if (d[i].pair_count == 1) CHECK(std::abs(m - 2.0) < 1e-12);
        else CHECK(false);
    }
}

TEST_CASE("negation maps representatives onto their mirrors") {
    const auto& d = difference_alphabet();
    CHECK(negate_diff(0) == 0);
    for (int i = 1; i <= 8; ++i) {
        int n = negate_diff(i);
        CHECK(n != i);
        CHECK(negate_diff(n) == i);
        CHECK(std::abs(d[i].value + d[n].value) < 1e-12);
        CHECK(d[i].pair_count == d[n].pair_count);
    }
}
