#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "senc/rng.hpp"

using namespace senc;

TEST_CASE("equal seeds give equal streams") {
    Rng a(12345), b(12345);
    for (int i = 0; i < 1000; ++i) CHECK(a.next() == b.next());
}

TEST_CASE("substreams are independent of sibling draws") {
    // Consuming from one substream must not perturb another.
    Rng a = Rng::substream(7, 1, 2, 3);
    Rng b = Rng::substream(7, 1, 2, 4);
    const double a1 = a.uniform();
    Rng a_again = Rng::substream(7, 1, 2, 3);
    (void)b.uniform();
    CHECK(a_again.uniform() == a1);
}

TEST_CASE("uniform stays in [0,1) and below() stays in range") {
    Rng rng(99);
    for (int i = 0; i < 10000; ++i) {
        const double u = rng.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        CHECK(rng.below(7) < 7);
    }
}

TEST_CASE("below covers all residues") {
    Rng rng(5);
    std::vector<int> seen(5, 0);
    for (int i = 0; i < 2000; ++i) ++seen[static_cast<std::size_t>(rng.below(5))];
    for (const int count : seen) CHECK(count > 0);
}

TEST_CASE("inverse normal CDF hits known quantiles") {
    CHECK(Rng::inverse_normal_cdf(0.5) == doctest::Approx(0.0).epsilon(1e-8));
    CHECK(Rng::inverse_normal_cdf(0.975) == doctest::Approx(1.959964).epsilon(1e-5));
    CHECK(Rng::inverse_normal_cdf(0.025) == doctest::Approx(-1.959964).epsilon(1e-5));
    CHECK(Rng::inverse_normal_cdf(0.841344746) == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("normal draws have roughly the requested moments") {
    Rng rng(2024);
    double sum = 0, sumsq = 0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const double x = rng.normal(3.0, 2.0);
        sum += x;
        sumsq += x * x;
    }
    const double mean = sum / n;
    const double var = sumsq / n - mean * mean;
    CHECK(mean == doctest::Approx(3.0).epsilon(0.05));
    CHECK(std::sqrt(var) == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("shuffle is a permutation and seed-stable") {
    std::vector<int> v{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    Rng a(31), b(31);
    auto va = v, vb = v;
    a.shuffle(va);
    b.shuffle(vb);
    CHECK(va == vb);
    std::sort(va.begin(), va.end());
    CHECK(va == v);
}
