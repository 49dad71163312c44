#include <cmath>
#include <random>

#include "coopnet/detect.hpp"
#include "doctest.h"

using namespace coopnet;

TEST_CASE("relay hard decisions") {
    BitVec hat = relay_ml_detect({0.7, -0.2, 0.0, -3.1});
    CHECK(hat == BitVec({0, 1, 0, 1}));
}

TEST_CASE("C-MRC weight") {
    CHECK(cmrc_lambda(5.0, 5.0) == doctest::Approx(1.0));
    CHECK(cmrc_lambda(1.0, 4.0) == doctest::Approx(0.25));
    CHECK(cmrc_lambda(4.0, 1.0) == doctest::Approx(1.0));
    CHECK(cmrc_lambda(3.0, 0.0) == 0.0);
}

TEST_CASE("combining leaves non-relayed positions untouched") {
    std::vector<double> direct{1.0, -2.0, 3.0, -4.0, 5.0};
    std::vector<int> theta{1, 3};
    std::vector<double> relayed{10.0, -10.0};

    auto zero = cmrc_combine(direct, theta, relayed, 0.0);
    CHECK(zero == direct);  // bit-exact

    auto half = cmrc_combine(direct, theta, relayed, 0.5);
    CHECK(half[0] == 1.0);
    CHECK(half[1] == doctest::Approx(3.0));
    CHECK(half[2] == 3.0);
    CHECK(half[3] == doctest::Approx(-9.0));
    CHECK(half[4] == 5.0);

    CHECK_THROWS(cmrc_combine(direct, {5}, {1.0}, 1.0));
    CHECK_THROWS(cmrc_combine(direct, {0, 1}, {1.0}, 1.0));
}

TEST_CASE("lambda=1 combining is MRC of two AWGN branches") {
    // both branches carry the same bit; decision on the summed LLRs should
    // track Q(sqrt(2*(g1+g2)))
    std::mt19937_64 rng(31);
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
    const double g1 = 1.2, g2 = 2.3;
    const long n = 2000000;
    long errors = 0;
    for (long i = 0; i < n; ++i) {
        double l1 = 4.0 * std::sqrt(g1) * (std::sqrt(g1) + gauss(rng));
        double l2 = 4.0 * std::sqrt(g2) * (std::sqrt(g2) + gauss(rng));
        auto comb = cmrc_combine({l1}, {0}, {l2}, 1.0);
        errors += comb[0] < 0.0;
    }
    double expect = 0.5 * std::erfc(std::sqrt(g1 + g2));
    CHECK(static_cast<double>(errors) / n ==
          doctest::Approx(expect).epsilon(0.05));
}

TEST_CASE("a weak source-relay hop is weighted down") {
    // direct path says bit 0 weakly; relay decoded the wrong bit with high
    // destination SNR, but lambda knows the first hop was unreliable
    double lambda = cmrc_lambda(0.05, 20.0);
    CHECK(lambda == doctest::Approx(0.0025));
    auto comb = cmrc_combine({0.8}, {0}, {-50.0}, lambda);
    CHECK(comb[0] > 0.0);  // direct decision survives
    // with naive MRC the relayed error would dominate
    CHECK(cmrc_combine({0.8}, {0}, {-50.0}, 1.0)[0] < 0.0);
}

TEST_CASE("xor encoding") {
    BitVec a{0, 1, 1, 0, 1}, b{1, 1, 0, 0, 1};
    CHECK(xor_encode(a, b) == BitVec({1, 0, 1, 0, 0}));
    CHECK(xor_encode(a, a) == BitVec(a.size(), 0));
    CHECK(xor_encode(xor_encode(a, b), b) == a);
    CHECK_THROWS(xor_encode(a, BitVec{0, 1}));
}

TEST_CASE("network-coded stream scaling") {
    std::vector<double> llr{2.0, -4.0, 6.0};
    // bottleneck is gamma_s1r = 1, gamma_rd = 4 -> lambda_nc = 0.25
    auto scaled = ncc_relay_llr(llr, 4.0, 1.0, 9.0);
    CHECK(scaled[0] == doctest::Approx(0.5));
    CHECK(scaled[1] == doctest::Approx(-1.0));
    CHECK(scaled[2] == doctest::Approx(1.5));
    // second hop is the bottleneck -> full weight
    CHECK(ncc_relay_llr(llr, 2.0, 7.0, 9.0) == llr);
    // dead second hop drops the stream
    auto dead = ncc_relay_llr(llr, 0.0, 1.0, 1.0);
    for (double v : dead) CHECK(v == 0.0);
}
