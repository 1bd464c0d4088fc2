#include "brickforge/ntkernel.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <stdexcept>

using namespace brickforge;

TEST_SUITE("ntkernel") {

TEST_CASE("isqrt examples and errors") {
    CHECK(nt::isqrt(0) == 0);
    CHECK(nt::isqrt(Int("96256348905024")) == 9811032);
    CHECK(Int(9811032) * 9811032 == Int("96256348905024"));
    CHECK(nt::isqrt(15624) == 124);
    CHECK_THROWS_AS(nt::isqrt(-1), std::domain_error);
}

TEST_CASE("is_perfect_square examples") {
    CHECK(nt::is_perfect_square(15625) == Int(125));
    CHECK_FALSE(nt::is_perfect_square(5968));
    CHECK(Int(77) * 77 < 5968);
    CHECK(Int(78) * 78 > 5968);
    CHECK_FALSE(nt::is_perfect_square(-4));
    CHECK(nt::is_perfect_square(0) == Int(0));
}

TEST_CASE("isqrt and is_perfect_square agree on random input") {
    oracle::Rng rng(11);
    gmp_randclass gr(gmp_randinit_default);
    gr.seed(11);
    for (int i = 0; i < 2000; ++i) {
        Int n = gr.get_z_bits(rng.uniform(1, 200));
        if (i % 3 == 0) n = n * n;
        const Int r = nt::isqrt(n);
        CHECK(r * r <= n);
        CHECK((r + 1) * (r + 1) > n);
        CHECK(nt::is_perfect_square(n).has_value() == (r * r == n));
    }
}

TEST_CASE("is_square_rational") {
    CHECK(nt::is_square_rational(Rat(3025, 2304)) == Rat(55, 48));
    CHECK(nt::is_square_rational(Rat(1)) == Rat(1));
    CHECK_FALSE(nt::is_square_rational(Rat(2, 9)));
    CHECK_FALSE(nt::is_square_rational(Rat(0)));
    CHECK_FALSE(nt::is_square_rational(Rat(-4, 9)));
    CHECK_FALSE(nt::is_square_rational(Rat(4, 3)));
}

TEST_CASE("valuation") {
    CHECK(nt::valuation(2197, 13) == 3);
    CHECK(nt::valuation(571032, 7) == 1);
    CHECK(571032 == 7 * 103 * 792);
    CHECK(nt::valuation(9, 2) == 0);
    CHECK(nt::valuation(-8, 2) == 3);
    CHECK_THROWS_AS(nt::valuation(0, 5), std::domain_error);
}

TEST_CASE("is_prime examples") {
    CHECK(nt::is_prime(13));
    CHECK_FALSE(nt::is_prime(5329));
    CHECK(oracle::trial_factor(5329) == std::map<std::uint64_t, unsigned>{{73, 2}});
    CHECK_FALSE(nt::is_prime(1));
    CHECK_FALSE(nt::is_prime(0));
    CHECK(nt::is_prime(2));
    CHECK_FALSE(nt::is_prime(-7));
}

TEST_CASE("is_prime agrees with trial division below 200000") {
    for (std::uint64_t n = 0; n < 200000; ++n) REQUIRE(nt::is_prime_u64(n) == oracle::trial_prime(n));
}

TEST_CASE("is_prime on pseudoprimes to small bases") {
    // Carmichael numbers and strong pseudoprimes to several prime bases
    for (const char* s : {"561", "41041", "3215031751", "2152302898747", "3474749660383", "341550071728321",
                          "3825123056546413051", "318665857834031151167461"})
        CHECK_FALSE(nt::is_prime(Int(s)));
    CHECK(nt::is_prime(Int("18446744073709551557")));  // largest prime below 2^64
    CHECK_FALSE(nt::is_prime(Int("18446744073709551617")));  // 2^64 + 1 = 274177 * 67280421310721
}

TEST_CASE("strong Lucas probable primes with Selfridge parameters") {
    // the smallest strong Lucas pseudoprimes
    for (int n : {5459, 5777, 10877, 16109, 18971}) {
        CHECK(nt::is_strong_lucas_prp(n));
        CHECK_FALSE(nt::is_prime(n));
    }
    for (int p : {3, 5, 7, 11, 101, 9349, 259801}) CHECK(nt::is_strong_lucas_prp(p));
    CHECK_FALSE(nt::is_strong_lucas_prp(9));   // perfect square
    CHECK_FALSE(nt::is_strong_lucas_prp(21));
}

TEST_CASE("is_prime agrees with GMP above 2^64") {
    gmp_randclass gr(gmp_randinit_default);
    gr.seed(5);
    int primes = 0;
    for (int i = 0; i < 3000; ++i) {
        Int n = gr.get_z_bits(65 + i % 200) | 1;
        const bool p = nt::is_prime(n);
        REQUIRE(p == oracle::gmp_prime(n));
        primes += p;
    }
    CHECK(primes > 0);
    const Int m89 = (Int(1) << 89) - 1, m127 = (Int(1) << 127) - 1;
    CHECK(nt::is_prime(m89));
    CHECK(nt::is_prime(m127));
    CHECK_FALSE(nt::is_prime(m89 * m127));
    CHECK_FALSE(nt::is_prime((Int(1) << 128) + 1));
}

TEST_CASE("factor examples") {
    auto f = nt::factor(2021);
    REQUIRE(f.is_full());
    CHECK(f.factors == std::vector<nt::PrimePower>{{43, 1}, {47, 1}});

    f = nt::factor(Int("96256348905024"));
    CHECK(f.is_full());
    CHECK(f.exponent_of(2) == 6);
    CHECK(f.exponent_of(3) == 2);
    CHECK(f.product() == Int("96256348905024"));
    // 9811032 by trial division, exponents doubled
    for (auto [p, e] : oracle::trial_factor(9811032)) CHECK(f.exponent_of(p) == 2 * e);

    f = nt::factor(1);
    CHECK(f.factors.empty());
    CHECK(f.residual == 1);
    CHECK(f.is_full());
}

TEST_CASE("factor reconstruction on random n <= 1e12") {
    oracle::Rng rng(77);
    for (int i = 0; i < 300; ++i) {
        const std::uint64_t n = rng.uniform(1, 1'000'000'000'000ULL);
        const auto f = nt::factor(Int(n));
        REQUIRE(f.is_full());
        CHECK(f.product() == Int(n));
        std::map<std::uint64_t, unsigned> got;
        for (const auto& pp : f.factors) got[pp.prime.get_ui()] = pp.exponent;
        CHECK(got == oracle::trial_factor(n));
        for (const auto& pp : f.factors) CHECK(nt::valuation(Int(n), pp.prime) == pp.exponent);
    }
}

TEST_CASE("factor needs rho for products of large primes") {
    const Int p("1000000007"), q("998244353"), r("1167800789401");
    const Int n = p * q * r * r * 13;
    const auto f = nt::factor(n);
    REQUIRE(f.is_full());
    CHECK(f.product() == n);
    CHECK(f.exponent_of(p) == 1);
    CHECK(f.exponent_of(q) == 1);
    CHECK(f.exponent_of(r) == 2);
    CHECK(f.exponent_of(13) == 1);
    for (std::size_t i = 1; i < f.factors.size(); ++i) CHECK(f.factors[i - 1].prime < f.factors[i].prime);
    for (const auto& pp : f.factors) CHECK(oracle::gmp_prime(pp.prime));
}

TEST_CASE("prime powers above the trial bound") {
    const Int p("1000003");
    const Int n = p * p * p * 4;
    const auto f = nt::factor(n);
    REQUIRE(f.is_full());
    CHECK(f.exponent_of(p) == 3);
    CHECK(f.exponent_of(2) == 2);
}

TEST_CASE("exhausted budget leaves a composite residual") {
    const Int p("1000000007"), q("998244353");
    nt::FactorBudget b;
    b.rho_iterations = 0;
    const auto f = nt::factor(p * q * 45, b);
    CHECK_FALSE(f.is_full());
    CHECK(f.residual == p * q);
    CHECK_FALSE(nt::is_prime(f.residual));
    CHECK(f.product() == p * q * 45);
    CHECK(f.exponent_of(3) == 2);
    CHECK(f.exponent_of(5) == 1);
}

TEST_CASE("a lone large prime needs no rho budget") {
    nt::FactorBudget b;
    b.rho_iterations = 0;
    const Int m127 = (Int(1) << 127) - 1;
    const auto f = nt::factor(m127 * 3, b);
    CHECK(f.is_full());
    CHECK(f.exponent_of(m127) == 1);
}

TEST_CASE("pollard_brent splits a semiprime") {
    const Int p("4294967291"), q("4294967279");
    const auto d = nt::pollard_brent(p * q, 10'000'000);
    REQUIRE(d.has_value());
    CHECK((*d == p || *d == q));

    const Int P("1000000000039"), Q("1000000000061");
    const auto e = nt::pollard_brent(P * Q, 50'000'000);
    REQUIRE(e.has_value());
    CHECK((*e == P || *e == Q));
}

}  // TEST_SUITE
