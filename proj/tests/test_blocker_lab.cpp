#include "brickforge/blocker_lab.hpp"

#include "oracles.hpp"

#include <doctest.h>

using namespace brickforge;
using namespace brickforge::blocker;

namespace {

MasterTuple T(long a, long b, long m, long n) { return MasterTuple{{a, b}, {m, n}}; }

nt::Factorization fac(std::vector<nt::PrimePower> f, Int residual = 1) {
    nt::Factorization out;
    out.factors = std::move(f);
    out.residual = residual;
    out.status = residual == 1 ? nt::FactorStatus::full : nt::FactorStatus::partial;
    return out;
}

}  // namespace

TEST_SUITE("blocker_lab") {

TEST_CASE("blockers") {
    const auto f = factor_f1(T(55, 48, 44, 9));
    const auto b = blockers(f);
    CHECK(std::find(b.begin(), b.end(), nt::PrimePower{13, 3}) != b.end());
    CHECK(blockers(fac({{5, 2}, {13, 2}})).empty());
    CHECK(blockers(fac({{5, 1}})) == std::vector<nt::PrimePower>{{5, 1}});
}

TEST_CASE("f1 of the smallest-blocker hit") {
    const auto t = T(55, 48, 44, 9);
    const auto f = factor_f1(t);
    REQUIRE(f.is_full());
    CHECK(f.product() == f1(t));
    CHECK(f1(t) == Int("98045134782049"));
    CHECK(f.factors == std::vector<nt::PrimePower>{{7, 2}, {13, 3}, {61, 1}, {1597, 1}, {9349, 1}});
    // direct factoring agrees with the structural route
    const auto g = nt::factor(f1(t));
    CHECK(g.factors == f.factors);
}

TEST_CASE("verify_blocker_conjecture") {
    const auto t = T(55, 48, 44, 9);
    const auto rep = verify_blocker_conjecture(t, factor_f1(t));
    CHECK(rep.verdict == Verdict::verified);
    REQUIRE(rep.smallest_outside_blocker);
    CHECK(*rep.smallest_outside_blocker == nt::PrimePower{13, 3});
    CHECK(rep.exponent_one_outside_P == std::vector<Int>{61, 1597, 9349});
    for (const auto& pp : rep.blockers) CHECK(pp.prime % 4 == 1);

    const auto u = T(835, 88, 160, 89);
    const auto rep2 = verify_blocker_conjecture(u, factor_f1(u));
    CHECK(rep2.verdict == Verdict::verified);
    CHECK(rep2.blockers == std::vector<nt::PrimePower>{{259801, 1}});

    CHECK(verify_blocker_conjecture(t, fac({{13, 2}})).verdict == Verdict::violated);
    CHECK(verify_blocker_conjecture(t, fac({{13, 2}}, 77)).verdict == Verdict::undecidable_partial);
    CHECK_THROWS_AS(verify_blocker_conjecture(T(2, 1, 2, 1), fac({})), std::invalid_argument);
}

TEST_CASE("a witness among known factors settles a partial factorization") {
    const auto t = T(55, 48, 44, 9);
    // 1597 * 9349 left unsplit
    const auto f = fac({{7, 2}, {13, 3}, {61, 1}}, Int(1597) * 9349);
    const auto rep = verify_blocker_conjecture(t, f);
    CHECK(rep.verdict == Verdict::verified);
    CHECK(rep.exponent_one_outside_P == std::vector<Int>{61});
    // a listed exponent of one that is wrong is not accepted as a witness
    const auto lie = fac({{7, 2}, {13, 1}}, 1);
    CHECK(verify_blocker_conjecture(t, lie).exponent_one_outside_P.empty());
}

TEST_CASE("canonical_decomposition") {
    auto cd = canonical_decomposition(T(55, 48, 44, 9));
    CHECK(cd.g0 == 7);
    CHECK(cd.xi == 1412185);
    CHECK(cd.eta == 81576);
    CHECK(oracle::trial_factor(9885295) == std::map<std::uint64_t, unsigned>{{5, 1}, {7, 1}, {53, 1}, {73, 2}});
    CHECK(oracle::trial_factor(571032) == std::map<std::uint64_t, unsigned>{{2, 3}, {3, 2}, {7, 1}, {11, 1}, {103, 1}});
    cd = canonical_decomposition(T(2, 1, 2, 1));
    CHECK(cd.g0 == 3);
    CHECK(cd.xi == 5);
    CHECK(cd.eta == 4);
}

TEST_CASE("verify_E1") {
    CHECK(verify_E1(T(55, 48, 44, 9)));
    CHECK(verify_E1(T(835, 88, 160, 89)));
    // the Pythagorean pair (3, 4) is what a failure would look like
    CHECK(nt::is_perfect_square(Int(3 * 3 + 4 * 4)));
}

TEST_CASE("k_invariant") {
    // synthetic: f1 = 5 * 21^2, g0 = 7
    const auto k = k_invariant(Int(5 * 21 * 21), 7, fac({{3, 2}, {5, 1}, {7, 2}}));
    REQUIRE(k);
    CHECK(k->rf == 5);
    CHECK(k->h == 21);
    CHECK(k->k == 3);
    CHECK_THROWS_AS(k_invariant(Int(5 * 21 * 21), 2, fac({{3, 2}, {5, 1}, {7, 2}})), std::logic_error);
    CHECK_FALSE(k_invariant(Int(5 * 21 * 21), 7, fac({{3, 2}}, 245)));

    // 13^3 has exponent 3, so no k
    const auto t = T(55, 48, 44, 9);
    CHECK_FALSE(k_invariant(t, factor_f1(t)));

    const auto u = T(835, 88, 160, 89);
    const auto ku = k_invariant(u, factor_f1(u));
    REQUIRE(ku);
    CHECK(ku->rf == 259801);
    CHECK(ku->rf * ku->h * ku->h == f1(u));
    CHECK(ku->h == ku->k * canonical_decomposition(u).g0);
    // g0 is not sigma-symmetric, so neither is k
    CHECK(ku->k == 29);
    const auto us = sigma_canonical(u);
    const auto ks = k_invariant(us, factor_f1(us));
    REQUIRE(ks);
    CHECK(ks->rf == ku->rf);
    CHECK(ks->h == ku->h);
    CHECK(ks->k == 29 * 89);
}

TEST_CASE("k = 1 means rf = xi^2 + eta^2") {
    oracle::Rng rng(1);
    int seen = 0;
    // hits on small fibres
    for (long m = 2; m < 40 && seen < 5; ++m)
        for (long n = 1 + (m % 2); n < m; n += 2) {
            if (std::gcd(m, n) != 1) continue;
            for (long a = 2; a < 120; ++a)
                for (long b = 1 + (a % 2); b < a; b += 2) {
                    if (std::gcd(a, b) != 1) continue;
                    const auto t = T(a, b, m, n);
                    if (!is_master_hit(t)) continue;
                    const auto k = k_invariant(t, factor_f1(t));
                    if (!k || k->k != 1) continue;
                    const auto cd = canonical_decomposition(t);
                    CHECK(k->rf == cd.xi * cd.xi + cd.eta * cd.eta);
                    ++seen;
                }
        }
    CHECK(seen > 0);
}

TEST_CASE("gaussian gcds and semi-scaling") {
    CHECK(gaussian_gcds(T(55, 48, 44, 9)) == std::pair<Int, Int>{1, 7});
    CHECK(gcd(Int(2852), Int(2607)) == 1);
    CHECK(gcd(Int(1988), Int(1617)) == 7);
    CHECK(gaussian_gcds(T(2, 1, 2, 1)) == std::pair<Int, Int>{1, 3});

    auto s = semiscaled(T(55, 48, 44, 9));
    CHECK((s.g_plus == 1 && s.g_minus == 7));
    CHECK(gcd(Int(721), Int(1855)) == 7);
    s = semiscaled(T(2, 1, 2, 1));
    CHECK((s.g_plus == 1 && s.g_minus == 3));

    CHECK(is_strictly_semiscaled(T(835, 88, 160, 89)));
    CHECK(is_strictly_semiscaled(T(2, 1, 2, 1)));
    CHECK_FALSE(is_strictly_semiscaled(T(2, 1, 4, 3)));  // (1, 1)
    CHECK(gaussian_gcds(T(2, 1, 4, 3)) == std::pair<Int, Int>{1, 1});
}

TEST_CASE("twelve formulas") {
    const auto u = T(835, 88, 160, 89);
    const auto D = twelve_formulas(u, 29);
    CHECK(D[8] == 2581);
    CHECK(D[9] == 4640);
    const auto d1 = twelve_formulas(T(55, 48, 44, 9), 1);
    CHECK(d1[11] == 7);
    CHECK(d1[10] == 1);
    for (long k : {0L, 2L, 3L, 9L, 21L, 101L, 109L, -5L}) CHECK_THROWS_AS(twelve_formulas(u, k), std::invalid_argument);
    for (long k : {1L, 5L, 13L, 29L, 89L, 97L}) CHECK(is_valid_modifier(k));
}

TEST_CASE("twelve formulas on the first exceptional row: n k divides, m k does not") {
    const auto u = T(835, 88, 160, 89);
    const auto f = factor_f1(u);
    const auto probes = probe_twelve_formulas(u, 29, f);
    std::vector<std::size_t> dividing;
    for (const auto& p : probes)
        if (p.divides) dividing.push_back(p.index);
    CHECK(dividing == std::vector<std::size_t>{5, 7, 8, 10, 11});
    CHECK(probes[8].divides);       // D = n k
    CHECK_FALSE(probes[9].divides); // D = m k is even and f1 is odd
    CHECK(probes[8].quotient * probes[8].D * probes[8].D == f1(u));
    CHECK(probes[8].exposes_blocker);
    CHECK(nt::valuation(probes[8].quotient, 259801) == 1);
}

TEST_CASE("padic_profile") {
    auto p = padic_profile(T(55, 48, 44, 9), 7);
    CHECK((p.alpha == 1 && p.beta == 1));
    CHECK_FALSE(p.predicted_v_f1);
    p = padic_profile(T(55, 48, 44, 9), 73);
    CHECK((p.alpha == 2 && p.beta == 0));
    CHECK(p.predicted_v_f1 == 0u);
    p = padic_profile(T(2, 1, 2, 1), 5);
    CHECK((p.alpha == 1 && p.beta == 0));
    CHECK(p.predicted_v_f1 == 0u);
    CHECK(oracle::trial_factor(369) == std::map<std::uint64_t, unsigned>{{3, 2}, {41, 1}});
    CHECK_THROWS_AS(padic_profile(T(2, 1, 2, 1), 2), std::invalid_argument);
    CHECK_THROWS_AS(padic_profile(T(2, 1, 2, 1), 9), std::invalid_argument);
}

TEST_CASE("structural identities on random admissible tuples") {
    oracle::Rng rng(99);
    for (int i = 0; i < 2000; ++i) {
        const auto t = rng.tuple(i % 2 ? 1'000'000 : 300);
        const auto P = triple_from_pair(t.first), Q = triple_from_pair(t.second);
        const Int F = f1(t);
        const auto cd = canonical_decomposition(t);
        CHECK(gcd(cd.xi, cd.eta) == 1);
        CHECK(cd.g0 * cd.xi == P.W * Q.U);
        CHECK(cd.g0 * cd.eta == P.U * Q.V);
        CHECK(cd.g0 * cd.g0 * (cd.xi * cd.xi + cd.eta * cd.eta) == F);

        const auto [gp, gm] = gaussian_gcds(t);
        CHECK(gp * gm == gcd(P.U, Q.U));
        CHECK(gcd(gp, gm) == 1);
        CHECK(mpz_divisible_p(F.get_mpz_t(), Int(gp * gp).get_mpz_t()));
        CHECK(mpz_divisible_p(F.get_mpz_t(), Int(gm * gm).get_mpz_t()));
        CHECK(mpz_odd_p(gp.get_mpz_t()));
        CHECK(mpz_odd_p(gm.get_mpz_t()));
        CHECK_NOTHROW(semiscaled(t));

        // case alpha != beta on primes of either summand
        for (std::uint64_t p : {3, 5, 7, 11, 13, 17, 29, 37}) {
            const auto pr = padic_profile(t, p);
            if (pr.predicted_v_f1) CHECK(nt::valuation(F, p) == *pr.predicted_v_f1);
            else CHECK(nt::valuation(F, p) >= 2 * pr.alpha);
        }
    }
}

TEST_CASE("parity transfer between f1 and xi^2 + eta^2") {
    oracle::Rng rng(7);
    for (int i = 0; i < 200; ++i) {
        const auto t = rng.tuple(2000);
        const auto f = factor_f1(t);
        REQUIRE(f.is_full());
        CHECK(f.product() == f1(t));
        const auto cd = canonical_decomposition(t);
        const Int s = cd.xi * cd.xi + cd.eta * cd.eta;
        for (const auto& pp : f.factors) CHECK(pp.exponent % 2 == nt::valuation(s, pp.prime) % 2);
    }
}

TEST_CASE("factor_f1 under an exhausted budget stays consistent") {
    const auto t = T(180133, 174512, 3977, 3904);
    nt::FactorBudget b;
    b.rho_iterations = 0;
    const auto f = factor_f1(t, b);
    CHECK(f.product() == f1(t));
    if (!f.is_full()) CHECK_FALSE(nt::is_prime(f.residual));
}

}  // TEST_SUITE
