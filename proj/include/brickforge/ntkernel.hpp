#pragma once

// Arbitrary-precision integer helpers and the staged factorization engine.
//
// Everything here is a pure function of its arguments; callers running
// worker pools hand each call its own FactorBudget.

#include <gmpxx.h>

#include <chrono>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace brickforge {

using Int = mpz_class;
using Rat = mpq_class;

namespace nt {

// floor(sqrt(n)); throws std::domain_error for n < 0.
Int isqrt(const Int& n);

// Non-negative root when n is a perfect square, nothing otherwise.
std::optional<Int> is_perfect_square(const Int& n);

// Positive rational root of q when q > 0 and both numerator and denominator
// are squares. q = 0 yields nothing.
std::optional<Rat> is_square_rational(const Rat& q);

// Largest e with p^e | n. Throws std::domain_error for n = 0.
unsigned valuation(const Int& n, const Int& p);

// Deterministic for n < 2^64 (Miller-Rabin with the first twelve prime
// bases). Above 2^64 this is the Baillie-PSW test: a strong probable prime
// to base 2 that is also a strong Lucas probable prime. No BPSW
// counterexample is known, but the answer is a probable-prime verdict.
bool is_prime(const Int& n);
bool is_prime_u64(std::uint64_t n);

// Strong Lucas probable-prime test with Selfridge parameters. Exposed for
// testing; n must be odd and > 2.
bool is_strong_lucas_prp(const Int& n);

struct PrimePower {
    Int prime;
    unsigned exponent = 0;

    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

enum class FactorStatus { full, partial };

struct Factorization {
    std::vector<PrimePower> factors;  // strictly increasing primes
    Int residual = 1;                 // composite or 1, never prime
    FactorStatus status = FactorStatus::full;

    // prod p^e * residual
    Int product() const;
    // 0 when p is not listed.
    unsigned exponent_of(const Int& p) const;
    bool is_full() const { return status == FactorStatus::full; }
};

std::string to_string(FactorStatus s);

struct FactorBudget {
    // Wall-clock cap for the rho stage. Trial division always runs to
    // completion.
    std::chrono::milliseconds wall{std::chrono::minutes(10)};
    // Total rho iterations across all cofactors; useful for deterministic
    // partial results in tests.
    std::uint64_t rho_iterations = std::numeric_limits<std::uint64_t>::max();

    static FactorBudget seconds(double s);
};

// Stage 1: trial division by all primes below 10^6. Stage 2: Pollard-Brent
// rho with batched gcds, restarting with x^2 + c for c = 1, 2, ... on
// failure; prime powers are detected up front. Anything unsplit when the
// budget runs out becomes the residual and the status is partial.
Factorization factor(const Int& n, const FactorBudget& budget = {});

// Primes below 10^6, ascending.
const std::vector<std::uint32_t>& small_primes();

// One nontrivial factor of an odd composite n that is not a prime power,
// or nothing if the iteration cap is hit. Exposed for testing.
std::optional<Int> pollard_brent(const Int& n, std::uint64_t max_iterations,
                                 std::uint64_t seed_c = 1);

}  // namespace nt
}  // namespace brickforge
