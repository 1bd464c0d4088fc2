#pragma once

// Blockers of the space-diagonal norm f1 and the structural invariants
// around them: the canonical decomposition f1 = g0^2 (xi^2 + eta^2), the
// k-invariant, the two Gaussian gcds (g+, g-) and the twelve
// square-extracting formulas.

#include "brickforge/master_core.hpp"
#include "brickforge/ntkernel.hpp"

#include <array>
#include <optional>
#include <vector>

namespace brickforge::blocker {

// Primes of odd exponent among the listed factors, ascending.
std::vector<nt::PrimePower> blockers(const nt::Factorization& f);

enum class Verdict { verified, violated, undecidable_partial };
std::string to_string(Verdict v);

struct BlockerReport {
    MasterTuple tuple;
    nt::Factorization f1_fact;
    std::vector<nt::PrimePower> blockers;
    // Exponent-one primes coprime to every member of the parameter set, each
    // certified by l | f1 and l^2 !| f1.
    std::vector<Int> exponent_one_outside_P;
    Verdict verdict = Verdict::violated;

    // Smallest odd-exponent prime coprime to the parameter set.
    std::optional<nt::PrimePower> smallest_outside_blocker;
    // Largest listed prime coprime to the parameter set, with its exponent.
    std::optional<nt::PrimePower> largest_outside_prime;
};

// Throws std::invalid_argument when t is not a master hit. The
// factorization is taken as given; callers wanting the product identity
// check it separately.
BlockerReport verify_blocker_conjecture(const MasterTuple& t, const nt::Factorization& f);

struct CanonicalDecomposition {
    Int g0;
    Int xi;
    Int eta;
};

CanonicalDecomposition canonical_decomposition(const MasterTuple& t);

// True when xi^2 + eta^2 is not a square.
bool verify_E1(const MasterTuple& t);

struct KInvariant {
    Int rf;  // product of the blockers
    Int h;   // f1 = rf * h^2
    Int k;   // h = k * g0
};

// Absent unless f is full and every blocker has exponent one. Throws
// std::logic_error if f1 / rf is not a square or g0 does not divide h.
std::optional<KInvariant> k_invariant(const MasterTuple& t, const nt::Factorization& f);
std::optional<KInvariant> k_invariant(const Int& f1_value, const Int& g0, const nt::Factorization& f);

// (gcd(am+bn, an+bm), gcd(|am-bn|, |an-bm|))
std::pair<Int, Int> gaussian_gcds(const MasterTuple& t);

struct SemiScaledCoords {
    Int g_plus;
    Int g_minus;
};

// Throws std::logic_error if g+ g- != gcd(U1, U2), gcd(g+, g-) != 1 or
// g+-^2 does not divide f1.
SemiScaledCoords semiscaled(const MasterTuple& t);
bool is_strictly_semiscaled(const MasterTuple& t);

// k must be 1 or a prime p <= 100 with p = 1 mod 4; std::invalid_argument
// otherwise. Order:
//   b U1 k, a U1 k, U1 k, b k, a k, n U2 k, m U2 k, U2 k, n k, m k, g+ k, g- k
bool is_valid_modifier(long k);
std::array<Int, 12> twelve_formulas(const MasterTuple& t, long k);

struct FormulaProbe {
    std::size_t index = 0;
    Int D;
    bool divides = false;  // D^2 | f1
    Int quotient;          // f1 / D^2 when divides
    // some known prime has odd exponent in the quotient
    bool exposes_blocker = false;
};

// Evaluates each formula against f1 and its (possibly partial) factorization.
std::vector<FormulaProbe> probe_twelve_formulas(const MasterTuple& t, long k, const nt::Factorization& f);

struct PadicProfile {
    unsigned alpha = 0;  // v_p(W1 U2)
    unsigned beta = 0;   // v_p(U1 V2)
    // 2 min(alpha, beta) when alpha != beta; only a lower bound otherwise.
    std::optional<unsigned> predicted_v_f1;
};

PadicProfile padic_profile(const MasterTuple& t, const Int& p);

// f1 through its canonical decomposition: g0 and xi^2 + eta^2 are factored
// separately and merged, each half under its own copy of the budget. Much
// cheaper than factoring f1 directly when g0 is large.
nt::Factorization factor_f1(const MasterTuple& t, const nt::FactorBudget& budget = {});

}  // namespace brickforge::blocker
