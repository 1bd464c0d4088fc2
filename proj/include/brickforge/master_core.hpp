#pragma once

// Euclid pairs, master tuples and the bricks they generate.
//
// A master tuple (a, b, m, n) couples two primitive Pythagorean triples
//   U1 = a^2 - b^2, V1 = 2ab, W1 = a^2 + b^2   and the same for (m, n)
// into the brick x = U1 U2, y = V1 U2, z = U1 V2. Two face diagonals are
// integral by construction; the third is integral iff the master norm
// M = (V1 U2)^2 + (U1 V2)^2 is a square, and the space diagonal iff
// f1 = (W1 U2)^2 + (U1 V2)^2 is a square.

#include "brickforge/ntkernel.hpp"

#include <array>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace brickforge {

struct EuclidPair {
    Int a;
    Int b;

    friend bool operator==(const EuclidPair&, const EuclidPair&) = default;
    friend auto operator<=>(const EuclidPair& l, const EuclidPair& r) {
        if (auto c = cmp(l.a, r.a); c != 0) return c <=> 0;
        return cmp(l.b, r.b) <=> 0;
    }
};

struct PythTriple {
    Int U;  // odd leg
    Int V;  // even leg
    Int W;  // hypotenuse

    friend bool operator==(const PythTriple&, const PythTriple&) = default;
};

// Master tuple (first.a, first.b, second.a, second.b) = (a, b, m, n).
// Construct through make() to get the admissibility check.
struct MasterTuple {
    EuclidPair first;
    EuclidPair second;

    const Int& a() const { return first.a; }
    const Int& b() const { return first.b; }
    const Int& m() const { return second.a; }
    const Int& n() const { return second.b; }

    // Throws std::invalid_argument naming the violated condition.
    static MasterTuple make(const Int& a, const Int& b, const Int& m, const Int& n);

    std::string to_string() const;

    friend bool operator==(const MasterTuple&, const MasterTuple&) = default;
    friend auto operator<=>(const MasterTuple& l, const MasterTuple& r) {
        if (auto c = l.first <=> r.first; c != 0) return c;
        return l.second <=> r.second;
    }
};

struct Brick {
    Int x, y, z;
    Int dxy, dxz;
    std::optional<Int> dyz;  // present iff the tuple is a master hit
};

struct Admissibility {
    bool ok = false;
    std::string reason;  // first violated condition; empty when ok
    explicit operator bool() const { return ok; }
};

// a > b > 0, gcd(a, b) = 1, a - b odd.
Admissibility pair_admissibility(const Int& a, const Int& b);
Admissibility is_admissible(const Int& a, const Int& b, const Int& m, const Int& n);

PythTriple triple_from_pair(const EuclidPair& p);

Int master_norm(const MasterTuple& t);
// Root Q with Q^2 = M when M is a square.
std::optional<Int> is_master_hit(const MasterTuple& t);
Int f1(const MasterTuple& t);
Brick edges(const MasterTuple& t);

// Space-diagonal test: x^2 + y^2 + z^2 is checked for squareness directly
// and again through f1; the two verdicts must agree (std::logic_error
// otherwise).
bool is_perfect_cuboid(const MasterTuple& t);

// The 29 canonical expressions, in this order:
//   a, b, m, n, a+b, a-b, m+n, m-n,
//   a^2+b^2, a^2-b^2, m^2+n^2, m^2-n^2,
//   ab, mn, 2ab, 2mn,
//   W1U2, U1V2, W1V2, V1U2, U1U2, V1V2, W1W2,
//   U1, V1, W1, U2, V2, W2
constexpr std::size_t kCanonicalCount = 29;
std::array<Int, kCanonicalCount> canonical_expressions(const MasterTuple& t);

// Distinct positive values among the canonical expressions. Generic tuples
// give 23 values; small tuples collide further.
std::set<Int> parameter_set(const MasterTuple& t);

// Lexicographic minimum of (a,b,m,n) and (m,n,a,b).
MasterTuple sigma_canonical(const MasterTuple& t);

// Tuples t with edges(t) equal to the given edges as a multiset.
//
// The odd edge must be x = U1 U2. Since (U1, V1) is a primitive pair,
// gcd(x, y) = U2 gcd(U1, V1) = U2 exactly, which fixes U1 = x / U2,
// V1 = y / U2 and V2 = z / U1. Each pair (U, V) is then inverted through
// W = sqrt(U^2 + V^2), a^2 = (W + U) / 2, b^2 = (W - U) / 2. Both orders of
// the even edges are tried.
std::vector<MasterTuple> recover_master_tuple(const Int& e1, const Int& e2, const Int& e3);

// Tuples whose brick is a positive multiple of the given edges. With
// g1 = gcd(x, y) and g2 = gcd(x, z), the only candidates are
// (U1, V1) = (x, y) / g1 and (U2, V2) = (x, z) / g2, the brick being the
// input scaled by x / (g1 g2). Use this to map primitive bricks (family
// tables, external catalogues) back to master tuples.
std::vector<MasterTuple> recover_scaled_master_tuple(const Int& e1, const Int& e2, const Int& e3);

// Inverse of triple_from_pair for an (odd U, even V) primitive leg pair.
std::optional<EuclidPair> pair_from_legs(const Int& U, const Int& V);

}  // namespace brickforge
