#pragma once

// Exact group law on the fibre cubics Y^2 = X^3 + a2 X^2 + a4 X + a6 and the
// torsion subgroup computation.

#include "brickforge/curve_point.hpp"
#include "brickforge/fibration.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace brickforge::ecq {

// All three throw std::invalid_argument on an off-curve input.
CurvePoint add(const FibreCurve& c, const CurvePoint& P, const CurvePoint& Q);
CurvePoint neg(const FibreCurve& c, const CurvePoint& P);
CurvePoint scalar_mul(const FibreCurve& c, const Int& k, const CurvePoint& P);

// (-B, 0), (2 gamma^2, 0), (-2 gamma^2, 0)
std::array<CurvePoint, 3> two_torsion(const FibreCurve& c);

// Every rational Q with 2Q = P, each one checked by doubling. Empty when P
// is not divisible by 2 over Q.
std::vector<CurvePoint> halve(const FibreCurve& c, const CurvePoint& P);

// #E(F_p) for an odd prime p <= 100000 of good reduction.
// std::invalid_argument otherwise.
std::uint64_t count_points_mod_p(const FibreCurve& c, std::uint64_t p);

struct TorsionGroup {
    unsigned d1 = 1;  // Z/d1 + Z/d2, d1 | d2
    unsigned d2 = 1;
    std::vector<CurvePoint> points;  // sorted, O first
    std::uint64_t order_bound = 0;   // gcd of the point counts
    std::vector<std::uint64_t> primes_used;
    // The 3-torsion check ran out of factoring budget; the group may be larger.
    bool lower_bound_only = false;

    std::size_t order() const { return points.size(); }
    bool contains(const CurvePoint& P) const;
};

TorsionGroup torsion_subgroup(const FibreCurve& c);

// Order of P when it is at most 16, otherwise 0 (infinite order by Mazur).
unsigned small_order(const FibreCurve& c, const CurvePoint& P);

}  // namespace brickforge::ecq
