#pragma once

// The elliptic fibre over a fixed Euclid pair (m, n).
//
// With U2 = m^2 - n^2, V2 = 2mn, gamma = V2 and B = 4 U2^2 - 2 V2^2, the
// master condition divided by b^4 is the quartic
//     s^2 = gamma^2 t^4 + B t^2 + gamma^2,     t = a / b.
// The substitution X = 2 gamma (s + gamma) / t^2 eliminates s and gives the
// split cubic
//     Y^2 = (X + B)(X^2 - 4 gamma^4) = X^3 + B X^2 - 4 gamma^4 X - 4 gamma^4 B
// with roots -B, 2 gamma^2, -2 gamma^2. The completion
// Y = t (X^2 - 4 gamma^4) / (2 gamma) puts the image on that cubic. The
// lifting function tau(X) = 4 gamma^2 (X + B) / (X^2 - 4 gamma^4) recovers t^2.

#include "brickforge/curve_point.hpp"
#include "brickforge/master_core.hpp"

#include <optional>

namespace brickforge {

struct FibreCurve {
    Int m, n;
    Int U2, V2;
    Int gamma;    // = V2
    Int A, B, C;  // quartic coefficients, A = C = gamma^2
    Int e1, e2, e3;  // cubic roots -B, 2 gamma^2, -2 gamma^2

    // Y^2 = X^3 + a2 X^2 + a4 X + a6
    Int a2() const { return B; }
    Int a4() const;
    Int a6() const;

    std::string provenance() const { return "MW-" + m.get_str() + "-" + n.get_str(); }
};

namespace fibration {

// Throws std::invalid_argument for an inadmissible pair.
FibreCurve build_fibre(const Int& m, const Int& n);

Rat quartic_rhs(const FibreCurve& c, const Rat& t);

bool on_curve(const FibreCurve& c, const CurvePoint& P);

// Throws std::invalid_argument for t = 0 (the base point maps to O) or when
// s^2 != quartic_rhs(t); std::logic_error if the image misses the cubic.
CurvePoint phi(const FibreCurve& c, const Rat& t, const Rat& s);

// Absent at O and at X = +-2 gamma^2. X = -B gives 0.
std::optional<Rat> tau(const FibreCurve& c, const CurvePoint& P);

// Admissible (a', b') with |t| = a'/b' when tau(P) is a positive rational
// square and a' > b', a' - b' odd. The caller still certifies M = square.
std::optional<EuclidPair> lift_point(const FibreCurve& c, const CurvePoint& P);

// Point of a known hit (a, b) on this fibre: t = a/b, s = Q/b^2.
// Throws std::invalid_argument unless M(a, b, m, n) is a square.
CurvePoint point_from_hit(const FibreCurve& c, const EuclidPair& ab);

// Exact check that tau(X(t, s)) - t^2 vanishes in Q(t)[s] / (s^2 - f(t)).
bool tau_phi_identity_holds(const FibreCurve& c);

}  // namespace fibration
}  // namespace brickforge
