#pragma once

#include "brickforge/ntkernel.hpp"

#include <string>

namespace brickforge {

// Affine rational point or the point at infinity. Which curve it lives on is
// the caller's business; the group law takes the FibreCurve explicitly.
struct CurvePoint {
    bool infinity = true;
    Rat x;
    Rat y;

    static CurvePoint at_infinity() { return {}; }
    static CurvePoint affine(Rat x, Rat y) {
        x.canonicalize();
        y.canonicalize();
        return {false, std::move(x), std::move(y)};
    }

    friend bool operator==(const CurvePoint& l, const CurvePoint& r) {
        if (l.infinity || r.infinity) return l.infinity == r.infinity;
        return l.x == r.x && l.y == r.y;
    }
    friend bool operator<(const CurvePoint& l, const CurvePoint& r) {
        if (l.infinity != r.infinity) return l.infinity;
        if (l.infinity) return false;
        if (l.x != r.x) return l.x < r.x;
        return l.y < r.y;
    }

    // "O" or "x y" with each coordinate as num/den (den omitted when 1).
    std::string to_string() const {
        if (infinity) return "O";
        return x.get_str() + " " + y.get_str();
    }
};

}  // namespace brickforge
