#include "brickforge/ecq.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

namespace brickforge::ecq {
namespace {

void require_on_curve(const FibreCurve& c, const CurvePoint& P, const char* what) {
    if (!fibration::on_curve(c, P))
        throw std::invalid_argument(std::string(what) + ": point " + P.to_string() + " is not on " + c.provenance());
}

Rat cubic(const FibreCurve& c, const Rat& X) {
    Rat r = ((X + c.a2()) * X + c.a4()) * X + c.a6();
    r.canonicalize();
    return r;
}

CurvePoint add_unchecked(const FibreCurve& c, const CurvePoint& P, const CurvePoint& Q) {
    if (P.infinity) return Q;
    if (Q.infinity) return P;
    Rat lambda;
    if (P.x == Q.x) {
        if (P.y != Q.y || sgn(P.y) == 0) return CurvePoint::at_infinity();
        lambda = (3 * P.x * P.x + 2 * Rat(c.a2()) * P.x + c.a4()) / (2 * P.y);
    } else {
        lambda = (Q.y - P.y) / (Q.x - P.x);
    }
    lambda.canonicalize();
    Rat x3 = lambda * lambda - c.a2() - P.x - Q.x;
    Rat y3 = lambda * (P.x - x3) - P.y;
    return CurvePoint::affine(std::move(x3), std::move(y3));
}

CurvePoint mul_unchecked(const FibreCurve& c, Int k, CurvePoint P) {
    if (k < 0) {
        k = -k;
        if (!P.infinity) P.y = -P.y;
    }
    CurvePoint acc = CurvePoint::at_infinity();
    while (k > 0) {
        if (mpz_odd_p(k.get_mpz_t())) acc = add_unchecked(c, acc, P);
        k >>= 1;
        if (k > 0) P = add_unchecked(c, P, P);
    }
    return acc;
}

std::uint64_t mod_u64(const Int& v, std::uint64_t p) {
    return mpz_fdiv_ui(v.get_mpz_t(), p);
}

// Distinct rational roots of the integer quartic, found among +-d/q for d
// dividing the constant term and q dividing the leading coefficient. False
// when the constant term could not be fully factored.
bool rational_roots(const std::array<Int, 5>& coef, std::vector<Rat>& roots) {
    // coef[i] multiplies X^i
    auto eval = [&](const Rat& x) {
        Rat r = 0;
        for (int i = 4; i >= 0; --i) r = r * x + coef[i];
        return r;
    };
    if (coef[0] == 0) roots.emplace_back(0);
    Int c0 = abs(coef[0]);
    if (c0 == 0) return true;  // not reached on nonsingular fibres

    const auto f = nt::factor(c0, nt::FactorBudget::seconds(2.0));
    if (!f.is_full()) return false;

    std::vector<Int> divisors{1};
    for (const auto& pp : f.factors) {
        const std::size_t base = divisors.size();
        if (base * (pp.exponent + 1) > 2'000'000) return false;
        Int pk = 1;
        for (unsigned e = 1; e <= pp.exponent; ++e) {
            pk *= pp.prime;
            for (std::size_t i = 0; i < base; ++i) divisors.push_back(divisors[i] * pk);
        }
    }
    std::vector<Int> lead_divs;
    const Int lead = abs(coef[4]);
    for (Int q = 1; q <= lead; ++q)
        if (mpz_divisible_p(lead.get_mpz_t(), q.get_mpz_t())) lead_divs.push_back(q);

    std::set<Rat> found;
    for (const auto& d : divisors)
        for (const auto& q : lead_divs)
            for (int s : {1, -1}) {
                Rat x(s * d, q);
                x.canonicalize();
                if (sgn(eval(x)) == 0) found.insert(x);
            }
    roots.insert(roots.end(), found.begin(), found.end());
    return true;
}

}  // namespace

CurvePoint add(const FibreCurve& c, const CurvePoint& P, const CurvePoint& Q) {
    require_on_curve(c, P, "add");
    require_on_curve(c, Q, "add");
    return add_unchecked(c, P, Q);
}

CurvePoint neg(const FibreCurve& c, const CurvePoint& P) {
    require_on_curve(c, P, "neg");
    if (P.infinity) return P;
    return CurvePoint::affine(P.x, -P.y);
}

CurvePoint scalar_mul(const FibreCurve& c, const Int& k, const CurvePoint& P) {
    require_on_curve(c, P, "scalar_mul");
    return mul_unchecked(c, k, P);
}

std::array<CurvePoint, 3> two_torsion(const FibreCurve& c) {
    return {CurvePoint::affine(Rat(c.e1), 0), CurvePoint::affine(Rat(c.e2), 0), CurvePoint::affine(Rat(c.e3), 0)};
}

std::vector<CurvePoint> halve(const FibreCurve& c, const CurvePoint& P) {
    require_on_curve(c, P, "halve");
    std::vector<CurvePoint> out;
    if (P.infinity) {
        // the halves of O are O and the 2-torsion
        out.push_back(P);
        for (const auto& T : two_torsion(c)) out.push_back(T);
        return out;
    }
    std::array<Rat, 3> r;
    const std::array<Int, 3> e{c.e1, c.e2, c.e3};
    for (int i = 0; i < 3; ++i) {
        const Rat d = P.x - e[i];
        if (sgn(d) == 0) {
            r[i] = 0;
            continue;
        }
        auto s = nt::is_square_rational(d);
        if (!s) return out;
        r[i] = *s;
    }
    std::set<CurvePoint> seen;
    for (int mask = 0; mask < 8; ++mask) {
        const Rat r1 = (mask & 1) ? Rat(-r[0]) : r[0];
        const Rat r2 = (mask & 2) ? Rat(-r[1]) : r[1];
        const Rat r3 = (mask & 4) ? Rat(-r[2]) : r[2];
        Rat X = P.x + r1 * r2 + r1 * r3 + r2 * r3;
        X.canonicalize();
        const Rat rhs = cubic(c, X);
        Rat Y = 0;
        if (sgn(rhs) != 0) {
            auto y = nt::is_square_rational(rhs);
            if (!y) continue;
            Y = *y;
        }
        for (int s : {1, -1}) {
            const auto Q = CurvePoint::affine(X, s * Y);
            if (seen.count(Q)) continue;
            if (add_unchecked(c, Q, Q) == P) {
                seen.insert(Q);
                out.push_back(Q);
            }
        }
    }
    return out;
}

std::uint64_t count_points_mod_p(const FibreCurve& c, std::uint64_t p) {
    if (p < 3 || p > 100'000 || !nt::is_prime_u64(p))
        throw std::invalid_argument("count_points_mod_p: p = " + std::to_string(p) + " is not an odd prime <= 100000");
    const std::uint64_t r1 = mod_u64(c.e1, p), r2 = mod_u64(c.e2, p), r3 = mod_u64(c.e3, p);
    if (r1 == r2 || r1 == r3 || r2 == r3)
        throw std::invalid_argument("count_points_mod_p: bad reduction at p = " + std::to_string(p) + " on " +
                                    c.provenance());

    std::vector<char> is_sq(p, 0);
    for (std::uint64_t y = 1; y < p; ++y) is_sq[y * y % p] = 1;

    // Y^2 = (X - e1)(X - e2)(X - e3)
    std::uint64_t count = 1;
    for (std::uint64_t x = 0; x < p; ++x) {
        const std::uint64_t v = (x + p - r1) % p * ((x + p - r2) % p) % p * ((x + p - r3) % p) % p;
        count += v == 0 ? 1 : (is_sq[v] ? 2 : 0);
    }
    return count;
}

unsigned small_order(const FibreCurve& c, const CurvePoint& P) {
    require_on_curve(c, P, "small_order");
    if (P.infinity) return 1;
    // torsion points on an integral model have integral coordinates
    if (P.x.get_den() != 1 || P.y.get_den() != 1) return 0;
    CurvePoint acc = P;
    for (unsigned k = 1; k <= 16; ++k) {
        if (acc.infinity) return k;
        acc = add_unchecked(c, acc, P);
    }
    return 0;
}

bool TorsionGroup::contains(const CurvePoint& P) const {
    return std::binary_search(points.begin(), points.end(), P);
}

TorsionGroup torsion_subgroup(const FibreCurve& c) {
    TorsionGroup g;

    for (std::uint64_t p = 3; g.primes_used.size() < 5; p += 2) {
        if (!nt::is_prime_u64(p)) continue;
        const std::uint64_t r1 = mod_u64(c.e1, p), r2 = mod_u64(c.e2, p), r3 = mod_u64(c.e3, p);
        if (r1 == r2 || r1 == r3 || r2 == r3) continue;
        g.order_bound = std::gcd(g.order_bound, count_points_mod_p(c, p));
        g.primes_used.push_back(p);
    }
    const std::uint64_t cap = std::min<std::uint64_t>(g.order_bound, 16);

    std::set<CurvePoint> pts{CurvePoint::at_infinity()};
    for (const auto& T : two_torsion(c)) pts.insert(T);

    auto close_under_addition = [&] {
        bool grew = true;
        while (grew && pts.size() <= cap) {
            grew = false;
            const std::vector<CurvePoint> cur(pts.begin(), pts.end());
            for (const auto& P : cur)
                for (const auto& Q : cur)
                    if (pts.insert(add_unchecked(c, P, Q)).second) grew = true;
        }
    };

    // 2-power part by repeated halving
    bool grew = true;
    while (grew && pts.size() < cap) {
        grew = false;
        const std::vector<CurvePoint> cur(pts.begin(), pts.end());
        for (const auto& P : cur)
            for (const auto& H : halve(c, P))
                if (pts.insert(H).second) grew = true;
        close_under_addition();
    }

    // 3-torsion from the rational roots of psi_3
    if (g.order_bound % 3 == 0 && pts.size() < cap) {
        const Int a2 = c.a2(), a4 = c.a4(), a6 = c.a6();
        const std::array<Int, 5> psi3{4 * a2 * a6 - a4 * a4, 12 * a6, 6 * a4, 4 * a2, 3};
        std::vector<Rat> roots;
        if (!rational_roots(psi3, roots)) g.lower_bound_only = true;
        for (const auto& X : roots) {
            const Rat rhs = cubic(c, X);
            if (sgn(rhs) == 0) continue;
            if (auto y = nt::is_square_rational(rhs)) {
                pts.insert(CurvePoint::affine(X, *y));
                pts.insert(CurvePoint::affine(X, -*y));
            }
        }
        close_under_addition();
    }

    if (pts.size() > 16) throw std::logic_error("torsion exceeds the Mazur bound on " + c.provenance());
    g.points.assign(pts.begin(), pts.end());

    unsigned exponent = 1;
    for (const auto& P : g.points) {
        const unsigned k = small_order(c, P);
        if (k == 0) throw std::logic_error("non-torsion point in torsion closure on " + c.provenance());
        exponent = std::max(exponent, k);
    }
    g.d2 = exponent;
    g.d1 = static_cast<unsigned>(g.points.size()) / exponent;
    if (g.d1 * g.d2 != g.points.size() || g.d2 % g.d1 != 0)
        throw std::logic_error("torsion structure is not Z/d1 + Z/d2 on " + c.provenance());
    return g;
}

}  // namespace brickforge::ecq
