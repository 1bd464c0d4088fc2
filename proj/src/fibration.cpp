#include "brickforge/fibration.hpp"

#include <stdexcept>
#include <vector>

namespace brickforge {

Int FibreCurve::a4() const { return -4 * gamma * gamma * gamma * gamma; }
Int FibreCurve::a6() const { return a4() * B; }

namespace fibration {

FibreCurve build_fibre(const Int& m, const Int& n) {
    if (auto adm = pair_admissibility(m, n); !adm)
        throw std::invalid_argument("fibre (" + m.get_str() + "," + n.get_str() + ") is not admissible: " + adm.reason);
    FibreCurve c;
    c.m = m;
    c.n = n;
    c.U2 = m * m - n * n;
    c.V2 = 2 * m * n;
    c.gamma = c.V2;
    c.A = c.gamma * c.gamma;
    c.C = c.A;
    c.B = 4 * c.U2 * c.U2 - 2 * c.V2 * c.V2;
    c.e1 = -c.B;
    c.e2 = 2 * c.A;
    c.e3 = -2 * c.A;
    if (c.e1 == c.e2 || c.e1 == c.e3) throw std::logic_error("singular fibre " + c.provenance());
    return c;
}

Rat quartic_rhs(const FibreCurve& c, const Rat& t) {
    const Rat t2 = t * t;
    Rat r = Rat(c.A) * t2 * t2 + Rat(c.B) * t2 + Rat(c.C);
    r.canonicalize();
    return r;
}

bool on_curve(const FibreCurve& c, const CurvePoint& P) {
    if (P.infinity) return true;
    const Rat& X = P.x;
    const Rat g4 = Rat(c.gamma * c.gamma * c.gamma * c.gamma);
    return P.y * P.y == (X + c.B) * (X * X - 4 * g4);
}

CurvePoint phi(const FibreCurve& c, const Rat& t, const Rat& s) {
    if (sgn(t) == 0) throw std::invalid_argument("phi: t = 0 is the base point and maps to infinity");
    if (s * s != quartic_rhs(c, t)) throw std::invalid_argument("phi: (t, s) is not on the quartic");
    const Rat g = c.gamma;
    const Rat g4 = Rat(c.gamma * c.gamma * c.gamma * c.gamma);
    Rat X = 2 * g * (s + g) / (t * t);
    X.canonicalize();
    Rat Y = t * (X * X - 4 * g4) / (2 * g);
    Y.canonicalize();
    auto P = CurvePoint::affine(X, Y);
    if (!on_curve(c, P)) throw std::logic_error("phi: image is off the cubic on " + c.provenance());
    return P;
}

std::optional<Rat> tau(const FibreCurve& c, const CurvePoint& P) {
    if (P.infinity) return std::nullopt;
    const Rat g2 = Rat(c.A);
    const Rat den = P.x * P.x - 4 * g2 * g2;
    if (sgn(den) == 0) return std::nullopt;
    Rat r = 4 * g2 * (P.x + c.B) / den;
    r.canonicalize();
    return r;
}

std::optional<EuclidPair> lift_point(const FibreCurve& c, const CurvePoint& P) {
    const auto tv = tau(c, P);
    if (!tv || sgn(*tv) <= 0) return std::nullopt;
    const auto t = nt::is_square_rational(*tv);
    if (!t) return std::nullopt;
    // |t| in lowest terms
    const Rat at = abs(*t);
    const Int& a = at.get_num();
    const Int& b = at.get_den();
    if (!pair_admissibility(a, b)) return std::nullopt;
    return EuclidPair{a, b};
}

CurvePoint point_from_hit(const FibreCurve& c, const EuclidPair& ab) {
    const auto t = MasterTuple{ab, {c.m, c.n}};
    const auto Q = is_master_hit(t);
    if (!Q) throw std::invalid_argument("point_from_hit: " + t.to_string() + " is not a master hit");
    Rat tt(ab.a, ab.b);
    tt.canonicalize();
    Rat s(*Q, ab.b * ab.b);
    s.canonicalize();
    return phi(c, tt, s);
}

namespace {

// Dense polynomial in t over Q, lowest degree first.
struct Poly {
    std::vector<Rat> c;

    Poly() = default;
    Poly(std::initializer_list<Rat> init) : c(init) { trim(); }

    void trim() {
        while (!c.empty() && sgn(c.back()) == 0) c.pop_back();
    }
    bool is_zero() const { return c.empty(); }

    friend Poly operator+(const Poly& l, const Poly& r) {
        Poly out;
        out.c.resize(std::max(l.c.size(), r.c.size()));
        for (std::size_t i = 0; i < l.c.size(); ++i) out.c[i] += l.c[i];
        for (std::size_t i = 0; i < r.c.size(); ++i) out.c[i] += r.c[i];
        out.trim();
        return out;
    }
    friend Poly operator-(const Poly& l, const Poly& r) {
        Poly neg = r;
        for (auto& v : neg.c) v = -v;
        return l + neg;
    }
    friend Poly operator*(const Poly& l, const Poly& r) {
        Poly out;
        if (l.is_zero() || r.is_zero()) return out;
        out.c.assign(l.c.size() + r.c.size() - 1, Rat(0));
        for (std::size_t i = 0; i < l.c.size(); ++i)
            for (std::size_t j = 0; j < r.c.size(); ++j) out.c[i + j] += l.c[i] * r.c[j];
        out.trim();
        return out;
    }
};

// p0 + p1 s in Q[t][s] / (s^2 - f(t))
struct QuadElem {
    Poly p0, p1;
};

struct Ring {
    Poly f;

    QuadElem add(const QuadElem& l, const QuadElem& r) const { return {l.p0 + r.p0, l.p1 + r.p1}; }
    QuadElem sub(const QuadElem& l, const QuadElem& r) const { return {l.p0 - r.p0, l.p1 - r.p1}; }
    QuadElem mul(const QuadElem& l, const QuadElem& r) const {
        return {l.p0 * r.p0 + l.p1 * r.p1 * f, l.p0 * r.p1 + l.p1 * r.p0};
    }
    static QuadElem scalar(const Poly& p) { return {p, {}}; }
    static bool is_zero(const QuadElem& e) { return e.p0.is_zero() && e.p1.is_zero(); }
};

}  // namespace

bool tau_phi_identity_holds(const FibreCurve& c) {
    const Rat g = c.gamma;
    const Rat g2 = g * g;
    const Rat g4 = g2 * g2;
    Ring R{Poly{Rat(c.C), 0, Rat(c.B), 0, Rat(c.A)}};

    const Poly t2{0, 0, 1};
    // X = xn / xd with xn = 2 gamma^2 + 2 gamma s, xd = t^2
    const QuadElem xn{Poly{2 * g2}, Poly{2 * g}};
    const QuadElem xd = Ring::scalar(t2);

    // X + B = (xn + B xd) / xd
    const QuadElem xb = R.add(xn, R.mul(Ring::scalar(Poly{Rat(c.B)}), xd));
    // X^2 - 4 gamma^4 = (xn^2 - 4 gamma^4 xd^2) / xd^2
    const QuadElem xsq = R.sub(R.mul(xn, xn), R.mul(Ring::scalar(Poly{4 * g4}), R.mul(xd, xd)));
    // tau = 4 gamma^2 (X + B) / (X^2 - 4 gamma^4) = [4 gamma^2 xb xd] / [xsq]
    const QuadElem num = R.mul(Ring::scalar(Poly{4 * g2}), R.mul(xb, xd));
    const QuadElem den = xsq;
    if (Ring::is_zero(den)) return false;
    // tau - t^2 = (num - t^2 den) / den
    return Ring::is_zero(R.sub(num, R.mul(Ring::scalar(t2), den)));
}

}  // namespace fibration
}  // namespace brickforge
