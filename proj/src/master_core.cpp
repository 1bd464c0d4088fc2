#include "brickforge/master_core.hpp"

#include <algorithm>
#include <stdexcept>

namespace brickforge {
namespace {

struct Legs {
    Int U1, V1, W1, U2, V2, W2;
};

Legs legs(const MasterTuple& t) {
    const auto p = triple_from_pair(t.first);
    const auto q = triple_from_pair(t.second);
    return {p.U, p.V, p.W, q.U, q.V, q.W};
}

Int sq(const Int& v) { return v * v; }

}  // namespace

Admissibility pair_admissibility(const Int& a, const Int& b) {
    if (!(b > 0)) return {false, "b > 0 violated"};
    if (!(a > b)) return {false, "a > b violated"};
    if (gcd(a, b) != 1) return {false, "gcd(a, b) = " + Int(gcd(a, b)).get_str()};
    if (mpz_even_p(Int(a - b).get_mpz_t())) return {false, "a - b even"};
    return {true, {}};
}

Admissibility is_admissible(const Int& a, const Int& b, const Int& m, const Int& n) {
    if (!(a > b && b > 0)) return {false, "ordering a > b > 0 violated"};
    if (!(m > n && n > 0)) return {false, "ordering m > n > 0 violated"};
    if (gcd(a, b) != 1) return {false, "gcd(a, b) = " + Int(gcd(a, b)).get_str()};
    if (gcd(m, n) != 1) return {false, "gcd(m, n) = " + Int(gcd(m, n)).get_str()};
    if (mpz_even_p(Int(a - b).get_mpz_t())) return {false, "a - b even"};
    if (mpz_even_p(Int(m - n).get_mpz_t())) return {false, "m - n even"};
    return {true, {}};
}

MasterTuple MasterTuple::make(const Int& a, const Int& b, const Int& m, const Int& n) {
    if (auto adm = is_admissible(a, b, m, n); !adm)
        throw std::invalid_argument("inadmissible tuple (" + a.get_str() + "," + b.get_str() + "," +
                                    m.get_str() + "," + n.get_str() + "): " + adm.reason);
    return MasterTuple{{a, b}, {m, n}};
}

std::string MasterTuple::to_string() const {
    return "(" + a().get_str() + "," + b().get_str() + "," + m().get_str() + "," + n().get_str() + ")";
}

PythTriple triple_from_pair(const EuclidPair& p) {
    return {p.a * p.a - p.b * p.b, 2 * p.a * p.b, p.a * p.a + p.b * p.b};
}

Int master_norm(const MasterTuple& t) {
    const auto L = legs(t);
    return sq(L.V1 * L.U2) + sq(L.U1 * L.V2);
}

std::optional<Int> is_master_hit(const MasterTuple& t) { return nt::is_perfect_square(master_norm(t)); }

Int f1(const MasterTuple& t) {
    const auto L = legs(t);
    return sq(L.W1 * L.U2) + sq(L.U1 * L.V2);
}

Brick edges(const MasterTuple& t) {
    const auto L = legs(t);
    Brick br;
    br.x = L.U1 * L.U2;
    br.y = L.V1 * L.U2;
    br.z = L.U1 * L.V2;
    br.dxy = L.W1 * L.U2;
    br.dxz = L.U1 * L.W2;
    br.dyz = nt::is_perfect_square(sq(br.y) + sq(br.z));
    return br;
}

bool is_perfect_cuboid(const MasterTuple& t) {
    const auto br = edges(t);
    const bool by_edges = nt::is_perfect_square(sq(br.x) + sq(br.y) + sq(br.z)).has_value();
    const bool by_f1 = nt::is_perfect_square(f1(t)).has_value();
    if (by_edges != by_f1)
        throw std::logic_error("space diagonal verdicts disagree for " + t.to_string());
    return by_edges;
}

std::array<Int, kCanonicalCount> canonical_expressions(const MasterTuple& t) {
    const Int &a = t.a(), &b = t.b(), &m = t.m(), &n = t.n();
    const auto L = legs(t);
    return {a,           b,           m,           n,           a + b,       a - b,
            m + n,       m - n,       a * a + b * b, a * a - b * b, m * m + n * n, m * m - n * n,
            a * b,       m * n,       2 * a * b,   2 * m * n,   L.W1 * L.U2, L.U1 * L.V2,
            L.W1 * L.V2, L.V1 * L.U2, L.U1 * L.U2, L.V1 * L.V2, L.W1 * L.W2, L.U1,
            L.V1,        L.W1,        L.U2,        L.V2,        L.W2};
}

std::set<Int> parameter_set(const MasterTuple& t) {
    std::set<Int> out;
    for (const auto& v : canonical_expressions(t))
        if (v > 0) out.insert(v);
    return out;
}

MasterTuple sigma_canonical(const MasterTuple& t) {
    const MasterTuple swapped{t.second, t.first};
    return std::min(t, swapped);
}

std::optional<EuclidPair> pair_from_legs(const Int& U, const Int& V) {
    if (U <= 0 || V <= 0) return std::nullopt;
    const auto W = nt::is_perfect_square(U * U + V * V);
    if (!W) return std::nullopt;
    const Int sum = *W + U, diff = *W - U;
    if (mpz_odd_p(sum.get_mpz_t()) || mpz_odd_p(diff.get_mpz_t())) return std::nullopt;
    const auto a = nt::is_perfect_square(sum / 2);
    const auto b = nt::is_perfect_square(diff / 2);
    if (!a || !b || 2 * *a * *b != V) return std::nullopt;
    return EuclidPair{*a, *b};
}

namespace {

// Splits the edges into (odd, even, even); nothing if the parity pattern is
// wrong.
std::optional<std::array<Int, 3>> odd_first(const Int& e1, const Int& e2, const Int& e3) {
    std::array<Int, 3> e{e1, e2, e3};
    if (std::any_of(e.begin(), e.end(), [](const Int& v) { return v <= 0; })) return std::nullopt;
    auto odd = std::stable_partition(e.begin(), e.end(), [](const Int& v) { return mpz_odd_p(v.get_mpz_t()) != 0; });
    if (odd - e.begin() != 1) return std::nullopt;
    return e;
}

std::array<Int, 3> sorted_edges(Int x, Int y, Int z) {
    std::array<Int, 3> e{std::move(x), std::move(y), std::move(z)};
    std::sort(e.begin(), e.end());
    return e;
}

void push_if_valid(std::vector<MasterTuple>& out, const std::optional<EuclidPair>& p,
                   const std::optional<EuclidPair>& q) {
    if (!p || !q) return;
    if (!is_admissible(p->a, p->b, q->a, q->b)) return;
    MasterTuple t{*p, *q};
    if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(std::move(t));
}

}  // namespace

std::vector<MasterTuple> recover_master_tuple(const Int& e1, const Int& e2, const Int& e3) {
    std::vector<MasterTuple> out;
    const auto e = odd_first(e1, e2, e3);
    if (!e) return out;
    const Int& x = (*e)[0];
    const auto target = sorted_edges(e1, e2, e3);
    for (int swap = 0; swap < 2; ++swap) {
        const Int& y = (*e)[1 + swap];
        const Int& z = (*e)[2 - swap];
        const Int U2 = gcd(x, y);
        const Int U1 = x / U2;
        const Int V1 = y / U2;
        if (!mpz_divisible_p(z.get_mpz_t(), U1.get_mpz_t())) continue;
        const Int V2 = z / U1;
        std::vector<MasterTuple> cand;
        push_if_valid(cand, pair_from_legs(U1, V1), pair_from_legs(U2, V2));
        for (auto& t : cand) {
            const auto br = edges(t);
            if (sorted_edges(br.x, br.y, br.z) == target &&
                std::find(out.begin(), out.end(), t) == out.end())
                out.push_back(t);
        }
    }
    return out;
}

std::vector<MasterTuple> recover_scaled_master_tuple(const Int& e1, const Int& e2, const Int& e3) {
    std::vector<MasterTuple> out;
    const auto e = odd_first(e1, e2, e3);
    if (!e) return out;
    const Int& x = (*e)[0];
    const auto target = sorted_edges(e1, e2, e3);
    for (int swap = 0; swap < 2; ++swap) {
        const Int& y = (*e)[1 + swap];
        const Int& z = (*e)[2 - swap];
        const Int g1 = gcd(x, y), g2 = gcd(x, z);
        std::vector<MasterTuple> cand;
        push_if_valid(cand, pair_from_legs(x / g1, y / g1), pair_from_legs(x / g2, z / g2));
        for (auto& t : cand) {
            // edges(t) must be proportional to the input
            const auto br = edges(t);
            auto got = sorted_edges(br.x, br.y, br.z);
            const Int gg = gcd(gcd(got[0], got[1]), got[2]);
            const Int gt = gcd(gcd(target[0], target[1]), target[2]);
            bool same = true;
            for (int i = 0; i < 3; ++i) same = same && got[i] / gg == target[i] / gt;
            if (same && std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
        }
    }
    return out;
}

}  // namespace brickforge
