#include "brickforge/blocker_lab.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace brickforge::blocker {
namespace {

bool coprime_to_all(const Int& p, const std::set<Int>& params) {
    return std::all_of(params.begin(), params.end(), [&](const Int& v) { return gcd(p, v) == 1; });
}

// p | f1 and p^2 !| f1, by exact division.
bool exact_exponent_one(const Int& f1_value, const Int& p) {
    if (!mpz_divisible_p(f1_value.get_mpz_t(), p.get_mpz_t())) return false;
    const Int q = f1_value / p;
    return !mpz_divisible_p(q.get_mpz_t(), p.get_mpz_t());
}

}  // namespace

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::verified: return "verified";
        case Verdict::violated: return "violated";
        case Verdict::undecidable_partial: return "undecidable_partial";
    }
    return "?";
}

std::vector<nt::PrimePower> blockers(const nt::Factorization& f) {
    std::vector<nt::PrimePower> out;
    for (const auto& pp : f.factors)
        if (pp.exponent % 2 == 1) out.push_back(pp);
    std::sort(out.begin(), out.end(), [](const auto& l, const auto& r) { return l.prime < r.prime; });
    return out;
}

BlockerReport verify_blocker_conjecture(const MasterTuple& t, const nt::Factorization& f) {
    if (!is_master_hit(t)) throw std::invalid_argument("not a master hit: " + t.to_string());

    BlockerReport rep;
    rep.tuple = t;
    rep.f1_fact = f;
    rep.blockers = blockers(f);

    const Int f1v = f1(t);
    const auto params = parameter_set(t);
    for (const auto& pp : f.factors) {
        if (!coprime_to_all(pp.prime, params)) continue;
        if (pp.exponent % 2 == 1 && !rep.smallest_outside_blocker) rep.smallest_outside_blocker = pp;
        rep.largest_outside_prime = pp;
        if (pp.exponent == 1 && exact_exponent_one(f1v, pp.prime)) rep.exponent_one_outside_P.push_back(pp.prime);
    }

    if (!rep.exponent_one_outside_P.empty())
        rep.verdict = Verdict::verified;
    else if (f.is_full())
        rep.verdict = Verdict::violated;
    else
        rep.verdict = Verdict::undecidable_partial;
    return rep;
}

CanonicalDecomposition canonical_decomposition(const MasterTuple& t) {
    const auto p = triple_from_pair(t.first);
    const auto q = triple_from_pair(t.second);
    const Int X = p.W * q.U;
    const Int Y = p.U * q.V;
    const Int g0 = gcd(X, Y);
    return {g0, X / g0, Y / g0};
}

bool verify_E1(const MasterTuple& t) {
    const auto cd = canonical_decomposition(t);
    return !nt::is_perfect_square(cd.xi * cd.xi + cd.eta * cd.eta);
}

std::optional<KInvariant> k_invariant(const Int& f1_value, const Int& g0, const nt::Factorization& f) {
    if (!f.is_full()) return std::nullopt;
    const auto blk = blockers(f);
    if (std::any_of(blk.begin(), blk.end(), [](const auto& pp) { return pp.exponent != 1; })) return std::nullopt;

    KInvariant k;
    k.rf = 1;
    for (const auto& pp : blk) k.rf *= pp.prime;
    if (!mpz_divisible_p(f1_value.get_mpz_t(), k.rf.get_mpz_t()))
        throw std::logic_error("blocker product " + k.rf.get_str() + " does not divide f1");
    const auto h = nt::is_perfect_square(f1_value / k.rf);
    if (!h) throw std::logic_error("f1 / rf is not a square (factorization inconsistent with f1)");
    k.h = *h;
    if (!mpz_divisible_p(k.h.get_mpz_t(), g0.get_mpz_t()))
        throw std::logic_error("g0 = " + g0.get_str() + " does not divide h = " + k.h.get_str() +
                               "; the g0 | h relation fails on this record");
    k.k = k.h / g0;
    return k;
}

std::optional<KInvariant> k_invariant(const MasterTuple& t, const nt::Factorization& f) {
    return k_invariant(f1(t), canonical_decomposition(t).g0, f);
}

std::pair<Int, Int> gaussian_gcds(const MasterTuple& t) {
    const Int &a = t.a(), &b = t.b(), &m = t.m(), &n = t.n();
    Int plus = gcd(Int(a * m + b * n), Int(a * n + b * m));
    Int minus = gcd(Int(abs(a * m - b * n)), Int(abs(a * n - b * m)));
    return {plus, minus};
}

SemiScaledCoords semiscaled(const MasterTuple& t) {
    auto [gp, gm] = gaussian_gcds(t);
    const auto p = triple_from_pair(t.first);
    const auto q = triple_from_pair(t.second);
    const Int g = gcd(p.U, q.U);
    if (gp * gm != g)
        throw std::logic_error("g+ g- = " + Int(gp * gm).get_str() + " != gcd(U1, U2) = " + g.get_str() + " for " +
                               t.to_string());
    if (gcd(gp, gm) != 1) throw std::logic_error("gcd(g+, g-) != 1 for " + t.to_string());
    const Int f = f1(t);
    const Int gp2 = gp * gp, gm2 = gm * gm;
    if (!mpz_divisible_p(f.get_mpz_t(), gp2.get_mpz_t()) || !mpz_divisible_p(f.get_mpz_t(), gm2.get_mpz_t()))
        throw std::logic_error("g+-^2 does not divide f1 for " + t.to_string());
    return {gp, gm};
}

bool is_strictly_semiscaled(const MasterTuple& t) {
    const auto [gp, gm] = gaussian_gcds(t);
    return std::min(gp, gm) == 1 && std::max(gp, gm) > 1;
}

bool is_valid_modifier(long k) {
    if (k == 1) return true;
    if (k < 2 || k > 100 || k % 4 != 1) return false;
    return nt::is_prime_u64(static_cast<std::uint64_t>(k));
}

std::array<Int, 12> twelve_formulas(const MasterTuple& t, long k) {
    if (!is_valid_modifier(k))
        throw std::invalid_argument("modifier k = " + std::to_string(k) + " is neither 1 nor a prime p <= 100, p = 1 mod 4");
    const Int K = k;
    const Int &a = t.a(), &b = t.b(), &m = t.m(), &n = t.n();
    const Int U1 = a * a - b * b, U2 = m * m - n * n;
    const auto [gp, gm] = gaussian_gcds(t);
    return {b * U1 * K, a * U1 * K, U1 * K, b * K, a * K, n * U2 * K, m * U2 * K, U2 * K, n * K, m * K, gp * K, gm * K};
}

std::vector<FormulaProbe> probe_twelve_formulas(const MasterTuple& t, long k, const nt::Factorization& f) {
    const Int f1v = f1(t);
    const auto D = twelve_formulas(t, k);
    std::vector<FormulaProbe> out;
    for (std::size_t i = 0; i < D.size(); ++i) {
        FormulaProbe pr;
        pr.index = i;
        pr.D = D[i];
        const Int D2 = D[i] * D[i];
        pr.divides = mpz_divisible_p(f1v.get_mpz_t(), D2.get_mpz_t()) != 0;
        if (pr.divides) {
            pr.quotient = f1v / D2;
            for (const auto& pp : f.factors) {
                const unsigned vq = nt::valuation(pr.quotient, pp.prime);
                if (vq % 2 == 1) {
                    pr.exposes_blocker = true;
                    break;
                }
            }
        }
        out.push_back(std::move(pr));
    }
    return out;
}

PadicProfile padic_profile(const MasterTuple& t, const Int& p) {
    if (p < 3 || !nt::is_prime(p)) throw std::invalid_argument("padic_profile: p must be an odd prime");
    const auto P = triple_from_pair(t.first);
    const auto Q = triple_from_pair(t.second);
    PadicProfile out;
    out.alpha = nt::valuation(P.W * Q.U, p);
    out.beta = nt::valuation(P.U * Q.V, p);
    if (out.alpha != out.beta) out.predicted_v_f1 = 2 * std::min(out.alpha, out.beta);
    return out;
}

nt::Factorization factor_f1(const MasterTuple& t, const nt::FactorBudget& budget) {
    const auto cd = canonical_decomposition(t);
    const auto fg = nt::factor(cd.g0, budget);
    const auto fs = nt::factor(cd.xi * cd.xi + cd.eta * cd.eta, budget);

    std::map<Int, unsigned> merged;
    for (const auto& pp : fg.factors) merged[pp.prime] += 2 * pp.exponent;
    for (const auto& pp : fs.factors) merged[pp.prime] += pp.exponent;
    Int residual = fg.residual * fg.residual * fs.residual;

    // Listed primes hiding inside the other half's residual move into the
    // exponent list so the residual stays coprime to every listed prime.
    if (residual > 1) {
        for (auto& [p, e] : merged) {
            Int rest;
            e += static_cast<unsigned>(mpz_remove(rest.get_mpz_t(), residual.get_mpz_t(), p.get_mpz_t()));
            residual = rest;
        }
        if (residual > 1 && nt::is_prime(residual)) {
            merged[residual] += 1;
            residual = 1;
        } else if (residual > 1) {
            if (auto r = nt::is_perfect_square(residual); r && nt::is_prime(*r)) {
                merged[*r] += 2;
                residual = 1;
            }
        }
    }

    nt::Factorization out;
    for (auto& [p, e] : merged) out.factors.push_back({p, e});
    out.residual = residual;
    out.status = residual == 1 ? nt::FactorStatus::full : nt::FactorStatus::partial;
    if (out.product() != f1(t)) throw std::logic_error("factor_f1: product identity failed for " + t.to_string());
    return out;
}

}  // namespace brickforge::blocker
