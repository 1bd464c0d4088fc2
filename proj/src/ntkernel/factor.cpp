#include "brickforge/ntkernel.hpp"

#include <algorithm>
#include <stdexcept>
#include <map>

namespace brickforge::nt {
namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;
using Clock = std::chrono::steady_clock;

constexpr std::uint32_t kTrialLimit = 1'000'000;
constexpr u64 kBatch = 128;  // products accumulated per gcd

// Montgomery arithmetic for odd 64-bit moduli.
struct Montgomery {
    u64 n;
    u64 n_inv;  // -n^{-1} mod 2^64
    u64 r2;     // 2^128 mod n

    explicit Montgomery(u64 mod) : n(mod) {
        u64 inv = n;
        for (int i = 0; i < 6; ++i) inv *= 2 - n * inv;
        n_inv = ~inv + 1;
        const u64 r1 = (0 - n) % n;  // 2^64 mod n
        r2 = static_cast<u64>(static_cast<u128>(r1) * r1 % n);
    }
    u64 redc(u128 t) const {
        u64 m = static_cast<u64>(t) * n_inv;
        u128 s = t + static_cast<u128>(m) * n;
        u64 hi = static_cast<u64>(s >> 64);
        // carry out of t + m*n
        bool carry = s < t;
        if (carry || hi >= n) hi -= n;
        return hi;
    }
    u64 to(u64 a) const { return redc(static_cast<u128>(a % n) * r2); }
    u64 mul(u64 a, u64 b) const { return redc(static_cast<u128>(a) * b); }
};

u64 gcd_u64(u64 a, u64 b) {
    while (b) {
        u64 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

struct RhoBudget {
    std::uint64_t iterations_left;
    Clock::time_point deadline;
    bool exhausted() const { return iterations_left == 0 || Clock::now() >= deadline; }
    // Consumes up to `want` iterations; false once nothing is left.
    bool take(std::uint64_t want) {
        if (exhausted()) return false;
        iterations_left -= std::min(iterations_left, want);
        return true;
    }
};

std::optional<u64> brent_u64(u64 n, u64 c, RhoBudget& budget) {
    const Montgomery mg(n);
    const u64 cm = mg.to(c);
    auto f = [&](u64 x) {
        u64 y = mg.mul(x, x) + cm;
        if (y >= n || y < cm) y -= n;
        return y;
    };
    u64 y = mg.to(2), x = y, ys = y, q = mg.to(1), g = 1;
    for (u64 r = 1; g == 1; r <<= 1) {
        x = y;
        if (!budget.take(r)) return std::nullopt;
        for (u64 i = 0; i < r; ++i) y = f(y);
        for (u64 k = 0; k < r && g == 1; k += kBatch) {
            ys = y;
            const u64 lim = std::min(kBatch, r - k);
            if (!budget.take(lim)) return std::nullopt;
            for (u64 i = 0; i < lim; ++i) {
                y = f(y);
                q = mg.mul(q, x > y ? x - y : y - x);
            }
            g = gcd_u64(q, n);
        }
    }
    if (g == n) {
        do {
            ys = f(ys);
            g = gcd_u64(x > ys ? x - ys : ys - x, n);
        } while (g == 1);
    }
    if (g == n || g == 1) return std::nullopt;
    return g;
}

std::optional<Int> brent_mpz(const Int& n, u64 c, RhoBudget& budget) {
    Int y = 2, x, ys, q = 1, g = 1, diff, cc = c;
    auto f = [&](Int& v) {
        v *= v;
        v += cc;
        mpz_mod(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
    };
    for (u64 r = 1; g == 1; r <<= 1) {
        x = y;
        if (!budget.take(r)) return std::nullopt;
        for (u64 i = 0; i < r; ++i) f(y);
        for (u64 k = 0; k < r && g == 1; k += kBatch) {
            ys = y;
            const u64 lim = std::min(kBatch, r - k);
            if (!budget.take(lim)) return std::nullopt;
            for (u64 i = 0; i < lim; ++i) {
                f(y);
                diff = x - y;
                q *= diff;
                mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
            }
            mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        }
    }
    if (g == n) {
        do {
            f(ys);
            diff = x - ys;
            mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
        } while (g == 1);
    }
    if (g == n || g == 1) return std::nullopt;
    return g;
}

std::optional<Int> split_odd_composite(const Int& n, RhoBudget& budget, u64 c0) {
    for (u64 c = c0; !budget.exhausted(); ++c) {
        if (mpz_fits_ulong_p(n.get_mpz_t())) {
            if (auto d = brent_u64(n.get_ui(), c, budget)) return Int(static_cast<unsigned long>(*d));
        } else {
            if (auto d = brent_mpz(n, c, budget)) return d;
        }
    }
    return std::nullopt;
}

// n = root^k with k maximal, or nothing.
std::optional<std::pair<Int, unsigned>> perfect_power(const Int& n) {
    if (!mpz_perfect_power_p(n.get_mpz_t())) return std::nullopt;
    const auto bits = mpz_sizeinbase(n.get_mpz_t(), 2);
    for (unsigned long k = bits; k >= 2; --k) {
        Int root;
        if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), k)) return std::make_pair(root, static_cast<unsigned>(k));
    }
    return std::nullopt;
}

}  // namespace

const std::vector<std::uint32_t>& small_primes() {
    static const std::vector<std::uint32_t> primes = [] {
        std::vector<bool> composite(kTrialLimit, false);
        std::vector<std::uint32_t> out;
        for (std::uint32_t i = 2; i < kTrialLimit; ++i) {
            if (composite[i]) continue;
            out.push_back(i);
            for (u64 j = static_cast<u64>(i) * i; j < kTrialLimit; j += i) composite[j] = true;
        }
        return out;
    }();
    return primes;
}

std::optional<Int> pollard_brent(const Int& n, std::uint64_t max_iterations, std::uint64_t seed_c) {
    RhoBudget budget{max_iterations, Clock::time_point::max()};
    return split_odd_composite(n, budget, seed_c);
}

Factorization factor(const Int& n, const FactorBudget& budget) {
    if (n < 1) throw std::domain_error("factor: input must be >= 1, got " + n.get_str());

    std::map<Int, unsigned> found;
    Int rest = n;

    // Stage 1: trial division.
    for (std::uint32_t p : small_primes()) {
        if (rest == 1) break;
        if (static_cast<u64>(p) * p > rest) {
            found[rest] += 1;
            rest = 1;
            break;
        }
        if (!mpz_divisible_ui_p(rest.get_mpz_t(), p)) continue;
        unsigned e = 0;
        do {
            mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
            ++e;
        } while (mpz_divisible_ui_p(rest.get_mpz_t(), p));
        found[Int(p)] += e;
    }

    // Stage 2: rho on whatever survived. Work items carry a multiplicity so
    // prime powers split once.
    Int residual = 1;
    if (rest > 1) {
        RhoBudget rho{budget.rho_iterations, Clock::now() + budget.wall};
        std::vector<std::pair<Int, unsigned>> work{{rest, 1}};
        while (!work.empty()) {
            auto [m, mult] = work.back();
            work.pop_back();
            if (m == 1) continue;
            if (is_prime(m)) {
                found[m] += mult;
                continue;
            }
            if (auto pp = perfect_power(m)) {
                work.emplace_back(pp->first, mult * pp->second);
                continue;
            }
            auto d = split_odd_composite(m, rho, 1);
            if (!d) {
                Int pw;
                mpz_pow_ui(pw.get_mpz_t(), m.get_mpz_t(), mult);
                residual *= pw;
                continue;
            }
            Int other = m / *d;
            // Pull shared factors apart so the pieces stay coprime.
            Int g = gcd(*d, other);
            if (g > 1) {
                work.emplace_back(g, mult);
                work.emplace_back(*d / g, mult);
                work.emplace_back(other / g, mult);
                // g appears in both halves
                work.emplace_back(g, mult);
            } else {
                work.emplace_back(*d, mult);
                work.emplace_back(other, mult);
            }
        }
    }

    Factorization out;
    for (auto& [p, e] : found) out.factors.push_back({p, e});
    out.residual = residual;
    out.status = residual == 1 ? FactorStatus::full : FactorStatus::partial;
    return out;
}

}  // namespace brickforge::nt
