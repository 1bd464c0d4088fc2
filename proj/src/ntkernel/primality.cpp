#include "brickforge/ntkernel.hpp"

#include <array>

namespace brickforge::nt {
namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

constexpr std::array<u64, 12> kBases = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod(u64 b, u64 e, u64 m) {
    u64 r = 1;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod(r, b, m);
        b = mulmod(b, b, m);
        e >>= 1;
    }
    return r;
}

bool strong_probable_prime_u64(u64 n, u64 base, u64 d, unsigned s) {
    u64 x = powmod(base, d, n);
    if (x == 1 || x == n - 1) return true;
    for (unsigned r = 1; r < s; ++r) {
        x = mulmod(x, x, n);
        if (x == n - 1) return true;
        if (x == 1) return false;
    }
    return false;
}

bool strong_probable_prime(const Int& n, unsigned long base) {
    Int d = n - 1;
    unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
    mpz_tdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);
    Int x;
    Int b = base;
    mpz_powm(x.get_mpz_t(), b.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
    const Int nm1 = n - 1;
    if (x == 1 || x == nm1) return true;
    for (unsigned long r = 1; r < s; ++r) {
        x = x * x % n;
        if (x == nm1) return true;
        if (x == 1) return false;
    }
    return false;
}

// x/2 mod n for odd n
void half_mod(Int& x, const Int& n) {
    if (mpz_odd_p(x.get_mpz_t())) x += n;
    mpz_tdiv_q_2exp(x.get_mpz_t(), x.get_mpz_t(), 1);
}

void reduce(Int& x, const Int& n) { mpz_mod(x.get_mpz_t(), x.get_mpz_t(), n.get_mpz_t()); }

}  // namespace

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (u64 p : kBases) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    u64 d = n - 1;
    unsigned s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : kBases)
        if (!strong_probable_prime_u64(n, a, d, s)) return false;
    return true;
}

bool is_strong_lucas_prp(const Int& n) {
    // Perfect squares never produce (D/n) = -1.
    if (mpz_perfect_square_p(n.get_mpz_t())) return false;
    // Selfridge method A: first D in 5, -7, 9, -11, ... with (D/n) = -1.
    long D = 5;
    for (;;) {
        Int dd = D;
        int j = mpz_jacobi(dd.get_mpz_t(), n.get_mpz_t());
        if (j == -1) break;
        if (j == 0) {
            // gcd(D, n) > 1; n is prime only if it equals |D|
            Int absd = D < 0 ? -D : D;
            return n == absd;
        }
        D = D > 0 ? -(D + 2) : -(D - 2);
    }
    const long P = 1;
    const long Q = (1 - D) / 4;

    Int d = n + 1;
    unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
    mpz_tdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);

    Int U = 1, V = P, Qk = Q;
    reduce(Qk, n);
    const Int Qn = [&] { Int q = Q; reduce(q, n); return q; }();
    const Int Dn = [&] { Int q = D; reduce(q, n); return q; }();

    const long bits = static_cast<long>(mpz_sizeinbase(d.get_mpz_t(), 2));
    for (long i = bits - 2; i >= 0; --i) {
        U = U * V;
        reduce(U, n);
        V = V * V - 2 * Qk;
        reduce(V, n);
        Qk = Qk * Qk;
        reduce(Qk, n);
        if (mpz_tstbit(d.get_mpz_t(), static_cast<mp_bitcnt_t>(i))) {
            Int u2 = P * U + V;
            Int v2 = Dn * U + P * V;
            half_mod(u2, n);
            half_mod(v2, n);
            U = u2;
            V = v2;
            reduce(U, n);
            reduce(V, n);
            Qk = Qk * Qn;
            reduce(Qk, n);
        }
    }
    if (sgn(U) == 0 || sgn(V) == 0) return true;
    for (unsigned long r = 1; r < s; ++r) {
        V = V * V - 2 * Qk;
        reduce(V, n);
        if (sgn(V) == 0) return true;
        Qk = Qk * Qk;
        reduce(Qk, n);
    }
    return false;
}

bool is_prime(const Int& n) {
    if (n < 2) return false;
    if (mpz_fits_ulong_p(n.get_mpz_t())) return is_prime_u64(n.get_ui());
    for (u64 p : kBases)
        if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return false;
    // Cheap filter before the expensive tests.
    for (std::uint32_t p : small_primes()) {
        if (p > 2000) break;
        if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return false;
    }
    return strong_probable_prime(n, 2) && is_strong_lucas_prp(n);
}

}  // namespace brickforge::nt
