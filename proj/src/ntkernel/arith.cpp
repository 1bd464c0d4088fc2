#include "brickforge/ntkernel.hpp"

#include <stdexcept>

namespace brickforge::nt {

Int isqrt(const Int& n) {
    if (sgn(n) < 0) throw std::domain_error("isqrt: negative input " + n.get_str());
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

std::optional<Int> is_perfect_square(const Int& n) {
    if (sgn(n) < 0) return std::nullopt;
    if (!mpz_perfect_square_p(n.get_mpz_t())) return std::nullopt;
    return isqrt(n);
}

std::optional<Rat> is_square_rational(const Rat& q) {
    if (sgn(q) <= 0) return std::nullopt;
    auto num = is_perfect_square(q.get_num());
    if (!num) return std::nullopt;
    auto den = is_perfect_square(q.get_den());
    if (!den) return std::nullopt;
    Rat r(*num, *den);
    r.canonicalize();
    return r;
}

unsigned valuation(const Int& n, const Int& p) {
    if (sgn(n) == 0) throw std::domain_error("valuation: v_p(0) is infinite");
    if (p < 2) throw std::domain_error("valuation: modulus must be >= 2");
    Int rest;
    return static_cast<unsigned>(mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t()));
}

Int Factorization::product() const {
    Int acc = residual;
    for (const auto& pp : factors) {
        Int pw;
        mpz_pow_ui(pw.get_mpz_t(), pp.prime.get_mpz_t(), pp.exponent);
        acc *= pw;
    }
    return acc;
}

unsigned Factorization::exponent_of(const Int& p) const {
    for (const auto& pp : factors)
        if (pp.prime == p) return pp.exponent;
    return 0;
}

std::string to_string(FactorStatus s) { return s == FactorStatus::full ? "full" : "partial"; }

FactorBudget FactorBudget::seconds(double s) {
    FactorBudget b;
    b.wall = std::chrono::milliseconds(static_cast<std::int64_t>(s * 1000.0));
    return b;
}

}  // namespace brickforge::nt
