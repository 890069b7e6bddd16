#include "dyadlab/rational.hpp"

#include <cmath>

namespace dyadlab {

Rational pow2(long e) {
    BigInt p = 1;
    if (e >= 0) {
        mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), static_cast<mp_bitcnt_t>(e));
        return Rational(p);
    }
    mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), static_cast<mp_bitcnt_t>(-e));
    return Rational(BigInt(1), p);
}

BigInt floor_of(const Rational& x) {
    BigInt q;
    mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return q;
}

static double log2_big(const BigInt& z) {
    long exp = 0;
    double mant = mpz_get_d_2exp(&exp, z.get_mpz_t());
    return std::log2(mant) + static_cast<double>(exp);
}

double log2_of(const Rational& x) {
    if (sgn(x) <= 0) throw std::domain_error("log2 of a non-positive rational");
    return log2_big(x.get_num()) - log2_big(x.get_den());
}

std::optional<long> exact_log2(const Rational& x) {
    if (sgn(x) <= 0) return std::nullopt;
    const BigInt& num = x.get_num();
    const BigInt& den = x.get_den();
    if (den == 1) {
        if (mpz_popcount(num.get_mpz_t()) != 1) return std::nullopt;
        return static_cast<long>(mpz_scan1(num.get_mpz_t(), 0));
    }
    if (num != 1 || mpz_popcount(den.get_mpz_t()) != 1) return std::nullopt;
    return -static_cast<long>(mpz_scan1(den.get_mpz_t(), 0));
}

std::string to_string(const Rational& x) {
    return x.get_str();
}

double to_double(const Rational& x) {
    return x.get_d();
}

}  // namespace dyadlab
