#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>

namespace dyadlab {

using BigInt = mpz_class;
using Rational = mpq_class;

struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// 2^e for any integer e.
Rational pow2(long e);

/// Floor toward negative infinity.
BigInt floor_of(const Rational& x);

/// log2(x) for x > 0; accurate to double precision for arbitrarily large
/// numerators and denominators.
double log2_of(const Rational& x);

/// k when x == 2^k exactly.
std::optional<long> exact_log2(const Rational& x);

std::string to_string(const Rational& x);
double to_double(const Rational& x);

}  // namespace dyadlab
