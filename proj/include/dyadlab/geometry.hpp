#pragma once

// Exact geometry of Q^n: rational points, r-dyadic cubes, open balls of
// radius 2^-r, the prefix-free point encoding fed to the TPM, and the
// pointwise complexities K(q), K(E) and K_r(x).

#include "dyadlab/bitstring.hpp"
#include "dyadlab/rational.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace dyadlab::geo {

inline constexpr std::string_view kEncodingVersion = "sign-gamma-1";
inline constexpr std::size_t kMaxDimension = 4;

class RationalPoint {
public:
    RationalPoint() = default;
    explicit RationalPoint(std::vector<Rational> coords);
    RationalPoint(std::initializer_list<Rational> coords)
        : RationalPoint(std::vector<Rational>(coords)) {}

    std::size_t dim() const noexcept { return coords_.size(); }
    const Rational& operator[](std::size_t i) const { return coords_[i]; }
    const std::vector<Rational>& coords() const noexcept { return coords_; }

    std::string to_string() const;

    friend bool operator==(const RationalPoint& a, const RationalPoint& b) { return a.coords_ == b.coords_; }
    friend bool operator<(const RationalPoint& a, const RationalPoint& b) { return a.coords_ < b.coords_; }

private:
    std::vector<Rational> coords_;
};

Rational squared_distance(const RationalPoint& a, const RationalPoint& b);

/// 2^-r * prod [m_i, m_i + 1), half-open in every coordinate.
struct DyadicCube {
    unsigned r = 0;
    std::vector<BigInt> address;

    std::size_t dim() const noexcept { return address.size(); }
    bool contains(const RationalPoint& q) const;
    RationalPoint lower_corner() const;
    RationalPoint center() const;
    Rational side() const { return pow2(-static_cast<long>(r)); }
    std::string to_string() const;

    friend bool operator==(const DyadicCube&, const DyadicCube&) = default;
    friend bool operator<(const DyadicCube& a, const DyadicCube& b) {
        return a.r != b.r ? a.r < b.r : a.address < b.address;
    }
};

/// Open ball of radius 2^-r.
struct Ball {
    RationalPoint center;
    unsigned r = 0;

    Rational radius() const { return pow2(-static_cast<long>(r)); }
    bool contains(const RationalPoint& q) const;
};

/// Per coordinate: sign bit, gamma(|numerator| + 1), gamma(denominator).
/// Prefix-free once the dimension is fixed.
BitString encode_point(const RationalPoint& q);

/// Accepts only canonical encodings of exactly n coordinates with no
/// trailing bits (no negative zero, reduced fractions).
std::optional<RationalPoint> decode_point(const BitString& bits, std::size_t n);

/// K(q) = exact_k(encode_point(q)).
std::size_t k_of_point(const RationalPoint& q);

/// Memoizes k_of_point by encoding. Not safe for concurrent mutation.
class ComplexityCache {
public:
    std::size_t k_of_point(const RationalPoint& q);
    std::size_t size() const noexcept { return cache_.size(); }

private:
    std::unordered_map<BitString, std::size_t> cache_;
};

/// min over E of K(q); nullopt stands for K(empty) = +infinity.
std::optional<std::size_t> k_of_set(std::span<const RationalPoint> points, ComplexityCache& cache);

DyadicCube cube_of_point(const RationalPoint& x, unsigned r);

bool ball_intersects_cube(const Ball& ball, const DyadicCube& cube);

/// prod_i { 2^-r (floor(2^r q_i) + d) : d in {-2..2} }, lexicographic.
std::vector<RationalPoint> neighbor_product_set(const RationalPoint& q, unsigned r);
std::vector<std::vector<BigInt>> neighbor_address_set(const RationalPoint& q, unsigned r);

/// Deterministic stream of binary digits after the binary point (index >= 1).
class BitGenerator {
public:
    virtual ~BitGenerator() = default;
    virtual bool bit(std::size_t index) const = 0;
    virtual std::string describe() const = 0;
    /// Value of 0.b1 b2 ... when it is known to be rational.
    virtual std::optional<Rational> value() const { return std::nullopt; }
};

/// Bits drawn from a seeded mt19937_64; cached so `bit` stays a pure lookup.
class PseudoRandomBits final : public BitGenerator {
public:
    explicit PseudoRandomBits(std::uint64_t seed);
    bool bit(std::size_t index) const override;
    std::string describe() const override;

private:
    std::uint64_t seed_;
    mutable std::mt19937_64 rng_;
    mutable std::vector<bool> bits_;
};

/// prefix followed by `period` repeated forever.
class EventuallyPeriodicBits final : public BitGenerator {
public:
    EventuallyPeriodicBits(std::string prefix, std::string period);
    bool bit(std::size_t index) const override;
    std::string describe() const override;
    std::optional<Rational> value() const override;

private:
    std::string prefix_;
    std::string period_;
};

/// integer_part + 0.b1 b2 b3 ... in binary.
struct GeneratedCoordinate {
    BigInt integer_part = 0;
    std::shared_ptr<const BitGenerator> fraction;
};

/// A point known exactly, or through per-coordinate digit generators.
class PointDescriptor {
public:
    PointDescriptor(RationalPoint exact);  // NOLINT(implicit)
    explicit PointDescriptor(std::vector<GeneratedCoordinate> coords);

    std::size_t dim() const noexcept;
    const RationalPoint* exact() const noexcept { return std::get_if<RationalPoint>(&value_); }
    /// The exact point, or the rational a fully periodic generator denotes.
    std::optional<RationalPoint> rational_value() const;
    /// Closed interval [lo, hi] of coordinate i certified at `bits` fractional bits.
    std::pair<Rational, Rational> interval(std::size_t i, std::size_t bits) const;
    std::string describe() const;

private:
    std::variant<RationalPoint, std::vector<GeneratedCoordinate>> value_;
};

/// Certified |q - x| < 2^-r. Generated points are bracketed at 2r+8
/// fractional bits and refined when undecided; a distance that stays
/// undecided after refinement counts as "not inside".
bool within_open_ball(const PointDescriptor& x, const RationalPoint& q, unsigned r);

/// Candidate set for K_r(x): dyadic points with denominator 2^e, e <= r + guard,
/// strictly within 2^-r of x, plus x itself when x is rational.
std::vector<RationalPoint> precision_candidates(const PointDescriptor& x, unsigned r, unsigned guard);

struct PrecisionComplexity {
    std::size_t k = 0;
    RationalPoint witness;
    std::size_t candidate_count = 0;
};

PrecisionComplexity k_at_precision(const PointDescriptor& x, unsigned r, unsigned guard, ComplexityCache& cache);

}  // namespace dyadlab::geo
