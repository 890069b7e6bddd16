#include "dyadlab/geometry.hpp"
#include "dyadlab/tpm.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

using namespace dyadlab;
using namespace dyadlab::geo;

namespace {

Rational q(long num, long den = 1) {
    Rational v(num, den);
    v.canonicalize();
    return v;
}

RationalPoint random_point(std::mt19937_64& rng, std::size_t n, long span = 1000) {
    std::uniform_int_distribution<long> num(-span, span), den(1, 64);
    std::vector<Rational> c;
    for (std::size_t i = 0; i < n; ++i) c.push_back(q(num(rng), den(rng)));
    return RationalPoint(std::move(c));
}

// Minimum K over every dyadic m/2^e (e <= r + guard) strictly within 2^-r
// of a rational x, plus x itself: scanned without the candidate generator.
std::size_t brute_k_at_precision(const Rational& x, unsigned r, unsigned guard) {
    std::size_t best = k_of_point(RationalPoint{x});
    for (unsigned e = 0; e <= r + guard; ++e) {
        const long scale = 1L << e;
        const long lo = static_cast<long>(std::floor(to_double(x) * scale)) - scale;
        for (long m = lo; m <= lo + 2 * scale + 1; ++m) {
            Rational c = q(m, scale);
            Rational d = c - x;
            if (d * d < pow2(-2 * static_cast<long>(r))) best = std::min(best, k_of_point(RationalPoint{c}));
        }
    }
    return best;
}

}  // namespace

TEST_CASE("point encoding") {
    CHECK(encode_point(RationalPoint{q(0)}).str() == "011");
    CHECK(encode_point(RationalPoint{q(-1, 2)}).str() == "1010010");

    std::mt19937_64 rng(3);
    std::set<std::string> codes;
    std::set<RationalPoint> points;
    for (int i = 0; i < 10000; ++i) {
        auto p = random_point(rng, 1 + i % 4);
        auto code = encode_point(p);
        auto back = decode_point(code, p.dim());
        REQUIRE(back.has_value());
        CHECK(*back == p);
        if (points.insert(p).second) CHECK(codes.insert(code.str()).second);
    }

    CHECK_FALSE(decode_point(BitString::from_string("111"), 1));     // negative zero
    CHECK_FALSE(decode_point(BitString::from_string("0011010"), 1));  // 2/2 is not in lowest terms
    CHECK_FALSE(decode_point(BitString::from_string("0110"), 1));     // trailing bit
    CHECK_FALSE(decode_point(BitString::from_string("011"), 2));      // too few coordinates
}

TEST_CASE("complexity of points and sets") {
    const RationalPoint zero{q(0)};
    const auto code = encode_point(zero);
    CHECK(k_of_point(zero) == tpm::exact_k(code));

    // brute force: the first length at which some program prints "011"
    std::size_t shortest = 0;
    for (unsigned L = 2; L <= 12 && !shortest; ++L)
        tpm::enumerate_programs(L, 64, [&](const BitString& p, const BitString& o) {
            if (o == code && (!shortest || p.size() < shortest)) shortest = p.size();
        });
    CHECK(k_of_point(zero) == shortest);

    std::mt19937_64 rng(4);
    for (int i = 0; i < 200; ++i) {
        auto p = random_point(rng, 1 + i % 2);
        const auto len = encode_point(p).size();
        CHECK(k_of_point(p) <= len + tpm::gamma_length(len) + 3);
    }

    CHECK(k_of_point(RationalPoint{q(1, 2)}) <= k_of_point(RationalPoint{q(1234567, 2097152)}));

    ComplexityCache cache;
    std::vector<RationalPoint> pair{RationalPoint{q(1, 3)}, zero};
    REQUIRE(k_of_point(pair[0]) != k_of_point(pair[1]));
    CHECK(k_of_set(pair, cache) == std::min(k_of_point(pair[0]), k_of_point(pair[1])));
    CHECK(k_of_set(std::span(pair).first(1), cache) == k_of_point(pair[0]));
    CHECK_FALSE(k_of_set({}, cache).has_value());
    for (int i = 0; i < 100; ++i) {
        std::vector<RationalPoint> f;
        for (int j = 0; j < 6; ++j) f.push_back(random_point(rng, 1));
        CHECK(*k_of_set(std::span(f).first(3), cache) >= *k_of_set(f, cache));
    }
}

TEST_CASE("cubes") {
    CHECK(cube_of_point(RationalPoint{q(3, 10)}, 1).address == std::vector<BigInt>{0});
    CHECK(cube_of_point(RationalPoint{q(-1, 4)}, 0).address == std::vector<BigInt>{-1});
    CHECK(cube_of_point(RationalPoint{q(1, 2)}, 1).address == std::vector<BigInt>{1});

    std::mt19937_64 rng(8);
    for (int i = 0; i < 300; ++i) {
        const auto x = random_point(rng, 1 + i % 3, 50);
        for (unsigned r = 0; r <= 12; ++r) {
            const auto cube = cube_of_point(x, r);
            CHECK(cube.contains(x));
            // exactly one cube of the 5^n neighbourhood contains x
            int hits = 0;
            for (const auto& a : neighbor_address_set(x, r)) hits += DyadicCube{r, a}.contains(x);
            CHECK(hits == 1);
            // nesting of closures: the child's corners lie in the parent's closure
            const auto child = cube_of_point(x, r + 1);
            for (std::size_t d = 0; d < x.dim(); ++d) {
                CHECK(child.lower_corner()[d] >= cube.lower_corner()[d]);
                CHECK(child.lower_corner()[d] + child.side() <= cube.lower_corner()[d] + cube.side());
            }
        }
    }
}

TEST_CASE("balls against cubes") {
    const DyadicCube unit{0, {0, 0}};
    CHECK(ball_intersects_cube(Ball{RationalPoint{q(1, 2), q(1, 2)}, 2}, unit));
    CHECK_FALSE(ball_intersects_cube(Ball{RationalPoint{q(2), q(2)}, 1}, unit));
    CHECK(ball_intersects_cube(Ball{RationalPoint{q(1), q(1, 2)}, 1}, unit));
    // tangent from outside: closest point at distance exactly the radius
    CHECK_FALSE(ball_intersects_cube(Ball{RationalPoint{q(3, 2), q(1, 2)}, 1}, unit));

    std::mt19937_64 rng(9);
    for (int i = 0; i < 200; ++i) {
        const auto x = random_point(rng, 2, 40);
        const unsigned r = static_cast<unsigned>(rng() % 8);
        const auto cube = cube_of_point(x, r);
        // ball in cube: B(centre, 2^-(r+1)) stays inside the half-open cube
        const Ball inner{cube.center(), r + 1};
        for (int j = 0; j < 20; ++j) {
            std::vector<Rational> c;
            for (std::size_t d = 0; d < 2; ++d)
                c.push_back(cube.center()[d] + inner.radius() * q(static_cast<long>(rng() % 1401) - 700, 1000));
            RationalPoint p(std::move(c));
            if (inner.contains(p)) CHECK(cube.contains(p));
        }
        // cube in ball: the (r + ceil(log2 sqrt 2))-cube of x sits inside B(x, 2^-r)
        const auto small = cube_of_point(x, r + 1);
        const Ball around{x, r};
        for (long a = 0; a < 8; ++a)
            for (long b = 0; b < 8; ++b) {
                RationalPoint p{small.lower_corner()[0] + small.side() * q(a, 8),
                                small.lower_corner()[1] + small.side() * q(b, 8)};
                CHECK(around.contains(p));
            }
    }
}

TEST_CASE("neighbour product set") {
    auto s = neighbor_product_set(RationalPoint{q(3, 10)}, 1);
    std::vector<RationalPoint> want{RationalPoint{q(-1)}, RationalPoint{q(-1, 2)}, RationalPoint{q(0)},
                                    RationalPoint{q(1, 2)}, RationalPoint{q(1)}};
    CHECK(s == want);

    std::mt19937_64 rng(10);
    for (int i = 0; i < 100; ++i) {
        const auto x = random_point(rng, 1 + i % 3, 20);
        const unsigned r = static_cast<unsigned>(rng() % 10);
        const auto set = neighbor_product_set(x, r);
        CHECK(set.size() == static_cast<std::size_t>(std::pow(5, x.dim())));
        CHECK(std::is_sorted(set.begin(), set.end()));
        // any r-cube meeting B(p, 2^-r) with p within 2^(1-r) of x has its address in the product set
        const auto addresses = neighbor_address_set(x, r);
        for (int j = 0; j < 10; ++j) {
            std::vector<Rational> c;
            for (std::size_t d = 0; d < x.dim(); ++d)
                c.push_back(x[d] + pow2(-static_cast<long>(r)) * q(static_cast<long>(rng() % 1999) - 999, 1000));
            const RationalPoint p(std::move(c));
            if (!Ball{x, r}.contains(p)) continue;
            const auto cube = cube_of_point(p, r);
            CHECK(std::find(addresses.begin(), addresses.end(), cube.address) != addresses.end());
        }
    }
}

TEST_CASE("complexity at precision") {
    ComplexityCache cache;
    for (unsigned r = 0; r <= 10; ++r)
        CHECK(k_at_precision(RationalPoint{q(0)}, r, 2, cache).k <= k_of_point(RationalPoint{q(0)}));

    const Rational third = q(1, 3);
    const auto res = k_at_precision(RationalPoint{third}, 4, 2, cache);
    CHECK(res.k == brute_k_at_precision(third, 4, 2));
    CHECK(within_open_ball(RationalPoint{third}, res.witness, 4));

    std::mt19937_64 rng(12);
    for (int i = 0; i < 20; ++i) {
        const Rational x = q(static_cast<long>(rng() % 2001) - 1000, 1 + static_cast<long>(rng() % 97));
        for (unsigned r = 0; r <= 6; ++r) CHECK(k_at_precision(RationalPoint{x}, r, 2, cache).k == brute_k_at_precision(x, r, 2));
    }

    // nondecreasing in r, for exact and generated points
    std::vector<PointDescriptor> xs;
    for (int i = 0; i < 10; ++i) xs.push_back(random_point(rng, 1 + i % 2));
    for (std::uint64_t s = 1; s <= 5; ++s)
        xs.push_back(PointDescriptor({GeneratedCoordinate{0, std::make_shared<PseudoRandomBits>(s)}}));
    for (const auto& x : xs) {
        std::size_t prev = 0;
        for (unsigned r = 0; r <= 16; ++r) {
            const auto k = k_at_precision(x, r, 2, cache).k;
            CHECK(k >= prev);
            prev = k;
        }
    }
}

TEST_CASE("generated coordinates") {
    auto gen = std::make_shared<PseudoRandomBits>(21);
    const PointDescriptor x({GeneratedCoordinate{1, gen}});
    CHECK_FALSE(x.rational_value().has_value());
    for (std::size_t bits : {8u, 40u, 130u}) {
        auto [lo, hi] = x.interval(0, bits);
        CHECK(hi - lo == pow2(-static_cast<long>(bits)));
        CHECK(lo >= 1);
        CHECK(hi <= 2);
    }
    // every certified candidate is within the ball when checked at much higher precision
    for (unsigned r : {3u, 9u, 17u}) {
        for (const auto& c : precision_candidates(x, r, 2)) {
            auto [lo, hi] = x.interval(0, 8 * r + 200);
            Rational far = std::max(abs(c[0] - lo), abs(c[0] - hi));
            CHECK(far < pow2(-static_cast<long>(r)));
        }
    }

    const PointDescriptor periodic({GeneratedCoordinate{0, std::make_shared<EventuallyPeriodicBits>("1", "01")}});
    REQUIRE(periodic.rational_value().has_value());
    CHECK((*periodic.rational_value())[0] == q(2, 3));  // 0.1010101... = 2/3
    auto [lo, hi] = periodic.interval(0, 20);
    CHECK(lo <= q(2, 3));
    CHECK(q(2, 3) <= hi);
}
