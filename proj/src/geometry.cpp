#include "dyadlab/geometry.hpp"

#include "dyadlab/tpm.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace dyadlab::geo {

RationalPoint::RationalPoint(std::vector<Rational> coords) : coords_(std::move(coords)) {
    if (coords_.empty() || coords_.size() > kMaxDimension)
        throw std::invalid_argument("point dimension must be between 1 and 4");
    for (auto& c : coords_) c.canonicalize();
}

std::string RationalPoint::to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < coords_.size(); ++i) {
        if (i) s += ", ";
        s += coords_[i].get_str();
    }
    return s + ")";
}

Rational squared_distance(const RationalPoint& a, const RationalPoint& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("dimension mismatch");
    Rational d2 = 0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        Rational d = a[i] - b[i];
        d2 += d * d;
    }
    return d2;
}

bool DyadicCube::contains(const RationalPoint& q) const {
    if (q.dim() != dim()) throw std::invalid_argument("dimension mismatch");
    Rational scale = pow2(static_cast<long>(r));
    for (std::size_t i = 0; i < dim(); ++i)
        if (floor_of(q[i] * scale) != address[i]) return false;
    return true;
}

RationalPoint DyadicCube::lower_corner() const {
    std::vector<Rational> c;
    for (const auto& m : address) c.emplace_back(Rational(m) * side());
    return RationalPoint(std::move(c));
}

RationalPoint DyadicCube::center() const {
    std::vector<Rational> c;
    for (const auto& m : address) c.emplace_back((Rational(m) + Rational(1, 2)) * side());
    return RationalPoint(std::move(c));
}

std::string DyadicCube::to_string() const {
    std::string s = "Q^(" + std::to_string(r) + ")[";
    for (std::size_t i = 0; i < address.size(); ++i) {
        if (i) s += ",";
        s += address[i].get_str();
    }
    return s + "]";
}

bool Ball::contains(const RationalPoint& q) const {
    return squared_distance(center, q) < radius() * radius();
}

BitString encode_point(const RationalPoint& q) {
    BitString out;
    for (const auto& c : q.coords()) {
        out.push_back(sgn(c) < 0);
        out.append(tpm::gamma_encode(BigInt(abs(c.get_num())) + 1));
        out.append(tpm::gamma_encode(c.get_den()));
    }
    return out;
}

std::optional<RationalPoint> decode_point(const BitString& bits, std::size_t n) {
    if (n == 0 || n > kMaxDimension) throw std::invalid_argument("dimension must be between 1 and 4");
    tpm::BitReader rd(bits);
    std::vector<Rational> coords;
    for (std::size_t i = 0; i < n; ++i) {
        auto sign = rd.read_bit();
        if (!sign) return std::nullopt;
        auto num1 = rd.read_gamma_big();
        if (!num1) return std::nullopt;
        auto den = rd.read_gamma_big();
        if (!den) return std::nullopt;
        BigInt num = *num1 - 1;
        if (num == 0 && *sign) return std::nullopt;
        BigInt g;
        mpz_gcd(g.get_mpz_t(), num.get_mpz_t(), den->get_mpz_t());
        if (g != 1) return std::nullopt;
        if (*sign) num = -num;
        coords.emplace_back(num, *den);
    }
    if (rd.remaining() != 0) return std::nullopt;
    return RationalPoint(std::move(coords));
}

std::size_t k_of_point(const RationalPoint& q) {
    return tpm::exact_k(encode_point(q));
}

std::size_t ComplexityCache::k_of_point(const RationalPoint& q) {
    BitString code = encode_point(q);
    auto it = cache_.find(code);
    if (it != cache_.end()) return it->second;
    std::size_t k = tpm::exact_k(code);
    cache_.emplace(std::move(code), k);
    return k;
}

std::optional<std::size_t> k_of_set(std::span<const RationalPoint> points, ComplexityCache& cache) {
    std::optional<std::size_t> best;
    for (const auto& q : points) {
        std::size_t k = cache.k_of_point(q);
        if (!best || k < *best) best = k;
    }
    return best;
}

DyadicCube cube_of_point(const RationalPoint& x, unsigned r) {
    DyadicCube q{r, {}};
    Rational scale = pow2(static_cast<long>(r));
    for (const auto& c : x.coords()) q.address.push_back(floor_of(c * scale));
    return q;
}

bool ball_intersects_cube(const Ball& ball, const DyadicCube& cube) {
    if (ball.center.dim() != cube.dim()) throw std::invalid_argument("dimension mismatch");
    // An open ball meets the half-open box iff it meets the closed box: a
    // nearest point on an excluded facet at distance < radius has
    // neighbours inside the box that are still strictly within the radius.
    Rational side = cube.side();
    Rational d2 = 0;
    for (std::size_t i = 0; i < cube.dim(); ++i) {
        Rational lo = Rational(cube.address[i]) * side;
        Rational hi = lo + side;
        const Rational& c = ball.center[i];
        Rational gap = 0;
        if (c < lo) gap = lo - c;
        else if (c > hi) gap = c - hi;
        d2 += gap * gap;
    }
    Rational rad = ball.radius();
    return d2 < rad * rad;
}

std::vector<std::vector<BigInt>> neighbor_address_set(const RationalPoint& q, unsigned r) {
    Rational scale = pow2(static_cast<long>(r));
    std::vector<std::vector<BigInt>> out{{}};
    for (const auto& c : q.coords()) {
        BigInt base = floor_of(c * scale);
        std::vector<std::vector<BigInt>> next;
        for (const auto& prefix : out)
            for (int d = -2; d <= 2; ++d) {
                auto a = prefix;
                a.push_back(base + d);
                next.push_back(std::move(a));
            }
        out = std::move(next);
    }
    return out;
}

std::vector<RationalPoint> neighbor_product_set(const RationalPoint& q, unsigned r) {
    Rational side = pow2(-static_cast<long>(r));
    std::vector<RationalPoint> out;
    for (const auto& a : neighbor_address_set(q, r)) {
        std::vector<Rational> c;
        for (const auto& m : a) c.emplace_back(Rational(m) * side);
        out.emplace_back(std::move(c));
    }
    return out;
}

PseudoRandomBits::PseudoRandomBits(std::uint64_t seed) : seed_(seed), rng_(seed) {}

bool PseudoRandomBits::bit(std::size_t index) const {
    if (index == 0) throw std::out_of_range("digit indices start at 1");
    while (bits_.size() < index) {
        std::uint64_t word = rng_();
        for (int k = 63; k >= 0; --k) bits_.push_back((word >> k) & 1u);
    }
    return bits_[index - 1];
}

std::string PseudoRandomBits::describe() const {
    return "mt19937_64(" + std::to_string(seed_) + ")";
}

EventuallyPeriodicBits::EventuallyPeriodicBits(std::string prefix, std::string period)
    : prefix_(std::move(prefix)), period_(std::move(period)) {
    if (period_.empty()) throw std::invalid_argument("period must be nonempty");
    for (char c : prefix_ + period_)
        if (c != '0' && c != '1') throw std::invalid_argument("digits must be '0' or '1'");
}

bool EventuallyPeriodicBits::bit(std::size_t index) const {
    if (index == 0) throw std::out_of_range("digit indices start at 1");
    std::size_t i = index - 1;
    if (i < prefix_.size()) return prefix_[i] == '1';
    return period_[(i - prefix_.size()) % period_.size()] == '1';
}

std::string EventuallyPeriodicBits::describe() const {
    return "0." + prefix_ + "(" + period_ + ")";
}

// 0.P(Q) = (P + Q / (2^|Q| - 1)) / 2^|P|
std::optional<Rational> EventuallyPeriodicBits::value() const {
    BigInt p = 0, q = 0;
    for (char c : prefix_) p = 2 * p + (c == '1');
    for (char c : period_) q = 2 * q + (c == '1');
    Rational v = (Rational(p) + Rational(q) / (pow2(static_cast<long>(period_.size())) - 1)) *
                 pow2(-static_cast<long>(prefix_.size()));
    v.canonicalize();
    return v;
}

PointDescriptor::PointDescriptor(RationalPoint exact) : value_(std::move(exact)) {}

std::optional<RationalPoint> PointDescriptor::rational_value() const {
    if (const auto* p = exact()) return *p;
    std::vector<Rational> c;
    for (const auto& g : std::get<1>(value_)) {
        auto f = g.fraction->value();
        if (!f) return std::nullopt;
        c.push_back(Rational(g.integer_part) + *f);
    }
    return RationalPoint(std::move(c));
}

PointDescriptor::PointDescriptor(std::vector<GeneratedCoordinate> coords) : value_(std::move(coords)) {
    const auto& c = std::get<1>(value_);
    if (c.empty() || c.size() > kMaxDimension) throw std::invalid_argument("point dimension must be between 1 and 4");
    for (const auto& g : c)
        if (!g.fraction) throw std::invalid_argument("generated coordinate needs a digit generator");
}

std::size_t PointDescriptor::dim() const noexcept {
    if (const auto* p = exact()) return p->dim();
    return std::get<1>(value_).size();
}

std::pair<Rational, Rational> PointDescriptor::interval(std::size_t i, std::size_t bits) const {
    if (const auto* p = exact()) return {(*p)[i], (*p)[i]};
    const auto& g = std::get<1>(value_)[i];
    BigInt frac = 0;
    for (std::size_t j = 1; j <= bits; ++j) {
        frac *= 2;
        if (g.fraction->bit(j)) frac += 1;
    }
    Rational lo = Rational(g.integer_part) + Rational(frac) * pow2(-static_cast<long>(bits));
    lo.canonicalize();
    return {lo, lo + pow2(-static_cast<long>(bits))};
}

std::string PointDescriptor::describe() const {
    if (const auto* p = exact()) return p->to_string();
    std::string s = "(";
    const auto& c = std::get<1>(value_);
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i) s += ", ";
        s += c[i].integer_part.get_str() + "+" + c[i].fraction->describe();
    }
    return s + ")";
}

bool within_open_ball(const PointDescriptor& x, const RationalPoint& q, unsigned r) {
    if (x.dim() != q.dim()) throw std::invalid_argument("dimension mismatch");
    Rational rad2 = pow2(-2 * static_cast<long>(r));
    if (const auto* p = x.exact()) return squared_distance(*p, q) < rad2;

    const std::size_t first = 2 * std::size_t{r} + 8;
    const std::size_t last = 4 * std::size_t{r} + 136;
    for (std::size_t bits = first; bits <= last; bits += 32) {
        Rational lo2 = 0, hi2 = 0;
        for (std::size_t i = 0; i < q.dim(); ++i) {
            auto [lo, hi] = x.interval(i, bits);
            Rational a = q[i] - hi, b = q[i] - lo;  // d_i in [a, b]
            Rational aa = a * a, bb = b * b;
            hi2 += std::max(aa, bb);
            if (sgn(a) <= 0 && sgn(b) >= 0) continue;
            lo2 += std::min(aa, bb);
        }
        if (hi2 < rad2) return true;
        if (lo2 >= rad2) return false;
    }
    return false;
}

std::vector<RationalPoint> precision_candidates(const PointDescriptor& x, unsigned r, unsigned guard) {
    const std::size_t n = x.dim();
    const std::size_t bits = 2 * std::size_t{r} + 8;
    std::vector<std::pair<Rational, Rational>> hull;
    for (std::size_t i = 0; i < n; ++i) hull.push_back(x.interval(i, bits));

    std::set<RationalPoint> found;
    if (auto p = x.rational_value()) found.insert(std::move(*p));

    for (unsigned e = 0; e <= r + guard; ++e) {
        Rational scale = pow2(static_cast<long>(e));
        Rational reach = pow2(static_cast<long>(e) - static_cast<long>(r));
        Rational unit = pow2(-static_cast<long>(e));
        std::vector<std::vector<Rational>> axis(n);
        for (std::size_t i = 0; i < n; ++i) {
            BigInt lo = floor_of(hull[i].first * scale - reach);
            BigInt hi = floor_of(hull[i].second * scale + reach) + 1;
            for (BigInt m = lo; m <= hi; ++m) axis[i].emplace_back(Rational(m) * unit);
        }
        std::vector<std::size_t> idx(n, 0);
        while (true) {
            std::vector<Rational> c;
            for (std::size_t i = 0; i < n; ++i) c.push_back(axis[i][idx[i]]);
            RationalPoint q(std::move(c));
            if (!found.contains(q) && within_open_ball(x, q, r)) found.insert(std::move(q));
            std::size_t i = 0;
            while (i < n && ++idx[i] == axis[i].size()) idx[i++] = 0;
            if (i == n) break;
        }
    }
    return {found.begin(), found.end()};
}

PrecisionComplexity k_at_precision(const PointDescriptor& x, unsigned r, unsigned guard, ComplexityCache& cache) {
    auto candidates = precision_candidates(x, r, guard);
    if (candidates.empty()) throw std::logic_error("precision candidate set is empty");
    PrecisionComplexity best;
    best.candidate_count = candidates.size();
    bool have = false;
    for (auto& q : candidates) {
        std::size_t k = cache.k_of_point(q);
        if (!have || k < best.k) {
            best.k = k;
            best.witness = q;
            have = true;
        }
    }
    return best;
}

}  // namespace dyadlab::geo
