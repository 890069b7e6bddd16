#include "dyadlab/support.hpp"

#include <algorithm>
#include <stdexcept>

namespace dyadlab::measures {

Support::Support(std::vector<SupportPoint> points, std::size_t dim) : points_(std::move(points)), dim_(dim) {
    std::sort(points_.begin(), points_.end(), [](const SupportPoint& a, const SupportPoint& b) {
        if (a.k != b.k) return a.k < b.k;
        return ShortLex{}(a.code, b.code);
    });
    by_first_coord_.resize(points_.size());
    for (Index i = 0; i < points_.size(); ++i) {
        if (points_[i].point.dim() != dim_) throw std::invalid_argument("support points must share one dimension");
        if (!index_.emplace(points_[i].point, i).second) throw std::invalid_argument("duplicate support point");
        by_first_coord_[i] = i;
    }
    std::sort(by_first_coord_.begin(), by_first_coord_.end(),
              [this](Index a, Index b) { return points_[a].point[0] < points_[b].point[0]; });
}

Support Support::from_table(const tpm::ComplexityTable& table, std::size_t n) {
    std::vector<SupportPoint> pts;
    for (const auto& [code, entry] : table.entries()) {
        auto q = geo::decode_point(code, n);
        if (!q) continue;
        pts.push_back(SupportPoint{std::move(*q), code, tpm::exact_k(code), table.census(code)});
    }
    return Support(std::move(pts), n);
}

Support Support::from_points(std::vector<geo::RationalPoint> points, geo::ComplexityCache& cache,
                             const tpm::ComplexityTable* table) {
    if (points.empty()) throw std::invalid_argument("support needs at least one point");
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    std::size_t n = points.front().dim();
    std::vector<SupportPoint> pts;
    for (auto& q : points) {
        BitString code = geo::encode_point(q);
        std::size_t k = cache.k_of_point(q);
        Rational m = table ? table->census(code) : Rational(0);
        pts.push_back(SupportPoint{std::move(q), std::move(code), k, m});
    }
    return Support(std::move(pts), n);
}

std::optional<Index> Support::index_of(const geo::RationalPoint& q) const {
    auto it = index_.find(q);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::vector<Index> Support::window(const Rational& lo, const Rational& hi) const {
    auto first = std::lower_bound(by_first_coord_.begin(), by_first_coord_.end(), lo,
                                  [this](Index i, const Rational& v) { return points_[i].point[0] < v; });
    auto last = std::upper_bound(first, by_first_coord_.end(), hi,
                                 [this](const Rational& v, Index i) { return v < points_[i].point[0]; });
    return {first, last};
}

std::vector<Index> Support::in_cube(const geo::DyadicCube& cube) const {
    if (cube.dim() != dim_) throw std::invalid_argument("dimension mismatch");
    Rational lo = Rational(cube.address[0]) * cube.side();
    std::vector<Index> out;
    for (Index i : window(lo, lo + cube.side()))
        if (cube.contains(points_[i].point)) out.push_back(i);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Index> Support::in_ball(const geo::Ball& ball) const {
    if (ball.center.dim() != dim_) throw std::invalid_argument("dimension mismatch");
    Rational rad = ball.radius();
    std::vector<Index> out;
    for (Index i : window(ball.center[0] - rad, ball.center[0] + rad))
        if (ball.contains(points_[i].point)) out.push_back(i);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Index> Support::in_ball(const geo::PointDescriptor& center, unsigned r) const {
    if (const auto* p = center.exact()) return in_ball(geo::Ball{*p, r});
    if (center.dim() != dim_) throw std::invalid_argument("dimension mismatch");
    Rational rad = pow2(-static_cast<long>(r));
    auto [lo, hi] = center.interval(0, 2 * std::size_t{r} + 8);
    std::vector<Index> out;
    for (Index i : window(lo - rad, hi + rad))
        if (geo::within_open_ball(center, points_[i].point, r)) out.push_back(i);
    std::sort(out.begin(), out.end());
    return out;
}

std::map<geo::DyadicCube, std::vector<Index>> Support::group_by_cube(unsigned r) const {
    std::map<geo::DyadicCube, std::vector<Index>> out;
    for (Index i = 0; i < points_.size(); ++i) out[geo::cube_of_point(points_[i].point, r)].push_back(i);
    return out;
}

IndexSet IndexSet::of(std::vector<Index> idx, bool infinite) {
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    return IndexSet{std::move(idx), infinite};
}

IndexSet resolve(const SetQuery& query, const Support& support) {
    struct Visitor {
        const Support& s;
        IndexSet operator()(const FiniteSet& f) const {
            std::vector<Index> idx;
            for (const auto& q : f.points)
                if (auto i = s.index_of(q)) idx.push_back(*i);
            return IndexSet::of(std::move(idx), false);
        }
        IndexSet operator()(const geo::DyadicCube& c) const { return IndexSet::of(s.in_cube(c), true); }
        IndexSet operator()(const geo::Ball& b) const { return IndexSet::of(s.in_ball(b), true); }
        IndexSet operator()(const CoFinite& c) const {
            std::vector<bool> drop(s.size(), false);
            for (const auto& q : c.excluded)
                if (auto i = s.index_of(q)) drop[*i] = true;
            std::vector<Index> idx;
            for (Index i = 0; i < s.size(); ++i)
                if (!drop[i]) idx.push_back(i);
            return IndexSet{std::move(idx), true};
        }
    };
    return std::visit(Visitor{support}, query);
}

IndexSet set_union(const IndexSet& a, const IndexSet& b) {
    std::vector<Index> out;
    std::set_union(a.indices.begin(), a.indices.end(), b.indices.begin(), b.indices.end(), std::back_inserter(out));
    return IndexSet{std::move(out), a.infinite || b.infinite};
}

bool is_subset(const IndexSet& a, const IndexSet& b) {
    return std::includes(b.indices.begin(), b.indices.end(), a.indices.begin(), a.indices.end());
}

}  // namespace dyadlab::measures
