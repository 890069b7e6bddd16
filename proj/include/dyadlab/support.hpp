#pragma once

#include "dyadlab/geometry.hpp"
#include "dyadlab/tpm.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace dyadlab::measures {

struct SupportPoint {
    geo::RationalPoint point;
    BitString code;
    std::size_t k = 0;  // K(q) = exact_k(code)
    Rational m = 0;     // census of code in the backing table (0 without one)
};

using Index = std::uint32_t;

/// Finite catalogue of rational points on which the concrete measures
/// live, held in weight order (K ascending, then shortlex code).
class Support {
public:
    /// Every table output that decodes as a point of dimension n.
    static Support from_table(const tpm::ComplexityTable& table, std::size_t n);
    /// Explicit points; m is looked up in `table` when given.
    static Support from_points(std::vector<geo::RationalPoint> points, geo::ComplexityCache& cache,
                               const tpm::ComplexityTable* table = nullptr);

    std::size_t size() const noexcept { return points_.size(); }
    bool empty() const noexcept { return points_.empty(); }
    std::size_t dim() const noexcept { return dim_; }
    const SupportPoint& operator[](Index i) const { return points_[i]; }
    const std::vector<SupportPoint>& points() const noexcept { return points_; }

    std::optional<Index> index_of(const geo::RationalPoint& q) const;

    std::vector<Index> in_cube(const geo::DyadicCube& cube) const;
    std::vector<Index> in_ball(const geo::Ball& ball) const;
    std::vector<Index> in_ball(const geo::PointDescriptor& center, unsigned r) const;
    /// Nonempty r-dyadic cubes and their members.
    std::map<geo::DyadicCube, std::vector<Index>> group_by_cube(unsigned r) const;

private:
    Support(std::vector<SupportPoint> points, std::size_t dim);
    std::vector<Index> window(const Rational& lo, const Rational& hi) const;

    std::vector<SupportPoint> points_;
    std::size_t dim_ = 0;
    std::map<geo::RationalPoint, Index> index_;
    std::vector<Index> by_first_coord_;
};

struct FiniteSet {
    std::vector<geo::RationalPoint> points;
};

/// R^n minus finitely many points; an empty list is R^n itself.
struct CoFinite {
    std::vector<geo::RationalPoint> excluded;
};

using SetQuery = std::variant<FiniteSet, geo::DyadicCube, geo::Ball, CoFinite>;

/// A SetQuery resolved against a Support. `infinite` records whether the
/// queried set holds infinitely many rationals.
struct IndexSet {
    std::vector<Index> indices;  // ascending (weight order)
    bool infinite = false;

    static IndexSet of(std::vector<Index> idx, bool infinite = false);
    bool empty() const noexcept { return indices.empty(); }
    std::size_t size() const noexcept { return indices.size(); }
    bool operator==(const IndexSet&) const = default;
};

IndexSet resolve(const SetQuery& query, const Support& support);
IndexSet set_union(const IndexSet& a, const IndexSet& b);
bool is_subset(const IndexSet& a, const IndexSet& b);

}  // namespace dyadlab::measures
