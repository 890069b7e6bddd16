#include "dyadlab/dimension.hpp"
#include "fixtures.hpp"

#include <doctest.h>

#include <cmath>

using namespace dyadlab;
using namespace dyadlab::dim;

namespace {

DimensionProfile profile(std::vector<std::pair<unsigned, double>> rows) {
    DimensionProfile p;
    for (auto [r, v] : rows) p.samples.push_back({r, v});
    return p;
}

geo::PointDescriptor random_x(std::uint64_t seed) {
    return geo::PointDescriptor({geo::GeneratedCoordinate{0, std::make_shared<geo::PseudoRandomBits>(seed)}});
}

}  // namespace

TEST_CASE("slope estimates") {
    auto lin = estimate_slopes(profile({{8, 8}, {16, 16}, {32, 32}}), 8);
    CHECK(lin.lower == doctest::Approx(1));
    CHECK(lin.upper == doctest::Approx(1));
    CHECK(lin.regression_slope == doctest::Approx(1));

    auto flat = estimate_slopes(profile({{8, 0}, {16, 0}, {32, 0}}), 8);
    CHECK(flat.lower == 0);
    CHECK(flat.upper == 0);

    // eventually constant at c = 8 over r in [32, 48]
    std::vector<std::pair<unsigned, double>> rows;
    for (unsigned r = 1; r <= 48; ++r) rows.emplace_back(r, std::min<double>(r, 8));
    auto ec = estimate_slopes(profile(rows), 32);
    CHECK(ec.upper == doctest::Approx(8.0 / 32));
    CHECK(ec.lower == doctest::Approx(8.0 / 48));
    CHECK(ec.upper <= 0.25);
    CHECK(ec.tail_samples == 17);

    CHECK_THROWS_AS(estimate_slopes(profile({{8, 1}, {16, 2}}), 8), InsufficientData);
    CHECK_THROWS_AS(estimate_slopes(profile({{8, 1}, {16, 2}, {32, 3}}), 9), InsufficientData);

    auto inf = estimate_slopes(profile({{8, 1}, {16, kInfinity}, {32, 3}}), 8);
    CHECK(std::isinf(inf.upper));
    CHECK(std::isnan(inf.regression_slope));
    CHECK(inf.lower <= inf.upper);
}

TEST_CASE("K profiles") {
    geo::ComplexityCache cache;
    const geo::RationalPoint third{Rational(1, 3)};
    auto p = k_profile(third, {1, 40}, 2, cache);
    REQUIRE(p.samples.size() == 40);
    for (std::size_t i = 1; i < p.samples.size(); ++i) CHECK(p.samples[i - 1].value <= p.samples[i].value);
    // the point itself is always a candidate, so the profile settles at K(1/3)
    CHECK(p.samples.back().value == geo::k_of_point(third));
    CHECK(p.samples[30].value == p.samples.back().value);

    auto rnd = k_profile(random_x(7), {1, 24}, 2, cache);
    for (std::size_t i = 1; i < rnd.samples.size(); ++i) CHECK(rnd.samples[i - 1].value <= rnd.samples[i].value);
    CHECK(rnd.samples.back().value > rnd.samples.front().value);
    CHECK(rnd.to_csv().rfind("r,value\n1,", 0) == 0);
}

TEST_CASE("local profiles") {
    const auto& s = fixture::support22();
    const measures::Kappa kappa(s);
    const measures::Nu nu(s);

    // kappa's local profile is the K profile over the same candidate set
    geo::ComplexityCache cache;
    for (const auto& x : {geo::PointDescriptor(geo::RationalPoint{Rational(2, 7)}), random_x(3)}) {
        for (unsigned r = 1; r <= 12; ++r) {
            auto cand = measures::Support::from_points(geo::precision_candidates(x, r, 2), cache);
            auto local = local_dim_profile(measures::Kappa(cand), x, {r, r});
            CHECK(local.samples[0].value == static_cast<double>(geo::k_at_precision(x, r, 2, cache).k));
        }
    }

    // nu at a support point is bounded by K(q)
    const auto& q = s[3];
    auto pn = local_dim_profile(nu, q.point, {1, 48});
    for (const auto& row : pn.samples) CHECK(row.value <= q.k + 1e-9);
    CHECK(estimate_slopes(pn, 32).upper <= q.k / 32.0 + 1e-12);
    CHECK_FALSE(pn.support_exhausted);

    for (const measures::OuterMeasure* mu : std::initializer_list<const measures::OuterMeasure*>{&kappa, &nu}) {
        auto pr = local_dim_profile(*mu, geo::RationalPoint{Rational(5, 11)}, {1, 30});
        for (std::size_t i = 1; i < pr.samples.size(); ++i) CHECK(pr.samples[i - 1].value <= pr.samples[i].value);
        CHECK(pr.support_exhausted);
        CHECK(std::isinf(pr.samples.back().value));
    }
}

TEST_CASE("global dimensions from weighted slopes") {
    auto atom = [](double lo, double up, Rational w) {
        SlopeEstimate e;
        e.lower = lo;
        e.upper = up;
        return WeightedSlopes{w, e};
    };
    auto one = global_dims_from_slopes({atom(0.4, 0.4, 1)}, 1e-6);
    CHECK(one.dimH == 0.4);
    CHECK(one.DimH == 0.4);
    CHECK(one.dimP == 0.4);
    CHECK(one.DimP == 0.4);

    auto two = global_dims_from_slopes({atom(0, 0.5, 1), atom(1, 1.5, 1)}, 0.25);
    CHECK(two.dimH == 0);
    CHECK(two.DimH == 1);
    CHECK(two.dimP == 0.5);
    CHECK(two.DimP == 1.5);

    // an atom lighter than epsilon is ignored
    auto light = global_dims_from_slopes({atom(0.1, 0.1, 1), atom(0.9, 0.9, Rational(1, 10000000))}, 1e-6);
    CHECK(light.DimH == 0.1);
    CHECK_THROWS(global_dims_from_slopes({}, 1e-6));

    const auto& s = fixture::support22();
    auto g = global_dims(measures::Kappa(s), {1, 48}, 32, 1e-6);
    CHECK(g.atoms == s.size());
    CHECK(g.dimH <= g.DimH);
    CHECK(g.dimP <= g.DimP);
    CHECK(g.dimH <= g.dimP);
}
