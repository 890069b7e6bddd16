#include "dyadlab/domination.hpp"
#include "fixtures.hpp"

#include <doctest.h>

#include <cmath>

using namespace dyadlab;
using namespace dyadlab::dom;

namespace {

const measures::Support& S() {
    return fixture::support22();
}

const dim::RRange kRange{0, 48};

}  // namespace

TEST_CASE("self domination") {
    const measures::Kappa k(S());
    for (auto rep : {dominate_on_cubes(k, k, kRange, {}, {}), dominate_on_balls(k, k, kRange, {}, {})}) {
        CHECK(rep.verdict == Verdict::dominates);
        for (const auto& rec : rep.records) {
            REQUIRE(rec.gap.has_value());
            CHECK(*rec.gap == 0);
        }
        CHECK(rep.fitted_slope == 0);
        CHECK(rep.to_json()["evidence"] == "empirical, sampled");
    }
}

TEST_CASE("kappa and m dominate each other") {
    const measures::Kappa k(S());
    const measures::AlgorithmicProbability m(S());
    auto cubes = dominate_on_cubes(k, m, kRange, {}, {});
    auto balls = dominate_on_balls(k, m, kRange, {}, {});
    CHECK(cubes.verdict == Verdict::dominates);
    CHECK(balls.verdict == cubes.verdict);
    CHECK(cubes.fitted_slope <= 0.1);
    // gaps stay within K_enc(r) plus one fitted constant
    double c = -1e9;
    for (const auto& rec : cubes.records) c = std::max(c, *rec.gap - static_cast<double>(k_enc(rec.r)));
    CHECK(c <= 64);

    auto back = dominate_on_cubes(m, k, kRange, {}, {});
    CHECK(back.verdict == Verdict::dominates);
    for (const auto& rec : back.records) CHECK(*rec.gap <= 0);

    // both directions together: the two-sided gap grows sublinearly
    double worst = 0;
    for (std::size_t i = 0; i < cubes.records.size(); ++i)
        worst = std::max({worst, *cubes.records[i].gap, *back.records[i].gap});
    CHECK(worst / kRange.max <= 0.2);
}

TEST_CASE("scaling nu shifts every gap by its log") {
    auto k = measures::make_measure("kappa", S());
    const measures::Scaled big(k, 1024);
    for (auto family : {FamilyKind::cubes, FamilyKind::balls}) {
        auto run = [&](const measures::OuterMeasure& nu) {
            return family == FamilyKind::cubes ? dominate_on_cubes(*k, nu, kRange, {}, {})
                                               : dominate_on_balls(*k, nu, kRange, {}, {});
        };
        auto base = run(*k), shifted = run(big);
        REQUIRE(base.records.size() == shifted.records.size());
        for (std::size_t i = 0; i < base.records.size(); ++i)
            CHECK(*shifted.records[i].gap == doctest::Approx(*base.records[i].gap + 10));
        CHECK(shifted.fitted_slope == doctest::Approx(base.fitted_slope));
        CHECK(shifted.slope_ok == base.slope_ok);
    }
}

TEST_CASE("degenerate and restricted fixtures fail") {
    const measures::ZeroMeasure zero(S());
    const measures::Kappa k(S());
    auto rep = dominate_on_balls(zero, k, kRange, {}, {});
    CHECK(rep.verdict == Verdict::fails);
    CHECK_FALSE(rep.all_finite);
    CHECK(std::isinf(*rep.records.back().gap));

    auto even = measures::make_measure("kappa_even", S());
    auto verdict = local_optimality_verdict(*even, kRange, {}, {});
    CHECK(verdict.cubes.verdict == Verdict::fails);
    CHECK_FALSE(verdict.locally_optimal);
    // a cube whose support points all have odd-length encodings
    bool found = false;
    for (const auto& [cube, idx] : S().group_by_cube(20)) {
        bool odd = std::all_of(idx.begin(), idx.end(), [](auto i) { return S()[i].code.size() % 2 == 1; });
        if (!odd) continue;
        auto set = measures::IndexSet::of(idx, true);
        CHECK(even->evaluate(set) == 0);
        CHECK(k.evaluate(set) > 0);
        found = true;
        break;
    }
    CHECK(found);
}

TEST_CASE("local optimality") {
    for (const char* name : {"kappa", "m"}) {
        auto v = local_optimality_verdict(*measures::make_measure(name, S()), kRange, {}, {});
        CHECK(v.locally_optimal);
        CHECK(v.families_agree);
    }
}

TEST_CASE("inconclusive when nu vanishes on every sample") {
    const measures::ZeroMeasure zero(S());
    const measures::Kappa k(S());
    auto rep = dominate_on_cubes(k, zero, {0, 4}, {}, {});
    CHECK(rep.verdict == Verdict::inconclusive);
    for (const auto& rec : rep.records) CHECK_FALSE(rec.gap.has_value());
}

TEST_CASE("ball and cube complexities") {
    CHECK(k_enc(0) == tpm::exact_k(tpm::gamma_encode(1)));
    geo::ComplexityCache cache;
    auto a = ball_cube_bound_check(10, 200, 1, 2, 1, cache);
    auto b = ball_cube_bound_check(10, 200, 2, 2, 1, cache);
    CHECK(a.triples.size() == 200);
    CHECK(a.constant <= 64);
    CHECK(std::abs(a.constant - b.constant) <= 8);
    CHECK(a.witness_failures == 0);
    CHECK(a.inscribed_violations == 0);
    for (const auto& t : a.triples) {
        CHECK(t.r <= 10);
        CHECK(geo::ball_intersects_cube(t.ball, t.cube));
    }
    auto two = ball_cube_bound_check(6, 60, 3, 2, 2, cache);
    CHECK(two.witness_failures == 0);
    CHECK(two.inscribed_violations == 0);
}

TEST_CASE("kappa is not globally optimal") {
    std::optional<double> prev;
    for (unsigned alpha : {4u, 6u, 8u, 10u, 12u}) {
        auto rec = kappa_not_global_counterexample(alpha, S(), 3);
        CHECK(rec.kappa <= pow2(-static_cast<long>(alpha)));
        CHECK(rec.strict);
        CHECK(rec.nu >= rec.kappa);
        CHECK(rec.gamma == doctest::Approx(2 + 2 * std::log2(alpha + 2.0) + 3));
        if (prev) CHECK(rec.ratio <= *prev);
        prev = rec.ratio;
    }
    CHECK_THROWS_AS(kappa_not_global_counterexample(200, S(), 0), BudgetError);
}
