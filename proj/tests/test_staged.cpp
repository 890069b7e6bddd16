#include "dyadlab/checkers.hpp"
#include "dyadlab/staged.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <numeric>
#include <random>

using namespace dyadlab;
using namespace dyadlab::measures;

namespace {

const Support& S() {
    return fixture::support22();
}

// Defaults plus a registry with a heavier cost model, so stage limits bite.
std::vector<Registry> registries() {
    std::vector<Registry> out{Registry::defaults(S())};
    out.push_back(Registry::from_json(nlohmann::json::parse(R"({
        "cost": {"base": 2, "per_stage": 2, "per_point": 3},
        "measures": [{"kind": "kappa"}, {"kind": "nu", "cost": {"per_stage": 1}}, {"kind": "example"},
                     {"kind": "geometric"}, {"kind": "m", "cost": {"base": 0}}]
    })"), S()));
    return out;
}

std::vector<Index> random_set(std::mt19937_64& rng, std::size_t n, std::size_t pool = 40) {
    std::vector<Index> out;
    while (out.size() < n) {
        Index i = static_cast<Index>(rng() % pool);
        if (std::find(out.begin(), out.end(), i) == out.end()) out.push_back(i);
    }
    std::sort(out.begin(), out.end());
    return out;
}

class Flicker final : public StagedMeasure {
public:
    explicit Flicker(const Support& s) : StagedMeasure("flicker", s, CostModel{}) {}
    Rational approx(std::span<const Index> set, std::uint64_t stage) const override {
        return set.empty() ? Rational(0) : Rational(stage % 2, 2);
    }
};

}  // namespace

TEST_CASE("staged approximators") {
    auto reg = Registry::defaults(S());
    REQUIRE(reg.size() == 6);
    std::mt19937_64 rng(1);
    for (std::size_t k = 0; k < reg.size(); ++k) {
        const auto& m = reg.at(k);
        CHECK(m.approx({}, 30) == 0);
        for (int i = 0; i < 20; ++i) {
            auto a = random_set(rng, 1 + i % 5);
            for (std::uint64_t s = 0; s <= 30; ++s) {
                auto v = m.checked_approx(a, s);
                CHECK(v >= 0);
                CHECK(v <= 1);
            }
        }
    }
    // the limits are kappa, nu and m themselves
    auto all = std::vector<Index>{0, 5, 17, 33};
    auto set = IndexSet::of(all);
    CHECK(reg.at(0).approx(all, 64) == Kappa(S()).evaluate(set));
    CHECK(reg.at(1).approx(all, 64) == Nu(S()).evaluate(set));
    CHECK(reg.at(2).approx(all, 64) == AlgorithmicProbability(S()).evaluate(set));
    CHECK(reg.at(4).approx(all, 5) == (1 - pow2(-5)) * Nu(S()).evaluate(set));

    std::vector<Index> one{0};
    CHECK_THROWS_AS(Flicker(S()).checked_approx(one, 2), std::logic_error);
}

TEST_CASE("registry configuration") {
    auto regs = registries();
    CHECK(regs[1].size() == 5);
    CHECK(regs[1].at(0).cost_model().base == 2);
    CHECK(regs[1].at(1).cost_model().per_stage == 1);
    CHECK(regs[1].at(4).cost_model().base == 0);
    CHECK(regs[1].describe().size() == 5);
    CHECK_THROWS_AS(Registry::from_json(nlohmann::json::parse(R"({"measures":[{"kind":"lebesgue"},{"kind":"nu"}]})"), S()),
                    ConfigError);
    CHECK_THROWS_AS(Registry::from_json(nlohmann::json::parse(R"({"measures":[{"kind":"nu"}]})"), S()), ConfigError);
}

TEST_CASE("tau and eta against their definitions") {
    std::mt19937_64 rng(2);
    for (const auto& reg : registries()) {
        for (std::size_t k = 0; k < reg.size(); ++k) {
            CHECK(tau_k(reg, k, {}, 9) == oracle::tau(reg.at(k), {}, 9));
            CHECK(eta_k(reg, k, {}, 9, 9) == 0);
            for (int i = 0; i < 6; ++i) {
                auto a = random_set(rng, 3);
                CHECK(tau_k(reg, k, a, 16) == oracle::tau(reg.at(k), a, 16));
                for (std::uint64_t t : {0u, 4u, 16u})
                    for (std::uint64_t T : {1u, 8u, 16u, 40u})
                        CHECK(eta_k(reg, k, a, t, T) == oracle::eta(reg.at(k), a, t, T));
                std::uint64_t prev = 0;
                for (std::uint64_t t = 0; t <= 24; ++t) {
                    auto v = tau_k(reg, k, a, t);
                    CHECK(v >= prev);
                    prev = v;
                }
                // eta is monotone in A, t and T
                auto bigger = a;
                bigger.push_back(static_cast<Index>(40 + i));
                CHECK(eta_k(reg, k, a, 8, 20) <= eta_k(reg, k, bigger, 8, 20));
                CHECK(eta_k(reg, k, a, 8, 20) <= eta_k(reg, k, a, 9, 20));
                CHECK(eta_k(reg, k, a, 8, 20) <= eta_k(reg, k, a, 8, 21));
            }
        }
    }
}

TEST_CASE("cover minimum against every cover") {
    std::mt19937_64 rng(3);
    for (const auto& reg : registries()) {
        for (std::size_t k = 0; k < reg.size(); ++k) {
            CHECK(theta_hat_k(reg, k, {}, 10).value == 0);
            for (std::size_t n = 1; n <= 6; ++n)
                for (std::uint64_t t : {0u, 5u, 11u, 20u, 64u}) {
                    auto a = random_set(rng, n);
                    auto res = theta_hat_k(reg, k, a, t);
                    CAPTURE(k);
                    CAPTURE(n);
                    CAPTURE(t);
                    CHECK(res.value == oracle::theta_hat(reg.at(k), a, t));
                    if (n <= 4) CHECK(res.value == oracle::theta_hat(reg.at(k), a, t, true));
                    if (n == 1) CHECK(res.value == eta_k(reg, k, a, res.stage, t));
                    CHECK(res.value <= eta_k(reg, k, a, res.stage, t));

                    // the recorded partition is a partition of A achieving the value
                    std::vector<Index> seen;
                    Rational sum = 0;
                    for (const auto& block : res.partition) {
                        seen.insert(seen.end(), block.begin(), block.end());
                        sum += eta_k(reg, k, block, res.stage, t);
                    }
                    std::sort(seen.begin(), seen.end());
                    CHECK(seen == a);
                    CHECK(sum == res.value);
                }
        }
    }
    std::vector<Index> too_many(13);
    std::iota(too_many.begin(), too_many.end(), 0);
    CHECK_THROWS_AS(theta_hat_k(Registry::defaults(S()), 0, too_many, 5), BudgetError);
}

TEST_CASE("theta_hat_k is finitely subadditive at a fixed stage") {
    // covers by subsets of A, as in A_i = E_i cap A; tau is antitone in A, so
    // parts that stick out of A can run at a later stage and break the bound
    std::mt19937_64 rng(4);
    auto reg = Registry::defaults(S());
    for (int i = 0; i < 150; ++i) {
        const auto a = random_set(rng, 1 + rng() % 6, 12);
        std::vector<std::vector<Index>> parts(1 + rng() % 3);
        for (Index x : a) {
            // every point lands in one part, and sometimes in another as well
            parts[rng() % parts.size()].push_back(x);
            if (rng() % 3 == 0) parts[rng() % parts.size()].push_back(x);
        }
        for (auto& p : parts) {
            std::sort(p.begin(), p.end());
            p.erase(std::unique(p.begin(), p.end()), p.end());
        }
        const std::uint64_t t = rng() % 40;
        for (std::size_t k = 0; k < reg.size(); ++k) {
            Rational sum = 0;
            for (const auto& p : parts) sum += theta_hat_k(reg, k, p, t).value;
            CHECK(theta_hat_k(reg, k, a, t).value <= sum);
        }
    }
}

TEST_CASE("theta_k_eval traces") {
    auto reg = Registry::defaults(S());
    const auto e = IndexSet::of({1, 4, 9, 16, 25});
    for (std::size_t k = 0; k < reg.size(); ++k) {
        auto trace = theta_k_eval(reg, k, e, 8, 40);
        CHECK(trace.set == e.indices);
        CHECK(trace.by_stage.size() == 41);
        for (std::size_t i = 1; i < trace.by_stage.size(); ++i)
            CHECK(trace.by_stage[i - 1].second <= trace.by_stage[i].second);
        for (std::size_t i = 1; i < trace.by_size.size(); ++i)
            CHECK(trace.by_size[i - 1].second <= trace.by_size[i].second);
        CHECK(theta_k_eval(reg, k, IndexSet{}, 8, 40).value == 0);
    }
    // geometric fixture: theta_hat = (1 - 2^-(t - |A|)) nu(A), so the limit is nu(E)
    auto trace = theta_k_eval(reg, 4, e, 8, 64);
    const Rational limit = Nu(S()).evaluate(e);
    CHECK(limit - trace.value == pow2(-(64 - 5)) * limit);
    CHECK_THROWS(theta_k_eval(reg, 0, e, 0, 10));
}

TEST_CASE("mixture") {
    std::mt19937_64 rng(5);
    auto reg = Registry::defaults(S());
    CHECK(mixture_theta(reg, {}, 10).value == 0);
    for (int i = 0; i < 30; ++i) {
        auto a = random_set(rng, 1 + i % 6);
        Rational prev = 0;
        for (std::uint64_t t = 0; t <= 12; ++t) {
            auto mix = mixture_theta(reg, a, t);
            CHECK(mix.terms.size() == std::min<std::uint64_t>(t, reg.size() - 1) + 1);
            for (std::size_t k = 0; k < mix.terms.size(); ++k)
                CHECK(mix.value >= pow2(-static_cast<long>(k + 1)) * theta_hat_k(reg, k, a, t).value);
            CHECK(mix.value >= prev);
            prev = mix.value;
        }
    }
    const MixtureTheta theta(reg, S(), kMaxCoverSet, 64);
    auto report = check_outer_measure_axioms(theta, sample_families(S(), 100, 6));
    CHECK(report.passed());
}
