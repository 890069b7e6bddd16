#include "dyadlab/staged.hpp"

#include <algorithm>
#include <stdexcept>

namespace dyadlab::measures {

namespace {

using Mask = std::uint32_t;

std::vector<Index> members(std::span<const Index> set, Mask mask) {
    std::vector<Index> out;
    for (std::size_t i = 0; i < set.size(); ++i)
        if (mask & (Mask{1} << i)) out.push_back(set[i]);
    return out;
}

void check_cover_size(std::span<const Index> set) {
    if (set.size() > kMaxCoverSet)
        throw BudgetError("cover minimisation is capped at " + std::to_string(kMaxCoverSet) + " points");
}

// Largest s <= t such that all stages s' <= s complete within t steps.
std::optional<std::uint64_t> completed_stage(const StagedMeasure& m, std::span<const Index> b, std::uint64_t t) {
    if (m.cost(b, 0) > t) return std::nullopt;
    std::uint64_t s = 0;
    while (s < t && m.cost(b, s + 1) <= t) ++s;
    return s;
}

// eta over every submask of `set`, indexed by mask.
std::vector<Rational> eta_table(const StagedMeasure& m, std::span<const Index> set, std::uint64_t t,
                                std::uint64_t budget) {
    const Mask full = (Mask{1} << set.size()) - 1;
    std::vector<Rational> eta(std::size_t{full} + 1);
    for (Mask b = 0; b <= full; ++b) {
        auto pts = members(set, b);
        // approx is monotone in the stage, so the largest affordable stage wins
        for (std::uint64_t s = t + 1; s-- > 0;) {
            if (m.cost(pts, s) <= budget) {
                eta[b] = m.checked_approx(pts, s);
                break;
            }
        }
    }
    for (std::size_t i = 0; i < set.size(); ++i)
        for (Mask b = 0; b <= full; ++b)
            if (b & (Mask{1} << i)) eta[b] = std::max(eta[b], eta[b ^ (Mask{1} << i)]);
    return eta;
}

nlohmann::json cost_json(const CostModel& c) {
    return {{"base", c.base}, {"per_stage", c.per_stage}, {"per_point", c.per_point}};
}

CostModel parse_cost(const nlohmann::json& j, CostModel fallback) {
    if (j.contains("base")) fallback.base = j.at("base").get<std::uint64_t>();
    if (j.contains("per_stage")) fallback.per_stage = j.at("per_stage").get<std::uint64_t>();
    if (j.contains("per_point")) fallback.per_point = j.at("per_point").get<std::uint64_t>();
    return fallback;
}

StagedPtr make_staged(const std::string& kind, const Support& s, CostModel c) {
    if (kind == "kappa") return std::make_shared<KappaHat>(s, c);
    if (kind == "nu") return std::make_shared<NuHat>(s, c);
    if (kind == "m") return std::make_shared<MHat>(s, c);
    if (kind == "example") return std::make_shared<ExampleHat>(s, c);
    if (kind == "geometric") return std::make_shared<GeometricHat>(s, c);
    if (kind == "zero") return std::make_shared<ZeroHat>(s, c);
    throw ConfigError("unknown staged measure kind '" + kind + "'");
}

}  // namespace

Rational StagedMeasure::checked_approx(std::span<const Index> set, std::uint64_t stage) const {
    Rational v = approx(set, stage);
    if (set.empty() && v != 0) throw std::logic_error(name_ + " is nonzero on the empty set");
    if (stage > 0 && approx(set, stage - 1) > v) throw std::logic_error(name_ + " decreased between stages");
    return v;
}

Rational KappaHat::approx(std::span<const Index> set, std::uint64_t stage) const {
    std::optional<std::size_t> best;
    for (Index i : set) {
        std::size_t k = support()[i].k;
        if (k <= stage && (!best || k < *best)) best = k;
    }
    return best ? pow2(-static_cast<long>(*best)) : Rational(0);
}

Rational NuHat::approx(std::span<const Index> set, std::uint64_t stage) const {
    Rational total = 0;
    for (Index i : set)
        if (support()[i].k <= stage) total += pow2(-static_cast<long>(support()[i].k));
    return total;
}

Rational MHat::approx(std::span<const Index> set, std::uint64_t stage) const {
    Rational total = 0;
    for (Index i : set)
        if (support()[i].k <= stage) total += support()[i].m;
    return total;
}

Rational ExampleHat::approx(std::span<const Index> set, std::uint64_t stage) const {
    std::uint64_t n = std::min<std::uint64_t>(set.size(), stage);
    return 1 - pow2(-static_cast<long>(n));
}

Rational GeometricHat::approx(std::span<const Index> set, std::uint64_t stage) const {
    Rational total = 0;
    for (Index i : set) total += pow2(-static_cast<long>(support()[i].k));
    return (1 - pow2(-static_cast<long>(stage))) * total;
}

Registry::Registry(std::vector<StagedPtr> entries) : entries_(std::move(entries)) {
    if (entries_.size() < 2) throw ConfigError("registry needs at least two staged measures");
}

Registry Registry::from_json(const nlohmann::json& doc, const Support& support) {
    CostModel shared = parse_cost(doc.value("cost", nlohmann::json::object()), CostModel{});
    std::vector<StagedPtr> entries;
    for (const auto& e : doc.at("measures")) {
        CostModel c = parse_cost(e.value("cost", nlohmann::json::object()), shared);
        entries.push_back(make_staged(e.at("kind").get<std::string>(), support, c));
    }
    return Registry(std::move(entries));
}

Registry Registry::defaults(const Support& support) {
    std::vector<StagedPtr> entries;
    for (const char* kind : {"kappa", "nu", "m", "example", "geometric", "zero"})
        entries.push_back(make_staged(kind, support, CostModel{}));
    return Registry(std::move(entries));
}

nlohmann::json Registry::describe() const {
    nlohmann::json out = nlohmann::json::array();
    for (std::size_t k = 0; k < entries_.size(); ++k)
        out.push_back({{"index", k}, {"name", entries_[k]->name()}, {"cost", cost_json(entries_[k]->cost_model())}});
    return out;
}

std::uint64_t tau_k(const Registry& reg, std::size_t k, std::span<const Index> set, std::uint64_t t) {
    check_cover_size(set);
    const StagedMeasure& m = reg.at(k);
    const Mask full = (Mask{1} << set.size()) - 1;
    std::uint64_t best = t;
    for (Mask b = 0; b <= full; ++b) {
        auto s = completed_stage(m, members(set, b), t);
        if (!s) return 0;
        best = std::min(best, *s);
    }
    return best;
}

Rational eta_k(const Registry& reg, std::size_t k, std::span<const Index> set, std::uint64_t t,
               std::uint64_t budget) {
    check_cover_size(set);
    return eta_table(reg.at(k), set, t, budget).back();
}

CoverResult theta_hat_k(const Registry& reg, std::size_t k, std::span<const Index> set, std::uint64_t t) {
    check_cover_size(set);
    CoverResult result;
    result.stage = tau_k(reg, k, set, t);
    if (set.empty()) return result;

    auto eta = eta_table(reg.at(k), set, result.stage, t);

    // Exact integer arithmetic on a common denominator keeps the 3^n loop cheap.
    BigInt den = 1;
    for (const auto& v : eta) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), v.get_den_mpz_t());
    std::vector<BigInt> weight(eta.size());
    for (std::size_t b = 0; b < eta.size(); ++b) weight[b] = eta[b].get_num() * (den / eta[b].get_den());

    // Since eta is monotone under inclusion, some optimal cover is a partition.
    const Mask full = (Mask{1} << set.size()) - 1;
    std::vector<BigInt> best(std::size_t{full} + 1);
    std::vector<Mask> choice(std::size_t{full} + 1, 0);
    BigInt cand;
    for (Mask mask = 1; mask <= full; ++mask) {
        const Mask low = mask & (~mask + 1);
        const Mask rest = mask ^ low;
        bool have = false;
        // submasks of `rest` ascending, each joined with the lowest element
        for (Mask sub = 0;; sub = (sub - rest) & rest) {
            const Mask block = sub | low;
            cand = weight[block] + best[mask ^ block];
            if (!have || cand < best[mask]) {
                best[mask] = cand;
                choice[mask] = block;
                have = true;
            }
            if (sub == rest) break;
        }
    }
    result.value = Rational(best[full], den);
    result.value.canonicalize();
    for (Mask mask = full; mask != 0; mask ^= choice[mask]) result.partition.push_back(members(set, choice[mask]));
    return result;
}

ThetaTrace theta_k_eval(const Registry& reg, std::size_t k, const IndexSet& e, std::size_t set_budget,
                        std::uint64_t stage_budget) {
    if (set_budget == 0 || stage_budget == 0) throw std::invalid_argument("budgets must be positive");
    ThetaTrace trace;
    std::size_t take = std::min({set_budget, e.size(), kMaxCoverSet});
    trace.set.assign(e.indices.begin(), e.indices.begin() + static_cast<std::ptrdiff_t>(take));
    for (std::uint64_t t = 0; t <= stage_budget; ++t)
        trace.by_stage.emplace_back(t, theta_hat_k(reg, k, trace.set, t).value);
    for (std::size_t n = 0; n <= trace.set.size(); ++n)
        trace.by_size.emplace_back(
            n, theta_hat_k(reg, k, std::span<const Index>(trace.set).first(n), stage_budget).value);
    trace.value = trace.by_stage.back().second;
    return trace;
}

MixtureResult mixture_theta(const Registry& reg, std::span<const Index> set, std::uint64_t t) {
    MixtureResult out;
    out.value = 0;
    const std::uint64_t last = std::min<std::uint64_t>(t, reg.size() - 1);
    for (std::uint64_t k = 0; k <= last; ++k) {
        out.terms.push_back(theta_hat_k(reg, k, set, t).value);
        out.value += out.terms.back() * pow2(-static_cast<long>(k + 1));
    }
    return out;
}

MixtureTheta::MixtureTheta(const Registry& reg, const Support& support, std::size_t set_budget,
                           std::uint64_t stage_budget)
    : OuterMeasure(support), reg_(&reg), set_budget_(set_budget), stage_budget_(stage_budget) {}

Rational MixtureTheta::evaluate(const IndexSet& set) const {
    std::size_t take = std::min({set_budget_, set.size(), kMaxCoverSet});
    return mixture_theta(*reg_, std::span<const Index>(set.indices).first(take), stage_budget_).value;
}

}  // namespace dyadlab::measures
