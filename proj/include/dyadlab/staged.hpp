#pragma once

// Staged (lower-semicomputable) measures, a finite registry standing in for
// an enumeration of all such measures, and the clocked constructions built
// on it: tau_k, eta_k, the cover minimum theta_hat_k, and the mixture
// theta_hat(A, t) = sum_k theta_hat_k(A, t) / 2^(k+1).

#include "dyadlab/measures.hpp"

#include <json.hpp>

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace dyadlab::measures {

inline constexpr std::size_t kMaxCoverSet = 12;

/// Simulated step count of one approximator call: base + per_stage*s + per_point*|A|.
struct CostModel {
    std::uint64_t base = 0;
    std::uint64_t per_stage = 1;
    std::uint64_t per_point = 1;

    std::uint64_t operator()(std::size_t set_size, std::uint64_t stage) const {
        return base + per_stage * stage + per_point * set_size;
    }
};

class StagedMeasure {
public:
    StagedMeasure(std::string name, const Support& support, CostModel cost)
        : name_(std::move(name)), support_(&support), cost_(cost) {}
    virtual ~StagedMeasure() = default;

    /// Monotone in stage, 0 on the empty set, values in [0, 1].
    virtual Rational approx(std::span<const Index> set, std::uint64_t stage) const = 0;
    /// Stage monotonicity verified against the previous stage; throws std::logic_error.
    Rational checked_approx(std::span<const Index> set, std::uint64_t stage) const;

    std::uint64_t cost(std::span<const Index> set, std::uint64_t stage) const { return cost_(set.size(), stage); }
    const std::string& name() const noexcept { return name_; }
    const Support& support() const noexcept { return *support_; }
    const CostModel& cost_model() const noexcept { return cost_; }

private:
    std::string name_;
    const Support* support_;
    CostModel cost_;
};

using StagedPtr = std::shared_ptr<const StagedMeasure>;

/// Stage s reveals the points with K(q) <= s: max 2^-K over them.
class KappaHat final : public StagedMeasure {
public:
    KappaHat(const Support& s, CostModel c) : StagedMeasure("kappa_hat", s, c) {}
    Rational approx(std::span<const Index> set, std::uint64_t stage) const override;
};

class NuHat final : public StagedMeasure {
public:
    NuHat(const Support& s, CostModel c) : StagedMeasure("nu_hat", s, c) {}
    Rational approx(std::span<const Index> set, std::uint64_t stage) const override;
};

class MHat final : public StagedMeasure {
public:
    MHat(const Support& s, CostModel c) : StagedMeasure("m_hat", s, c) {}
    Rational approx(std::span<const Index> set, std::uint64_t stage) const override;
};

/// 1 - 2^-min(|A|, s).
class ExampleHat final : public StagedMeasure {
public:
    ExampleHat(const Support& s, CostModel c) : StagedMeasure("example_hat", s, c) {}
    Rational approx(std::span<const Index> set, std::uint64_t stage) const override;
};

/// (1 - 2^-s) * nu(A): converges to nu(A) with error exactly 2^-s * nu(A).
class GeometricHat final : public StagedMeasure {
public:
    GeometricHat(const Support& s, CostModel c) : StagedMeasure("geometric_hat", s, c) {}
    Rational approx(std::span<const Index> set, std::uint64_t stage) const override;
};

class ZeroHat final : public StagedMeasure {
public:
    ZeroHat(const Support& s, CostModel c) : StagedMeasure("zero_hat", s, c) {}
    Rational approx(std::span<const Index>, std::uint64_t) const override { return 0; }
};

/// Ordered list M_0 .. M_K of staged measures, K >= 1.
class Registry {
public:
    explicit Registry(std::vector<StagedPtr> entries);

    /// {"cost": {...}, "measures": [{"kind": "kappa", "cost": {...}}, ...]}
    static Registry from_json(const nlohmann::json& doc, const Support& support);
    /// kappa, nu, m, example, geometric, zero with the unit cost model.
    static Registry defaults(const Support& support);

    std::size_t size() const noexcept { return entries_.size(); }
    const StagedMeasure& at(std::size_t k) const { return *entries_.at(k); }
    nlohmann::json describe() const;

private:
    std::vector<StagedPtr> entries_;
};

/// min over B subset A of the largest s <= t such that every stage s' <= s of
/// M_k on B completes within t simulated steps; 0 if some B never completes.
std::uint64_t tau_k(const Registry& reg, std::size_t k, std::span<const Index> set, std::uint64_t t);

/// max over B subset A, s <= t, of M_k(B, s) among calls completing within T steps.
Rational eta_k(const Registry& reg, std::size_t k, std::span<const Index> set, std::uint64_t t,
               std::uint64_t budget);

struct CoverResult {
    Rational value;
    std::uint64_t stage = 0;                      // tau_k(A, t)
    std::vector<std::vector<Index>> partition;    // lexicographically smallest optimal blocks
};

/// min over covers of A by subsets of A of sum eta_k(A_i, tau_k(A,t), t),
/// computed as a subset DP over partitions.
CoverResult theta_hat_k(const Registry& reg, std::size_t k, std::span<const Index> set, std::uint64_t t);

struct ThetaTrace {
    Rational value;
    std::vector<Index> set;                                  // A chosen from E in weight order
    std::vector<std::pair<std::uint64_t, Rational>> by_stage;  // theta_hat_k(A, t), t = 0..t_budget
    std::vector<std::pair<std::size_t, Rational>> by_size;     // nested prefixes of A at t_budget
};

ThetaTrace theta_k_eval(const Registry& reg, std::size_t k, const IndexSet& e, std::size_t set_budget,
                        std::uint64_t stage_budget);

struct MixtureResult {
    Rational value;
    std::vector<Rational> terms;  // theta_hat_k(A, t) for k <= min(t, K)
};

MixtureResult mixture_theta(const Registry& reg, std::span<const Index> set, std::uint64_t t);

/// The mixture as an outer measure: theta_hat at the largest allowed A in
/// weight order and a fixed stage budget.
class MixtureTheta final : public OuterMeasure {
public:
    MixtureTheta(const Registry& reg, const Support& support, std::size_t set_budget, std::uint64_t stage_budget);
    std::string name() const override { return "theta"; }
    Rational evaluate(const IndexSet& set) const override;

private:
    const Registry* reg_;
    std::size_t set_budget_;
    std::uint64_t stage_budget_;
};

}  // namespace dyadlab::measures
