#pragma once

// Sampled domination of one measure by another on dyadic cubes and balls,
// the ball/cube complexity bound, the kappa-is-not-globally-optimal
// construction and the local-optimality verdict. Every verdict here is
// empirical: it covers the sampled sets only.

#include "dyadlab/dimension.hpp"
#include "dyadlab/measures.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dyadlab::dom {

enum class FamilyKind { cubes, balls };
enum class Verdict { dominates, fails, inconclusive };

std::string_view to_string(FamilyKind k);
std::string_view to_string(Verdict v);

struct Thresholds {
    unsigned r0 = 32;
    double slope_tol = 0.1;
    double gap_tol = 0.2;  // bound on d(r_max)/r_max
};

struct SamplerConfig {
    std::uint64_t seed = 1;
    std::size_t random_per_r = 32;
    std::size_t max_support_centers = 256;  // balls only
};

struct GapRecord {
    unsigned r = 0;
    std::size_t sampled = 0;
    std::size_t with_nu = 0;       // sampled sets with nu(E) > 0
    std::optional<double> gap;     // d(r); nullopt when with_nu == 0
    std::string worst_set;
};

/// d(r) = max over sampled E with nu(E) > 0 of log2(nu(E)/mu(E)), +inf when mu(E) = 0.
struct DominationReport {
    std::string mu, nu;
    FamilyKind family = FamilyKind::cubes;
    Thresholds thresholds;
    std::vector<GapRecord> records;
    double fitted_slope = 0;  // least squares of d(r) on the tail r >= r0
    double final_ratio = 0;   // d(r_max) / r_max
    bool all_finite = true;
    bool slope_ok = false;
    bool ratio_ok = false;
    Verdict verdict = Verdict::inconclusive;

    nlohmann::json to_json() const;
    std::string to_csv() const;
};

DominationReport dominate_on_cubes(const measures::OuterMeasure& mu, const measures::OuterMeasure& nu,
                                   dim::RRange range, const SamplerConfig& sampler, const Thresholds& th);
DominationReport dominate_on_balls(const measures::OuterMeasure& mu, const measures::OuterMeasure& nu,
                                   dim::RRange range, const SamplerConfig& sampler, const Thresholds& th);

/// K_enc(r): the machine's complexity of the gamma code of r + 1 (gamma(0) does not exist).
std::size_t k_enc(unsigned r);

struct BallCubeTriple {
    unsigned r = 0;
    geo::DyadicCube cube;
    geo::Ball ball;
    std::size_t k_cube = 0;
    std::size_t k_ball = 0;
    long excess = 0;  // |K(B) - K(Q)| - K_enc(r)
    bool witness_in_product_set = true;
};

struct BallCubeReport {
    std::vector<BallCubeTriple> triples;
    long constant = 0;  // max excess
    std::size_t witness_failures = 0;
    std::size_t inscribed_violations = 0;  // inscribed balls with K(B) < K(Q)

    nlohmann::json to_json(bool full = false) const;
};

/// K(Q) is the minimum K over the (r + guard)-grid points of Q, K(B) is K_r of its centre.
BallCubeReport ball_cube_bound_check(unsigned r_max, std::size_t samples, std::uint64_t seed, unsigned guard,
                                     std::size_t dim, geo::ComplexityCache& cache);

struct CounterexampleRecord {
    unsigned alpha = 0;
    std::size_t size = 0;  // |E_alpha| in the support
    Rational kappa, nu;
    double ratio = 0;  // kappa / nu
    double gamma = 0;  // 2 + 2 log2(alpha + 2) + c
    bool strict = false;  // kappa < 2^-alpha

    nlohmann::json to_json() const;
};

/// E_alpha = support points with K(q) > alpha. Throws BudgetError when it is empty.
CounterexampleRecord kappa_not_global_counterexample(unsigned alpha, const measures::Support& support,
                                                     double machine_c);

struct OptimalityVerdict {
    DominationReport cubes, balls;
    bool locally_optimal = false;
    bool families_agree = false;

    nlohmann::json to_json() const;
};

/// mu against kappa on cubes and on balls: locally optimal iff both dominate.
OptimalityVerdict local_optimality_verdict(const measures::OuterMeasure& mu, dim::RRange range,
                                           const SamplerConfig& sampler, const Thresholds& th);

}  // namespace dyadlab::dom
