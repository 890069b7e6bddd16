#include "dyadlab/domination.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace dyadlab::dom {

namespace {

using measures::Index;
using measures::IndexSet;

nlohmann::json number(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return nullptr;
    return v;
}

// Uniform on [0, 1) with denominator 2^64.
Rational unit_random(std::mt19937_64& rng) {
    return Rational(BigInt(static_cast<unsigned long>(rng()))) * pow2(-64);
}

// Bounding box of the support, widened by one unit on every side.
struct Box {
    std::vector<Rational> lo, hi;

    explicit Box(const measures::Support& s) : lo(s.dim()), hi(s.dim()) {
        for (std::size_t i = 0; i < s.dim(); ++i) {
            lo[i] = hi[i] = 0;
            for (const auto& p : s.points()) {
                lo[i] = std::min(lo[i], p.point[i]);
                hi[i] = std::max(hi[i], p.point[i]);
            }
            lo[i] -= 1;
            hi[i] += 1;
        }
    }

    geo::RationalPoint sample(std::mt19937_64& rng) const {
        std::vector<Rational> c;
        for (std::size_t i = 0; i < lo.size(); ++i) c.push_back(lo[i] + (hi[i] - lo[i]) * unit_random(rng));
        return geo::RationalPoint(std::move(c));
    }
};

std::uint64_t mix_seed(std::uint64_t seed, unsigned r, FamilyKind kind) {
    return seed * 0x9E3779B97F4A7C15ULL + r * 2 + (kind == FamilyKind::balls ? 1 : 0);
}

double least_squares(const std::vector<std::pair<double, double>>& xy) {
    if (xy.size() < 2) return 0;
    double n = static_cast<double>(xy.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, y] : xy) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

struct Probe {
    std::string label;
    IndexSet members;
};

void score(GapRecord& rec, const measures::OuterMeasure& mu, const measures::OuterMeasure& nu,
           const std::vector<Probe>& probes) {
    rec.sampled = probes.size();
    for (const auto& p : probes) {
        const Rational v = nu.evaluate(p.members);
        if (sgn(v) <= 0) continue;
        ++rec.with_nu;
        const Rational u = mu.evaluate(p.members);
        const double gap = sgn(u) > 0 ? log2_of(v / u) : dim::kInfinity;
        if (!rec.gap || gap > *rec.gap) {
            rec.gap = gap;
            rec.worst_set = p.label;
        }
    }
}

void conclude(DominationReport& rep) {
    std::vector<std::pair<double, double>> tail, all;
    const GapRecord* last = nullptr;
    for (const auto& rec : rep.records) {
        if (!rec.gap) continue;
        last = &rec;
        if (std::isinf(*rec.gap)) rep.all_finite = false;
        all.emplace_back(rec.r, *rec.gap);
        if (rec.r >= rep.thresholds.r0) tail.emplace_back(rec.r, *rec.gap);
    }
    if (!last) {
        rep.verdict = Verdict::inconclusive;
        return;
    }
    if (!rep.all_finite) {
        rep.fitted_slope = rep.final_ratio = dim::kInfinity;
        rep.verdict = Verdict::fails;
        return;
    }
    rep.fitted_slope = least_squares(tail.size() >= 3 ? tail : all);
    rep.final_ratio = *last->gap / std::max(1u, last->r);
    rep.slope_ok = rep.fitted_slope <= rep.thresholds.slope_tol;
    rep.ratio_ok = rep.final_ratio <= rep.thresholds.gap_tol;
    rep.verdict = rep.slope_ok && rep.ratio_ok ? Verdict::dominates : Verdict::fails;
}

DominationReport start(const measures::OuterMeasure& mu, const measures::OuterMeasure& nu, FamilyKind kind,
                       dim::RRange range, const Thresholds& th) {
    if (&mu.support() != &nu.support()) throw std::invalid_argument("measures must share a support");
    if (range.min > range.max) throw ConfigError("empty r range");
    DominationReport rep;
    rep.mu = mu.name();
    rep.nu = nu.name();
    rep.family = kind;
    rep.thresholds = th;
    return rep;
}

}  // namespace

std::string_view to_string(FamilyKind k) {
    return k == FamilyKind::cubes ? "cubes" : "balls";
}

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::dominates: return "dominates";
        case Verdict::fails: return "fails";
        default: return "inconclusive";
    }
}

DominationReport dominate_on_cubes(const measures::OuterMeasure& mu, const measures::OuterMeasure& nu,
                                   dim::RRange range, const SamplerConfig& sampler, const Thresholds& th) {
    auto rep = start(mu, nu, FamilyKind::cubes, range, th);
    const auto& support = mu.support();
    const Box box(support);
    for (unsigned r = range.min; r <= range.max; ++r) {
        std::mt19937_64 rng(mix_seed(sampler.seed, r, FamilyKind::cubes));
        auto groups = support.group_by_cube(r);
        for (std::size_t j = 0; j < sampler.random_per_r; ++j) {
            auto cube = geo::cube_of_point(box.sample(rng), r);
            if (!groups.contains(cube)) groups.emplace(cube, support.in_cube(cube));
        }
        std::vector<Probe> probes;
        for (auto& [cube, idx] : groups) probes.push_back({cube.to_string(), IndexSet::of(std::move(idx), true)});
        GapRecord rec;
        rec.r = r;
        score(rec, mu, nu, probes);
        rep.records.push_back(std::move(rec));
    }
    conclude(rep);
    return rep;
}

DominationReport dominate_on_balls(const measures::OuterMeasure& mu, const measures::OuterMeasure& nu,
                                   dim::RRange range, const SamplerConfig& sampler, const Thresholds& th) {
    auto rep = start(mu, nu, FamilyKind::balls, range, th);
    const auto& support = mu.support();
    const Box box(support);
    const std::size_t fixed = std::min(sampler.max_support_centers, support.size());
    for (unsigned r = range.min; r <= range.max; ++r) {
        std::mt19937_64 rng(mix_seed(sampler.seed, r, FamilyKind::balls));
        std::vector<geo::RationalPoint> centers;
        for (Index i = 0; i < fixed; ++i) centers.push_back(support[i].point);
        for (std::size_t j = 0; j < sampler.random_per_r; ++j) centers.push_back(box.sample(rng));
        std::vector<Probe> probes;
        for (auto& c : centers) {
            geo::Ball b{c, r};
            probes.push_back({"B(" + c.to_string() + ", 2^-" + std::to_string(r) + ")",
                              IndexSet::of(support.in_ball(b), true)});
        }
        GapRecord rec;
        rec.r = r;
        score(rec, mu, nu, probes);
        rep.records.push_back(std::move(rec));
    }
    conclude(rep);
    return rep;
}

nlohmann::json DominationReport::to_json() const {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& rec : records)
        rows.push_back({{"r", rec.r}, {"sampled", rec.sampled}, {"with_nu", rec.with_nu},
                        {"worst_gap", rec.gap ? number(*rec.gap) : nlohmann::json(nullptr)},
                        {"worst_set", rec.worst_set}});
    return {{"mu", mu}, {"nu", nu}, {"family", to_string(family)},
            {"thresholds", {{"r0", thresholds.r0}, {"slope_tol", thresholds.slope_tol}, {"gap_tol", thresholds.gap_tol}}},
            {"fitted_slope", number(fitted_slope)}, {"final_ratio", number(final_ratio)},
            {"all_finite", all_finite}, {"slope_ok", slope_ok}, {"ratio_ok", ratio_ok},
            {"verdict", to_string(verdict)}, {"evidence", "empirical, sampled"}, {"records", rows}};
}

std::string DominationReport::to_csv() const {
    std::ostringstream out;
    out << "r,sampled,with_nu,worst_gap\n";
    for (const auto& rec : records) {
        out << rec.r << ',' << rec.sampled << ',' << rec.with_nu << ',';
        if (!rec.gap)
            out << "";
        else if (std::isinf(*rec.gap))
            out << "inf";
        else
            out << *rec.gap;
        out << '\n';
    }
    return out.str();
}

std::size_t k_enc(unsigned r) {
    return tpm::exact_k(tpm::gamma_encode(std::uint64_t{r} + 1));
}

namespace {

// Minimum K over the points of Q on the (r + guard)-grid.
std::size_t k_of_cube(const geo::DyadicCube& q, unsigned guard, geo::ComplexityCache& cache) {
    const std::size_t n = q.dim();
    const std::size_t per_axis = std::size_t{1} << guard;
    const Rational step = pow2(-static_cast<long>(q.r + guard));
    const auto corner = q.lower_corner();
    std::vector<std::size_t> idx(n, 0);
    std::optional<std::size_t> best;
    while (true) {
        std::vector<Rational> c;
        for (std::size_t i = 0; i < n; ++i) c.push_back(corner[i] + step * static_cast<unsigned long>(idx[i]));
        const std::size_t k = cache.k_of_point(geo::RationalPoint(std::move(c)));
        if (!best || k < *best) best = k;
        std::size_t i = 0;
        while (i < n && ++idx[i] == per_axis) idx[i++] = 0;
        if (i == n) break;
    }
    return *best;
}

geo::RationalPoint random_grid_point(std::mt19937_64& rng, std::size_t n, unsigned bits) {
    // uniform on [-2, 2) with denominator 2^bits
    std::uniform_int_distribution<long> pick(-(2L << bits), (2L << bits) - 1);
    std::vector<Rational> c;
    for (std::size_t i = 0; i < n; ++i) c.push_back(Rational(pick(rng)) * pow2(-static_cast<long>(bits)));
    return geo::RationalPoint(std::move(c));
}

}  // namespace

BallCubeReport ball_cube_bound_check(unsigned r_max, std::size_t samples, std::uint64_t seed, unsigned guard,
                                     std::size_t dim, geo::ComplexityCache& cache) {
    if (guard == 0) throw ConfigError("ball/cube check needs guard >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<unsigned> pick_r(0, r_max);
    BallCubeReport rep;
    bool first = true;
    for (std::size_t s = 0; s < samples; ++s) {
        BallCubeTriple t;
        t.r = pick_r(rng);
        t.cube = geo::cube_of_point(random_grid_point(rng, dim, t.r + 6), t.r);
        // centre within 2^-r of the cube's closure, retried until the open ball meets the cube
        const auto corner = t.cube.lower_corner();
        const Rational rad = pow2(-static_cast<long>(t.r));
        do {
            std::vector<Rational> c;
            for (std::size_t i = 0; i < dim; ++i) c.push_back(corner[i] - rad + 3 * rad * unit_random(rng));
            t.ball = geo::Ball{geo::RationalPoint(std::move(c)), t.r};
        } while (!geo::ball_intersects_cube(t.ball, t.cube));

        t.k_cube = k_of_cube(t.cube, guard, cache);
        const auto kb = geo::k_at_precision(t.ball.center, t.r, guard, cache);
        t.k_ball = kb.k;
        t.excess = std::labs(static_cast<long>(t.k_ball) - static_cast<long>(t.k_cube)) -
                   static_cast<long>(k_enc(t.r));
        const auto addresses = geo::neighbor_address_set(kb.witness, t.r);
        t.witness_in_product_set =
            std::find(addresses.begin(), addresses.end(), t.cube.address) != addresses.end();
        if (!t.witness_in_product_set) ++rep.witness_failures;

        // inscribed ball B(centre(Q), 2^-(r+1)); its candidates sit on the (r + guard)-grid of Q
        const auto inner = geo::k_at_precision(t.cube.center(), t.r + 1, guard - 1, cache);
        if (inner.k < t.k_cube) ++rep.inscribed_violations;

        if (first || t.excess > rep.constant) rep.constant = t.excess;
        first = false;
        rep.triples.push_back(std::move(t));
    }
    return rep;
}

nlohmann::json BallCubeReport::to_json(bool full) const {
    std::map<long, std::size_t> histogram;
    for (const auto& t : triples) ++histogram[t.excess];
    nlohmann::json hist = nlohmann::json::array();
    for (auto [e, n] : histogram) hist.push_back({{"excess", e}, {"count", n}});
    nlohmann::json out = {{"triples", triples.size()}, {"constant", constant}, {"witness_failures", witness_failures},
                          {"inscribed_violations", inscribed_violations}, {"distribution", hist}};
    if (full) {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& t : triples)
            rows.push_back({{"r", t.r}, {"cube", t.cube.to_string()}, {"center", t.ball.center.to_string()},
                            {"k_cube", t.k_cube}, {"k_ball", t.k_ball}, {"excess", t.excess},
                            {"witness_in_product_set", t.witness_in_product_set}});
        out["records"] = rows;
    }
    return out;
}

CounterexampleRecord kappa_not_global_counterexample(unsigned alpha, const measures::Support& support,
                                                     double machine_c) {
    std::vector<Index> e;
    for (Index i = 0; i < support.size(); ++i)
        if (support[i].k > alpha) e.push_back(i);
    if (e.empty())
        throw BudgetError("E_alpha is empty for alpha = " + std::to_string(alpha) + " at this table budget");
    const auto set = IndexSet::of(std::move(e), true);
    CounterexampleRecord rec;
    rec.alpha = alpha;
    rec.size = set.size();
    rec.kappa = measures::Kappa(support).evaluate(set);
    rec.nu = measures::Nu(support).evaluate(set);
    rec.ratio = to_double(Rational(rec.kappa / rec.nu));
    rec.gamma = 2 + 2 * std::log2(alpha + 2.0) + machine_c;
    rec.strict = rec.kappa < pow2(-static_cast<long>(alpha));
    return rec;
}

nlohmann::json CounterexampleRecord::to_json() const {
    return {{"alpha", alpha}, {"size", size}, {"kappa", kappa.get_str()}, {"nu", nu.get_str()},
            {"ratio", ratio}, {"gamma", gamma}, {"strict", strict}};
}

OptimalityVerdict local_optimality_verdict(const measures::OuterMeasure& mu, dim::RRange range,
                                           const SamplerConfig& sampler, const Thresholds& th) {
    const measures::Kappa kappa(mu.support());
    OptimalityVerdict v;
    v.cubes = dominate_on_cubes(mu, kappa, range, sampler, th);
    v.balls = dominate_on_balls(mu, kappa, range, sampler, th);
    v.locally_optimal = v.cubes.verdict == Verdict::dominates && v.balls.verdict == Verdict::dominates;
    v.families_agree = v.cubes.verdict == v.balls.verdict;
    return v;
}

nlohmann::json OptimalityVerdict::to_json() const {
    return {{"cubes", cubes.to_json()}, {"balls", balls.to_json()}, {"locally_optimal", locally_optimal},
            {"families_agree", families_agree}};
}

}  // namespace dyadlab::dom
