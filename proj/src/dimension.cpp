#include "dyadlab/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dyadlab::dim {

namespace {

nlohmann::json number(double v) {
    if (std::isinf(v)) return "inf";
    if (std::isnan(v)) return nullptr;
    return v;
}

void check_range(RRange range) {
    if (range.min > range.max) throw ConfigError("empty r range");
}

// Smallest a with weight{slope <= a} > threshold, scanning ascending.
double lower_quantile(std::vector<std::pair<double, Rational>> v, const Rational& threshold) {
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    Rational acc = 0;
    for (const auto& [s, w] : v) {
        acc += w;
        if (acc > threshold) return s;
    }
    return v.back().first;
}

// Largest a with weight{slope >= a} > threshold, scanning descending.
double upper_quantile(std::vector<std::pair<double, Rational>> v, const Rational& threshold) {
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    Rational acc = 0;
    for (const auto& [s, w] : v) {
        acc += w;
        if (acc > threshold) return s;
    }
    return v.back().first;
}

}  // namespace

std::string DimensionProfile::to_csv() const {
    std::ostringstream out;
    out << "r,value\n";
    for (const auto& s : samples) {
        out << s.r << ',';
        if (std::isinf(s.value))
            out << "inf";
        else
            out << s.value;
        out << '\n';
    }
    return out.str();
}

nlohmann::json DimensionProfile::to_json() const {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& s : samples) rows.push_back({{"r", s.r}, {"value", number(s.value)}});
    return {{"subject", subject}, {"support_exhausted", support_exhausted}, {"samples", rows}};
}

nlohmann::json SlopeEstimate::to_json() const {
    return {{"lower", number(lower)}, {"upper", number(upper)}, {"r0", r0},
            {"regression_slope", number(regression_slope)}, {"tail_samples", tail_samples}};
}

DimensionProfile k_profile(const geo::PointDescriptor& x, RRange range, unsigned guard, geo::ComplexityCache& cache) {
    check_range(range);
    DimensionProfile p;
    p.subject = "K_r(" + x.describe() + ")";
    for (unsigned r = range.min; r <= range.max; ++r)
        p.samples.push_back({r, static_cast<double>(geo::k_at_precision(x, r, guard, cache).k)});
    return p;
}

DimensionProfile local_dim_profile(const measures::OuterMeasure& mu, const geo::PointDescriptor& x, RRange range) {
    check_range(range);
    DimensionProfile p;
    p.subject = mu.name() + " at " + x.describe();
    for (unsigned r = range.min; r <= range.max; ++r) {
        auto members = mu.support().in_ball(x, r);
        if (members.empty()) p.support_exhausted = true;
        Rational v = mu.evaluate(measures::IndexSet{std::move(members), true});
        p.samples.push_back({r, sgn(v) > 0 ? -log2_of(v) : kInfinity});
    }
    return p;
}

SlopeEstimate estimate_slopes(const DimensionProfile& profile, unsigned r0) {
    SlopeEstimate est;
    est.r0 = r0;
    est.lower = kInfinity;
    est.upper = -kInfinity;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    bool finite = true;
    for (const auto& s : profile.samples) {
        if (s.r < r0) continue;
        if (s.r == 0) throw InsufficientData("slope needs r > 0");
        ++est.tail_samples;
        const double ratio = s.value / s.r;
        est.lower = std::min(est.lower, ratio);
        est.upper = std::max(est.upper, ratio);
        finite = finite && std::isfinite(s.value);
        sx += s.r;
        sy += s.value;
        sxx += double(s.r) * s.r;
        sxy += s.r * s.value;
    }
    if (est.tail_samples < 3)
        throw InsufficientData("need at least 3 samples with r >= " + std::to_string(r0) + ", have " +
                               std::to_string(est.tail_samples));
    const double n = static_cast<double>(est.tail_samples);
    est.regression_slope = finite ? (n * sxy - sx * sy) / (n * sxx - sx * sx) : std::nan("");
    return est;
}

GlobalDims global_dims_from_slopes(const std::vector<WeightedSlopes>& atoms, double epsilon) {
    Rational total = 0;
    for (const auto& a : atoms) total += a.weight;
    if (atoms.empty() || sgn(total) <= 0) throw std::domain_error("global dimensions need positive total weight");

    const Rational threshold = Rational(epsilon) * total;
    std::vector<std::pair<double, Rational>> lower, upper;
    for (const auto& a : atoms) {
        lower.emplace_back(a.slopes.lower, a.weight);
        upper.emplace_back(a.slopes.upper, a.weight);
    }
    GlobalDims g;
    g.epsilon = epsilon;
    g.atoms = atoms.size();
    g.dimH = lower_quantile(lower, threshold);
    g.DimH = upper_quantile(lower, threshold);
    g.dimP = lower_quantile(upper, threshold);
    g.DimP = upper_quantile(upper, threshold);
    return g;
}

GlobalDims global_dims(const measures::OuterMeasure& mu, RRange range, unsigned r0, double epsilon) {
    std::vector<WeightedSlopes> atoms;
    for (measures::Index i = 0; i < mu.support().size(); ++i) {
        Rational w = mu.singleton(i);
        if (sgn(w) <= 0) continue;
        auto profile = local_dim_profile(mu, mu.support()[i].point, range);
        atoms.push_back({w, estimate_slopes(profile, r0)});
    }
    return global_dims_from_slopes(atoms, epsilon);
}

nlohmann::json GlobalDims::to_json() const {
    return {{"dimH", number(dimH)}, {"DimH", number(DimH)}, {"dimP", number(dimP)},
            {"DimP", number(DimP)}, {"epsilon", epsilon}, {"atoms", atoms}};
}

}  // namespace dyadlab::dim
