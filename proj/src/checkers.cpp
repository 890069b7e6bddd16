#include "dyadlab/checkers.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace dyadlab::measures {

namespace {

std::string describe(const IndexSet& s) {
    std::ostringstream out;
    out << '{';
    for (std::size_t i = 0; i < s.indices.size(); ++i) out << (i ? "," : "") << s.indices[i];
    out << '}';
    return out.str();
}

}  // namespace

std::vector<Family> sample_families(const Support& support, std::size_t count, std::uint64_t seed,
                                    FamilyShape shape) {
    if (support.empty()) throw ConfigError("cannot sample families from an empty support");
    std::mt19937_64 rng(seed);
    const std::size_t pool = std::min(shape.pool, support.size());
    std::uniform_int_distribution<std::size_t> pick(0, pool - 1);
    std::uniform_int_distribution<std::size_t> sets(1, shape.max_sets);
    std::uniform_int_distribution<std::size_t> size(1, shape.max_set_size);

    std::vector<Family> out;
    out.reserve(count);
    for (std::size_t f = 0; f < count; ++f) {
        Family family(sets(rng));
        for (auto& e : family) {
            std::vector<Index> idx;
            for (std::size_t n = size(rng); idx.size() < std::min(n, pool);) {
                Index i = static_cast<Index>(pick(rng));
                if (std::find(idx.begin(), idx.end(), i) == idx.end()) idx.push_back(i);
            }
            e = IndexSet::of(std::move(idx));
        }
        out.push_back(std::move(family));
    }
    return out;
}

AxiomReport check_outer_measure_axioms(const OuterMeasure& mu, const std::vector<Family>& families) {
    AxiomReport report;
    report.measure = mu.name();
    report.families = families.size();

    ++report.checks;
    if (Rational v = mu.evaluate(IndexSet{}); v != 0)
        report.violations.push_back({"empty_set", 0, "mu(empty) = " + v.get_str()});

    for (std::size_t f = 0; f < families.size(); ++f) {
        const Family& family = families[f];
        IndexSet all;
        std::vector<Rational> values;
        Rational sum = 0;
        for (const auto& e : family) {
            all = set_union(all, e);
            values.push_back(mu.evaluate(e));
            sum += values.back();
        }
        const Rational whole = mu.evaluate(all);

        for (std::size_t i = 0; i < family.size(); ++i) {
            ++report.checks;
            if (values[i] > whole)
                report.violations.push_back({"monotonicity", f, describe(family[i]) + " exceeds its union"});
            for (std::size_t j = 0; j < family.size(); ++j) {
                if (i == j || !is_subset(family[i], family[j])) continue;
                ++report.checks;
                if (values[i] > values[j])
                    report.violations.push_back(
                        {"monotonicity", f, describe(family[i]) + " exceeds superset " + describe(family[j])});
            }
        }
        ++report.checks;
        if (whole > sum)
            report.violations.push_back(
                {"subadditivity", f, "mu(union) = " + whole.get_str() + " > sum = " + sum.get_str()});
    }
    return report;
}

nlohmann::json AxiomReport::to_json() const {
    nlohmann::json v = nlohmann::json::array();
    for (const auto& x : violations) v.push_back({{"axiom", x.axiom}, {"family", x.family}, {"detail", x.detail}});
    return {{"measure", measure}, {"families", families}, {"checks", checks}, {"passed", passed()},
            {"violations", v}};
}

std::string AxiomReport::to_text() const {
    std::ostringstream out;
    out << measure << ": " << families << " families, " << checks << " checks, " << violations.size()
        << " violations\n";
    for (const auto& x : violations) out << "  [" << x.axiom << "] family " << x.family << ": " << x.detail << '\n';
    return out.str();
}

FinitenessTrace check_strong_finiteness(const OuterMeasure& mu, std::size_t budget) {
    FinitenessTrace trace;
    trace.measure = mu.name();
    const std::size_t n = std::min(budget, mu.support().size());
    Rational sum = 0;
    for (Index i = 0; i < n; ++i) {
        sum += mu.singleton(i);
        trace.partial_sums.push_back(sum);
        if (sum > 1 && trace.bounded_by_one) {
            trace.bounded_by_one = false;
            trace.first_excess = i + 1;
        }
    }
    return trace;
}

nlohmann::json FinitenessTrace::to_json() const {
    nlohmann::json sums = nlohmann::json::array();
    for (const auto& s : partial_sums) sums.push_back(s.get_str());
    return {{"measure", measure}, {"points", partial_sums.size()}, {"bounded_by_one", bounded_by_one},
            {"first_excess", first_excess}, {"partial_sums", sums},
            {"final", partial_sums.empty() ? "0" : partial_sums.back().get_str()}};
}

}  // namespace dyadlab::measures
