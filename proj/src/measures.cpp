#include "dyadlab/measures.hpp"

#include <stdexcept>

namespace dyadlab::measures {

Rational Kappa::evaluate(const IndexSet& set) const {
    if (set.empty()) return 0;
    std::size_t best = support()[set.indices.front()].k;
    for (Index i : set.indices) best = std::min(best, support()[i].k);
    return pow2(-static_cast<long>(best));
}

Rational Nu::evaluate(const IndexSet& set) const {
    Rational total = 0;
    for (Index i : set.indices) total += pow2(-static_cast<long>(support()[i].k));
    return total;
}

Rational AlgorithmicProbability::evaluate(const IndexSet& set) const {
    Rational total = 0;
    for (Index i : set.indices) total += support()[i].m;
    return total;
}

Scaled::Scaled(MeasurePtr base, Rational factor)
    : OuterMeasure(base->support()), base_(std::move(base)), factor_(std::move(factor)) {
    if (sgn(factor_) <= 0) throw std::invalid_argument("scale factor must be positive");
}

std::string Scaled::name() const {
    return factor_.get_str() + "*" + base_->name();
}

RestrictedKappa::RestrictedKappa(const Support& support, std::string label,
                                 std::function<bool(const SupportPoint&)> keep)
    : OuterMeasure(support), label_(std::move(label)), keep_(support.size()) {
    for (Index i = 0; i < support.size(); ++i) keep_[i] = keep(support[i]);
}

Rational RestrictedKappa::evaluate(const IndexSet& set) const {
    std::optional<std::size_t> best;
    for (Index i : set.indices)
        if (keep_[i] && (!best || support()[i].k < *best)) best = support()[i].k;
    return best ? pow2(-static_cast<long>(*best)) : Rational(0);
}

Rational CountingExample::evaluate(const IndexSet& set) const {
    if (set.infinite) return 2;
    return 1 - pow2(-static_cast<long>(set.size()));
}

Rational kappa(const SetQuery& e, const Support& support) {
    return Kappa(support)(e);
}

Rational nu(const SetQuery& e, const Support& support) {
    return Nu(support)(e);
}

Rational m_measure(const SetQuery& e, const Support& support) {
    return AlgorithmicProbability(support)(e);
}

MeasurePtr make_measure(const std::string& name, const Support& support) {
    if (name == "kappa") return std::make_shared<Kappa>(support);
    if (name == "nu") return std::make_shared<Nu>(support);
    if (name == "m") return std::make_shared<AlgorithmicProbability>(support);
    if (name == "zero") return std::make_shared<ZeroMeasure>(support);
    if (name == "example") return std::make_shared<CountingExample>(support);
    if (name == "kappa_even")
        return std::make_shared<RestrictedKappa>(support, "kappa_even",
                                                 [](const SupportPoint& p) { return p.code.size() % 2 == 0; });
    throw ConfigError("unknown measure '" + name + "'");
}

}  // namespace dyadlab::measures
