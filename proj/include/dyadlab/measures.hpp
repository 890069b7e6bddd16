#pragma once

// Concrete outer measures over a finite Support: kappa(E) = 2^-K(E),
// nu(E) = sum 2^-K(q), the lifted algorithmic probability m(E), and the
// fixtures used to probe the checkers.

#include "dyadlab/support.hpp"

#include <functional>
#include <memory>
#include <string>

namespace dyadlab::measures {

class OuterMeasure {
public:
    explicit OuterMeasure(const Support& support) : support_(&support) {}
    virtual ~OuterMeasure() = default;

    virtual std::string name() const = 0;
    virtual Rational evaluate(const IndexSet& set) const = 0;

    Rational operator()(const SetQuery& query) const { return evaluate(resolve(query, *support_)); }
    Rational singleton(Index i) const { return evaluate(IndexSet{{i}, false}); }
    const Support& support() const noexcept { return *support_; }

private:
    const Support* support_;
};

using MeasurePtr = std::shared_ptr<const OuterMeasure>;

/// 2^-K(E) over the support points in E; 0 on an empty intersection.
class Kappa final : public OuterMeasure {
public:
    using OuterMeasure::OuterMeasure;
    std::string name() const override { return "kappa"; }
    Rational evaluate(const IndexSet& set) const override;
};

class Nu final : public OuterMeasure {
public:
    using OuterMeasure::OuterMeasure;
    std::string name() const override { return "nu"; }
    Rational evaluate(const IndexSet& set) const override;
};

/// Sum of table census over the encodings of the support points in E.
class AlgorithmicProbability final : public OuterMeasure {
public:
    using OuterMeasure::OuterMeasure;
    std::string name() const override { return "m"; }
    Rational evaluate(const IndexSet& set) const override;
};

class ZeroMeasure final : public OuterMeasure {
public:
    using OuterMeasure::OuterMeasure;
    std::string name() const override { return "zero"; }
    Rational evaluate(const IndexSet&) const override { return 0; }
};

class Scaled final : public OuterMeasure {
public:
    Scaled(MeasurePtr base, Rational factor);
    std::string name() const override;
    Rational evaluate(const IndexSet& set) const override { return factor_ * base_->evaluate(set); }

private:
    MeasurePtr base_;
    Rational factor_;
};

/// kappa computed only over support points accepted by `keep`.
class RestrictedKappa final : public OuterMeasure {
public:
    RestrictedKappa(const Support& support, std::string label, std::function<bool(const SupportPoint&)> keep);
    std::string name() const override { return label_; }
    Rational evaluate(const IndexSet& set) const override;

private:
    std::string label_;
    std::vector<bool> keep_;
};

/// 1 - 2^-|E cap Q^n| for finitely many rationals, 2 otherwise: an outer
/// measure supported on Q^n that is not finitely supported.
class CountingExample final : public OuterMeasure {
public:
    using OuterMeasure::OuterMeasure;
    std::string name() const override { return "example"; }
    Rational evaluate(const IndexSet& set) const override;
};

Rational kappa(const SetQuery& e, const Support& support);
Rational nu(const SetQuery& e, const Support& support);
Rational m_measure(const SetQuery& e, const Support& support);

/// Builds a measure by name: kappa, nu, m, zero, example, kappa_even.
MeasurePtr make_measure(const std::string& name, const Support& support);

}  // namespace dyadlab::measures
