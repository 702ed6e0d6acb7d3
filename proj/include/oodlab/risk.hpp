#ifndef OODLAB_RISK_HPP
#define OODLAB_RISK_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "oodlab/common.hpp"
#include "oodlab/domain.hpp"
#include "oodlab/hypothesis.hpp"

namespace oodlab {

/// Nonnegative loss over labels 1..K+1 with zero diagonal and strictly
/// positive off-diagonal entries. B = max entry bounds every risk.
class LossTable {
public:
    LossTable(int k, std::vector<double> values) : k_(k), values_(std::move(values)) {
        const int side = k_ + 1;
        if (k_ < 1) throw DomainParameterError("loss table needs K >= 1");
        if (values_.size() != static_cast<std::size_t>(side) * side)
            throw DomainParameterError("loss table has wrong size");
        bound_ = 0.0;
        for (int y1 = 1; y1 <= side; ++y1)
            for (int y2 = 1; y2 <= side; ++y2) {
                const double v = (*this)(y1, y2);
                if (!std::isfinite(v) || v < 0.0)
                    throw DomainParameterError("loss entries must be finite and nonnegative");
                if (y1 == y2 && v != 0.0) throw DomainParameterError("loss diagonal must be zero");
                if (y1 != y2 && v <= 0.0)
                    throw DomainParameterError("off-diagonal loss must be positive");
                bound_ = std::max(bound_, v);
            }
    }

    static LossTable zero_one(int k) {
        const int side = k + 1;
        std::vector<double> v(static_cast<std::size_t>(side) * side, 1.0);
        for (int y = 0; y < side; ++y) v[static_cast<std::size_t>(y) * side + y] = 0.0;
        return LossTable(k, std::move(v));
    }

    double operator()(int y1, int y2) const {
        return values_[static_cast<std::size_t>(y1 - 1) * (k_ + 1) + (y2 - 1)];
    }

    int k() const { return k_; }
    double bound() const { return bound_; }
    const std::vector<double>& raw() const { return values_; }

    LossTable scaled(double c) const {
        std::vector<double> v = values_;
        for (double& x : v) x *= c;
        return LossTable(k_, std::move(v));
    }

private:
    int k_;
    std::vector<double> values_;
    double bound_;
};

namespace detail {
inline void check_defined(const Hypothesis& h, const FiniteDomain& domain) {
    if (h.num_points() < domain.num_points() || h.k != domain.k())
        throw EvaluationError("hypothesis undefined on a support point of the domain");
}
}  // namespace detail

/// Expected loss against the ID joint.
inline double risk_in(const Hypothesis& h, const FiniteDomain& domain, const LossTable& loss) {
    detail::check_defined(h, domain);
    double r = 0.0;
    for (int x = 0; x < domain.num_points(); ++x)
        for (int y = 1; y <= domain.k(); ++y) {
            const double m = domain.id_part().mass(x, y);
            if (m > 0.0) r += m * loss(h(x), y);
        }
    return r;
}

/// Expected loss of failing to reject against the OOD marginal.
inline double risk_out(const Hypothesis& h, const FiniteDomain& domain, const LossTable& loss) {
    detail::check_defined(h, domain);
    double r = 0.0;
    for (int x = 0; x < domain.num_points(); ++x) {
        const double m = domain.ood_part().mass(x);
        if (m > 0.0) r += m * loss(h(x), domain.k() + 1);
    }
    return r;
}

inline double alpha_risk(const Hypothesis& h, const FiniteDomain& domain, const LossTable& loss,
                         double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw DomainParameterError("alpha_risk: alpha must lie in [0, 1]");
    return (1.0 - alpha) * risk_in(h, domain, loss) + alpha * risk_out(h, domain, loss);
}

/// Risk against the domain's own pi_out mixture.
inline double risk(const Hypothesis& h, const FiniteDomain& domain, const LossTable& loss) {
    return alpha_risk(h, domain, loss, domain.pi_out());
}

/// An exact extremum over a finite space: the value, every index attaining
/// it within 1e-12, and the lowest such index as canonical representative.
struct Extremum {
    double value = 0.0;
    std::vector<int> argset;
    int canonical = -1;
};

namespace detail {
template <typename Fn>
inline Extremum minimize_over(int count, Fn&& value_of) {
    if (count <= 0) throw DomainParameterError("extremum over an empty space");
    if (static_cast<std::size_t>(count) > kSpaceCap)
        throw SizeCapError("space exceeds the enumeration cap");
    std::vector<double> vals(static_cast<std::size_t>(count));
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < count; ++i) {
        vals[static_cast<std::size_t>(i)] = value_of(i);
        best = std::min(best, vals[static_cast<std::size_t>(i)]);
    }
    Extremum out;
    out.value = best;
    for (int i = 0; i < count; ++i)
        if (vals[static_cast<std::size_t>(i)] <= best + kMassTol) out.argset.push_back(i);
    out.canonical = out.argset.front();
    return out;
}
}  // namespace detail

/// Exact infimum of the alpha-risk by full enumeration.
inline Extremum inf_alpha_risk(const HypothesisSpace& space, const FiniteDomain& domain,
                               const LossTable& loss, double alpha) {
    return detail::minimize_over(space.size(), [&](int i) {
        return alpha_risk(space.member(i), domain, loss, alpha);
    });
}

/// Misclassifying into another ID label never costs more than rejecting.
inline bool check_loss_dominance(const LossTable& loss, int k) {
    for (int y1 = 1; y1 <= k; ++y1)
        for (int y2 = 1; y2 <= k; ++y2)
            if (loss(y2, y1) > loss(k + 1, y1)) return false;
    return true;
}

}  // namespace oodlab

#endif
