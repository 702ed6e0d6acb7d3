#ifndef OODLAB_AUC_HPP
#define OODLAB_AUC_HPP

#include <algorithm>
#include <limits>
#include <vector>

#include "oodlab/common.hpp"
#include "oodlab/domain.hpp"
#include "oodlab/hypothesis.hpp"
#include "oodlab/risk.hpp"

namespace oodlab {

/// AUC of a ranker against explicit ID/OOD marginals (Mann-Whitney form,
/// ties counted 1/2). Pairs accumulate in canonical (x, x') order.
inline double auc(const RankingFunction& r, const std::vector<double>& id_marginal,
                  const std::vector<double>& ood_marginal) {
    const int n = static_cast<int>(id_marginal.size());
    double total = 0.0;
    for (int x = 0; x < n; ++x) {
        const double wi = id_marginal[static_cast<std::size_t>(x)];
        if (wi == 0.0) continue;
        for (int xo = 0; xo < n; ++xo) {
            const double wo = ood_marginal[static_cast<std::size_t>(xo)];
            if (wo == 0.0) continue;
            if (r(x) > r(xo))
                total += wi * wo;
            else if (r(x) == r(xo))
                total += 0.5 * wi * wo;
        }
    }
    return total;
}

inline std::vector<double> id_marginal_of(const FiniteDomain& d) {
    std::vector<double> m(static_cast<std::size_t>(d.num_points()));
    for (int x = 0; x < d.num_points(); ++x) m[static_cast<std::size_t>(x)] = d.id_part().marginal(x);
    return m;
}

/// AUC against a domain; independent of pi_out by construction.
inline double auc(const RankingFunction& r, const FiniteDomain& domain) {
    if (r.num_points() < domain.num_points())
        throw EvaluationError("ranker undefined on a point of the domain");
    return auc(r, id_marginal_of(domain), domain.ood_part().raw());
}

/// Exact supremum of AUC over a finite ranker set.
inline Extremum sup_auc(const std::vector<RankingFunction>& space, const FiniteDomain& domain) {
    if (space.empty()) throw DomainParameterError("sup_auc over an empty space");
    const auto idm = id_marginal_of(domain);
    std::vector<double> vals(space.size());
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < space.size(); ++i) {
        vals[i] = auc(space[i], idm, domain.ood_part().raw());
        best = std::max(best, vals[i]);
    }
    Extremum out;
    out.value = best;
    for (std::size_t i = 0; i < space.size(); ++i)
        if (vals[i] >= best - kMassTol) out.argset.push_back(static_cast<int>(i));
    out.canonical = out.argset.front();
    return out;
}

/// Supremum of AUC over all ranking functions, in closed form:
/// 0.5 * sum_{x,x'} max{g_I(x) g_O(x'), g_I(x') g_O(x)} under the counting
/// measure on the support of the balanced mixture.
inline double bayes_sup_auc(const FiniteDomain& domain) {
    const auto idm = id_marginal_of(domain);
    const auto& oodm = domain.ood_part().raw();
    const int n = domain.num_points();
    double total = 0.0;
    for (int x = 0; x < n; ++x)
        for (int xo = 0; xo < n; ++xo) {
            const double a = idm[static_cast<std::size_t>(x)] * oodm[static_cast<std::size_t>(xo)];
            const double b = idm[static_cast<std::size_t>(xo)] * oodm[static_cast<std::size_t>(x)];
            total += std::max(a, b);
        }
    return 0.5 * total;
}

/// The optimal ranker: sigmoid of the ID/OOD density ratio where both are
/// positive; 1 where the OOD density vanishes and 0 where only the ID
/// density vanishes. Only the induced ordering matters for optimality.
inline RankingFunction bayes_ranker(const FiniteDomain& domain) {
    const auto idm = id_marginal_of(domain);
    const auto& oodm = domain.ood_part().raw();
    RankingFunction r;
    r.scores.resize(idm.size());
    for (std::size_t x = 0; x < idm.size(); ++x) {
        if (oodm[x] == 0.0)
            r.scores[x] = 1.0;
        else if (idm[x] == 0.0)
            r.scores[x] = 0.0;
        else
            r.scores[x] = sigmoid(idm[x] / oodm[x]);
    }
    return r;
}

/// True iff the two rankers order every positive-mass (ID, OOD) pair the
/// same way, ties included.
inline bool auc_equivalent(const RankingFunction& r1, const RankingFunction& r2,
                           const FiniteDomain& domain) {
    const auto idm = id_marginal_of(domain);
    const auto& oodm = domain.ood_part().raw();
    for (int x = 0; x < domain.num_points(); ++x) {
        if (idm[static_cast<std::size_t>(x)] == 0.0) continue;
        for (int xo = 0; xo < domain.num_points(); ++xo) {
            if (oodm[static_cast<std::size_t>(xo)] == 0.0) continue;
            if (sign_of(r1(x) - r1(xo)) != sign_of(r2(x) - r2(xo))) return false;
        }
    }
    return true;
}

}  // namespace oodlab

#endif
