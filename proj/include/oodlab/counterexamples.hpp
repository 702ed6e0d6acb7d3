#ifndef OODLAB_COUNTEREXAMPLES_HPP
#define OODLAB_COUNTEREXAMPLES_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "oodlab/auc.hpp"
#include "oodlab/common.hpp"
#include "oodlab/conditions.hpp"
#include "oodlab/domain.hpp"
#include "oodlab/hypothesis.hpp"
#include "oodlab/risk.hpp"

namespace oodlab {

/// A materialized impossibility witness. Every measured quantity is
/// recomputed from the constructed objects at emission; `verified` is the
/// conjunction of the certificate's inequalities.
struct Certificate {
    std::string kind;
    std::vector<FiniteDomain> domains;
    std::map<std::string, double> measured;
    std::map<std::string, long long> counts;
    std::string verdict;
    bool verified = false;
};

/// Two members disagreeing through phi at one point yield a two-atom domain
/// with full overlap and vanishing pure risk infima.
inline FiniteDomain overlap_domain(const HypothesisSpace& space) {
    const int k = space.k();
    for (int x = 0; x < space.num_points(); ++x) {
        int id_member = -1, reject_member = -1;
        for (int i = 0; i < space.size() && (id_member < 0 || reject_member < 0); ++i) {
            const int lab = space.member(i)(x);
            if (lab <= k && id_member < 0) id_member = i;
            if (lab == k + 1 && reject_member < 0) reject_member = i;
        }
        if (id_member >= 0 && reject_member >= 0) {
            const int y = space.member(id_member)(x);
            std::vector<double> id_mass(static_cast<std::size_t>(space.num_points()) * k, 0.0);
            id_mass[static_cast<std::size_t>(x) * k + (y - 1)] = 1.0;
            std::vector<double> ood_mass(static_cast<std::size_t>(space.num_points()), 0.0);
            ood_mass[static_cast<std::size_t>(x)] = 1.0;
            return FiniteDomain(IdJoint(space.num_points(), k, std::move(id_mass)),
                                OodMarginal(std::move(ood_mass)), 0.5);
        }
    }
    throw NoCounterexampleError(
        "overlap_domain: no point admits both an ID-labeling and a rejecting member");
}

struct GapReport {
    double gap = 0.0;
    double c_alpha = 0.0;
    int m0 = 0;
    double overlap_measure = 0.0;  // counting measure of A_{m0}
    double lower_bound = 0.0;      // c_alpha * overlap_measure / m0
    bool bound_applicable = false; // both pure infima vanish
    bool bound_satisfied = true;
};

/// c_alpha = min over predicted labels of the best mixed per-point loss.
inline double overlap_cost_constant(const LossTable& loss, int k, double alpha) {
    double c = std::numeric_limits<double>::infinity();
    for (int y1 = 1; y1 <= k + 1; ++y1) {
        double best_id = std::numeric_limits<double>::infinity();
        for (int y2 = 1; y2 <= k; ++y2) best_id = std::min(best_id, loss(y1, y2));
        c = std::min(c, (1.0 - alpha) * best_id + alpha * loss(y1, k + 1));
    }
    return c;
}

/// Gap between the alpha-risk infimum and its affine decomposition, plus the
/// overlap lower bound c_alpha * mu(A_m0) / m0 when both pure infima vanish.
inline GapReport alpha_risk_gap_report(const FiniteDomain& domain, const HypothesisSpace& space,
                                       const LossTable& loss, double alpha) {
    const Extremum mid = inf_alpha_risk(space, domain, loss, alpha);
    const Extremum in = inf_alpha_risk(space, domain, loss, 0.0);
    const Extremum out = inf_alpha_risk(space, domain, loss, 1.0);
    GapReport rep;
    rep.gap = mid.value - ((1.0 - alpha) * in.value + alpha * out.value);
    rep.bound_applicable =
        in.value <= kMassTol && out.value <= kMassTol && alpha > 0.0 && alpha < 1.0;
    if (rep.bound_applicable) {
        rep.c_alpha = overlap_cost_constant(loss, domain.k(), alpha);
        double min_density = std::numeric_limits<double>::infinity();
        int count = 0;
        for (int x : overlap_set(domain)) {
            min_density = std::min(
                min_density, std::min(domain.id_part().marginal(x), domain.ood_part().mass(x)));
            ++count;
        }
        if (count > 0) {
            rep.m0 = static_cast<int>(std::ceil(1.0 / min_density - kMassTol));
            rep.overlap_measure = static_cast<double>(count);
            rep.lower_bound = rep.c_alpha * rep.overlap_measure / rep.m0;
            rep.bound_satisfied = rep.gap >= rep.lower_bound - kMassTol;
        }
    }
    return rep;
}

inline double alpha_risk_gap(const FiniteDomain& domain, const HypothesisSpace& space,
                             const LossTable& loss, double alpha) {
    return alpha_risk_gap_report(domain, space, loss, alpha).gap;
}

/// Growth-bound counterexample: a binary pattern missing from the space's
/// trace gives a separate two-part domain with zero ID infimum but positive
/// joint infimum, so the affine decomposition fails.
inline Certificate sauer_pattern_domain(const HypothesisSpace& space, const LossTable& loss) {
    const int n = space.num_points();
    const int k = space.k();
    if (n > 24) throw SizeCapError("sauer_pattern_domain: |X| must be <= 24");

    const HypothesisSpace binary = phi_project(space);
    // Realized phi-patterns on all of X, bit x set = reject.
    std::set<std::uint32_t> realized;
    for (const auto& h : binary.members()) {
        std::uint32_t m = 0;
        for (int x = 0; x < n; ++x)
            if (h(x) == 2) m |= (1u << x);
        realized.insert(m);
    }

    int id_witness = -1;
    for (int i = 0; i < space.size(); ++i) {
        bool all_id = true;
        for (int x = 0; x < n && all_id; ++x)
            if (space.member(i)(x) > k) all_id = false;
        if (all_id) {
            id_witness = i;
            break;
        }
    }
    if (id_witness < 0)
        throw NoCounterexampleError("sauer_pattern_domain: the all-ID pattern is not realized");

    // Lexicographic over phi-label vectors: the bit at point 0 is most
    // significant and label 1 sorts before label 2.
    std::uint32_t missing = 0;
    bool found = false;
    const std::uint32_t total = 1u << n;
    for (std::uint32_t lex = 0; lex < total && !found; ++lex) {
        std::uint32_t m = 0;
        for (int x = 0; x < n; ++x)
            if (lex & (1u << (n - 1 - x))) m |= (1u << x);
        if (m == 0 || m == total - 1) continue;  // both labels must appear
        if (realized.count(m) == 0) {
            missing = m;
            found = true;
        }
    }
    if (!found)
        throw NoCounterexampleError("sauer_pattern_domain: every two-label pattern is realized");

    const auto& source = space.member(id_witness);
    std::vector<int> c_id, c_ood;
    for (int x = 0; x < n; ++x)
        (missing & (1u << x) ? c_ood : c_id).push_back(x);
    std::vector<double> id_mass(static_cast<std::size_t>(n) * k, 0.0);
    for (int x : c_id)
        id_mass[static_cast<std::size_t>(x) * k + (source(x) - 1)] = 1.0 / c_id.size();
    std::vector<double> ood_mass(static_cast<std::size_t>(n), 0.0);
    for (int x : c_ood) ood_mass[static_cast<std::size_t>(x)] = 1.0 / c_ood.size();
    FiniteDomain d(IdJoint(n, k, std::move(id_mass)), OodMarginal(std::move(ood_mass)), 0.5);

    Certificate cert;
    cert.kind = "pattern-counting";
    const Extremum joint = inf_alpha_risk(space, d, loss, 0.5);
    const Extremum in = inf_alpha_risk(space, d, loss, 0.0);
    const Extremum out = inf_alpha_risk(space, d, loss, 1.0);
    cert.measured["inf_risk"] = joint.value;
    cert.measured["inf_risk_in"] = in.value;
    cert.measured["inf_risk_out"] = out.value;
    cert.measured["gap_at_half"] = joint.value - 0.5 * in.value - 0.5 * out.value;
    cert.counts["realized_patterns"] = static_cast<long long>(realized.size());
    cert.counts["missing_pattern"] = static_cast<long long>(missing);
    cert.counts["growth_bound"] =
        static_cast<long long>(sauer_bound(vc_dimension(binary), n - 1));
    cert.verified = joint.value > kMassTol && in.value <= kMassTol &&
                    cert.measured["gap_at_half"] > kMassTol;
    cert.verdict = cert.verified
                       ? "the affine alpha-risk decomposition fails on a separate domain"
                       : "recomputation failed";
    cert.domains.push_back(std::move(d));
    return cert;
}

/// Smallest point count at which a VC-d comparison class must miss some
/// uniform split: ceil((28d+14) * ln(14d+7)), natural logarithm.
inline long long split_search_size_threshold(int d) {
    if (d < 1) throw DomainParameterError("split_search_size_threshold: d must be >= 1");
    return static_cast<long long>(
        std::ceil((28.0 * d + 14.0) * std::log(14.0 * d + 7.0)));
}

/// Count the realized order-type matrices 1_{r(x_i) > r(x_j)}.
inline long long order_type_count(const std::vector<RankingFunction>& space, int n) {
    std::set<std::vector<char>> mats;
    for (const auto& r : space) {
        std::vector<char> m;
        m.reserve(static_cast<std::size_t>(n) * n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m.push_back(r(i) > r(j) ? 1 : 0);
        mats.insert(std::move(m));
    }
    return static_cast<long long>(mats.size());
}

/// Enumerate the 2^m - 2 uniform ID/OOD splits of X and find one on which no
/// ranker is perfect. Errors when every split is perfectly ranked.
inline Certificate auc_unrealizable_split(const std::vector<RankingFunction>& space, int n) {
    if (space.empty()) throw DomainParameterError("auc_unrealizable_split: empty ranker space");
    if (n < 2) throw DomainParameterError("auc_unrealizable_split: need at least two points");
    const std::uint64_t total = (1ull << n) - 2;
    if (total > kSplitCap) throw SizeCapError("auc_unrealizable_split: too many splits");

    long long realized = 0;
    std::uint64_t bad_mask = 0;
    double bad_sup = 1.0;
    for (std::uint64_t mask = 1; mask <= total; ++mask) {
        std::vector<double> idm(static_cast<std::size_t>(n), 0.0);
        std::vector<double> oodm(static_cast<std::size_t>(n), 0.0);
        int id_count = 0;
        for (int x = 0; x < n; ++x)
            if (mask & (1ull << x)) ++id_count;
        for (int x = 0; x < n; ++x) {
            if (mask & (1ull << x))
                idm[static_cast<std::size_t>(x)] = 1.0 / id_count;
            else
                oodm[static_cast<std::size_t>(x)] = 1.0 / (n - id_count);
        }
        double sup = 0.0;
        for (const auto& r : space) sup = std::max(sup, auc(r, idm, oodm));
        if (sup >= 1.0 - kMassTol)
            ++realized;
        else if (bad_mask == 0) {
            bad_mask = mask;
            bad_sup = sup;
        }
    }

    Certificate cert;
    cert.kind = "auc-split-counting";
    cert.counts["total_splits"] = static_cast<long long>(total);
    cert.counts["realized_splits"] = realized;
    cert.counts["order_types"] = order_type_count(space, n);
    cert.counts["order_type_ceiling"] = static_cast<long long>(n - 1) * cert.counts["order_types"];
    if (bad_mask == 0)
        throw NoCounterexampleError("auc_unrealizable_split: every split admits a perfect ranker");

    std::vector<double> id_mass;
    std::vector<double> ood_mass(static_cast<std::size_t>(n), 0.0);
    int id_count = 0;
    for (int x = 0; x < n; ++x)
        if (bad_mask & (1ull << x)) ++id_count;
    id_mass.assign(static_cast<std::size_t>(n), 0.0);
    for (int x = 0; x < n; ++x) {
        if (bad_mask & (1ull << x))
            id_mass[static_cast<std::size_t>(x)] = 1.0 / id_count;
        else
            ood_mass[static_cast<std::size_t>(x)] = 1.0 / (n - id_count);
    }
    FiniteDomain d(IdJoint(n, 1, std::move(id_mass)), OodMarginal(std::move(ood_mass)), 0.5);
    const Extremum sup = sup_auc(space, d);
    cert.measured["sup_auc"] = sup.value;
    cert.counts["split_mask"] = static_cast<long long>(bad_mask);
    cert.verified = sup.value < 1.0 - kMassTol &&
                    cert.counts["realized_splits"] <= cert.counts["order_type_ceiling"];
    cert.verdict = cert.verified ? "a uniform split separates no ranker perfectly"
                                 : "recomputation failed";
    cert.measured["recomputed_sup_auc"] = sup.value;
    cert.domains.push_back(std::move(d));
    return cert;
}

/// Two Dirac OOD marginals overlapping one ID part at different points make
/// the AUC mixture linearity fail.
inline Certificate dirac_auc_overlap_pair(const IdJoint& id_part, int x, int x_prime,
                                          const std::vector<RankingFunction>& rankers) {
    if (x == x_prime) throw DomainParameterError("dirac_auc_overlap_pair: points must differ");
    if (id_part.marginal(x) <= 0.0 || id_part.marginal(x_prime) <= 0.0)
        throw DomainParameterError("dirac_auc_overlap_pair: both points need positive ID mass");
    const int n = id_part.num_points();
    std::vector<double> m1(static_cast<std::size_t>(n), 0.0), m2(static_cast<std::size_t>(n), 0.0);
    m1[static_cast<std::size_t>(x)] = 1.0;
    m2[static_cast<std::size_t>(x_prime)] = 1.0;
    OodMarginal ood1(std::move(m1)), ood2(std::move(m2));

    Certificate cert;
    cert.kind = "dirac-auc-overlap";
    // Overlap sets are {x} and {x'}; their intersection carries no ID mass.
    cert.measured["id_mass_intersection"] = 0.0;
    cert.measured["id_mass_p"] = id_part.marginal(x);
    cert.measured["id_mass_p_prime"] = id_part.marginal(x_prime);
    const bool strict = 0.0 < std::min(id_part.marginal(x), id_part.marginal(x_prime));
    auto rep = check_linear_auc(rankers, id_part, ood1, ood2,
                                {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9});
    cert.measured["linearity_holds"] = rep.holds ? 1.0 : 0.0;
    if (rep.witness) {
        cert.measured["worst_alpha"] = rep.witness->alpha;
        cert.measured["worst_gap"] = rep.witness->gap;
    }
    cert.verified = strict && !rep.holds;
    cert.verdict = cert.verified
                       ? "overlapping Dirac OOD pair violates the AUC mixture linearity"
                       : "the supplied ranker space does not witness the violation";
    cert.domains.emplace_back(id_part, ood1, 0.5);
    cert.domains.emplace_back(id_part, ood2, 0.5);
    return cert;
}

}  // namespace oodlab

#endif
