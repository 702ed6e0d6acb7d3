#ifndef OODLAB_CONDITIONS_HPP
#define OODLAB_CONDITIONS_HPP

#include <algorithm>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "oodlab/auc.hpp"
#include "oodlab/common.hpp"
#include "oodlab/domain.hpp"
#include "oodlab/hypothesis.hpp"
#include "oodlab/risk.hpp"

namespace oodlab {

struct Witness {
    double alpha = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double gap = 0.0;
    int domain_index = -1;
    std::string note;
};

struct ConditionReport {
    std::string condition_id;
    bool holds = false;
    std::optional<Witness> witness;  // present whenever holds is false
    std::vector<std::string> rules_triggered;
    std::string notes;
};

namespace detail {

inline std::vector<int> intersect_sorted(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

}  // namespace detail

/// The affine decomposition of the alpha-risk infimum holds iff the pure ID
/// and pure OOD argmin sets intersect (infima are attained on finite spaces).
inline ConditionReport check_linear_risk(const HypothesisSpace& space, const FiniteDomain& domain,
                                         const LossTable& loss) {
    const Extremum in = inf_alpha_risk(space, domain, loss, 0.0);
    const Extremum out = inf_alpha_risk(space, domain, loss, 1.0);
    const auto common = detail::intersect_sorted(in.argset, out.argset);
    ConditionReport rep;
    rep.condition_id = "linear-risk";
    rep.holds = !common.empty();
    if (!rep.holds) {
        const Extremum mid = inf_alpha_risk(space, domain, loss, 0.5);
        Witness w;
        w.alpha = 0.5;
        w.lhs = mid.value;
        w.rhs = 0.5 * in.value + 0.5 * out.value;
        w.gap = w.lhs - w.rhs;
        w.note = "pure ID and pure OOD minimizer sets are disjoint";
        rep.witness = w;
    }
    return rep;
}

/// Multi-part version: one member must minimize the ID risk and the
/// rejection risk against every component of the OOD decomposition.
inline ConditionReport check_multilinear(const HypothesisSpace& space, const IdJoint& id_part,
                                         const std::vector<OodMarginal>& decomposition,
                                         const LossTable& loss) {
    if (decomposition.empty())
        throw DomainParameterError("check_multilinear: decomposition must be non-empty");
    const FiniteDomain pure_id(id_part, decomposition.front(), 0.0);
    Extremum in = inf_alpha_risk(space, pure_id, loss, 0.0);
    std::vector<int> common = in.argset;
    double worst_piece = 0.0;
    for (const auto& q : decomposition) {
        const FiniteDomain dq(id_part, q, 0.5);
        const Extremum out = inf_alpha_risk(space, dq, loss, 1.0);
        common = detail::intersect_sorted(common, out.argset);
        worst_piece = std::max(worst_piece, out.value);
    }
    ConditionReport rep;
    rep.condition_id = "multi-linear-risk";
    rep.holds = !common.empty();
    if (!rep.holds) {
        Witness w;
        w.alpha = 0.5;
        w.gap = worst_piece;
        w.note = "no member minimizes the ID risk and every component rejection risk";
        rep.witness = w;
    }
    return rep;
}

/// The supremum of AUC against the mixed OOD marginal must equal the mixture
/// of the pure suprema at every grid alpha.
inline ConditionReport check_linear_auc(const std::vector<RankingFunction>& space,
                                        const IdJoint& id_part, const OodMarginal& ood1,
                                        const OodMarginal& ood2,
                                        const std::vector<double>& alpha_grid) {
    if (space.empty()) throw DomainParameterError("check_linear_auc: empty ranker space");
    std::vector<double> idm(static_cast<std::size_t>(id_part.num_points()));
    for (int x = 0; x < id_part.num_points(); ++x) idm[static_cast<std::size_t>(x)] = id_part.marginal(x);

    auto sup_against = [&](const std::vector<double>& oodm) {
        double best = -1.0;
        for (const auto& r : space) best = std::max(best, auc(r, idm, oodm));
        return best;
    };
    const double sup1 = sup_against(ood1.raw());
    const double sup2 = sup_against(ood2.raw());

    ConditionReport rep;
    rep.condition_id = "linear-auc";
    rep.holds = true;
    double worst_gap = 0.0;
    for (double alpha : alpha_grid) {
        std::vector<double> mixed(idm.size());
        for (std::size_t x = 0; x < mixed.size(); ++x)
            mixed[x] = alpha * ood1.raw()[x] + (1.0 - alpha) * ood2.raw()[x];
        const double lhs = sup_against(mixed);
        const double rhs = alpha * sup1 + (1.0 - alpha) * sup2;
        if (std::abs(lhs - rhs) > kSupTol && std::abs(lhs - rhs) > worst_gap) {
            worst_gap = std::abs(lhs - rhs);
            Witness w;
            w.alpha = alpha;
            w.lhs = lhs;
            w.rhs = rhs;
            w.gap = rhs - lhs;
            w.note = "mixed-OOD supremum falls short of the mixture of pure suprema";
            rep.witness = w;
            rep.holds = false;
        }
    }
    return rep;
}

/// One member must be simultaneously epsilon-optimal for the ID risk and the
/// OOD risk of every domain in an ID-equivalence class. Exact at the limit:
/// the argmin sets must share a member.
inline ConditionReport check_compatibility(const HypothesisSpace& space,
                                           const std::vector<FiniteDomain>& equivalence_class,
                                           const LossTable& loss,
                                           const std::vector<double>& epsilon_grid = {1.0, 0.1, 0.01}) {
    if (equivalence_class.empty())
        throw DomainParameterError("check_compatibility: empty equivalence class");
    const std::string key = id_equivalence_key(equivalence_class.front());
    for (const auto& d : equivalence_class)
        if (id_equivalence_key(d) != key)
            throw DomainParameterError("check_compatibility: mixed ID-equivalence keys");

    std::vector<double> in_risks(static_cast<std::size_t>(space.size()));
    std::vector<std::vector<double>> out_risks(equivalence_class.size());
    const Extremum in = inf_alpha_risk(space, equivalence_class.front(), loss, 0.0);
    for (int i = 0; i < space.size(); ++i)
        in_risks[static_cast<std::size_t>(i)] =
            risk_in(space.member(i), equivalence_class.front(), loss);
    std::vector<double> out_infs(equivalence_class.size());
    for (std::size_t d = 0; d < equivalence_class.size(); ++d) {
        out_risks[d].resize(static_cast<std::size_t>(space.size()));
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i < space.size(); ++i) {
            out_risks[d][static_cast<std::size_t>(i)] =
                risk_out(space.member(i), equivalence_class[d], loss);
            best = std::min(best, out_risks[d][static_cast<std::size_t>(i)]);
        }
        out_infs[d] = best;
    }

    auto intersection_size = [&](double eps) {
        int count = 0;
        for (int i = 0; i < space.size(); ++i) {
            if (in_risks[static_cast<std::size_t>(i)] > in.value + eps) continue;
            bool ok = true;
            for (std::size_t d = 0; d < equivalence_class.size() && ok; ++d)
                if (out_risks[d][static_cast<std::size_t>(i)] > out_infs[d] + eps) ok = false;
            if (ok) ++count;
        }
        return count;
    };

    ConditionReport rep;
    rep.condition_id = "compatibility";
    rep.holds = intersection_size(kMassTol) > 0;
    std::ostringstream notes;
    for (double eps : epsilon_grid)
        notes << "eps=" << eps << " joint-optimal members: " << intersection_size(eps) << "; ";
    rep.notes = notes.str();
    if (!rep.holds) {
        Witness w;
        w.note = "no single member is jointly optimal across the class";
        w.domain_index = 0;
        rep.witness = w;
    }
    return rep;
}

/// Some member has exactly zero risk on the domain.
inline bool check_risk_realizability(const HypothesisSpace& space, const FiniteDomain& domain,
                                     const LossTable& loss) {
    for (const auto& h : space.members())
        if (risk(h, domain, loss) <= kMassTol) return true;
    return false;
}

/// Some ranker attains AUC exactly 1 on the domain.
inline bool check_auc_realizability(const std::vector<RankingFunction>& space,
                                    const FiniteDomain& domain) {
    for (const auto& r : space)
        if (auc(r, domain) >= 1.0 - kMassTol) return true;
    return false;
}

enum class Metric { Risk, Auc };

enum class Outcome { Learnable, NotLearnable, Undetermined };

inline std::string to_string(Outcome o) {
    switch (o) {
        case Outcome::Learnable: return "learnable";
        case Outcome::NotLearnable: return "not-learnable";
        case Outcome::Undetermined: return "undetermined";
    }
    return "?";
}

struct VerdictRecord {
    Outcome outcome = Outcome::Undetermined;
    std::vector<std::string> premises;  // the rule hypotheses that fired, verbatim
    std::string note;                   // why nothing fired, when undetermined
    std::vector<ConditionReport> reports;
};

namespace detail {

inline std::vector<std::vector<const FiniteDomain*>> group_by_id_key(
    const std::vector<FiniteDomain>& members) {
    std::vector<std::string> keys;
    std::vector<std::vector<const FiniteDomain*>> groups;
    for (const auto& d : members) {
        const std::string k = id_equivalence_key(d);
        bool placed = false;
        for (std::size_t i = 0; i < keys.size(); ++i)
            if (keys[i] == k) {
                groups[i].push_back(&d);
                placed = true;
                break;
            }
        if (!placed) {
            keys.push_back(k);
            groups.push_back({&d});
        }
    }
    return groups;
}

}  // namespace detail

/// Decision table over the learnability rules this library implements. The
/// verdict never extrapolates past a rule's hypotheses; when nothing fires
/// the outcome is undetermined with the reports attached.
inline VerdictRecord learnability_verdict(const DomainSpaceSpec& spec, const HypothesisSpace& space,
                                          const LossTable& loss) {
    spec.validate();
    VerdictRecord v;

    // Overlap with vanishing pure infima forces a strict alpha-risk gap.
    for (std::size_t i = 0; i < spec.members.size(); ++i) {
        const auto& d = spec.members[i];
        if (overlap_set(d).empty()) continue;
        const Extremum in = inf_alpha_risk(space, d, loss, 0.0);
        const Extremum out = inf_alpha_risk(space, d, loss, 1.0);
        if (in.value <= kMassTol && out.value <= kMassTol) {
            v.outcome = Outcome::NotLearnable;
            v.premises.push_back(
                "a member domain has ID/OOD overlap and both pure risk infima vanish, so the "
                "alpha-risk infimum exceeds every affine decomposition (member " +
                std::to_string(i) + ")");
            auto rep = check_linear_risk(space, d, loss);
            rep.rules_triggered.push_back("overlap-impossibility");
            v.reports.push_back(std::move(rep));
            return v;
        }
    }

    // Total space with a phi-nontrivial space is out immediately.
    if (spec.kind == DomainSpaceKind::Total) {
        if (phi_project(space).size() > 1) {
            v.outcome = Outcome::NotLearnable;
            v.premises.push_back(
                "the space of all domains contains an overlap construction whenever the "
                "accept/reject projection has more than one member");
            return v;
        }
        v.outcome = Outcome::Undetermined;
        v.note = "accept/reject projection is trivial; no rule applies";
        return v;
    }

    // The affine decomposition must hold at every member; a violation is
    // already a counterexample to learnability.
    for (std::size_t i = 0; i < spec.members.size(); ++i) {
        auto rep = check_linear_risk(space, spec.members[i], loss);
        if (!rep.holds) {
            rep.rules_triggered.push_back("linear-risk-necessity");
            v.reports.push_back(std::move(rep));
            v.outcome = Outcome::NotLearnable;
            v.premises.push_back("the affine alpha-risk decomposition fails at member " +
                                 std::to_string(i));
            return v;
        }
    }

    if (spec.kind == DomainSpaceKind::Single) {
        v.outcome = Outcome::Learnable;
        v.premises.push_back(
            "single-distribution space: the affine alpha-risk decomposition holds at the domain, "
            "which is equivalent to learnability there");
        return v;
    }

    if (spec.kind == DomainSpaceKind::Separate) {
        if (space.k() == 1) {
            const bool sep = check_separate_assumption(space);
            const bool has_const_id = space.contains(constant_hypothesis(space.num_points(), 1, 1));
            const auto all = exhaustive_space(space.num_points(), 1);
            bool almost_all = true;
            const Hypothesis all_reject = constant_hypothesis(space.num_points(), 1, 2);
            for (const auto& h : all.members())
                if (!(h == all_reject) && !space.contains(h)) {
                    almost_all = false;
                    break;
                }
            if (almost_all) {
                v.outcome = Outcome::Learnable;
                v.premises.push_back(
                    "one-class separate space: the space contains every labeling except possibly "
                    "the all-reject constant, which suffices (nearest-neighbor threshold rule)");
                return v;
            }
            if (sep && has_const_id) {
                v.outcome = Outcome::NotLearnable;
                v.premises.push_back(
                    "one-class separate space with per-point rejection and the all-ID constant: "
                    "learnability requires every labeling except the all-reject constant, and "
                    "some labeling is missing");
                return v;
            }
        }
        v.outcome = Outcome::Undetermined;
        v.note = "separate space: no implemented rule decides this space/hypothesis pair";
        return v;
    }

    if (spec.kind == DomainSpaceKind::FiniteID) {
        bool all_hold = true;
        for (const auto& group : detail::group_by_id_key(spec.members)) {
            std::vector<FiniteDomain> cls;
            cls.reserve(group.size());
            for (const auto* d : group) cls.push_back(*d);
            auto rep = check_compatibility(space, cls, loss);
            rep.rules_triggered.push_back("finite-id-compatibility");
            if (!rep.holds) all_hold = false;
            v.reports.push_back(std::move(rep));
        }
        v.outcome = all_hold ? Outcome::Learnable : Outcome::NotLearnable;
        v.premises.push_back(all_hold
                                 ? "finite-ID space: one member is jointly optimal within every "
                                   "ID-equivalence class (compatibility holds)"
                                 : "finite-ID space: compatibility fails on some ID-equivalence "
                                   "class, which learnability requires");
        return v;
    }

    // Density-based space.
    bool realizable = true;
    for (const auto& d : spec.members)
        if (!check_risk_realizability(space, d, loss)) {
            realizable = false;
            break;
        }
    const bool generated = space.provenance() == Provenance::FcnnInduced ||
                           space.provenance() == Provenance::ScoreInduced;
    if (realizable) {
        const int nat = natarajan_dimension(space);
        v.outcome = Outcome::Learnable;
        v.premises.push_back(
            "density-based space: zero-risk members exist for every member domain and the "
            "multiclass dimension is finite (" +
            std::to_string(nat) + "), so the constrained rejection rule is consistent");
        return v;
    }
    if (generated && space.k() == 1) {
        v.outcome = Outcome::NotLearnable;
        v.premises.push_back(
            "density-based space with a one-class network/score space: zero-risk realizability "
            "fails for some member, and realizability is equivalent to learnability here");
        return v;
    }
    v.outcome = Outcome::Undetermined;
    v.note = "density-based space: realizability fails and no equivalence rule covers this space";
    return v;
}

/// AUC-side decision table.
inline VerdictRecord learnability_verdict_auc(const DomainSpaceSpec& spec,
                                              const std::vector<RankingFunction>& rankers) {
    spec.validate();
    VerdictRecord v;

    // Pairwise mixture linearity is necessary; a grid violation decides.
    for (std::size_t i = 0; i < spec.members.size(); ++i)
        for (std::size_t j = 0; j < spec.members.size(); ++j) {
            if (i == j) continue;
            const auto& a = spec.members[i];
            const auto& b = spec.members[j];
            if (!a.id_part().equal_within(b.id_part())) continue;
            auto rep = check_linear_auc(rankers, a.id_part(), a.ood_part(), b.ood_part(),
                                        {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9});
            if (!rep.holds) {
                rep.rules_triggered.push_back("linear-auc-necessity");
                v.reports.push_back(std::move(rep));
                v.outcome = Outcome::NotLearnable;
                v.premises.push_back("the AUC mixture linearity fails between members " +
                                     std::to_string(i) + " and " + std::to_string(j));
                return v;
            }
        }

    if (spec.kind == DomainSpaceKind::Separate) {
        if (check_separate_ranking(rankers)) {
            bool realizable = true;
            for (const auto& d : spec.members)
                if (!check_auc_realizability(rankers, d)) {
                    realizable = false;
                    break;
                }
            v.outcome = realizable ? Outcome::Learnable : Outcome::NotLearnable;
            v.premises.push_back(
                realizable ? "separate space with a separate ranking space on a finite X: a "
                             "perfect ranker exists for every member"
                           : "separate space with a separate ranking space on a finite X: some "
                             "member admits no perfect ranker, which learnability requires");
            return v;
        }
        v.outcome = Outcome::Undetermined;
        v.note = "separate space: the ranking space is not separate; no rule applies";
        return v;
    }

    if (spec.kind == DomainSpaceKind::FiniteID) {
        // No compatibility analogue is known for AUC on finite-ID spaces.
        v.outcome = Outcome::Undetermined;
        v.note = "finite-ID space under AUC: no implemented rule decides this space (a "
                 "compatibility analogue is an open question)";
        return v;
    }

    if (spec.kind == DomainSpaceKind::DensityBased) {
        bool realizable = true;
        for (const auto& d : spec.members)
            if (!check_auc_realizability(rankers, d)) {
                realizable = false;
                break;
            }
        if (check_separate_ranking(rankers) && realizable) {
            v.outcome = Outcome::Learnable;
            v.premises.push_back(
                "density-based space: the ranking space is separate and every member admits a "
                "perfect ranker, so the constrained threshold rule is consistent");
            return v;
        }
        v.outcome = Outcome::Undetermined;
        v.note = "density-based space under AUC: sufficiency premises do not all hold; no rule "
                 "applies";
        return v;
    }

    v.outcome = Outcome::Undetermined;
    v.note = "no AUC rule applies to this space kind";
    return v;
}

}  // namespace oodlab

#endif
